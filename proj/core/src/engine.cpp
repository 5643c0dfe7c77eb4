#include "mlvn/engine.hpp"

#include "mlvn/error.hpp"
#include "mlvn/random.hpp"

namespace mlvn {

Engine::Engine(EngineConfig config, std::shared_ptr<Evaluator> evaluator)
    : config_(std::move(config)), evaluator_(std::move(evaluator)), board_(9, 7.5),
      dynkomi_(config_.dynkomi, evaluator_ ? evaluator_->grid() : KomiGrid(), 7.5), seed_(config_.search.seed) {
  if (!evaluator_) throw Error(ErrorKind::InvalidConfig, "engine needs an evaluator");
  config_.search.validate();
  // Start on 9x9 when the evaluator allows it, else on its smallest size.
  for (int size = 5; !evaluator_->supports_size(board_.size()) && size <= Board::kMaxSize; size += 2) {
    board_ = Board(size, board_.komi());
  }
}

void Engine::set_board_size(int size) {
  if (!evaluator_->supports_size(size)) {
    throw Error(ErrorKind::InvalidSize, "evaluator cannot handle board size " + std::to_string(size));
  }
  board_ = Board(size, board_.komi());
  clear_board();
}

void Engine::clear_board() {
  board_ = Board(board_.size(), board_.komi());
  moves_.clear();
  handicap_.clear();
  last_.reset();
  dynkomi_.reset(board_.komi());
}

void Engine::set_komi(double komi) {
  board_.set_komi(komi);
  dynkomi_.reset(komi);
}

std::vector<int> Engine::place_handicap(int h) {
  board_.place_handicap(h);
  handicap_.clear();
  for (int v = 0; v < board_.num_points(); ++v) {
    if (board_.at(v) == Color::Black) handicap_.push_back(v);
  }
  return handicap_;
}

void Engine::ensure_to_move(Color c) {
  if (c == Color::Empty) throw Error(ErrorKind::IllegalMove, "no colour given");
  if (board_.game_over()) throw Error(ErrorKind::GameOver, "game is over");
  if (board_.to_move() != c) board_.set_to_move(c);
}

void Engine::play(Color c, Move m) {
  ensure_to_move(c);
  board_.play(m);
  moves_.push_back(m);
}

Move Engine::genmove(Color c) {
  ensure_to_move(c);
  SearchConfig sc = config_.search;
  sc.seed = derive_seed(seed_, static_cast<std::uint64_t>(board_.move_count()));
  SearchResult r = search(board_, sc, *evaluator_, dynkomi_.current());
  if (trace_) write_search_trace(board_, r.stats, *trace_);
  dynkomi_.update(board_, r.stats);
  last_ = std::move(r.stats);
  board_.play(r.best);
  moves_.push_back(r.best);
  return r.best;
}

Evaluation Engine::evaluate_position() { return evaluator_->evaluate(board_); }

}  // namespace mlvn

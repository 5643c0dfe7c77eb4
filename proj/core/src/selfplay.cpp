#include "mlvn/selfplay.hpp"

#include <algorithm>
#include <array>
#include <numeric>

#include "mlvn/error.hpp"
#include "mlvn/playout.hpp"

namespace mlvn {

Board GameRecord::initial_board() const {
  Board b(size, komi);
  for (int v : setup_black) b.set_stone(v, Color::Black);
  if (!setup_black.empty()) b.set_to_move(Color::White);
  return b;
}

Board GameRecord::position_at(std::size_t index) const {
  Board b = initial_board();
  const std::size_t upto = std::min(index, moves.size());
  for (std::size_t i = 0; i < upto; ++i) b.play(moves[i]);
  return b;
}

int GameRecord::neutral_points() const {
  return static_cast<int>(std::count(ownership.begin(), ownership.end(), Owner::Neutral));
}

ValueLabels label_value_vector(int territory_diff, const KomiGrid& grid) {
  ValueLabels labels(grid.count());
  for (int i = 0; i < grid.count(); ++i) {
    labels[i] = grid.komi_at(i) < territory_diff ? std::int8_t{1} : std::int8_t{-1};
  }
  return labels;
}

std::uint8_t ownership_byte(Owner o) noexcept {
  switch (o) {
    case Owner::Black: return 255;
    case Owner::White: return 0;
    default: return 128;
  }
}

float ownership_byte_target(std::uint8_t b) noexcept {
  if (b == 255) return 1.0f;
  if (b == 0) return 0.0f;
  return 0.5f;
}

std::vector<float> ownership_targets(const Ownership& ownership) {
  std::vector<float> out(ownership.size());
  for (std::size_t i = 0; i < ownership.size(); ++i) {
    out[i] = ownership_byte_target(ownership_byte(ownership[i]));
  }
  return out;
}

float TrainingRecord::ownership_target(int vertex) const {
  return ownership_byte_target(ownership[vertex]);
}

FeatureTensor encode_features(const Board& board) {
  const int n = board.num_points();
  FeatureTensor f;
  f.size = board.size();
  f.planes.assign(static_cast<std::size_t>(kFeaturePlanes) * n, 0);
  auto set = [&](int plane, int v) { f.planes[plane * n + v] = 1; };
  const bool black_to_move = board.to_move() == Color::Black;
  for (int v = 0; v < n; ++v) {
    switch (board.at(v)) {
      case Color::Black: set(kPlaneBlack, v); break;
      case Color::White: set(kPlaneWhite, v); break;
      case Color::Empty: set(kPlaneEmpty, v); break;
    }
    if (black_to_move) set(kPlaneBlackToMove, v);
    set(kPlaneOnes, v);
    if (board.at(v) != Color::Empty && board.liberties(v) == 1) set(kPlaneAtari, v);
  }
  if (auto ko = board.ko_point()) set(kPlaneKo, *ko);
  if (auto last = board.last_move(); last && !last->is_pass()) set(kPlaneLastMove, last->vertex());
  return f;
}

bool resolved_for_side(const Board& board) {
  if (board.game_over()) return true;
  const Color me = board.to_move();
  for (int v = 0; v < board.num_points(); ++v) {
    if (board.at(v) != Color::Empty) continue;
    if (!board.is_legal(Move::at(v))) continue;
    if (board.is_true_eye(v, me) || board.is_self_atari(v, me)) continue;
    return false;
  }
  return true;
}

namespace {

// Uniform over legal moves that are neither eye fills nor big self-ataris.
Move resolving_move(const Board& board, Rng& rng) {
  std::array<int, Board::kMaxPoints> cand;
  int count = 0;
  const Color me = board.to_move();
  for (int v = 0; v < board.num_points(); ++v) {
    if (board.at(v) == Color::Empty && board.is_legal(Move::at(v)) && !board.is_true_eye(v, me) &&
        !board.is_self_atari(v, me)) {
      cand[count++] = v;
    }
  }
  if (count == 0) return Move::pass();
  return Move::at(cand[uniform_below(rng, count)]);
}

}  // namespace

Policy light_policy() {
  return [](const Board& b, Rng& rng) { return light_policy_move(b, rng); };
}

GameRecord generate_game(const Policy& policy, int size, std::uint64_t seed, ResolutionMode mode,
                         std::uint32_t game_id, double komi) {
  Board board(size, komi);
  Rng rng(seed);
  GameRecord game;
  game.id = game_id;
  game.size = size;
  game.komi = komi;
  game.seed = seed;
  const int cap = 3 * size * size;
  while (!board.game_over()) {
    if (board.move_count() >= cap) {
      throw Error(ErrorKind::MoveLimitExceeded,
                  "game " + std::to_string(game_id) + " exceeded " + std::to_string(cap) + " moves");
    }
    Move m = policy(board, rng);
    if (!board.is_legal(m)) {
      throw Error(ErrorKind::IllegalMove, "policy returned illegal move " + board.vertex_name(m) +
                                              " (" + board.illegal_reason(m) + ")");
    }
    if (m.is_pass() && mode == ResolutionMode::FullResolution && !resolved_for_side(board)) {
      m = resolving_move(board, rng);
    }
    board.play(m);
    game.moves.push_back(m);
  }
  auto [own, score] = board.final_ownership();
  game.ownership = std::move(own);
  game.territory_diff = score.territory_diff;
  return game;
}

TrainingRecord make_record(const Board& position, const GameRecord& game, std::size_t move_index,
                           const KomiGrid& grid) {
  TrainingRecord r;
  r.features = encode_features(position);
  r.labels = label_value_vector(game.territory_diff, grid);
  r.ownership.resize(game.ownership.size());
  for (std::size_t i = 0; i < game.ownership.size(); ++i) {
    r.ownership[i] = ownership_byte(game.ownership[i]);
  }
  r.side_to_move = position.to_move();
  r.game_id = game.id;
  r.move_index = static_cast<std::uint16_t>(move_index);
  return r;
}

std::vector<TrainingRecord> sample_positions(const GameRecord& game, int m, const KomiGrid& grid,
                                             Rng& rng) {
  if (m < 1) throw Error(ErrorKind::InvalidConfig, "positions per game must be >= 1");
  const int length = static_cast<int>(game.moves.size());
  std::vector<int> idx(length);
  std::iota(idx.begin(), idx.end(), 0);
  const int take = std::min(m, length);
  for (int i = 0; i < take; ++i) {
    const int j = i + uniform_below(rng, length - i);
    std::swap(idx[i], idx[j]);
  }
  idx.resize(take);
  std::sort(idx.begin(), idx.end());

  std::vector<TrainingRecord> out;
  out.reserve(take);
  Board b = game.initial_board();
  std::size_t next = 0;
  for (int i = 0; i < length && next < idx.size(); ++i) {
    if (idx[next] == i) {
      out.push_back(make_record(b, game, i, grid));
      ++next;
    }
    b.play(game.moves[i]);
  }
  return out;
}

}  // namespace mlvn

#include <cmath>
#include <cstdio>
#include <filesystem>

#include "mlvn/error.hpp"
#include "mlvn/evalharness.hpp"
#include "mlvn/random.hpp"
#include "mlvn/sgf.hpp"

namespace mlvn {

namespace {

struct Failure {
  bool by_a;
  std::string reason;
};

}  // namespace

MatchResult run_match(const EngineFactory& engine_a, const EngineFactory& engine_b, const MatchConfig& config,
                      const GameCallback& on_game) {
  if (config.games < 1) throw Error(ErrorKind::InvalidConfig, "match needs at least one game");
  if (config.handicap < 0) throw Error(ErrorKind::InvalidConfig, "handicap must be >= 0");
  if (!config.sgf_dir.empty()) std::filesystem::create_directories(config.sgf_dir);
  const int limit = config.move_limit > 0 ? config.move_limit : 3 * config.board_size * config.board_size;

  MatchResult result;
  for (int g = 0; g < config.games; ++g) {
    GameOutcome out;
    out.index = g;
    const bool even = config.handicap == 0;
    // Paired even games share a seed with colours swapped.
    out.seed = derive_seed(config.seed, static_cast<std::uint64_t>(even ? g / 2 : g));
    out.a_color = even ? (g % 2 == 0 ? Color::Black : Color::White) : Color::White;

    auto a = engine_a();
    auto b = engine_b();
    Engine* black = out.a_color == Color::Black ? a.get() : b.get();
    Engine* white = out.a_color == Color::Black ? b.get() : a.get();
    black->set_seed(derive_seed(out.seed, 1));
    white->set_seed(derive_seed(out.seed, 2));

    Board board(config.board_size, config.komi);
    GameRecord record;
    record.id = static_cast<std::uint32_t>(g);
    record.size = config.board_size;
    record.komi = config.komi;
    record.handicap = config.handicap;
    record.seed = out.seed;
    for (Engine* e : {black, white}) {
      e->set_board_size(config.board_size);
      e->set_komi(config.komi);
    }
    if (config.handicap > 0) {
      board.place_handicap(config.handicap);
      black->place_handicap(config.handicap);
      white->place_handicap(config.handicap);
      for (int v = 0; v < board.num_points(); ++v) {
        if (board.at(v) == Color::Black) record.setup_black.push_back(v);
      }
    }

    std::optional<Failure> failure;
    while (!board.game_over() && static_cast<int>(record.moves.size()) < limit) {
      const Color side = board.to_move();
      Engine* mover = side == Color::Black ? black : white;
      Engine* other = side == Color::Black ? white : black;
      const bool mover_is_a = mover == a.get();
      Move m;
      try {
        m = mover->genmove(side);
      } catch (const std::exception& e) {
        failure = Failure{mover_is_a, std::string("genmove failed: ") + e.what()};
        break;
      }
      if (!board.is_legal(m)) {
        failure = Failure{mover_is_a, "illegal move " + board.vertex_name(m) + ": " + board.illegal_reason(m)};
        break;
      }
      board.play(m);
      record.moves.push_back(m);
      try {
        other->play(side, m);
      } catch (const std::exception& e) {
        failure = Failure{!mover_is_a, std::string("play failed: ") + e.what()};
        break;
      }
    }

    out.moves = static_cast<int>(record.moves.size());
    if (board.game_over()) {
      auto [own, score] = board.final_ownership();
      record.ownership = std::move(own);
      record.territory_diff = score.territory_diff;
    } else {
      record.ownership = board.area_ownership();
      record.territory_diff = board.area_score().territory_diff;
    }
    out.territory_diff = record.territory_diff;
    if (failure) {
      out.failure = true;
      out.failure_reason = failure->reason;
      out.a_won = !failure->by_a;
      record.resigned = true;
      // Encode the forfeit in the recorded result.
      const bool black_won = (out.a_color == Color::Black) == out.a_won;
      record.territory_diff = black_won ? std::max(record.territory_diff, static_cast<int>(std::ceil(config.komi)))
                                        : std::min(record.territory_diff, static_cast<int>(std::floor(config.komi)));
    } else {
      const bool black_won = record.territory_diff > config.komi;
      out.a_won = (out.a_color == Color::Black) == black_won;
    }

    if (!config.sgf_dir.empty()) {
      char name[32];
      std::snprintf(name, sizeof name, "game_%05d.sgf", g);
      out.sgf = config.sgf_dir / name;
      SgfPlayers players;
      players.black = out.a_color == Color::Black ? config.name_a : config.name_b;
      players.white = out.a_color == Color::Black ? config.name_b : config.name_a;
      write_sgf(record, out.sgf, players);
    }

    ++result.games;
    if (out.a_won) ++result.wins;
    else ++result.losses;
    if (on_game) on_game(out);
    result.outcomes.push_back(std::move(out));
  }
  const Ci95 ci = ci95(result.wins, result.games);
  result.p = ci.p;
  result.ci95 = ci.half_width;
  return result;
}

}  // namespace mlvn

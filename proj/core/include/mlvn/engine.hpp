#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "mlvn/board.hpp"
#include "mlvn/dynkomi.hpp"
#include "mlvn/evaluator.hpp"
#include "mlvn/mcts.hpp"

namespace mlvn {

struct EngineConfig {
  std::string name = "mlvn";
  SearchConfig search;
  DynKomiConfig dynkomi;
};

/// One game session: board, real komi, dynamic komi state and search.
class Engine {
 public:
  Engine(EngineConfig config, std::shared_ptr<Evaluator> evaluator);

  const EngineConfig& config() const noexcept { return config_; }
  const Board& board() const noexcept { return board_; }
  Evaluator& evaluator() noexcept { return *evaluator_; }
  const DynamicKomi& dynamic_komi() const noexcept { return dynkomi_; }
  const std::vector<Move>& moves() const noexcept { return moves_; }
  const std::optional<RootStats>& last_search() const noexcept { return last_; }

  /// Base seed for search; each move derives its own stream from it.
  void set_seed(std::uint64_t seed) noexcept { seed_ = seed; }
  void set_trace(std::ostream* out) noexcept { trace_ = out; }

  /// Throws Error{InvalidSize}, also for sizes the evaluator cannot handle.
  void set_board_size(int size);
  void clear_board();
  /// Sets the real komi and resets the dynamic komi state.
  void set_komi(double komi);
  /// Throws Error{BoardNotEmpty} or Error{UnsupportedHandicap}.
  std::vector<int> place_handicap(int h);

  /// Plays `m` for `c`. Playing out of turn hands the move to `c` first.
  /// Throws Error{IllegalMove} or Error{GameOver}.
  void play(Color c, Move m);
  /// Searches for `c`, plays the chosen move and updates the dynamic komi.
  /// Throws Error{GameOver}.
  Move genmove(Color c);

  /// Network evaluation of the current position.
  Evaluation evaluate_position();

 private:
  void ensure_to_move(Color c);

  EngineConfig config_;
  std::shared_ptr<Evaluator> evaluator_;
  Board board_;
  DynamicKomi dynkomi_;
  std::vector<Move> moves_;
  std::vector<int> handicap_;
  std::optional<RootStats> last_;
  std::uint64_t seed_;
  std::ostream* trace_ = nullptr;
};

}  // namespace mlvn

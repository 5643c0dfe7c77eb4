#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "mlvn/board.hpp"
#include "mlvn/evaluator.hpp"
#include "mlvn/komi_grid.hpp"
#include "mlvn/random.hpp"

namespace mlvn {

/// Counts of rollout territory differences, one bucket per integer n in
/// [-points, points].
class ScoreHistogram {
 public:
  explicit ScoreHistogram(int points = 81);

  void add(int n, std::uint64_t count = 1);
  std::uint64_t count(int n) const noexcept;
  std::uint64_t total() const noexcept { return total_; }
  bool empty() const noexcept { return total_ == 0; }
  int range() const noexcept { return range_; }
  /// Mean n. Throws Error{EmptyHistogram}.
  double mean() const;
  /// Number of recorded n with n > komi.
  std::uint64_t count_above(double komi) const noexcept;

 private:
  int range_;
  std::vector<std::uint64_t> counts_;
  std::uint64_t total_ = 0;
  std::int64_t sum_ = 0;
};

/// Fraction of recorded n with n > komi. Throws Error{EmptyHistogram}.
double rollout_winrate(const ScoreHistogram& histogram, double komi);

struct SearchConfig {
  int playouts = 400;
  double c_puct = 1.5;
  double lambda = 0.5;
  int batch_size = 16;
  /// 0 means 3 * size^2.
  int rollout_move_cap = 0;
  /// Visits a leaf needs before it is expanded; the root is always expanded.
  int expansion_threshold = 1;
  std::uint64_t seed = 1;
  /// Score terminal leaves (two passes) directly instead of calling the
  /// evaluator and the rollout.
  bool exact_terminals = true;

  /// Throws Error{InvalidConfig}.
  void validate() const;
};

/// Overrides for tests and experiments; empty members use the defaults
/// (light-policy rollout, uniform priors).
struct SearchHooks {
  std::function<int(const Board&, Rng&)> rollout;
  /// Returns one prior per candidate move; normalized by the search.
  std::function<std::vector<float>(const Board&, std::span<const Move>)> priors;
};

struct ChildStats {
  Move move;
  float prior = 0.0f;
  int visits = 0;
  /// Mixed win rate for Black at the search komi (NaN when unvisited).
  double black_winrate = 0.0;
};

struct RootStats {
  KomiGrid grid;
  double lambda = 0.5;
  int visits = 0;
  ScoreHistogram histogram;
  std::vector<double> rollout_rate;  // r_k per grid komi
  std::vector<double> value_rate;    // mean network win rate per grid komi
  std::vector<double> mixed_rate;    // w_k = (1 - lambda) r_k + lambda v_k
  std::vector<ChildStats> children;
  /// Network evaluation of the root position (not part of the backups).
  std::optional<Evaluation> root_eval;
  double search_komi = 0.0;

  double mean_rollout_score() const { return histogram.mean(); }
};

/// Mixed rate at any komi in [k_min - 1, k_max + 1]: exact rollout rate,
/// linearly interpolated network rate. Throws Error{OutOfRange}.
double mixed_winrate(const RootStats& stats, double komi);

struct SearchResult {
  Move best;
  RootStats stats;
};

/// PUCT search at `dynamic_komi`. Throws Error{GameOver}.
SearchResult search(const Board& board, const SearchConfig& config, Evaluator& evaluator,
                    double dynamic_komi, const SearchHooks& hooks = {});

/// One JSON line per root child: move, visits, prior and Black win rate at the search komi.
void write_search_trace(const Board& board, const RootStats& stats, std::ostream& out);

}  // namespace mlvn

#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "mlvn/engine.hpp"
#include "mlvn/evaluator.hpp"
#include "mlvn/selfplay.hpp"

namespace mlvn {

/// Raw tanh output at `komi`: the only output of a single-output grid,
/// otherwise linear interpolation over the grid (clamped at the ends).
double raw_value_at(const Evaluation& eval, const KomiGrid& grid, double komi);

struct MseCurve {
  double komi = 0.0;
  int j_cap = 100;
  int games = 0;
  std::vector<double> mse;  // index j = 0..j_cap
  std::vector<int> counts;  // positions per bucket
};

/// MSE(j) = sum over positions in bucket j of (z - t)^2 / (2 * count_j), with
/// z = +1 when Black wins at `komi` and t the raw output at `komi`. Positions
/// j >= j_cap share bucket j_cap. Throws Error{EmptyDataset}.
MseCurve mse_curve(std::span<const GameRecord> games, Evaluator& evaluator, double komi, int j_cap = 100);

struct PredictionReport {
  std::vector<int> ds;
  std::vector<std::vector<double>> rates;  // [move index][d index]
  std::vector<int> games_at;               // games long enough to reach each move index
  int games_used = 0;
  std::string filter;
};

/// Games whose lead lies in [k_min + 0.5, k_max + 0.5] and that ended without
/// resignation; rate(i, d) is the fraction of those reaching move i whose
/// predicted lead is within d of n. Throws Error{EmptyDataset}.
PredictionReport d_prediction_rates(std::span<const GameRecord> games, Evaluator& evaluator,
                                    std::span<const int> ds, int max_index = 100);

struct ScatterResult {
  double komi = 0.0;
  std::vector<std::pair<double, double>> points;  // (bv_territory, v_k)
  double upper_right = 0.0;
  double upper_left = 0.0;
  double lower_left = 0.0;
  double lower_right = 0.0;

  double discordant() const noexcept { return upper_left + lower_right; }
};

/// Quadrants split at x = komi (right: x > komi) and y = 0.5 (up: y >= 0.5).
ScatterResult correlation_scatter(std::span<const Board> positions, Evaluator& evaluator, double komi);

struct Ci95 {
  double p = 0.0;
  double half_width = 0.0;
};

/// Normal approximation 1.96 sqrt(p (1 - p) / games). Throws Error{OutOfRange} for games < 1.
Ci95 ci95(int wins, int games);

struct MatchConfig {
  int games = 100;
  int board_size = 9;
  double komi = 7.5;
  int handicap = 0;
  std::uint64_t seed = 1;
  /// 0 means 3 * size^2 moves.
  int move_limit = 0;
  std::filesystem::path sgf_dir;
  std::string name_a = "A";
  std::string name_b = "B";
};

struct GameOutcome {
  int index = 0;
  std::uint64_t seed = 0;
  Color a_color = Color::Black;
  bool a_won = false;
  int territory_diff = 0;
  int moves = 0;
  bool failure = false;
  std::string failure_reason;
  std::filesystem::path sgf;
};

struct MatchResult {
  int wins = 0;  // for engine A
  int losses = 0;
  int games = 0;
  double p = 0.0;
  double ci95 = 0.0;
  std::vector<GameOutcome> outcomes;
};

using EngineFactory = std::function<std::unique_ptr<Engine>()>;
using GameCallback = std::function<void(const GameOutcome&)>;

/// Even games alternate colours in pairs that share a seed; handicap games
/// give engine A White. A game in which an engine breaks the protocol is
/// recorded as a loss for that engine.
MatchResult run_match(const EngineFactory& engine_a, const EngineFactory& engine_b, const MatchConfig& config,
                      const GameCallback& on_game = {});

void write_mse_csv(const MseCurve& curve, std::ostream& out);
void write_prediction_csv(const PredictionReport& report, std::ostream& out);
void write_scatter_csv(const ScatterResult& scatter, std::ostream& out);

}  // namespace mlvn

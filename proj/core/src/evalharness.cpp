#include "mlvn/evalharness.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include "mlvn/error.hpp"

namespace mlvn {

double raw_value_at(const Evaluation& eval, const KomiGrid& grid, double komi) {
  if (static_cast<int>(eval.raw_tanh.size()) != grid.count()) {
    throw Error(ErrorKind::GridMismatch, "evaluation width does not match grid");
  }
  if (grid.count() == 1) return eval.raw_tanh[0];
  std::vector<double> raw(eval.raw_tanh.begin(), eval.raw_tanh.end());
  return grid.interpolate(raw, komi);
}

namespace {

std::vector<Evaluation> evaluate_game(const GameRecord& game, Evaluator& evaluator, std::size_t last_index) {
  std::vector<Board> positions;
  Board b = game.initial_board();
  const std::size_t upto = std::min(last_index, game.moves.size());
  positions.reserve(upto + 1);
  positions.push_back(b);
  for (std::size_t i = 0; i < upto; ++i) {
    b.play(game.moves[i]);
    positions.push_back(b);
  }
  std::vector<const Board*> ptrs;
  for (const Board& p : positions) ptrs.push_back(&p);
  return evaluator.evaluate_batch(ptrs);
}

}  // namespace

MseCurve mse_curve(std::span<const GameRecord> games, Evaluator& evaluator, double komi, int j_cap) {
  if (games.empty()) throw Error(ErrorKind::EmptyDataset, "no games for the MSE curve");
  if (j_cap < 0) throw Error(ErrorKind::InvalidConfig, "j_cap must be >= 0");
  MseCurve curve;
  curve.komi = komi;
  curve.j_cap = j_cap;
  curve.games = static_cast<int>(games.size());
  std::vector<double> sums(j_cap + 1, 0.0);
  curve.counts.assign(j_cap + 1, 0);
  for (const GameRecord& g : games) {
    const double z = g.territory_diff > komi ? 1.0 : -1.0;
    const auto evals = evaluate_game(g, evaluator, g.moves.size());
    for (std::size_t j = 0; j < evals.size(); ++j) {
      const int bucket = std::min<int>(static_cast<int>(j), j_cap);
      const double d = z - raw_value_at(evals[j], evaluator.grid(), komi);
      sums[bucket] += d * d;
      curve.counts[bucket] += 1;
    }
  }
  curve.mse.assign(j_cap + 1, 0.0);
  for (int j = 0; j <= j_cap; ++j) {
    curve.mse[j] = curve.counts[j] > 0 ? sums[j] / (2.0 * curve.counts[j]) : std::nan("");
  }
  return curve;
}

PredictionReport d_prediction_rates(std::span<const GameRecord> games, Evaluator& evaluator,
                                    std::span<const int> ds, int max_index) {
  const KomiGrid& grid = evaluator.grid();
  const double lo = grid.k_min() + 0.5;
  const double hi = grid.k_max() + 0.5;
  PredictionReport report;
  report.ds.assign(ds.begin(), ds.end());
  report.filter = "lead in [" + std::to_string(static_cast<int>(lo)) + ", " + std::to_string(static_cast<int>(hi)) +
                  "], no resignation";
  std::vector<std::vector<int>> hits(max_index + 1, std::vector<int>(ds.size(), 0));
  report.games_at.assign(max_index + 1, 0);
  for (const GameRecord& g : games) {
    if (g.resigned || g.territory_diff < lo || g.territory_diff > hi) continue;
    ++report.games_used;
    const auto evals = evaluate_game(g, evaluator, static_cast<std::size_t>(max_index));
    for (std::size_t i = 0; i < evals.size(); ++i) {
      const int distance = std::abs(predicted_score(evals[i], grid).lead - g.territory_diff);
      report.games_at[i] += 1;
      for (std::size_t k = 0; k < ds.size(); ++k) {
        if (distance <= ds[k]) hits[i][k] += 1;
      }
    }
  }
  if (report.games_used == 0) throw Error(ErrorKind::EmptyDataset, "no games pass the lead filter");
  int last = max_index;
  while (last > 0 && report.games_at[last] == 0) --last;
  report.games_at.resize(last + 1);
  report.rates.resize(last + 1);
  for (int i = 0; i <= last; ++i) {
    report.rates[i].resize(ds.size());
    for (std::size_t k = 0; k < ds.size(); ++k) {
      report.rates[i][k] = report.games_at[i] > 0 ? static_cast<double>(hits[i][k]) / report.games_at[i] : 0.0;
    }
  }
  return report;
}

ScatterResult correlation_scatter(std::span<const Board> positions, Evaluator& evaluator, double komi) {
  ScatterResult out;
  out.komi = komi;
  if (positions.empty()) return out;
  std::vector<const Board*> ptrs;
  for (const Board& b : positions) ptrs.push_back(&b);
  const auto evals = evaluator.evaluate_batch(ptrs);
  int ur = 0, ul = 0, ll = 0, lr = 0;
  for (const Evaluation& e : evals) {
    const double x = bv_territory(e);
    const double y = (raw_value_at(e, evaluator.grid(), komi) + 1.0) / 2.0;
    out.points.emplace_back(x, y);
    const bool right = x > komi;
    const bool up = y >= 0.5;
    if (up && right) ++ur;
    else if (up) ++ul;
    else if (right) ++lr;
    else ++ll;
  }
  const double n = static_cast<double>(evals.size());
  out.upper_right = ur / n;
  out.upper_left = ul / n;
  out.lower_left = ll / n;
  out.lower_right = lr / n;
  return out;
}

Ci95 ci95(int wins, int games) {
  if (games < 1) throw Error(ErrorKind::OutOfRange, "ci95 needs at least one game");
  if (wins < 0 || wins > games) throw Error(ErrorKind::OutOfRange, "wins outside [0, games]");
  const double p = static_cast<double>(wins) / games;
  return {p, 1.96 * std::sqrt(p * (1.0 - p) / games)};
}

void write_mse_csv(const MseCurve& curve, std::ostream& out) {
  out << "j,mse,positions\n";
  for (std::size_t j = 0; j < curve.mse.size(); ++j) {
    out << j << ',';
    if (curve.counts[j] > 0) out << curve.mse[j];
    out << ',' << curve.counts[j] << '\n';
  }
}

void write_prediction_csv(const PredictionReport& report, std::ostream& out) {
  out << "move";
  for (int d : report.ds) out << ",d" << d;
  out << ",games\n";
  for (std::size_t i = 0; i < report.rates.size(); ++i) {
    out << i;
    for (double r : report.rates[i]) out << ',' << r;
    out << ',' << report.games_at[i] << '\n';
  }
}

void write_scatter_csv(const ScatterResult& scatter, std::ostream& out) {
  out << "bv_territory,win_rate\n";
  for (const auto& [x, y] : scatter.points) out << x << ',' << y << '\n';
}

}  // namespace mlvn

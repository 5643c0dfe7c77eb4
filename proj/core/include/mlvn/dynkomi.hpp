#pragma once

#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "mlvn/board.hpp"
#include "mlvn/komi_grid.hpp"
#include "mlvn/mcts.hpp"

namespace mlvn {

enum class DynKomiMethod { None, SSR, SSB, SSM, VSM, MLDK };

std::string_view to_string(DynKomiMethod m) noexcept;
/// Accepts "none", "ss-r", "ss-b", "ss-m", "vs-m", "ml-dk" (case-insensitive).
/// Throws Error{InvalidConfig}.
DynKomiMethod parse_dynkomi_method(std::string_view text);

struct DynKomiConfig {
  DynKomiMethod method = DynKomiMethod::None;
  double c = 8.0;
  double s = 0.45;
  double l = 0.45;
  double u = 0.55;

  /// Throws Error{InvalidConfig}.
  void validate() const;
};

/// 1 / (1 + exp(c (i / B - s))).
double komi_rate(int i, int board_points, double c, double s);

/// k0 + alpha * score_estimate.
double ss_adjust(double score_estimate, double k0, double alpha);

/// One step up when w > u, down when w < l, clamped to the grid span.
double vs_adjust(double w, double current, double l, double u, const KomiGrid& grid);

/// Running max from the high-komi end, so the result is nonincreasing in k.
std::vector<double> monotone_envelope(std::span<const double> w);

struct MlDkResult {
  double value = 0.0;  // w at k0
  std::optional<double> located;
  double alpha = 0.0;
  double komi = 0.0;
};

/// ML-based dynamic komi. `w` is the per-grid mixed win rate for Black; k0
/// must lie on the grid. Throws Error{GridMismatch}.
MlDkResult ml_dk(int i, int board_points, std::span<const double> w, double k0, double c, double s, double l,
                 double u, const KomiGrid& grid);

struct KomiAdjustment {
  int move_index = 0;
  DynKomiMethod method = DynKomiMethod::None;
  double value = 0.0;  // score estimate (SS-*) or win rate (VS-M, ML-DK)
  std::optional<double> located;
  double alpha = 1.0;
  double komi = 0.0;
};

/// Per-game dynamic komi state, updated once per move from the last search.
class DynamicKomi {
 public:
  DynamicKomi(DynKomiConfig config, KomiGrid grid, double real_komi);

  const DynKomiConfig& config() const noexcept { return config_; }
  double real_komi() const noexcept { return k0_; }
  /// Komi for the next search.
  double current() const noexcept { return current_; }
  void reset(double real_komi);

  /// Computes the komi for the next search from the search of the move
  /// `board.move_count()` and returns it.
  double update(const Board& board, const RootStats& stats);

  const std::vector<KomiAdjustment>& log() const noexcept { return log_; }

 private:
  double clamp(double k) const;

  DynKomiConfig config_;
  KomiGrid grid_;
  double k0_;
  double current_;
  std::vector<KomiAdjustment> log_;
};

/// CSV: move_index,method,value,located,alpha,komi
void write_adjustment_log(const std::vector<KomiAdjustment>& log, std::ostream& out, bool header = true);

}  // namespace mlvn

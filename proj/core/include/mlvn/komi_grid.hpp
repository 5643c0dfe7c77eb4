#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace mlvn {

/// Half-integer komi axis with unit step: k_min, k_min + 1, ..., k_max.
class KomiGrid {
 public:
  /// Default 9x9 grid: -20.5 .. 20.5 (42 outputs) centred at 7.5.
  KomiGrid() : KomiGrid(-20.5, 20.5, 7.5) {}
  /// Throws Error{InvalidConfig} for non-half-integer bounds or centre outside range.
  KomiGrid(double k_min, double k_max, double center);

  /// The 41-output 19x19 grid -12.5 .. 27.5.
  static KomiGrid full_board() { return {-12.5, 27.5, 7.5}; }
  /// A single-output grid at `komi` (plain value network).
  static KomiGrid single(double komi) { return {komi, komi, komi}; }

  double k_min() const noexcept { return k_min_; }
  double k_max() const noexcept { return k_max_; }
  double center() const noexcept { return center_; }
  int count() const noexcept { return count_; }
  double komi_at(int index) const noexcept { return k_min_ + index; }
  bool contains(double komi) const noexcept;
  /// Index of a grid komi; throws Error{GridMismatch} when `komi` is not on the grid.
  int index_of(double komi) const;

  /// Linear interpolation of per-komi `values` at any real komi, clamped at the ends.
  double interpolate(std::span<const double> values, double komi) const;

  static bool is_half_integer(double k) noexcept;

  friend bool operator==(const KomiGrid&, const KomiGrid&) = default;

 private:
  double k_min_;
  double k_max_;
  double center_;
  int count_;
};

}  // namespace mlvn

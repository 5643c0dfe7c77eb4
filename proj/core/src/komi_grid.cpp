#include "mlvn/komi_grid.hpp"

#include <cmath>
#include <string>

#include "mlvn/error.hpp"

namespace mlvn {

bool KomiGrid::is_half_integer(double k) noexcept {
  const double twice = 2.0 * k;
  return twice == std::round(twice) && std::fmod(std::fabs(twice), 2.0) == 1.0;
}

KomiGrid::KomiGrid(double k_min, double k_max, double center)
    : k_min_(k_min), k_max_(k_max), center_(center), count_(0) {
  if (!is_half_integer(k_min) || !is_half_integer(k_max) || !is_half_integer(center)) {
    throw Error(ErrorKind::InvalidConfig, "komi grid entries must be half-integers");
  }
  if (!(k_min <= center && center <= k_max)) {
    throw Error(ErrorKind::InvalidConfig, "komi grid centre must lie within [k_min, k_max]");
  }
  count_ = static_cast<int>(k_max - k_min) + 1;
}

bool KomiGrid::contains(double komi) const noexcept {
  return komi >= k_min_ && komi <= k_max_ && is_half_integer(komi);
}

int KomiGrid::index_of(double komi) const {
  if (!contains(komi)) {
    throw Error(ErrorKind::GridMismatch, "komi " + std::to_string(komi) + " is not on the grid");
  }
  return static_cast<int>(komi - k_min_);
}

double KomiGrid::interpolate(std::span<const double> values, double komi) const {
  if (static_cast<int>(values.size()) != count_) {
    throw Error(ErrorKind::GridMismatch, "value vector does not match grid width");
  }
  if (komi <= k_min_) return values.front();
  if (komi >= k_max_) return values.back();
  const double pos = komi - k_min_;
  const int lo = static_cast<int>(std::floor(pos));
  const double frac = pos - lo;
  if (frac == 0.0) return values[lo];
  return values[lo] + frac * (values[lo + 1] - values[lo]);
}

}  // namespace mlvn

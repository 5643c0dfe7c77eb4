#include "mlvn/dynkomi.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <ostream>

#include "mlvn/error.hpp"

namespace mlvn {

std::string_view to_string(DynKomiMethod m) noexcept {
  switch (m) {
    case DynKomiMethod::None: return "none";
    case DynKomiMethod::SSR: return "ss-r";
    case DynKomiMethod::SSB: return "ss-b";
    case DynKomiMethod::SSM: return "ss-m";
    case DynKomiMethod::VSM: return "vs-m";
    case DynKomiMethod::MLDK: return "ml-dk";
  }
  return "none";
}

DynKomiMethod parse_dynkomi_method(std::string_view text) {
  std::string lower;
  for (char c : text) {
    if (c != '_') lower.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
    else lower.push_back('-');
  }
  for (auto m : {DynKomiMethod::None, DynKomiMethod::SSR, DynKomiMethod::SSB, DynKomiMethod::SSM,
                 DynKomiMethod::VSM, DynKomiMethod::MLDK}) {
    if (lower == to_string(m)) return m;
  }
  throw Error(ErrorKind::InvalidConfig, "unknown dynamic komi method '" + std::string(text) + "'");
}

void DynKomiConfig::validate() const {
  if (!(0.0 <= l && l < u && u <= 1.0)) throw Error(ErrorKind::InvalidConfig, "need 0 <= l < u <= 1");
  if (!(c > 0.0)) throw Error(ErrorKind::InvalidConfig, "komi rate slope c must be > 0");
  if (!(0.0 <= s && s <= 1.0)) throw Error(ErrorKind::InvalidConfig, "komi rate offset s must be in [0, 1]");
}

double komi_rate(int i, int board_points, double c, double s) {
  const double phase = static_cast<double>(i) / board_points - s;
  return 1.0 / (1.0 + std::exp(c * phase));
}

double ss_adjust(double score_estimate, double k0, double alpha) { return k0 + alpha * score_estimate; }

double vs_adjust(double w, double current, double l, double u, const KomiGrid& grid) {
  double k = current;
  if (w > u) k += 1.0;
  else if (w < l) k -= 1.0;
  return std::clamp(k, grid.k_min() - 0.5, grid.k_max() + 0.5);
}

std::vector<double> monotone_envelope(std::span<const double> w) {
  std::vector<double> out(w.begin(), w.end());
  for (std::size_t i = out.size(); i-- > 1;) out[i - 1] = std::max(out[i - 1], out[i]);
  return out;
}

MlDkResult ml_dk(int i, int board_points, std::span<const double> w, double k0, double c, double s, double l,
                 double u, const KomiGrid& grid) {
  if (static_cast<int>(w.size()) != grid.count()) {
    throw Error(ErrorKind::GridMismatch, "win-rate vector does not match grid");
  }
  const int i0 = grid.index_of(k0);
  const auto m = monotone_envelope(w);
  MlDkResult r;
  r.value = m[i0];
  r.alpha = komi_rate(i, board_points, c, s);
  if (r.value >= l && r.value <= u) {
    r.komi = k0;
    return r;
  }
  int k = -1;
  if (r.value > u) {
    for (int j = i0; j < grid.count(); ++j) {
      if (m[j] <= u) {
        k = j;
        break;
      }
    }
    if (k < 0) k = grid.count() - 1;
  } else {
    for (int j = i0; j >= 0; --j) {
      if (m[j] >= l) {
        k = j;
        break;
      }
    }
    if (k < 0) k = 0;
  }
  r.located = grid.komi_at(k);
  r.komi = k0 + (*r.located - k0) * r.alpha;
  return r;
}

DynamicKomi::DynamicKomi(DynKomiConfig config, KomiGrid grid, double real_komi)
    : config_(config), grid_(grid), k0_(real_komi), current_(real_komi) {
  config_.validate();
}

void DynamicKomi::reset(double real_komi) {
  k0_ = real_komi;
  current_ = real_komi;
  log_.clear();
}

double DynamicKomi::clamp(double k) const { return std::clamp(k, grid_.k_min() - 0.5, grid_.k_max() + 0.5); }

double DynamicKomi::update(const Board& board, const RootStats& stats) {
  if (config_.method == DynKomiMethod::None || stats.visits == 0) return current_;
  KomiAdjustment a;
  a.move_index = board.move_count();
  a.method = config_.method;
  const double alpha = komi_rate(board.move_count(), board.num_points(), config_.c, config_.s);
  switch (config_.method) {
    case DynKomiMethod::SSR:
    case DynKomiMethod::SSB:
    case DynKomiMethod::SSM: {
      const double rollout_estimate = stats.mean_rollout_score() - k0_;
      const double bv_estimate = stats.root_eval ? bv_territory(*stats.root_eval) - k0_ : rollout_estimate;
      a.value = config_.method == DynKomiMethod::SSR   ? rollout_estimate
                : config_.method == DynKomiMethod::SSB ? bv_estimate
                                                       : 0.5 * rollout_estimate + 0.5 * bv_estimate;
      a.alpha = alpha;
      a.komi = clamp(ss_adjust(a.value, k0_, alpha));
      break;
    }
    case DynKomiMethod::VSM:
      a.value = mixed_winrate(stats, current_);
      a.komi = vs_adjust(a.value, current_, config_.l, config_.u, grid_);
      break;
    case DynKomiMethod::MLDK: {
      const auto r = ml_dk(board.move_count(), board.num_points(), stats.mixed_rate, k0_, config_.c, config_.s,
                           config_.l, config_.u, grid_);
      a.value = r.value;
      a.located = r.located;
      a.alpha = r.alpha;
      a.komi = clamp(r.komi);
      break;
    }
    case DynKomiMethod::None:
      break;
  }
  current_ = a.komi;
  log_.push_back(a);
  return current_;
}

void write_adjustment_log(const std::vector<KomiAdjustment>& log, std::ostream& out, bool header) {
  if (header) out << "move_index,method,value,located,alpha,komi\n";
  for (const auto& a : log) {
    out << a.move_index << ',' << to_string(a.method) << ',' << a.value << ',';
    if (a.located) out << *a.located;
    out << ',' << a.alpha << ',' << a.komi << '\n';
  }
}

}  // namespace mlvn

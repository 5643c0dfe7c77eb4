// Acceptance suite: one PASS/FAIL line per criterion. Heavy artifacts (trained
// networks, match results) are cached in the work directory and reused when
// their settings key matches.

#include <CLI11.hpp>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <nlohmann/json.hpp>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "gradcheck.hpp"
#include "gtp_script.hpp"
#include "mlvn/dataset.hpp"
#include "mlvn/dynkomi.hpp"
#include "mlvn/engine.hpp"
#include "mlvn/error.hpp"
#include "mlvn/evalharness.hpp"
#include "mlvn/gtp.hpp"
#include "mlvn/mcts.hpp"
#include "mlvn/playout.hpp"
#include "mlvn/selfplay.hpp"
#include "mlvn/valuefn.hpp"
#include "oracles.hpp"

namespace fs = std::filesystem;
using json = nlohmann::json;
using namespace mlvn;

namespace {

// Tolerances and sizes, pinned here.
constexpr double kKomiRateTol = 1e-9;
constexpr double kCiTolPoints = 0.02;
constexpr int kLabelGames = 1000;
constexpr int kScoringPlayouts = 1000;
constexpr double kGradTol = 1e-4;
constexpr int kGradCoords = 20;
constexpr int kTrainGames = 20000;
constexpr double kHeldoutFraction = 0.1;
constexpr double kLossDrop = 0.30;
constexpr int kMonotonePositions = 500;
constexpr double kMonotoneShare = 0.90;
constexpr int kEvalGames = 1000;
constexpr int kJCap = 100;
constexpr double kMixTol = 1e-12;
constexpr int kMatchGames = 200;
constexpr int kMatchPlayouts = 400;
constexpr double kMatchMargin = 0.05;
constexpr int kOpeningMoves = 20;

constexpr std::uint64_t kTrainSeed = 1;
constexpr std::uint64_t kEvalSeed = 9001;
constexpr std::uint64_t kMatchSeed = 77;

struct Verdict {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

void log(const std::string& s) { std::cerr << "  .. " << s << std::endl; }

// Shared state built lazily by the heavy criteria.
struct Context {
  fs::path workdir;
  const KomiGrid grid;
  std::optional<std::vector<GameRecord>> train_games;
  std::optional<std::vector<TrainingRecord>> train_set, heldout_set;
  std::optional<NetworkParams> ml_net, single_net;
  std::optional<std::vector<GameRecord>> eval_center, eval_half;

  ArchConfig arch(const KomiGrid& g) const {
    ArchConfig a;
    a.grid = g;
    return a;
  }

  TrainConfig train_config() const {
    TrainConfig t;
    t.epochs = 20;
    t.seed = kTrainSeed;
    return t;
  }

  const std::vector<GameRecord>& games() {
    if (!train_games) {
      log(fmt("generating %d self-play games", kTrainGames));
      train_games = generate_games(kTrainGames, 9, kTrainSeed);
    }
    return *train_games;
  }

  void split() {
    if (train_set) return;
    const Dataset data = build_dataset(games(), 1, grid, kTrainSeed);
    auto [tr, ho] = split_by_game(data.records, kHeldoutFraction, kTrainSeed);
    train_set = std::move(tr);
    heldout_set = std::move(ho);
  }

  std::string key(const ArchConfig& a) const {
    std::ostringstream os;
    const TrainConfig t = train_config();
    os << "v2 games=" << kTrainGames << " seed=" << kTrainSeed << " heldout=" << kHeldoutFraction
       << " grid=" << a.grid.k_min() << ":" << a.grid.k_max() << " layers=" << a.trunk_layers
       << " filters=" << a.filters << " hidden=" << a.value_hidden << " epochs=" << t.epochs
       << " lr=" << t.learning_rate << " batch=" << t.batch_size;
    return os.str();
  }

  // Trains (or loads) a network whose value head covers `g`.
  NetworkParams trained(const std::string& name, const KomiGrid& g) {
    const ArchConfig a = arch(g);
    const fs::path net = workdir / (name + ".mlvw");
    const fs::path key_file = workdir / (name + ".key");
    const std::string k = key(a);
    if (fs::exists(net) && fs::exists(key_file)) {
      std::ifstream in(key_file);
      std::string stored((std::istreambuf_iterator<char>(in)), {});
      if (stored == k) {
        log("reusing cached " + net.string());
        return load_checkpoint(net);
      }
    }
    split();
    std::vector<TrainingRecord> tr = *train_set, ho = *heldout_set;
    if (g.count() == 1) {
      // Keep only the label at the single komi.
      const int idx = grid.index_of(g.k_min());
      for (auto* set : {&tr, &ho}) {
        for (auto& r : *set) r.labels = ValueLabels{r.labels[idx]};
      }
    }
    log(fmt("training %s on %zu records (%d epochs)", name.c_str(), tr.size(), train_config().epochs));
    const auto t0 = std::chrono::steady_clock::now();
    auto result = train(init_params(a, kTrainSeed), tr, ho, train_config(), [&](const EpochStats& e) {
      const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
      log(fmt("%s epoch %d heldout %.4f (%.0fs)", name.c_str(), e.epoch, e.heldout->total, secs));
    });
    save_checkpoint(result.params, net);
    std::ofstream(workdir / (name + "_loss.csv")) << [&] {
      std::ostringstream os;
      write_loss_csv(result.history, os);
      return os.str();
    }();
    std::ofstream(key_file) << k;
    return result.params;
  }

  const NetworkParams& ml() {
    if (!ml_net) ml_net = trained("ml_net", grid);
    return *ml_net;
  }

  const NetworkParams& single() {
    if (!single_net) single_net = trained("single_net", KomiGrid::single(grid.center()));
    return *single_net;
  }

  // Fresh games from a different seed stream than the training corpus.
  const std::vector<GameRecord>& center_games() {
    if (!eval_center) eval_center = generate_games(kEvalGames, 9, kEvalSeed, ResolutionMode::FullResolution, 7.5);
    return *eval_center;
  }
  const std::vector<GameRecord>& half_games() {
    if (!eval_half) eval_half = generate_games(kEvalGames, 9, kEvalSeed + 1, ResolutionMode::FullResolution, 0.5);
    return *eval_half;
  }
};

double quartile_mean(const MseCurve& c, int q) {
  const int lo = q * (c.j_cap + 1) / 4;
  const int hi = (q + 1) * (c.j_cap + 1) / 4;
  double sum = 0.0;
  int n = 0;
  for (int j = lo; j < hi; ++j) {
    if (c.counts[j] == 0) continue;
    sum += c.mse[j];
    ++n;
  }
  return n ? sum / n : std::nan("");
}

// ---- criteria -------------------------------------------------------------

Verdict ml_dk_example(Context&) {
  const KomiGrid grid;
  std::vector<double> w(grid.count());
  for (int k = 0; k < grid.count(); ++k) w[k] = grid.komi_at(k) <= 10.5 ? 0.57 : 0.53;
  // c = 1000, s = 1 at i = 0 gives alpha = 1 to double precision.
  const MlDkResult r = ml_dk(0, 81, w, 7.5, 1000.0, 1.0, 0.45, 0.55, grid);
  return {r.alpha == 1.0 && r.komi == 11.5,
          fmt("alpha %.17g, located %.1f, dynamic komi %.17g (expected 11.5)", r.alpha, r.located.value_or(NAN),
              r.komi)};
}

Verdict komi_rate_curve(Context&) {
  double worst = 0.0;
  for (int i : {0, 81, 162, 361}) {
    const long double ref = 1.0L / (1.0L + std::exp(8.0L * (static_cast<long double>(i) / 361.0L - 0.45L)));
    worst = std::max(worst, static_cast<double>(std::fabs(komi_rate(i, 361, 8.0, 0.45) - ref)));
  }
  bool decreasing = true;
  for (int i = 1; i <= 361; ++i) decreasing &= komi_rate(i, 361, 8.0, 0.45) < komi_rate(i - 1, 361, 8.0, 0.45);
  return {worst <= kKomiRateTol && decreasing,
          fmt("max |error| %.2e at i in {0,81,162,361} (tol %.0e); strictly decreasing over 0..361: %s", worst,
              kKomiRateTol, decreasing ? "yes" : "no")};
}

Verdict ci_tables(Context&) {
  struct Cell {
    double p;
    int n;
    double printed;
  };
  // Win rate (%), games, printed half-width (%). The 66.60% cell prints the
  // half-width of 60.60% (complement of its mirrored 39.40% cell).
  const std::vector<Cell> cells{
      {39.60, 500, 4.29}, {39.40, 500, 4.29}, {32.40, 500, 4.11}, {60.40, 500, 4.29}, {49.20, 500, 4.39},
      {60.60, 500, 4.29}, {50.80, 500, 4.39}, {47.20, 500, 4.38}, {67.60, 500, 4.11}, {52.80, 500, 4.38},
      {80.80, 250, 4.89}, {80.00, 250, 4.97}, {78.00, 250, 5.15}, {79.60, 250, 5.01}, {82.00, 250, 4.77},
      {83.20, 250, 4.64}, {74.00, 250, 5.45}, {50.00, 250, 6.21}, {30.40, 250, 5.71}, {10.80, 250, 3.86},
      {76.00, 250, 5.30}, {58.00, 250, 6.13}, {38.00, 250, 6.03}, {22.00, 250, 5.15}, {77.60, 250, 5.18},
      {54.00, 250, 6.19}, {31.60, 250, 5.77}, {20.40, 250, 5.01}, {74.40, 250, 5.42}, {49.20, 250, 6.21},
      {34.00, 250, 5.88}, {12.80, 250, 4.15}, {71.60, 250, 5.60}, {46.80, 250, 6.20}, {9.20, 250, 3.59},
      {57.20, 250, 6.15}, {41.60, 250, 6.12}, {18.40, 250, 4.81}};
  double worst = 0.0;
  std::set<double> distinct;
  for (const Cell& c : cells) {
    const int wins = static_cast<int>(std::lround(c.p / 100.0 * c.n));
    const Ci95 ci = ci95(wins, c.n);
    worst = std::max(worst, std::fabs(ci.half_width * 100.0 - c.printed));
    distinct.insert(c.printed);
  }
  return {worst <= kCiTolPoints,
          fmt("%zu cells (%zu distinct printed values), max deviation %.4f points (tol %.2f); 66.60%% cell read "
              "as 60.60%%",
              cells.size(), distinct.size(), worst, kCiTolPoints)};
}

Verdict labels_and_parity(Context&) {
  const KomiGrid grid;
  int label_errors = 0;
  for (int n = -81; n <= 81; ++n) {
    const ValueLabels l = label_value_vector(n, grid);
    for (int k = 0; k < grid.count(); ++k) {
      if (l[k] != (grid.komi_at(k) < n ? 1 : -1)) ++label_errors;
      if (k > 0 && l[k] > l[k - 1]) ++label_errors;
    }
  }
  int zero_neutral = 0, odd = 0, score_mismatch = 0, pair_mismatch = 0, pairs = 0;
  const auto games = generate_games(kLabelGames, 9, 4242);
  for (const GameRecord& g : games) {
    const Board end = g.position_at(g.moves.size());
    if (oracle::territory_diff(oracle::to_grid(end)) != g.territory_diff) ++score_mismatch;
    if (g.neutral_points() != 0) continue;
    ++zero_neutral;
    if (std::abs(g.territory_diff) % 2 == 1) ++odd;
    const ValueLabels l = label_value_vector(g.territory_diff, grid);
    for (int m = -10; m <= 10; ++m) {
      const double lo = 2.0 * m - 0.5;
      const double hi = 2.0 * m + 0.5;
      if (!grid.contains(lo) || !grid.contains(hi)) continue;
      ++pairs;
      if (l[grid.index_of(lo)] != l[grid.index_of(hi)]) ++pair_mismatch;
    }
  }
  const bool pass = label_errors == 0 && zero_neutral > 0 && odd == zero_neutral && pair_mismatch == 0 &&
                    score_mismatch == 0;
  return {pass, fmt("n in [-81,81]: %d label errors; %d/%d games zero-neutral, %d with odd n; %d paired-label "
                    "disagreements over %d pairs; %d oracle score mismatches",
                    label_errors, zero_neutral, kLabelGames, odd, pair_mismatch, pairs, score_mismatch)};
}

Verdict scoring_oracle(Context&) {
  int mismatches = 0, capped = 0;
  for (int t = 0; t < kScoringPlayouts; ++t) {
    Rng a(derive_seed(555, t));
    Rng b(derive_seed(555, t));
    const int cap = 75;
    // Replay the rollout's move stream to obtain its final board.
    Board board(5, 0.5);
    int played = 0;
    while (!board.game_over() && played < cap) {
      board.play(light_policy_move(board, a));
      ++played;
    }
    if (!board.game_over()) ++capped;
    const int engine_n = rollout(Board(5, 0.5), b, cap);
    const int oracle_n = oracle::territory_diff(oracle::to_grid(board));
    const int owned_n = board.area_score().territory_diff;
    if (engine_n != oracle_n || owned_n != oracle_n) ++mismatches;
  }
  return {mismatches == 0, fmt("%d playouts (%d stopped at the move cap), %d disagreements with the flood-fill "
                               "oracle",
                               kScoringPlayouts, capped, mismatches)};
}

Verdict gradient_check(Context&) {
  ArchConfig a;
  a.board_size = 5;
  a.trunk_layers = 2;
  a.filters = 4;
  a.value_hidden = 16;
  a.grid = KomiGrid(-4.5, 4.5, 0.5);
  auto params = init_params(a, 17).cast<double>();
  gradcheck::jitter_biases(params, 18);
  const auto records = build_dataset(generate_games(16, 5, 19), 1, a.grid, 19).records;
  const auto errors = gradcheck::check(params, records, kGradCoords, 20);
  double worst = 0.0;
  std::string where;
  for (const auto& e : errors) {
    if (e.max_rel >= worst) {
      worst = e.max_rel;
      where = e.name;
    }
  }
  return {worst < kGradTol, fmt("%zu parameter blocks x %d coordinates, max relative error %.2e in %s (tol %.0e)",
                                errors.size(), kGradCoords, worst, where.c_str(), kGradTol)};
}

Verdict training_sanity(Context& ctx) {
  const NetworkParams& net = ctx.ml();
  ctx.split();
  const LossBreakdown zero = zero_network_loss(*ctx.heldout_set);
  const LossBreakdown trained = evaluate_loss(net, *ctx.heldout_set);
  const double drop = 1.0 - trained.total / zero.total;

  const auto& ho = *ctx.heldout_set;
  const int take = std::min<int>(kMonotonePositions, static_cast<int>(ho.size()));
  double share = 0.0;
  for (int i = 0; i < take; ++i) {
    const Evaluation e = forward(net, ho[i].features);
    int ok = 0;
    for (std::size_t k = 0; k + 1 < e.raw_tanh.size(); ++k) ok += e.raw_tanh[k] >= e.raw_tanh[k + 1];
    share += static_cast<double>(ok) / (e.raw_tanh.size() - 1);
  }
  share /= take;
  return {drop >= kLossDrop && share >= kMonotoneShare,
          fmt("held-out total loss %.4f vs zero-network %.4f (value %.4f + ownership %.4f): drop %.1f%% (need "
              ">= %.0f%%); monotone adjacent komi pairs %.1f%% over %d positions (need >= %.0f%%)",
              trained.total, zero.total, zero.value_mse, zero.bv_mse, 100 * drop, 100 * kLossDrop, 100 * share, take,
              100 * kMonotoneShare)};
}

Verdict mse_curve_shape(Context& ctx) {
  const auto& games = ctx.center_games();
  ConstantEvaluator zero(ctx.grid, 0.0f);
  const MseCurve z = mse_curve(games, zero, 7.5, kJCap);
  bool flat = true;
  for (int j = 0; j <= kJCap; ++j) flat &= z.counts[j] == 0 || z.mse[j] == 0.5;
  NetworkEvaluator net(ctx.ml());
  const MseCurve t = mse_curve(games, net, 7.5, kJCap);
  std::ofstream(ctx.workdir / "mse_center.csv") << [&] {
    std::ostringstream os;
    write_mse_csv(t, os);
    return os.str();
  }();
  const double first = quartile_mean(t, 0);
  const double last = quartile_mean(t, 3);
  return {flat && last < first,
          fmt("zero evaluator exactly 0.5 at every j: %s; trained MSE at komi 7.5 first quartile %.4f, last "
              "quartile %.4f (%d games)",
              flat ? "yes" : "no", first, last, kEvalGames)};
}

Verdict off_center_komi(Context& ctx) {
  const auto& games = ctx.half_games();
  NetworkEvaluator ml(ctx.ml());
  NetworkEvaluator single(ctx.single());
  const MseCurve a = mse_curve(games, ml, 0.5, kJCap);
  const MseCurve b = mse_curve(games, single, 0.5, kJCap);
  const double ml_late = quartile_mean(a, 3);
  const double single_late = quartile_mean(b, 3);
  int relevant = 0;
  for (const auto& g : games) relevant += (g.territory_diff > 0.5) != (g.territory_diff > 7.5);
  return {ml_late < single_late,
          fmt("late-game MSE at komi 0.5: multi-komi head %.4f vs single head trained at 7.5 %.4f (%d games, %d "
              "decided differently at 0.5 and 7.5)",
              ml_late, single_late, kEvalGames, relevant)};
}

Verdict mixing_formula(Context&) {
  const KomiGrid grid;
  const float t = 0.2f;
  const double v = (t + 1.0f) / 2.0f;  // evaluator's win rate, same float arithmetic
  const int n = 3;
  double worst = 0.0;
  for (double lambda : {0.0, 0.5, 1.0}) {
    ConstantEvaluator eval(grid, t);
    SearchConfig cfg;
    cfg.playouts = 64;
    cfg.lambda = lambda;
    cfg.exact_terminals = false;
    SearchHooks hooks;
    hooks.rollout = [n](const Board&, Rng&) { return n; };
    const auto r = search(Board(9, 7.5), cfg, eval, 7.5, hooks);
    for (double k : {-10.5, 0.5, 2.5, 3.5, 15.5}) {
      const double rk = n > k ? 1.0 : 0.0;
      const double expected = (1.0 - lambda) * rk + lambda * v;
      worst = std::max(worst, std::fabs(r.stats.mixed_rate[grid.index_of(k)] - expected));
      worst = std::max(worst, std::fabs(mixed_winrate(r.stats, k) - expected));
    }
  }
  return {worst <= kMixTol, fmt("lambda in {0, 0.5, 1}, komi in {-10.5, 0.5, 2.5, 3.5, 15.5}: max |w_k - ((1 - "
                                "lambda) r_k + lambda v_k)| = %.2e (tol %.0e)",
                                worst, kMixTol)};
}

struct MatchSummary {
  int wins = 0;
  int games = 0;
  double opening_shift = 0.0;  // mean (dynamic komi - real komi) over White's opening searches
  int opening_searches = 0;
  int opening_raised = 0;
};

MatchSummary cached_match(Context& ctx, const std::string& name, DynKomiMethod white_method) {
  const fs::path file = ctx.workdir / (name + ".json");
  const std::string key = ctx.key(ctx.arch(ctx.grid)) + fmt(" match games=%d playouts=%d seed=%llu method=%s",
                                                            kMatchGames, kMatchPlayouts,
                                                            static_cast<unsigned long long>(kMatchSeed),
                                                            std::string(to_string(white_method)).c_str());
  if (fs::exists(file)) {
    try {
      const json j = json::parse(std::ifstream(file));
      if (j.at("key") == key) {
        log("reusing cached " + file.string());
        return {j.at("wins"), j.at("games"), j.at("opening_shift"), j.at("opening_searches"),
                j.at("opening_raised")};
      }
    } catch (const std::exception&) {
    }
  }
  const auto params = std::make_shared<NetworkParams>(ctx.ml());
  auto factory = [&](DynKomiMethod method, Engine** last) {
    return [params, method, last]() {
      EngineConfig cfg;
      cfg.search.playouts = kMatchPlayouts;
      cfg.dynkomi.method = method;
      auto e = std::make_unique<Engine>(cfg, std::make_shared<NetworkEvaluator>(*params));
      if (last) *last = e.get();
      return e;
    };
  };
  Engine* white = nullptr;
  MatchConfig mc;
  mc.games = kMatchGames;
  mc.board_size = 9;
  mc.komi = 0.5;
  mc.handicap = 2;
  mc.seed = kMatchSeed;
  mc.sgf_dir = ctx.workdir / (name + "_sgf");
  mc.name_a = std::string("white-") + std::string(to_string(white_method));
  mc.name_b = "black-none";
  MatchSummary s;
  std::ofstream komi_log(ctx.workdir / (name + "_komi.csv"));
  komi_log << "game,move_index,method,value,located,alpha,komi\n";
  const auto t0 = std::chrono::steady_clock::now();
  const MatchResult r =
      run_match(factory(white_method, &white), factory(DynKomiMethod::None, nullptr), mc, [&](const GameOutcome& o) {
        for (const auto& a : white->dynamic_komi().log()) {
          std::ostringstream line;
          write_adjustment_log({a}, line, false);
          komi_log << o.index << ',' << line.str();
          if (a.move_index < kOpeningMoves) {
            s.opening_shift += a.komi - mc.komi;
            ++s.opening_searches;
            s.opening_raised += a.komi > mc.komi;
          }
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        if (o.index % 10 == 9) {
          log(fmt("%s game %d/%d (%.0fs)", name.c_str(), o.index + 1, kMatchGames, secs));
        }
      });
  s.wins = r.wins;
  s.games = r.games;
  if (s.opening_searches) s.opening_shift /= s.opening_searches;
  json j{{"key", key},
         {"wins", s.wins},
         {"games", s.games},
         {"opening_shift", s.opening_shift},
         {"opening_searches", s.opening_searches},
         {"opening_raised", s.opening_raised}};
  std::ofstream(file) << j.dump(2) << '\n';
  return s;
}

Verdict handicap_direction(Context& ctx) {
  const MatchSummary ml = cached_match(ctx, "match_white_mldk", DynKomiMethod::MLDK);
  const MatchSummary none = cached_match(ctx, "match_white_none", DynKomiMethod::None);
  const Ci95 a = ci95(ml.wins, ml.games);
  const Ci95 b = ci95(none.wins, none.games);
  const bool direction = ml.opening_searches > 0 && ml.opening_shift > 0.0;
  return {a.p - b.p >= kMatchMargin && direction,
          fmt("White win rate with ML-DK %.1f%% (+-%.1f) vs without %.1f%% (+-%.1f), margin %.1f points (need >= "
              "%.0f); opening komi shift toward Black's lead %+.2f (%d/%d searches raised komi)",
              100 * a.p, 100 * a.half_width, 100 * b.p, 100 * b.half_width, 100 * (a.p - b.p), 100 * kMatchMargin,
              ml.opening_shift, ml.opening_raised, ml.opening_searches)};
}

Verdict d_prediction(Context& ctx) {
  const std::vector<int> ds{0, 1, 2, 3, 5, 10};
  const auto& games = ctx.center_games();
  NetworkEvaluator net(ctx.ml());
  const PredictionReport report = d_prediction_rates(games, net, ds, kJCap);
  int violations = 0;
  for (const auto& row : report.rates) {
    for (std::size_t k = 1; k < row.size(); ++k) violations += row[k] < row[k - 1];
  }
  std::ofstream(ctx.workdir / "dpred_center.csv") << [&] {
    std::ostringstream os;
    write_prediction_csv(report, os);
    return os.str();
  }();
  // The oracle evaluator knows each game's final labels, so it runs per game.
  int oracle_games = 0, oracle_positions = 0, oracle_misses = 0;
  const double lo = ctx.grid.k_min() + 0.5, hi = ctx.grid.k_max() + 0.5;
  for (const GameRecord& g : games) {
    if (g.resigned || g.territory_diff < lo || g.territory_diff > hi) continue;
    OracleEvaluator oracle(ctx.grid, g.territory_diff, g.ownership);
    const PredictionReport one = d_prediction_rates(std::span<const GameRecord>(&g, 1), oracle, ds, kJCap);
    ++oracle_games;
    for (const auto& row : one.rates) {
      ++oracle_positions;
      oracle_misses += row[0] != 1.0;
    }
  }
  return {violations == 0 && oracle_misses == 0 && oracle_games > 0,
          fmt("trained evaluator: %d decreases in d over %zu move indices (%d games, filter %s); oracle evaluator "
              "d=0 rate 1.0 at %d/%d positions of %d games",
              violations, report.rates.size(), report.games_used, report.filter.c_str(),
              oracle_positions - oracle_misses, oracle_positions, oracle_games)};
}

Verdict gtp_conformance(Context& ctx) {
  EngineConfig cfg;
  cfg.search.playouts = 64;
  cfg.dynkomi.method = DynKomiMethod::MLDK;
  Engine engine(cfg, std::make_shared<ConstantEvaluator>(ctx.grid, 0.0f));
  GtpServer server(engine);
  const gtp_script::Report r = gtp_script::run(server);
  std::string first = r.failures.empty() ? "" : "; first failure: " + r.failures.front();
  return {r.failures.empty(),
          fmt("%d scripted commands incl. mlvn-values/ownership/dynkomi/score-prediction and malformed input, %zu "
              "failures%s",
              r.steps, r.failures.size(), first.c_str())};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"mlvn acceptance suite"};
  std::string workdir = "acceptance_work";
  std::vector<int> only;
  app.add_option("--workdir", workdir, "Cache directory for trained networks and match results");
  app.add_option("--only", only, "Run only these criteria (1-13)")->delimiter(',');
  CLI11_PARSE(app, argc, argv);

  Context ctx{fs::path(workdir), KomiGrid()};
  fs::create_directories(ctx.workdir);

  struct Criterion {
    int id;
    const char* name;
    std::function<Verdict(Context&)> run;
  };
  const std::vector<Criterion> criteria{
      {1, "ml-dk worked example", ml_dk_example},
      {2, "komi-rate curve", komi_rate_curve},
      {3, "confidence intervals", ci_tables},
      {4, "labels and parity", labels_and_parity},
      {5, "scoring oracle", scoring_oracle},
      {6, "gradient check", gradient_check},
      {7, "training sanity", training_sanity},
      {8, "mse curve", mse_curve_shape},
      {9, "off-center komi", off_center_komi},
      {10, "mixing formula", mixing_formula},
      {11, "handicap dynamic komi", handicap_direction},
      {12, "d-prediction", d_prediction},
      {13, "gtp conformance", gtp_conformance},
  };

  int failed = 0;
  for (const Criterion& c : criteria) {
    if (!only.empty() && std::find(only.begin(), only.end(), c.id) == only.end()) continue;
    Verdict v;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      v = c.run(ctx);
    } catch (const std::exception& e) {
      v = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    failed += !v.pass;
    std::cout << (v.pass ? "[PASS] " : "[FAIL] ") << fmt("%2d %-22s", c.id, c.name) << v.detail
              << fmt(" [%.1fs]", secs) << std::endl;
  }
  return failed == 0 ? 0 : 1;
}

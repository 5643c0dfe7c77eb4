// mlvn: GTP engine and pipeline driver (selfplay, train, eval, match).

#include <CLI11.hpp>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <nlohmann/json.hpp>

#include "mlvn/config.hpp"
#include "mlvn/dataset.hpp"
#include "mlvn/error.hpp"
#include "mlvn/evalharness.hpp"
#include "mlvn/gtp.hpp"
#include "mlvn/random.hpp"
#include "mlvn/sgf.hpp"
#include "mlvn/valuefn.hpp"

namespace fs = std::filesystem;
using json = nlohmann::json;
using namespace mlvn;

namespace {

struct Common {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::string out;
};

std::shared_ptr<Evaluator> make_evaluator(const RunConfig& cfg, const std::string& checkpoint) {
  if (checkpoint.empty()) {
    // Uniform fallback: every komi at 50%, every point undecided.
    return std::make_shared<ConstantEvaluator>(cfg.grid(), 0.0f, 0.5f);
  }
  auto params = load_checkpoint(fs::path(checkpoint));
  if (params.arch.board_size != cfg.board_size()) {
    throw Error(ErrorKind::DimMismatch, "checkpoint board size differs from config");
  }
  return std::make_shared<NetworkEvaluator>(std::move(params));
}

void write_meta(const fs::path& target, const RunConfig& cfg, json extra) {
  extra["config_hash"] = cfg.hash();
  extra["config"] = cfg.to_ini();
  std::ofstream out(target.string() + ".meta.json");
  if (!out) throw Error(ErrorKind::IoError, "cannot write metadata for " + target.string());
  out << extra.dump(2) << '\n';
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw Error(ErrorKind::IoError, "cannot open " + path + " for writing");
  return out;
}

int cmd_gtp(const RunConfig& cfg, const Common& c, const std::string& checkpoint, const std::string& trace) {
  EngineConfig ec;
  ec.search = cfg.search;
  ec.dynkomi = cfg.dynkomi;
  Engine engine(ec, make_evaluator(cfg, checkpoint));
  engine.set_board_size(cfg.board_size());
  engine.set_komi(cfg.selfplay.komi);
  if (c.seed) engine.set_seed(*c.seed);
  std::ofstream trace_out;
  if (!trace.empty()) {
    trace_out = open_out(trace);
    engine.set_trace(&trace_out);
  }
  GtpServer server(engine);
  server.serve(std::cin, std::cout);
  return 0;
}

int cmd_selfplay(const RunConfig& cfg, const Common& c, int games, const std::string& sgf_dir) {
  const std::uint64_t seed = c.seed.value_or(cfg.selfplay.seed);
  const int count = games > 0 ? games : cfg.selfplay.games;
  int discarded = 0;
  const auto records =
      generate_games(count, cfg.board_size(), seed, cfg.selfplay.resolution, cfg.selfplay.komi, 0, &discarded);
  if (!sgf_dir.empty()) {
    fs::create_directories(sgf_dir);
    for (const auto& g : records) {
      char name[32];
      std::snprintf(name, sizeof name, "game_%06u.sgf", g.id);
      write_sgf(g, fs::path(sgf_dir) / name);
    }
  }
  const Dataset data = build_dataset(records, cfg.selfplay.positions_per_game, cfg.grid(), seed);
  write_dataset(data, fs::path(c.out));
  write_meta(c.out, cfg, {{"games", count}, {"discarded", discarded}, {"records", data.records.size()}, {"seed", seed}});
  std::cerr << "wrote " << data.records.size() << " records from " << count << " games to " << c.out << " ("
            << discarded << " over the move cap discarded)\n";
  return 0;
}

int cmd_train(const RunConfig& cfg, const Common& c, const std::string& data_path, const std::string& init,
              const std::string& loss_csv) {
  Dataset data = read_dataset(fs::path(data_path.empty() ? cfg.dataset.string() : data_path));
  if (!(data.grid == cfg.grid()) || data.size != cfg.board_size()) {
    throw Error(ErrorKind::GridMismatch, "dataset grid or size differs from config");
  }
  TrainConfig tc = cfg.train;
  if (c.seed) tc.seed = *c.seed;
  auto [train_set, heldout] = split_by_game(std::move(data.records), cfg.heldout_fraction, tc.seed);
  NetworkParams params = init.empty() ? init_params(cfg.arch, tc.seed) : load_checkpoint(fs::path(init));
  const LossBreakdown zero = zero_network_loss(heldout.empty() ? train_set : heldout);
  std::cerr << "train " << train_set.size() << " heldout " << heldout.size() << " zero-net loss " << zero.total
            << '\n';
  auto result = train(std::move(params), train_set, heldout, tc, [](const EpochStats& e) {
    std::cerr << "epoch " << e.epoch << " lr " << e.learning_rate << " train " << e.train.total;
    if (e.heldout) std::cerr << " heldout " << e.heldout->total;
    std::cerr << '\n';
  });
  const fs::path out = c.out.empty() ? cfg.checkpoint : fs::path(c.out);
  save_checkpoint(result.params, out);
  if (!loss_csv.empty()) {
    auto csv = open_out(loss_csv);
    csv << "# config_hash=" << cfg.hash() << '\n';
    write_loss_csv(result.history, csv);
  }
  json meta{{"train_records", train_set.size()}, {"heldout_records", heldout.size()}, {"seed", tc.seed}};
  meta["zero_loss"] = zero.total;
  if (!result.history.empty() && result.history.back().heldout) meta["final_heldout_loss"] = result.history.back().heldout->total;
  write_meta(out, cfg, meta);
  return 0;
}

int cmd_eval(const RunConfig& cfg, const Common& c, const std::string& metric, const std::string& checkpoint,
             int games, std::optional<double> komi_override) {
  const auto evaluator = make_evaluator(cfg, checkpoint);
  const std::uint64_t seed = c.seed.value_or(derive_seed(cfg.selfplay.seed, 0x65766131));
  const int count = games > 0 ? games : 500;
  const double komi = komi_override.value_or(cfg.eval.komi);
  const auto corpus = generate_games(count, cfg.board_size(), seed, cfg.selfplay.resolution, komi);
  auto out = open_out(c.out);
  out << "# config_hash=" << cfg.hash() << " metric=" << metric << " komi=" << komi << " games=" << count
      << " seed=" << seed << '\n';
  if (metric == "mse") {
    write_mse_csv(mse_curve(corpus, *evaluator, komi, cfg.eval.j_cap), out);
  } else if (metric == "dpred") {
    write_prediction_csv(d_prediction_rates(corpus, *evaluator, cfg.eval.ds, cfg.eval.max_index), out);
  } else {
    Rng rng(mix_seed(seed));
    std::vector<Board> positions;
    for (const auto& g : corpus) positions.push_back(g.position_at(uniform_below(rng, static_cast<int>(g.moves.size()) + 1)));
    const auto s = correlation_scatter(positions, *evaluator, komi);
    out << "# upper_right=" << s.upper_right << " upper_left=" << s.upper_left << " lower_left=" << s.lower_left
        << " lower_right=" << s.lower_right << '\n';
    write_scatter_csv(s, out);
  }
  return 0;
}

int cmd_match(const RunConfig& cfg, const Common& c, const std::string& ckpt_a, const std::string& ckpt_b, int games,
              const std::string& sgf_dir) {
  const auto eval_a = make_evaluator(cfg, ckpt_a);
  const auto eval_b = ckpt_b == ckpt_a ? eval_a : make_evaluator(cfg, ckpt_b);
  EngineConfig ea;
  ea.name = "A";
  ea.search = cfg.search;
  ea.dynkomi = cfg.dynkomi;
  EngineConfig eb = ea;
  eb.name = "B";
  eb.dynkomi.method = cfg.match.opponent_method;
  MatchConfig mc;
  mc.games = games > 0 ? games : cfg.match.games;
  mc.board_size = cfg.board_size();
  mc.komi = cfg.match.komi;
  mc.handicap = cfg.match.handicap;
  mc.seed = c.seed.value_or(cfg.match.seed);
  mc.move_limit = cfg.match.move_limit;
  mc.sgf_dir = sgf_dir;
  mc.name_a = "A:" + std::string(to_string(ea.dynkomi.method));
  mc.name_b = "B:" + std::string(to_string(eb.dynkomi.method));
  const auto result = run_match([&] { return std::make_unique<Engine>(ea, eval_a); },
                                [&] { return std::make_unique<Engine>(eb, eval_b); }, mc,
                                [](const GameOutcome& o) {
                                  std::cerr << "game " << o.index << (o.a_won ? " A" : " B") << " wins n="
                                            << o.territory_diff << (o.failure ? " (" + o.failure_reason + ")" : "")
                                            << '\n';
                                });
  json seeds = json::array();
  json sgfs = json::array();
  for (const auto& o : result.outcomes) {
    seeds.push_back(o.seed);
    if (!o.sgf.empty()) sgfs.push_back(o.sgf.string());
  }
  json doc{{"config_hash", cfg.hash()}, {"config", cfg.to_ini()}, {"games", result.games},
           {"wins", result.wins},       {"losses", result.losses},  {"p", result.p},
           {"ci95", result.ci95},       {"seeds", seeds},           {"sgf", sgfs}};
  auto out = open_out(c.out);
  out << doc.dump(2) << '\n';
  std::cerr << "A win rate " << result.p * 100 << "% (+-" << result.ci95 * 100 << "%)\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"mlvn: multi-labelled value network Go engine"};
  app.require_subcommand(1);
  Common common;
  std::uint64_t seed_value = 0;
  auto add_common = [&](CLI::App* sub, bool needs_out) {
    sub->add_option("--config", common.config_path, "INI config (default: $MLVN_CONFIG or built-in)");
    sub->add_option("--seed", seed_value, "Base seed")->each([&](const std::string&) { common.seed = seed_value; });
    auto* o = sub->add_option("--out", common.out, "Output path");
    if (needs_out) o->required();
  };

  std::string checkpoint, checkpoint_b, trace, data_path, init, loss_csv, sgf_dir, metric;
  int games = 0;
  double komi = 0.0;

  auto* gtp = app.add_subcommand("gtp", "Serve GTP on stdin/stdout");
  add_common(gtp, false);
  gtp->add_option("--checkpoint", checkpoint, "Network checkpoint (default: uniform evaluator)");
  gtp->add_option("--trace", trace, "Write search traces as JSON lines");

  auto* sp = app.add_subcommand("selfplay", "Generate a training dataset");
  add_common(sp, true);
  sp->add_option("--games", games, "Number of games (default from config)");
  sp->add_option("--sgf-dir", sgf_dir, "Also write every game as SGF");

  auto* tr = app.add_subcommand("train", "Train a network on a dataset");
  add_common(tr, false);
  tr->add_option("--data", data_path, "Dataset (default from config)");
  tr->add_option("--init", init, "Start from this checkpoint");
  tr->add_option("--loss-csv", loss_csv, "Per-epoch loss CSV");

  auto* ev = app.add_subcommand("eval", "Measure an evaluator on fresh held-out games");
  add_common(ev, true);
  ev->add_option("metric", metric, "mse | dpred | scatter")->required()->check(CLI::IsMember({"mse", "dpred", "scatter"}));
  ev->add_option("--checkpoint", checkpoint, "Network checkpoint (default: zero evaluator)");
  ev->add_option("--games", games, "Corpus size (default 500)");
  auto* komi_opt = ev->add_option("--komi", komi, "Komi for outcomes and values (default from config)");

  auto* ma = app.add_subcommand("match", "Play engine A against engine B");
  add_common(ma, true);
  ma->add_option("--checkpoint-a", checkpoint, "Checkpoint for engine A");
  ma->add_option("--checkpoint-b", checkpoint_b, "Checkpoint for engine B");
  ma->add_option("--games", games, "Number of games (default from config)");
  ma->add_option("--sgf-dir", sgf_dir, "Directory for game records");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    const RunConfig cfg = resolve_config(common.config_path);
    if (gtp->parsed()) return cmd_gtp(cfg, common, checkpoint, trace);
    if (sp->parsed()) return cmd_selfplay(cfg, common, games, sgf_dir);
    if (tr->parsed()) return cmd_train(cfg, common, data_path, init, loss_csv);
    if (ev->parsed()) {
      std::optional<double> k;
      if (komi_opt->count() > 0) k = komi;
      return cmd_eval(cfg, common, metric, checkpoint, games, k);
    }
    if (ma->parsed()) return cmd_match(cfg, common, checkpoint, checkpoint_b, games, sgf_dir);
  } catch (const Error& e) {
    std::cerr << "mlvn: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "mlvn: " << e.what() << '\n';
    return 2;
  }
  return 1;
}

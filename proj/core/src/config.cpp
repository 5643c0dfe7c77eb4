#include "mlvn/config.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <map>
#include <set>
#include <sstream>

#include "mlvn/error.hpp"

namespace mlvn {

namespace pt = boost::property_tree;

namespace {

std::string resolution_name(ResolutionMode m) {
  return m == ResolutionMode::FullResolution ? "full" : "trust";
}

ResolutionMode parse_resolution(const std::string& s) {
  if (s == "full") return ResolutionMode::FullResolution;
  if (s == "trust") return ResolutionMode::TrustPolicy;
  throw Error(ErrorKind::InvalidConfig, "selfplay.resolution must be 'full' or 'trust'");
}

std::string join(const std::vector<int>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) out += (i ? "," : "") + std::to_string(v[i]);
  return out;
}

std::vector<int> parse_int_list(const std::string& s) {
  std::vector<int> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stoi(item, &used));
      while (used < item.size() && std::isspace(static_cast<unsigned char>(item[used]))) ++used;
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw Error(ErrorKind::InvalidConfig, "bad integer list '" + s + "'");
    }
  }
  return out;
}

std::string fmt(double d) {
  std::ostringstream os;
  os << std::setprecision(17) << d;
  return os.str();
}

/// Key/value view over the parsed tree that records which keys were consumed.
class Doc {
 public:
  explicit Doc(pt::ptree tree) : tree_(std::move(tree)) {}

  template <typename T>
  void get(const char* section, const char* key, T& value) {
    const std::string path = std::string(section) + "." + key;
    used_.insert(path);
    const auto node = tree_.get_child_optional(pt::ptree::path_type(path, '.'));
    if (!node) return;
    const std::string text = node->data();
    if constexpr (std::is_same_v<T, bool>) {
      if (text == "true" || text == "1" || text == "on" || text == "yes") value = true;
      else if (text == "false" || text == "0" || text == "off" || text == "no") value = false;
      else throw Error(ErrorKind::InvalidConfig, path + ": expected a boolean, got '" + text + "'");
    } else if constexpr (std::is_same_v<T, std::string>) {
      value = text;
    } else {
      std::istringstream is(text);
      T parsed{};
      is >> parsed;
      if (is.fail() || !(is >> std::ws).eof()) {
        throw Error(ErrorKind::InvalidConfig, path + ": cannot parse '" + text + "'");
      }
      value = parsed;
    }
  }

  void reject_unknown() const {
    for (const auto& [section, body] : tree_) {
      if (body.empty()) throw Error(ErrorKind::InvalidConfig, "key '" + section + "' outside a section");
      for (const auto& [key, _] : body) {
        if (!used_.count(section + "." + key)) {
          throw Error(ErrorKind::InvalidConfig, "unknown config key " + section + "." + key);
        }
      }
    }
  }

 private:
  pt::ptree tree_;
  std::set<std::string> used_;
};

}  // namespace

void RunConfig::validate() const {
  arch.validate();
  search.validate();
  dynkomi.validate();
  if (train.epochs < 0 || train.batch_size < 1 || train.learning_rate <= 0.0 || train.momentum < 0.0 ||
      train.momentum >= 1.0 || train.decay_every < 1 || train.weight_decay < 0.0) {
    throw Error(ErrorKind::InvalidConfig, "invalid [train] section");
  }
  if (!(heldout_fraction >= 0.0 && heldout_fraction < 1.0)) {
    throw Error(ErrorKind::InvalidConfig, "train.heldout_fraction must be in [0, 1)");
  }
  if (selfplay.games < 1 || selfplay.positions_per_game < 1) {
    throw Error(ErrorKind::InvalidConfig, "selfplay.games and selfplay.positions_per_game must be >= 1");
  }
  if (match.games < 1 || match.handicap < 0 || match.move_limit < 0) {
    throw Error(ErrorKind::InvalidConfig, "invalid [match] section");
  }
  if (eval.j_cap < 0 || eval.max_index < 0 || eval.ds.empty()) {
    throw Error(ErrorKind::InvalidConfig, "invalid [eval] section");
  }
}

std::string RunConfig::to_ini() const {
  std::ostringstream os;
  os << "[board]\nsize = " << arch.board_size << "\n\n";
  os << "[grid]\nk_min = " << fmt(arch.grid.k_min()) << "\nk_max = " << fmt(arch.grid.k_max())
     << "\ncenter = " << fmt(arch.grid.center()) << "\n\n";
  os << "[net]\ntrunk_layers = " << arch.trunk_layers << "\nfilters = " << arch.filters
     << "\nvalue_hidden = " << arch.value_hidden << "\n\n";
  os << "[train]\nepochs = " << train.epochs << "\nbatch_size = " << train.batch_size
     << "\nlearning_rate = " << fmt(train.learning_rate) << "\nmomentum = " << fmt(train.momentum)
     << "\nlr_decay = " << fmt(train.lr_decay) << "\ndecay_every = " << train.decay_every
     << "\nweight_decay = " << fmt(train.weight_decay) << "\naugment = " << (train.augment ? "true" : "false")
     << "\nseed = " << train.seed << "\nheldout_fraction = " << fmt(heldout_fraction) << "\n\n";
  os << "[selfplay]\ngames = " << selfplay.games << "\npositions_per_game = " << selfplay.positions_per_game
     << "\nseed = " << selfplay.seed << "\nkomi = " << fmt(selfplay.komi)
     << "\nresolution = " << resolution_name(selfplay.resolution) << "\n\n";
  os << "[search]\nplayouts = " << search.playouts << "\nc_puct = " << fmt(search.c_puct)
     << "\nlambda = " << fmt(search.lambda) << "\nbatch_size = " << search.batch_size
     << "\nrollout_move_cap = " << search.rollout_move_cap << "\nexpansion_threshold = " << search.expansion_threshold
     << "\nseed = " << search.seed << "\nexact_terminals = " << (search.exact_terminals ? "true" : "false")
     << "\n\n";
  os << "[dynkomi]\nmethod = " << to_string(dynkomi.method) << "\nc = " << fmt(dynkomi.c) << "\ns = " << fmt(dynkomi.s)
     << "\nl = " << fmt(dynkomi.l) << "\nu = " << fmt(dynkomi.u) << "\n\n";
  os << "[match]\ngames = " << match.games << "\nkomi = " << fmt(match.komi) << "\nhandicap = " << match.handicap
     << "\nseed = " << match.seed << "\nmove_limit = " << match.move_limit
     << "\nopponent_method = " << to_string(match.opponent_method) << "\n\n";
  os << "[eval]\nkomi = " << fmt(eval.komi) << "\nj_cap = " << eval.j_cap << "\nds = " << join(eval.ds)
     << "\nmax_index = " << eval.max_index << "\n\n";
  os << "[paths]\ndataset = " << dataset.string() << "\ncheckpoint = " << checkpoint.string() << '\n';
  return os.str();
}

std::string RunConfig::hash() const {
  // FNV-1a over the canonical text.
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : to_ini()) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  std::ostringstream os;
  os << std::hex << std::setw(16) << std::setfill('0') << h;
  return os.str();
}

RunConfig parse_config(std::string_view text) {
  pt::ptree tree;
  try {
    std::istringstream is{std::string(text)};
    pt::read_ini(is, tree);
  } catch (const pt::ini_parser_error& e) {
    throw Error(ErrorKind::InvalidConfig, std::string("config syntax: ") + e.what());
  }
  Doc doc(std::move(tree));
  RunConfig c;
  doc.get("board", "size", c.arch.board_size);
  double k_min = c.arch.grid.k_min(), k_max = c.arch.grid.k_max(), center = c.arch.grid.center();
  doc.get("grid", "k_min", k_min);
  doc.get("grid", "k_max", k_max);
  doc.get("grid", "center", center);
  c.arch.grid = KomiGrid(k_min, k_max, center);
  doc.get("net", "trunk_layers", c.arch.trunk_layers);
  doc.get("net", "filters", c.arch.filters);
  doc.get("net", "value_hidden", c.arch.value_hidden);
  doc.get("train", "epochs", c.train.epochs);
  doc.get("train", "batch_size", c.train.batch_size);
  doc.get("train", "learning_rate", c.train.learning_rate);
  doc.get("train", "momentum", c.train.momentum);
  doc.get("train", "lr_decay", c.train.lr_decay);
  doc.get("train", "decay_every", c.train.decay_every);
  doc.get("train", "weight_decay", c.train.weight_decay);
  doc.get("train", "augment", c.train.augment);
  doc.get("train", "seed", c.train.seed);
  doc.get("train", "heldout_fraction", c.heldout_fraction);
  doc.get("selfplay", "games", c.selfplay.games);
  doc.get("selfplay", "positions_per_game", c.selfplay.positions_per_game);
  doc.get("selfplay", "seed", c.selfplay.seed);
  doc.get("selfplay", "komi", c.selfplay.komi);
  std::string resolution = resolution_name(c.selfplay.resolution);
  doc.get("selfplay", "resolution", resolution);
  c.selfplay.resolution = parse_resolution(resolution);
  doc.get("search", "playouts", c.search.playouts);
  doc.get("search", "c_puct", c.search.c_puct);
  doc.get("search", "lambda", c.search.lambda);
  doc.get("search", "batch_size", c.search.batch_size);
  doc.get("search", "rollout_move_cap", c.search.rollout_move_cap);
  doc.get("search", "expansion_threshold", c.search.expansion_threshold);
  doc.get("search", "seed", c.search.seed);
  doc.get("search", "exact_terminals", c.search.exact_terminals);
  std::string method(to_string(c.dynkomi.method));
  doc.get("dynkomi", "method", method);
  c.dynkomi.method = parse_dynkomi_method(method);
  doc.get("dynkomi", "c", c.dynkomi.c);
  doc.get("dynkomi", "s", c.dynkomi.s);
  doc.get("dynkomi", "l", c.dynkomi.l);
  doc.get("dynkomi", "u", c.dynkomi.u);
  doc.get("match", "games", c.match.games);
  doc.get("match", "komi", c.match.komi);
  doc.get("match", "handicap", c.match.handicap);
  doc.get("match", "seed", c.match.seed);
  doc.get("match", "move_limit", c.match.move_limit);
  std::string opponent(to_string(c.match.opponent_method));
  doc.get("match", "opponent_method", opponent);
  c.match.opponent_method = parse_dynkomi_method(opponent);
  doc.get("eval", "komi", c.eval.komi);
  doc.get("eval", "j_cap", c.eval.j_cap);
  std::string ds = join(c.eval.ds);
  doc.get("eval", "ds", ds);
  c.eval.ds = parse_int_list(ds);
  doc.get("eval", "max_index", c.eval.max_index);
  std::string dataset = c.dataset.string();
  std::string checkpoint = c.checkpoint.string();
  doc.get("paths", "dataset", dataset);
  doc.get("paths", "checkpoint", checkpoint);
  c.dataset = dataset;
  c.checkpoint = checkpoint;
  doc.reject_unknown();
  c.validate();
  return c;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::IoError, "cannot open config " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

RunConfig resolve_config(const std::filesystem::path& explicit_path) {
  if (!explicit_path.empty()) return load_config(explicit_path);
  if (const char* env = std::getenv("MLVN_CONFIG"); env && *env) return load_config(env);
  RunConfig c;
  c.validate();
  return c;
}

}  // namespace mlvn

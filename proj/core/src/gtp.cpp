#include "mlvn/gtp.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <iomanip>
#include <istream>
#include <ostream>
#include <sstream>

#include "mlvn/error.hpp"

namespace mlvn {

namespace {

constexpr const char* kVersion = "0.1.0";

struct GtpError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string preprocess(std::string_view line) {
  std::string out;
  for (char c : line) {
    if (c == '#') break;
    if (c == '\t') c = ' ';
    if (static_cast<unsigned char>(c) < 32 && c != ' ') continue;
    if (c == 127) continue;
    out.push_back(c);
  }
  return out;
}

Color parse_color(const std::string& s) {
  std::string lower;
  for (char c : s) lower.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  if (lower == "b" || lower == "black") return Color::Black;
  if (lower == "w" || lower == "white") return Color::White;
  throw GtpError("invalid color");
}

int parse_int(const std::string& s) {
  try {
    std::size_t used = 0;
    const int v = std::stoi(s, &used);
    if (used != s.size()) throw GtpError("not an integer");
    return v;
  } catch (const std::logic_error&) {
    throw GtpError("not an integer");
  }
}

double parse_float(const std::string& s) {
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size() || !std::isfinite(v)) throw GtpError("not a number");
    return v;
  } catch (const std::logic_error&) {
    throw GtpError("not a number");
  }
}

void need_args(const std::vector<std::string>& args, std::size_t n) {
  if (args.size() < n) throw GtpError("syntax error");
}

std::string format_score(int n, double komi) {
  const double diff = n - komi;
  std::ostringstream os;
  os << (diff > 0 ? "B+" : "W+") << std::abs(diff);
  return os.str();
}

}  // namespace

GtpServer::GtpServer(Engine& engine) : engine_(engine) {}

const std::vector<std::string>& GtpServer::commands() {
  static const std::vector<std::string> list{
      "protocol_version", "name",      "version",    "known_command", "list_commands",
      "boardsize",        "clear_board", "komi",     "fixed_handicap", "play",
      "genmove",          "final_score", "showboard", "quit",        "mlvn-values",
      "mlvn-ownership",   "mlvn-dynkomi", "mlvn-score-prediction"};
  return list;
}

std::string GtpServer::handle(std::string_view raw) {
  const std::string line = preprocess(raw);
  std::istringstream is(line);
  std::vector<std::string> tokens;
  for (std::string t; is >> t;) tokens.push_back(t);
  if (tokens.empty()) return {};
  std::string id;
  if (std::all_of(tokens[0].begin(), tokens[0].end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); })) {
    id = tokens[0];
    tokens.erase(tokens.begin());
    if (tokens.empty()) return "?" + id + " missing command\n\n";
  }
  const std::string command = tokens[0];
  tokens.erase(tokens.begin());
  try {
    std::string body = dispatch(command, tokens);
    return "=" + id + (body.empty() ? "" : " " + body) + "\n\n";
  } catch (const GtpError& e) {
    return "?" + id + " " + e.what() + "\n\n";
  } catch (const Error& e) {
    const std::string msg = e.kind() == ErrorKind::IllegalMove ? "illegal move" : e.what();
    return "?" + id + " " + msg + "\n\n";
  } catch (const std::exception& e) {
    return "?" + id + " internal error: " + e.what() + "\n\n";
  }
}

std::string GtpServer::dispatch(const std::string& command, const std::vector<std::string>& args) {
  if (command == "protocol_version") return "2";
  if (command == "name") return engine_.config().name;
  if (command == "version") return kVersion;
  if (command == "known_command") {
    need_args(args, 1);
    const auto& list = commands();
    return std::find(list.begin(), list.end(), args[0]) != list.end() ? "true" : "false";
  }
  if (command == "list_commands") {
    std::string out;
    for (const auto& c : commands()) out += (out.empty() ? "" : "\n") + c;
    return out;
  }
  if (command == "quit") {
    quit_ = true;
    return {};
  }
  if (command == "boardsize") {
    need_args(args, 1);
    try {
      engine_.set_board_size(parse_int(args[0]));
    } catch (const Error&) {
      throw GtpError("unacceptable size");
    }
    return {};
  }
  if (command == "clear_board") {
    engine_.clear_board();
    return {};
  }
  if (command == "komi") {
    need_args(args, 1);
    engine_.set_komi(parse_float(args[0]));
    return {};
  }
  if (command == "fixed_handicap") {
    need_args(args, 1);
    const int h = parse_int(args[0]);
    if (h < 2) throw GtpError("invalid number of stones");
    std::vector<int> stones;
    try {
      stones = engine_.place_handicap(h);
    } catch (const Error& e) {
      if (e.kind() == ErrorKind::BoardNotEmpty) throw GtpError("board not empty");
      throw GtpError("invalid number of stones");
    }
    std::string out;
    for (int v : stones) out += (out.empty() ? "" : " ") + engine_.board().vertex_name(Move::at(v));
    return out;
  }
  if (command == "play") {
    need_args(args, 2);
    const Color c = parse_color(args[0]);
    Move m;
    try {
      m = engine_.board().parse_vertex(args[1]);
    } catch (const Error&) {
      throw GtpError("invalid vertex");
    }
    engine_.play(c, m);
    return {};
  }
  if (command == "genmove") {
    need_args(args, 1);
    const Color c = parse_color(args[0]);
    const Move m = engine_.genmove(c);
    return engine_.board().vertex_name(m);
  }
  if (command == "final_score") {
    const Board& b = engine_.board();
    const int n = b.game_over() ? b.final_ownership().second.territory_diff : b.area_score().territory_diff;
    return format_score(n, b.komi());
  }
  if (command == "showboard") {
    // No blank lines inside a response.
    std::string text = engine_.board().to_string();
    while (!text.empty() && text.back() == '\n') text.pop_back();
    return "\n" + text;
  }
  if (command == "mlvn-values") {
    const Evaluation e = engine_.evaluate_position();
    const KomiGrid& grid = engine_.evaluator().grid();
    std::ostringstream os;
    os << std::fixed << std::setprecision(4);
    for (int k = 0; k < grid.count(); ++k) {
      if (k) os << '\n';
      os << std::setprecision(1) << grid.komi_at(k) << ' ' << std::setprecision(4) << e.win_rate(k);
    }
    return os.str();
  }
  if (command == "mlvn-ownership") {
    const Evaluation e = engine_.evaluate_position();
    const int size = engine_.board().size();
    std::ostringstream os;
    os << std::fixed << std::setprecision(3);
    for (int r = 0; r < size; ++r) {
      if (r) os << '\n';
      for (int c = 0; c < size; ++c) os << (c ? " " : "") << e.ownership[r * size + c];
    }
    return os.str();
  }
  if (command == "mlvn-dynkomi") {
    const DynamicKomi& dk = engine_.dynamic_komi();
    std::ostringstream os;
    os << "method " << to_string(dk.config().method) << " komi " << dk.current() << " real " << dk.real_komi();
    return os.str();
  }
  if (command == "mlvn-score-prediction") {
    const Evaluation e = engine_.evaluate_position();
    return std::to_string(predicted_score(e, engine_.evaluator().grid()).lead);
  }
  throw GtpError("unknown command");
}

void GtpServer::serve(std::istream& in, std::ostream& out) {
  for (std::string line; !quit_ && std::getline(in, line);) {
    const std::string response = handle(line);
    if (response.empty()) continue;
    out << response << std::flush;
  }
}

}  // namespace mlvn

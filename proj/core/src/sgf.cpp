#include "mlvn/sgf.hpp"

#include <cctype>
#include <cmath>
#include <fstream>
#include <sstream>
#include <utility>
#include <vector>

#include "mlvn/error.hpp"

namespace mlvn {

namespace {

std::string coord(int size, int vertex) {
  const int col = vertex % size;
  const int row = vertex / size;
  return {static_cast<char>('a' + col), static_cast<char>('a' + row)};
}

std::string escape(std::string_view s) {
  std::string out;
  for (char c : s) {
    if (c == ']' || c == '\\') out.push_back('\\');
    out.push_back(c);
  }
  return out;
}

std::string format_komi(double k) {
  std::ostringstream os;
  os << k;
  return os.str();
}

std::string result_string(const GameRecord& game) {
  const bool black = game.territory_diff > game.komi;
  std::string out = black ? "B+" : "W+";
  if (game.resigned) return out + "R";
  return out + format_komi(std::abs(game.territory_diff - game.komi));
}

using Property = std::pair<std::string, std::vector<std::string>>;
using Node = std::vector<Property>;

class Parser {
 public:
  explicit Parser(std::string_view text) : s_(text) {}

  std::vector<Node> main_line() {
    skip_ws();
    if (pos_ >= s_.size() || s_[pos_] != '(') fail("expected '('");
    std::vector<Node> nodes;
    while (pos_ < s_.size()) {
      const char c = s_[pos_];
      if (c == '(') {
        ++pos_;
      } else if (c == ')') {
        // The first closing paren ends the leftmost variation.
        return nodes;
      } else if (c == ';') {
        ++pos_;
        nodes.push_back(node());
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        ++pos_;
      } else {
        fail("unexpected character");
      }
    }
    fail("unterminated game tree");
  }

 private:
  [[noreturn]] void fail(const std::string& what) const {
    throw Error(ErrorKind::FormatError, "sgf: " + what + " at offset " + std::to_string(pos_));
  }

  void skip_ws() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }

  Node node() {
    Node n;
    for (;;) {
      skip_ws();
      if (pos_ >= s_.size() || !std::isupper(static_cast<unsigned char>(s_[pos_]))) return n;
      std::string ident;
      while (pos_ < s_.size() && std::isupper(static_cast<unsigned char>(s_[pos_]))) ident.push_back(s_[pos_++]);
      std::vector<std::string> values;
      skip_ws();
      while (pos_ < s_.size() && s_[pos_] == '[') {
        values.push_back(value());
        skip_ws();
      }
      if (values.empty()) fail("property " + ident + " without value");
      n.emplace_back(std::move(ident), std::move(values));
    }
  }

  std::string value() {
    ++pos_;
    std::string out;
    while (pos_ < s_.size() && s_[pos_] != ']') {
      if (s_[pos_] == '\\') {
        ++pos_;
        if (pos_ >= s_.size()) break;
      }
      out.push_back(s_[pos_++]);
    }
    if (pos_ >= s_.size()) fail("unterminated property value");
    ++pos_;
    return out;
  }

  std::string_view s_;
  std::size_t pos_ = 0;
};

Move parse_point(const std::string& v, int size) {
  if (v.empty() || (v == "tt" && size <= 19)) return Move::pass();
  if (v.size() != 2) throw Error(ErrorKind::FormatError, "sgf: bad point '" + v + "'");
  const int col = v[0] - 'a';
  const int row = v[1] - 'a';
  if (col < 0 || col >= size || row < 0 || row >= size) {
    throw Error(ErrorKind::FormatError, "sgf: point '" + v + "' off board");
  }
  return Move::at(row * size + col);
}

double parse_number(const std::string& v, const char* what) {
  try {
    std::size_t used = 0;
    const double d = std::stod(v, &used);
    if (used != v.size()) throw std::invalid_argument(v);
    return d;
  } catch (const std::exception&) {
    throw Error(ErrorKind::FormatError, std::string("sgf: bad ") + what + " '" + v + "'");
  }
}

}  // namespace

std::string to_sgf(const GameRecord& game, const SgfPlayers& players) {
  std::ostringstream os;
  os << "(;GM[1]FF[4]CA[UTF-8]SZ[" << game.size << "]KM[" << format_komi(game.komi) << ']';
  if (!players.black.empty()) os << "PB[" << escape(players.black) << ']';
  if (!players.white.empty()) os << "PW[" << escape(players.white) << ']';
  if (!game.setup_black.empty()) {
    os << "HA[" << (game.handicap > 0 ? game.handicap : static_cast<int>(game.setup_black.size())) << "]AB";
    for (int v : game.setup_black) os << '[' << coord(game.size, v) << ']';
  }
  os << "RE[" << result_string(game) << ']';
  Color side = game.setup_black.empty() ? Color::Black : Color::White;
  for (const Move& m : game.moves) {
    os << "\n;" << (side == Color::Black ? 'B' : 'W') << '[' << (m.is_pass() ? "" : coord(game.size, m.vertex())) << ']';
    side = opponent(side);
  }
  os << ")\n";
  return os.str();
}

GameRecord from_sgf(std::string_view text) {
  const auto nodes = Parser(text).main_line();
  if (nodes.empty()) throw Error(ErrorKind::FormatError, "sgf: no nodes");
  GameRecord game;
  game.size = 19;
  game.komi = 0.0;
  bool resigned = false;
  for (const auto& [id, values] : nodes.front()) {
    if (id == "SZ") game.size = static_cast<int>(parse_number(values[0], "size"));
    if (id == "KM") game.komi = parse_number(values[0], "komi");
    if (id == "HA") game.handicap = static_cast<int>(parse_number(values[0], "handicap"));
    if (id == "RE") resigned = values[0].size() > 2 && values[0].substr(2) == "R";
  }
  if (game.size < 2 || game.size > 25) throw Error(ErrorKind::FormatError, "sgf: unsupported size");
  for (const auto& [id, values] : nodes.front()) {
    if (id == "AB") {
      for (const auto& v : values) {
        const Move m = parse_point(v, game.size);
        if (m.is_pass()) throw Error(ErrorKind::FormatError, "sgf: empty AB point");
        game.setup_black.push_back(m.vertex());
      }
    } else if (id == "AW") {
      throw Error(ErrorKind::FormatError, "sgf: white setup stones are not supported");
    }
  }
  Board board = game.initial_board();
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    for (const auto& [id, values] : nodes[i]) {
      if (id != "B" && id != "W") continue;
      const Color c = id == "B" ? Color::Black : Color::White;
      if (c != board.to_move()) throw Error(ErrorKind::FormatError, "sgf: moves out of turn");
      const Move m = parse_point(values[0], game.size);
      board.play(m);
      game.moves.push_back(m);
    }
  }
  if (board.game_over()) {
    auto [own, score] = board.final_ownership();
    game.ownership = std::move(own);
    game.territory_diff = score.territory_diff;
  } else {
    game.ownership = board.area_ownership();
    game.territory_diff = board.area_score().territory_diff;
  }
  game.resigned = resigned;
  return game;
}

void write_sgf(const GameRecord& game, const std::filesystem::path& path, const SgfPlayers& players) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw Error(ErrorKind::IoError, "cannot open " + path.string() + " for writing");
  out << to_sgf(game, players);
  if (!out) throw Error(ErrorKind::IoError, "write failed for " + path.string());
}

GameRecord read_sgf(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::IoError, "cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return from_sgf(buf.str());
}

}  // namespace mlvn

#include "mlvn/board.hpp"

#include <algorithm>
#include <cctype>
#include <cstring>
#include <memory>
#include <mutex>
#include <random>
#include <sstream>

#include "mlvn/error.hpp"

namespace mlvn {

std::string_view to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::InvalidSize: return "InvalidSize";
    case ErrorKind::BoardNotEmpty: return "BoardNotEmpty";
    case ErrorKind::UnsupportedHandicap: return "UnsupportedHandicap";
    case ErrorKind::GameOver: return "GameOver";
    case ErrorKind::IllegalMove: return "IllegalMove";
    case ErrorKind::GameNotOver: return "GameNotOver";
    case ErrorKind::MoveLimitExceeded: return "MoveLimitExceeded";
    case ErrorKind::IoError: return "IoError";
    case ErrorKind::FormatError: return "FormatError";
    case ErrorKind::InvalidConfig: return "InvalidConfig";
    case ErrorKind::DimMismatch: return "DimMismatch";
    case ErrorKind::EmptyHistogram: return "EmptyHistogram";
    case ErrorKind::OutOfRange: return "OutOfRange";
    case ErrorKind::GridMismatch: return "GridMismatch";
    case ErrorKind::EmptyDataset: return "EmptyDataset";
    case ErrorKind::EngineFailure: return "EngineFailure";
  }
  return "Unknown";
}

char color_char(Color c) noexcept {
  switch (c) {
    case Color::Black: return 'X';
    case Color::White: return 'O';
    default: return '.';
  }
}

namespace {

constexpr const char* kColumnLetters = "ABCDEFGHJKLMNOPQRST";

struct ZobristTable {
  std::array<std::array<std::uint64_t, 3>, Topology::kMaxPoints> keys{};
  std::uint64_t side = 0;

  ZobristTable() {
    std::mt19937_64 gen(0x4d4c564eULL);
    for (auto& k : keys) {
      k[0] = 0;
      k[1] = gen();
      k[2] = gen();
    }
    side = gen();
  }
};

const ZobristTable& zobrist_table() {
  static const ZobristTable table;
  return table;
}

bool valid_size(int size) { return size >= 5 && size <= 19 && size % 2 == 1; }

}  // namespace

const Topology& Topology::get(int size) {
  static std::array<std::unique_ptr<Topology>, kMaxSize + 1> cache;
  static std::once_flag flags[kMaxSize + 1];
  if (!valid_size(size)) {
    throw Error(ErrorKind::InvalidSize, "board size must be odd and within 5..19, got " +
                                            std::to_string(size));
  }
  std::call_once(flags[size], [size] {
    auto t = std::make_unique<Topology>();
    t->size = size;
    t->points = size * size;
    for (int v = 0; v < t->points; ++v) {
      const int c = v % size;
      const int r = v / size;
      std::uint8_t n = 0;
      if (r > 0) t->adj[v][n++] = static_cast<std::int16_t>(v - size);
      if (c > 0) t->adj[v][n++] = static_cast<std::int16_t>(v - 1);
      if (c < size - 1) t->adj[v][n++] = static_cast<std::int16_t>(v + 1);
      if (r < size - 1) t->adj[v][n++] = static_cast<std::int16_t>(v + size);
      t->adj_count[v] = n;
      std::uint8_t d = 0;
      for (int dr : {-1, 1}) {
        for (int dc : {-1, 1}) {
          const int rr = r + dr;
          const int cc = c + dc;
          if (rr >= 0 && rr < size && cc >= 0 && cc < size) {
            t->diag[v][d++] = static_cast<std::int16_t>(rr * size + cc);
          }
        }
      }
      t->diag_count[v] = d;
    }
    cache[size] = std::move(t);
  });
  return *cache[size];
}

std::uint64_t Board::zobrist(int vertex, Color c) noexcept {
  return zobrist_table().keys[vertex][static_cast<int>(c)];
}

std::uint64_t Board::zobrist_side() noexcept { return zobrist_table().side; }

Board::Board(int size, double komi) : topo_(&Topology::get(size)), size_(size), komi_(komi) {
  grid_.fill(Color::Empty);
  for (int v = 0; v < kMaxPoints; ++v) {
    parent_[v] = static_cast<std::int16_t>(v);
    next_[v] = static_cast<std::int16_t>(v);
  }
  hash_ = recompute_hash();
  history_.push_back(hash_);
}

std::optional<int> Board::ko_point() const noexcept {
  if (ko_ < 0) return std::nullopt;
  return ko_;
}

std::optional<Move> Board::last_move() const noexcept {
  if (last_move_ == -2) return std::nullopt;
  return last_move_ < 0 ? Move::pass() : Move::at(last_move_);
}

int Board::captures(Color by) const noexcept {
  return by == Color::Black ? captures_black_ : (by == Color::White ? captures_white_ : 0);
}

int Board::stone_count() const noexcept {
  int n = 0;
  for (int v = 0; v < topo_->points; ++v) n += grid_[v] != Color::Empty;
  return n;
}

std::vector<Point> Board::star_points(int size) {
  if (!valid_size(size)) throw Error(ErrorKind::InvalidSize, std::to_string(size));
  const int e = size >= 13 ? 3 : (size >= 7 ? 2 : 1);
  const int f = size - 1 - e;
  const int m = size / 2;
  return {{e, e}, {f, f}, {e, f}, {f, e}, {m, m}};
}

void Board::place_handicap(int h) {
  if (!empty() || move_count_ != 0) {
    throw Error(ErrorKind::BoardNotEmpty, "handicap stones need an empty board");
  }
  const auto stars = star_points(size_);
  if (h < 1 || h > static_cast<int>(stars.size())) {
    throw Error(ErrorKind::UnsupportedHandicap, "handicap must be 1.." +
                                                    std::to_string(stars.size()));
  }
  if (h == 1) {
    // Fixed upper-right star instead of free placement.
    set_stone(vertex(stars[3]), Color::Black);
  } else {
    for (int i = 0; i < h; ++i) set_stone(vertex(stars[i]), Color::Black);
  }
  set_to_move(Color::White);
}

void Board::set_stone(int vertex, Color c) {
  if (vertex < 0 || vertex >= topo_->points) {
    throw Error(ErrorKind::IllegalMove, "setup vertex out of range");
  }
  grid_[vertex] = c;
  rebuild_strings();
  for (int v = 0; v < topo_->points; ++v) {
    if (grid_[v] != Color::Empty && parent_[v] == v && libs_[v] == 0) {
      throw Error(ErrorKind::IllegalMove, "setup leaves a string without liberties");
    }
  }
  ko_ = -1;
  hash_ = recompute_hash();
  history_.assign(1, hash_);
}

void Board::set_to_move(Color c) {
  if (c == Color::Empty) throw Error(ErrorKind::IllegalMove, "side to move must be a colour");
  to_move_ = c;
  hash_ = recompute_hash();
  history_.assign(1, hash_);
}

void Board::rebuild_strings() {
  const int n = topo_->points;
  for (int v = 0; v < n; ++v) {
    parent_[v] = static_cast<std::int16_t>(v);
    next_[v] = static_cast<std::int16_t>(v);
    stones_[v] = 0;
    libs_[v] = 0;
  }
  std::vector<char> seen(n, 0);
  std::vector<int> stack;
  for (int v = 0; v < n; ++v) {
    if (grid_[v] == Color::Empty || seen[v]) continue;
    const Color c = grid_[v];
    std::vector<int> members;
    stack.assign(1, v);
    seen[v] = 1;
    while (!stack.empty()) {
      const int x = stack.back();
      stack.pop_back();
      members.push_back(x);
      for (int k = 0; k < topo_->adj_count[x]; ++k) {
        const int y = topo_->adj[x][k];
        if (grid_[y] == c && !seen[y]) {
          seen[y] = 1;
          stack.push_back(y);
        }
      }
    }
    int libs = 0;
    for (std::size_t i = 0; i < members.size(); ++i) {
      const int x = members[i];
      parent_[x] = static_cast<std::int16_t>(v);
      next_[x] = static_cast<std::int16_t>(members[(i + 1) % members.size()]);
      for (int k = 0; k < topo_->adj_count[x]; ++k) libs += grid_[topo_->adj[x][k]] == Color::Empty;
    }
    stones_[v] = static_cast<std::int16_t>(members.size());
    libs_[v] = static_cast<std::int16_t>(libs);
  }
}

bool Board::string_has_other_liberty(int root, int excluded) const noexcept {
  int x = root;
  do {
    for (int k = 0; k < topo_->adj_count[x]; ++k) {
      const int y = topo_->adj[x][k];
      if (y != excluded && grid_[y] == Color::Empty) return true;
    }
    x = next_[x];
  } while (x != root);
  return false;
}

bool Board::basic_legal(int vertex, Color c) const noexcept {
  if (grid_[vertex] != Color::Empty || vertex == ko_) return false;
  const Color opp = opponent(c);
  for (int k = 0; k < topo_->adj_count[vertex]; ++k) {
    const int y = topo_->adj[vertex][k];
    const Color yc = grid_[y];
    if (yc == Color::Empty) return true;
    const int root = parent_[y];
    // Pseudo-liberties beyond the adjacencies to `vertex` mean a real liberty elsewhere.
    int adjacency = 0;
    for (int j = 0; j < topo_->adj_count[vertex]; ++j) {
      adjacency += grid_[topo_->adj[vertex][j]] != Color::Empty && parent_[topo_->adj[vertex][j]] == root;
    }
    if (yc == c && libs_[root] > adjacency) return true;
    if (yc == opp && libs_[root] == adjacency) return true;
  }
  return false;
}

std::uint64_t Board::hash_after(int vertex, Color c) const noexcept {
  std::uint64_t h = hash_ ^ zobrist(vertex, c) ^ zobrist_side();
  const Color opp = opponent(c);
  std::array<int, 4> done{-1, -1, -1, -1};
  int ndone = 0;
  for (int k = 0; k < topo_->adj_count[vertex]; ++k) {
    const int y = topo_->adj[vertex][k];
    if (grid_[y] != opp) continue;
    const int root = parent_[y];
    if (std::find(done.begin(), done.begin() + ndone, root) != done.begin() + ndone) continue;
    done[ndone++] = root;
    if (!string_has_other_liberty(root, vertex)) {
      int x = root;
      do {
        h ^= zobrist(x, opp);
        x = next_[x];
      } while (x != root);
    }
  }
  return h;
}

bool Board::repeats_position(int vertex, Color c) const noexcept {
  const std::uint64_t h = hash_after(vertex, c);
  return std::find(history_.begin(), history_.end(), h) != history_.end();
}

bool Board::is_legal(Move m) const noexcept {
  if (game_over()) return false;
  if (m.is_pass()) return true;
  const int v = m.vertex();
  if (v < 0 || v >= topo_->points) return false;
  return basic_legal(v, to_move_) && !repeats_position(v, to_move_);
}

std::string Board::illegal_reason(Move m) const {
  if (game_over()) return "game over";
  if (m.is_pass()) return {};
  const int v = m.vertex();
  if (v < 0 || v >= topo_->points) return "off board";
  if (grid_[v] != Color::Empty) return "occupied";
  if (v == ko_) return "ko";
  if (!basic_legal(v, to_move_)) return "suicide";
  if (repeats_position(v, to_move_)) return "superko";
  return {};
}

std::vector<Move> Board::legal_moves() const {
  if (game_over()) throw Error(ErrorKind::GameOver, "no moves after two passes");
  std::vector<Move> moves;
  moves.reserve(topo_->points + 1);
  for (int v = 0; v < topo_->points; ++v) {
    if (basic_legal(v, to_move_) && !repeats_position(v, to_move_)) moves.push_back(Move::at(v));
  }
  moves.push_back(Move::pass());
  return moves;
}

void Board::merge_strings(int keep, int absorb) {
  stones_[keep] = static_cast<std::int16_t>(stones_[keep] + stones_[absorb]);
  libs_[keep] = static_cast<std::int16_t>(libs_[keep] + libs_[absorb]);
  int x = absorb;
  do {
    parent_[x] = static_cast<std::int16_t>(keep);
    x = next_[x];
  } while (x != absorb);
  std::swap(next_[keep], next_[absorb]);
}

int Board::remove_string(int root) {
  const Color c = grid_[root];
  int removed = 0;
  int x = root;
  do {
    const int nx = next_[x];
    grid_[x] = Color::Empty;
    hash_ ^= zobrist(x, c);
    ++removed;
    for (int k = 0; k < topo_->adj_count[x]; ++k) {
      const int y = topo_->adj[x][k];
      if (grid_[y] != Color::Empty) ++libs_[parent_[y]];
    }
    parent_[x] = static_cast<std::int16_t>(x);
    next_[x] = static_cast<std::int16_t>(x);
    x = nx;
  } while (x != root);
  return removed;
}

void Board::add_stone(int vertex, Color c) {
  grid_[vertex] = c;
  hash_ ^= zobrist(vertex, c);
  parent_[vertex] = static_cast<std::int16_t>(vertex);
  next_[vertex] = static_cast<std::int16_t>(vertex);
  stones_[vertex] = 1;
  int libs = 0;
  for (int k = 0; k < topo_->adj_count[vertex]; ++k) {
    const int y = topo_->adj[vertex][k];
    if (grid_[y] == Color::Empty) {
      ++libs;
    } else {
      --libs_[parent_[y]];
    }
  }
  libs_[vertex] = static_cast<std::int16_t>(libs);
}

void Board::play(Move m) {
  if (game_over()) throw Error(ErrorKind::GameOver, "game already ended");
  const Color c = to_move_;
  if (m.is_pass()) {
    ++passes_;
    ko_ = -1;
    last_move_ = -1;
  } else {
    const std::string reason = illegal_reason(m);
    if (!reason.empty()) {
      throw Error(ErrorKind::IllegalMove, vertex_name(m) + " (" + reason + ")");
    }
    const int v = m.vertex();
    add_stone(v, c);
    const Color opp = opponent(c);
    int captured = 0;
    int captured_at = -1;
    for (int k = 0; k < topo_->adj_count[v]; ++k) {
      const int y = topo_->adj[v][k];
      if (grid_[y] == opp && libs_[parent_[y]] == 0) {
        captured_at = y;
        captured += remove_string(parent_[y]);
      }
    }
    int root = v;
    for (int k = 0; k < topo_->adj_count[v]; ++k) {
      const int y = topo_->adj[v][k];
      if (grid_[y] == c && parent_[y] != parent_[root]) {
        const int a = parent_[root];
        const int b = parent_[y];
        if (stones_[a] >= stones_[b]) {
          merge_strings(a, b);
        } else {
          merge_strings(b, a);
        }
        root = parent_[v];
      }
    }
    root = parent_[v];
    ko_ = (captured == 1 && stones_[root] == 1 && libs_[root] == 1) ? captured_at : -1;
    if (c == Color::Black) {
      captures_black_ += captured;
    } else {
      captures_white_ += captured;
    }
    passes_ = 0;
    last_move_ = v;
  }
  to_move_ = opponent(c);
  hash_ ^= zobrist_side();
  history_.push_back(hash_);
  ++move_count_;
}

int Board::liberties(int vertex) const {
  if (grid_[vertex] == Color::Empty) return 0;
  std::array<bool, kMaxPoints> seen{};
  const int root = parent_[vertex];
  int count = 0;
  int x = root;
  do {
    for (int k = 0; k < topo_->adj_count[x]; ++k) {
      const int y = topo_->adj[x][k];
      if (grid_[y] == Color::Empty && !seen[y]) {
        seen[y] = true;
        ++count;
      }
    }
    x = next_[x];
  } while (x != root);
  return count;
}

int Board::string_size(int vertex) const noexcept {
  return grid_[vertex] == Color::Empty ? 0 : stones_[parent_[vertex]];
}

std::vector<int> Board::string_stones(int vertex) const {
  std::vector<int> out;
  if (grid_[vertex] == Color::Empty) return out;
  const int root = parent_[vertex];
  int x = root;
  do {
    out.push_back(x);
    x = next_[x];
  } while (x != root);
  return out;
}

bool Board::is_true_eye(int vertex, Color c) const noexcept {
  if (grid_[vertex] != Color::Empty) return false;
  for (int k = 0; k < topo_->adj_count[vertex]; ++k) {
    if (grid_[topo_->adj[vertex][k]] != c) return false;
  }
  const Color opp = opponent(c);
  int enemy = 0;
  for (int k = 0; k < topo_->diag_count[vertex]; ++k) {
    enemy += grid_[topo_->diag[vertex][k]] == opp;
  }
  const bool edge = topo_->diag_count[vertex] < 4;
  return edge ? enemy == 0 : enemy <= 1;
}

bool Board::is_self_atari(int vertex, Color c) const {
  if (!basic_legal(vertex, c)) return false;
  const Color opp = opponent(c);
  for (int k = 0; k < topo_->adj_count[vertex]; ++k) {
    const int y = topo_->adj[vertex][k];
    if (grid_[y] == opp && !string_has_other_liberty(parent_[y], vertex)) return false;
  }
  // Liberties and size of the string the move would form.
  std::array<bool, kMaxPoints> lib_seen{};
  std::array<int, 4> roots{-1, -1, -1, -1};
  int nroots = 0;
  int libs = 0;
  int stones = 1;
  for (int k = 0; k < topo_->adj_count[vertex]; ++k) {
    const int y = topo_->adj[vertex][k];
    if (grid_[y] == Color::Empty) {
      if (!lib_seen[y]) {
        lib_seen[y] = true;
        ++libs;
      }
    } else if (grid_[y] == c) {
      const int root = parent_[y];
      if (std::find(roots.begin(), roots.begin() + nroots, root) != roots.begin() + nroots) continue;
      roots[nroots++] = root;
      stones += stones_[root];
      int x = root;
      do {
        for (int j = 0; j < topo_->adj_count[x]; ++j) {
          const int z = topo_->adj[x][j];
          if (z != vertex && grid_[z] == Color::Empty && !lib_seen[z]) {
            lib_seen[z] = true;
            ++libs;
          }
        }
        x = next_[x];
      } while (x != root);
    }
    if (libs > 1) return false;
  }
  return libs == 1 && stones >= 2;
}

Ownership Board::area_ownership() const {
  const int n = topo_->points;
  Ownership owner(n, Owner::Neutral);
  std::vector<char> seen(n, 0);
  std::vector<int> region;
  std::vector<int> stack;
  for (int v = 0; v < n; ++v) {
    if (grid_[v] == Color::Black) {
      owner[v] = Owner::Black;
      continue;
    }
    if (grid_[v] == Color::White) {
      owner[v] = Owner::White;
      continue;
    }
    if (seen[v]) continue;
    bool touches_black = false;
    bool touches_white = false;
    region.clear();
    stack.assign(1, v);
    seen[v] = 1;
    while (!stack.empty()) {
      const int x = stack.back();
      stack.pop_back();
      region.push_back(x);
      for (int k = 0; k < topo_->adj_count[x]; ++k) {
        const int y = topo_->adj[x][k];
        switch (grid_[y]) {
          case Color::Black: touches_black = true; break;
          case Color::White: touches_white = true; break;
          case Color::Empty:
            if (!seen[y]) {
              seen[y] = 1;
              stack.push_back(y);
            }
            break;
        }
      }
    }
    Owner o = Owner::Neutral;
    if (touches_black && !touches_white) o = Owner::Black;
    if (touches_white && !touches_black) o = Owner::White;
    for (int x : region) owner[x] = o;
  }
  return owner;
}

ScoreResult Board::area_score() const {
  const Ownership own = area_ownership();
  ScoreResult r;
  for (Owner o : own) r.territory_diff += (o == Owner::Black) - (o == Owner::White);
  return r;
}

std::pair<Ownership, ScoreResult> Board::final_ownership() const {
  if (!game_over()) throw Error(ErrorKind::GameNotOver, "final ownership needs two passes");
  Ownership own = area_ownership();
  ScoreResult r;
  for (Owner o : own) r.territory_diff += (o == Owner::Black) - (o == Owner::White);
  return {std::move(own), r};
}

std::uint64_t Board::recompute_hash() const noexcept {
  std::uint64_t h = 0;
  for (int v = 0; v < topo_->points; ++v) h ^= zobrist(v, grid_[v]);
  if (to_move_ == Color::White) h ^= zobrist_side();
  return h;
}

std::string Board::to_string() const {
  std::ostringstream os;
  os << "   ";
  for (int c = 0; c < size_; ++c) os << kColumnLetters[c] << ' ';
  os << '\n';
  for (int r = 0; r < size_; ++r) {
    const int label = size_ - r;
    os << (label < 10 ? " " : "") << label << ' ';
    for (int c = 0; c < size_; ++c) os << color_char(grid_[r * size_ + c]) << ' ';
    os << '\n';
  }
  return os.str();
}

std::string Board::vertex_name(Move m) const {
  if (m.is_pass()) return "pass";
  const Point p = point(m.vertex());
  return std::string(1, kColumnLetters[p.col]) + std::to_string(size_ - p.row);
}

Move Board::parse_vertex(const std::string& text) const {
  std::string t;
  for (char ch : text) t.push_back(static_cast<char>(std::toupper(static_cast<unsigned char>(ch))));
  if (t == "PASS") return Move::pass();
  if (t.size() < 2 || t.size() > 3) throw Error(ErrorKind::IllegalMove, "bad vertex '" + text + "'");
  const char* pos = std::strchr(kColumnLetters, t[0]);
  if (pos == nullptr || t[0] == '\0') throw Error(ErrorKind::IllegalMove, "bad column in '" + text + "'");
  const int col = static_cast<int>(pos - kColumnLetters);
  int row_label = 0;
  for (std::size_t i = 1; i < t.size(); ++i) {
    if (!std::isdigit(static_cast<unsigned char>(t[i]))) {
      throw Error(ErrorKind::IllegalMove, "bad row in '" + text + "'");
    }
    row_label = row_label * 10 + (t[i] - '0');
  }
  if (col >= size_ || row_label < 1 || row_label > size_) {
    throw Error(ErrorKind::IllegalMove, "vertex off board '" + text + "'");
  }
  return Move::at((size_ - row_label) * size_ + col);
}

}  // namespace mlvn

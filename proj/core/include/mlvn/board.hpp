#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace mlvn {

enum class Color : std::uint8_t { Empty = 0, Black = 1, White = 2 };

constexpr Color opponent(Color c) noexcept {
  return c == Color::Black ? Color::White : (c == Color::White ? Color::Black : Color::Empty);
}

char color_char(Color c) noexcept;

struct Point {
  int col = 0;
  int row = 0;
  friend bool operator==(const Point&, const Point&) = default;
};

/// A board vertex index (row * size + col) or a pass.
class Move {
 public:
  static constexpr int kPassVertex = -1;

  constexpr Move() = default;
  static constexpr Move pass() noexcept { return Move{}; }
  static constexpr Move at(int vertex) noexcept { return Move{vertex}; }

  constexpr bool is_pass() const noexcept { return vertex_ == kPassVertex; }
  constexpr int vertex() const noexcept { return vertex_; }

  friend constexpr bool operator==(Move, Move) = default;

 private:
  constexpr explicit Move(int v) : vertex_(v) {}
  int vertex_ = kPassVertex;
};

enum class Owner : std::uint8_t { Neutral = 0, Black = 1, White = 2 };

/// Per-point owner at game end.
using Ownership = std::vector<Owner>;

struct ScoreResult {
  /// Black-owned points minus White-owned points (area scoring, no komi).
  int territory_diff = 0;

  bool black_wins(double komi) const noexcept { return territory_diff > komi; }
};

/// Neighbour tables for one board size.
struct Topology {
  static constexpr int kMaxSize = 19;
  static constexpr int kMaxPoints = kMaxSize * kMaxSize;

  int size = 0;
  int points = 0;
  std::array<std::array<std::int16_t, 4>, kMaxPoints> adj{};
  std::array<std::uint8_t, kMaxPoints> adj_count{};
  std::array<std::array<std::int16_t, 4>, kMaxPoints> diag{};
  std::array<std::uint8_t, kMaxPoints> diag_count{};

  static const Topology& get(int size);
};

/// Go position under Chinese area scoring with positional superko and no suicide.
///
/// Strings are tracked incrementally (union by relabel, pseudo-liberties), so
/// legality checks and captures cost O(string size). The position hash is a
/// Zobrist XOR over (point, colour) plus a side-to-move term.
class Board {
 public:
  static constexpr int kMaxSize = Topology::kMaxSize;
  static constexpr int kMaxPoints = Topology::kMaxPoints;

  /// Throws Error{InvalidSize} unless size is odd and in [5, 19].
  explicit Board(int size = 9, double komi = 7.5);

  int size() const noexcept { return size_; }
  int num_points() const noexcept { return topo_->points; }
  double komi() const noexcept { return komi_; }
  void set_komi(double komi) noexcept { komi_ = komi; }

  Color at(int vertex) const noexcept { return grid_[vertex]; }
  Color at(Point p) const noexcept { return grid_[vertex(p)]; }
  int vertex(Point p) const noexcept { return p.row * size_ + p.col; }
  Point point(int vertex) const noexcept { return {vertex % size_, vertex / size_}; }

  Color to_move() const noexcept { return to_move_; }
  std::optional<int> ko_point() const noexcept;
  std::optional<Move> last_move() const noexcept;
  int move_count() const noexcept { return move_count_; }
  int consecutive_passes() const noexcept { return passes_; }
  bool game_over() const noexcept { return passes_ >= 2; }
  int captures(Color by) const noexcept;
  std::uint64_t hash() const noexcept { return hash_; }
  const std::vector<std::uint64_t>& history() const noexcept { return history_; }
  int stone_count() const noexcept;
  bool empty() const noexcept { return stone_count() == 0; }

  /// Places h in [1, 5] fixed handicap stones and gives White the move.
  void place_handicap(int h);
  static std::vector<Point> star_points(int size);

  /// Puts a stone directly (setup, SGF AB/AW); clears ko and resets history.
  void set_stone(int vertex, Color c);
  void set_to_move(Color c);

  bool is_legal(Move m) const noexcept;
  /// Reason a move is illegal, or empty when legal.
  std::string illegal_reason(Move m) const;
  /// All legal moves, Pass last. Throws Error{GameOver} after two passes.
  std::vector<Move> legal_moves() const;

  /// Applies a move; throws Error{IllegalMove} (or GameOver) on violation.
  void play(Move m);
  Board played(Move m) const {
    Board b = *this;
    b.play(m);
    return b;
  }

  /// Exact liberty count of the string through `vertex` (0 for empty points).
  int liberties(int vertex) const;
  int string_size(int vertex) const noexcept;
  /// Stones of the string through `vertex`.
  std::vector<int> string_stones(int vertex) const;

  /// An empty point whose orthogonal neighbours are all `c`, with the usual
  /// diagonal condition (no enemy diagonal on the edge, at most one inside).
  bool is_true_eye(int vertex, Color c) const noexcept;
  /// Legal, not capturing, and leaves the mover's string (of >= 2 stones) in atari.
  bool is_self_atari(int vertex, Color c) const;

  /// Structural area ownership of the position as it stands.
  Ownership area_ownership() const;
  ScoreResult area_score() const;
  /// Ownership and territory difference; throws Error{GameNotOver} before two passes.
  std::pair<Ownership, ScoreResult> final_ownership() const;

  std::uint64_t recompute_hash() const noexcept;
  static std::uint64_t zobrist(int vertex, Color c) noexcept;
  static std::uint64_t zobrist_side() noexcept;

  std::string to_string() const;
  /// GTP vertex ("D4", "pass"); column letters skip I, row 1 is the bottom row (index size - 1).
  std::string vertex_name(Move m) const;
  /// Parses a GTP vertex; throws Error{IllegalMove} on syntax or range error.
  Move parse_vertex(const std::string& text) const;

 private:
  struct NeighbourInfo;

  void rebuild_strings();
  void add_stone(int vertex, Color c);
  int remove_string(int root);
  void merge_strings(int keep, int absorb);
  // Hash of the position after a legal stone placement (captures applied).
  std::uint64_t hash_after(int vertex, Color c) const noexcept;
  bool string_has_other_liberty(int root, int excluded) const noexcept;
  bool basic_legal(int vertex, Color c) const noexcept;
  bool repeats_position(int vertex, Color c) const noexcept;

  const Topology* topo_;
  int size_;
  double komi_;
  std::array<Color, kMaxPoints> grid_{};
  std::array<std::int16_t, kMaxPoints> parent_{};
  std::array<std::int16_t, kMaxPoints> next_{};
  std::array<std::int16_t, kMaxPoints> libs_{};
  std::array<std::int16_t, kMaxPoints> stones_{};
  Color to_move_ = Color::Black;
  int ko_ = -1;
  int last_move_ = -2;  // -2: none yet, -1: pass
  std::uint64_t hash_ = 0;
  std::vector<std::uint64_t> history_;
  int move_count_ = 0;
  int passes_ = 0;
  int captures_black_ = 0;
  int captures_white_ = 0;
};

}  // namespace mlvn

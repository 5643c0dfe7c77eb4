#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "mlvn/board.hpp"
#include "mlvn/komi_grid.hpp"
#include "mlvn/random.hpp"

namespace mlvn {

/// A finished game: every move, the final structural ownership and n.
struct GameRecord {
  std::uint32_t id = 0;
  int size = 9;
  double komi = 7.5;
  int handicap = 0;
  std::uint64_t seed = 0;
  std::vector<int> setup_black;  // handicap / AB stones
  std::vector<Move> moves;
  Ownership ownership;
  int territory_diff = 0;
  bool resigned = false;

  /// Position before move `index` (index == moves.size() gives the final position).
  Board position_at(std::size_t index) const;
  Board initial_board() const;
  int neutral_points() const;
};

using ValueLabels = std::vector<std::int8_t>;

/// +1 for every grid komi below n, -1 above.
ValueLabels label_value_vector(int territory_diff, const KomiGrid& grid);

/// Per-point ownership targets: 1 Black, 0 White, 0.5 Neutral.
std::vector<float> ownership_targets(const Ownership& ownership);

/// Fixed plane order of the network input.
enum FeaturePlane : int {
  kPlaneBlack = 0,
  kPlaneWhite = 1,
  kPlaneEmpty = 2,
  kPlaneKo = 3,
  kPlaneBlackToMove = 4,
  kPlaneLastMove = 5,
  kPlaneAtari = 6,
  kPlaneOnes = 7,
  kFeaturePlanes = 8,
};

/// 8 x size x size binary planes, plane-major.
struct FeatureTensor {
  int size = 0;
  std::vector<std::uint8_t> planes;

  std::uint8_t at(int plane, int vertex) const { return planes[plane * size * size + vertex]; }
};

FeatureTensor encode_features(const Board& board);

struct TrainingRecord {
  FeatureTensor features;
  ValueLabels labels;
  std::vector<std::uint8_t> ownership;  // 0 White, 128 Neutral, 255 Black
  Color side_to_move = Color::Black;
  std::uint32_t game_id = 0;
  std::uint16_t move_index = 0;

  float ownership_target(int vertex) const;
};

std::uint8_t ownership_byte(Owner o) noexcept;
float ownership_byte_target(std::uint8_t b) noexcept;

using Policy = std::function<Move(const Board&, Rng&)>;

enum class ResolutionMode {
  /// A premature policy pass is replaced by a light-policy move, so games end
  /// only when the remaining moves are eye fills or seki-style self-ataris.
  FullResolution,
  /// Policy passes are accepted as played.
  TrustPolicy,
};

/// True when every legal non-pass move for the side to move fills its own
/// true eye or is a self-atari of a string of two or more stones.
bool resolved_for_side(const Board& board);

Policy light_policy();

/// Plays one game to two passes. Throws Error{MoveLimitExceeded} past
/// 3 * size^2 moves and Error{IllegalMove} when the policy breaks its contract.
GameRecord generate_game(const Policy& policy, int size, std::uint64_t seed,
                         ResolutionMode mode = ResolutionMode::FullResolution,
                         std::uint32_t game_id = 0, double komi = 7.5);

/// Samples min(m, moves) positions without replacement; every record carries
/// the game's final labels. Throws Error{InvalidConfig} for m < 1.
std::vector<TrainingRecord> sample_positions(const GameRecord& game, int m, const KomiGrid& grid,
                                             Rng& rng);

TrainingRecord make_record(const Board& position, const GameRecord& game, std::size_t move_index,
                           const KomiGrid& grid);

}  // namespace mlvn

#pragma once

#include <filesystem>
#include <iosfwd>
#include <span>
#include <utility>
#include <vector>

#include "mlvn/komi_grid.hpp"
#include "mlvn/selfplay.hpp"

namespace mlvn {

/// Training set on disk: "MLVN" header then length-prefixed little-endian records.
///
/// Header: magic "MLVN", version u16, board size u8, k_min, k_max and centre as i16 tenths.
/// Record: u32 payload length, then packed feature bits (8 * size^2, LSB first),
/// packed label sign bits (1 = +1), ownership bytes (0/128/255), move_index u16,
/// game_id u32.
struct Dataset {
  static constexpr std::uint16_t kVersion = 1;

  int size = 9;
  KomiGrid grid;
  std::vector<TrainingRecord> records;
};

void write_dataset(const Dataset& data, std::ostream& out);
void write_dataset(const Dataset& data, const std::filesystem::path& path);
/// Throws Error{FormatError} for bad magic, version or truncated records,
/// Error{IoError} when the file cannot be opened.
Dataset read_dataset(std::istream& in);
Dataset read_dataset(const std::filesystem::path& path);

/// `count` light-policy games. Game id g uses seed derive_seed(seed, g), with ids
/// counting up from `first_id`; an id whose game hits the move cap is discarded
/// and skipped (the number skipped goes to `discarded` when given).
std::vector<GameRecord> generate_games(int count, int size, std::uint64_t seed,
                                       ResolutionMode mode = ResolutionMode::FullResolution, double komi = 7.5,
                                       std::uint32_t first_id = 0, int* discarded = nullptr);

/// Samples `m` positions per game (see sample_positions) with one seeded stream.
Dataset build_dataset(std::span<const GameRecord> games, int m, const KomiGrid& grid, std::uint64_t seed);

/// Deterministic split by game id: a game is held out when its hashed id falls
/// below `fraction`. Returns {train, heldout}.
std::pair<std::vector<TrainingRecord>, std::vector<TrainingRecord>> split_by_game(
    std::vector<TrainingRecord> records, double fraction, std::uint64_t seed);
bool is_heldout_game(std::uint32_t game_id, double fraction, std::uint64_t seed) noexcept;

}  // namespace mlvn

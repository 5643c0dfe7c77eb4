#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "mlvn/selfplay.hpp"

namespace mlvn {

struct SgfPlayers {
  std::string black;
  std::string white;
};

/// FF[4] record with SZ, KM, HA/AB setup, the move sequence and RE
/// ("B+x" / "W+x" with x = |n - komi|, or "+R" for resignations).
std::string to_sgf(const GameRecord& game, const SgfPlayers& players = {});

/// Reads the main line of a single-game SGF. The final ownership and n are
/// recomputed by replaying the moves. Throws Error{FormatError} or
/// Error{IllegalMove}.
GameRecord from_sgf(std::string_view text);

void write_sgf(const GameRecord& game, const std::filesystem::path& path, const SgfPlayers& players = {});
GameRecord read_sgf(const std::filesystem::path& path);

}  // namespace mlvn

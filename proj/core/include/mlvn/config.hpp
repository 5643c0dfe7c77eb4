#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "mlvn/dynkomi.hpp"
#include "mlvn/mcts.hpp"
#include "mlvn/selfplay.hpp"
#include "mlvn/valuefn.hpp"

namespace mlvn {

struct SelfPlaySettings {
  int games = 1000;
  int positions_per_game = 1;
  std::uint64_t seed = 1;
  double komi = 7.5;
  ResolutionMode resolution = ResolutionMode::FullResolution;
};

struct MatchSettings {
  int games = 100;
  double komi = 7.5;
  int handicap = 0;
  std::uint64_t seed = 1;
  int move_limit = 0;
  /// Dynamic komi method of the opponent (engine B).
  DynKomiMethod opponent_method = DynKomiMethod::None;
};

struct EvalSettings {
  double komi = 7.5;
  int j_cap = 100;
  std::vector<int> ds{0, 1, 2, 3, 5, 10};
  int max_index = 100;
};

/// Every tunable of the pipeline. Loaded from an INI document with sections
/// [board] [grid] [net] [train] [selfplay] [search] [dynkomi] [match] [eval] [paths].
struct RunConfig {
  ArchConfig arch;
  TrainConfig train;
  double heldout_fraction = 0.1;
  SelfPlaySettings selfplay;
  SearchConfig search;
  DynKomiConfig dynkomi;
  MatchSettings match;
  EvalSettings eval;
  std::filesystem::path dataset = "selfplay.mlvn";
  std::filesystem::path checkpoint = "model.mlvw";

  int board_size() const noexcept { return arch.board_size; }
  const KomiGrid& grid() const noexcept { return arch.grid; }

  /// Throws Error{InvalidConfig}.
  void validate() const;
  /// Canonical INI text with every key.
  std::string to_ini() const;
  /// 16 hex digits identifying the canonical text.
  std::string hash() const;
};

/// Unknown sections or keys and malformed values throw Error{InvalidConfig}.
RunConfig parse_config(std::string_view text);
/// Throws Error{IoError} or Error{InvalidConfig}.
RunConfig load_config(const std::filesystem::path& path);
/// Explicit path, else $MLVN_CONFIG, else defaults.
RunConfig resolve_config(const std::filesystem::path& explicit_path);

}  // namespace mlvn

#pragma once

#include "mlvn/board.hpp"
#include "mlvn/random.hpp"

namespace mlvn {

/// Light playout policy: uniform over legal moves that do not fill the
/// mover's own true eye; Pass only when no such move exists.
Move light_policy_move(const Board& board, Rng& rng);

/// Plays the light policy from `board` until two passes or `move_cap` moves,
/// then returns the structural territory difference of the final position
/// (contested regions count as Neutral when the cap is hit).
int rollout(Board board, Rng& rng, int move_cap);

}  // namespace mlvn

#include "mlvn/playout.hpp"

#include <array>

namespace mlvn {

Move light_policy_move(const Board& board, Rng& rng) {
  if (board.game_over()) return Move::pass();
  std::array<int, Board::kMaxPoints> cand;
  int count = 0;
  for (int v = 0; v < board.num_points(); ++v) {
    if (board.at(v) == Color::Empty) cand[count++] = v;
  }
  const Color me = board.to_move();
  while (count > 0) {
    const int i = uniform_below(rng, count);
    const int v = cand[i];
    if (!board.is_true_eye(v, me) && board.is_legal(Move::at(v))) return Move::at(v);
    cand[i] = cand[--count];
  }
  return Move::pass();
}

int rollout(Board board, Rng& rng, int move_cap) {
  int played = 0;
  while (!board.game_over() && played < move_cap) {
    board.play(light_policy_move(board, rng));
    ++played;
  }
  return board.area_score().territory_diff;
}

}  // namespace mlvn

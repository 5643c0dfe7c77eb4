#pragma once

// Independent reference implementations used as test oracles. They work on
// plain character grids and share no code with the library.

#include <string>
#include <vector>

#include "mlvn/board.hpp"

namespace oracle {

/// Row-major grid of 'X' (Black), 'O' (White), '.' (empty).
using Grid = std::vector<std::string>;

Grid to_grid(const mlvn::Board& board);

/// Area ownership by region flood fill: 'X', 'O' or '?' (neutral) per point.
Grid area_owners(const Grid& g);

/// Black area minus White area.
int territory_diff(const Grid& g);

/// Liberties of the string containing (r, c).
int liberties(const Grid& g, int r, int c);

/// Builds a board from rows; throws if the setup is illegal.
mlvn::Board board_from(const Grid& rows, mlvn::Color to_move = mlvn::Color::Black, double komi = 7.5);

}  // namespace oracle

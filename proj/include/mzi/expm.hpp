#pragma once

#include "mzi/fock.hpp"

namespace mzi {

/// Matrix exponential by scaling and squaring with diagonal Pade
/// approximants of degree 3, 5, 7, 9 or 13 (Higham 2005 selection).
Matrix expm(const Matrix& a);

} // namespace mzi

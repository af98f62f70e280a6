#pragma once

#include <span>

#include "core/block_operator.hpp"
#include "core/hambuild.hpp"

namespace mbspec {

// H_{>=X} = K_{>=X} + sum_{Z >= X} I(Z), on the sectors of S_{>=X}.
// Works on the stored decomposition, not on the matrix.
BlockOperator project_geq(const BlockOperator& h, SpaceId x);

// H_{S/X} on the sectors Y/X, Y in S_{>=X}. Carries its own decomposition.
BlockOperator reduced(const BlockOperator& h, SpaceId x);

// Compression Pi_T H Pi_T, sectors kept in the order of H.
BlockOperator restrict_to(const BlockOperator& h, std::span<const SpaceId> t);

// Delta_X = h_X(P), without the shift e_X.
SparseMatrix free_laplacian(const BlockOperator& h, SpaceId x);

// Delta_X (x) 1 + 1 (x) R on the sectors X + Y' of the quotient operator R.
BlockOperator kron_sum(const GridSpec& grid, SpaceId x, const SparseMatrix& delta_x, const BlockOperator& r);

}  // namespace mbspec

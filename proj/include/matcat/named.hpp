#pragma once

// Small named matroids used as fixtures and reference points.

#include <vector>

#include "matcat/matroid.hpp"

namespace matcat::named {

/// Sparse paving matroid of the given rank whose circuit-hyperplanes are the
/// listed rank-sized sets; every other (rank-1)-set not inside one of them is
/// a hyperplane.
Matroid sparse_paving(int n, int rank, const std::vector<Mask>& circuit_hyperplanes);

Matroid fano();
Matroid fano_dual();

/// Rank-4 ternary matroid on 8 elements with ten circuit-hyperplanes 0127, 0136,
/// 0235, 1234, 0347, 1256, 0456, 1457, 2467, 3567.
Matroid p8();
/// p8 relaxed at 3567.
Matroid p1();
/// p1 further relaxed at 0347, at 1256, and at both.
Matroid p2_prime();
Matroid p2_double_prime();
Matroid p3();

/// Binary affine cube: points 0..7 as vectors of GF(2)^3, planes as
/// circuit-hyperplanes.
Matroid ag32();
/// ag32 relaxed at the plane 0123 (x2 = 0).
Matroid ag32_prime();
/// ag32_prime relaxed at the plane 0145, which meets 0123 in two points.
Matroid f8();
/// ag32 relaxed at the complementary planes 0123 and 4567.
Matroid r8();

/// Pairs {0,1}, {2,3}, {4,5}, {6,7}; every union of two pairs except 4567
/// is a circuit-hyperplane, as is the transversal 0246.
Matroid vamos_plus();
/// vamos_plus relaxed at 0246.
Matroid vamos();

}  // namespace matcat::named

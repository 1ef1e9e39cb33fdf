#pragma once

#include <vector>

#include "eamkit/bits.hpp"
#include "eamkit/eamfit.hpp"
#include "eamkit/states.hpp"

namespace eamkit {

/// Per-site decomposition of one block's entanglement entropy.
struct ContourVector {
  Mask mask = 0;
  std::vector<int> sites;      // ascending sites of A
  std::vector<double> values;  // nats, parallel to sites

  double sum() const;
};

/// values[i] = sum_{j not in A} J[i][j]. Sums to the EAM-predicted cut
/// weight (predict_entropy minus the offset) up to rounding of the same
/// additions. May carry small negatives when J does.
ContourVector contour_from_eam(const EntanglementAdjacency& eam, Mask mask);

/// values[i] = sum_p |Phi_p(i)|^2 H(nu_p) over the eigenpairs of C
/// restricted to A. Nonnegative; sums to the block entropy exactly by
/// eigenvector normalization.
ContourVector contour_freefermion(const FreeFermionGround& ffg, Mask mask);

struct ContourComparison {
  double l1 = 0.0;
  double normalized_l1 = 0.0;  // L1 / sum |a|
  double pearson = 0.0;        // correlation across sites
  double sum_a = 0.0;
  double sum_b = 0.0;
};

/// Requires both contours to cover the same mask.
ContourComparison compare_contours(const ContourVector& a, const ContourVector& b);

}  // namespace eamkit

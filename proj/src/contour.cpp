#include "eamkit/contour.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include "eamkit/entropy.hpp"
#include "eamkit/errors.hpp"

namespace eamkit {

double ContourVector::sum() const {
  return std::accumulate(values.begin(), values.end(), 0.0);
}

ContourVector contour_from_eam(const EntanglementAdjacency& eam, Mask mask) {
  const int n = eam.n_sites;
  if (!mask_valid(mask, n))
    throw std::invalid_argument("contour_from_eam: mask out of range");
  if (mask == 0 || mask == full_mask(n))
    throw std::invalid_argument("contour_from_eam: mask must be nontrivial");

  ContourVector contour;
  contour.mask = mask;
  contour.sites = mask_sites(mask, n);
  contour.values.reserve(contour.sites.size());
  for (const int i : contour.sites) {
    double value = 0.0;
    for (int j = 0; j < n; ++j)
      if (!((mask >> j) & 1)) value += eam.j(i, j);
    contour.values.push_back(value);
  }
  return contour;
}

ContourVector contour_freefermion(const FreeFermionGround& ffg, Mask mask) {
  const int n = ffg.hopping.n_sites;
  if (!mask_valid(mask, n))
    throw std::invalid_argument("contour_freefermion: mask out of range");
  if (mask == 0)
    throw std::invalid_argument("contour_freefermion: mask must be nonempty");

  const auto sites = mask_sites(mask, n);
  const int k = static_cast<int>(sites.size());
  Eigen::MatrixXd block(k, k);
  for (int a = 0; a < k; ++a)
    for (int b = 0; b < k; ++b) block(a, b) = ffg.correlation(sites[a], sites[b]);

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(block);
  if (es.info() != Eigen::Success) {
    std::ostringstream msg;
    msg << "contour_freefermion: eigensolver failed for mask " << mask;
    throw ComputationError(msg.str());
  }

  ContourVector contour;
  contour.mask = mask;
  contour.sites = sites;
  contour.values.assign(k, 0.0);
  for (int p = 0; p < k; ++p) {
    const double h = binary_entropy(std::clamp(es.eigenvalues()(p), 0.0, 1.0));
    for (int a = 0; a < k; ++a)
      contour.values[a] += es.eigenvectors()(a, p) * es.eigenvectors()(a, p) * h;
  }
  return contour;
}

ContourComparison compare_contours(const ContourVector& a, const ContourVector& b) {
  if (a.mask != b.mask || a.sites != b.sites)
    throw std::invalid_argument("compare_contours: contours cover different masks");
  const std::size_t n = a.values.size();

  ContourComparison cmp;
  cmp.sum_a = a.sum();
  cmp.sum_b = b.sum();
  double abs_a = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    cmp.l1 += std::abs(a.values[i] - b.values[i]);
    abs_a += std::abs(a.values[i]);
  }
  cmp.normalized_l1 = abs_a > 0.0 ? cmp.l1 / abs_a
                                  : (cmp.l1 > 0.0
                                         ? std::numeric_limits<double>::infinity()
                                         : 0.0);

  const double mean_a = cmp.sum_a / static_cast<double>(n);
  const double mean_b = cmp.sum_b / static_cast<double>(n);
  double cov = 0.0, var_a = 0.0, var_b = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double da = a.values[i] - mean_a;
    const double db = b.values[i] - mean_b;
    cov += da * db;
    var_a += da * da;
    var_b += db * db;
  }
  const double denom = std::sqrt(var_a * var_b);
  if (denom > 0.0) {
    cmp.pearson = cov / denom;
  } else {
    // Both constant: affinely identical, correlation 1; one constant only:
    // undefined, reported as 0.
    cmp.pearson = (var_a == 0.0 && var_b == 0.0) ? 1.0 : 0.0;
  }
  return cmp;
}

}  // namespace eamkit

#include "eamkit/eamfit.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "eamkit/errors.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace eamkit {

namespace {

/// Accumulate one mask's entropy onto the cut pairs, walking the pair index
/// in lexicographic order.
inline void accumulate_mask(int n, Mask m, double s, double* sums) {
  int p = 0;
  for (int i = 0; i < n; ++i) {
    const Mask bi = (m >> i) & 1;
    for (int j = i + 1; j < n; ++j, ++p) {
      if (bi != ((m >> j) & 1)) sums[p] += s;
    }
  }
}

}  // namespace

std::vector<double> cut_entropy_sums_serial(const EntropyTable& table) {
  validate_complete(table);
  const int n = table.n_sites;
  std::vector<double> sums(pair_count(n), 0.0);
  const Mask size = Mask{1} << n;
  for (Mask m = 0; m < size; ++m) {
    const double s = table.entropies[m];
    if (s != 0.0) accumulate_mask(n, m, s, sums.data());
  }
  return sums;
}

std::vector<double> cut_entropy_sums(const EntropyTable& table,
                                     const SweepOptions& options) {
  if (!options.parallel) return cut_entropy_sums_serial(table);
  validate_complete(table);

  const int n = table.n_sites;
  const int pairs = pair_count(n);
  const std::int64_t size = std::int64_t{1} << n;

  // Fixed chunk grid: the partial sums and their final combination order do
  // not depend on the thread count.
  const int n_chunks = static_cast<int>(std::min<std::int64_t>(256, size));
  const std::int64_t chunk_len = (size + n_chunks - 1) / n_chunks;
  std::vector<double> partials(static_cast<std::size_t>(n_chunks) * pairs, 0.0);

#ifdef _OPENMP
  const int threads =
      options.threads > 0 ? options.threads : omp_get_max_threads();
#pragma omp parallel for schedule(dynamic) num_threads(threads)
#endif
  for (int c = 0; c < n_chunks; ++c) {
    double* acc = partials.data() + static_cast<std::size_t>(c) * pairs;
    const std::int64_t hi = std::min(size, (c + 1) * chunk_len);
    for (std::int64_t m = c * chunk_len; m < hi; ++m) {
      const double s = table.entropies[m];
      if (s != 0.0) accumulate_mask(n, static_cast<Mask>(m), s, acc);
    }
  }

  std::vector<double> sums(pairs, 0.0);
  for (int c = 0; c < n_chunks; ++c) {
    const double* acc = partials.data() + static_cast<std::size_t>(c) * pairs;
    for (int p = 0; p < pairs; ++p) sums[p] += acc[p];
  }
  return sums;
}

std::pair<EntanglementAdjacency, FitReport> fit_eam(const EntropyTable& table,
                                                    bool offset,
                                                    const SweepOptions& options) {
  validate_complete(table);
  const int n = table.n_sites;
  if (n < 2) throw std::invalid_argument("fit_eam: need at least two sites");
  const int pairs = pair_count(n);
  const std::int64_t size = std::int64_t{1} << n;

  const std::vector<double> cut_sums = cut_entropy_sums(table, options);

  EntanglementAdjacency eam;
  eam.n_sites = n;
  eam.j = Eigen::MatrixXd::Zero(n, n);

  FitReport report;
  report.offset_enabled = offset;

  Eigen::VectorXd weights(pairs);
  if (!offset) {
    // D^T D = 2^(N-2) (I + 11^T) over all masks, inverted by
    // Sherman-Morrison: (I + 11^T)^-1 = I - 11^T/(M+1).
    const double scale = std::exp2(-(n - 2));
    const double total = std::accumulate(cut_sums.begin(), cut_sums.end(), 0.0);
    const double shift = total / (pairs + 1);
    for (int p = 0; p < pairs; ++p) weights[p] = scale * (cut_sums[p] - shift);
    report.method = FitMethod::closed_form;
    report.n_equations = size;
  } else {
    // Normal equations over the 2^N - 2 nontrivial masks. Trivial masks cut
    // nothing, so the pair block keeps the all-mask counts; only the offset
    // row/column sees them removed.
    Eigen::MatrixXd normal(pairs + 1, pairs + 1);
    normal.topLeftCorner(pairs, pairs).setConstant(std::exp2(n - 2));
    normal.topLeftCorner(pairs, pairs).diagonal().setConstant(std::exp2(n - 1));
    normal.col(pairs).head(pairs).setConstant(std::exp2(n - 1));
    normal.row(pairs).head(pairs).setConstant(std::exp2(n - 1));
    normal(pairs, pairs) = static_cast<double>(size - 2);

    Eigen::VectorXd rhs(pairs + 1);
    for (int p = 0; p < pairs; ++p) rhs[p] = cut_sums[p];
    double total_entropy = 0.0;
    for (std::int64_t m = 1; m < size - 1; ++m) total_entropy += table.entropies[m];
    rhs[pairs] = total_entropy;

    Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(normal);
    report.rank_deficient = cod.rank() < pairs + 1;
    const Eigen::VectorXd solution = cod.solve(rhs);
    weights = solution.head(pairs);
    eam.s0 = solution[pairs];
    report.method = FitMethod::generic_least_squares;
    report.n_equations = size - 2;
  }

  int p = 0;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j, ++p) eam.j(i, j) = eam.j(j, i) = weights[p];

  const FitReport residuals = fit_error(table, eam);
  report.error = residuals.error;
  report.max_residual = residuals.max_residual;
  return {std::move(eam), report};
}

double predict_entropy(const EntanglementAdjacency& eam, Mask mask) {
  const int n = eam.n_sites;
  if (!mask_valid(mask, n))
    throw std::invalid_argument("predict_entropy: mask out of range");
  if (mask == 0 || mask == full_mask(n)) return 0.0;
  double total = 0.0;
  for (int i = 0; i < n; ++i) {
    const Mask bi = (mask >> i) & 1;
    for (int j = i + 1; j < n; ++j)
      if (bi != ((mask >> j) & 1)) total += eam.j(i, j);
  }
  if (eam.s0) total += *eam.s0;
  return total;
}

FitReport fit_error(const EntropyTable& table, const EntanglementAdjacency& eam) {
  validate_complete(table);
  if (table.n_sites != eam.n_sites)
    throw std::invalid_argument("fit_error: table and EAM sizes disagree");
  const std::int64_t size = std::int64_t{1} << table.n_sites;
  double sum = 0.0;
  double max_residual = 0.0;
  for (std::int64_t m = 0; m < size; ++m) {
    const double r =
        std::abs(table.entropies[m] - predict_entropy(eam, static_cast<Mask>(m)));
    sum += r;
    max_residual = std::max(max_residual, r);
  }
  FitReport report;
  report.error = sum / static_cast<double>(size);
  report.max_residual = max_residual;
  report.n_equations = size;
  report.offset_enabled = eam.s0.has_value();
  report.method = eam.s0 ? FitMethod::generic_least_squares : FitMethod::closed_form;
  return report;
}

Eigen::MatrixXd mutual_information_matrix(const EntropyTable& table) {
  validate_complete(table);
  const int n = table.n_sites;
  Eigen::MatrixXd info = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      const double value = table.entropies[Mask{1} << i] +
                           table.entropies[Mask{1} << j] -
                           table.entropies[(Mask{1} << i) | (Mask{1} << j)];
      info(i, j) = info(j, i) = value;
    }
  }
  return info;
}

}  // namespace eamkit

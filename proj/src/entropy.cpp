#include "eamkit/entropy.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <exception>
#include <sstream>

#include "eamkit/errors.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace eamkit {

void validate_complete(const EntropyTable& table) {
  if (table.n_sites < 1 || table.n_sites > 30)
    throw std::invalid_argument("EntropyTable: n_sites out of range");
  if (table.entropies.size() != (std::size_t{1} << table.n_sites))
    throw std::invalid_argument("EntropyTable: incomplete table, need 2^n entries");
}

double von_neumann(std::span<const double> spectrum) {
  double sum = 0.0;
  for (const double p : spectrum) {
    if (p < -1e-12)
      throw std::invalid_argument("von_neumann: negative probability " +
                                  std::to_string(p));
    sum += std::max(p, 0.0);
  }
  if (std::abs(sum - 1.0) > 1e-8)
    throw std::invalid_argument("von_neumann: spectrum sums to " +
                                std::to_string(sum) + ", not 1");
  double entropy = 0.0;
  for (const double p : spectrum)
    if (p > 0.0) entropy -= p * std::log(p);
  return entropy;
}

double binary_entropy(double x) {
  if (x < -1e-10 || x > 1.0 + 1e-10)
    throw std::invalid_argument("binary_entropy: argument " + std::to_string(x) +
                                " outside [0,1]");
  x = std::clamp(x, 0.0, 1.0);
  double h = 0.0;
  if (x > 0.0) h -= x * std::log(x);
  if (x < 1.0) h -= (1.0 - x) * std::log(1.0 - x);
  return h;
}

namespace {

/// Clamp a squared singular value / correlation eigenvalue to [0,1];
/// excursions beyond 1e-8 are errors, not rounding.
double clamp_probability(double p, const char* where) {
  if (p < -1e-8 || p > 1.0 + 1e-8) {
    std::ostringstream msg;
    msg << where << ": spectrum value " << p << " outside [0,1] beyond tolerance";
    throw ComputationError(msg.str());
  }
  return std::clamp(p, 0.0, 1.0);
}

}  // namespace

double block_entropy_statevector(const PureState& state, Mask mask) {
  const int n = state.n_sites;
  if (!mask_valid(mask, n))
    throw std::invalid_argument("block_entropy_statevector: mask out of range");
  int k = popcount(mask);
  if (k == 0 || k == n) return 0.0;
  if (2 * k > n) {  // same spectrum via the complement; keeps rows the small side
    mask = full_mask(n) ^ mask;
    k = n - k;
  }

  const auto row_sites = mask_sites(mask, n);
  const auto col_sites = mask_sites(full_mask(n) ^ mask, n);
  const Eigen::Index rows = Eigen::Index{1} << k;
  const Eigen::Index cols = Eigen::Index{1} << (n - k);

  std::vector<Mask> row_base(rows), col_base(cols);
  for (Eigen::Index r = 0; r < rows; ++r) {
    Mask m = 0;
    for (int t = 0; t < k; ++t)
      if ((r >> t) & 1) m |= Mask{1} << row_sites[t];
    row_base[r] = m;
  }
  for (Eigen::Index c = 0; c < cols; ++c) {
    Mask m = 0;
    for (int t = 0; t < n - k; ++t)
      if ((c >> t) & 1) m |= Mask{1} << col_sites[t];
    col_base[c] = m;
  }

  Eigen::MatrixXcd schmidt(rows, cols);
  for (Eigen::Index c = 0; c < cols; ++c)
    for (Eigen::Index r = 0; r < rows; ++r)
      schmidt(r, c) =
          state.amplitudes[static_cast<Eigen::Index>(row_base[r] | col_base[c])];

  // JacobiSVD: BDCSVD mis-deflates complex inputs in Eigen 3.4.
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(schmidt);
  const auto& sigma = svd.singularValues();
  std::vector<double> spectrum(sigma.size());
  for (Eigen::Index i = 0; i < sigma.size(); ++i)
    spectrum[i] = clamp_probability(sigma[i] * sigma[i], "block_entropy_statevector");
  return von_neumann(spectrum);
}

double block_entropy_freefermion(const FreeFermionGround& ffg, Mask mask) {
  const int n = ffg.hopping.n_sites;
  if (!mask_valid(mask, n))
    throw std::invalid_argument("block_entropy_freefermion: mask out of range");
  const int k = popcount(mask);
  if (k == 0) return 0.0;

  const auto sites = mask_sites(mask, n);
  Eigen::MatrixXd block(k, k);
  for (int a = 0; a < k; ++a)
    for (int b = 0; b < k; ++b) block(a, b) = ffg.correlation(sites[a], sites[b]);

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(block, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) {
    std::ostringstream msg;
    msg << "block_entropy_freefermion: eigensolver failed for mask " << mask;
    throw ComputationError(msg.str());
  }
  double entropy = 0.0;
  for (Eigen::Index p = 0; p < es.eigenvalues().size(); ++p)
    entropy += binary_entropy(
        clamp_probability(es.eigenvalues()(p), "block_entropy_freefermion"));
  return entropy;
}

namespace {

bool canonical_mask(Mask m, int n) {
  const int k = popcount(m);
  return 2 * k < n || (2 * k == n && (m & 1));
}

std::vector<Mask> canonical_masks(int n) {
  const Mask full = full_mask(n);
  std::vector<Mask> masks;
  masks.reserve(std::size_t{1} << (n - 1));
  for (Mask m = 1; m < full; ++m)
    if (canonical_mask(m, n)) masks.push_back(m);
  return masks;
}

}  // namespace

std::vector<double> sweep_block_entropies_serial(
    int n_sites, const std::function<double(Mask)>& block_entropy) {
  const Mask full = full_mask(n_sites);
  std::vector<double> entropies(std::size_t{1} << n_sites, 0.0);
  for (Mask m = 1; m < full; ++m) {
    if (!canonical_mask(m, n_sites)) continue;
    const double s = block_entropy(m);
    entropies[m] = s;
    entropies[full ^ m] = s;  // purity: copied, not recomputed
  }
  entropies[0] = 0.0;
  entropies[full] = 0.0;
  return entropies;
}

std::vector<double> sweep_block_entropies(
    int n_sites, const std::function<double(Mask)>& block_entropy,
    const SweepOptions& options) {
  if (!options.parallel)
    return sweep_block_entropies_serial(n_sites, block_entropy);

  const Mask full = full_mask(n_sites);
  const auto masks = canonical_masks(n_sites);
  std::vector<double> entropies(std::size_t{1} << n_sites, 0.0);

  std::atomic<bool> failed{false};
  std::exception_ptr error;

#ifdef _OPENMP
  const int threads =
      options.threads > 0 ? options.threads : omp_get_max_threads();
#pragma omp parallel for schedule(dynamic, 8) num_threads(threads)
#endif
  for (std::int64_t idx = 0; idx < static_cast<std::int64_t>(masks.size()); ++idx) {
    if (failed.load(std::memory_order_relaxed)) continue;
    try {
      const Mask m = masks[idx];
      const double s = block_entropy(m);
      entropies[m] = s;
      entropies[full ^ m] = s;
    } catch (...) {
#ifdef _OPENMP
#pragma omp critical(eamkit_sweep_error)
#endif
      {
        if (!failed.exchange(true)) error = std::current_exception();
      }
    }
  }
  if (error) std::rethrow_exception(error);

  entropies[0] = 0.0;
  entropies[full] = 0.0;
  return entropies;
}

EntropyTable all_entropies(const PureState& state, const SweepOptions& options) {
  const int cap = options.max_n > 0 ? options.max_n : 14;
  if (state.n_sites > cap)
    throw std::invalid_argument(
        "all_entropies: statevector sweep capped at n_sites = " +
        std::to_string(cap));
  state.validate();
  EntropyTable table;
  table.n_sites = state.n_sites;
  table.engine = "statevector";
  table.entropies = sweep_block_entropies(
      state.n_sites,
      [&state](Mask m) { return block_entropy_statevector(state, m); }, options);
  return table;
}

EntropyTable all_entropies(const FreeFermionGround& ffg, const SweepOptions& options) {
  const int cap = options.max_n > 0 ? options.max_n : 20;
  if (ffg.hopping.n_sites > cap)
    throw std::invalid_argument(
        "all_entropies: freefermion sweep capped at n_sites = " +
        std::to_string(cap));
  EntropyTable table;
  table.n_sites = ffg.hopping.n_sites;
  table.engine = "freefermion";
  table.entropies = sweep_block_entropies(
      ffg.hopping.n_sites,
      [&ffg](Mask m) { return block_entropy_freefermion(ffg, m); }, options);
  return table;
}

}  // namespace eamkit

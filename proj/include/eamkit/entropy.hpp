#pragma once

#include <functional>
#include <span>
#include <string>
#include <vector>

#include "eamkit/bits.hpp"
#include "eamkit/states.hpp"

namespace eamkit {

/// All 2^N block entropies of one state, indexed by mask, in nats.
struct EntropyTable {
  int n_sites = 0;
  std::vector<double> entropies;
  std::string engine;   // "statevector" | "freefermion"
  std::string model;    // free-form descriptor

  double at(Mask m) const { return entropies[m]; }
  std::size_t size() const { return entropies.size(); }
};

/// Throws std::invalid_argument unless the table holds all 2^n entries.
void validate_complete(const EntropyTable& table);

struct SweepOptions {
  int threads = 0;       // 0 = all available
  bool parallel = true;  // false selects the serial reference path
  int max_n = 0;         // 0 = engine default (14 statevector, 20 freefermion)
};

/// -sum p ln p with 0 ln 0 = 0. Entries below -1e-12 or a total off 1 by
/// more than 1e-8 are rejected; small negatives are clamped to 0.
double von_neumann(std::span<const double> spectrum);

/// H(x) = -x ln x - (1-x) ln(1-x), clamped on [-1e-10, 1+1e-10].
double binary_entropy(double x);

/// Entropy of the Schmidt spectrum across (A, A^c): the amplitudes are
/// gathered into a 2^|A| x 2^|A^c| matrix (smaller side as rows) and the
/// squared singular values fed to von_neumann.
double block_entropy_statevector(const PureState& state, Mask mask);

/// Peschel formula: eigenvalues nu_p of C restricted to A, entropy
/// sum_p H(nu_p).
double block_entropy_freefermion(const FreeFermionGround& ffg, Mask mask);

/// Parallel map over canonical masks (popcount < N/2, plus the half with
/// site 0 for even splits); complements are mirrored, never recomputed.
/// S[0] and S[full] are set to exactly 0.
std::vector<double> sweep_block_entropies(
    int n_sites, const std::function<double(Mask)>& block_entropy,
    const SweepOptions& options = {});

/// Serial reference for the sweep; kept for testing and benchmarking.
std::vector<double> sweep_block_entropies_serial(
    int n_sites, const std::function<double(Mask)>& block_entropy);

EntropyTable all_entropies(const PureState& state, const SweepOptions& options = {});
EntropyTable all_entropies(const FreeFermionGround& ffg, const SweepOptions& options = {});

}  // namespace eamkit

#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <optional>
#include <utility>

#include "eamkit/bits.hpp"
#include "eamkit/entropy.hpp"

namespace eamkit {

/// Symmetric link-weight matrix J (zero diagonal, nats per cut link) with an
/// optional constant offset s0. Negative weights are legal least-squares
/// output and are reported as-is.
struct EntanglementAdjacency {
  int n_sites = 0;
  Eigen::MatrixXd j;
  std::optional<double> s0;
};

enum class FitMethod { closed_form, generic_least_squares };

struct FitReport {
  double error = 0.0;          // mean |S - S_hat| over all 2^N masks
  double max_residual = 0.0;
  std::int64_t n_equations = 0;
  FitMethod method = FitMethod::closed_form;
  bool offset_enabled = false;
  bool rank_deficient = false;  // minimum-norm solution was taken
};

/// 1 iff the pair (i, j) is cut by the mask (exactly one endpoint inside).
inline int design_coefficient(Mask mask, int i, int j) {
  return static_cast<int>(((mask >> i) ^ (mask >> j)) & 1);
}

/// D^T S: per-pair sum of table entropies over the masks cutting that pair.
/// Chunked parallel reduction with a fixed chunk grid, so the result is
/// bitwise independent of the thread count.
std::vector<double> cut_entropy_sums(const EntropyTable& table,
                                     const SweepOptions& options = {});

/// Serial reference for the reduction; kept for testing and benchmarking.
std::vector<double> cut_entropy_sums_serial(const EntropyTable& table);

/// Least-squares fit of J (and s0 when offset is on) to the table.
///
/// Without offset the fit runs over all 2^N masks and uses the closed form
/// J = 2^-(N-2) (I - 11^T/(M+1)) D^T S, which follows from
/// D^T D = 2^(N-2)(I + 11^T) over the full mask set. With offset the two
/// trivial masks are excluded (they would pin s0 to 0) and the
/// (M+1)-dimensional normal equations are solved by a rank-revealing
/// factorization; rank deficiency yields the minimum-norm solution, flagged
/// in the report.
std::pair<EntanglementAdjacency, FitReport> fit_eam(const EntropyTable& table,
                                                    bool offset,
                                                    const SweepOptions& options = {});

/// Sum of J over cut pairs, plus s0 for nontrivial masks. The empty and full
/// masks return 0 by the pure-state convention. Iterates pairs i < j, so the
/// value is identical for a mask and its complement.
double predict_entropy(const EntanglementAdjacency& eam, Mask mask);

/// Mean and max |S - S_hat| over all 2^N masks.
FitReport fit_error(const EntropyTable& table, const EntanglementAdjacency& eam);

/// I(i:j) = S_i + S_j - S_ij from single- and two-site masks; diagonal 0.
Eigen::MatrixXd mutual_information_matrix(const EntropyTable& table);

}  // namespace eamkit

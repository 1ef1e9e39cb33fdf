#pragma once

#include <Eigen/Dense>
#include <optional>
#include <utility>
#include <vector>

#include "eamkit/bits.hpp"

namespace eamkit {

/// Normalized amplitude vector over n qubits. Basis index bit i is the local
/// state of site i; site 0 is the least significant bit.
struct PureState {
  int n_sites = 0;
  Eigen::VectorXcd amplitudes;

  /// Throws std::invalid_argument unless the size is 2^n_sites and the norm
  /// is 1 within 1e-12.
  void validate() const;
};

/// A perfect matching of the sites: every site appears in exactly one pair.
struct Matching {
  std::vector<std::pair<int, int>> pairs;

  void validate(int n_sites) const;
};

Matching nearest_neighbor_matching(int n_sites);
Matching rainbow_matching(int n_sites);

/// Real symmetric hopping amplitudes t[i][j]; diagonal entries are on-site
/// potentials (default 0).
struct HoppingMatrix {
  int n_sites = 0;
  Eigen::MatrixXd t;
};

/// Slater-determinant ground-state descriptor: occupied single-particle
/// modes of -t/2 and the two-point correlation matrix C = sum_occ phi phi^T.
struct FreeFermionGround {
  HoppingMatrix hopping;
  std::vector<int> occupied_modes;
  Eigen::VectorXd mode_energies;   // ascending
  Eigen::MatrixXd mode_vectors;    // columns, same order as energies
  Eigen::MatrixXd correlation;     // C, symmetric projector
};

enum class Boundary { open, periodic };

struct XxzSpec {
  int n_sites = 0;
  double delta = 1.0;                    // anisotropy
  Boundary boundary = Boundary::periodic;
  /// Bond modulation: bond b (0-based, between sites b and b+1) carries
  /// coupling 1 + dimerization*(-1)^(b+1), i.e. the first bond is weakened.
  /// Matches dimerized_hopping for the free-fermion cross-checks.
  double dimerization = 0.0;
  int max_sites = 14;
};

/// Ground-state result with solver diagnostics.
struct XxzGroundState {
  PureState state;
  double energy = 0.0;
  double sector_gap = 0.0;   // second lowest sector eigenvalue minus lowest
  double residual = 0.0;     // ||H psi - E psi||
  int iterations = 0;
  bool degenerate = false;   // sector_gap < 1e-10: result is one of a degenerate family
};

/// Tensor product of singlets (|ud> - |du>)/sqrt(2) over the matching; the
/// first-listed site of each pair carries the bit set in the + term.
PureState build_dimer(int n_sites, const Matching& matching);

/// Dimer state pairing site k with site n-1-k.
PureState build_rainbow(int n_sites);

/// (|0...0> + |1...1>)/sqrt(2).
PureState build_ghz(int n_sites);

/// Lowest eigenvector of H = sum_b t_b (Sx Sx + Sy Sy + delta Sz Sz) in the
/// zero-magnetization sector (Lanczos with full reorthogonalization),
/// embedded into the full 2^N space. Spin operators are sigma/2. The global
/// phase makes the largest-magnitude amplitude real positive (lowest index
/// on ties). Throws ComputationError if the residual exceeds 1e-10.
XxzGroundState xxz_ground_state(const XxzSpec& spec);

/// Open chain with t[b][b+1] = 1 + delta*(-1)^(b+1), 0-based bonds (the
/// 1-based alternation starts with a weak bond).
HoppingMatrix dimerized_hopping(int n_sites, double delta);

/// Diagonalize -t/2 and occupy the n_particles lowest modes. Throws
/// ComputationError on a degenerate Fermi level (gap < 1e-12).
FreeFermionGround freefermion_ground(const HoppingMatrix& hopping, int n_particles);

}  // namespace eamkit

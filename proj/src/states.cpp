#include "eamkit/states.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <random>
#include <sstream>
#include <vector>

#include "eamkit/errors.hpp"

namespace eamkit {

void PureState::validate() const {
  if (n_sites < 1 || n_sites > 28)
    throw std::invalid_argument("PureState: n_sites out of range");
  if (amplitudes.size() != (Eigen::Index{1} << n_sites))
    throw std::invalid_argument("PureState: amplitude count is not 2^n_sites");
  const double norm2 = amplitudes.squaredNorm();
  if (std::abs(norm2 - 1.0) > 1e-12)
    throw std::invalid_argument("PureState: state is not normalized");
}

void Matching::validate(int n_sites) const {
  if (n_sites % 2 != 0)
    throw std::invalid_argument("Matching: site count must be even");
  if (static_cast<int>(pairs.size()) != n_sites / 2)
    throw std::invalid_argument("Matching: wrong number of pairs");
  std::vector<char> seen(n_sites, 0);
  for (const auto& [i, j] : pairs) {
    if (i < 0 || i >= n_sites || j < 0 || j >= n_sites || i == j)
      throw std::invalid_argument("Matching: pair out of range");
    if (seen[i] || seen[j])
      throw std::invalid_argument("Matching: site appears twice");
    seen[i] = seen[j] = 1;
  }
}

Matching nearest_neighbor_matching(int n_sites) {
  Matching m;
  for (int i = 0; i + 1 < n_sites; i += 2) m.pairs.emplace_back(i, i + 1);
  return m;
}

Matching rainbow_matching(int n_sites) {
  Matching m;
  for (int k = 0; k < n_sites / 2; ++k) m.pairs.emplace_back(k, n_sites - 1 - k);
  return m;
}

PureState build_dimer(int n_sites, const Matching& matching) {
  if (n_sites < 2 || n_sites % 2 != 0)
    throw std::invalid_argument("build_dimer: n_sites must be even and >= 2");
  if (n_sites > 28) throw std::invalid_argument("build_dimer: n_sites too large");
  matching.validate(n_sites);

  const int k = n_sites / 2;
  const double amp = std::exp2(-0.5 * k);  // (1/sqrt 2)^k
  PureState state{n_sites, Eigen::VectorXcd::Zero(Eigen::Index{1} << n_sites)};
  for (Mask choice = 0; choice < (Mask{1} << k); ++choice) {
    Mask index = 0;
    int sign = 1;
    for (int p = 0; p < k; ++p) {
      const auto& [i, j] = matching.pairs[p];
      if ((choice >> p) & 1) {
        index |= Mask{1} << j;
        sign = -sign;
      } else {
        index |= Mask{1} << i;
      }
    }
    state.amplitudes[static_cast<Eigen::Index>(index)] = sign * amp;
  }
  state.validate();
  return state;
}

PureState build_rainbow(int n_sites) {
  if (n_sites < 2 || n_sites % 2 != 0)
    throw std::invalid_argument("build_rainbow: n_sites must be even and >= 2");
  return build_dimer(n_sites, rainbow_matching(n_sites));
}

PureState build_ghz(int n_sites) {
  if (n_sites < 2) throw std::invalid_argument("build_ghz: n_sites must be >= 2");
  if (n_sites > 28) throw std::invalid_argument("build_ghz: n_sites too large");
  PureState state{n_sites, Eigen::VectorXcd::Zero(Eigen::Index{1} << n_sites)};
  const double amp = std::sqrt(0.5);
  state.amplitudes[0] = amp;
  state.amplitudes[(Eigen::Index{1} << n_sites) - 1] = amp;
  state.validate();
  return state;
}

namespace {

struct Bond {
  int i, j;
  double coupling;
};

std::vector<Bond> chain_bonds(int n, Boundary boundary, double dimerization) {
  const int n_bonds = boundary == Boundary::periodic ? n : n - 1;
  std::vector<Bond> bonds;
  bonds.reserve(n_bonds);
  for (int b = 0; b < n_bonds; ++b) {
    const double t = 1.0 + dimerization * (b % 2 == 0 ? -1.0 : 1.0);
    bonds.push_back({b, (b + 1) % n, t});
  }
  return bonds;
}

/// Symmetric sparse Hamiltonian restricted to the popcount = N/2 sector;
/// only the strictly upper triangle is stored.
struct SectorHamiltonian {
  int dim = 0;
  std::vector<double> diag;
  std::vector<std::int64_t> row_head;  // dim + 1 offsets into col/val
  std::vector<int> col;
  std::vector<double> val;

  void apply(const Eigen::VectorXd& x, Eigen::VectorXd& y) const {
    y.resize(dim);
    for (int r = 0; r < dim; ++r) y[r] = diag[r] * x[r];
    for (int r = 0; r < dim; ++r) {
      for (std::int64_t k = row_head[r]; k < row_head[r + 1]; ++k) {
        y[r] += val[k] * x[col[k]];
        y[col[k]] += val[k] * x[r];
      }
    }
  }
};

std::vector<Mask> sector_basis(int n) {
  std::vector<Mask> basis;
  for (Mask m = 0; m <= full_mask(n); ++m)
    if (popcount(m) == n / 2) basis.push_back(m);
  return basis;
}

int basis_index(const std::vector<Mask>& basis, Mask m) {
  const auto it = std::lower_bound(basis.begin(), basis.end(), m);
  return static_cast<int>(it - basis.begin());
}

SectorHamiltonian build_sector_hamiltonian(const XxzSpec& spec,
                                           const std::vector<Mask>& basis) {
  const auto bonds = chain_bonds(spec.n_sites, spec.boundary, spec.dimerization);
  SectorHamiltonian ham;
  ham.dim = static_cast<int>(basis.size());
  ham.diag.assign(ham.dim, 0.0);
  ham.row_head.assign(ham.dim + 1, 0);
  for (int r = 0; r < ham.dim; ++r) {
    const Mask m = basis[r];
    double diag = 0.0;
    for (const auto& bond : bonds) {
      const int bi = (m >> bond.i) & 1;
      const int bj = (m >> bond.j) & 1;
      if (bi == bj) {
        diag += bond.coupling * spec.delta * 0.25;
      } else {
        diag -= bond.coupling * spec.delta * 0.25;
        const Mask flipped = m ^ ((Mask{1} << bond.i) | (Mask{1} << bond.j));
        if (flipped > m) {
          ham.col.push_back(basis_index(basis, flipped));
          ham.val.push_back(bond.coupling * 0.5);
        }
      }
    }
    ham.diag[r] = diag;
    ham.row_head[r + 1] = static_cast<std::int64_t>(ham.col.size());
  }
  return ham;
}

struct LanczosOutcome {
  double theta0 = 0.0;
  double theta1 = 0.0;
  bool have_theta1 = false;
  Eigen::VectorXd ground;
  int iterations = 0;
};

/// Lanczos with full reorthogonalization and a fixed pseudo-random start
/// vector; deterministic across runs and thread settings.
LanczosOutcome lanczos_lowest(const SectorHamiltonian& ham, int max_iter,
                              double bound_tol) {
  const int dim = ham.dim;
  LanczosOutcome out;
  if (dim == 1) {
    out.theta0 = ham.diag[0];
    out.ground = Eigen::VectorXd::Ones(1);
    out.iterations = 1;
    return out;
  }

  std::mt19937 rng(0x9e3779b9u);
  Eigen::VectorXd v0(dim);
  for (int i = 0; i < dim; ++i)
    v0[i] = static_cast<double>(rng()) / 4294967296.0 - 0.5;
  v0.normalize();

  std::vector<Eigen::VectorXd> krylov{v0};
  std::vector<double> alpha, beta;
  Eigen::VectorXd w(dim);
  max_iter = std::min(max_iter, dim);

  for (int m = 0; m < max_iter; ++m) {
    ham.apply(krylov[m], w);
    if (m > 0) w -= beta[m - 1] * krylov[m - 1];
    const double a = krylov[m].dot(w);
    alpha.push_back(a);
    w -= a * krylov[m];
    for (int sweep = 0; sweep < 2; ++sweep)
      for (const auto& q : krylov) w -= q.dot(w) * q;
    const double b = w.norm();

    Eigen::MatrixXd tri = Eigen::MatrixXd::Zero(m + 1, m + 1);
    for (int i = 0; i <= m; ++i) tri(i, i) = alpha[i];
    for (int i = 0; i < m; ++i) tri(i, i + 1) = tri(i + 1, i) = beta[i];
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(tri);
    out.theta0 = es.eigenvalues()(0);
    out.have_theta1 = m >= 1;
    if (out.have_theta1) out.theta1 = es.eigenvalues()(1);

    const double bound0 = b * std::abs(es.eigenvectors()(m, 0));
    const double bound1 =
        out.have_theta1 ? b * std::abs(es.eigenvectors()(m, 1)) : 0.0;
    const bool exhausted = b < 1e-13 || m + 1 == dim;
    if ((bound0 <= bound_tol && bound1 <= 1e-8) || exhausted) {
      Eigen::VectorXd ground = Eigen::VectorXd::Zero(dim);
      for (int i = 0; i <= m; ++i) ground += es.eigenvectors()(i, 0) * krylov[i];
      ground.normalize();
      out.ground = ground;
      out.iterations = m + 1;
      return out;
    }
    beta.push_back(b);
    krylov.push_back(w / b);
  }
  throw ComputationError("xxz_ground_state: Lanczos did not converge within " +
                         std::to_string(max_iter) + " iterations");
}

}  // namespace

XxzGroundState xxz_ground_state(const XxzSpec& spec) {
  const int n = spec.n_sites;
  if (n < 2 || n % 2 != 0)
    throw std::invalid_argument("xxz_ground_state: n_sites must be even and >= 2");
  if (n > spec.max_sites)
    throw std::invalid_argument("xxz_ground_state: n_sites exceeds the cap of " +
                                std::to_string(spec.max_sites));

  const auto basis = sector_basis(n);
  const auto ham = build_sector_hamiltonian(spec, basis);
  const auto lanczos = lanczos_lowest(ham, 600, 1e-11);

  Eigen::VectorXd check(ham.dim);
  ham.apply(lanczos.ground, check);
  const double residual = (check - lanczos.theta0 * lanczos.ground).norm();
  if (residual > 1e-10) {
    std::ostringstream msg;
    msg << "xxz_ground_state: eigensolver residual " << residual
        << " exceeds 1e-10";
    throw ComputationError(msg.str());
  }

  XxzGroundState result;
  result.energy = lanczos.theta0;
  result.sector_gap = lanczos.have_theta1
                          ? lanczos.theta1 - lanczos.theta0
                          : std::numeric_limits<double>::infinity();
  result.degenerate = lanczos.have_theta1 && result.sector_gap < 1e-10;
  result.residual = residual;
  result.iterations = lanczos.iterations;

  PureState state{n, Eigen::VectorXcd::Zero(Eigen::Index{1} << n)};
  for (int k = 0; k < ham.dim; ++k)
    state.amplitudes[static_cast<Eigen::Index>(basis[k])] = lanczos.ground[k];

  // Deterministic global phase: largest-magnitude amplitude (lowest index on
  // ties within 1e-12 relative) made real positive.
  Eigen::Index anchor = 0;
  double best = 0.0;
  for (Eigen::Index i = 0; i < state.amplitudes.size(); ++i) {
    const double mag = std::abs(state.amplitudes[i]);
    if (mag > best * (1.0 + 1e-12)) {
      best = mag;
      anchor = i;
    }
  }
  const std::complex<double> a = state.amplitudes[anchor];
  if (std::abs(a) > 0) state.amplitudes *= std::conj(a) / std::abs(a);

  state.validate();
  result.state = std::move(state);
  return result;
}

HoppingMatrix dimerized_hopping(int n_sites, double delta) {
  if (n_sites < 2) throw std::invalid_argument("dimerized_hopping: n_sites < 2");
  HoppingMatrix hop{n_sites, Eigen::MatrixXd::Zero(n_sites, n_sites)};
  for (int b = 0; b + 1 < n_sites; ++b) {
    const double t = 1.0 + delta * (b % 2 == 0 ? -1.0 : 1.0);
    hop.t(b, b + 1) = hop.t(b + 1, b) = t;
  }
  return hop;
}

FreeFermionGround freefermion_ground(const HoppingMatrix& hopping, int n_particles) {
  const int n = hopping.n_sites;
  if (n < 1 || hopping.t.rows() != n || hopping.t.cols() != n)
    throw std::invalid_argument("freefermion_ground: bad hopping matrix shape");
  if (!hopping.t.isApprox(hopping.t.transpose(), 1e-12))
    throw std::invalid_argument("freefermion_ground: hopping matrix not symmetric");
  if (n_particles < 0 || n_particles > n)
    throw std::invalid_argument("freefermion_ground: n_particles out of range");

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(-0.5 * hopping.t);
  if (es.info() != Eigen::Success)
    throw ComputationError("freefermion_ground: eigensolver failed");

  if (n_particles > 0 && n_particles < n) {
    const double gap =
        es.eigenvalues()(n_particles) - es.eigenvalues()(n_particles - 1);
    if (gap < 1e-12) {
      std::ostringstream msg;
      msg << "freefermion_ground: degenerate Fermi level (gap " << gap
          << " between modes " << n_particles - 1 << " and " << n_particles
          << "); change boundary, filling, or mode selection";
      throw ComputationError(msg.str());
    }
  }

  FreeFermionGround ground;
  ground.hopping = hopping;
  ground.mode_energies = es.eigenvalues();
  ground.mode_vectors = es.eigenvectors();
  for (int k = 0; k < n_particles; ++k) ground.occupied_modes.push_back(k);
  const Eigen::MatrixXd occ = ground.mode_vectors.leftCols(n_particles);
  Eigen::MatrixXd corr = occ * occ.transpose();
  ground.correlation = 0.5 * (corr + corr.transpose());
  return ground;
}

}  // namespace eamkit

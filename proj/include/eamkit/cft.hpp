#pragma once

#include <vector>

#include "eamkit/eamfit.hpp"

namespace eamkit {

/// Interval (u, v) on the infinite line with UV cutoff epsilon and central
/// charge c.
struct IntervalSpec {
  double u = 0.0;
  double v = 1.0;
  double epsilon = 0.01;
  double c = 1.0;

  void validate() const;  // requires v - u > 2 epsilon, epsilon > 0
};

/// Plane two-point correlator of the entanglement current, 1/(x-y)^2.
double current_correlator(double x, double y);

/// Closed form (c/3) ln((v-u)/epsilon).
double interval_entropy_cft(const IntervalSpec& spec);

/// (c/6) * int_{u+eps}^{v-eps} dx [ int_{-inf}^{u} + int_{v}^{inf} ] dy (x-y)^-2.
/// The inner improper integrals are analytic, 1/(x-u) + 1/(v-x); the outer
/// integral is adaptive quadrature to absolute tolerance 1e-10. Equals
/// (c/3) ln((v-u-eps)/eps).
double interval_entropy_integral(const IntervalSpec& spec);

struct PowerLawFit {
  double exponent = 0.0;
  double amplitude = 0.0;
  double r_squared = 0.0;
  std::vector<int> separations;
  std::vector<double> mean_weights;
};

/// Average J over pairs at each plain separation d = |i-j| in
/// [min_sep, max_sep] (open-chain convention), then OLS of ln Jbar vs ln d.
/// Nonpositive averaged weights abort with an error naming the separations.
PowerLawFit power_law_exponent(const EntanglementAdjacency& eam, int min_sep,
                               int max_sep);

}  // namespace eamkit

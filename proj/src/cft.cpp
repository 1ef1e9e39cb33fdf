#include "eamkit/cft.hpp"

#include <cmath>
#include <functional>
#include <sstream>

#include "eamkit/errors.hpp"

namespace eamkit {

namespace {

/// Adaptive Simpson with a Richardson correction; the tolerance budget is
/// absolute and split across subintervals.
double adaptive_simpson(const std::function<double(double)>& f, double a,
                        double b, double fa, double fm, double fb, double whole,
                        double tol, int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m);
  const double rm = 0.5 * (m + b);
  const double flm = f(lm);
  const double frm = f(rm);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  const double delta = left + right - whole;
  if (std::abs(delta) <= 15.0 * tol) return left + right + delta / 15.0;
  if (depth <= 0)
    throw ComputationError(
        "interval_entropy_integral: adaptive quadrature did not converge");
  return adaptive_simpson(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
         adaptive_simpson(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

double integrate(const std::function<double(double)>& f, double a, double b,
                 double tol) {
  const double fa = f(a);
  const double fb = f(b);
  const double fm = f(0.5 * (a + b));
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  return adaptive_simpson(f, a, b, fa, fm, fb, whole, tol, 60);
}

}  // namespace

void IntervalSpec::validate() const {
  if (epsilon <= 0.0)
    throw std::invalid_argument("IntervalSpec: epsilon must be positive");
  if (v - u <= 2.0 * epsilon)
    throw std::invalid_argument("IntervalSpec: require v - u > 2 epsilon");
}

double current_correlator(double x, double y) {
  if (x == y)
    throw std::invalid_argument("current_correlator: coincident points");
  const double d = x - y;
  return 1.0 / (d * d);
}

double interval_entropy_cft(const IntervalSpec& spec) {
  spec.validate();
  return spec.c / 3.0 * std::log((spec.v - spec.u) / spec.epsilon);
}

double interval_entropy_integral(const IntervalSpec& spec) {
  spec.validate();
  const double u = spec.u;
  const double v = spec.v;
  // Inner improper integrals over A^c done analytically; the remaining
  // integrand is smooth on the cut-off interval.
  const auto integrand = [u, v](double x) {
    return 1.0 / (x - u) + 1.0 / (v - x);
  };
  const double integral =
      integrate(integrand, u + spec.epsilon, v - spec.epsilon, 1e-11);
  return spec.c / 6.0 * integral;
}

PowerLawFit power_law_exponent(const EntanglementAdjacency& eam, int min_sep,
                               int max_sep) {
  const int n = eam.n_sites;
  if (min_sep < 1 || max_sep <= min_sep)
    throw std::invalid_argument("power_law_exponent: require max_sep > min_sep >= 1");
  if (max_sep > n - 1)
    throw std::invalid_argument("power_law_exponent: no pairs at separation " +
                                std::to_string(max_sep));

  PowerLawFit fit;
  std::vector<int> nonpositive;
  for (int d = min_sep; d <= max_sep; ++d) {
    double sum = 0.0;
    int count = 0;
    for (int i = 0; i + d < n; ++i, ++count) sum += eam.j(i, i + d);
    const double mean = sum / count;
    if (mean <= 0.0) nonpositive.push_back(d);
    fit.separations.push_back(d);
    fit.mean_weights.push_back(mean);
  }
  if (!nonpositive.empty()) {
    std::ostringstream msg;
    msg << "power_law_exponent: nonpositive averaged weight at separation";
    for (const int d : nonpositive) msg << ' ' << d;
    throw ComputationError(msg.str());
  }

  // OLS of ln Jbar against ln d.
  const int m = static_cast<int>(fit.separations.size());
  double sx = 0.0, sy = 0.0;
  for (int i = 0; i < m; ++i) {
    sx += std::log(fit.separations[i]);
    sy += std::log(fit.mean_weights[i]);
  }
  const double mx = sx / m, my = sy / m;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (int i = 0; i < m; ++i) {
    const double dx = std::log(fit.separations[i]) - mx;
    const double dy = std::log(fit.mean_weights[i]) - my;
    sxx += dx * dx;
    sxy += dx * dy;
    syy += dy * dy;
  }
  fit.exponent = sxy / sxx;
  fit.amplitude = std::exp(my - fit.exponent * mx);
  const double ss_res = syy - sxy * sxy / sxx;
  fit.r_squared = syy > 0.0 ? 1.0 - ss_res / syy : (std::abs(ss_res) < 1e-24 ? 1.0 : 0.0);
  return fit;
}

}  // namespace eamkit

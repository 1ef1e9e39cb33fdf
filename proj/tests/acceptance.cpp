// Acceptance suite: runs every shipping criterion at its stated tolerance
// and prints one pass/fail line per criterion. Exits nonzero if any fail.
// Usage: acceptance [id...]   (default: all)

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "eamkit/cft.hpp"
#include "eamkit/contour.hpp"
#include "eamkit/eamfit.hpp"
#include "eamkit/entropy.hpp"
#include "eamkit/io.hpp"
#include "eamkit/states.hpp"
#include "oracle_helpers.hpp"

using namespace eamkit;

namespace {

constexpr double kLn2 = 0.6931471805599453;

struct Outcome {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& message) {
    if (!ok) {
      pass = false;
      if (!detail.empty()) detail += "; ";
      detail += message;
    }
  }
  void note(const std::string& message) {
    if (!detail.empty()) detail += "; ";
    detail += message;
  }
};

std::string fmt(double x) {
  char buffer[32];
  std::snprintf(buffer, sizeof buffer, "%.3g", x);
  return buffer;
}

// --- criterion 1: dimer exactness -----------------------------------------

Outcome criterion_dimer() {
  Outcome out;
  const int n = 10;
  const Matching matching = nearest_neighbor_matching(n);
  const EntropyTable table = all_entropies(build_dimer(n, matching));
  const auto [eam, report] = fit_eam(table, false);

  double worst_on = 0.0, worst_off = 0.0;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      const bool matched = i % 2 == 0 && j == i + 1;
      if (matched)
        worst_on = std::max(worst_on, std::abs(eam.j(i, j) - kLn2));
      else
        worst_off = std::max(worst_off, std::abs(eam.j(i, j)));
    }
  }
  out.require(worst_on <= 1e-9, "matched-pair deviation " + fmt(worst_on));
  out.require(worst_off <= 1e-9, "unmatched weight " + fmt(worst_off));
  out.require(report.error <= 1e-9, "fit error " + fmt(report.error));
  out.note("J=ln2 on 5 pairs to " + fmt(worst_on) + ", elsewhere " + fmt(worst_off) +
           ", error " + fmt(report.error));
  return out;
}

// --- criterion 2: rainbow exactness ----------------------------------------

Outcome criterion_rainbow() {
  Outcome out;
  const int n = 10;
  const EntropyTable table = all_entropies(build_rainbow(n));
  const auto [eam, report] = fit_eam(table, false);

  double worst_on = 0.0, worst_off = 0.0, nn_weight = 0.0;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      if (i + j == n - 1)
        worst_on = std::max(worst_on, std::abs(eam.j(i, j) - kLn2));
      else
        worst_off = std::max(worst_off, std::abs(eam.j(i, j)));
      if (j == i + 1 && i + j != n - 1)
        nn_weight = std::max(nn_weight, std::abs(eam.j(i, j)));
    }
  }
  out.require(worst_on <= 1e-9, "center-symmetric deviation " + fmt(worst_on));
  out.require(worst_off <= 1e-9, "off-pattern weight " + fmt(worst_off));
  out.require(report.error <= 1e-9, "fit error " + fmt(report.error));
  out.note("geometry differs from the chain: nearest-neighbor weights " +
           fmt(nn_weight) + " except the middle bond, error " + fmt(report.error));
  return out;
}

// --- criterion 3: GHZ with offset ------------------------------------------

Outcome criterion_ghz() {
  Outcome out;
  const EntropyTable table = all_entropies(build_ghz(10));
  const auto [eam, report] = fit_eam(table, true);
  out.require(eam.s0.has_value(), "no s0 fitted");
  const double s0 = eam.s0.value_or(0.0);
  out.require(std::abs(s0 - kLn2) <= 1e-9, "s0 deviation " + fmt(std::abs(s0 - kLn2)));
  const double max_j = eam.j.cwiseAbs().maxCoeff();
  out.require(max_j <= 1e-9, "max |J| " + fmt(max_j));
  out.require(report.error <= 1e-9, "fit error " + fmt(report.error));
  out.note("s0 = " + fmt(s0) + ", max|J| = " + fmt(max_j) + ", error " +
           fmt(report.error));
  return out;
}

// --- criterion 4: solver oracle equivalence ---------------------------------

Outcome criterion_solver_oracle() {
  Outcome out;
  double worst = 0.0;
  for (int n = 4; n <= 8; ++n) {
    // D^T D brute-force counts
    const Eigen::MatrixXd design = oracle::dense_design(n, false, false);
    const Eigen::MatrixXd gram = design.transpose() * design;
    const int pairs = pair_count(n);
    for (int p = 0; p < pairs; ++p)
      for (int q = 0; q < pairs; ++q) {
        const double expected = p == q ? std::exp2(n - 1) : std::exp2(n - 2);
        out.require(gram(p, q) == expected,
                    "D^T D count mismatch at n=" + std::to_string(n));
      }

    // closed form vs dense least squares on a pseudo-random table
    EntropyTable table;
    table.n_sites = n;
    table.entropies.resize(std::size_t{1} << n);
    std::uint64_t state = 0x243f6a8885a308d3ull + n;
    for (double& s : table.entropies) {
      state = state * 6364136223846793005ull + 1442695040888963407ull;
      s = static_cast<double>(state >> 11) / 9007199254740992.0 * 2.0;
    }
    const auto [eam, report] = fit_eam(table, false);
    Eigen::VectorXd rhs(std::int64_t{1} << n);
    for (std::int64_t m = 0; m < (std::int64_t{1} << n); ++m)
      rhs[m] = table.entropies[m];
    const Eigen::VectorXd dense = oracle::dense_lstsq(design, rhs);
    int p = 0;
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j, ++p)
        worst = std::max(worst, std::abs(eam.j(i, j) - dense[p]));
  }
  out.require(worst <= 1e-10, "closed form vs dense solve differ by " + fmt(worst));
  out.note("closed form matches dense least squares to " + fmt(worst) +
           ", D^T D counts 2^(N-1)/2^(N-2) verified for N in {4..8}");
  return out;
}

// --- criterion 5: cross-engine agreement ------------------------------------

Outcome criterion_cross_engine() {
  Outcome out;
  double worst_all = 0.0, worst_contiguous = 0.0;
  Mask worst_mask = 0;
  int worst_n = 0;
  double worst_dim = 0.0;

  for (const double dimerization : {0.0, 0.5}) {
    for (int n = 4; n <= 12; n += 2) {
      XxzSpec spec;
      spec.n_sites = n;
      spec.delta = 0.0;
      spec.boundary = Boundary::open;
      spec.dimerization = dimerization;
      const EntropyTable spin = all_entropies(xxz_ground_state(spec).state);
      const EntropyTable fermi = all_entropies(
          freefermion_ground(dimerized_hopping(n, dimerization), n / 2));
      for (Mask m = 0; m <= full_mask(n); ++m) {
        const double diff = std::abs(spin.at(m) - fermi.at(m));
        if (oracle::mask_is_contiguous_or_complement(m, n))
          worst_contiguous = std::max(worst_contiguous, diff);
        if (diff > worst_all) {
          worst_all = diff;
          worst_mask = m;
          worst_n = n;
          worst_dim = dimerization;
        }
      }
    }
  }
  out.require(worst_all <= 1e-8, "max |dS| over all masks = " + fmt(worst_all) +
                                     " at mask " + std::to_string(worst_mask) +
                                     " (n=" + std::to_string(worst_n) +
                                     ", delta=" + fmt(worst_dim) + ")");
  out.note("contiguous-or-complement masks agree to " + fmt(worst_contiguous) +
           "; the remaining masks are disconnected subsets, where the spin and "
           "fermion reduced states differ by Jordan-Wigner strings");
  return out;
}

// --- criterion 6: dimerized contour comparison (fig. 3a layout) --------------

Outcome criterion_contours() {
  Outcome out;
  const int n = 14;
  const FreeFermionGround ground = freefermion_ground(dimerized_hopping(n, 0.5), n / 2);
  const Mask half = (Mask{1} << (n / 2)) - 1;

  const EntropyTable table = all_entropies(ground);
  const auto [eam, report] = fit_eam(table, false);
  const ContourVector via_eam = contour_from_eam(eam, half);
  const ContourVector via_corr = contour_freefermion(ground, half);

  const double eam_gap = std::abs(via_eam.sum() - predict_entropy(eam, half));
  const double corr_gap =
      std::abs(via_corr.sum() - block_entropy_freefermion(ground, half));
  const ContourComparison cmp = compare_contours(via_eam, via_corr);

  out.require(cmp.pearson >= 0.9, "pearson " + fmt(cmp.pearson));
  out.require(eam_gap <= 1e-12, "adjacency-route sum rule off by " + fmt(eam_gap));
  out.require(corr_gap <= 1e-10, "correlation-route sum rule off by " + fmt(corr_gap));
  out.note("pearson = " + fmt(cmp.pearson) + ", sum rules hold to " + fmt(eam_gap) +
           " (adjacency) and " + fmt(corr_gap) + " (correlation)");
  return out;
}

// --- criterion 7: XXZ pipeline (fig. 3b layout) ------------------------------

Outcome criterion_xxz_pipeline() {
  Outcome out;
  const auto artifacts =
      std::filesystem::temp_directory_path() / "eamkit_acceptance";
  std::filesystem::create_directories(artifacts);

  std::ostringstream scaling;
  scaling << "E(N) data:";
  for (const double delta : {0.5, 1.0, 2.0}) {
    double ratio12 = 0.0;
    for (int n = 6; n <= 12; n += 2) {
      XxzSpec spec;
      spec.n_sites = n;
      spec.delta = delta;
      spec.boundary = Boundary::periodic;
      const XxzGroundState ground = xxz_ground_state(spec);
      const EntropyTable table = all_entropies(ground.state);
      const auto [eam, report] = fit_eam(table, false);

      double baseline = 0.0;
      for (const double s : table.entropies) baseline += std::abs(s);
      baseline /= static_cast<double>(table.size());

      scaling << " [D=" << delta << ",N=" << n << "] E=" << fmt(report.error);
      if (n == 12) {
        ratio12 = baseline / report.error;
        const ContourVector contour = contour_from_eam(eam, (Mask{1} << 6) - 1);
        std::ostringstream name;
        name << "contour_xxz_delta" << delta << ".csv";
        write_contour_csv(contour, "eam", "xxz:n=12,delta=" + fmt(delta),
                          12, (artifacts / name.str()).string(), false);
      }
    }
    out.require(ratio12 >= 10.0, "improvement x" + fmt(ratio12) + " at delta " +
                                     fmt(delta) + " is below 10x");
    scaling << " ratio(N=12)=" << fmt(ratio12) << "x;";
  }
  out.note(scaling.str());
  out.note("half-chain contours written to " + artifacts.string());
  return out;
}

// --- criterion 8: CFT checks -------------------------------------------------

Outcome criterion_cft() {
  Outcome out;
  const IntervalSpec spec{0.0, 1.0, 0.01, 1.0};
  const double integral = interval_entropy_integral(spec);
  const double gap = interval_entropy_cft(spec) - integral;
  const double integral_err = std::abs(integral - std::log(99.0) / 3.0);
  const double gap_err = std::abs(gap - std::log(100.0 / 99.0) / 3.0);
  out.require(integral_err <= 1e-9, "quadrature off by " + fmt(integral_err));
  out.require(gap_err <= 1e-8, "cutoff gap off by " + fmt(gap_err));

  const auto [eam, report] = fit_eam(
      all_entropies(freefermion_ground(dimerized_hopping(16, 0.0), 8)), false);
  const PowerLawFit fit = power_law_exponent(eam, 2, 6);
  out.require(fit.exponent >= -2.3 && fit.exponent <= -1.7,
              "lattice exponent " + fmt(fit.exponent) + " outside [-2.3, -1.7]");
  out.note("integral = (1/3)ln99 to " + fmt(integral_err) + ", gap to " +
           fmt(gap_err) + ", lattice exponent " + fmt(fit.exponent) +
           " (r2 " + fmt(fit.r_squared) + ")");
  return out;
}

// --- criterion 9: property suites ---------------------------------------------

Outcome criterion_properties() {
  Outcome out;
  for (const int n : {4, 6, 8}) {
    std::vector<std::pair<std::string, EntropyTable>> zoo;
    zoo.emplace_back("dimer", all_entropies(build_dimer(n, nearest_neighbor_matching(n))));
    zoo.emplace_back("rainbow", all_entropies(build_rainbow(n)));
    zoo.emplace_back("ghz", all_entropies(build_ghz(n)));
    XxzSpec spec;
    spec.n_sites = n;
    zoo.emplace_back("xxz", all_entropies(xxz_ground_state(spec).state));
    const FreeFermionGround fermi = freefermion_ground(dimerized_hopping(n, 0.0), n / 2);
    zoo.emplace_back("freefermion", all_entropies(fermi));

    for (const auto& [name, table] : zoo) {
      const std::string tag = name + " n=" + std::to_string(n);
      for (Mask m = 0; m <= full_mask(n); ++m) {
        out.require(std::abs(table.at(m) - table.at(full_mask(n) ^ m)) <= 1e-9,
                    "purity violated for " + tag);
        const int k = popcount(m);
        out.require(table.at(m) <= std::min(k, n - k) * kLn2 + 1e-9,
                    "entropy cap violated for " + tag);
      }
      for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
          out.require(table.at((Mask{1} << i) | (Mask{1} << j)) <=
                          table.at(Mask{1} << i) + table.at(Mask{1} << j) + 1e-9,
                      "subadditivity violated for " + tag);

      const bool offset = name == "ghz";
      const auto [eam, report] = fit_eam(table, offset);
      for (Mask m = 1; m < full_mask(n); ++m) {
        const double cut_weight = predict_entropy(eam, m) - (eam.s0 ? *eam.s0 : 0.0);
        out.require(std::abs(contour_from_eam(eam, m).sum() - cut_weight) <= 1e-12,
                    "adjacency contour sum rule violated for " + tag);
      }
    }

    for (Mask m = 1; m < full_mask(n); ++m) {
      const ContourVector contour = contour_freefermion(fermi, m);
      out.require(std::abs(contour.sum() - block_entropy_freefermion(fermi, m)) <= 1e-10,
                  "correlation contour sum rule violated at n=" + std::to_string(n));
      for (const double v : contour.values)
        out.require(v >= -1e-10, "contour negativity at n=" + std::to_string(n));
    }

    for (const char* name : {"dimer", "rainbow"}) {
      const EntropyTable& table = std::string(name) == "dimer" ? zoo[0].second
                                                               : zoo[1].second;
      const auto [eam, report] = fit_eam(table, false);
      const Eigen::MatrixXd info = mutual_information_matrix(table);
      out.require((eam.j - 0.5 * info).cwiseAbs().maxCoeff() <= 1e-9,
                  std::string("J = I/2 violated for ") + name);
    }

    const EntropyTable& xxz_table = zoo[3].second;
    EntropyTable scaled = xxz_table;
    for (double& s : scaled.entropies) s *= 2.5;
    const auto [eam1, r1] = fit_eam(xxz_table, false);
    const auto [eam2, r2] = fit_eam(scaled, false);
    out.require((eam2.j - 2.5 * eam1.j).cwiseAbs().maxCoeff() <= 1e-12,
                "fit linearity violated at n=" + std::to_string(n));
  }
  if (out.pass)
    out.note("purity, subadditivity, caps, contour sums, J=I/2, linearity at N in {4,6,8}");
  return out;
}

struct Criterion {
  int id;
  std::string name;
  double time_limit_s;  // 0 = none
  std::function<Outcome()> run;
};

}  // namespace

int main(int argc, char** argv) {
  const std::vector<Criterion> criteria = {
      {1, "dimer exactness (N=10 nearest-neighbor)", 5.0, criterion_dimer},
      {2, "rainbow exactness (N=10 center-symmetric geometry)", 0.0, criterion_rainbow},
      {3, "GHZ offset fit (N=10, s0 = ln 2)", 0.0, criterion_ghz},
      {4, "solver oracle equivalence (N in {4..8})", 0.0, criterion_solver_oracle},
      {5, "cross-engine agreement at every mask (N <= 12)", 0.0, criterion_cross_engine},
      {6, "dimerized contour comparison (N=14, delta=0.5)", 60.0, criterion_contours},
      {7, "XXZ pipeline with 10x error reduction (N=12)", 600.0, criterion_xxz_pipeline},
      {8, "CFT interval integral and lattice power law", 0.0, criterion_cft},
      {9, "property suites at N in {4, 6, 8}", 0.0, criterion_properties},
  };

  std::vector<int> wanted;
  for (int a = 1; a < argc; ++a) wanted.push_back(std::atoi(argv[a]));

  int failures = 0;
  for (const auto& criterion : criteria) {
    if (!wanted.empty() &&
        std::find(wanted.begin(), wanted.end(), criterion.id) == wanted.end())
      continue;
    const auto start = std::chrono::steady_clock::now();
    Outcome outcome;
    try {
      outcome = criterion.run();
    } catch (const std::exception& e) {
      outcome.pass = false;
      outcome.detail = std::string("exception: ") + e.what();
    }
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
            .count();
    if (criterion.time_limit_s > 0 && seconds > criterion.time_limit_s) {
      outcome.pass = false;
      outcome.detail += "; runtime " + fmt(seconds) + " s exceeds " +
                        fmt(criterion.time_limit_s) + " s";
    }
    if (!outcome.pass) ++failures;
    std::printf("[%s] criterion %d: %s (%.2f s)%s%s\n",
                outcome.pass ? "PASS" : "FAIL", criterion.id,
                criterion.name.c_str(), seconds,
                outcome.detail.empty() ? "" : " -- ", outcome.detail.c_str());
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}

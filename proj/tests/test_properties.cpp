// Property suites over the model zoo at N in {4, 6, 8}: purity symmetry,
// subadditivity, entropy caps, contour sum rules, J = I/2 on exact
// valence-bond states, and fit linearity under table scaling.
#include <doctest.h>

#include <cmath>
#include <functional>
#include <string>
#include <vector>

#include "eamkit/contour.hpp"
#include "eamkit/eamfit.hpp"
#include "eamkit/entropy.hpp"
#include "eamkit/states.hpp"

using namespace eamkit;

namespace {

constexpr double kLn2 = 0.6931471805599453;

struct ModelCase {
  std::string name;
  EntropyTable table;
  const FreeFermionGround* ffg = nullptr;  // set for the fermionic entries
};

std::vector<ModelCase> model_zoo(int n) {
  static std::vector<FreeFermionGround> keep_alive;
  std::vector<ModelCase> zoo;
  zoo.push_back({"dimer", all_entropies(build_dimer(n, nearest_neighbor_matching(n)))});
  zoo.push_back({"rainbow", all_entropies(build_rainbow(n))});
  zoo.push_back({"ghz", all_entropies(build_ghz(n))});
  XxzSpec spec;
  spec.n_sites = n;
  spec.delta = 1.0;
  zoo.push_back({"xxz", all_entropies(xxz_ground_state(spec).state)});
  keep_alive.push_back(freefermion_ground(dimerized_hopping(n, 0.0), n / 2));
  zoo.push_back({"freefermion", all_entropies(keep_alive.back()), &keep_alive.back()});
  return zoo;
}

}  // namespace

TEST_CASE("properties: purity symmetry at every mask") {
  for (int n : {4, 6, 8}) {
    for (const auto& model : model_zoo(n)) {
      CAPTURE(model.name);
      for (Mask m = 0; m <= full_mask(n); ++m)
        CHECK(std::abs(model.table.at(m) - model.table.at(full_mask(n) ^ m)) <= 1e-9);
    }
  }
}

TEST_CASE("properties: subadditivity on single-site pairs") {
  for (int n : {4, 6, 8}) {
    for (const auto& model : model_zoo(n)) {
      CAPTURE(model.name);
      for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
          CHECK(model.table.at((Mask{1} << i) | (Mask{1} << j)) <=
                model.table.at(Mask{1} << i) + model.table.at(Mask{1} << j) + 1e-9);
    }
  }
}

TEST_CASE("properties: entropy cap min(|A|, N-|A|) ln 2") {
  for (int n : {4, 6, 8}) {
    for (const auto& model : model_zoo(n)) {
      CAPTURE(model.name);
      for (Mask m = 0; m <= full_mask(n); ++m) {
        const int k = popcount(m);
        CHECK(model.table.at(m) >= -1e-12);
        CHECK(model.table.at(m) <= std::min(k, n - k) * kLn2 + 1e-9);
      }
    }
  }
}

TEST_CASE("properties: contour sum rules") {
  for (int n : {4, 6, 8}) {
    for (const auto& model : model_zoo(n)) {
      CAPTURE(model.name);
      const bool ghz = model.name == "ghz";
      const auto [eam, report] = fit_eam(model.table, ghz);
      for (Mask m = 1; m < full_mask(n); ++m) {
        const ContourVector contour = contour_from_eam(eam, m);
        const double cut_weight =
            predict_entropy(eam, m) - (eam.s0 ? *eam.s0 : 0.0);
        CHECK(std::abs(contour.sum() - cut_weight) <= 1e-12);
      }
      if (model.ffg) {
        for (Mask m = 1; m < full_mask(n); ++m) {
          const ContourVector contour = contour_freefermion(*model.ffg, m);
          CHECK(std::abs(contour.sum() - block_entropy_freefermion(*model.ffg, m)) <=
                1e-10);
          for (const double v : contour.values) CHECK(v >= -1e-10);
        }
      }
    }
  }
}

TEST_CASE("properties: exact valence-bond fits satisfy J = I/2") {
  for (int n : {4, 6, 8}) {
    for (const EntropyTable& table :
         {all_entropies(build_dimer(n, nearest_neighbor_matching(n))),
          all_entropies(build_rainbow(n))}) {
      const auto [eam, report] = fit_eam(table, false);
      REQUIRE(report.error <= 1e-9);
      const Eigen::MatrixXd info = mutual_information_matrix(table);
      CHECK((eam.j - 0.5 * info).cwiseAbs().maxCoeff() <= 1e-9);
    }
  }
}

TEST_CASE("properties: fit linearity under table scaling") {
  for (int n : {4, 6, 8}) {
    XxzSpec spec;
    spec.n_sites = n;
    spec.delta = 0.5;
    const EntropyTable table = all_entropies(xxz_ground_state(spec).state);
    EntropyTable scaled = table;
    const double lambda = 3.875;  // exactly representable
    for (double& s : scaled.entropies) s *= lambda;
    const auto [eam1, r1] = fit_eam(table, false);
    const auto [eam2, r2] = fit_eam(scaled, false);
    CHECK((eam2.j - lambda * eam1.j).cwiseAbs().maxCoeff() <= 1e-12);
  }
}

// Compares the OpenMP kernels against the serial reference implementations:
// entropy sweeps for both engines and the cut-sum reduction.
// Usage: bench_sweep [n_statevector] [n_freefermion]

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <functional>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "eamkit/eamfit.hpp"
#include "eamkit/entropy.hpp"
#include "eamkit/states.hpp"

using namespace eamkit;

namespace {

double seconds(const std::function<void()>& work) {
  const auto start = std::chrono::steady_clock::now();
  work();
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
      .count();
}

void report(const char* name, double serial_s, double parallel_s) {
  std::printf("%-28s serial %8.3f s   parallel %8.3f s   speedup %.2fx\n", name,
              serial_s, parallel_s, serial_s / parallel_s);
}

}  // namespace

int main(int argc, char** argv) {
  const int n_statevector = argc > 1 ? std::atoi(argv[1]) : 14;
  const int n_freefermion = argc > 2 ? std::atoi(argv[2]) : 16;

#ifdef _OPENMP
  std::printf("threads: %d\n", omp_get_max_threads());
#else
  std::printf("threads: built without OpenMP, parallel path runs serially\n");
#endif

  {
    const PureState state = build_rainbow(n_statevector);
    const auto kernel = [&state](Mask m) {
      return block_entropy_statevector(state, m);
    };
    std::vector<double> serial_result, parallel_result;
    const double serial_s = seconds([&] {
      serial_result = sweep_block_entropies_serial(n_statevector, kernel);
    });
    const double parallel_s = seconds([&] {
      parallel_result = sweep_block_entropies(n_statevector, kernel);
    });
    report("statevector sweep", serial_s, parallel_s);
    for (std::size_t m = 0; m < serial_result.size(); ++m)
      if (serial_result[m] != parallel_result[m]) {
        std::printf("MISMATCH at mask %zu\n", m);
        return 1;
      }
  }

  EntropyTable table;
  {
    const FreeFermionGround ground =
        freefermion_ground(dimerized_hopping(n_freefermion, 0.0), n_freefermion / 2);
    const auto kernel = [&ground](Mask m) {
      return block_entropy_freefermion(ground, m);
    };
    std::vector<double> serial_result, parallel_result;
    const double serial_s = seconds([&] {
      serial_result = sweep_block_entropies_serial(n_freefermion, kernel);
    });
    const double parallel_s = seconds([&] {
      parallel_result = sweep_block_entropies(n_freefermion, kernel);
    });
    report("freefermion sweep", serial_s, parallel_s);
    table.n_sites = n_freefermion;
    table.engine = "freefermion";
    table.entropies = std::move(parallel_result);
    for (std::size_t m = 0; m < serial_result.size(); ++m)
      if (serial_result[m] != table.entropies[m]) {
        std::printf("MISMATCH at mask %zu\n", m);
        return 1;
      }
  }

  {
    std::vector<double> serial_result, parallel_result;
    const double serial_s =
        seconds([&] { serial_result = cut_entropy_sums_serial(table); });
    const double parallel_s =
        seconds([&] { parallel_result = cut_entropy_sums(table); });
    report("cut-sum reduction", serial_s, parallel_s);
    double worst = 0.0;
    for (std::size_t p = 0; p < serial_result.size(); ++p)
      worst = std::max(worst, std::abs(serial_result[p] - parallel_result[p]));
    std::printf("cut-sum serial/parallel max difference: %.3g\n", worst);
  }
  return 0;
}

// Microbenchmark comparing the OpenMP kernels against their serial reference
// implementations: resonant field evaluation, FFT vs direct-convolution
// nonlinearity, and ensemble throughput.

#include <chrono>
#include <cstdio>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "rnls/checks.hpp"

using namespace rnls;
namespace chrono = std::chrono;

namespace {

template <typename F>
double time_ms(int reps, F&& body) {
  auto t0 = chrono::steady_clock::now();
  for (int i = 0; i < reps; ++i) body();
  auto t1 = chrono::steady_clock::now();
  return chrono::duration<double, std::milli>(t1 - t0).count() / reps;
}

void bench_resonant_field(int d, int N, int q_star, int reps) {
  SpectralGrid grid(d, N);
  ResonanceTable table = enumerate_resonant_tuples(grid, q_star);
  SpectralField v = random_field(grid, 42);
  SpectralField out(grid);

  double t_par = time_ms(reps, [&] { resonant_field_direct_into(table, v.v, 1.0, out.v); });
  SpectralField ref;
  double t_ser = time_ms(reps, [&] { ref = reference::resonant_field(table, v, 1.0); });
  double err = rel_err(out, ref);
  std::printf("resonant field d=%d N=%d q*=%d (%zu tuples): omp %.3f ms, serial %.3f ms, "
              "speedup %.2fx, rel err %.1e\n",
              d, N, q_star, table.total(), t_par, t_ser, t_ser / t_par, err);
}

void bench_nonlinearity(int d, int N, int q_star, int reps) {
  SpectralGrid grid(d, N);
  NonlinearityEngine engine(grid, q_star);
  SpectralField v = random_field(grid, 43);
  SpectralField out(grid);

  double t_fft = time_ms(reps, [&] { engine.apply(v.v, 1.0, out.v); });
  SpectralField ref;
  double t_dir = time_ms(std::max(1, reps / 10),
                         [&] { ref = reference::nonlinearity_direct(v, q_star, 1.0); });
  double err = rel_err(out, ref);
  std::printf("nonlinearity  d=%d N=%d q*=%d (pad %d): fft %.3f ms, direct %.3f ms, "
              "speedup %.2fx, rel err %.1e\n",
              d, N, q_star, engine.pad_size(), t_fft, t_dir, t_dir / t_fft, err);
}

void bench_ensemble(int threads) {
#ifdef _OPENMP
  omp_set_num_threads(threads);
#endif
  SpectralGrid grid(2, 1);
  ModelParams params(grid, 1, 1.0, DampingSpec{}, NoiseSpec{NoiseSpec::Kind::gaussian, 0.25, 0.5});
  ResonanceTable table = enumerate_resonant_tuples(grid, 1);
  ObservableSpec obs = ObservableSpec::all_modes(grid);
  SpectralField v0 = random_field(grid, 44);

  RunSpec spec;
  spec.kind = EquationKind::full;
  spec.nu = 0.1;
  spec.T = 0.5;
  spec.M = 64;
  spec.samples = 8;
  spec.seed = 7;

  auto t0 = chrono::steady_clock::now();
  EnsembleResult ens = run_ensemble(params, table, obs, spec, v0);
  auto t1 = chrono::steady_clock::now();
  double ms = chrono::duration<double, std::milli>(t1 - t0).count();
  std::printf("ensemble      full d=2 N=1, M=%d, %d threads: %.1f ms (dt %.2e, blowups %d)\n",
              spec.M, threads, ms, ens.tg.dt, ens.blowups());
}

}  // namespace

int main() {
  bench_resonant_field(2, 3, 1, 20);
  bench_resonant_field(2, 4, 1, 20);
  bench_nonlinearity(2, 2, 1, 200);
  bench_nonlinearity(2, 2, 2, 50);
  bench_ensemble(1);
#ifdef _OPENMP
  int hw = omp_get_num_procs();
  if (hw > 1) bench_ensemble(hw);
#endif
  return 0;
}

// Serial reference kernels against their OpenMP counterparts on unit disk
// grids. Thread count follows OMP_NUM_THREADS.

#include <benchmark/benchmark.h>

#include <cmath>
#include <vector>

#include "hmlab/dirichlet.hpp"
#include "hmlab/kernels.hpp"
#include "hmlab/metric.hpp"

using namespace hmlab;

namespace {

struct Setup {
  explicit Setup(int n)
      : grid(Grid::unit_disk(n)), solver(grid, Closure::curve), metric(MetricDensity::hyperbolic()) {
    const Grid& g = *grid;
    f.resize(g.size());
    real.resize(g.size());
    for (std::size_t k = 0; k < g.size(); ++k) {
      const cplx z = g.point(k);
      f[k] = g.defined(k) ? 0.6 * z + 0.1 * std::conj(z * z) : cplx(NAN, NAN);
      real[k] = g.defined(k) ? std::cos(z.real()) * std::exp(z.imag()) : NAN;
    }
    dz.resize(g.size());
    dzbar.resize(g.size());
    kernels::parallel::wirtinger(g, f, dz, dzbar);
    x.assign(solver.table().size(), cplx(0.0));
    rhs.assign(solver.table().size(), cplx(1.0, -0.5));
  }

  GridPtr grid;
  DirichletSolver solver;
  MetricDensity metric;
  std::vector<cplx> f, dz, dzbar, x, rhs;
  std::vector<double> real;
};

Setup& setup(int n) {
  static std::vector<std::pair<int, std::unique_ptr<Setup>>> cache;
  for (auto& [m, s] : cache) {
    if (m == n) return *s;
  }
  cache.emplace_back(n, std::make_unique<Setup>(n));
  return *cache.back().second;
}

template <bool Parallel>
void wirtinger(benchmark::State& state) {
  Setup& s = setup(static_cast<int>(state.range(0)));
  std::vector<cplx> dz(s.f.size()), dzbar(s.f.size());
  for (auto _ : state) {
    if constexpr (Parallel) kernels::parallel::wirtinger(*s.grid, s.f, dz, dzbar);
    else kernels::serial::wirtinger(*s.grid, s.f, dz, dzbar);
    benchmark::DoNotOptimize(dz.data());
  }
}

template <bool Parallel>
void laplacian(benchmark::State& state) {
  Setup& s = setup(static_cast<int>(state.range(0)));
  std::vector<cplx> out(s.f.size());
  for (auto _ : state) {
    if constexpr (Parallel) kernels::parallel::laplacian(*s.grid, s.f, std::span<cplx>(out));
    else kernels::serial::laplacian(*s.grid, s.f, std::span<cplx>(out));
    benchmark::DoNotOptimize(out.data());
  }
}

// One full sweep: both colours for red-black, one lexicographic pass for serial.
template <bool Parallel>
void sor_sweep(benchmark::State& state) {
  Setup& s = setup(static_cast<int>(state.range(0)));
  std::vector<cplx> x = s.x;
  for (auto _ : state) {
    if constexpr (Parallel) {
      kernels::parallel::sor_sweep(s.solver.table(), 0, x, s.rhs, 1.5);
      kernels::parallel::sor_sweep(s.solver.table(), 1, x, s.rhs, 1.5);
    } else {
      kernels::serial::sor_sweep(s.solver.table(), x, s.rhs, 1.5);
    }
    benchmark::DoNotOptimize(x.data());
  }
}

template <bool Parallel>
void tension_rhs(benchmark::State& state) {
  Setup& s = setup(static_cast<int>(state.range(0)));
  std::vector<cplx> out(s.solver.table().size());
  for (auto _ : state) {
    if constexpr (Parallel) kernels::parallel::tension_rhs(s.solver.table(), s.metric, s.f, s.dz, s.dzbar, out);
    else kernels::serial::tension_rhs(s.solver.table(), s.metric, s.f, s.dz, s.dzbar, out);
    benchmark::DoNotOptimize(out.data());
  }
}

template <bool Parallel>
void integrate(benchmark::State& state) {
  Setup& s = setup(static_cast<int>(state.range(0)));
  for (auto _ : state) {
    double v = Parallel ? kernels::parallel::integrate(*s.grid, s.real) : kernels::serial::integrate(*s.grid, s.real);
    benchmark::DoNotOptimize(v);
  }
}

#define HMLAB_BENCH_PAIR(fn)                                              \
  BENCHMARK_TEMPLATE(fn, false)->Name(#fn "/serial")->Arg(129)->Arg(257)->Arg(513); \
  BENCHMARK_TEMPLATE(fn, true)->Name(#fn "/parallel")->Arg(129)->Arg(257)->Arg(513)

HMLAB_BENCH_PAIR(wirtinger);
HMLAB_BENCH_PAIR(laplacian);
HMLAB_BENCH_PAIR(sor_sweep);
HMLAB_BENCH_PAIR(tension_rhs);
HMLAB_BENCH_PAIR(integrate);

}  // namespace

BENCHMARK_MAIN();

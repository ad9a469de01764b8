// Serial vs OpenMP timings for the inner kernels, plus one forward solve.

#include <omp.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <random>
#include <string>

#include "dgplab/kernels.hpp"
#include "dgplab/pde.hpp"

using namespace dgplab;

namespace {

template <typename F>
double time_ms(F&& f, int reps) {
  f();
  const auto t0 = std::chrono::steady_clock::now();
  for (int r = 0; r < reps; ++r) f();
  const auto t1 = std::chrono::steady_clock::now();
  return std::chrono::duration<double, std::milli>(t1 - t0).count() / reps;
}

void row(const std::string& name, double serial, double parallel) {
  std::printf("%-28s serial %9.3f ms  parallel %9.3f ms  speedup %5.2f\n", name.c_str(), serial, parallel,
              serial / parallel);
}

}  // namespace

int main(int argc, char** argv) {
  const int m = argc > 1 ? std::stoi(argv[1]) : 257;
  std::printf("threads: %d, grid %d x %d\n", omp_get_max_threads(), m, m);
  const Grid grid = Grid::cube(2, m);
  std::mt19937_64 eng(7);
  std::normal_distribution<double> nd;
  Field theta(grid);
  for (std::size_t i = 0; i < theta.size(); ++i) theta[i] = 0.3 * nd(eng);
  DarcyConfig cfg;
  cfg.grid = grid;
  cfg.source = Field(grid, 1.0);
  cfg.g_min = 1.0;
  const kernels::FluxOperator op = darcy_operator(link(theta, cfg));

  std::vector<double> x(grid.size()), y(grid.size());
  for (double& v : x) v = nd(eng);
  const int reps = 50;
  row("apply_operator", time_ms([&] { kernels::serial::apply_operator(op, x, y); }, reps),
      time_ms([&] { kernels::parallel::apply_operator(op, x, y); }, reps));
  volatile double sink = 0.0;
  row("dot", time_ms([&] { sink = kernels::serial::dot(x, y); }, reps),
      time_ms([&] { sink = kernels::parallel::dot(x, y); }, reps));
  row("axpy", time_ms([&] { kernels::serial::axpy(1e-6, x, y); }, reps),
      time_ms([&] { kernels::parallel::axpy(1e-6, x, y); }, reps));

  const int J = 32;
  kernels::AxisMatrix M{m, J, std::vector<double>(static_cast<std::size_t>(m) * J)};
  for (double& v : M.data) v = nd(eng);
  std::vector<double> coeffs(static_cast<std::size_t>(J) * m);
  for (double& v : coeffs) v = nd(eng);
  const kernels::Shape shape{J, m};
  row("apply_axis (synthesis)", time_ms([&] { kernels::serial::apply_axis(coeffs, shape, 0, M); }, reps),
      time_ms([&] { kernels::parallel::apply_axis(coeffs, shape, 0, M); }, reps));

  const double solve = time_ms([&] { forward(theta, cfg); }, 3);
  std::printf("%-28s %9.3f ms\n", "Darcy forward solve", solve);
  return sink == 12345.0 ? 1 : 0;
}

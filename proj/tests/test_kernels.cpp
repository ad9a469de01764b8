#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <omp.h>

#include <random>

#include "dgplab/kernels.hpp"
#include "dgplab/pde.hpp"

using namespace dgplab;

namespace {

std::vector<double> randn(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 eng(seed);
  std::normal_distribution<double> nd;
  std::vector<double> v(n);
  for (double& x : v) x = nd(eng);
  return v;
}

}  // namespace

TEST_CASE("parallel kernels agree with the serial reference") {
  const Grid g = Grid::cube(2, 129);
  const auto th = randn(g.size(), 1);
  Field f(g);
  for (std::size_t i = 0; i < g.size(); ++i) f[i] = 1.0 + std::exp(0.3 * th[i]);
  const auto op = darcy_operator(f);
  const auto x = randn(g.size(), 2);
  std::vector<double> ys(g.size()), yp(g.size());
  kernels::serial::apply_operator(op, x, ys);
  kernels::parallel::apply_operator(op, x, yp);
  for (std::size_t i = 0; i < ys.size(); ++i) CHECK(ys[i] == yp[i]);

  CHECK(kernels::parallel::dot(x, ys) == doctest::Approx(kernels::serial::dot(x, ys)).epsilon(1e-12));

  auto a = ys, b = ys;
  kernels::serial::axpy(0.7, x, a);
  kernels::parallel::axpy(0.7, x, b);
  for (std::size_t i = 0; i < a.size(); ++i) CHECK(a[i] == b[i]);

  kernels::AxisMatrix M{129, 20, randn(129 * 20, 3)};
  const auto in = randn(20 * 129, 4);
  const kernels::Shape shape{20, 129};
  const auto s0 = kernels::serial::apply_axis(in, shape, 0, M);
  const auto p0 = kernels::parallel::apply_axis(in, shape, 0, M);
  REQUIRE(s0.size() == p0.size());
  for (std::size_t i = 0; i < s0.size(); ++i) CHECK(s0[i] == doctest::Approx(p0[i]).epsilon(1e-13));
}

TEST_CASE("blocked dot product does not depend on the thread count") {
  const auto a = randn(100000, 5), b = randn(100000, 6);
  const double ref = kernels::parallel::dot(a, b);
  for (int t : {1, 2, 3}) {
    omp_set_num_threads(t);
    CHECK(kernels::parallel::dot(a, b) == ref);
  }
}

TEST_CASE("Darcy operator is symmetric") {
  const Grid g = Grid::cube(2, 17);
  const auto th = randn(g.size(), 7);
  Field f(g);
  for (std::size_t i = 0; i < g.size(); ++i) f[i] = 1.0 + std::exp(th[i]);
  const auto op = darcy_operator(f);
  auto x = randn(g.size(), 8), y = randn(g.size(), 9);
  for (std::size_t i = 0; i < g.size(); ++i)
    if (!op.interior[i]) x[i] = y[i] = 0.0;
  std::vector<double> ax(g.size()), ay(g.size());
  kernels::serial::apply_operator(op, x, ax);
  kernels::serial::apply_operator(op, y, ay);
  CHECK(kernels::serial::dot(y, ax) == doctest::Approx(kernels::serial::dot(x, ay)).epsilon(1e-12));
}

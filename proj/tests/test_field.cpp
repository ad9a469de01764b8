#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <filesystem>

#include "dgplab/errors.hpp"
#include "dgplab/field.hpp"
#include "dgplab/io.hpp"
#include "dgplab/series.hpp"

using namespace dgplab;

TEST_CASE("grid flat indices are lexicographic with axis 0 fastest") {
  const Grid g = Grid::cube(2, 5);
  CHECK(g.size() == 25);
  CHECK(g.stride(0) == 1);
  CHECK(g.stride(1) == 5);
  int idx[2];
  g.unflatten(7, idx);
  CHECK(idx[0] == 2);
  CHECK(idx[1] == 1);
  CHECK(g.flatten(idx) == 7);
  double x[2];
  g.point(7, x);
  CHECK(x[0] == doctest::Approx(0.0));
  CHECK(x[1] == doctest::Approx(-1.25 + 0.625));
  CHECK(g.strictly_contains_unit_cube());
  CHECK_FALSE(Grid::cube(1, 5, 0.0).strictly_contains_unit_cube());
}

TEST_CASE("multilinear interpolation reproduces affine fields exactly") {
  const Grid g = Grid::cube(2, 9);
  const Field f = Field::from_function(g, [](std::span<const double> x) { return 0.5 - 2.0 * x[0] + 3.0 * x[1]; });
  for (double a : {-1.2, -0.33, 0.0, 0.71, 1.249})
    for (double b : {-1.0, 0.05, 1.1}) {
      const double x[2] = {a, b};
      CHECK(eval_field(f, x) == doctest::Approx(0.5 - 2.0 * a + 3.0 * b).epsilon(1e-13));
      const InterpStencil st = interp_stencil(g, x);
      CHECK(st.apply(f.values()) == doctest::Approx(eval_field(f, x)).epsilon(1e-15));
    }
  const double out[2] = {1.3, 0.0};
  CHECK_THROWS_AS(eval_field(f, out), DomainError);
}

TEST_CASE("trapezoid weights integrate polynomials of degree one exactly") {
  for (int d = 1; d <= 3; ++d) {
    const Grid g = Grid::cube(d, 7);
    const auto w = trapezoid_weights(g);
    double s = 0.0;
    for (double v : w) s += v;
    CHECK(s == doctest::Approx(g.volume()).epsilon(1e-13));
  }
  // Constant field: L2 norm equals sqrt(volume).
  const Grid g = Grid::cube(1, 33);
  CHECK(l2_norm(Field(g, 2.0)) == doctest::Approx(2.0 * std::sqrt(2.5)).epsilon(1e-13));
}

TEST_CASE("discrete Hölder proxies of polynomials match their derivatives") {
  const Grid g = Grid::cube(1, 201, 0.0);
  // f = x^2: sup 1, |f'| <= 2, f'' = 2.
  const Field f = Field::from_function(g, [](std::span<const double> x) { return x[0] * x[0]; });
  const NormReport r = norms(f, 2);
  CHECK(r.sup == doctest::Approx(1.0));
  CHECK(r.holder.at(1) == doctest::Approx(2.0).epsilon(0.02));
  CHECK(r.holder.at(2) == doctest::Approx(2.0).epsilon(1e-6));
  CHECK(r.c_beta() == doctest::Approx(2.0).epsilon(0.02));
  CHECK(c_beta_norm(f, 2) == doctest::Approx(r.c_beta()));
  // Restricting to a sub-box lowers the sup.
  const Region half{{-0.5}, {0.5}};
  CHECK(c_beta_norm(f, 0, half) == doctest::Approx(0.25));
}

TEST_CASE("interpolant Lipschitz constant bounds every difference quotient") {
  const Grid g = Grid::cube(2, 17);
  const Field f = Field::from_function(g, [](std::span<const double> x) { return std::sin(2 * x[0]) * std::cos(x[1]); });
  const double L = interpolant_lipschitz(f);
  for (int k = 0; k < 50; ++k) {
    const double a[2] = {-1.2 + 0.047 * k, 0.3 - 0.02 * k};
    const double b[2] = {a[0] + 0.013, a[1] - 0.011};
    const double d = std::max(std::abs(a[0] - b[0]), std::abs(a[1] - b[1]));
    CHECK(std::abs(eval_field(f, a) - eval_field(f, b)) <= L * d + 1e-14);
  }
}

TEST_CASE("cosine basis is orthonormal under the trapezoid rule") {
  const Grid g = Grid::cube(2, 33);
  const SeriesBasis b(BasisKind::tensor_cosine, g, 8);
  for (std::size_t k = 1; k < b.size(); ++k) CHECK(b.eigenvalue(k) >= b.eigenvalue(k - 1));
  for (std::size_t k : {std::size_t{0}, std::size_t{5}, b.size() - 1}) {
    std::vector<double> c(b.size(), 0.0);
    c[k] = 1.0;
    const auto back = b.analyze(b.synthesize(c));
    for (std::size_t j = 0; j < b.size(); ++j) CHECK(back[j] == doctest::Approx(j == k ? 1.0 : 0.0).epsilon(1e-12).scale(1.0));
  }
  // Synthesis agrees with pointwise evaluation.
  std::vector<double> c(b.size());
  for (std::size_t k = 0; k < c.size(); ++k) c[k] = std::cos(1.7 * k);
  const Field f = b.synthesize(c);
  double x[2];
  g.point(100, x);
  double direct = 0.0;
  for (std::size_t k = 0; k < c.size(); ++k) direct += c[k] * b.evaluate(k, x);
  CHECK(f[100] == doctest::Approx(direct).epsilon(1e-12));
}

TEST_CASE("field files round-trip bit for bit") {
  const Grid g = Grid::cube(2, 9);
  Field f = Field::from_function(g, [](std::span<const double> x) { return std::exp(x[0]) / 3.0 - x[1]; });
  f.set_provenance("unit test");
  const auto dir = std::filesystem::temp_directory_path() / "dgplab_field_io";
  write_field(dir / "f", f);
  const Field h = read_field(dir / "f");
  CHECK(h.grid() == g);
  CHECK(h.provenance() == "unit test");
  for (std::size_t i = 0; i < f.size(); ++i) CHECK(h[i] == f[i]);
  CHECK_THROWS_AS(read_field(dir / "missing"), ConfigError);
  CHECK(std::stod(format_double(0.1 + 0.2)) == 0.1 + 0.2);
  std::filesystem::remove_all(dir);
}

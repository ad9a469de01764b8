#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <functional>
#include <set>

#include "dgplab/elementary.hpp"
#include "dgplab/errors.hpp"
#include "dgplab/structure.hpp"

using namespace dgplab;

namespace {

long binom(int n, int k) {
  long r = 1;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

// Graph count for depth <= 1: sum over t of C(d,t), plus for q = 1 the inner
// dimension d1, a common t0 with a t0-subset per component, and t1 of d1.
long count_depth_le1(int d) {
  long q0 = 0;
  for (int t = 1; t <= d; ++t) q0 += binom(d, t);
  long q1 = 0;
  for (int d1 = 1; d1 <= d; ++d1) {
    long first = 0;
    for (int t0 = 1; t0 <= d; ++t0) first += static_cast<long>(std::pow(binom(d, t0), d1));
    q1 += first * ((1L << d1) - 1);
  }
  return q0 + q1;
}

double simpson(const std::function<double(double)>& f, double a, double b, int n = 2000) {
  const double h = (b - a) / n;
  double s = f(a) + f(b);
  for (int i = 1; i < n; ++i) s += f(a + i * h) * (i % 2 ? 4.0 : 2.0);
  return s * h / 3.0;
}

}  // namespace

TEST_CASE("graph enumeration matches the closed-form count") {
  for (int d = 1; d <= 3; ++d) {
    const auto gs = enumerate_graphs(d, 1);
    CHECK(static_cast<long>(gs.size()) == count_depth_le1(d));
    std::set<std::string> keys;
    for (const auto& g : gs) {
      CHECK_NOTHROW(g.validate(d));
      keys.insert(g.key());
    }
    CHECK(keys.size() == gs.size());
  }
  CHECK(enumerate_graphs(1, 3).size() == 4);
  CHECK_THROWS_AS(enumerate_graphs(0, 1), ConfigError);
}

TEST_CASE("default gamma is proportional to exp(-q - |d|_1)") {
  const auto cfg = default_hyperprior(2, 1, 4.0, 1);
  double total = 0.0;
  for (const auto& g : cfg.gamma) total += g.probability;
  CHECK(total == doctest::Approx(1.0).epsilon(1e-14));
  const auto& a = cfg.gamma.front();
  const auto& b = cfg.gamma.back();
  CHECK(a.probability / b.probability ==
        doctest::Approx(std::exp(-(a.graph.q + a.graph.l1()) + (b.graph.q + b.graph.l1()))).epsilon(1e-12));
}

TEST_CASE("penalty and support") {
  const auto cfg = default_hyperprior(1, 1, 4.0, 1);
  Structure s{cfg.gamma[0].graph, {3.0}};
  CHECK(structure_rate(s, 1000) == doctest::Approx(std::pow(1000.0, -3.0 / 7.0)));
  CHECK(psi_penalty(s, 1000) == doctest::Approx(1000.0 * std::pow(1000.0, -6.0 / 7.0) + std::exp(std::exp(1.0))));
  CHECK(in_support(s, cfg));
  Structure out{cfg.gamma[0].graph, {1.2}};
  CHECK_FALSE(in_support(out, cfg));
  CHECK_THROWS_AS(log_hyperprior(out, 100, cfg), SupportError);
  CHECK_THROWS_AS(log_hyperprior(out, 100, cfg), ConfigError);
  const double lp = log_hyperprior(s, 100, cfg);
  CHECK(lp == doctest::Approx(std::log(cfg.gamma[0].probability) - std::log(2.5) - psi_penalty(s, 100)));
}

TEST_CASE("expected rate penalty matches direct quadrature") {
  const auto cfg = default_hyperprior(2, 1, 4.0, 1);
  const long n = 100;
  auto pen = [&](double a, int t) { return static_cast<double>(n) * std::pow(epsilon_rate({n, a, t}), 2); };
  // One layer, t = 2.
  {
    const Interval I = cfg.interval(2);
    const double e = simpson([&](double a) { return std::exp(-pen(a, 2)); }, I.lo, I.hi) / I.width();
    CHECK(log_expected_rate_penalty({2}, cfg, n) == doctest::Approx(std::log(e)).epsilon(1e-7));
  }
  // Two layers: E exp(-n max(eps_1^2, eps_2^2)).
  {
    const Interval I1 = cfg.interval(1), I2 = cfg.interval(2);
    const double e = simpson(
                         [&](double a1) {
                           return simpson([&](double a2) { return std::exp(-std::max(pen(a1, 1), pen(a2, 2))); },
                                          I2.lo, I2.hi, 800);
                         },
                         I1.lo, I1.hi, 800) /
                     (I1.width() * I2.width());
    CHECK(log_expected_rate_penalty({1, 2}, cfg, n) == doctest::Approx(std::log(e)).epsilon(1e-5));
  }
  CHECK(log_expected_rate_penalty({1}, cfg, 1) == doctest::Approx(-1.0));
}

TEST_CASE("graph marginal is normalized and favours simple graphs") {
  const auto cfg = default_hyperprior(2, 1, 4.0, 1);
  const GraphMarginal m = graph_marginal(cfg, 1000);
  double total = 0.0;
  for (double p : m.probability) total += p;
  CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
  double deep = 0.0;
  for (std::size_t i = 0; i < m.graphs.size(); ++i)
    if (m.graphs[i].q > 0) deep += m.probability[i];
  CHECK(deep < 1e-100);
}

TEST_CASE("sampled structures lie in the support") {
  const auto cfg = default_hyperprior(2, 1, 4.0, 1);
  const StructureSampler sampler(cfg, 500);
  RngStream rng(StreamKey{1, stream_module::test, 0, 0});
  for (int k = 0; k < 200; ++k) CHECK(in_support(sampler.sample(rng), cfg));
  for (int k = 0; k < 200; ++k) CHECK(in_support(sample_base_structure(cfg, rng), cfg));
}

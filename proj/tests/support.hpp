#pragma once

// Shared oracles for the unit and acceptance tests.

#include <algorithm>
#include <cmath>
#include <functional>
#include <vector>

#include "dgplab/field.hpp"
#include "dgplab/pde.hpp"
#include "dgplab/rng.hpp"
#include "dgplab/series.hpp"

namespace dgplab::testing {

/// Max nodal error of the Darcy solve for u = 1 - x^2 on [-1, 1] with f = e^x,
/// source g = (f u')' = -2 e^x (1 + x).
inline double darcy_manufactured_error(int m) {
  const Grid g({-1.0}, {1.0}, m);
  DarcyConfig cfg;
  cfg.grid = g;
  cfg.k_min = 0.1;
  cfg.source = Field::from_function(g, [](std::span<const double> x) { return -2.0 * std::exp(x[0]) * (1.0 + x[0]); });
  const Field f = Field::from_function(g, [](std::span<const double> x) { return std::exp(x[0]); });
  const Field u = solve_darcy(f, cfg).u;
  double err = 0.0;
  std::vector<double> x(1);
  for (std::size_t i = 0; i < g.size(); ++i) {
    g.point(i, x);
    err = std::max(err, std::abs(u[i] - (1.0 - x[0] * x[0])));
  }
  return err;
}

/// Max nodal error of the Schrödinger solve for u = cosh x on [-1, 1]: with
/// potential f = 1/2, (1/2) u'' - f u = 0 and u = cosh(1) on the boundary.
inline double schrodinger_manufactured_error(int m) {
  const Grid g({-1.0}, {1.0}, m);
  SchrodingerConfig cfg;
  cfg.grid = g;
  cfg.boundary = Field::from_function(g, [](std::span<const double> x) { return std::cosh(x[0]); });
  cfg.h_min = 1.0;
  const Field u = solve_schrodinger(Field(g, 0.5), cfg).u;
  double err = 0.0;
  std::vector<double> x(1);
  for (std::size_t i = 0; i < g.size(); ++i) {
    g.point(i, x);
    err = std::max(err, std::abs(u[i] - std::cosh(x[0])));
  }
  return err;
}

/// Least-squares slope of log err against log h.
inline double refinement_slope(const std::vector<int>& ms, const std::vector<double>& errs) {
  double mx = 0, my = 0;
  const std::size_t k = ms.size();
  std::vector<double> x(k), y(k);
  for (std::size_t i = 0; i < k; ++i) {
    x[i] = std::log(2.0 / (ms[i] - 1));
    y[i] = std::log(errs[i]);
    mx += x[i] / k;
    my += y[i] / k;
  }
  double sxy = 0, sxx = 0;
  for (std::size_t i = 0; i < k; ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
  }
  return sxy / sxx;
}

/// Random smooth field sum_k a_k lambda_k^{-2} e_k with standard normal a_k.
inline Field random_smooth_field(const Grid& g, RngStream& rng, double amplitude, int J = 8) {
  const SeriesBasis b(BasisKind::tensor_cosine, g, J);
  std::vector<double> c(b.size());
  for (std::size_t k = 0; k < c.size(); ++k) c[k] = amplitude * rng.normal() / (b.eigenvalue(k) * b.eigenvalue(k));
  return b.synthesize(c);
}

/// Two-sided Kolmogorov-Smirnov statistic of a sample against a CDF.
inline double ks_statistic(std::vector<double> v, const std::function<double(double)>& cdf) {
  std::sort(v.begin(), v.end());
  const double n = static_cast<double>(v.size());
  double d = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const double F = cdf(v[i]);
    d = std::max({d, (i + 1) / n - F, F - i / n});
  }
  return d;
}

/// Asymptotic 1% critical value of the KS statistic (Stephens' small-sample correction).
inline double ks_critical_1pct(std::size_t n) {
  const double s = std::sqrt(static_cast<double>(n));
  return 1.628 / (s + 0.12 + 0.11 / s);
}

struct MeanSe {
  double mean = 0.0;
  double se = 0.0;
};

/// Mean and standard error of independent draws.
inline MeanSe mean_se(const std::vector<double>& v) {
  MeanSe r;
  const double n = static_cast<double>(v.size());
  for (double x : v) r.mean += x / n;
  double ss = 0.0;
  for (double x : v) ss += (x - r.mean) * (x - r.mean);
  r.se = std::sqrt(ss / (n - 1.0) / n);
  return r;
}

/// Mean and batch-means standard error of a correlated chain trace.
inline MeanSe batch_means(const std::vector<double>& v, int batches = 25) {
  const std::size_t len = v.size() / batches;
  std::vector<double> means;
  for (int b = 0; b < batches; ++b) {
    double s = 0.0;
    for (std::size_t i = 0; i < len; ++i) s += v[b * len + i];
    means.push_back(s / len);
  }
  MeanSe r = mean_se(means);
  return r;
}

}  // namespace dgplab::testing

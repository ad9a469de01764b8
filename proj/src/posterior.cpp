#include "dgplab/posterior.hpp"

#include <algorithm>
#include <cmath>

#include "dgplab/elementary.hpp"
#include "dgplab/errors.hpp"

namespace dgplab {

Dataset generate_data(const Field& truth, long n, const Problem& problem, RngStream& rng, const DataOptions& opts) {
  if (n < 0) throw ConfigError("generate_data: n must be >= 0");
  const Field u = forward(truth, problem);
  const Grid& g = u.grid();
  Dataset data;
  data.n = n;
  data.dim = g.dim();
  data.truth_ref = truth.provenance();
  data.noise_seed = rng.key().seed;
  data.xs.resize(static_cast<std::size_t>(n) * g.dim());
  data.ys.resize(n);
  for (long i = 0; i < n; ++i) {
    for (int a = 0; a < g.dim(); ++a) data.xs[i * g.dim() + a] = rng.uniform(g.lo(a), g.hi(a));
    const double noise = rng.normal();
    data.ys[i] = eval_field(u, data.x(i)) + (opts.zero_noise ? 0.0 : noise);
  }
  return data;
}

std::vector<InterpStencil> design_stencils(const Dataset& data, const Grid& grid) {
  if (grid.dim() != data.dim) throw ConfigError("design_stencils: grid dimension differs from the design");
  std::vector<InterpStencil> st;
  st.reserve(data.n);
  for (long i = 0; i < data.n; ++i) st.push_back(interp_stencil(grid, data.x(i)));
  return st;
}

double log_likelihood(const Field& u, const Dataset& data, const std::vector<InterpStencil>& stencils) {
  if (static_cast<long>(stencils.size()) != data.n) throw ConfigError("log_likelihood: stencil count differs from n");
  double s = 0.0;
  for (long i = 0; i < data.n; ++i) {
    const double r = data.ys[i] - stencils[i].apply(u.values());
    s += r * r;
  }
  return -0.5 * s;
}

double log_likelihood(const Field& u, const Dataset& data) {
  return log_likelihood(u, data, design_stencils(data, u.grid()));
}

DistanceReport distances_from_forward(const Field& u1, const Field& u2) {
  if (!(u1.grid() == u2.grid())) throw ConfigError("distances: grid mismatch");
  const auto w = trapezoid_weights(u1.grid());
  const double vol = u1.grid().volume();
  DistanceReport r;
  for (std::size_t i = 0; i < w.size(); ++i) {
    const double d = u1[i] - u2[i];
    r.prediction_risk_sq += w[i] * d * d;
    r.hellinger_sq += 2.0 * w[i] * -std::expm1(-d * d / 8.0);
  }
  r.prediction_risk_sq /= vol;
  r.hellinger_sq /= vol;
  r.kl = 0.5 * r.prediction_risk_sq;
  r.hellinger_bound_ok = r.hellinger_sq <= 0.25 * r.prediction_risk_sq * (1.0 + 1e-12) + 1e-300;
  return r;
}

DistanceReport kl_and_hellinger(const Field& theta1, const Field& theta2, const Problem& problem) {
  return distances_from_forward(forward(theta1, problem), forward(theta2, problem));
}

MonteCarloEstimate monte_carlo_kl(const Field& u1, const Field& u2, long draws, RngStream& rng) {
  if (draws < 2) throw ConfigError("monte_carlo_kl: need at least two draws");
  const Grid& g = u1.grid();
  std::vector<double> x(g.dim());
  double sum = 0.0, sum_sq = 0.0;
  for (long k = 0; k < draws; ++k) {
    for (int a = 0; a < g.dim(); ++a) x[a] = rng.uniform(g.lo(a), g.hi(a));
    const double m1 = eval_field(u1, x), m2 = eval_field(u2, x);
    const double y = m1 + rng.normal();
    const double lr = -0.5 * (y - m1) * (y - m1) + 0.5 * (y - m2) * (y - m2);
    sum += lr;
    sum_sq += lr * lr;
  }
  const double n = static_cast<double>(draws);
  const double mean = sum / n;
  const double var = (sum_sq - n * mean * mean) / (n - 1.0);
  return {mean, std::sqrt(std::max(var, 0.0) / n), draws};
}

void BaselineConfig::validate(int beta, int d) const {
  if (!(tau > beta + 0.5 * d)) throw ConfigError("baseline: tau must exceed beta + d/2");
  if (custom_exponent && !(*custom_exponent >= 0.0)) throw ConfigError("baseline: custom exponent must be >= 0");
  if (truncation < 0) throw ConfigError("baseline: truncation must be >= 0");
}

double BaselineConfig::exponent(int d) const {
  if (custom_exponent) return *custom_exponent;
  return d / (4.0 * tau + 4.0 + 2.0 * d);
}

double BaselineConfig::scale(long n, int d) const {
  if (n < 1) throw ConfigError("baseline: n must be >= 1");
  return std::pow(static_cast<double>(n), -exponent(d));
}

BaselineSpace make_baseline_space(const BaselineConfig& cfg, const Grid& ambient) {
  BaselineSpace s;
  const int J = cfg.truncation > 0 ? cfg.truncation
                                   : std::min(default_truncation(ambient.dim()), ambient.points_per_axis() - 2);
  s.basis = std::make_shared<const SeriesBasis>(BasisKind::tensor_cosine, ambient, J);
  s.cutoff = std::make_shared<const Field>(make_cutoff(ambient));
  for (double w : s.basis->weights(cfg.tau)) s.stddev.push_back(std::sqrt(w));
  return s;
}

std::vector<double> baseline_coefficients(const BaselineSpace& space, RngStream& rng) {
  std::vector<double> c(space.stddev.size());
  for (std::size_t k = 0; k < c.size(); ++k) c[k] = space.stddev[k] * rng.normal();
  return c;
}

Field baseline_field(const BaselineConfig& cfg, const BaselineSpace& space, long n, std::span<const double> coeffs) {
  Field f = space.basis->synthesize(coeffs);
  const double s = cfg.scale(n, f.grid().dim());
  for (std::size_t i = 0; i < f.size(); ++i) f[i] *= s * (*space.cutoff)[i];
  return f;
}

Field baseline_prior_sample(const BaselineConfig& cfg, long n, const Grid& ambient, RngStream& rng) {
  const auto space = make_baseline_space(cfg, ambient);
  return baseline_field(cfg, space, n, baseline_coefficients(space, rng));
}

}  // namespace dgplab

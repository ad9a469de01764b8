#include "dgplab/elementary.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "dgplab/errors.hpp"

namespace dgplab {

void RateParams::validate() const {
  if (n < 1) throw ConfigError("rate: n must be >= 1");
  if (!(alpha > 0.0)) throw ConfigError("rate: alpha must be > 0");
  if (t < 1) throw ConfigError("rate: t must be >= 1");
}

double epsilon_rate(const RateParams& rate) {
  rate.validate();
  return std::pow(static_cast<double>(rate.n), -rate.alpha / (2.0 * rate.alpha + rate.t));
}

double rescale_factor(const RateParams& rate) {
  return 1.0 / (std::sqrt(static_cast<double>(rate.n)) * epsilon_rate(rate));
}

bool uses_cutoff(LayerKind k) { return k == LayerKind::first || k == LayerKind::single; }
bool conditions_sup(LayerKind k) { return k == LayerKind::first || k == LayerKind::inner; }

const char* to_string(LayerKind k) {
  switch (k) {
    case LayerKind::first: return "first";
    case LayerKind::inner: return "inner";
    case LayerKind::final: return "final";
    case LayerKind::single: return "single";
  }
  return "?";
}

Field make_cutoff(const Grid& grid) {
  std::vector<double> edge(grid.dim());
  for (int a = 0; a < grid.dim(); ++a) {
    const double margin = std::min(-1.0 - grid.lo(a), grid.hi(a) - 1.0);
    edge[a] = margin > 0.0 ? 1.0 + 0.8 * margin : 1.0;
  }
  return Field::from_function(grid, [&](std::span<const double> x) {
    double v = 1.0;
    for (int a = 0; a < grid.dim(); ++a) {
      const double r = std::abs(x[a]);
      if (r <= 1.0) continue;
      if (r >= edge[a]) return 0.0;
      const double s = (r - 1.0) / (edge[a] - 1.0);
      const double s4 = s * s * s * s;
      const double step = s4 * (35.0 - 84.0 * s + 70.0 * s * s - 20.0 * s * s * s);
      v *= 1.0 - step;
    }
    return v;
  });
}

void ElementaryConfig::validate() const {
  rate.validate();
  if (beta < 1) throw ConfigError("elementary: beta must be >= 1");
  if (!(m0 >= 1.0)) throw ConfigError("elementary: M0 must be >= 1");
  if (!basis) throw ConfigError("elementary: missing basis");
  if (basis->dim() != rate.t) throw ConfigError("elementary: basis dimension differs from t");
  if (max_rejections < 1) throw ConfigError("elementary: max_rejections must be >= 1");
}

std::optional<Region> ElementaryConfig::holder_region() const {
  if (uses_cutoff(kind)) return Region::unit_cube(rate.t);
  return std::nullopt;
}

int default_truncation(int t) { return t <= 2 ? 32 : 16; }

int default_layer_points(int t) { return t == 1 ? 129 : (t == 2 ? 65 : 33); }

LayerSpace make_layer_space(int t, bool with_cutoff, const Grid& ambient) {
  if (t < 1) throw ConfigError("layer space: t must be >= 1");
  LayerSpace s;
  if (with_cutoff) {
    Grid g(std::vector<double>(t, ambient.lo(0)), std::vector<double>(t, ambient.hi(0)), ambient.points_per_axis());
    s.cutoff = std::make_shared<const Field>(make_cutoff(g));
    // Coarse ambient grids cap the truncation so the basis stays orthonormal.
    const int J = std::min(default_truncation(t), ambient.points_per_axis() - 2);
    s.basis = std::make_shared<const SeriesBasis>(BasisKind::tensor_cosine, std::move(g), J);
  } else {
    s.basis = std::make_shared<const SeriesBasis>(BasisKind::tensor_cosine, Grid::cube(t, default_layer_points(t), 0.0),
                                                  default_truncation(t));
  }
  return s;
}

std::vector<double> sample_coefficients(const ElementaryConfig& cfg, RngStream& rng) {
  const auto& eig = cfg.basis->eigenvalues();
  std::vector<double> c(eig.size());
  for (std::size_t k = 0; k < c.size(); ++k) c[k] = std::pow(eig[k], -0.5 * cfg.rate.alpha) * rng.normal();
  return c;
}

RawDraw sample_raw(const ElementaryConfig& cfg, RngStream& rng) {
  cfg.validate();
  RawDraw d;
  d.coefficients = sample_coefficients(cfg, rng);
  d.field = cfg.basis->synthesize(d.coefficients);
  return d;
}

Field layer_field(const ElementaryConfig& cfg, std::span<const double> coefficients) {
  Field f = cfg.basis->synthesize(coefficients);
  const double scale = rescale_factor(cfg.rate);
  if (uses_cutoff(cfg.kind)) {
    const Field chi = cfg.cutoff ? *cfg.cutoff : make_cutoff(cfg.grid());
    for (std::size_t i = 0; i < f.size(); ++i) f[i] *= scale * chi[i];
  } else {
    for (std::size_t i = 0; i < f.size(); ++i) f[i] *= scale;
  }
  return f;
}

Field sample_rescaled(const ElementaryConfig& cfg, RngStream& rng) {
  cfg.validate();
  return layer_field(cfg, sample_coefficients(cfg, rng));
}

bool satisfies_constraints(const ElementaryConfig& cfg, const Field& field) {
  if (conditions_sup(cfg.kind) && sup_norm(field) > 1.0) return false;
  return c_beta_norm(field, cfg.beta, cfg.holder_region()) <= cfg.m0;
}

ConditionedDraw sample_conditioned(const ElementaryConfig& cfg, RngStream& rng) {
  cfg.validate();
  for (long attempt = 1; attempt <= cfg.max_rejections; ++attempt) {
    auto c = sample_coefficients(cfg, rng);
    Field f = layer_field(cfg, c);
    if (satisfies_constraints(cfg, f)) return {std::move(c), std::move(f), attempt};
  }
  std::ostringstream msg;
  msg << "elementary " << to_string(cfg.kind) << " layer: no draw inside the conditioning set after "
      << cfg.max_rejections << " attempts (n=" << cfg.rate.n << ", alpha=" << cfg.rate.alpha
      << ", t=" << cfg.rate.t << ", beta=" << cfg.beta << ", M0=" << cfg.m0
      << "); acceptance below " << 1.0 / static_cast<double>(cfg.max_rejections);
  throw RejectionBudgetError(msg.str(), cfg.max_rejections, 0.0);
}

AcceptanceEstimate estimate_acceptance(const ElementaryConfig& cfg, long draws, RngStream& rng) {
  cfg.validate();
  long accepted = 0;
  for (long k = 0; k < draws; ++k)
    if (satisfies_constraints(cfg, sample_rescaled(cfg, rng))) ++accepted;
  const double p = static_cast<double>(accepted) / static_cast<double>(draws);
  return {p, std::sqrt(p * (1.0 - p) / static_cast<double>(draws)), draws};
}

}  // namespace dgplab

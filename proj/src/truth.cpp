#include "dgplab/truth.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <memory>
#include <sstream>

#include "dgplab/elementary.hpp"
#include "dgplab/errors.hpp"
#include "dgplab/series.hpp"
#include "dgplab/wavelet.hpp"

namespace dgplab {

TruthKind parse_truth_kind(const std::string& s) {
  if (s == "smooth-bump") return TruthKind::smooth_bump;
  if (s == "gam-sum") return TruthKind::gam_sum;
  if (s == "wavelet-spike-gam") return TruthKind::wavelet_spike_gam;
  if (s == "custom-composition") return TruthKind::custom_composition;
  throw ConfigError("unknown truth kind '" + s + "'");
}

std::string to_string(TruthKind k) {
  switch (k) {
    case TruthKind::smooth_bump: return "smooth-bump";
    case TruthKind::gam_sum: return "gam-sum";
    case TruthKind::wavelet_spike_gam: return "wavelet-spike-gam";
    case TruthKind::custom_composition: return "custom-composition";
  }
  return "?";
}

double bump(double s) {
  if (std::abs(s) >= 1.0) return 0.0;
  return std::exp(1.0 - 1.0 / (1.0 - s * s));
}

double sobolev_proxy(const Field& f, double alpha, int truncation) {
  const int J = std::min(truncation, f.grid().points_per_axis() - 2);
  const SeriesBasis basis(BasisKind::tensor_cosine, f.grid(), J);
  return sobolev_norm_series(basis.analyze(f), basis, alpha);
}

int spike_level_for(long n, double alpha, int d, int support_length) {
  if (n < 2) throw ConfigError("spike level: n must be >= 2");
  const int j_fit = static_cast<int>(std::ceil(std::log2(static_cast<double>(support_length) / (2.0 * d))));
  const int j_rate = static_cast<int>(std::lround(std::log2(static_cast<double>(n)) / (2.0 * alpha + 2.0 + d)));
  return std::max({j_fit, j_rate, 0});
}

namespace {

constexpr int kProfilePoints = 2049;

// The 1-D profile F* on [-d, d].
Field profile(const Grid& g, const std::function<double(double)>& F) {
  return Field::from_function(g, [&](std::span<const double> s) { return F(s[0]); });
}

// theta(x) = F*(x_1 + ... + x_d) * cutoff(x); the graph annotation is
// layer 0: cutoff(x) (x_1 + ... + x_d)/(r d), layer 1: y -> F*(r d y), with r
// the grid half-width so layer 0 stays in [-1,1]. The composition equals theta
// on the unit cube, where the cutoff is one.
Truth gam_truth(const std::function<double(double)>& F, const Grid& grid, int d) {
  Truth t;
  const Field chi = make_cutoff(grid);
  Field theta = Field::from_function(grid, [&](std::span<const double> x) {
    double s = 0.0;
    for (double v : x) s += v;
    return F(s);
  });
  for (std::size_t i = 0; i < theta.size(); ++i) theta[i] *= chi[i];
  t.theta = std::move(theta);

  GraphSpec g;
  g.q = 1;
  g.dims = {d, 1};
  g.t = {d, 1};
  std::vector<int> all(d);
  for (int a = 0; a < d; ++a) all[a] = a;
  g.active = {{all}, {{0}}};
  t.graph = g;

  const double r = std::max(std::abs(grid.lo(0)), std::abs(grid.hi(0)));
  Field inner = Field::from_function(grid, [&](std::span<const double> x) {
    double s = 0.0;
    for (double v : x) s += v;
    return s / (r * d);
  });
  for (std::size_t i = 0; i < inner.size(); ++i) inner[i] *= chi[i];
  const Grid outer_grid = Grid::cube(1, kProfilePoints, 0.0);
  Field outer = Field::from_function(outer_grid, [&](std::span<const double> y) { return F(r * d * y[0]); });
  t.layers = {{std::move(inner)}, {std::move(outer)}};
  return t;
}

}  // namespace

Truth build_truth(const TruthSpec& spec, const Grid& grid) {
  if (!(spec.alpha > 0.0)) throw ConfigError("truth: alpha must be > 0");
  if (!(spec.radius > 0.0)) throw ConfigError("truth: ball radius K must be > 0");
  if (spec.d != grid.dim()) throw ConfigError("truth: spec dimension differs from the grid");
  const int d = spec.d;
  if (spec.beta && (spec.kind == TruthKind::gam_sum || spec.kind == TruthKind::wavelet_spike_gam) &&
      !(spec.alpha > *spec.beta + 0.5 * d)) {
    std::ostringstream msg;
    msg << "truth: " << to_string(spec.kind) << " requires alpha > beta + d/2 (alpha=" << spec.alpha
        << ", beta=" << *spec.beta << ", d=" << d << ")";
    throw ConfigError(msg.str());
  }

  Truth t;
  std::ostringstream desc;
  switch (spec.kind) {
    case TruthKind::smooth_bump: {
      Field unit = Field::from_function(grid, [&](std::span<const double> x) {
        double v = 1.0;
        for (double c : x) v *= bump(c);
        return v;
      });
      const double proxy = sobolev_proxy(unit, spec.alpha);
      const double amp = spec.amplitude ? *spec.amplitude : spec.radius / proxy;
      t.theta = amp * unit;
      t.norm_proxy = std::abs(amp) * proxy;
      desc << "smooth bump, amplitude " << amp;
      break;
    }
    case TruthKind::gam_sum: {
      const Grid pg({-static_cast<double>(d)}, {static_cast<double>(d)}, kProfilePoints);
      const Field unit = profile(pg, [&](double s) { return bump(s / d); });
      const double proxy = sobolev_proxy(unit, spec.alpha);
      const double amp = spec.amplitude ? *spec.amplitude : spec.radius / proxy;
      t = gam_truth([&](double s) { return amp * bump(s / d); }, grid, d);
      t.norm_proxy = std::abs(amp) * proxy;
      desc << "GAM sum, F* = " << amp << " * bump(s/" << d << ")";
      break;
    }
    case TruthKind::wavelet_spike_gam: {
      const int N = std::clamp(2 * static_cast<int>(std::ceil(spec.alpha)), 2, 10);
      const auto w = std::make_shared<const DaubechiesWavelet>(N);
      const int L = w->filter_length();
      int j = 0;
      if (spec.spike_level) {
        j = *spec.spike_level;
        if (std::ldexp(static_cast<double>(L - 1), -j) > 2.0 * d)
          throw ConfigError("truth: wavelet spike at this level does not fit in [-d, d]");
      } else if (spec.n_for_level) {
        j = spike_level_for(*spec.n_for_level, spec.alpha, d, L - 1);
      } else {
        throw ConfigError("truth: wavelet spike needs a level or an n to derive it from");
      }
      const int k0 = -(L - 1) / 2;
      const double A = spec.amplitude ? *spec.amplitude : spec.radius * std::pow(2.0, -j * (2.0 * spec.alpha + 1.0) / 2.0);
      t = gam_truth([w, j, k0, A](double s) { return A * w->psi_jk(j, k0, s); }, grid, d);
      // Wavelet characterisation of the H^alpha norm for a single coefficient.
      t.norm_proxy = std::pow(2.0, j * spec.alpha) * std::abs(A);
      t.spike_level = j;
      t.spike_shift = k0;
      t.spike_amplitude = A;
      t.vanishing_moments = N;
      desc << "GAM wavelet spike, Daubechies N=" << N << ", level " << j << ", shift " << k0 << ", amplitude " << A;
      break;
    }
    case TruthKind::custom_composition: {
      if (!spec.graph) throw ConfigError("truth: custom composition needs a graph");
      t.theta = compose(spec.layers, *spec.graph, grid);
      t.graph = spec.graph;
      t.layers = spec.layers;
      t.norm_proxy = sobolev_proxy(t.theta, spec.alpha);
      desc << "custom composition " << spec.graph->key();
      break;
    }
  }
  t.description = desc.str();
  t.theta.set_provenance("truth:" + to_string(spec.kind) + ":" + t.description);
  return t;
}

}  // namespace dgplab

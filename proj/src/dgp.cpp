#include "dgplab/dgp.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "dgplab/errors.hpp"

namespace dgplab {

LayerFields DeepDraw::fields() const {
  LayerFields out;
  for (const auto& layer : layers) {
    out.emplace_back();
    for (const auto& c : layer) out.back().push_back(c.field);
  }
  return out;
}

Field compose(const LayerFields& layers, const GraphSpec& graph, const Grid& ambient, double tol) {
  graph.validate(ambient.dim());
  if (static_cast<int>(layers.size()) != graph.q + 1) throw ConfigError("compose: layer count differs from q+1");
  for (int i = 0; i <= graph.q; ++i) {
    if (static_cast<int>(layers[i].size()) != graph.outputs(i))
      throw ConfigError("compose: component count of layer " + std::to_string(i) + " differs from the graph");
    for (const auto& f : layers[i])
      if (f.grid().dim() != graph.t[i])
        throw ConfigError("compose: field dimension of layer " + std::to_string(i) + " differs from t_i");
  }

  Field out(ambient);
  std::vector<double> x(ambient.dim()), y, sel;
  for (std::size_t node = 0; node < ambient.size(); ++node) {
    ambient.point(node, x);
    y = x;
    for (int i = 0; i <= graph.q; ++i) {
      std::vector<double> next(graph.outputs(i));
      sel.resize(graph.t[i]);
      for (int j = 0; j < graph.outputs(i); ++j) {
        const auto& s = graph.active[i][j];
        for (int k = 0; k < graph.t[i]; ++k) sel[k] = y[s[k]];
        double v = eval_field(layers[i][j], sel);
        if (i < graph.q) {
          if (std::abs(v) > 1.0 + tol) {
            std::ostringstream msg;
            msg << "compose: layer " << i << " component " << j << " value " << v << " leaves [-1,1]";
            throw CompositionError(msg.str());
          }
          v = std::clamp(v, -1.0, 1.0);
        }
        next[j] = v;
      }
      y = std::move(next);
    }
    out[node] = y[0];
  }
  return out;
}

LayerKind layer_kind(int q, int i) {
  if (q == 0) return LayerKind::single;
  if (i == 0) return LayerKind::first;
  if (i == q) return LayerKind::final;
  return LayerKind::inner;
}

DgpPrior::DgpPrior(DgpConfig cfg, long n) : cfg_(std::move(cfg)), sampler_(cfg_.hyper, n) {
  if (cfg_.ambient.dim() != cfg_.hyper.ambient_d) throw ConfigError("dgp: ambient grid dimension differs from hyperprior");
  if (!cfg_.ambient.strictly_contains_unit_cube()) throw ConfigError("dgp: ambient grid must contain [-1,1]^d with a margin");
  for (int t = 1; t <= cfg_.hyper.ambient_d; ++t) {
    spaces_.emplace(std::make_pair(t, true), make_layer_space(t, true, cfg_.ambient));
    spaces_.emplace(std::make_pair(t, false), make_layer_space(t, false, cfg_.ambient));
  }
}

const LayerSpace& DgpPrior::space(int t, bool cutoff) const { return spaces_.at({t, cutoff}); }

ElementaryConfig DgpPrior::layer_config(const Structure& s, int layer) const {
  ElementaryConfig c;
  c.rate = {n(), s.alphas.at(layer), s.graph.t.at(layer)};
  c.beta = cfg_.hyper.beta;
  c.m0 = cfg_.m0;
  c.kind = layer_kind(s.graph.q, layer);
  const auto& sp = space(c.rate.t, uses_cutoff(c.kind));
  c.basis = sp.basis;
  c.cutoff = sp.cutoff;
  c.max_rejections = cfg_.max_rejections;
  return c;
}

DeepDraw DgpPrior::sample_given(const Structure& s, RngStream& rng) const {
  DeepDraw d;
  d.structure = s;
  const RngStream base = rng.split();
  std::uint64_t slot = 0;
  try {
    for (int i = 0; i <= s.graph.q; ++i) {
      const ElementaryConfig c = layer_config(s, i);
      d.layers.emplace_back();
      for (int j = 0; j < s.graph.outputs(i); ++j) {
        RngStream stream = base.child(slot++);
        auto cd = sample_conditioned(c, stream);
        d.layers.back().push_back({std::move(cd.coefficients), std::move(cd.field), cd.attempts});
      }
    }
  } catch (const RejectionBudgetError& e) {
    std::ostringstream msg;
    msg << e.what() << " [structure " << s.graph.key() << ", alphas";
    for (double a : s.alphas) msg << ' ' << a;
    msg << ']';
    throw RejectionBudgetError(msg.str(), e.attempts(), e.acceptance_estimate());
  }
  d.composed = compose(d.fields(), s.graph, cfg_.ambient);
  return d;
}

DeepDraw DgpPrior::sample(RngStream& rng) const {
  const Structure s = sampler_.sample(rng);
  return sample_given(s, rng);
}

DeepDraw sample_dgp(const DgpConfig& cfg, long n, RngStream& rng) { return DgpPrior(cfg, n).sample(rng); }

}  // namespace dgplab

#pragma once

#include <map>
#include <vector>

#include "dgplab/elementary.hpp"
#include "dgplab/field.hpp"
#include "dgplab/rng.hpp"
#include "dgplab/structure.hpp"

namespace dgplab {

/// Layered fields indexed [layer i][component j].
using LayerFields = std::vector<std::vector<Field>>;

struct LayerDraw {
  std::vector<double> coefficients;
  Field field;
  long attempts = 0;
};

struct DeepDraw {
  Structure structure;
  std::vector<std::vector<LayerDraw>> layers;
  Field composed;

  LayerFields fields() const;
};

/// Clamp tolerance for intermediate layer values.
inline constexpr double kCompositionTolerance = 1e-9;

/// theta(x) = theta_q o ... o theta_0 at every node x of `ambient`. Component j
/// of layer i reads coordinates active[i][j] of the previous layer's output.
/// Intermediate outputs are clamped to [-1,1]; a value beyond 1 + tol throws
/// CompositionError.
Field compose(const LayerFields& layers, const GraphSpec& graph, const Grid& ambient,
              double tol = kCompositionTolerance);

/// Layer kind of layer i of a depth-q graph.
LayerKind layer_kind(int q, int i);

struct DgpConfig {
  HyperpriorConfig hyper;
  Grid ambient;
  double m0 = 2.0;
  long max_rejections = 10000;
};

/// DGP prior at a fixed sample size n. Layer bases are built once and shared.
class DgpPrior {
 public:
  DgpPrior(DgpConfig cfg, long n);

  const DgpConfig& config() const { return cfg_; }
  long n() const { return sampler_.n(); }
  const StructureSampler& structures() const { return sampler_; }
  const Grid& ambient() const { return cfg_.ambient; }

  ElementaryConfig layer_config(const Structure& s, int layer) const;

  /// Structure from pi, then independent conditioned layers, then composition.
  DeepDraw sample(RngStream& rng) const;
  /// Conditioned layers for a given structure. Layer (i,j) uses its own child
  /// stream so draws do not depend on evaluation order.
  DeepDraw sample_given(const Structure& s, RngStream& rng) const;

 private:
  const LayerSpace& space(int t, bool cutoff) const;

  DgpConfig cfg_;
  StructureSampler sampler_;
  std::map<std::pair<int, bool>, LayerSpace> spaces_;
};

DeepDraw sample_dgp(const DgpConfig& cfg, long n, RngStream& rng);

}  // namespace dgplab

#pragma once

#include <memory>
#include <optional>
#include <vector>

#include "dgplab/field.hpp"
#include "dgplab/rng.hpp"
#include "dgplab/series.hpp"

namespace dgplab {

struct RateParams {
  long n = 1;
  double alpha = 1.0;
  int t = 1;

  void validate() const;
};

/// n^{-alpha / (2 alpha + t)}.
double epsilon_rate(const RateParams& rate);

/// (sqrt(n) eps_n)^{-1}, the factor applied to raw series draws.
double rescale_factor(const RateParams& rate);

/// Which constraints a layer is conditioned on.
///   first  : cutoff applied; sup <= 1 and C^beta <= M0
///   inner  : sup <= 1 and C^beta <= M0
///   final  : C^beta <= M0 only
///   single : depth-zero graph, first and final at once; cutoff, C^beta only
enum class LayerKind { first, inner, final, single };

bool uses_cutoff(LayerKind k);
bool conditions_sup(LayerKind k);
const char* to_string(LayerKind k);

/// Smooth cutoff on a grid: 1 on [-1,1]^d, 0 beyond 1 + 0.8 * margin on each axis,
/// degree-7 polynomial blend in between (C^3).
Field make_cutoff(const Grid& grid);

struct ElementaryConfig {
  RateParams rate;
  int beta = 1;
  double m0 = 2.0;
  LayerKind kind = LayerKind::inner;
  std::shared_ptr<const SeriesBasis> basis;
  long max_rejections = 10000;
  /// Only read for first/single layers; built from the basis grid when unset.
  std::shared_ptr<const Field> cutoff;

  void validate() const;
  const Grid& grid() const { return basis->grid(); }
  /// Where the Hölder constraint is checked: the unit cube for cutoff layers
  /// (where the cutoff equals one), the whole layer grid otherwise.
  std::optional<Region> holder_region() const;
};

/// Basis and grid shared by every layer with the same (t, cutoff) shape.
struct LayerSpace {
  std::shared_ptr<const SeriesBasis> basis;
  std::shared_ptr<const Field> cutoff;
};

/// Per-axis truncation: 32 for t <= 2, 16 for t = 3 (capped at m - 2 on coarse cutoff grids).
int default_truncation(int t);
/// Points per axis of inner-layer grids: 129 (t=1), 65 (t=2), 33 (t>=3).
int default_layer_points(int t);
/// Inner layers live on [-1,1]^t; cutoff layers on the ambient extent.
LayerSpace make_layer_space(int t, bool with_cutoff, const Grid& ambient);

struct RawDraw {
  std::vector<double> coefficients;
  Field field;
};

/// c_k = lambda_k^{-alpha/2} xi_k, xi_k iid N(0,1); field = sum c_k e_k on the grid.
RawDraw sample_raw(const ElementaryConfig& cfg, RngStream& rng);

/// Draw coefficients only (the pCN innovation).
std::vector<double> sample_coefficients(const ElementaryConfig& cfg, RngStream& rng);

/// rescale_factor * (cutoff) * sum c_k e_k.
Field layer_field(const ElementaryConfig& cfg, std::span<const double> coefficients);

Field sample_rescaled(const ElementaryConfig& cfg, RngStream& rng);

/// True when the field lies in the layer's conditioning set.
bool satisfies_constraints(const ElementaryConfig& cfg, const Field& field);

struct ConditionedDraw {
  std::vector<double> coefficients;
  Field field;
  long attempts = 0;
};

/// First rescaled draw in the conditioning set. Throws RejectionBudgetError
/// after max_rejections failures.
ConditionedDraw sample_conditioned(const ElementaryConfig& cfg, RngStream& rng);

/// Monte-Carlo estimate of the conditioning-set probability.
struct AcceptanceEstimate {
  double fraction;
  double standard_error;
  long draws;
};
AcceptanceEstimate estimate_acceptance(const ElementaryConfig& cfg, long draws, RngStream& rng);

}  // namespace dgplab

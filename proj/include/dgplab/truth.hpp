#pragma once

#include <optional>
#include <string>
#include <vector>

#include "dgplab/dgp.hpp"
#include "dgplab/field.hpp"
#include "dgplab/structure.hpp"

namespace dgplab {

enum class TruthKind { smooth_bump, gam_sum, wavelet_spike_gam, custom_composition };

TruthKind parse_truth_kind(const std::string& s);
std::string to_string(TruthKind k);

struct TruthSpec {
  TruthKind kind = TruthKind::smooth_bump;
  double alpha = 3.0;
  /// Ball radius K for the H^alpha proxy.
  double radius = 1.0;
  int d = 1;
  /// Peak value; when unset the truth is scaled so its H^alpha proxy equals K.
  std::optional<double> amplitude;
  /// Wavelet spike level; when unset derived from n (2^{-j alpha} = n^{-alpha/(2alpha+2+d)}).
  std::optional<int> spike_level;
  std::optional<long> n_for_level;
  /// Constraint checked for the lower-bound preset: alpha > beta + d/2.
  std::optional<int> beta;
  /// Custom composition: layers and their graph.
  std::optional<GraphSpec> graph;
  LayerFields layers;
};

struct Truth {
  Field theta;
  std::optional<GraphSpec> graph;
  LayerFields layers;
  /// Spectral H^alpha proxy of the 1-D profile (GAM kinds) or of theta (bump).
  double norm_proxy = 0.0;
  std::string description;
  /// Wavelet spike bookkeeping.
  int spike_level = -1;
  int spike_shift = 0;
  double spike_amplitude = 0.0;
  int vanishing_moments = 0;
};

/// C^infinity bump exp(1 - 1/(1 - s^2)) on (-1, 1), zero elsewhere; peak 1 at 0.
double bump(double s);

/// H^alpha proxy sqrt(sum (1 + |j|^2)^alpha <f, e_j>^2) in the tensor-cosine basis of the grid.
double sobolev_proxy(const Field& f, double alpha, int truncation = 64);

/// Spike level from the target radius n^{-alpha/(2alpha+2+d)} = 2^{-j alpha}, at least
/// the smallest level whose spike fits in [-d, d].
int spike_level_for(long n, double alpha, int d, int support_length);

Truth build_truth(const TruthSpec& spec, const Grid& grid);

}  // namespace dgplab

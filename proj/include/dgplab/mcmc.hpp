#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "dgplab/dgp.hpp"
#include "dgplab/posterior.hpp"

namespace dgplab {

/// Gaussian reference law of one layer plus its conditioning set.
struct LayerPrior {
  std::shared_ptr<const SeriesBasis> basis;
  std::shared_ptr<const Field> cutoff;
  std::vector<double> stddev;
  double scale = 1.0;
  bool sup_constraint = false;
  std::optional<int> holder_beta;
  double m0 = 0.0;
  std::optional<Region> holder_region;

  std::vector<double> draw(RngStream& rng) const;
  Field field(std::span<const double> coeffs) const;
  bool admissible(const Field& f) const;
};

/// Same reference law and constraint set as the elementary process.
LayerPrior layer_prior(const ElementaryConfig& cfg);

struct ChainState {
  /// Unset for the baseline prior.
  std::optional<Structure> structure;
  /// Layers in (i, j) order, flattened.
  std::vector<std::vector<double>> coefficients;
  std::vector<Field> layers;
  Field composed;
  Field forward;
  double loglik = 0.0;
  bool cache_valid = false;
  /// pCN step per flattened layer slot.
  std::vector<double> step_sizes;
};

/// Likelihood, forward map and prior of one posterior.
class PosteriorModel {
 public:
  PosteriorModel(Problem problem, Dataset data, std::shared_ptr<const DgpPrior> prior);
  PosteriorModel(Problem problem, Dataset data, BaselineConfig baseline, long prior_n);

  bool is_dgp() const { return static_cast<bool>(dgp_); }
  const Problem& problem() const { return problem_; }
  const Dataset& data() const { return data_; }
  const Grid& grid() const { return problem_grid(problem_); }

  std::vector<LayerPrior> layer_priors(const std::optional<Structure>& s) const;
  Field compose(const std::optional<Structure>& s, const std::vector<Field>& layers) const;
  /// Largest number of layer components over the prior's support.
  std::size_t max_layer_slots() const;
  /// Fills u = G(theta) and returns the log-likelihood.
  double loglik(const Field& theta, Field& u) const;

  /// Fresh draw from the prior (structure, conditioned layers, composition, likelihood).
  ChainState prior_state(RngStream& rng) const;

 private:
  Problem problem_;
  Dataset data_;
  std::vector<InterpStencil> stencils_;
  std::shared_ptr<const DgpPrior> dgp_;
  std::optional<BaselineConfig> baseline_;
  std::optional<BaselineSpace> baseline_space_;
  long prior_n_ = 1;
  mutable std::map<std::string, std::vector<LayerPrior>> layer_cache_;
};

struct StepInfo {
  bool accepted = false;
  bool admissible = true;
  std::string note;
};

/// Joint pCN proposal over all layers: c' = sqrt(1 - b^2) c + b xi with xi from
/// each layer's reference law; accepted with probability
/// 1{theta' in the conditioning set} * min(1, exp(l(theta') - l(theta))).
StepInfo pcn_step(ChainState& state, const PosteriorModel& model, RngStream& rng);

/// Independence proposal from the prior (structure from pi, fresh layers);
/// accepted with probability min(1, exp(l(theta') - l(theta))).
StepInfo structure_move(ChainState& state, const PosteriorModel& model, RngStream& rng);

/// log acceptance ratio of moving from loglik `from` to loglik `to`.
inline double log_acceptance(double from, double to) { return to - from; }

struct ChainSchedule {
  long burn_in = 0;
  long samples = 0;
  long thin = 1;
  double initial_step = 0.2;
  double target_acceptance = 0.3;
  /// Structure move every k iterations; 0 disables.
  long structure_every = 0;
  bool adapt = true;
  /// Keep the thinned composed fields in the summary.
  bool keep_fields = false;
};

struct Quantiles {
  double q10 = 0.0, median = 0.0, q90 = 0.0;
};
Quantiles quantiles(std::vector<double> v);

struct ChainSummary {
  long iterations = 0;
  long recorded = 0;
  double pcn_acceptance = 0.0;
  double burn_in_acceptance = 0.0;
  double structure_acceptance = 0.0;
  std::vector<double> final_steps;
  std::vector<double> l2_error;
  std::vector<double> prediction_error;
  std::vector<double> c_beta;
  std::vector<double> loglik;
  std::vector<std::string> structures;
  Quantiles l2_quantiles, prediction_quantiles, c_beta_quantiles;
  Field mean, variance;
  std::vector<Field> fields;
  std::vector<std::string> notes;
};

/// Truth and its forward image, for error functionals.
struct Reference {
  Field theta;
  Field u;
};

/// Burn-in with Robbins-Monro adaptation of log step sizes toward the target
/// acceptance, then `samples` iterations with frozen steps, recording every
/// `thin`-th state. With samples == 0 the initial state alone is summarized.
ChainSummary run_chain(ChainState state, const PosteriorModel& model, const ChainSchedule& schedule, RngStream& rng,
                       const std::optional<Reference>& truth = std::nullopt, int beta = 1);

}  // namespace dgplab

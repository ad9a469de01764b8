#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "dgplab/exponents.hpp"
#include "dgplab/io.hpp"
#include "dgplab/mcmc.hpp"
#include "dgplab/truth.hpp"

namespace dgplab {

enum class PriorType { dgp, baseline };

struct PriorSpec {
  /// Used in CSV rows and plot legends; [A-Za-z0-9_.+-] only.
  std::string label = "dgp";
  PriorType type = PriorType::dgp;
  /// Baseline only.
  BaselineConfig baseline;
  /// DGP only.
  double alpha_plus = 4.0;
  int q_max = 3;
  /// Hölder-ball radius of the conditioned layers; default max(1, 2 ||theta*||_{C^beta}).
  std::optional<double> m0;
};

/// Desk-scale limits lifted by `allow_large`.
struct DeskLimits {
  int max_d = 2;
  long max_n = 4000;
  int max_replicates = 8;
  long max_forward_solves = 5'000'000;
};

struct ExperimentPlan {
  json problem = {{"kind", "darcy"}, {"d", 1}, {"points", 129}};
  TruthSpec truth;
  std::vector<long> n_grid;
  std::vector<PriorSpec> priors;
  int replicates = 4;
  ChainSchedule schedule;
  std::filesystem::path output_dir = "out";
  std::uint64_t seed = 1;
  /// Hölder order of the conditioning and of the stability estimate.
  int beta = 2;
  bool allow_large = false;
  /// 0: OpenMP default.
  int jobs = 0;
  /// Theoretical exponents drawn as guide lines in the plot.
  std::vector<std::string> guide_exponents;

  /// Throws ConfigError on the first violated constraint.
  void validate(const DeskLimits& limits = {}) const;
  long estimated_forward_solves() const;
};

ExperimentPlan plan_from_json(const json& j);
json plan_to_json(const ExperimentPlan& p);

/// Wavelet-spike GAM comparison: d = 2, beta = 2, alpha = 4, DGP against a
/// baseline with tau = alpha.
ExperimentPlan lower_bound_preset();

/// Darcy d = 1, smooth bump truth, n in {250, 1000, 4000}, R = 4, DGP prior.
ExperimentPlan smoke_preset();

/// One prior x n x replicate cell.
struct CellResult {
  std::string prior;
  long n = 0;
  int replicate = 0;
  bool ok = false;
  double l2_median = 0.0, l2_q90 = 0.0;
  double prediction_median = 0.0, prediction_q90 = 0.0;
  double pcn_acceptance = 0.0;
  double structure_acceptance = 0.0;
  /// Most frequent recorded structure (graph key), "baseline" for the baseline.
  std::string modal_structure;
  std::string note;
};

/// OLS fit of log(err) = a + slope log(n).
struct SlopeFit {
  double slope = 0.0;
  double intercept = 0.0;
  double standard_error = 0.0;
  double r_squared = 0.0;
  int points = 0;
};
/// Requires >= 3 points with positive errors; throws ConfigError otherwise.
SlopeFit fit_slope(const std::vector<double>& n, const std::vector<double>& err);

struct RatePoint {
  long n = 0;
  int surviving = 0;
  /// Median over replicates of the posterior medians, with the replicate standard error.
  double l2 = 0.0, l2_se = 0.0, l2_q90 = 0.0;
  double prediction = 0.0, prediction_se = 0.0, prediction_q90 = 0.0;
};

struct PriorRate {
  std::string label;
  PriorType type = PriorType::dgp;
  std::vector<RatePoint> points;
  std::optional<SlopeFit> l2_fit, prediction_fit;
  std::string fit_note;
};

struct RateReport {
  ExperimentPlan plan;
  std::string truth_description;
  double truth_norm_proxy = 0.0;
  std::vector<CellResult> cells;
  std::vector<PriorRate> priors;
  std::optional<ExponentTable> exponents;
  /// Label of the prior with the smaller L2 median at the largest n, when two or more survive.
  std::string smaller_at_largest_n;
  std::vector<std::string> failures;
};

RateReport run_contraction_experiment(const ExperimentPlan& plan);

/// Per-prior aggregation and slope fits over `report.cells`.
void summarize(RateReport& report);

/// results.csv, summary.json, rates.svg in `dir`.
void emit_results(const RateReport& report, const std::filesystem::path& dir);

std::string cells_to_csv(const std::vector<CellResult>& cells);
std::vector<CellResult> cells_from_csv(const std::string& text);
json report_to_json(const RateReport& report);
std::string rate_plot_svg(const RateReport& report);

}  // namespace dgplab

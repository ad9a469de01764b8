#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "dgplab/field.hpp"
#include "dgplab/pde.hpp"
#include "dgplab/rng.hpp"
#include "dgplab/series.hpp"

namespace dgplab {

/// D_n = (Y_i, X_i), X_i uniform on the extent, Y_i = G(theta*)(X_i) + N(0,1).
struct Dataset {
  long n = 0;
  int dim = 1;
  /// Flat n x dim design.
  std::vector<double> xs;
  std::vector<double> ys;
  std::string truth_ref;
  std::uint64_t noise_seed = 0;

  std::span<const double> x(long i) const { return {xs.data() + i * dim, static_cast<std::size_t>(dim)}; }
};

struct DataOptions {
  bool zero_noise = false;
};

Dataset generate_data(const Field& truth, long n, const Problem& problem, RngStream& rng,
                      const DataOptions& opts = {});

/// Interpolation stencils of the design points on a grid, reused across likelihood calls.
std::vector<InterpStencil> design_stencils(const Dataset& data, const Grid& grid);

/// -1/2 sum (Y_i - u(X_i))^2 for a forward solution u.
double log_likelihood(const Field& u, const Dataset& data);
double log_likelihood(const Field& u, const Dataset& data, const std::vector<InterpStencil>& stencils);

struct DistanceReport {
  /// ||G(t1) - G(t2)||^2_{L2(mu)}, mu uniform on the extent.
  double prediction_risk_sq = 0.0;
  /// K(P1, P2) = prediction_risk_sq / 2.
  double kl = 0.0;
  /// h^2 = 2 int (1 - exp(-Delta^2 / 8)) dmu.
  double hellinger_sq = 0.0;
  /// h^2 <= prediction_risk_sq / 4.
  bool hellinger_bound_ok = true;
};

DistanceReport kl_and_hellinger(const Field& theta1, const Field& theta2, const Problem& problem);
DistanceReport distances_from_forward(const Field& u1, const Field& u2);

/// Monte-Carlo KL: mean of log p1(Y|X) - log p2(Y|X) over (X, Y) ~ P1.
struct MonteCarloEstimate {
  double mean = 0.0;
  double standard_error = 0.0;
  long draws = 0;
};
MonteCarloEstimate monte_carlo_kl(const Field& u1, const Field& u2, long draws, RngStream& rng);

/// Rescaled Gaussian baseline: rho_n^{-1} * cutoff * sum lambda_j^{-tau/2} xi_j e_j
/// on the ambient grid, with rho_n^{-1} = n^{-d/(4 tau + 4 + 2d)} (canonical)
/// or n^{-custom_exponent}.
struct BaselineConfig {
  double tau = 3.0;
  std::optional<double> custom_exponent;
  int truncation = 0;  // 0: default per dimension

  void validate(int beta, int d) const;
  double exponent(int d) const;
  double scale(long n, int d) const;
};

/// Basis and cutoff of the baseline prior on one ambient grid.
struct BaselineSpace {
  std::shared_ptr<const SeriesBasis> basis;
  std::shared_ptr<const Field> cutoff;
  std::vector<double> stddev;
};
BaselineSpace make_baseline_space(const BaselineConfig& cfg, const Grid& ambient);

Field baseline_field(const BaselineConfig& cfg, const BaselineSpace& space, long n, std::span<const double> coeffs);
std::vector<double> baseline_coefficients(const BaselineSpace& space, RngStream& rng);
Field baseline_prior_sample(const BaselineConfig& cfg, long n, const Grid& ambient, RngStream& rng);

}  // namespace dgplab

#pragma once

#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "dgplab/field.hpp"
#include "dgplab/kernels.hpp"

namespace dgplab {

struct SolverStats {
  int iterations = 0;
  double relative_residual = 0.0;
};

struct CgOptions {
  double relative_tolerance = 1e-10;
  /// Iteration cap; 0 means 50 * (number of grid points).
  long max_iterations = 0;
};

/// Jacobi-preconditioned conjugate gradient on the interior unknowns of `op`.
/// `x` carries the initial guess (boundary entries are left untouched).
/// Throws NumericError with the iteration diagnostics on non-convergence.
SolverStats conjugate_gradient(const kernels::FluxOperator& op, std::span<const double> rhs,
                               std::span<double> x, const CgOptions& opts = {});

/// div(f grad u) = g in the box, u = 0 on its boundary; f = k_min + exp(theta).
struct DarcyConfig {
  Grid grid;
  Field source;
  double k_min = 1.0;
  double g_min = 0.0;
  CgOptions solver;

  /// The source must be sign-definite with |g| >= g_min > 0.
  void validate() const;
};

/// (1/2) Laplace(u) - f u = 0 in the box, u = h on its boundary; f = exp(theta).
/// Only boundary nodes of `boundary` are read.
struct SchrodingerConfig {
  Grid grid;
  Field boundary;
  double h_min = 0.0;
  CgOptions solver;

  void validate() const;
};

/// Debug forward map: G(theta) = theta. No PDE solve.
struct IdentityConfig {
  Grid grid;
};

using Problem = std::variant<DarcyConfig, SchrodingerConfig, IdentityConfig>;

enum class ProblemKind { darcy, schrodinger, identity };
ProblemKind problem_kind(const Problem& p);
const Grid& problem_grid(const Problem& p);
std::string to_string(ProblemKind k);

struct Solution {
  Field u;
  SolverStats stats;
};

/// Pointwise link: k_min + exp(theta) for Darcy, exp(theta) for Schrödinger,
/// theta itself for the identity problem.
Field link(const Field& theta, const Problem& problem);

Solution solve_darcy(const Field& f, const DarcyConfig& cfg);
Solution solve_schrodinger(const Field& f, const SchrodingerConfig& cfg);

/// G(theta) = solve(link(theta)).
Solution forward_solve(const Field& theta, const Problem& problem);
Field forward(const Field& theta, const Problem& problem);

/// The discrete operator assembled by solve_darcy (exposed for conservation checks).
kernels::FluxOperator darcy_operator(const Field& f);

/// Condition-3 exponents for the two problems.
struct StabilityExponents {
  ProblemKind problem;
  int beta;
  double xi;
  double zeta;
};
/// Darcy: xi = beta(beta+1), zeta = (beta-1)/(beta+1), beta >= 2.
/// Schrödinger: xi = beta/2 + 1, zeta = beta/(beta+2), beta >= 1.
StabilityExponents stability_exponents(ProblemKind problem, int beta);

using FieldPair = std::pair<Field, Field>;

/// C^beta ball the pairs are required to live in.
struct HolderBall {
  int beta = 1;
  double radius = 1.0;
};

struct LipschitzReport {
  double max_ratio = 0.0;
  std::vector<double> ratios;
  int skipped = 0;
  std::vector<std::string> notes;
};

/// max over pairs of ||G(t1) - G(t2)||_L2 / ||t1 - t2||_inf. Identical pairs are skipped.
LipschitzReport check_lipschitz(const std::vector<FieldPair>& pairs, const HolderBall& ball,
                                const Problem& problem);

struct StabilityReport {
  double max_ratio = 0.0;
  std::vector<double> ratios;
  int skipped = 0;
  std::vector<std::string> notes;
};

/// max over pairs of ||t1 - t2||_L2 / ||G(t1) - G(t2)||_L2^zeta. Pairs whose
/// forward difference is below `noise_floor` are skipped.
StabilityReport check_stability(const std::vector<FieldPair>& pairs, const StabilityExponents& exps,
                                const HolderBall& ball, const Problem& problem,
                                double noise_floor = 1e-8);

}  // namespace dgplab

#pragma once

#include <optional>
#include <string>
#include <vector>

#include "dgplab/pde.hpp"
#include "dgplab/rational.hpp"

namespace dgplab {

struct ExponentInputs {
  ProblemKind problem = ProblemKind::darcy;
  Rational alpha{3};
  int beta = 2;
  int d = 1;
  /// Baseline smoothness; baseline entries are skipped when unset.
  std::optional<Rational> tau;
};

/// One rate n^{-value}.
struct ExponentEntry {
  std::string name;
  std::string formula;
  Rational value;
  /// False when the inputs fall outside the hypotheses under which the rate is
  /// proven; `caveat` then names the failed condition. The value is still exact.
  bool hypotheses_hold = true;
  std::string caveat;
};

struct ExponentTable {
  ExponentInputs inputs;
  std::vector<ExponentEntry> entries;

  /// Throws ConfigError if absent.
  const ExponentEntry& get(const std::string& name) const;
  bool has(const std::string& name) const;
};

/// Stability exponent zeta as an exact rational.
Rational zeta_exponent(ProblemKind problem, int beta);

/// Every rate exponent that applies to the inputs, in exact arithmetic:
///   dgp_prediction        alpha/(2 alpha + d)
///   dgp_l2                zeta alpha/(2 alpha + d)
///   dgp_prediction_gam    alpha/(2 alpha + 1)
///   dgp_l2_gam            zeta alpha/(2 alpha + 1)
///   delta_n               (alpha+1)/(2 alpha + 2 + d)                 (Darcy)
///   baseline_lower        alpha/(2 alpha + 2 + d)                     (Darcy)
///   baseline_upper        zeta (alpha+1)/(2 alpha + 2 + d)            (Darcy)
///   baseline_scaling      d/(4 tau + 4 + 2d)                          (tau set)
///   baseline_lower_tau    lower bound for smoothness tau under canonical scaling (Darcy, tau set):
///                         tau <= alpha:              tau/(2 tau + 2 + d)
///                         alpha < tau < alpha + d/2: alpha/(2 alpha + 2 + d)
///                         tau > alpha + d/2:         (alpha+1)/(2 tau + 2) - alpha d/((tau+1)(4 tau + 4 + 2d))
/// Throws ConfigError naming the violated constraint and the formula when a
/// formula is undefined; lower-bound entries outside alpha > beta + d/2 are
/// returned with hypotheses_hold = false.
ExponentTable theoretical_exponents(const ExponentInputs& in);

}  // namespace dgplab

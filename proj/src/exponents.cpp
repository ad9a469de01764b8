#include "dgplab/exponents.hpp"

#include "dgplab/errors.hpp"

namespace dgplab {

const ExponentEntry& ExponentTable::get(const std::string& name) const {
  for (const auto& e : entries)
    if (e.name == name) return e;
  throw ConfigError("exponent table: no entry '" + name + "'");
}

bool ExponentTable::has(const std::string& name) const {
  for (const auto& e : entries)
    if (e.name == name) return true;
  return false;
}

Rational zeta_exponent(ProblemKind problem, int beta) {
  switch (problem) {
    case ProblemKind::darcy:
      if (beta < 2) throw ConfigError("zeta = (beta-1)/(beta+1): Darcy needs an integer beta > 1");
      return Rational(beta - 1, beta + 1);
    case ProblemKind::schrodinger:
      if (beta < 1) throw ConfigError("zeta = beta/(beta+2): Schrodinger needs an integer beta > 0");
      return Rational(beta, beta + 2);
    case ProblemKind::identity: break;
  }
  throw ConfigError("zeta: no stability exponent for the identity problem");
}

ExponentTable theoretical_exponents(const ExponentInputs& in) {
  if (in.d < 1) throw ConfigError("exponents: d must be >= 1");
  if (!(in.alpha > Rational(0))) throw ConfigError("exponents: alpha must be > 0");
  const Rational a = in.alpha, d(in.d), one(1), two(2);
  const Rational zeta = zeta_exponent(in.problem, in.beta);

  ExponentTable t;
  t.inputs = in;
  auto add = [&](std::string name, std::string formula, Rational v, std::string caveat = {}) {
    const bool ok = caveat.empty();
    t.entries.push_back({std::move(name), std::move(formula), v, ok, std::move(caveat)});
  };
  const Rational pred = a / (two * a + d);
  const Rational pred_gam = a / (two * a + one);
  add("dgp_prediction", "alpha/(2alpha+d)", pred);
  add("dgp_l2", "zeta*alpha/(2alpha+d)", zeta * pred);
  add("dgp_prediction_gam", "alpha/(2alpha+1)", pred_gam);
  add("dgp_l2_gam", "zeta*alpha/(2alpha+1)", zeta * pred_gam);

  if (in.problem != ProblemKind::darcy) return t;

  const Rational denom = two * a + two + d;
  add("delta_n", "(alpha+1)/(2alpha+2+d)", (a + one) / denom);
  const Rational half_d = d / two;
  std::string caveat;
  if (!(a > Rational(in.beta) + half_d))
    caveat = "lower bound proven for alpha > beta + d/2 only (alpha=" + a.str() + ", beta=" + std::to_string(in.beta) +
             ", d=" + std::to_string(in.d) + ")";
  add("baseline_lower", "alpha/(2alpha+2+d)", a / denom, caveat);
  add("baseline_upper", "zeta*(alpha+1)/(2alpha+2+d)", zeta * (a + one) / denom);

  if (!in.tau) return t;
  const Rational tau = *in.tau;
  if (!(tau > Rational(in.beta) + half_d))
    throw ConfigError("baseline_scaling = d/(4tau+4+2d): requires tau > beta + d/2 (tau=" + tau.str() + ")");
  const Rational four(4);
  add("baseline_scaling", "d/(4tau+4+2d)", d / (four * tau + four + two * d));
  if (tau <= a) {
    add("baseline_lower_tau", "tau/(2tau+2+d) [tau <= alpha]", tau / (two * tau + two + d), caveat);
  } else if (tau < a + half_d) {
    add("baseline_lower_tau", "alpha/(2alpha+2+d) [alpha < tau < alpha+d/2]", a / denom, caveat);
  } else if (tau > a + half_d) {
    add("baseline_lower_tau", "(alpha+1)/(2tau+2) - alpha d/((tau+1)(4tau+4+2d)) [tau > alpha+d/2]",
        (a + one) / (two * tau + two) - a * d / ((tau + one) * (four * tau + four + two * d)), caveat);
  } else {
    throw ConfigError("baseline_lower_tau: tau = alpha + d/2 is the boundary between the alpha < tau < alpha + d/2 and "
                      "tau > alpha + d/2 regimes; no formula applies");
  }
  return t;
}

}  // namespace dgplab

#include "dgplab/pde.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "dgplab/errors.hpp"

namespace dgplab {

namespace kp = kernels::parallel;

SolverStats conjugate_gradient(const kernels::FluxOperator& op, std::span<const double> rhs,
                               std::span<double> x, const CgOptions& opts) {
  const std::size_t n = op.grid.size();
  const long cap = opts.max_iterations > 0 ? opts.max_iterations : 50L * static_cast<long>(n);
  const auto diag = op.diagonal();

  std::vector<double> r(n), z(n), p(n), Ap(n);
  kp::apply_operator(op, x, Ap);
  for (std::size_t i = 0; i < n; ++i) r[i] = op.interior[i] ? rhs[i] - Ap[i] : 0.0;

  const double bnorm = std::sqrt(kp::dot(rhs, rhs));
  SolverStats stats;
  if (bnorm == 0.0) {
    std::fill(x.begin(), x.end(), 0.0);
    return stats;
  }
  double rnorm = std::sqrt(kp::dot(r, r));
  stats.relative_residual = rnorm / bnorm;
  if (stats.relative_residual <= opts.relative_tolerance) return stats;

  for (std::size_t i = 0; i < n; ++i) z[i] = r[i] / diag[i];
  p = z;
  double rz = kp::dot(r, z);
  for (long it = 1; it <= cap; ++it) {
    kp::apply_operator(op, p, Ap);
    const double pAp = kp::dot(p, Ap);
    if (!(pAp > 0.0) || !std::isfinite(pAp)) {
      std::ostringstream msg;
      msg << "conjugate gradient breakdown at iteration " << it << " (p'Ap = " << pAp << ")";
      throw NumericError(msg.str());
    }
    const double step = rz / pAp;
    kp::axpy(step, p, x);
    kp::axpy(-step, Ap, r);
    rnorm = std::sqrt(kp::dot(r, r));
    stats.iterations = static_cast<int>(it);
    stats.relative_residual = rnorm / bnorm;
    if (stats.relative_residual <= opts.relative_tolerance) return stats;
    for (std::size_t i = 0; i < n; ++i) z[i] = r[i] / diag[i];
    const double rz_next = kp::dot(r, z);
    const double beta = rz_next / rz;
    rz = rz_next;
    for (std::size_t i = 0; i < n; ++i) p[i] = z[i] + beta * p[i];
  }
  std::ostringstream msg;
  msg << "conjugate gradient did not converge: " << stats.iterations << " iterations, relative residual "
      << stats.relative_residual << " > " << opts.relative_tolerance;
  throw NumericError(msg.str());
}

namespace {

std::vector<char> interior_mask(const Grid& g) {
  std::vector<char> mask(g.size(), 1);
  std::vector<int> idx(g.dim());
  for (std::size_t i = 0; i < g.size(); ++i) {
    g.unflatten(i, idx);
    for (int a = 0; a < g.dim(); ++a)
      if (idx[a] == 0 || idx[a] == g.points_per_axis() - 1) mask[i] = 0;
  }
  return mask;
}

kernels::FluxOperator base_operator(const Grid& g) {
  kernels::FluxOperator op;
  op.grid = g;
  op.interior = interior_mask(g);
  op.face.assign(g.dim(), std::vector<double>(g.size(), 0.0));
  return op;
}

}  // namespace

void DarcyConfig::validate() const {
  if (!(k_min > 0.0)) throw ConfigError("darcy: k_min must be > 0");
  if (!(g_min > 0.0)) throw ConfigError("darcy: g_min must be > 0");
  if (!(source.grid() == grid)) throw ConfigError("darcy: source grid does not match problem grid");
  const auto v = source.values();
  const bool positive = std::all_of(v.begin(), v.end(), [&](double x) { return x >= g_min; });
  const bool negative = std::all_of(v.begin(), v.end(), [&](double x) { return x <= -g_min; });
  if (!positive && !negative) throw ConfigError("darcy: source must satisfy |g| >= g_min with a fixed sign");
}

void SchrodingerConfig::validate() const {
  if (!(h_min > 0.0)) throw ConfigError("schrodinger: h_min must be > 0");
  if (!(boundary.grid() == grid)) throw ConfigError("schrodinger: boundary grid does not match problem grid");
  const auto interior = interior_mask(grid);
  for (std::size_t i = 0; i < grid.size(); ++i)
    if (!interior[i] && boundary[i] < h_min) throw ConfigError("schrodinger: boundary data below h_min");
}

ProblemKind problem_kind(const Problem& p) {
  if (std::holds_alternative<DarcyConfig>(p)) return ProblemKind::darcy;
  if (std::holds_alternative<SchrodingerConfig>(p)) return ProblemKind::schrodinger;
  return ProblemKind::identity;
}

const Grid& problem_grid(const Problem& p) {
  return std::visit([](const auto& c) -> const Grid& { return c.grid; }, p);
}

std::string to_string(ProblemKind k) {
  switch (k) {
    case ProblemKind::darcy: return "darcy";
    case ProblemKind::schrodinger: return "schrodinger";
    case ProblemKind::identity: return "identity";
  }
  return "?";
}

Field link(const Field& theta, const Problem& problem) {
  Field f(theta.grid());
  const ProblemKind kind = problem_kind(problem);
  const double offset = kind == ProblemKind::darcy ? std::get<DarcyConfig>(problem).k_min : 0.0;
  for (std::size_t i = 0; i < theta.size(); ++i)
    f[i] = kind == ProblemKind::identity ? theta[i] : offset + std::exp(theta[i]);
  return f;
}

kernels::FluxOperator darcy_operator(const Field& f) {
  const Grid& g = f.grid();
  auto op = base_operator(g);
  std::vector<int> idx(g.dim());
  for (std::size_t i = 0; i < g.size(); ++i) {
    g.unflatten(i, idx);
    for (int a = 0; a < g.dim(); ++a)
      if (idx[a] + 1 < g.points_per_axis()) op.face[a][i] = 0.5 * (f[i] + f[i + g.stride(a)]);
  }
  return op;
}

Solution solve_darcy(const Field& f, const DarcyConfig& cfg) {
  if (!(f.grid() == cfg.grid)) throw ConfigError("solve_darcy: conductivity grid mismatch");
  for (double v : f.values())
    if (!(v >= cfg.k_min) || !std::isfinite(v))
      throw ConfigError("solve_darcy: conductivity below k_min (precondition f >= k_min > 0)");
  const auto op = darcy_operator(f);
  // -div(f grad u) = -g on interior nodes.
  std::vector<double> rhs(cfg.grid.size(), 0.0);
  for (std::size_t i = 0; i < rhs.size(); ++i)
    if (op.interior[i]) rhs[i] = -cfg.source[i];
  Solution sol{Field(cfg.grid), {}};
  sol.stats = conjugate_gradient(op, rhs, sol.u.values(), cfg.solver);
  return sol;
}

Solution solve_schrodinger(const Field& f, const SchrodingerConfig& cfg) {
  const Grid& g = cfg.grid;
  if (!(f.grid() == g)) throw ConfigError("solve_schrodinger: potential grid mismatch");
  for (double v : f.values())
    if (!(v >= 0.0) || !std::isfinite(v)) throw ConfigError("solve_schrodinger: potential must be >= 0");
  auto op = base_operator(g);
  op.reaction.assign(f.values().begin(), f.values().end());
  for (int a = 0; a < g.dim(); ++a) std::fill(op.face[a].begin(), op.face[a].end(), 0.5);

  // Boundary values move to the right-hand side of the interior equations.
  std::vector<double> rhs(g.size(), 0.0);
  std::vector<int> idx(g.dim());
  const int m = g.points_per_axis();
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (!op.interior[i]) continue;
    g.unflatten(i, idx);
    for (int a = 0; a < g.dim(); ++a) {
      const double c = 0.5 / (g.spacing(a) * g.spacing(a));
      if (idx[a] == 1) rhs[i] += c * cfg.boundary[i - g.stride(a)];
      if (idx[a] == m - 2) rhs[i] += c * cfg.boundary[i + g.stride(a)];
    }
  }
  Solution sol{Field(g), {}};
  sol.stats = conjugate_gradient(op, rhs, sol.u.values(), cfg.solver);
  for (std::size_t i = 0; i < g.size(); ++i)
    if (!op.interior[i]) sol.u[i] = cfg.boundary[i];
  return sol;
}

Solution forward_solve(const Field& theta, const Problem& problem) {
  if (!(theta.grid() == problem_grid(problem))) throw ConfigError("forward: parameter grid does not match problem grid");
  if (!theta.all_finite()) throw NumericError("forward: non-finite parameter field");
  const Field f = link(theta, problem);
  switch (problem_kind(problem)) {
    case ProblemKind::darcy: return solve_darcy(f, std::get<DarcyConfig>(problem));
    case ProblemKind::schrodinger: return solve_schrodinger(f, std::get<SchrodingerConfig>(problem));
    case ProblemKind::identity: return {f, {}};
  }
  throw ConfigError("forward: unknown problem");
}

Field forward(const Field& theta, const Problem& problem) { return forward_solve(theta, problem).u; }

StabilityExponents stability_exponents(ProblemKind problem, int beta) {
  switch (problem) {
    case ProblemKind::darcy:
      if (beta < 2) throw ConfigError("stability exponents: Darcy needs an integer beta > 1");
      return {problem, beta, static_cast<double>(beta) * (beta + 1), (beta - 1.0) / (beta + 1.0)};
    case ProblemKind::schrodinger:
      if (beta < 1) throw ConfigError("stability exponents: Schrodinger needs beta >= 1");
      return {problem, beta, beta / 2.0 + 1.0, beta / (beta + 2.0)};
    case ProblemKind::identity: break;
  }
  throw ConfigError("stability exponents: not defined for the identity problem");
}

namespace {

void check_ball(const Field& t, const HolderBall& ball, int pair) {
  const double n = c_beta_norm(t, ball.beta);
  if (n > ball.radius * (1.0 + 1e-12))
    throw ConfigError("pair " + std::to_string(pair) + " lies outside the C^" + std::to_string(ball.beta) +
                      " ball of radius " + std::to_string(ball.radius));
}

}  // namespace

LipschitzReport check_lipschitz(const std::vector<FieldPair>& pairs, const HolderBall& ball,
                                const Problem& problem) {
  LipschitzReport rep;
  for (std::size_t k = 0; k < pairs.size(); ++k) {
    const auto& [a, b] = pairs[k];
    check_ball(a, ball, static_cast<int>(k));
    check_ball(b, ball, static_cast<int>(k));
    const double den = sup_norm(a - b);
    if (den == 0.0) {
      ++rep.skipped;
      rep.notes.push_back("pair " + std::to_string(k) + " skipped: identical parameters");
      continue;
    }
    const double num = l2_norm(forward(a, problem) - forward(b, problem));
    rep.ratios.push_back(num / den);
    rep.max_ratio = std::max(rep.max_ratio, num / den);
  }
  return rep;
}

StabilityReport check_stability(const std::vector<FieldPair>& pairs, const StabilityExponents& exps,
                                const HolderBall& ball, const Problem& problem, double noise_floor) {
  StabilityReport rep;
  for (std::size_t k = 0; k < pairs.size(); ++k) {
    const auto& [a, b] = pairs[k];
    check_ball(a, ball, static_cast<int>(k));
    check_ball(b, ball, static_cast<int>(k));
    const double dg = l2_norm(forward(a, problem) - forward(b, problem));
    if (dg < noise_floor) {
      ++rep.skipped;
      rep.notes.push_back("pair " + std::to_string(k) + " skipped: forward difference below noise floor");
      continue;
    }
    const double r = l2_norm(a - b) / std::pow(dg, exps.zeta);
    rep.ratios.push_back(r);
    rep.max_ratio = std::max(rep.max_ratio, r);
  }
  return rep;
}

}  // namespace dgplab

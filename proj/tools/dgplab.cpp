#include <cstdio>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"

#include "dgplab/dgp.hpp"
#include "dgplab/errors.hpp"
#include "dgplab/experiment.hpp"
#include "dgplab/exponents.hpp"
#include "dgplab/io.hpp"
#include "dgplab/posterior.hpp"
#include "dgplab/truth.hpp"

using namespace dgplab;
namespace fs = std::filesystem;

namespace {

struct Globals {
  std::optional<std::uint64_t> seed;
  std::optional<int> jobs;
  std::optional<std::string> out;
};

struct ProblemArgs {
  std::string file;
  std::string kind = "darcy";
  int d = 1;
  int points = 129;
};

void add_problem_options(CLI::App* sub, ProblemArgs& a) {
  sub->add_option("--problem", a.file, "Problem JSON document");
  sub->add_option("--kind", a.kind, "darcy, schrodinger or identity")->check(CLI::IsMember({"darcy", "schrodinger", "identity"}));
  sub->add_option("--d", a.d, "Ambient dimension")->check(CLI::Range(1, 3));
  sub->add_option("--points", a.points, "Grid points per axis")->check(CLI::Range(3, 4097));
}

json problem_json(const ProblemArgs& a) {
  if (!a.file.empty()) return read_json_file(a.file);
  return {{"kind", a.kind}, {"d", a.d}, {"points", a.points}};
}

int run_forward(const Globals& g, const ProblemArgs& pa, const std::string& theta_stem, const std::string& truth_kind,
                double alpha) {
  const Problem problem = problem_from_json(problem_json(pa));
  const Grid& grid = problem_grid(problem);
  Field theta;
  if (!theta_stem.empty()) {
    theta = read_field(theta_stem);
    if (!(theta.grid() == grid)) throw ConfigError("forward: theta grid differs from the problem grid");
  } else {
    TruthSpec ts;
    ts.kind = parse_truth_kind(truth_kind);
    ts.alpha = alpha;
    ts.d = grid.dim();
    if (ts.kind == TruthKind::wavelet_spike_gam) ts.n_for_level = 1000;
    theta = build_truth(ts, grid).theta;
  }
  const Solution sol = forward_solve(theta, problem);
  const fs::path out = g.out.value_or("forward");
  fs::create_directories(out);
  write_field(out / "theta", theta);
  write_field(out / "u", sol.u);
  write_field_csv(out / "u.csv", sol.u);
  json report = {{"problem", problem_to_json(problem)},
                 {"solver", solver_stats_to_json(sol.stats)},
                 {"sup_u", sup_norm(sol.u)},
                 {"l2_u", l2_norm(sol.u)}};
  write_text_file(out / "forward.json", report.dump(2) + "\n");
  std::cout << report.dump(2) << "\n";
  return 0;
}

struct PriorArgs {
  std::string type = "dgp";
  long n = 1000;
  int count = 4;
  int beta = 2;
  double alpha_plus = 4.0;
  int q_max = 3;
  double m0 = 2.0;
  double tau = 3.0;
};

int run_prior_sample(const Globals& g, const ProblemArgs& pa, const PriorArgs& a) {
  const Problem problem = problem_from_json(problem_json(pa));
  const Grid& grid = problem_grid(problem);
  const fs::path out = g.out.value_or("prior-samples");
  fs::create_directories(out);
  const std::uint64_t seed = g.seed.value_or(1);
  json manifest = {{"type", a.type}, {"n", a.n}, {"seed", seed}, {"grid", grid_to_json(grid)}, {"draws", json::array()}};
  if (a.type == "dgp") {
    DgpConfig cfg;
    cfg.hyper = default_hyperprior(grid.dim(), a.beta, a.alpha_plus, a.q_max);
    cfg.ambient = grid;
    cfg.m0 = a.m0;
    const DgpPrior prior(cfg, a.n);
    for (int i = 0; i < a.count; ++i) {
      RngStream rng(StreamKey{seed, stream_module::prior, static_cast<std::uint64_t>(i), 0});
      const DeepDraw d = prior.sample(rng);
      const std::string stem = "draw" + std::to_string(i);
      write_field(out / stem, d.composed);
      long attempts = 0;
      for (const auto& layer : d.layers)
        for (const auto& c : layer) attempts += c.attempts;
      manifest["draws"].push_back({{"file", stem}, {"structure", structure_to_json(d.structure)}, {"attempts", attempts}});
    }
  } else if (a.type == "baseline") {
    BaselineConfig cfg;
    cfg.tau = a.tau;
    cfg.validate(a.beta, grid.dim());
    manifest["tau"] = a.tau;
    for (int i = 0; i < a.count; ++i) {
      RngStream rng(StreamKey{seed, stream_module::prior, static_cast<std::uint64_t>(i), 0});
      const Field f = baseline_prior_sample(cfg, a.n, grid, rng);
      const std::string stem = "draw" + std::to_string(i);
      write_field(out / stem, f);
      manifest["draws"].push_back({{"file", stem}});
    }
  } else {
    throw ConfigError("prior-sample: type must be dgp or baseline");
  }
  write_text_file(out / "manifest.json", manifest.dump(2) + "\n");
  std::cout << "wrote " << a.count << " draws to " << out.string() << "\n";
  return 0;
}

int run_exponents(const std::string& kind, const std::string& alpha, int beta, int d, const std::string& tau,
                  bool as_json) {
  ExponentInputs in;
  if (kind == "darcy")
    in.problem = ProblemKind::darcy;
  else if (kind == "schrodinger")
    in.problem = ProblemKind::schrodinger;
  else
    throw ConfigError("exponents: problem must be darcy or schrodinger");
  in.alpha = Rational::parse(alpha);
  in.beta = beta;
  in.d = d;
  if (!tau.empty()) in.tau = Rational::parse(tau);
  const ExponentTable t = theoretical_exponents(in);
  if (as_json) {
    json arr = json::array();
    for (const auto& e : t.entries)
      arr.push_back({{"name", e.name},
                     {"formula", e.formula},
                     {"value", e.value.str()},
                     {"decimal", e.value.to_double()},
                     {"hypotheses_hold", e.hypotheses_hold},
                     {"caveat", e.caveat}});
    std::cout << arr.dump(2) << "\n";
    return 0;
  }
  for (const auto& e : t.entries) {
    std::printf("%-20s %-10s %.6f  %s%s%s\n", e.name.c_str(), e.value.str().c_str(), e.value.to_double(),
                e.formula.c_str(), e.hypotheses_hold ? "" : "  [caveat: ", e.hypotheses_hold ? "" : (e.caveat + "]").c_str());
  }
  return 0;
}

void print_report(const RateReport& r) {
  for (const auto& pr : r.priors) {
    std::cout << pr.label << ":\n";
    for (const auto& pt : pr.points)
      std::printf("  n=%-6ld survivors=%d  L2 median %.4g (se %.2g)  prediction median %.4g\n", pt.n, pt.surviving,
                  pt.l2, pt.l2_se, pt.prediction);
    if (pr.l2_fit)
      std::printf("  L2 slope %.4f (se %.3f, R^2 %.3f)\n", pr.l2_fit->slope, pr.l2_fit->standard_error,
                  pr.l2_fit->r_squared);
    else
      std::cout << "  " << pr.fit_note << "\n";
  }
  if (!r.smaller_at_largest_n.empty()) std::cout << "smaller L2 median at largest n: " << r.smaller_at_largest_n << "\n";
  for (const auto& f : r.failures) std::cerr << "missing cell: " << f << "\n";
}

int run_plan(ExperimentPlan plan, const Globals& g, bool allow_large) {
  if (g.seed) plan.seed = *g.seed;
  if (g.jobs) plan.jobs = *g.jobs;
  if (g.out) plan.output_dir = *g.out;
  if (allow_large) plan.allow_large = true;
  const RateReport r = run_contraction_experiment(plan);
  emit_results(r, plan.output_dir);
  print_report(r);
  std::cout << "results in " << plan.output_dir.string() << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Deep Gaussian process priors for PDE inverse problems: forward solves, prior draws, rate experiments"};
  app.require_subcommand(1);
  Globals g;
  std::uint64_t seed = 0;
  int jobs = 0;
  std::string out;
  auto* seed_opt = app.add_option("--seed", seed, "Master seed");
  auto* jobs_opt = app.add_option("--jobs", jobs, "Worker threads (0: OpenMP default)")->check(CLI::NonNegativeNumber);
  auto* out_opt = app.add_option("--out", out, "Output directory");

  ProblemArgs fwd_problem;
  std::string theta_stem, truth_kind = "smooth-bump";
  double truth_alpha = 3.0;
  auto* fwd = app.add_subcommand("forward", "Solve one PDE for a truth or a stored field");
  fwd->fallthrough();
  add_problem_options(fwd, fwd_problem);
  fwd->add_option("--theta", theta_stem, "Field file stem (without .json)");
  fwd->add_option("--truth", truth_kind, "Truth kind when no --theta is given");
  fwd->add_option("--alpha", truth_alpha, "Truth smoothness");

  ProblemArgs ps_problem;
  PriorArgs prior_args;
  auto* ps = app.add_subcommand("prior-sample", "Draw from the DGP or baseline prior");
  ps->fallthrough();
  add_problem_options(ps, ps_problem);
  ps->add_option("--type", prior_args.type, "dgp or baseline")->check(CLI::IsMember({"dgp", "baseline"}));
  ps->add_option("--n", prior_args.n, "Sample size the prior is tuned to")->check(CLI::PositiveNumber);
  ps->add_option("--count", prior_args.count, "Number of draws")->check(CLI::PositiveNumber);
  ps->add_option("--beta", prior_args.beta, "Hölder order of the conditioning")->check(CLI::PositiveNumber);
  ps->add_option("--alpha-plus", prior_args.alpha_plus, "Upper end of the smoothness range");
  ps->add_option("--q-max", prior_args.q_max, "Maximal depth")->check(CLI::NonNegativeNumber);
  ps->add_option("--m0", prior_args.m0, "Hölder-ball radius")->check(CLI::PositiveNumber);
  ps->add_option("--tau", prior_args.tau, "Baseline smoothness");

  std::string ex_kind = "darcy", ex_alpha = "3", ex_tau;
  int ex_beta = 2, ex_d = 1;
  bool ex_json = false;
  auto* ex = app.add_subcommand("exponents", "Print the theoretical rate exponents");
  ex->fallthrough();
  ex->add_option("--problem", ex_kind, "darcy or schrodinger");
  ex->add_option("--alpha", ex_alpha, "Smoothness, e.g. 3 or 7/2");
  ex->add_option("--beta", ex_beta, "Hölder order");
  ex->add_option("--d", ex_d, "Dimension");
  ex->add_option("--tau", ex_tau, "Baseline smoothness");
  ex->add_flag("--json", ex_json, "JSON output");

  std::string plan_file;
  bool allow_large = false;
  auto* ct = app.add_subcommand("contract", "Run a contraction-rate experiment plan");
  ct->fallthrough();
  ct->add_option("plan", plan_file, "Plan JSON document")->required();
  ct->add_flag("--allow-large", allow_large, "Lift the desk-scale guard");

  bool lb_allow_large = false;
  auto* lb = app.add_subcommand("lower-bound", "Wavelet-spike GAM comparison of the DGP and baseline priors");
  lb->fallthrough();
  lb->add_flag("--allow-large", lb_allow_large, "Lift the desk-scale guard");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }
  if (*seed_opt) g.seed = seed;
  if (*jobs_opt) g.jobs = jobs;
  if (*out_opt) g.out = out;

  try {
    if (*fwd) return run_forward(g, fwd_problem, theta_stem, truth_kind, truth_alpha);
    if (*ps) return run_prior_sample(g, ps_problem, prior_args);
    if (*ex) return run_exponents(ex_kind, ex_alpha, ex_beta, ex_d, ex_tau, ex_json);
    if (*ct) return run_plan(plan_from_json(read_json_file(plan_file)), g, allow_large);
    if (*lb) return run_plan(lower_bound_preset(), g, lb_allow_large);
  } catch (const ConfigError& e) {
    std::cerr << "configuration error: " << e.what() << "\n";
    return 2;
  } catch (const NumericError& e) {
    std::cerr << "numeric failure: " << e.what() << "\n";
    return 3;
  } catch (const DomainError& e) {
    std::cerr << "numeric failure: " << e.what() << "\n";
    return 3;
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << "configuration error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}

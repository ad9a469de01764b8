#include "dgplab/experiment.hpp"

#include <omp.h>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <map>
#include <memory>
#include <set>
#include <sstream>

#include "dgplab/errors.hpp"

namespace dgplab {

namespace {

std::string to_string(PriorType t) { return t == PriorType::dgp ? "dgp" : "baseline"; }

PriorType parse_prior_type(const std::string& s) {
  if (s == "dgp") return PriorType::dgp;
  if (s == "baseline") return PriorType::baseline;
  throw ConfigError("prior: unknown type '" + s + "' (expected dgp or baseline)");
}

bool valid_label(const std::string& s) {
  if (s.empty()) return false;
  return std::all_of(s.begin(), s.end(), [](char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '.' || c == '+' || c == '-';
  });
}

void check_keys(const json& j, const std::set<std::string>& allowed, const std::string& where) {
  if (!j.is_object()) throw ConfigError(where + ": expected an object");
  for (const auto& [k, v] : j.items())
    if (!allowed.count(k)) throw ConfigError(where + ": unknown key '" + k + "'");
}

int problem_dim(const json& problem) { return problem.value("d", 1); }

}  // namespace

void ExperimentPlan::validate(const DeskLimits& limits) const {
  const int d = problem_dim(problem);
  if (d < 1) throw ConfigError("plan: problem dimension must be >= 1");
  if (truth.d != d) throw ConfigError("plan: truth dimension differs from the problem dimension");
  if (n_grid.size() < 3) throw ConfigError("plan: n_grid needs at least 3 values for slope fitting");
  for (std::size_t i = 0; i < n_grid.size(); ++i) {
    if (n_grid[i] < 2) throw ConfigError("plan: every n must be >= 2");
    if (i > 0 && n_grid[i] <= n_grid[i - 1]) throw ConfigError("plan: n_grid must be strictly increasing");
  }
  if (priors.empty()) throw ConfigError("plan: at least one prior is required");
  std::set<std::string> labels;
  for (const auto& p : priors) {
    if (!valid_label(p.label)) throw ConfigError("plan: prior label '" + p.label + "' must match [A-Za-z0-9_.+-]+");
    if (!labels.insert(p.label).second) throw ConfigError("plan: duplicate prior label '" + p.label + "'");
    if (p.type == PriorType::baseline) p.baseline.validate(beta, d);
    if (p.type == PriorType::dgp) {
      if (!(p.alpha_plus > beta + 0.5 * d)) throw ConfigError("plan: prior '" + p.label + "' needs alpha_plus > beta + d/2");
      if (p.q_max < 0) throw ConfigError("plan: q_max must be >= 0");
      if (p.m0 && !(*p.m0 > 0.0)) throw ConfigError("plan: m0 must be > 0");
    }
  }
  if (replicates < 1) throw ConfigError("plan: replicates must be >= 1");
  if (beta < 1) throw ConfigError("plan: beta must be >= 1");
  if (schedule.burn_in < 0 || schedule.samples < 1 || schedule.thin < 1)
    throw ConfigError("plan: schedule needs burn_in >= 0, samples >= 1, thin >= 1");
  if (jobs < 0) throw ConfigError("plan: jobs must be >= 0");
  if (!allow_large) {
    if (d > limits.max_d) throw ConfigError("plan: d > " + std::to_string(limits.max_d) + " needs allow_large");
    if (n_grid.back() > limits.max_n)
      throw ConfigError("plan: n > " + std::to_string(limits.max_n) + " needs allow_large");
    if (replicates > limits.max_replicates)
      throw ConfigError("plan: replicates > " + std::to_string(limits.max_replicates) + " needs allow_large");
    const long solves = estimated_forward_solves();
    if (solves > limits.max_forward_solves)
      throw ConfigError("plan: an estimated " + std::to_string(solves) + " forward solves exceeds the cap of " +
                        std::to_string(limits.max_forward_solves) + "; set allow_large to proceed");
  }
}

long ExperimentPlan::estimated_forward_solves() const {
  const long iters = schedule.burn_in + schedule.samples;
  const long moves = schedule.structure_every > 0 ? iters / schedule.structure_every : 0;
  return static_cast<long>(priors.size()) * static_cast<long>(n_grid.size()) * replicates * (iters + moves + 1);
}

ExperimentPlan plan_from_json(const json& j) {
  check_keys(j,
             {"problem", "truth", "n_grid", "priors", "replicates", "schedule", "output_dir", "seed", "beta",
              "allow_large", "jobs", "guide_exponents"},
             "plan");
  try {
    ExperimentPlan p;
    if (j.contains("problem")) p.problem = j.at("problem");
    const int d = problem_dim(p.problem);
    if (j.contains("truth")) {
      const json& t = j.at("truth");
      check_keys(t, {"kind", "alpha", "radius", "d", "amplitude", "spike_level", "n_for_level", "beta"}, "truth");
      p.truth.kind = parse_truth_kind(t.value("kind", "smooth-bump"));
      p.truth.alpha = t.value("alpha", p.truth.alpha);
      p.truth.radius = t.value("radius", p.truth.radius);
      p.truth.d = t.value("d", d);
      if (t.contains("amplitude")) p.truth.amplitude = t.at("amplitude").get<double>();
      if (t.contains("spike_level")) p.truth.spike_level = t.at("spike_level").get<int>();
      if (t.contains("n_for_level")) p.truth.n_for_level = t.at("n_for_level").get<long>();
      if (t.contains("beta")) p.truth.beta = t.at("beta").get<int>();
    } else {
      p.truth.d = d;
    }
    p.n_grid = j.value("n_grid", std::vector<long>{});
    if (j.contains("priors")) {
      for (const json& pj : j.at("priors")) {
        check_keys(pj, {"label", "type", "tau", "custom_exponent", "truncation", "alpha_plus", "q_max", "m0"}, "prior");
        PriorSpec ps;
        ps.type = parse_prior_type(pj.value("type", "dgp"));
        ps.label = pj.value("label", to_string(ps.type));
        ps.baseline.tau = pj.value("tau", ps.baseline.tau);
        if (pj.contains("custom_exponent")) ps.baseline.custom_exponent = pj.at("custom_exponent").get<double>();
        ps.baseline.truncation = pj.value("truncation", 0);
        ps.alpha_plus = pj.value("alpha_plus", ps.alpha_plus);
        ps.q_max = pj.value("q_max", ps.q_max);
        if (pj.contains("m0")) ps.m0 = pj.at("m0").get<double>();
        p.priors.push_back(ps);
      }
    }
    p.replicates = j.value("replicates", p.replicates);
    if (j.contains("schedule")) {
      const json& s = j.at("schedule");
      check_keys(s, {"burn_in", "samples", "thin", "initial_step", "target_acceptance", "structure_every", "adapt"},
                 "schedule");
      p.schedule.burn_in = s.value("burn_in", 0L);
      p.schedule.samples = s.value("samples", 0L);
      p.schedule.thin = s.value("thin", 1L);
      p.schedule.initial_step = s.value("initial_step", p.schedule.initial_step);
      p.schedule.target_acceptance = s.value("target_acceptance", p.schedule.target_acceptance);
      p.schedule.structure_every = s.value("structure_every", 0L);
      p.schedule.adapt = s.value("adapt", true);
    }
    p.output_dir = j.value("output_dir", p.output_dir.string());
    p.seed = j.value("seed", p.seed);
    p.beta = j.value("beta", p.beta);
    p.allow_large = j.value("allow_large", false);
    p.jobs = j.value("jobs", 0);
    p.guide_exponents = j.value("guide_exponents", std::vector<std::string>{});
    return p;
  } catch (const json::exception& e) {
    throw ConfigError(std::string("plan: ") + e.what());
  }
}

json plan_to_json(const ExperimentPlan& p) {
  json truth = {{"kind", to_string(p.truth.kind)}, {"alpha", p.truth.alpha}, {"radius", p.truth.radius}, {"d", p.truth.d}};
  if (p.truth.amplitude) truth["amplitude"] = *p.truth.amplitude;
  if (p.truth.spike_level) truth["spike_level"] = *p.truth.spike_level;
  if (p.truth.n_for_level) truth["n_for_level"] = *p.truth.n_for_level;
  if (p.truth.beta) truth["beta"] = *p.truth.beta;
  json priors = json::array();
  for (const auto& ps : p.priors) {
    json pj = {{"label", ps.label}, {"type", to_string(ps.type)}};
    if (ps.type == PriorType::baseline) {
      pj["tau"] = ps.baseline.tau;
      if (ps.baseline.custom_exponent) pj["custom_exponent"] = *ps.baseline.custom_exponent;
      pj["truncation"] = ps.baseline.truncation;
    } else {
      pj["alpha_plus"] = ps.alpha_plus;
      pj["q_max"] = ps.q_max;
      if (ps.m0) pj["m0"] = *ps.m0;
    }
    priors.push_back(pj);
  }
  const ChainSchedule& s = p.schedule;
  return {{"problem", p.problem},
          {"truth", truth},
          {"n_grid", p.n_grid},
          {"priors", priors},
          {"replicates", p.replicates},
          {"schedule",
           {{"burn_in", s.burn_in},
            {"samples", s.samples},
            {"thin", s.thin},
            {"initial_step", s.initial_step},
            {"target_acceptance", s.target_acceptance},
            {"structure_every", s.structure_every},
            {"adapt", s.adapt}}},
          {"output_dir", p.output_dir.string()},
          {"seed", p.seed},
          {"beta", p.beta},
          {"allow_large", p.allow_large},
          {"jobs", p.jobs},
          {"guide_exponents", p.guide_exponents}};
}

ExperimentPlan lower_bound_preset() {
  ExperimentPlan p;
  p.problem = {{"kind", "darcy"}, {"d", 2}, {"points", 33}};
  p.truth.kind = TruthKind::wavelet_spike_gam;
  p.truth.alpha = 4.0;
  p.truth.radius = 1.0;
  p.truth.d = 2;
  p.truth.beta = 2;
  p.beta = 2;
  p.n_grid = {250, 1000, 4000};
  p.truth.n_for_level = p.n_grid.back();
  PriorSpec dgp;
  dgp.label = "dgp";
  dgp.alpha_plus = 5.0;
  dgp.q_max = 1;
  PriorSpec base;
  base.label = "baseline-tau4";
  base.type = PriorType::baseline;
  base.baseline.tau = 4.0;
  p.priors = {dgp, base};
  p.replicates = 2;
  p.schedule.burn_in = 1000;
  p.schedule.samples = 1000;
  p.schedule.thin = 10;
  p.schedule.structure_every = 10;
  p.guide_exponents = {"dgp_l2_gam", "baseline_lower", "baseline_lower_tau"};
  p.output_dir = "lower-bound";
  return p;
}

ExperimentPlan smoke_preset() {
  ExperimentPlan p;
  p.problem = {{"kind", "darcy"}, {"d", 1}, {"points", 129}};
  p.truth.kind = TruthKind::smooth_bump;
  p.truth.alpha = 3.0;
  p.truth.radius = 10.0;
  p.truth.d = 1;
  p.beta = 2;
  p.n_grid = {250, 1000, 4000};
  PriorSpec dgp;
  dgp.label = "dgp";
  dgp.q_max = 1;
  p.priors = {dgp};
  p.replicates = 4;
  p.schedule.burn_in = 4000;
  p.schedule.samples = 8000;
  p.schedule.thin = 20;
  p.schedule.structure_every = 20;
  p.guide_exponents = {"dgp_l2"};
  p.output_dir = "smoke";
  return p;
}

SlopeFit fit_slope(const std::vector<double>& n, const std::vector<double>& err) {
  if (n.size() != err.size()) throw ConfigError("fit_slope: size mismatch");
  if (n.size() < 3) throw ConfigError("fit_slope: at least 3 points are required");
  const std::size_t m = n.size();
  std::vector<double> x(m), y(m);
  for (std::size_t i = 0; i < m; ++i) {
    if (!(n[i] > 0.0) || !(err[i] > 0.0)) throw ConfigError("fit_slope: n and errors must be positive");
    x[i] = std::log(n[i]);
    y[i] = std::log(err[i]);
  }
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= m;
  my /= m;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (!(sxx > 0.0)) throw ConfigError("fit_slope: n values must not all coincide");
  SlopeFit f;
  f.points = static_cast<int>(m);
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  double rss = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    const double r = y[i] - f.intercept - f.slope * x[i];
    rss += r * r;
  }
  f.standard_error = m > 2 ? std::sqrt(rss / static_cast<double>(m - 2) / sxx) : 0.0;
  f.r_squared = syy > 0.0 ? 1.0 - rss / syy : 1.0;
  return f;
}

namespace {

std::string modal(const std::vector<std::string>& v) {
  std::map<std::string, long> count;
  for (const auto& s : v) ++count[s];
  std::string best;
  long best_n = -1;
  for (const auto& [k, c] : count)
    if (c > best_n) {
      best = k;
      best_n = c;
    }
  return best;
}

std::pair<double, double> median_and_se(std::vector<double> v) {
  if (v.empty()) return {0.0, 0.0};
  const double med = quantiles(v).median;
  if (v.size() < 2) return {med, 0.0};
  double mean = 0.0;
  for (double x : v) mean += x;
  mean /= v.size();
  double ss = 0.0;
  for (double x : v) ss += (x - mean) * (x - mean);
  return {med, std::sqrt(ss / (v.size() - 1) / v.size())};
}

}  // namespace

void summarize(RateReport& report) {
  report.priors.clear();
  report.smaller_at_largest_n.clear();
  const ExperimentPlan& plan = report.plan;
  for (const auto& ps : plan.priors) {
    PriorRate pr;
    pr.label = ps.label;
    pr.type = ps.type;
    std::vector<double> ns, l2s, preds;
    for (long n : plan.n_grid) {
      std::vector<double> l2, l2q, pred, predq;
      for (const auto& c : report.cells)
        if (c.ok && c.prior == ps.label && c.n == n) {
          l2.push_back(c.l2_median);
          l2q.push_back(c.l2_q90);
          pred.push_back(c.prediction_median);
          predq.push_back(c.prediction_q90);
        }
      RatePoint pt;
      pt.n = n;
      pt.surviving = static_cast<int>(l2.size());
      if (pt.surviving > 0) {
        std::tie(pt.l2, pt.l2_se) = median_and_se(l2);
        std::tie(pt.prediction, pt.prediction_se) = median_and_se(pred);
        pt.l2_q90 = quantiles(l2q).median;
        pt.prediction_q90 = quantiles(predq).median;
        ns.push_back(static_cast<double>(n));
        l2s.push_back(pt.l2);
        preds.push_back(pt.prediction);
      }
      pr.points.push_back(pt);
    }
    if (ns.size() >= 3) {
      try {
        pr.l2_fit = fit_slope(ns, l2s);
        pr.prediction_fit = fit_slope(ns, preds);
      } catch (const ConfigError& e) {
        pr.fit_note = e.what();
      }
    } else {
      pr.fit_note = "fewer than 3 surviving n values; no slope fitted";
    }
    report.priors.push_back(std::move(pr));
  }
  // Comparison at the largest n, reported rather than asserted.
  double best = 0.0;
  int survivors = 0;
  for (const auto& pr : report.priors) {
    const RatePoint& last = pr.points.back();
    if (last.surviving == 0) continue;
    ++survivors;
    if (report.smaller_at_largest_n.empty() || last.l2 < best) {
      best = last.l2;
      report.smaller_at_largest_n = pr.label;
    }
  }
  if (survivors < 2) report.smaller_at_largest_n.clear();
}

RateReport run_contraction_experiment(const ExperimentPlan& plan_in) {
  ExperimentPlan plan = plan_in;
  if (plan.truth.kind == TruthKind::wavelet_spike_gam && !plan.truth.spike_level && !plan.truth.n_for_level &&
      !plan.n_grid.empty())
    plan.truth.n_for_level = plan.n_grid.back();
  plan.validate();

  const Problem problem = problem_from_json(plan.problem);
  const Grid& grid = problem_grid(problem);
  const Truth truth = build_truth(plan.truth, grid);
  const Reference ref{truth.theta, forward(truth.theta, problem)};
  const double truth_holder = c_beta_norm(truth.theta, plan.beta);

  RateReport report;
  report.plan = plan;
  report.truth_description = truth.description;
  report.truth_norm_proxy = truth.norm_proxy;

  const ProblemKind kind = problem_kind(problem);
  if (kind != ProblemKind::identity) {
    ExponentInputs in;
    in.problem = kind;
    in.alpha = Rational::parse(format_double(plan.truth.alpha));
    in.beta = plan.beta;
    in.d = grid.dim();
    for (const auto& ps : plan.priors)
      if (ps.type == PriorType::baseline) {
        in.tau = Rational::parse(format_double(ps.baseline.tau));
        break;
      }
    try {
      report.exponents = theoretical_exponents(in);
    } catch (const ConfigError& e) {
      report.failures.push_back(std::string("exponents unavailable: ") + e.what());
    }
  }
  for (const auto& g : plan.guide_exponents)
    if (!report.exponents || !report.exponents->has(g))
      throw ConfigError("plan: guide exponent '" + g + "' is not defined for this problem");

  const int P = static_cast<int>(plan.priors.size());
  const int K = static_cast<int>(plan.n_grid.size());
  const int R = plan.replicates;

  // Datasets are shared across priors so the comparison is paired.
  std::vector<Dataset> data(static_cast<std::size_t>(K) * R);
  for (int k = 0; k < K; ++k)
    for (int r = 0; r < R; ++r) {
      RngStream rng(StreamKey{plan.seed, stream_module::data, static_cast<std::uint64_t>(r), static_cast<std::uint64_t>(k)});
      data[k * R + r] = generate_data(truth.theta, plan.n_grid[k], problem, rng);
      data[k * R + r].truth_ref = truth.description;
    }

  std::vector<std::shared_ptr<const DgpPrior>> dgps(static_cast<std::size_t>(P) * K);
  for (int p = 0; p < P; ++p) {
    const PriorSpec& ps = plan.priors[p];
    if (ps.type != PriorType::dgp) continue;
    DgpConfig cfg;
    cfg.hyper = default_hyperprior(grid.dim(), plan.beta, ps.alpha_plus, ps.q_max);
    cfg.ambient = grid;
    cfg.m0 = ps.m0 ? *ps.m0 : std::max(1.0, 2.0 * truth_holder);
    for (int k = 0; k < K; ++k) dgps[p * K + k] = std::make_shared<const DgpPrior>(cfg, plan.n_grid[k]);
  }

  std::vector<CellResult> cells(static_cast<std::size_t>(P) * K * R);
  const int total = P * K * R;
  const int threads = plan.jobs > 0 ? plan.jobs : omp_get_max_threads();
#pragma omp parallel for schedule(dynamic) num_threads(threads)
  for (int c = 0; c < total; ++c) {
    const int r = c % R;
    const int k = (c / R) % K;
    const int p = c / (R * K);
    const PriorSpec& ps = plan.priors[p];
    CellResult& out = cells[c];
    out.prior = ps.label;
    out.n = plan.n_grid[k];
    out.replicate = r;
    try {
      const Dataset& d = data[k * R + r];
      const PosteriorModel model = ps.type == PriorType::dgp
                                       ? PosteriorModel(problem, d, dgps[p * K + k])
                                       : PosteriorModel(problem, d, ps.baseline, plan.n_grid[k]);
      RngStream rng(StreamKey{plan.seed, stream_module::chain, static_cast<std::uint64_t>(r),
                              static_cast<std::uint64_t>(p * 1000 + k)});
      ChainState init = model.prior_state(rng);
      const ChainSummary s = run_chain(std::move(init), model, plan.schedule, rng, ref, plan.beta);
      out.l2_median = s.l2_quantiles.median;
      out.l2_q90 = s.l2_quantiles.q90;
      out.prediction_median = s.prediction_quantiles.median;
      out.prediction_q90 = s.prediction_quantiles.q90;
      out.pcn_acceptance = s.pcn_acceptance;
      out.structure_acceptance = s.structure_acceptance;
      out.modal_structure = modal(s.structures);
      out.ok = std::isfinite(out.l2_median) && std::isfinite(out.prediction_median);
      if (!out.ok) out.note = "non-finite error summary";
    } catch (const std::exception& e) {
      out.ok = false;
      out.note = e.what();
    }
  }

  report.cells = std::move(cells);
  for (const auto& c : report.cells)
    if (!c.ok)
      report.failures.push_back(c.prior + " n=" + std::to_string(c.n) + " r=" + std::to_string(c.replicate) + ": " +
                                c.note);
  summarize(report);
  return report;
}

namespace {

std::string csv_quote(const std::string& s) {
  std::string o = "\"";
  for (char c : s) {
    if (c == '"') o += '"';
    o += c;
  }
  return o + '"';
}

std::vector<std::vector<std::string>> parse_csv(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> row;
  std::string cell;
  bool quoted = false, any = false;
  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < text.size() && text[i + 1] == '"') {
          cell += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        cell += c;
      }
      continue;
    }
    if (c == '"') {
      quoted = true;
      any = true;
    } else if (c == ',') {
      row.push_back(std::move(cell));
      cell.clear();
      any = true;
    } else if (c == '\n') {
      row.push_back(std::move(cell));
      cell.clear();
      rows.push_back(std::move(row));
      row.clear();
      any = false;
    } else if (c != '\r') {
      cell += c;
      any = true;
    }
  }
  if (quoted) throw ConfigError("csv: unterminated quoted field");
  if (any) {
    row.push_back(std::move(cell));
    rows.push_back(std::move(row));
  }
  return rows;
}

constexpr const char* kCsvHeader =
    "prior,n,replicate,status,l2_median,l2_q90,prediction_median,prediction_q90,pcn_acceptance,"
    "structure_acceptance,modal_structure,note";

double parse_number(const std::string& s) {
  double v = 0.0;
  const auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || end != s.data() + s.size()) throw ConfigError("csv: invalid number '" + s + "'");
  return v;
}

}  // namespace

std::string cells_to_csv(const std::vector<CellResult>& cells) {
  std::ostringstream o;
  o << kCsvHeader << '\n';
  for (const auto& c : cells) {
    o << c.prior << ',' << c.n << ',' << c.replicate << ',' << (c.ok ? "ok" : "missing") << ','
      << format_double(c.l2_median) << ',' << format_double(c.l2_q90) << ',' << format_double(c.prediction_median)
      << ',' << format_double(c.prediction_q90) << ',' << format_double(c.pcn_acceptance) << ','
      << format_double(c.structure_acceptance) << ',' << csv_quote(c.modal_structure) << ',' << csv_quote(c.note)
      << '\n';
  }
  return o.str();
}

std::vector<CellResult> cells_from_csv(const std::string& text) {
  const auto rows = parse_csv(text);
  if (rows.empty()) throw ConfigError("csv: missing header");
  std::ostringstream h;
  for (std::size_t i = 0; i < rows[0].size(); ++i) h << (i ? "," : "") << rows[0][i];
  if (h.str() != kCsvHeader) throw ConfigError("csv: unexpected header");
  std::vector<CellResult> out;
  for (std::size_t r = 1; r < rows.size(); ++r) {
    const auto& f = rows[r];
    if (f.size() != 12) throw ConfigError("csv: row " + std::to_string(r) + " has " + std::to_string(f.size()) + " fields");
    CellResult c;
    c.prior = f[0];
    c.n = std::stol(f[1]);
    c.replicate = std::stoi(f[2]);
    if (f[3] != "ok" && f[3] != "missing") throw ConfigError("csv: bad status '" + f[3] + "'");
    c.ok = f[3] == "ok";
    c.l2_median = parse_number(f[4]);
    c.l2_q90 = parse_number(f[5]);
    c.prediction_median = parse_number(f[6]);
    c.prediction_q90 = parse_number(f[7]);
    c.pcn_acceptance = parse_number(f[8]);
    c.structure_acceptance = parse_number(f[9]);
    c.modal_structure = f[10];
    c.note = f[11];
    out.push_back(std::move(c));
  }
  return out;
}

namespace {

json fit_json(const std::optional<SlopeFit>& f) {
  if (!f) return nullptr;
  return {{"slope", f->slope},
          {"intercept", f->intercept},
          {"standard_error", f->standard_error},
          {"r_squared", f->r_squared},
          {"points", f->points}};
}

}  // namespace

json report_to_json(const RateReport& report) {
  json priors = json::array();
  for (const auto& pr : report.priors) {
    json pts = json::array();
    for (const auto& pt : pr.points)
      pts.push_back({{"n", pt.n},
                     {"surviving", pt.surviving},
                     {"l2_median", pt.l2},
                     {"l2_se", pt.l2_se},
                     {"l2_q90", pt.l2_q90},
                     {"prediction_median", pt.prediction},
                     {"prediction_se", pt.prediction_se},
                     {"prediction_q90", pt.prediction_q90}});
    json pj = {{"label", pr.label},
               {"type", to_string(pr.type)},
               {"points", pts},
               {"l2_fit", fit_json(pr.l2_fit)},
               {"prediction_fit", fit_json(pr.prediction_fit)}};
    if (!pr.fit_note.empty()) pj["fit_note"] = pr.fit_note;
    priors.push_back(pj);
  }
  json exps = nullptr;
  if (report.exponents) {
    exps = json::array();
    for (const auto& e : report.exponents->entries)
      exps.push_back({{"name", e.name},
                      {"formula", e.formula},
                      {"value", e.value.str()},
                      {"decimal", e.value.to_double()},
                      {"hypotheses_hold", e.hypotheses_hold},
                      {"caveat", e.caveat}});
  }
  json j = {{"plan", plan_to_json(report.plan)},
            {"truth", {{"description", report.truth_description}, {"norm_proxy", report.truth_norm_proxy}}},
            {"priors", priors},
            {"exponents", exps},
            {"failures", report.failures}};
  if (!report.smaller_at_largest_n.empty()) j["smaller_l2_at_largest_n"] = report.smaller_at_largest_n;
  return j;
}

std::string rate_plot_svg(const RateReport& report) {
  constexpr double W = 640, H = 420, left = 70, right = 160, top = 30, bottom = 50;
  const double pw = W - left - right, ph = H - top - bottom;
  std::vector<double> xs, ys;
  for (long n : report.plan.n_grid) xs.push_back(std::log10(static_cast<double>(n)));
  for (const auto& pr : report.priors)
    for (const auto& pt : pr.points)
      if (pt.surviving > 0) ys.push_back(std::log10(pt.l2));
  double x0 = 0, x1 = 1, y0 = -1, y1 = 0;
  if (!xs.empty()) {
    x0 = *std::min_element(xs.begin(), xs.end()) - 0.1;
    x1 = *std::max_element(xs.begin(), xs.end()) + 0.1;
  }
  if (!ys.empty()) {
    y0 = *std::min_element(ys.begin(), ys.end()) - 0.3;
    y1 = *std::max_element(ys.begin(), ys.end()) + 0.3;
  }
  auto X = [&](double lx) { return left + (lx - x0) / (x1 - x0) * pw; };
  auto Y = [&](double ly) { return top + (y1 - ly) / (y1 - y0) * ph; };
  static const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"};

  std::ostringstream o;
  o.precision(6);
  o << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H << "\">\n";
  o << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  o << "<rect x=\"" << left << "\" y=\"" << top << "\" width=\"" << pw << "\" height=\"" << ph
    << "\" fill=\"none\" stroke=\"black\"/>\n";
  o << "<text x=\"" << left + pw / 2 << "\" y=\"" << H - 12 << "\" text-anchor=\"middle\">log10 n</text>\n";
  o << "<text x=\"16\" y=\"" << top + ph / 2 << "\" transform=\"rotate(-90 16 " << top + ph / 2
    << ")\" text-anchor=\"middle\">log10 posterior median L2 error</text>\n";
  for (double lx : xs)
    o << "<text x=\"" << X(lx) << "\" y=\"" << top + ph + 18 << "\" text-anchor=\"middle\" font-size=\"11\">"
      << format_double(std::round(lx * 100) / 100) << "</text>\n";

  // Fits and points per prior.
  int idx = 0;
  double legend_y = top + 10;
  for (const auto& pr : report.priors) {
    const char* col = colors[idx++ % 6];
    for (const auto& pt : pr.points) {
      if (pt.surviving == 0) continue;
      o << "<circle class=\"point\" cx=\"" << X(std::log10(static_cast<double>(pt.n))) << "\" cy=\""
        << Y(std::log10(pt.l2)) << "\" r=\"4\" fill=\"" << col << "\"/>\n";
    }
    if (pr.l2_fit) {
      // log10 err = (a + b ln n)/ln 10.
      auto fy = [&](double lx) { return (pr.l2_fit->intercept + pr.l2_fit->slope * lx * std::log(10.0)) / std::log(10.0); };
      o << "<line class=\"fit\" x1=\"" << X(x0) << "\" y1=\"" << Y(fy(x0)) << "\" x2=\"" << X(x1) << "\" y2=\""
        << Y(fy(x1)) << "\" stroke=\"" << col << "\" stroke-width=\"2\"/>\n";
    }
    o << "<text x=\"" << left + pw + 10 << "\" y=\"" << legend_y << "\" fill=\"" << col << "\" font-size=\"12\">"
      << pr.label;
    if (pr.l2_fit) o << " slope " << format_double(std::round(pr.l2_fit->slope * 1000) / 1000);
    o << "</text>\n";
    legend_y += 16;
  }

  // Guide lines through the first surviving point of the first prior.
  double ax = 0.5 * (x0 + x1), ay = 0.5 * (y0 + y1);
  for (const auto& pr : report.priors) {
    bool found = false;
    for (const auto& pt : pr.points)
      if (pt.surviving > 0) {
        ax = std::log10(static_cast<double>(pt.n));
        ay = std::log10(pt.l2);
        found = true;
        break;
      }
    if (found) break;
  }
  for (const auto& g : report.plan.guide_exponents) {
    if (!report.exponents || !report.exponents->has(g)) continue;
    const double e = report.exponents->get(g).value.to_double();
    auto gy = [&](double lx) { return ay - e * (lx - ax); };
    o << "<line class=\"guide\" data-exponent=\"" << g << "\" x1=\"" << X(x0) << "\" y1=\"" << Y(gy(x0))
      << "\" x2=\"" << X(x1) << "\" y2=\"" << Y(gy(x1)) << "\" stroke=\"gray\" stroke-dasharray=\"6 4\"/>\n";
    o << "<text x=\"" << left + pw + 10 << "\" y=\"" << legend_y << "\" fill=\"gray\" font-size=\"12\">" << g << " n^-"
      << report.exponents->get(g).value.str() << "</text>\n";
    legend_y += 16;
  }
  o << "</svg>\n";
  return o.str();
}

void emit_results(const RateReport& report, const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw ConfigError("cannot create output directory " + dir.string() + ": " + ec.message());
  write_text_file(dir / "results.csv", cells_to_csv(report.cells));
  write_text_file(dir / "summary.json", report_to_json(report).dump(2) + "\n");
  write_text_file(dir / "rates.svg", rate_plot_svg(report));
}

}  // namespace dgplab

// Acceptance runner: one [PASS]/[FAIL] line per criterion.
//
//   acceptance <1..11 | all> [output-dir]

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "conjugate.hpp"
#include "dgplab/dgp.hpp"
#include "dgplab/elementary.hpp"
#include "dgplab/experiment.hpp"
#include "dgplab/exponents.hpp"
#include "dgplab/mcmc.hpp"
#include "dgplab/pde.hpp"
#include "dgplab/posterior.hpp"
#include "dgplab/structure.hpp"
#include "support.hpp"

using namespace dgplab;
using namespace dgplab::testing;

namespace {

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail << " FAILED(" << what << ")";
    }
  }
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::filesystem::path g_out = "acceptance_runs";

Field scaled_to_sup(Field f, double target) {
  const double s = sup_norm(f);
  if (s > 0.0)
    for (std::size_t i = 0; i < f.size(); ++i) f[i] *= target / s;
  return f;
}

// ---------------------------------------------------------------------------

Outcome criterion1() {
  Outcome o;
  const auto t0 = Clock::now();
  const std::vector<int> ms{33, 65, 129};
  std::vector<double> ed, es;
  for (int m : ms) {
    ed.push_back(darcy_manufactured_error(m));
    es.push_back(schrodinger_manufactured_error(m));
  }
  const double sd = refinement_slope(ms, ed), ss = refinement_slope(ms, es);
  const double secs = seconds_since(t0);
  o.detail << "Darcy slope " << sd << ", Schrödinger slope " << ss << " (target 2 +/- 0.3), " << secs << " s";
  o.require(std::abs(sd - 2.0) <= 0.3, "Darcy slope");
  o.require(std::abs(ss - 2.0) <= 0.3, "Schrödinger slope");
  o.require(secs < 10.0, "runtime");
  return o;
}

Outcome criterion2() {
  Outcome o;
  RngStream rng(StreamKey{2, stream_module::test, 0, 0});
  double worst = -1e300;
  int violations = 0;
  for (int k = 0; k < 200; ++k) {
    const int d = k % 2 ? 2 : 1;
    const Grid g = Grid::cube(d, d == 1 ? 129 : 33);
    const Field theta = random_smooth_field(g, rng, 3.0);
    SchrodingerConfig cfg;
    cfg.grid = g;
    const Field wiggle = scaled_to_sup(random_smooth_field(g, rng, 1.0), 0.9 * rng.uniform());
    cfg.boundary = Field::from_function(g, [](std::span<const double>) { return 1.0; }) + wiggle;
    cfg.h_min = 0.05;
    const Field u = forward(theta, cfg);
    double hmax = 0.0;
    std::vector<int> idx(d);
    for (std::size_t i = 0; i < g.size(); ++i) {
      g.unflatten(i, idx);
      bool on_boundary = false;
      for (int a = 0; a < d; ++a) on_boundary |= idx[a] == 0 || idx[a] == g.points_per_axis() - 1;
      if (on_boundary) hmax = std::max(hmax, std::abs(cfg.boundary[i]));
    }
    const double gap = sup_norm(u) - hmax;
    worst = std::max(worst, gap);
    if (gap > 1e-10) ++violations;
  }
  o.detail << "200 inputs (d = 1, 2), max(||u||_inf - ||h||_inf) = " << worst << ", violations " << violations;
  o.require(violations == 0, "maximum principle");
  return o;
}

Outcome criterion3() {
  Outcome o;
  const Grid g = Grid::cube(1, 129);
  const DarcyConfig cfg{g, Field(g, 1.0), 1.0, 1.0, {}};
  RngStream rng(StreamKey{3, stream_module::test, 0, 0});
  double worst_z = 0.0, worst_h = 0.0;
  int kl_fail = 0, h_fail = 0;
  for (int k = 0; k < 20; ++k) {
    const Field t1 = random_smooth_field(g, rng, 2.0), t2 = random_smooth_field(g, rng, 2.0);
    const Field u1 = forward(t1, cfg), u2 = forward(t2, cfg);
    const DistanceReport r = distances_from_forward(u1, u2);
    const MonteCarloEstimate mc = monte_carlo_kl(u1, u2, 100000, rng);
    const double z = std::abs(mc.mean - 0.5 * r.prediction_risk_sq) / mc.standard_error;
    worst_z = std::max(worst_z, z);
    if (z > 3.0) ++kl_fail;
    const double ratio = r.hellinger_sq / (0.25 * r.prediction_risk_sq);
    worst_h = std::max(worst_h, ratio);
    if (!(r.hellinger_sq <= 0.25 * r.prediction_risk_sq)) ++h_fail;
  }
  o.detail << "20 Darcy pairs, 1e5 draws: max |MC - risk/2| = " << worst_z << " SE (limit 3), max h^2/(risk/4) = "
           << worst_h;
  o.require(kl_fail == 0, "KL within 3 SE");
  o.require(h_fail == 0, "Hellinger bound");
  return o;
}

Outcome criterion4() {
  Outcome o;
  struct Case {
    int t;
    long n;
    double alpha;
    std::size_t a, b;
  };
  // Inner-layer grids: 129 points for t = 1, 65 x 65 for t = 2.
  const std::vector<Case> cases{{1, 500, 2.5, 40, 70}, {2, 300, 3.0, 65 * 32 + 32, 65 * 20 + 41}};
  RngStream rng(StreamKey{4, stream_module::test, 0, 0});
  double worst = 0.0, worst_scale = 0.0;
  for (const Case& c : cases) {
    ElementaryConfig cfg;
    cfg.rate = {c.n, c.alpha, c.t};
    cfg.kind = LayerKind::inner;
    cfg.basis = make_layer_space(c.t, false, Grid::cube(c.t, 9)).basis;
    const SeriesBasis& B = *cfg.basis;
    const double s = rescale_factor(cfg.rate);
    const std::vector<double> w = B.weights(c.alpha);
    std::vector<double> xa(c.t), xb(c.t);
    B.grid().point(c.a, xa);
    B.grid().point(c.b, xb);
    double va = 0.0, vb = 0.0, cab = 0.0;
    for (std::size_t k = 0; k < B.size(); ++k) {
      const double ea = B.evaluate(k, xa), eb = B.evaluate(k, xb);
      va += w[k] * ea * ea;
      vb += w[k] * eb * eb;
      cab += w[k] * ea * eb;
    }
    // Oracle for the rescaled law: raw series sums times the squared factor.
    va *= s * s;
    vb *= s * s;
    cab *= s * s;
    std::vector<double> pa, pb, pab;
    for (int r = 0; r < 20000; ++r) {
      const RawDraw raw = sample_raw(cfg, rng);
      const Field f = layer_field(cfg, raw.coefficients);
      for (std::size_t i : {c.a, c.b})
        worst_scale = std::max(worst_scale, std::abs(f[i] - s * raw.field[i]) / (std::abs(s * raw.field[i]) + 1e-300));
      pa.push_back(f[c.a] * f[c.a]);
      pb.push_back(f[c.b] * f[c.b]);
      pab.push_back(f[c.a] * f[c.b]);
    }
    for (auto [v, oracle] : {std::pair{&pa, va}, std::pair{&pb, vb}, std::pair{&pab, cab}}) {
      const MeanSe m = mean_se(*v);
      const double z = std::abs(m.mean - oracle) / m.se;
      worst = std::max(worst, z);
      o.require(z <= 3.0, "t=" + std::to_string(c.t) + " moment");
    }
  }
  o.detail << "t = 1, 2 at 2e4 draws: max |empirical - series| = " << worst
           << " SE (limit 3); rescaled vs factor * raw max rel. diff " << worst_scale;
  o.require(worst_scale < 1e-12, "rescaling factor");
  return o;
}

Outcome criterion5() {
  Outcome o;
  ElementaryConfig cfg;
  cfg.beta = 1;
  cfg.m0 = 2.0;
  cfg.kind = LayerKind::inner;
  cfg.basis = make_layer_space(1, false, Grid::cube(1, 9)).basis;
  std::vector<AcceptanceEstimate> est;
  for (long n : {100L, 1000L, 10000L}) {
    cfg.rate = {n, 3.0, 1};
    RngStream rng(StreamKey{5, stream_module::test, static_cast<std::uint64_t>(n), 0});
    est.push_back(estimate_acceptance(cfg, 10000, rng));
  }
  o.detail << "acceptance at n = 1e2, 1e3, 1e4:";
  for (const auto& e : est) o.detail << " " << e.fraction << " (SE " << e.standard_error << ")";
  for (std::size_t i = 0; i + 1 < est.size(); ++i) {
    const double se = std::hypot(est[i].standard_error, est[i + 1].standard_error);
    o.require(est[i + 1].fraction >= est[i].fraction - 2.0 * se, "monotone within 2 SE");
  }
  return o;
}

Outcome criterion6() {
  Outcome o;
  const long draws = 100000;
  const HyperpriorConfig cfg = default_hyperprior(2, 1, 4.0, 1);
  double worst_base = 0.0, worst_pi = 0.0;

  // Base measure gamma against its table.
  {
    RngStream rng(StreamKey{6, stream_module::test, 0, 0});
    std::vector<long> count(cfg.gamma.size(), 0);
    std::vector<double> u;
    for (long k = 0; k < draws; ++k) {
      const Structure s = sample_base_structure(cfg, rng);
      ++count[cfg.find(s.graph)];
      const Interval I = cfg.interval(s.graph.t[0]);
      u.push_back((s.alphas[0] - I.lo) / I.width());
    }
    for (std::size_t i = 0; i < count.size(); ++i) {
      const double p = cfg.gamma[i].probability, f = static_cast<double>(count[i]) / draws;
      const double se = std::sqrt(p * (1 - p) / draws);
      worst_base = std::max(worst_base, std::abs(f - p) / se);
    }
    const double D = ks_statistic(u, [](double x) { return std::clamp(x, 0.0, 1.0); });
    o.detail << "gamma: " << cfg.gamma.size() << " graphs, max dev " << worst_base << " SE; uniform KS " << D
             << " (1% crit " << ks_critical_1pct(u.size()) << ")";
    o.require(worst_base <= 4.0, "gamma frequencies");
    o.require(D < ks_critical_1pct(u.size()), "uniform alpha KS");
  }

  // Penalized pi at d = 2 against the exact marginal.
  {
    const StructureSampler sampler(cfg, 200);
    const GraphMarginal& m = sampler.marginal();
    std::map<std::string, long> count;
    RngStream rng(StreamKey{6, stream_module::test, 1, 0});
    for (long k = 0; k < draws; ++k) ++count[sampler.sample(rng).graph.key()];
    long seen = 0;
    for (std::size_t i = 0; i < m.graphs.size(); ++i) {
      const double p = m.probability[i];
      const long c = count.count(m.graphs[i].key()) ? count[m.graphs[i].key()] : 0;
      seen += c;
      const double f = static_cast<double>(c) / draws, se = std::sqrt(p * (1 - p) / draws);
      const double z = se > 0 ? std::abs(f - p) / se : (c == 0 ? 0.0 : INFINITY);
      worst_pi = std::max(worst_pi, z);
    }
    o.detail << "; pi(n=200): max dev " << worst_pi << " SE";
    o.require(seen == draws, "pi draws outside the table");
    o.require(worst_pi <= 4.0, "pi frequencies");
  }

  // Tilted alpha conditional at d = 1, n = 50: density ∝ exp(-n eps(alpha)^2) on I(1).
  {
    const HyperpriorConfig c1 = default_hyperprior(1, 1, 4.0, 1);
    const long n = 50;
    const StructureSampler sampler(c1, n);
    RngStream rng(StreamKey{6, stream_module::test, 2, 0});
    std::vector<double> a;
    for (long k = 0; k < 20000; ++k) {
      const Structure s = sampler.sample(rng);
      if (s.graph.q == 0) a.push_back(s.alphas[0]);
    }
    const Interval I = c1.interval(1);
    const int K = 20000;
    std::vector<double> cdf(K + 1, 0.0);
    auto dens = [&](double al) { return std::exp(-static_cast<double>(n) * std::pow(n, -2.0 * al / (2.0 * al + 1.0))); };
    const double h = I.width() / K;
    for (int i = 1; i <= K; ++i) cdf[i] = cdf[i - 1] + 0.5 * h * (dens(I.lo + (i - 1) * h) + dens(I.lo + i * h));
    const double Z = cdf[K];
    auto F = [&](double x) {
      const double r = std::clamp((x - I.lo) / h, 0.0, static_cast<double>(K));
      const int i = std::min(static_cast<int>(r), K - 1);
      return (cdf[i] + (r - i) * (cdf[i + 1] - cdf[i])) / Z;
    };
    const double D = ks_statistic(a, F);
    const double Du = ks_statistic(a, [&](double x) { return std::clamp((x - I.lo) / I.width(), 0.0, 1.0); });
    o.detail << "; tilted KS " << D << " (crit " << ks_critical_1pct(a.size()) << ", vs plain uniform " << Du << ")";
    o.require(D < ks_critical_1pct(a.size()), "tilted alpha KS");
  }
  return o;
}

GraphSpec chain_graph(int d, int q) {
  GraphSpec g;
  g.q = q;
  g.dims.assign(q + 1, 1);
  g.dims[0] = d;
  g.t.assign(q + 1, 1);
  g.t[0] = d;
  std::vector<int> all(d);
  for (int a = 0; a < d; ++a) all[a] = a;
  g.active.push_back({all});
  for (int i = 1; i <= q; ++i) g.active.push_back({{0}});
  return g;
}

Outcome criterion7() {
  Outcome o;
  // Identity outer layer.
  double id_err = 0.0;
  {
    const Grid amb = Grid::cube(2, 33);
    const Field h0 = Field::from_function(amb, [](std::span<const double> x) { return 0.4 * std::sin(x[0]) * x[1]; });
    const Field id = Field::from_function(Grid::cube(1, 65, 0.0), [](std::span<const double> y) { return y[0]; });
    const Field theta = compose({{h0}, {id}}, chain_graph(2, 1), amb);
    for (std::size_t i = 0; i < amb.size(); ++i) id_err = std::max(id_err, std::abs(theta[i] - h0[i]));
    o.require(id_err <= 1e-14, "identity composition");
  }
  // Perturbation bound on random compositions.
  RngStream rng(StreamKey{7, stream_module::test, 0, 0});
  int violations = 0;
  double worst_ratio = 0.0, worst_tight = 0.0;
  const Grid line = Grid::cube(1, 129, 0.0);
  for (int k = 0; k < 100; ++k) {
    const int d = k % 2 ? 2 : 1, q = k % 2 ? 1 : 2;
    const Grid amb = Grid::cube(d, d == 1 ? 129 : 33);
    const GraphSpec graph = chain_graph(d, q);
    LayerFields h(q + 1), ht(q + 1);
    std::vector<double> delta(q + 1);
    for (int i = 0; i <= q; ++i) {
      const Grid& g = i == 0 ? amb : line;
      const Field base = scaled_to_sup(random_smooth_field(g, rng, 1.0, 6), 0.8);
      const double rho = std::pow(10.0, rng.uniform(-4.0, -1.0));
      const Field pert = scaled_to_sup(random_smooth_field(g, rng, 1.0, 12), rho);
      h[i] = {base};
      ht[i] = {base + pert};
      delta[i] = rho;
    }
    const Field th = compose(h, graph, amb), tt = compose(ht, graph, amb);
    const double lhs = sup_norm(th - tt);
    // M^q sum_i ||h_i - h~_i||, M = max(1, largest Lipschitz constant of the outer layers);
    // the tighter telescoped bound uses the product of the outer-layer constants.
    double M = 1.0, sum = 0.0, tight = 0.0;
    for (int i = 1; i <= q; ++i) M = std::max(M, interpolant_lipschitz(h[i][0]));
    for (int i = 0; i <= q; ++i) {
      double prod = 1.0;
      for (int j = i + 1; j <= q; ++j) prod *= interpolant_lipschitz(h[j][0]);
      tight += prod * delta[i];
      sum += delta[i];
    }
    const double bound = std::pow(M, q) * sum;
    worst_ratio = std::max(worst_ratio, lhs / bound);
    worst_tight = std::max(worst_tight, lhs / tight);
    if (lhs > bound * (1 + 1e-12) || lhs > tight * (1 + 1e-12)) ++violations;
  }
  o.detail << "identity max err " << id_err << "; 100 perturbed compositions, max lhs/bound " << worst_ratio
           << " (telescoped " << worst_tight << "), violations " << violations;
  o.require(violations == 0, "perturbation bound");
  return o;
}

Outcome criterion8() {
  Outcome o;
  const auto t0 = Clock::now();
  // (a) Flat likelihood: the chain must leave the prior invariant.
  {
    const Grid g = Grid::cube(1, 65);
    RngStream drng(StreamKey{8, stream_module::data, 0, 0});
    const Dataset empty = generate_data(Field(g, 0.0), 0, IdentityConfig{g}, drng);
    DgpConfig dc;
    dc.hyper = default_hyperprior(1, 2, 4.0, 1);
    dc.ambient = g;
    dc.m0 = 3.0;
    const auto dgp = std::make_shared<const DgpPrior>(dc, 200);
    BaselineConfig bc;
    const std::size_t centre = 32, side = 12;
    auto functionals = [&](const Field& f) {
      return std::vector<double>{f[centre], f[side], f[centre] * f[centre], l2_norm(f)};
    };
    for (int which = 0; which < 2; ++which) {
      const PosteriorModel model = which == 0 ? PosteriorModel(IdentityConfig{g}, empty, dgp)
                                              : PosteriorModel(IdentityConfig{g}, empty, bc, 200);
      ChainSchedule s;
      s.burn_in = 1000;
      s.samples = 100000;
      s.thin = 20;
      s.structure_every = which == 0 ? 10 : 0;
      s.keep_fields = true;
      RngStream crng(StreamKey{8, stream_module::chain, static_cast<std::uint64_t>(which), 0});
      const ChainSummary sum = run_chain(model.prior_state(crng), model, s, crng);
      RngStream prng(StreamKey{8, stream_module::prior, static_cast<std::uint64_t>(which), 0});
      std::vector<std::vector<double>> chain(4), prior(4);
      for (const Field& f : sum.fields) {
        const auto v = functionals(f);
        for (int j = 0; j < 4; ++j) chain[j].push_back(v[j]);
      }
      for (int k = 0; k < 5000; ++k) {
        const Field f = which == 0 ? dgp->sample(prng).composed : baseline_prior_sample(bc, 200, g, prng);
        const auto v = functionals(f);
        for (int j = 0; j < 4; ++j) prior[j].push_back(v[j]);
      }
      double worst = 0.0;
      for (int j = 0; j < 4; ++j) {
        const MeanSe a = batch_means(chain[j]), b = mean_se(prior[j]);
        worst = std::max(worst, std::abs(a.mean - b.mean) / std::hypot(a.se, b.se));
      }
      o.detail << (which == 0 ? "flat-likelihood DGP" : "; baseline") << " max two-sample dev " << worst << " SE";
      o.require(worst <= 4.0, which == 0 ? "DGP prior preservation" : "baseline prior preservation");
    }
  }
  // (b) Identity forward map: closed-form Gaussian posterior.
  {
    const Grid g = Grid::cube(1, 33);
    BaselineConfig b;
    b.tau = 3.0;
    b.truncation = 6;
    const Field truth = Field::from_function(g, [](std::span<const double> x) { return 0.8 * std::cos(1.5 * x[0]); });
    RngStream drng(StreamKey{8, stream_module::data, 1, 0});
    const Dataset data = generate_data(truth, 40, IdentityConfig{g}, drng);
    const PosteriorModel model(IdentityConfig{g}, data, b, 1);
    ChainSchedule s;
    s.burn_in = 2000;
    s.samples = 100000;
    s.thin = 5;
    s.keep_fields = true;
    RngStream rng(StreamKey{8, stream_module::chain, 2, 0});
    const ChainSummary sum = run_chain(model.prior_state(rng), model, s, rng);
    const ConjugatePosterior oracle = conjugate_posterior(b, 1, g, data);
    double worst_z = 0.0, worst_v = 0.0;
    for (std::size_t node : {4u, 8u, 16u, 22u, 28u}) {
      std::vector<double> trace;
      for (const auto& f : sum.fields) trace.push_back(f[node]);
      const MeanSe m = batch_means(trace);
      worst_z = std::max(worst_z, std::abs(m.mean - oracle.mean[node]) / m.se);
      worst_v = std::max(worst_v, std::abs(sum.variance[node] / oracle.variance[node] - 1.0));
    }
    o.detail << "; conjugate: mean dev " << worst_z << " SE (limit 3), variance rel. dev " << worst_v
             << " (limit 0.1), pCN acceptance " << sum.pcn_acceptance;
    o.require(worst_z <= 3.0, "posterior mean");
    o.require(worst_v <= 0.10, "posterior variance");
  }
  const double secs = seconds_since(t0);
  o.detail << "; " << secs << " s";
  o.require(secs < 300.0, "runtime");
  return o;
}

Outcome criterion9() {
  Outcome o;
  const auto darcy = [](Rational alpha, int beta, int d) {
    return theoretical_exponents({ProblemKind::darcy, alpha, beta, d, {}});
  };
  const Rational spot1 = darcy(Rational(3), 2, 1).get("dgp_l2").value;
  const Rational spot2 = darcy(Rational(3), 2, 10).get("delta_n").value;
  o.detail << "dgp_l2(3,2,1) = " << spot1 << ", delta_n(3,2,10) = " << spot2;
  o.require(spot1 == Rational(1, 7), "1/7 spot value");
  o.require(spot2 == Rational(2, 9), "2/9 spot value");
  std::vector<int> bad;
  for (int d = 10; d <= 40; ++d) {
    const ExponentTable t = darcy(Rational(3), 2, d);
    if (!(t.get("dgp_l2_gam").value > t.get("baseline_lower").value)) bad.push_back(d);
  }
  const ExponentTable t10 = darcy(Rational(3), 2, 10);
  o.detail << "; ordering dgp_l2_gam > baseline_lower over d = 10..40: at d = 10 " << t10.get("dgp_l2_gam").value
           << " vs " << t10.get("baseline_lower").value << ", fails for " << bad.size() << " values of d";
  if (!bad.empty()) o.detail << " (d = " << bad.front() << ".." << bad.back() << ")";
  o.require(bad.empty(), "ordering for every d >= 10");
  return o;
}

std::optional<RateReport> g_smoke;
double g_smoke_seconds = 0.0;

const RateReport& smoke_run() {
  if (!g_smoke) {
    ExperimentPlan p = smoke_preset();
    const auto t0 = Clock::now();
    g_smoke = run_contraction_experiment(p);
    g_smoke_seconds = seconds_since(t0);
    emit_results(*g_smoke, g_out / "smoke_a");
  }
  return *g_smoke;
}

Outcome criterion10() {
  Outcome o;
  const RateReport& r = smoke_run();
  const PriorRate& pr = r.priors.at(0);
  o.detail << "median L2 error:";
  bool all = true;
  for (const auto& pt : pr.points) {
    o.detail << " n=" << pt.n << ":" << pt.l2;
    all &= pt.surviving == static_cast<int>(r.plan.replicates);
  }
  o.require(all, "every replicate survives");
  for (std::size_t i = 0; i + 1 < pr.points.size(); ++i)
    o.require(pr.points[i + 1].l2 < pr.points[i].l2, "strictly decreasing");
  if (pr.l2_fit) {
    o.detail << "; slope " << pr.l2_fit->slope << " (limit -0.05)";
    o.require(pr.l2_fit->slope < -0.05, "slope");
  } else {
    o.require(false, "no slope fit");
  }
  o.detail << "; " << g_smoke_seconds << " s";
  o.require(g_smoke_seconds < 1800.0, "runtime");
  return o;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

Outcome criterion11() {
  Outcome o;
  smoke_run();
  ExperimentPlan p = smoke_preset();
  p.jobs = 1;
  const RateReport again = run_contraction_experiment(p);
  emit_results(again, g_out / "smoke_b");
  const std::string a = slurp(g_out / "smoke_a" / "results.csv"), b = slurp(g_out / "smoke_b" / "results.csv");
  o.detail << "results.csv " << a.size() << " bytes vs " << b.size() << " bytes (second run single-threaded)";
  o.require(!a.empty() && a == b, "bit-identical CSV");
  return o;
}

}  // namespace

int main(int argc, char** argv) {
  const std::string which = argc > 1 ? argv[1] : "all";
  if (argc > 2) g_out = argv[2];
  const std::vector<std::function<Outcome()>> all{criterion1, criterion2, criterion3, criterion4,
                                                  criterion5, criterion6, criterion7, criterion8,
                                                  criterion9, criterion10, criterion11};
  std::vector<int> run;
  if (which == "all") {
    for (int i = 1; i <= 11; ++i) run.push_back(i);
  } else {
    int k = 0;
    try {
      k = std::stoi(which);
    } catch (...) {
    }
    if (k < 1 || k > 11) {
      std::cerr << "usage: acceptance <1..11|all> [output-dir]\n";
      return 2;
    }
    run.push_back(k);
  }
  int failed = 0;
  for (int k : run) {
    Outcome o;
    try {
      o = all[k - 1]();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail << " exception: " << e.what();
    }
    std::cout << (o.pass ? "[PASS]" : "[FAIL]") << " criterion " << k << ": " << o.detail.str() << std::endl;
    failed += !o.pass;
  }
  return failed ? 1 : 0;
}

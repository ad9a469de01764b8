#include "dgplab/structure.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>
#include <sstream>

#include "dgplab/elementary.hpp"
#include "dgplab/errors.hpp"

namespace dgplab {

int GraphSpec::l1() const { return std::accumulate(dims.begin(), dims.end(), 0); }

void GraphSpec::validate(int ambient_d) const {
  auto fail = [](const std::string& what) { throw ConfigError("graph: " + what); };
  if (q < 0) fail("depth q must be >= 0");
  const auto layers = static_cast<std::size_t>(q) + 1;
  if (dims.size() != layers) fail("dims must have q+1 entries");
  if (t.size() != layers) fail("t must have q+1 entries");
  if (active.size() != layers) fail("active sets must have q+1 layers");
  if (dims[0] != ambient_d) fail("d_0 must equal the ambient dimension");
  for (int i = 0; i <= q; ++i) {
    if (dims[i] < 1 || dims[i] > ambient_d) fail("d_" + std::to_string(i) + " outside [1, ambient d]");
    if (t[i] < 1 || t[i] > dims[i]) fail("t_" + std::to_string(i) + " outside [1, d_" + std::to_string(i) + "]");
    if (static_cast<int>(active[i].size()) != outputs(i))
      fail("layer " + std::to_string(i) + " needs " + std::to_string(outputs(i)) + " active sets");
    for (const auto& s : active[i]) {
      if (static_cast<int>(s.size()) != t[i]) fail("active set size differs from t_" + std::to_string(i));
      for (std::size_t k = 0; k < s.size(); ++k) {
        if (s[k] < 0 || s[k] >= dims[i]) fail("active index outside layer input range");
        if (k > 0 && s[k] <= s[k - 1]) fail("active sets must be sorted and distinct");
      }
    }
  }
}

std::string GraphSpec::key() const {
  std::ostringstream o;
  o << "q" << q << "|d";
  for (int v : dims) o << ',' << v;
  o << "|t";
  for (int v : t) o << ',' << v;
  o << "|S";
  for (const auto& layer : active) {
    o << '[';
    for (const auto& s : layer) {
      o << '(';
      for (int v : s) o << v << ' ';
      o << ')';
    }
    o << ']';
  }
  return o.str();
}

void HyperpriorConfig::validate() const {
  if (ambient_d < 1) throw ConfigError("hyperprior: ambient_d must be >= 1");
  if (beta < 1) throw ConfigError("hyperprior: beta must be >= 1");
  if (!(alpha_plus > beta + 0.5 * ambient_d))
    throw ConfigError("hyperprior: alpha_plus must exceed beta + ambient_d/2");
  if (q_max < 0) throw ConfigError("hyperprior: q_max must be >= 0");
  if (gamma.empty()) throw ConfigError("hyperprior: empty gamma table");
  double total = 0.0;
  for (const auto& g : gamma) {
    g.graph.validate(ambient_d);
    if (g.graph.q > q_max) throw ConfigError("hyperprior: graph deeper than q_max in gamma table");
    if (!(g.probability > 0.0)) throw ConfigError("hyperprior: gamma weights must be strictly positive");
    total += g.probability;
  }
  if (std::abs(total - 1.0) > 1e-9) throw ConfigError("hyperprior: gamma weights must sum to one");
}

int HyperpriorConfig::find(const GraphSpec& graph) const {
  const std::string k = graph.key();
  for (std::size_t i = 0; i < gamma.size(); ++i)
    if (gamma[i].graph.key() == k) return static_cast<int>(i);
  return -1;
}

namespace {

void subsets(int n, int k, int start, std::vector<int>& cur, std::vector<std::vector<int>>& out) {
  if (static_cast<int>(cur.size()) == k) {
    out.push_back(cur);
    return;
  }
  for (int v = start; v < n; ++v) {
    cur.push_back(v);
    subsets(n, k, v + 1, cur, out);
    cur.pop_back();
  }
}

// Every assignment of active sets to `outputs` components, each a t-subset of {0..n-1}.
void active_choices(int n, int t, int outputs, std::vector<std::vector<std::vector<int>>>& out) {
  std::vector<std::vector<int>> sets;
  std::vector<int> cur;
  subsets(n, t, 0, cur, sets);
  std::vector<std::size_t> pick(outputs, 0);
  while (true) {
    std::vector<std::vector<int>> layer;
    for (int j = 0; j < outputs; ++j) layer.push_back(sets[pick[j]]);
    out.push_back(std::move(layer));
    int j = 0;
    while (j < outputs && ++pick[j] == sets.size()) pick[j++] = 0;
    if (j == outputs) break;
  }
}

void extend(GraphSpec g, int layer, int ambient_d, std::vector<GraphSpec>& out) {
  if (layer > g.q) {
    out.push_back(std::move(g));
    return;
  }
  const int din = g.dims[layer];
  for (int t = 1; t <= din; ++t) {
    std::vector<std::vector<std::vector<int>>> choices;
    active_choices(din, t, g.outputs(layer), choices);
    for (auto& c : choices) {
      GraphSpec next = g;
      next.t[layer] = t;
      next.active[layer] = std::move(c);
      extend(std::move(next), layer + 1, ambient_d, out);
    }
  }
}

}  // namespace

std::vector<GraphSpec> enumerate_graphs(int ambient_d, int q_max) {
  if (ambient_d < 1 || q_max < 0) throw ConfigError("enumerate_graphs: need ambient_d >= 1 and q_max >= 0");
  std::vector<GraphSpec> out;
  for (int q = 0; q <= q_max; ++q) {
    // Inner dimensions d_1..d_q range over [1, ambient_d].
    std::vector<int> inner(q, 1);
    while (true) {
      GraphSpec g;
      g.q = q;
      g.dims.push_back(ambient_d);
      g.dims.insert(g.dims.end(), inner.begin(), inner.end());
      g.t.assign(q + 1, 0);
      g.active.assign(q + 1, {});
      extend(std::move(g), 0, ambient_d, out);
      int k = 0;
      while (k < q && ++inner[k] > ambient_d) inner[k++] = 1;
      if (k == q) break;
    }
  }
  return out;
}

HyperpriorConfig default_hyperprior(int ambient_d, int beta, double alpha_plus, int q_max) {
  HyperpriorConfig cfg;
  cfg.ambient_d = ambient_d;
  cfg.beta = beta;
  cfg.alpha_plus = alpha_plus;
  cfg.q_max = q_max;
  auto graphs = enumerate_graphs(ambient_d, q_max);
  double total = 0.0;
  for (auto& g : graphs) {
    const double w = std::exp(-static_cast<double>(g.q) - static_cast<double>(g.l1()));
    total += w;
    cfg.gamma.push_back({std::move(g), w});
  }
  for (auto& g : cfg.gamma) g.probability /= total;
  cfg.validate();
  return cfg;
}

double structure_rate(const Structure& s, long n) {
  double eps = 0.0;
  for (int i = 0; i <= s.graph.q; ++i) eps = std::max(eps, epsilon_rate({n, s.alphas[i], s.graph.t[i]}));
  return eps;
}

double psi_penalty(const Structure& s, long n) {
  if (n < 1) throw ConfigError("psi_penalty: n must be >= 1");
  const double eps = structure_rate(s, n);
  return static_cast<double>(n) * eps * eps + std::exp(std::exp(static_cast<double>(s.graph.l1())));
}

bool in_support(const Structure& s, const HyperpriorConfig& cfg) {
  if (cfg.find(s.graph) < 0) return false;
  if (s.alphas.size() != static_cast<std::size_t>(s.graph.q) + 1) return false;
  for (int i = 0; i <= s.graph.q; ++i) {
    const Interval I = cfg.interval(s.graph.t[i]);
    if (!(s.alphas[i] >= I.lo && s.alphas[i] <= I.hi)) return false;
  }
  return true;
}

double log_hyperprior(const Structure& s, long n, const HyperpriorConfig& cfg) {
  if (!in_support(s, cfg)) throw SupportError("log_hyperprior: structure outside the hyperprior support");
  double lp = std::log(cfg.gamma[cfg.find(s.graph)].probability);
  for (int i = 0; i <= s.graph.q; ++i) lp -= std::log(cfg.interval(s.graph.t[i]).width());
  return lp - psi_penalty(s, n);
}

namespace {

// Squared rate n^{-2a/(2a+t)} and its inverse in a.
double rate_sq(long n, double a, int t) { return std::pow(static_cast<double>(n), -2.0 * a / (2.0 * a + t)); }

double alpha_for_rate_sq(long n, double s, int t) {
  const double r = -std::log(s) / (2.0 * std::log(static_cast<double>(n)));
  return r * t / (1.0 - 2.0 * r);
}

constexpr std::array<double, 8> kGaussNodes = {-0.9602898564975363, -0.7966664774136267, -0.5255324099163290,
                                               -0.1834346424956498, 0.1834346424956498,  0.5255324099163290,
                                               0.7966664774136267,  0.9602898564975363};
constexpr std::array<double, 8> kGaussWeights = {0.1012285362903763, 0.2223810344533745, 0.3137066458778873,
                                                 0.3626837833783620, 0.3626837833783620, 0.3137066458778873,
                                                 0.2223810344533745, 0.1012285362903763};

}  // namespace

double log_expected_rate_penalty(const std::vector<int>& t, const HyperpriorConfig& cfg, long n) {
  if (n < 1) throw ConfigError("hyperprior: n must be >= 1");
  if (n == 1) return -1.0;
  const double nd = static_cast<double>(n);
  // M = max_i s_i with s_i = rate_sq(alpha_i), decreasing in alpha_i.
  // E exp(-nM) = exp(-n s_max) + n int_{s_min}^{s_max} exp(-n s) F(s) ds, F the CDF of M.
  double s_min = 0.0, s_max = 0.0;
  std::vector<double> breaks;
  for (int ti : t) {
    const Interval I = cfg.interval(ti);
    const double lo = rate_sq(n, I.hi, ti), hi = rate_sq(n, I.lo, ti);
    s_min = std::max(s_min, lo);
    s_max = std::max(s_max, hi);
    breaks.push_back(lo);
    breaks.push_back(hi);
  }
  if (s_max - s_min <= 1e-15 * s_max) return -nd * s_max;
  auto cdf = [&](double s) {
    double F = 1.0;
    for (int ti : t) {
      const Interval I = cfg.interval(ti);
      const double a = alpha_for_rate_sq(n, s, ti);
      F *= std::clamp((I.hi - a) / I.width(), 0.0, 1.0);
    }
    return F;
  };
  // Substitute u = 1 - exp(-n (s - s_min)) so the exponential weight becomes du / n.
  auto to_u = [&](double s) { return -std::expm1(-nd * (s - s_min)); };
  std::vector<double> ub;
  for (double b : breaks)
    if (b > s_min && b < s_max) ub.push_back(to_u(b));
  ub.push_back(0.0);
  ub.push_back(to_u(s_max));
  std::sort(ub.begin(), ub.end());
  ub.erase(std::unique(ub.begin(), ub.end()), ub.end());
  constexpr int panels = 64;
  double integral = 0.0;  // int_0^{u_max} F(s(u)) du
  for (std::size_t k = 0; k + 1 < ub.size(); ++k) {
    const double a = ub[k], b = ub[k + 1], w = (b - a) / panels;
    for (int p = 0; p < panels; ++p) {
      const double c = a + (p + 0.5) * w;
      for (std::size_t g = 0; g < kGaussNodes.size(); ++g) {
        const double u = c + 0.5 * w * kGaussNodes[g];
        integral += 0.5 * w * kGaussWeights[g] * cdf(s_min - std::log1p(-u) / nd);
      }
    }
  }
  // E = exp(-n s_min) [exp(-n (s_max - s_min)) + integral].
  return -nd * s_min + std::log(std::exp(-nd * (s_max - s_min)) + integral);
}

GraphMarginal graph_marginal(const HyperpriorConfig& cfg, long n) {
  cfg.validate();
  GraphMarginal gm;
  std::map<std::vector<int>, double> cache;
  for (const auto& g : cfg.gamma) {
    auto it = cache.find(g.graph.t);
    if (it == cache.end()) it = cache.emplace(g.graph.t, log_expected_rate_penalty(g.graph.t, cfg, n)).first;
    gm.graphs.push_back(g.graph);
    gm.log_weight.push_back(std::log(g.probability) - std::exp(std::exp(static_cast<double>(g.graph.l1()))) +
                            it->second);
  }
  const double top = *std::max_element(gm.log_weight.begin(), gm.log_weight.end());
  double total = 0.0;
  for (double lw : gm.log_weight) total += std::exp(lw - top);
  for (double lw : gm.log_weight) gm.probability.push_back(std::exp(lw - top) / total);
  return gm;
}

StructureSampler::StructureSampler(HyperpriorConfig cfg, long n)
    : cfg_(std::move(cfg)), n_(n), marginal_(graph_marginal(cfg_, n)) {
  double acc = 0.0;
  for (double p : marginal_.probability) cdf_.push_back(acc += p);
}

Structure StructureSampler::sample(RngStream& rng) const {
  const double u = rng.uniform() * cdf_.back();
  auto idx = static_cast<std::size_t>(std::upper_bound(cdf_.begin(), cdf_.end(), u) - cdf_.begin());
  idx = std::min(idx, cdf_.size() - 1);
  Structure s{marginal_.graphs[idx], {}};
  const auto& t = s.graph.t;
  const double nd = static_cast<double>(n_);
  double floor = 0.0;
  for (int ti : t) floor = std::max(floor, rate_sq(n_, cfg_.alpha_plus, ti));
  s.alphas.resize(t.size());
  while (true) {
    double top = 0.0;
    for (std::size_t i = 0; i < t.size(); ++i) {
      const Interval I = cfg_.interval(t[i]);
      s.alphas[i] = rng.uniform(I.lo, I.hi);
      top = std::max(top, rate_sq(n_, s.alphas[i], t[i]));
    }
    if (rng.uniform() < std::exp(-nd * (top - floor))) return s;
  }
}

Structure sample_structure(const HyperpriorConfig& cfg, long n, RngStream& rng) {
  return StructureSampler(cfg, n).sample(rng);
}

Structure sample_base_structure(const HyperpriorConfig& cfg, RngStream& rng) {
  cfg.validate();
  double u = rng.uniform(), acc = 0.0;
  std::size_t idx = cfg.gamma.size() - 1;
  for (std::size_t i = 0; i < cfg.gamma.size(); ++i) {
    acc += cfg.gamma[i].probability;
    if (u < acc) {
      idx = i;
      break;
    }
  }
  Structure s{cfg.gamma[idx].graph, {}};
  for (int ti : s.graph.t) {
    const Interval I = cfg.interval(ti);
    s.alphas.push_back(rng.uniform(I.lo, I.hi));
  }
  return s;
}

}  // namespace dgplab

#pragma once

#include <map>
#include <string>
#include <vector>

#include "dgplab/rng.hpp"

namespace dgplab {

/// Compositional graph lambda = (q, d, t, S).
///
/// Layer i maps [-1,1]^{d_i} to [-1,1]^{d_{i+1}} (d_0 is the ambient dimension,
/// d_{q+1} = 1). Component j of layer i reads the t_i coordinates listed in
/// active[i][j] (0-based, sorted, distinct).
struct GraphSpec {
  int q = 0;
  std::vector<int> dims;
  std::vector<int> t;
  std::vector<std::vector<std::vector<int>>> active;

  /// Number of components of layer i (d_{i+1}, or 1 for the last layer).
  int outputs(int i) const { return i < q ? dims[i + 1] : 1; }
  int l1() const;
  /// Throws ConfigError describing the first violated bound.
  void validate(int ambient_d) const;
  std::string key() const;
  bool operator==(const GraphSpec& o) const { return key() == o.key(); }
};

/// Structure eta = (lambda, alpha).
struct Structure {
  GraphSpec graph;
  std::vector<double> alphas;
};

/// Smoothness interval I(t) = [beta + t/2, alpha_plus].
struct Interval {
  double lo, hi;
  double width() const { return hi - lo; }
};

struct GraphWeight {
  GraphSpec graph;
  double probability;
};

struct HyperpriorConfig {
  int ambient_d = 1;
  int beta = 1;
  double alpha_plus = 4.0;
  int q_max = 3;
  /// gamma(lambda): strictly positive, sums to one.
  std::vector<GraphWeight> gamma;

  Interval interval(int t) const { return {beta + 0.5 * t, alpha_plus}; }
  void validate() const;
  /// Index of `graph` in the table, or -1.
  int find(const GraphSpec& graph) const;
};

/// Every admissible graph up to depth q_max with gamma proportional to e^{-q} e^{-|d|_1}.
HyperpriorConfig default_hyperprior(int ambient_d, int beta, double alpha_plus, int q_max = 3);

/// All admissible graphs of depth <= q_max for the given ambient dimension.
std::vector<GraphSpec> enumerate_graphs(int ambient_d, int q_max);

/// eps_n^eta = max_i eps_n^{alpha_i, t_i}.
double structure_rate(const Structure& s, long n);

/// Psi_n(eta) = n (eps_n^eta)^2 + exp(exp(|d|_1)).
double psi_penalty(const Structure& s, long n);

/// True when alpha_i lies in I(t_i) for every layer and the graph is in the table.
bool in_support(const Structure& s, const HyperpriorConfig& cfg);

/// log gamma(lambda) + log(uniform density on prod I(t_i)) - Psi_n(eta).
/// Throws SupportError outside the support.
double log_hyperprior(const Structure& s, long n, const HyperpriorConfig& cfg);

/// Exact graph marginal of pi(eta) ∝ exp(-Psi_n(eta)) gamma(eta):
///   P(lambda) ∝ gamma(lambda) exp(-exp(exp|d|_1)) E_U[exp(-n max_i eps_i^2)],
/// the expectation over alpha uniform on prod I(t_i).
struct GraphMarginal {
  std::vector<GraphSpec> graphs;
  std::vector<double> log_weight;
  std::vector<double> probability;
};
GraphMarginal graph_marginal(const HyperpriorConfig& cfg, long n);

/// log E_U[exp(-n max_i eps_n^{alpha_i,t_i}^2)] for alpha_i ~ U(I(t_i)) independent.
double log_expected_rate_penalty(const std::vector<int>& t, const HyperpriorConfig& cfg, long n);

/// Cached exact sampler for pi at a fixed n.
class StructureSampler {
 public:
  StructureSampler(HyperpriorConfig cfg, long n);

  const GraphMarginal& marginal() const { return marginal_; }
  const HyperpriorConfig& config() const { return cfg_; }
  long n() const { return n_; }

  /// Graph by inverse CDF on the marginal, then alpha | lambda by rejection
  /// from the uniform box with acceptance exp(-n (max_i eps_i^2 - floor)).
  Structure sample(RngStream& rng) const;

 private:
  HyperpriorConfig cfg_;
  long n_;
  GraphMarginal marginal_;
  std::vector<double> cdf_;
};

Structure sample_structure(const HyperpriorConfig& cfg, long n, RngStream& rng);

/// Draw from the base measure gamma (graph from the table, alpha uniform).
Structure sample_base_structure(const HyperpriorConfig& cfg, RngStream& rng);

}  // namespace dgplab

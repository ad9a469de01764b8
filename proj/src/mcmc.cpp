#include "dgplab/mcmc.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "dgplab/errors.hpp"

namespace dgplab {

std::vector<double> LayerPrior::draw(RngStream& rng) const {
  std::vector<double> c(stddev.size());
  for (std::size_t k = 0; k < c.size(); ++k) c[k] = stddev[k] * rng.normal();
  return c;
}

Field LayerPrior::field(std::span<const double> coeffs) const {
  Field f = basis->synthesize(coeffs);
  if (cutoff) {
    for (std::size_t i = 0; i < f.size(); ++i) f[i] *= scale * (*cutoff)[i];
  } else {
    for (std::size_t i = 0; i < f.size(); ++i) f[i] *= scale;
  }
  return f;
}

bool LayerPrior::admissible(const Field& f) const {
  if (sup_constraint && sup_norm(f) > 1.0) return false;
  if (holder_beta && c_beta_norm(f, *holder_beta, holder_region) > m0) return false;
  return true;
}

LayerPrior layer_prior(const ElementaryConfig& cfg) {
  cfg.validate();
  LayerPrior p;
  p.basis = cfg.basis;
  if (uses_cutoff(cfg.kind)) p.cutoff = cfg.cutoff ? cfg.cutoff : std::make_shared<const Field>(make_cutoff(cfg.grid()));
  for (double e : cfg.basis->eigenvalues()) p.stddev.push_back(std::pow(e, -0.5 * cfg.rate.alpha));
  p.scale = rescale_factor(cfg.rate);
  p.sup_constraint = conditions_sup(cfg.kind);
  p.holder_beta = cfg.beta;
  p.m0 = cfg.m0;
  p.holder_region = cfg.holder_region();
  return p;
}

PosteriorModel::PosteriorModel(Problem problem, Dataset data, std::shared_ptr<const DgpPrior> prior)
    : problem_(std::move(problem)), data_(std::move(data)), dgp_(std::move(prior)) {
  if (!dgp_) throw ConfigError("posterior: missing DGP prior");
  if (!(dgp_->ambient() == grid())) throw ConfigError("posterior: prior grid differs from the problem grid");
  stencils_ = design_stencils(data_, grid());
  prior_n_ = dgp_->n();
}

PosteriorModel::PosteriorModel(Problem problem, Dataset data, BaselineConfig baseline, long prior_n)
    : problem_(std::move(problem)), data_(std::move(data)), baseline_(baseline), prior_n_(prior_n) {
  if (prior_n < 1) throw ConfigError("posterior: prior n must be >= 1");
  stencils_ = design_stencils(data_, grid());
  baseline_space_ = make_baseline_space(*baseline_, grid());
}

std::vector<LayerPrior> PosteriorModel::layer_priors(const std::optional<Structure>& s) const {
  if (!dgp_) {
    LayerPrior p;
    p.basis = baseline_space_->basis;
    p.cutoff = baseline_space_->cutoff;
    p.stddev = baseline_space_->stddev;
    p.scale = baseline_->scale(prior_n_, grid().dim());
    return {p};
  }
  if (!s) throw ConfigError("posterior: DGP state without a structure");
  std::ostringstream key;
  key.precision(17);
  key << s->graph.key();
  for (double a : s->alphas) key << ';' << a;
  auto it = layer_cache_.find(key.str());
  if (it != layer_cache_.end()) return it->second;
  std::vector<LayerPrior> out;
  for (int i = 0; i <= s->graph.q; ++i) {
    const LayerPrior p = layer_prior(dgp_->layer_config(*s, i));
    for (int j = 0; j < s->graph.outputs(i); ++j) out.push_back(p);
  }
  // Structures are continuous in alpha, so the cache only helps within a structure.
  if (layer_cache_.size() > 64) layer_cache_.clear();
  layer_cache_.emplace(key.str(), out);
  return out;
}

std::size_t PosteriorModel::max_layer_slots() const {
  if (!dgp_) return 1;
  std::size_t best = 1;
  for (const auto& g : dgp_->config().hyper.gamma) {
    std::size_t k = 0;
    for (int i = 0; i <= g.graph.q; ++i) k += static_cast<std::size_t>(g.graph.outputs(i));
    best = std::max(best, k);
  }
  return best;
}

Field PosteriorModel::compose(const std::optional<Structure>& s, const std::vector<Field>& layers) const {
  if (!dgp_) return layers.at(0);
  LayerFields lf;
  std::size_t k = 0;
  for (int i = 0; i <= s->graph.q; ++i) {
    lf.emplace_back();
    for (int j = 0; j < s->graph.outputs(i); ++j) lf.back().push_back(layers.at(k++));
  }
  return dgplab::compose(lf, s->graph, grid());
}

double PosteriorModel::loglik(const Field& theta, Field& u) const {
  u = forward(theta, problem_);
  return log_likelihood(u, data_, stencils_);
}

ChainState PosteriorModel::prior_state(RngStream& rng) const {
  ChainState st;
  if (dgp_) {
    DeepDraw d = dgp_->sample(rng);
    st.structure = d.structure;
    for (auto& layer : d.layers)
      for (auto& c : layer) {
        st.coefficients.push_back(std::move(c.coefficients));
        st.layers.push_back(std::move(c.field));
      }
    st.composed = std::move(d.composed);
  } else {
    const auto priors = layer_priors(std::nullopt);
    st.coefficients.push_back(priors[0].draw(rng));
    st.layers.push_back(priors[0].field(st.coefficients[0]));
    st.composed = st.layers[0];
  }
  st.loglik = loglik(st.composed, st.forward);
  st.cache_valid = true;
  return st;
}

namespace {

[[noreturn]] void abort_chain(const std::string& why, const ChainState& s) {
  std::ostringstream msg;
  msg << "chain aborted: " << why << " [state: loglik=" << s.loglik << ", layers=" << s.layers.size();
  if (s.structure) {
    msg << ", structure=" << s.structure->graph.key() << ", alphas";
    for (double a : s.structure->alphas) msg << ' ' << a;
  }
  if (s.composed.size() > 0) msg << ", sup|theta|=" << sup_norm(s.composed);
  msg << ']';
  throw NumericError(msg.str());
}

bool accept(double from, double to, RngStream& rng) {
  const double u = rng.uniform();
  return std::log(u) < log_acceptance(from, to);
}

}  // namespace

StepInfo pcn_step(ChainState& state, const PosteriorModel& model, RngStream& rng) {
  const auto priors = model.layer_priors(state.structure);
  if (priors.size() != state.coefficients.size()) throw ConfigError("pcn_step: layer count differs from the prior");
  if (state.step_sizes.size() < priors.size()) state.step_sizes.resize(priors.size(), 0.2);

  std::vector<std::vector<double>> coeffs(priors.size());
  for (std::size_t k = 0; k < priors.size(); ++k) {
    const double b = state.step_sizes[k];
    const double keep = std::sqrt(1.0 - b * b);
    const auto xi = priors[k].draw(rng);
    coeffs[k].resize(xi.size());
    for (std::size_t c = 0; c < xi.size(); ++c) coeffs[k][c] = keep * state.coefficients[k][c] + b * xi[c];
  }
  const double u_accept = rng.uniform();

  StepInfo info;
  std::vector<Field> layers;
  for (std::size_t k = 0; k < priors.size(); ++k) {
    layers.push_back(priors[k].field(coeffs[k]));
    if (!priors[k].admissible(layers.back())) {
      info.admissible = false;
      return info;
    }
  }
  Field composed;
  try {
    composed = model.compose(state.structure, layers);
  } catch (const CompositionError& e) {
    info.admissible = false;
    info.note = e.what();
    return info;
  }
  Field u;
  const double ll = model.loglik(composed, u);
  if (!std::isfinite(ll)) abort_chain("non-finite log-likelihood at a pCN proposal", state);
  if (std::log(u_accept) < log_acceptance(state.loglik, ll)) {
    state.coefficients = std::move(coeffs);
    state.layers = std::move(layers);
    state.composed = std::move(composed);
    state.forward = std::move(u);
    state.loglik = ll;
    state.cache_valid = true;
    info.accepted = true;
  }
  return info;
}

StepInfo structure_move(ChainState& state, const PosteriorModel& model, RngStream& rng) {
  StepInfo info;
  RngStream proposal_rng = rng.split();
  ChainState prop;
  try {
    prop = model.prior_state(proposal_rng);
  } catch (const RejectionBudgetError& e) {
    info.admissible = false;
    info.note = std::string("structure move rejected: ") + e.what();
    rng.uniform();
    return info;
  }
  if (!std::isfinite(prop.loglik)) abort_chain("non-finite log-likelihood at a structure proposal", state);
  if (accept(state.loglik, prop.loglik, rng)) {
    prop.step_sizes = std::move(state.step_sizes);
    state = std::move(prop);
    info.accepted = true;
  }
  return info;
}

Quantiles quantiles(std::vector<double> v) {
  Quantiles q;
  if (v.empty()) return q;
  std::sort(v.begin(), v.end());
  auto at = [&](double p) {
    const double pos = p * static_cast<double>(v.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const auto hi = std::min(lo + 1, v.size() - 1);
    return v[lo] + (pos - static_cast<double>(lo)) * (v[hi] - v[lo]);
  };
  q.q10 = at(0.1);
  q.median = at(0.5);
  q.q90 = at(0.9);
  return q;
}

namespace {

void record(ChainSummary& out, const ChainState& s, const std::optional<Reference>& truth, int beta,
            const ChainSchedule& schedule) {
  out.loglik.push_back(s.loglik);
  out.c_beta.push_back(c_beta_norm(s.composed, beta));
  out.structures.push_back(s.structure ? s.structure->graph.key() : "baseline");
  if (truth) {
    out.l2_error.push_back(l2_norm(s.composed - truth->theta));
    out.prediction_error.push_back(l2_norm(s.forward - truth->u));
  }
  // Welford update of the pointwise mean and variance.
  ++out.recorded;
  if (out.recorded == 1) {
    out.mean = s.composed;
    out.variance = Field(s.composed.grid(), 0.0);
  } else {
    const double k = static_cast<double>(out.recorded);
    for (std::size_t i = 0; i < s.composed.size(); ++i) {
      const double delta = s.composed[i] - out.mean[i];
      out.mean[i] += delta / k;
      out.variance[i] += delta * (s.composed[i] - out.mean[i]);
    }
  }
  if (schedule.keep_fields) out.fields.push_back(s.composed);
}

}  // namespace

ChainSummary run_chain(ChainState state, const PosteriorModel& model, const ChainSchedule& schedule, RngStream& rng,
                       const std::optional<Reference>& truth, int beta) {
  if (schedule.burn_in < 0 || schedule.samples < 0 || schedule.thin < 1)
    throw ConfigError("run_chain: burn_in, samples must be >= 0 and thin >= 1");
  if (!(schedule.initial_step > 0.0 && schedule.initial_step <= 1.0))
    throw ConfigError("run_chain: initial step must lie in (0, 1]");
  if (!state.cache_valid) {
    state.loglik = model.loglik(state.composed, state.forward);
    state.cache_valid = true;
  }
  if (!std::isfinite(state.loglik)) abort_chain("non-finite log-likelihood at the initial state", state);
  // One step per layer slot, enough for the widest structure the prior can reach.
  const std::size_t slots = std::max(state.coefficients.size(), model.max_layer_slots());
  state.step_sizes.assign(slots, schedule.initial_step);

  ChainSummary out;
  long pcn_acc = 0, pcn_n = 0, burn_acc = 0, struct_acc = 0, struct_n = 0;
  const long total = schedule.burn_in + schedule.samples;
  for (long it = 1; it <= total; ++it) {
    const bool burning = it <= schedule.burn_in;
    if (schedule.structure_every > 0 && it % schedule.structure_every == 0) {
      const StepInfo si = structure_move(state, model, rng);
      ++struct_n;
      if (si.accepted) ++struct_acc;
      if (!si.note.empty() && out.notes.size() < 32) out.notes.push_back(si.note);
    }
    const StepInfo step = pcn_step(state, model, rng);
    if (burning) {
      if (step.accepted) ++burn_acc;
      if (schedule.adapt) {
        const double gain = 1.0 / std::pow(static_cast<double>(it) + 1.0, 0.6);
        for (double& b : state.step_sizes) {
          const double lb = std::log(b) + gain * ((step.accepted ? 1.0 : 0.0) - schedule.target_acceptance);
          b = std::clamp(std::exp(lb), 1e-4, 1.0);
        }
      }
    } else {
      ++pcn_n;
      if (step.accepted) ++pcn_acc;
      if ((it - schedule.burn_in) % schedule.thin == 0) record(out, state, truth, beta, schedule);
    }
  }
  if (out.recorded == 0) record(out, state, truth, beta, schedule);
  out.iterations = total;
  out.pcn_acceptance = pcn_n > 0 ? static_cast<double>(pcn_acc) / pcn_n : 0.0;
  out.burn_in_acceptance = schedule.burn_in > 0 ? static_cast<double>(burn_acc) / schedule.burn_in : 0.0;
  out.structure_acceptance = struct_n > 0 ? static_cast<double>(struct_acc) / struct_n : 0.0;
  out.final_steps = state.step_sizes;
  if (out.recorded > 1)
    for (std::size_t i = 0; i < out.variance.size(); ++i) out.variance[i] /= static_cast<double>(out.recorded - 1);
  out.l2_quantiles = quantiles(out.l2_error);
  out.prediction_quantiles = quantiles(out.prediction_error);
  out.c_beta_quantiles = quantiles(out.c_beta);
  return out;
}

}  // namespace dgplab

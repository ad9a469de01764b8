#include "dgplab/series.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include "dgplab/errors.hpp"

namespace dgplab {

namespace {

double axis_mode(BasisKind kind, int j, double x, double lo, double L) {
  const double arg = j * std::numbers::pi * (x - lo) / L;
  if (kind == BasisKind::tensor_cosine) return j == 0 ? 1.0 / std::sqrt(L) : std::sqrt(2.0 / L) * std::cos(arg);
  return std::sqrt(2.0 / L) * std::sin(arg);
}

}  // namespace

SeriesBasis::SeriesBasis(BasisKind kind, Grid grid, int truncation)
    : kind_(kind), grid_(std::move(grid)), J_(truncation) {
  const int m = grid_.points_per_axis();
  if (J_ < 1) throw ConfigError("series basis: truncation must be >= 1");
  const int max_freq = kind_ == BasisKind::tensor_cosine ? J_ - 1 : J_;
  if (max_freq >= m - 1)
    throw ConfigError("series basis: truncation " + std::to_string(J_) + " too large for " +
                      std::to_string(m) + " points per axis");
  const int d = grid_.dim();
  const int offset = kind_ == BasisKind::tensor_cosine ? 0 : 1;

  std::size_t total = 1;
  for (int a = 0; a < d; ++a) total *= static_cast<std::size_t>(J_);
  std::vector<std::vector<int>> all(total, std::vector<int>(d));
  for (std::size_t t = 0; t < total; ++t) {
    std::size_t r = t;
    for (int a = 0; a < d; ++a) {
      all[t][a] = static_cast<int>(r % J_) + offset;
      r /= J_;
    }
  }
  std::vector<std::size_t> order(total);
  std::iota(order.begin(), order.end(), 0);
  auto lam = [&](std::size_t t) {
    double s = 1.0;
    for (int v : all[t]) s += static_cast<double>(v) * v;
    return s;
  };
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return lam(a) < lam(b); });
  modes_.reserve(total);
  for (std::size_t t : order) {
    modes_.push_back(all[t]);
    eigen_.push_back(lam(t));
    tensor_index_.push_back(t);
  }

  for (int a = 0; a < d; ++a) {
    const double L = grid_.hi(a) - grid_.lo(a);
    const double h = grid_.spacing(a);
    kernels::AxisMatrix S{m, J_, std::vector<double>(static_cast<std::size_t>(m) * J_)};
    kernels::AxisMatrix A{J_, m, std::vector<double>(static_cast<std::size_t>(m) * J_)};
    for (int i = 0; i < m; ++i) {
      const double x = grid_.lo(a) + i * h;
      const double wi = (i == 0 || i == m - 1) ? 0.5 * h : h;
      for (int j = 0; j < J_; ++j) {
        const double v = axis_mode(kind_, j + offset, x, grid_.lo(a), L);
        S.data[static_cast<std::size_t>(i) * J_ + j] = v;
        A.data[static_cast<std::size_t>(j) * m + i] = wi * v;
      }
    }
    synth_.push_back(std::move(S));
    analyze_.push_back(std::move(A));
  }
}

std::vector<double> SeriesBasis::weights(double alpha) const {
  std::vector<double> w(eigen_.size());
  for (std::size_t k = 0; k < w.size(); ++k) w[k] = std::pow(eigen_[k], -alpha);
  return w;
}

double SeriesBasis::evaluate(std::size_t k, std::span<const double> x) const {
  double v = 1.0;
  for (int a = 0; a < dim(); ++a)
    v *= axis_mode(kind_, modes_[k][a], x[a], grid_.lo(a), grid_.hi(a) - grid_.lo(a));
  return v;
}

std::vector<double> SeriesBasis::to_tensor(std::span<const double> coeffs) const {
  if (coeffs.size() != modes_.size()) throw ConfigError("series: coefficient count does not match basis");
  std::vector<double> t(modes_.size(), 0.0);
  for (std::size_t k = 0; k < modes_.size(); ++k) t[tensor_index_[k]] = coeffs[k];
  return t;
}

std::vector<double> SeriesBasis::from_tensor(std::span<const double> tensor) const {
  std::vector<double> c(modes_.size());
  for (std::size_t k = 0; k < modes_.size(); ++k) c[k] = tensor[tensor_index_[k]];
  return c;
}

Field SeriesBasis::synthesize(std::span<const double> coeffs) const {
  std::vector<double> t = to_tensor(coeffs);
  kernels::Shape shape(dim(), J_);
  for (int a = 0; a < dim(); ++a) {
    t = kernels::parallel::apply_axis(t, shape, a, synth_[a]);
    shape[a] = grid_.points_per_axis();
  }
  return Field(grid_, std::move(t));
}

std::vector<double> SeriesBasis::analyze(const Field& field) const {
  if (!(field.grid() == grid_)) throw ConfigError("series: field grid does not match basis grid");
  std::vector<double> t(field.values().begin(), field.values().end());
  kernels::Shape shape(dim(), grid_.points_per_axis());
  for (int a = 0; a < dim(); ++a) {
    t = kernels::parallel::apply_axis(t, shape, a, analyze_[a]);
    shape[a] = J_;
  }
  return from_tensor(t);
}

double sobolev_norm_series(std::span<const double> coeffs, const SeriesBasis& basis, double alpha) {
  if (coeffs.size() != basis.size()) throw ConfigError("sobolev_norm_series: shape mismatch");
  double s = 0.0;
  for (std::size_t k = 0; k < coeffs.size(); ++k) s += std::pow(basis.eigenvalue(k), alpha) * coeffs[k] * coeffs[k];
  return std::sqrt(s);
}

Field spectral_project(const Field& field, const SeriesBasis& basis, std::size_t l) {
  if (l > basis.size())
    throw ConfigError("spectral_project: l = " + std::to_string(l) + " exceeds basis size " +
                      std::to_string(basis.size()));
  auto c = basis.analyze(field);
  std::fill(c.begin() + static_cast<long>(l), c.end(), 0.0);
  return basis.synthesize(c);
}

}  // namespace dgplab

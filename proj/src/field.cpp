#include "dgplab/field.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "dgplab/errors.hpp"

namespace dgplab {

Grid::Grid(std::vector<double> lo, std::vector<double> hi, int points_per_axis)
    : lo_(std::move(lo)), hi_(std::move(hi)), m_(points_per_axis) {
  if (lo_.empty() || lo_.size() != hi_.size()) throw ConfigError("grid: lo/hi dimension mismatch");
  if (m_ < 3) throw ConfigError("grid: need at least 3 points per axis");
  h_.resize(lo_.size());
  strides_.resize(lo_.size());
  size_ = 1;
  for (std::size_t a = 0; a < lo_.size(); ++a) {
    if (!(hi_[a] > lo_[a])) throw ConfigError("grid: empty interval on axis " + std::to_string(a));
    h_[a] = (hi_[a] - lo_[a]) / (m_ - 1);
    strides_[a] = size_;
    size_ *= static_cast<std::size_t>(m_);
  }
}

Grid Grid::cube(int dim, int points_per_axis, double margin) {
  if (dim < 1) throw ConfigError("grid: dimension must be >= 1");
  if (margin < 0) throw ConfigError("grid: negative margin");
  return Grid(std::vector<double>(dim, -1.0 - margin), std::vector<double>(dim, 1.0 + margin),
              points_per_axis);
}

double Grid::volume() const {
  double v = 1.0;
  for (int a = 0; a < dim(); ++a) v *= hi_[a] - lo_[a];
  return v;
}

void Grid::unflatten(std::size_t flat, std::span<int> idx) const {
  for (int a = 0; a < dim(); ++a) {
    idx[a] = static_cast<int>(flat % m_);
    flat /= m_;
  }
}

std::size_t Grid::flatten(std::span<const int> idx) const {
  std::size_t f = 0;
  for (int a = 0; a < dim(); ++a) f += static_cast<std::size_t>(idx[a]) * strides_[a];
  return f;
}

void Grid::point(std::size_t flat, std::span<double> x) const {
  for (int a = 0; a < dim(); ++a) {
    x[a] = coord(a, static_cast<int>(flat % m_));
    flat /= m_;
  }
}

bool Grid::contains(std::span<const double> x, double tol) const {
  for (int a = 0; a < dim(); ++a)
    if (x[a] < lo_[a] - tol || x[a] > hi_[a] + tol) return false;
  return true;
}

bool Grid::strictly_contains_unit_cube() const {
  for (int a = 0; a < dim(); ++a)
    if (!(lo_[a] < -1.0 && hi_[a] > 1.0)) return false;
  return true;
}

bool Grid::operator==(const Grid& o) const { return m_ == o.m_ && lo_ == o.lo_ && hi_ == o.hi_; }

Field::Field(Grid grid, double fill) : grid_(std::move(grid)), values_(grid_.size(), fill) {}

Field::Field(Grid grid, std::vector<double> values, std::string provenance)
    : grid_(std::move(grid)), values_(std::move(values)), provenance_(std::move(provenance)) {
  if (values_.size() != grid_.size()) throw ConfigError("field: value count does not match grid");
}

bool Field::all_finite() const {
  return std::all_of(values_.begin(), values_.end(), [](double v) { return std::isfinite(v); });
}

InterpStencil interp_stencil(const Grid& grid, std::span<const double> x) {
  if (!grid.contains(x)) throw DomainError("eval_field: point outside grid extent");
  const int d = grid.dim();
  const int m = grid.points_per_axis();
  std::array<int, 8> base{};
  std::array<double, 8> frac{};
  for (int a = 0; a < d; ++a) {
    double s = (x[a] - grid.lo(a)) / grid.spacing(a);
    s = std::clamp(s, 0.0, static_cast<double>(m - 1));
    int i = std::min(static_cast<int>(std::floor(s)), m - 2);
    base[a] = i;
    frac[a] = s - i;
  }
  InterpStencil st;
  const std::size_t corners = std::size_t{1} << d;
  st.nodes.reserve(corners);
  st.weights.reserve(corners);
  for (std::size_t c = 0; c < corners; ++c) {
    double w = 1.0;
    std::size_t flat = 0;
    for (int a = 0; a < d; ++a) {
      const bool up = (c >> a) & 1u;
      w *= up ? frac[a] : 1.0 - frac[a];
      flat += static_cast<std::size_t>(base[a] + (up ? 1 : 0)) * grid.stride(a);
    }
    if (w != 0.0) {
      st.nodes.push_back(flat);
      st.weights.push_back(w);
    }
  }
  return st;
}

double InterpStencil::apply(std::span<const double> values) const {
  double s = 0.0;
  for (std::size_t k = 0; k < nodes.size(); ++k) s += weights[k] * values[nodes[k]];
  return s;
}

double eval_field(const Field& field, std::span<const double> x) {
  return interp_stencil(field.grid(), x).apply(field.values());
}

std::vector<double> trapezoid_weights(const Grid& grid) {
  std::vector<double> w(grid.size(), 1.0);
  std::vector<int> idx(grid.dim());
  const int m = grid.points_per_axis();
  for (std::size_t i = 0; i < grid.size(); ++i) {
    grid.unflatten(i, idx);
    double wi = 1.0;
    for (int a = 0; a < grid.dim(); ++a) {
      const bool end = idx[a] == 0 || idx[a] == m - 1;
      wi *= grid.spacing(a) * (end ? 0.5 : 1.0);
    }
    w[i] = wi;
  }
  return w;
}

double l2_norm(const Field& field) {
  const auto w = trapezoid_weights(field.grid());
  double s = 0.0;
  for (std::size_t i = 0; i < field.size(); ++i) s += w[i] * field[i] * field[i];
  return std::sqrt(s);
}

double sup_norm(const Field& field) {
  double s = 0.0;
  for (double v : field.values()) s = std::max(s, std::abs(v));
  return s;
}

double interpolant_lipschitz(const Field& field) {
  const Grid& g = field.grid();
  std::vector<int> idx(g.dim());
  double total = 0.0;
  for (int a = 0; a < g.dim(); ++a) {
    double best = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) {
      g.unflatten(i, idx);
      if (idx[a] + 1 >= g.points_per_axis()) continue;
      best = std::max(best, std::abs(field[i + g.stride(a)] - field[i]) / g.spacing(a));
    }
    total += best;
  }
  return total;
}

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// First central difference along `axis`; NaN where the stencil leaves the grid.
std::vector<double> diff1(const std::vector<double>& v, const Grid& g, int axis) {
  std::vector<double> out(v.size(), kNaN);
  std::vector<int> idx(g.dim());
  const std::size_t s = g.stride(axis);
  const double inv = 1.0 / (2.0 * g.spacing(axis));
  for (std::size_t i = 0; i < v.size(); ++i) {
    g.unflatten(i, idx);
    if (idx[axis] == 0 || idx[axis] == g.points_per_axis() - 1) continue;
    out[i] = (v[i + s] - v[i - s]) * inv;
  }
  return out;
}

std::vector<double> diff2(const std::vector<double>& v, const Grid& g, int axis) {
  std::vector<double> out(v.size(), kNaN);
  std::vector<int> idx(g.dim());
  const std::size_t s = g.stride(axis);
  const double h = g.spacing(axis);
  const double inv = 1.0 / (h * h);
  for (std::size_t i = 0; i < v.size(); ++i) {
    g.unflatten(i, idx);
    if (idx[axis] == 0 || idx[axis] == g.points_per_axis() - 1) continue;
    out[i] = (v[i + s] - 2.0 * v[i] + v[i - s]) * inv;
  }
  return out;
}

// Central difference of order k along one axis: D2^(k/2), or D1 D2^((k-1)/2).
std::vector<double> diffk(std::vector<double> v, const Grid& g, int axis, int k) {
  for (int r = 0; r < k / 2; ++r) v = diff2(v, g, axis);
  if (k % 2 == 1) v = diff1(v, g, axis);
  return v;
}

void multi_indices(int dim, int order, std::vector<int>& cur, int axis,
                   std::vector<std::vector<int>>& out) {
  if (axis == dim - 1) {
    cur[axis] = order;
    out.push_back(cur);
    return;
  }
  for (int k = order; k >= 0; --k) {
    cur[axis] = k;
    multi_indices(dim, order - k, cur, axis + 1, out);
  }
}

std::vector<char> region_mask(const Grid& g, const std::optional<Region>& region) {
  std::vector<char> mask(g.size(), 1);
  if (!region) return mask;
  std::vector<double> x(g.dim());
  for (std::size_t i = 0; i < g.size(); ++i) {
    g.point(i, x);
    for (int a = 0; a < g.dim(); ++a)
      if (x[a] < region->lo[a] - 1e-12 || x[a] > region->hi[a] + 1e-12) mask[i] = 0;
  }
  return mask;
}

double masked_max_abs(const std::vector<double>& v, const std::vector<char>& mask) {
  double best = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i)
    if (mask[i] && std::isfinite(v[i])) best = std::max(best, std::abs(v[i]));
  return best;
}

std::map<int, double> holder_table(const Field& field, int beta, const std::optional<Region>& region) {
  const Grid& g = field.grid();
  if (beta < 0) throw ConfigError("norms: beta must be >= 0");
  if (g.points_per_axis() < 2 * beta + 3)
    throw ConfigError("norms: grid too coarse for order-" + std::to_string(beta) +
                      " differences (need m >= 2*beta+3)");
  if (region && (static_cast<int>(region->lo.size()) != g.dim() ||
                 static_cast<int>(region->hi.size()) != g.dim()))
    throw ConfigError("norms: region dimension mismatch");
  const auto mask = region_mask(g, region);
  const std::vector<double> base(field.values().begin(), field.values().end());
  std::map<int, double> holder;
  holder[0] = masked_max_abs(base, mask);
  for (int k = 1; k <= beta; ++k) {
    std::vector<std::vector<int>> alphas;
    std::vector<int> cur(g.dim());
    multi_indices(g.dim(), k, cur, 0, alphas);
    double best = 0.0;
    for (const auto& a : alphas) {
      std::vector<double> v = base;
      for (int ax = 0; ax < g.dim(); ++ax)
        if (a[ax] > 0) v = diffk(std::move(v), g, ax, a[ax]);
      best = std::max(best, masked_max_abs(v, mask));
    }
    holder[k] = best;
  }
  return holder;
}

}  // namespace

double NormReport::c_beta() const {
  double best = 0.0;
  for (const auto& [k, v] : holder) best = std::max(best, v);
  return best;
}

NormReport norms(const Field& field, int beta, const std::optional<Region>& region) {
  NormReport r;
  r.holder = holder_table(field, beta, region);
  r.sup = r.holder[0];
  r.l2 = l2_norm(field);
  return r;
}

double c_beta_norm(const Field& field, int beta, const std::optional<Region>& region) {
  double best = 0.0;
  for (const auto& [k, v] : holder_table(field, beta, region)) best = std::max(best, v);
  return best;
}

Field operator-(const Field& a, const Field& b) {
  if (!(a.grid() == b.grid())) throw ConfigError("field arithmetic: grid mismatch");
  Field out(a.grid());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] - b[i];
  return out;
}

Field operator+(const Field& a, const Field& b) {
  if (!(a.grid() == b.grid())) throw ConfigError("field arithmetic: grid mismatch");
  Field out(a.grid());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] + b[i];
  return out;
}

Field operator*(double c, const Field& a) {
  Field out(a.grid());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = c * a[i];
  return out;
}

}  // namespace dgplab

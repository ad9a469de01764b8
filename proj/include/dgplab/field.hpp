#pragma once

#include <array>
#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace dgplab {

/// Tensor-product grid with uniform spacing on a hyperrectangle.
///
/// Every axis carries the same number of points. Flat indices are
/// lexicographic with axis 0 varying fastest.
class Grid {
 public:
  Grid() = default;
  Grid(std::vector<double> lo, std::vector<double> hi, int points_per_axis);

  /// [-1-margin, 1+margin]^dim.
  static Grid cube(int dim, int points_per_axis, double margin = 0.25);

  int dim() const { return static_cast<int>(lo_.size()); }
  int points_per_axis() const { return m_; }
  std::size_t size() const { return size_; }
  double lo(int axis) const { return lo_[axis]; }
  double hi(int axis) const { return hi_[axis]; }
  double spacing(int axis) const { return h_[axis]; }
  double coord(int axis, int i) const { return lo_[axis] + i * h_[axis]; }
  double volume() const;
  std::size_t stride(int axis) const { return strides_[axis]; }

  /// Per-axis indices of a flat index.
  void unflatten(std::size_t flat, std::span<int> idx) const;
  std::size_t flatten(std::span<const int> idx) const;
  /// Physical coordinates of a flat index.
  void point(std::size_t flat, std::span<double> x) const;

  bool contains(std::span<const double> x, double tol = 1e-12) const;
  /// True when [-1,1]^dim lies strictly inside the extent.
  bool strictly_contains_unit_cube() const;

  bool operator==(const Grid& other) const;

 private:
  std::vector<double> lo_, hi_, h_;
  std::vector<std::size_t> strides_;
  int m_ = 0;
  std::size_t size_ = 0;
};

/// Scalar function sampled on a grid.
class Field {
 public:
  Field() = default;
  explicit Field(Grid grid, double fill = 0.0);
  Field(Grid grid, std::vector<double> values, std::string provenance = {});

  const Grid& grid() const { return grid_; }
  std::span<const double> values() const { return values_; }
  std::span<double> values() { return values_; }
  double operator[](std::size_t i) const { return values_[i]; }
  double& operator[](std::size_t i) { return values_[i]; }
  std::size_t size() const { return values_.size(); }
  const std::string& provenance() const { return provenance_; }
  void set_provenance(std::string p) { provenance_ = std::move(p); }

  bool all_finite() const;

  template <typename F>
  static Field from_function(const Grid& grid, F&& fn) {
    Field out(grid);
    std::vector<double> x(grid.dim());
    for (std::size_t i = 0; i < grid.size(); ++i) {
      grid.point(i, x);
      out.values_[i] = fn(std::span<const double>(x));
    }
    return out;
  }

 private:
  Grid grid_;
  std::vector<double> values_;
  std::string provenance_;
};

/// Multilinear interpolation. Throws DomainError outside the grid extent.
double eval_field(const Field& field, std::span<const double> x);

/// Precomputed interpolation stencil for repeated evaluation at a fixed point.
struct InterpStencil {
  std::vector<std::size_t> nodes;
  std::vector<double> weights;
  double apply(std::span<const double> values) const;
};
InterpStencil interp_stencil(const Grid& grid, std::span<const double> x);

struct NormReport {
  double l2 = 0.0;
  double sup = 0.0;
  /// holder[k]: largest k-th order central-difference magnitude over all
  /// mixed partials of order k. holder[0] == sup.
  std::map<int, double> holder;
  std::optional<double> dual_h1;

  /// max_k holder[k], the discrete C^beta norm.
  double c_beta() const;
};

/// Optional sub-box restricting where sup and Hölder proxies are taken.
struct Region {
  std::vector<double> lo, hi;
  static Region unit_cube(int dim) {
    return {std::vector<double>(dim, -1.0), std::vector<double>(dim, 1.0)};
  }
};

/// Discrete norms. l2 uses the trapezoidal rule over the full grid; the sup
/// and Hölder entries are maxima over nodes in `region` (whole grid if unset).
NormReport norms(const Field& field, int beta, const std::optional<Region>& region = std::nullopt);

/// Discrete C^beta norm only; cheaper than norms() when l2 is not needed.
double c_beta_norm(const Field& field, int beta, const std::optional<Region>& region = std::nullopt);

/// Trapezoidal quadrature weights (product over axes).
std::vector<double> trapezoid_weights(const Grid& grid);

/// sqrt(sum w_i v_i^2) with trapezoidal weights.
double l2_norm(const Field& field);
double sup_norm(const Field& field);

/// Sup-norm Lipschitz constant of the multilinear interpolant:
/// sum over axes of the largest forward-difference slope.
double interpolant_lipschitz(const Field& field);

Field operator-(const Field& a, const Field& b);
Field operator+(const Field& a, const Field& b);
Field operator*(double c, const Field& a);

}  // namespace dgplab

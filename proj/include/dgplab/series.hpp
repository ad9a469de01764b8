#pragma once

#include <span>
#include <vector>

#include "dgplab/field.hpp"
#include "dgplab/kernels.hpp"

namespace dgplab {

enum class BasisKind { tensor_cosine, tensor_sine_dirichlet };

/// Tensor-product Laplacian eigenbasis on the box spanned by a grid.
///
/// Per axis, with L = hi - lo:
///   cosine: e_0 = 1/sqrt(L), e_j = sqrt(2/L) cos(j pi (x - lo) / L),   j = 0..J-1
///   sine:   e_j = sqrt(2/L) sin(j pi (x - lo) / L),                      j = 1..J
/// Multi-index modes carry eigenvalue lambda_j = 1 + |j|^2 and are ordered by
/// non-decreasing lambda (ties lexicographic, axis 0 fastest). Both families
/// are exactly orthonormal under trapezoidal quadrature when J < m - 1.
class SeriesBasis {
 public:
  SeriesBasis(BasisKind kind, Grid grid, int truncation);

  BasisKind kind() const { return kind_; }
  int dim() const { return grid_.dim(); }
  int truncation() const { return J_; }
  std::size_t size() const { return modes_.size(); }
  const Grid& grid() const { return grid_; }

  /// Per-axis frequency indices of mode k (in sorted order).
  std::span<const int> mode(std::size_t k) const { return modes_[k]; }
  double eigenvalue(std::size_t k) const { return eigen_[k]; }
  const std::vector<double>& eigenvalues() const { return eigen_; }
  /// Prior variances lambda_j^{-alpha}; strictly positive, non-increasing.
  std::vector<double> weights(double alpha) const;

  /// Value of mode k at a point of the box.
  double evaluate(std::size_t k, std::span<const double> x) const;

  /// Series sum on the grid (tensor fast path through the kernels).
  Field synthesize(std::span<const double> coeffs) const;
  /// Discrete L2 inner products <field, e_k> with trapezoidal weights.
  std::vector<double> analyze(const Field& field) const;

 private:
  std::vector<double> to_tensor(std::span<const double> coeffs) const;
  std::vector<double> from_tensor(std::span<const double> tensor) const;

  BasisKind kind_;
  Grid grid_;
  int J_;
  std::vector<std::vector<int>> modes_;
  std::vector<double> eigen_;
  std::vector<std::size_t> tensor_index_;  // sorted mode -> tensor slot
  std::vector<kernels::AxisMatrix> synth_;   // per axis: m x J
  std::vector<kernels::AxisMatrix> analyze_; // per axis: J x m (trapezoid-weighted)
};

/// sqrt(sum lambda_j^alpha c_j^2).
double sobolev_norm_series(std::span<const double> coeffs, const SeriesBasis& basis, double alpha);

/// Projection onto the first l modes.
Field spectral_project(const Field& field, const SeriesBasis& basis, std::size_t l);

}  // namespace dgplab

#pragma once

// Data-parallel inner loops. Each kernel has a plain serial reference in
// `kernels::serial` and an OpenMP version in `kernels::parallel`; the library
// calls the parallel ones, the tests check them against the reference.

#include <cstddef>
#include <span>
#include <vector>

#include "dgplab/field.hpp"

namespace dgplab::kernels {

/// Dense row-major matrix used for one-axis tensor transforms.
struct AxisMatrix {
  int rows = 0;
  int cols = 0;
  std::vector<double> data;
  double operator()(int r, int c) const { return data[static_cast<std::size_t>(r) * cols + c]; }
};

/// Shape of a tensor stored axis-0-fastest.
using Shape = std::vector<int>;

/// Self-adjoint finite-difference operator on a grid:
///   (A u)_i = sum_axes [ a_{i+1/2} (u_i - u_{i+1}) + a_{i-1/2} (u_i - u_{i-1}) ] / h^2 + c_i u_i
/// acting on interior nodes; boundary rows are zero (homogeneous Dirichlet).
struct FluxOperator {
  Grid grid;
  /// face[a][i]: coefficient on the face between node i and i + stride(a).
  std::vector<std::vector<double>> face;
  /// Zeroth-order term c_i.
  std::vector<double> reaction;
  std::vector<char> interior;

  std::vector<double> diagonal() const;
};

namespace serial {

/// out = tensor with `axis` transformed by M (M.cols == in_shape[axis]).
std::vector<double> apply_axis(std::span<const double> in, const Shape& in_shape, int axis,
                               const AxisMatrix& M);
void apply_operator(const FluxOperator& op, std::span<const double> x, std::span<double> y);
double dot(std::span<const double> a, std::span<const double> b);
void axpy(double alpha, std::span<const double> x, std::span<double> y);

}  // namespace serial

namespace parallel {

std::vector<double> apply_axis(std::span<const double> in, const Shape& in_shape, int axis,
                               const AxisMatrix& M);
void apply_operator(const FluxOperator& op, std::span<const double> x, std::span<double> y);
/// Blocked reduction: fixed block partition, block sums combined in order, so the
/// result does not depend on the thread count.
double dot(std::span<const double> a, std::span<const double> b);
void axpy(double alpha, std::span<const double> x, std::span<double> y);

}  // namespace parallel

}  // namespace dgplab::kernels

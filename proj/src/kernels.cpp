#include "dgplab/kernels.hpp"

#include <algorithm>

#include "dgplab/errors.hpp"

namespace dgplab::kernels {

namespace {

constexpr std::size_t kDotBlock = 1024;

struct AxisLayout {
  std::size_t inner = 1;  // product of extents of axes below `axis`
  std::size_t outer = 1;  // product of extents above
  Shape out_shape;
};

AxisLayout layout(std::span<const double> in, const Shape& in_shape, int axis, const AxisMatrix& M) {
  if (axis < 0 || axis >= static_cast<int>(in_shape.size())) throw ConfigError("apply_axis: bad axis");
  if (M.cols != in_shape[axis]) throw ConfigError("apply_axis: matrix/shape mismatch");
  AxisLayout L;
  std::size_t total = 1;
  for (int e : in_shape) total *= static_cast<std::size_t>(e);
  if (total != in.size()) throw ConfigError("apply_axis: data/shape mismatch");
  for (int a = 0; a < axis; ++a) L.inner *= static_cast<std::size_t>(in_shape[a]);
  for (std::size_t a = axis + 1; a < in_shape.size(); ++a) L.outer *= static_cast<std::size_t>(in_shape[a]);
  L.out_shape = in_shape;
  L.out_shape[axis] = M.rows;
  return L;
}

inline void transform_slab(std::span<const double> in, std::vector<double>& out, const AxisMatrix& M,
                           std::size_t inner, std::size_t o) {
  const std::size_t in_base = o * inner * M.cols;
  const std::size_t out_base = o * inner * M.rows;
  for (int r = 0; r < M.rows; ++r) {
    double* dst = out.data() + out_base + static_cast<std::size_t>(r) * inner;
    for (int c = 0; c < M.cols; ++c) {
      const double w = M(r, c);
      if (w == 0.0) continue;
      const double* src = in.data() + in_base + static_cast<std::size_t>(c) * inner;
      for (std::size_t k = 0; k < inner; ++k) dst[k] += w * src[k];
    }
  }
}

inline double operator_row(const FluxOperator& op, std::span<const double> x, std::size_t i) {
  const Grid& g = op.grid;
  double acc = op.reaction.empty() ? 0.0 : op.reaction[i] * x[i];
  for (int a = 0; a < g.dim(); ++a) {
    const std::size_t s = g.stride(a);
    const double inv_h2 = 1.0 / (g.spacing(a) * g.spacing(a));
    const double up = op.face[a][i];
    const double down = op.face[a][i - s];
    acc += (up * (x[i] - x[i + s]) + down * (x[i] - x[i - s])) * inv_h2;
  }
  return acc;
}

}  // namespace

std::vector<double> FluxOperator::diagonal() const {
  std::vector<double> d(grid.size(), 1.0);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (!interior[i]) continue;
    double acc = reaction.empty() ? 0.0 : reaction[i];
    for (int a = 0; a < grid.dim(); ++a) {
      const double inv_h2 = 1.0 / (grid.spacing(a) * grid.spacing(a));
      acc += (face[a][i] + face[a][i - grid.stride(a)]) * inv_h2;
    }
    d[i] = acc;
  }
  return d;
}

namespace serial {

std::vector<double> apply_axis(std::span<const double> in, const Shape& in_shape, int axis,
                               const AxisMatrix& M) {
  const AxisLayout L = layout(in, in_shape, axis, M);
  std::vector<double> out(L.inner * L.outer * static_cast<std::size_t>(M.rows), 0.0);
  for (std::size_t o = 0; o < L.outer; ++o) transform_slab(in, out, M, L.inner, o);
  return out;
}

void apply_operator(const FluxOperator& op, std::span<const double> x, std::span<double> y) {
  for (std::size_t i = 0; i < op.grid.size(); ++i) y[i] = op.interior[i] ? operator_row(op, x, i) : 0.0;
}

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

void axpy(double alpha, std::span<const double> x, std::span<double> y) {
  for (std::size_t i = 0; i < x.size(); ++i) y[i] += alpha * x[i];
}

}  // namespace serial

namespace parallel {

std::vector<double> apply_axis(std::span<const double> in, const Shape& in_shape, int axis,
                               const AxisMatrix& M) {
  const AxisLayout L = layout(in, in_shape, axis, M);
  std::vector<double> out(L.inner * L.outer * static_cast<std::size_t>(M.rows), 0.0);
  const long outer = static_cast<long>(L.outer);
#pragma omp parallel for schedule(static) if (outer > 1 && out.size() > 4096)
  for (long o = 0; o < outer; ++o) transform_slab(in, out, M, L.inner, static_cast<std::size_t>(o));
  return out;
}

void apply_operator(const FluxOperator& op, std::span<const double> x, std::span<double> y) {
  const long n = static_cast<long>(op.grid.size());
#pragma omp parallel for schedule(static) if (n > 8192)
  for (long i = 0; i < n; ++i) y[i] = op.interior[i] ? operator_row(op, x, static_cast<std::size_t>(i)) : 0.0;
}

double dot(std::span<const double> a, std::span<const double> b) {
  const std::size_t n = a.size();
  const long blocks = static_cast<long>((n + kDotBlock - 1) / kDotBlock);
  std::vector<double> partial(static_cast<std::size_t>(blocks), 0.0);
#pragma omp parallel for schedule(static) if (blocks > 4)
  for (long blk = 0; blk < blocks; ++blk) {
    const std::size_t lo = static_cast<std::size_t>(blk) * kDotBlock;
    const std::size_t hi = std::min(n, lo + kDotBlock);
    double s = 0.0;
    for (std::size_t i = lo; i < hi; ++i) s += a[i] * b[i];
    partial[static_cast<std::size_t>(blk)] = s;
  }
  double s = 0.0;
  for (double p : partial) s += p;
  return s;
}

void axpy(double alpha, std::span<const double> x, std::span<double> y) {
  const long n = static_cast<long>(x.size());
#pragma omp parallel for schedule(static) if (n > 8192)
  for (long i = 0; i < n; ++i) y[i] += alpha * x[i];
}

}  // namespace parallel

}  // namespace dgplab::kernels

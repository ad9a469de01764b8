#include "dgplab/wavelet.hpp"

#include <gsl/gsl_linalg.h>
#include <gsl/gsl_wavelet.h>

#include <cmath>
#include <memory>

#include "dgplab/errors.hpp"

namespace dgplab {

DaubechiesWavelet::DaubechiesWavelet(int vanishing_moments, int resolution)
    : N_(vanishing_moments), R_(resolution), step_(std::ldexp(1.0, -resolution)) {
  if (N_ < 2 || N_ > 10) throw ConfigError("wavelet: vanishing moments must lie in [2, 10]");
  if (R_ < 1 || R_ > 16) throw ConfigError("wavelet: resolution must lie in [1, 16]");
  std::unique_ptr<gsl_wavelet, decltype(&gsl_wavelet_free)> w(gsl_wavelet_alloc(gsl_wavelet_daubechies, 2 * N_),
                                                              &gsl_wavelet_free);
  if (!w) throw ConfigError("wavelet: GSL has no Daubechies filter of this length");
  h_.assign(w->h1, w->h1 + w->nc);
  const int L = static_cast<int>(h_.size());
  const double r2 = std::sqrt(2.0);

  // phi at the integers 1..L-2: phi(i) = sqrt2 sum_k h_k phi(2i - k), sum_i phi(i) = 1.
  const int n = L - 2;
  gsl_matrix* A = gsl_matrix_calloc(n, n);
  gsl_vector* b = gsl_vector_calloc(n);
  for (int i = 1; i <= n; ++i) {
    for (int m = 1; m <= n; ++m) {
      const int k = 2 * i - m;
      double a = (k >= 0 && k < L) ? r2 * h_[k] : 0.0;
      if (i == m) a -= 1.0;
      gsl_matrix_set(A, i - 1, m - 1, a);
    }
  }
  // The system is singular; replace the last row with the normalization.
  for (int m = 0; m < n; ++m) gsl_matrix_set(A, n - 1, m, 1.0);
  gsl_vector_set(b, n - 1, 1.0);
  gsl_permutation* p = gsl_permutation_alloc(n);
  int sign = 0;
  gsl_linalg_LU_decomp(A, p, &sign);
  gsl_vector* x = gsl_vector_alloc(n);
  gsl_linalg_LU_solve(A, p, b, x);

  const std::size_t per_unit = std::size_t{1} << R_;
  const std::size_t size = static_cast<std::size_t>(L - 1) * per_unit + 1;
  phi_.assign(size, 0.0);
  for (int i = 1; i <= n; ++i) phi_[i * per_unit] = gsl_vector_get(x, i - 1);
  gsl_vector_free(x);
  gsl_permutation_free(p);
  gsl_vector_free(b);
  gsl_matrix_free(A);

  // Dyadic refinement: phi(x) = sqrt2 sum_k h_k phi(2x - k).
  for (int level = 1; level <= R_; ++level) {
    const std::size_t stride = per_unit >> level;
    for (std::size_t i = stride; i < size; i += 2 * stride) {
      double v = 0.0;
      for (int k = 0; k < L; ++k) {
        // 2x - k in table units: 2 i - k per_unit.
        const long idx = 2 * static_cast<long>(i) - static_cast<long>(k) * static_cast<long>(per_unit);
        if (idx > 0 && idx < static_cast<long>(size)) v += h_[k] * phi_[idx];
      }
      phi_[i] = r2 * v;
    }
  }

  // psi(x) = sqrt2 sum_k g_k phi(2x - k), g_k = (-1)^k h_{L-1-k}.
  psi_.assign(size, 0.0);
  for (std::size_t i = 0; i < size; ++i) {
    double v = 0.0;
    for (int k = 0; k < L; ++k) {
      const long idx = 2 * static_cast<long>(i) - static_cast<long>(k) * static_cast<long>(per_unit);
      if (idx < 0 || idx >= static_cast<long>(size)) continue;
      const double g = (k % 2 == 0 ? 1.0 : -1.0) * h_[L - 1 - k];
      v += g * phi_[idx];
    }
    psi_[i] = r2 * v;
  }
}

double DaubechiesWavelet::lookup(const std::vector<double>& table, double x) const {
  if (!(x > 0.0) || x >= support_length()) return 0.0;
  const double s = x / step_;
  const auto i = static_cast<std::size_t>(s);
  if (i + 1 >= table.size()) return table.back();
  const double f = s - static_cast<double>(i);
  return (1.0 - f) * table[i] + f * table[i + 1];
}

double DaubechiesWavelet::phi(double x) const { return lookup(phi_, x); }
double DaubechiesWavelet::psi(double x) const { return lookup(psi_, x); }

double DaubechiesWavelet::psi_jk(int j, int k, double s) const {
  return std::sqrt(std::ldexp(1.0, j)) * psi(std::ldexp(s, j) - k);
}

}  // namespace dgplab

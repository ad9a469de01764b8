#pragma once

#include <vector>

namespace dgplab {

/// Daubechies orthogonal wavelet with N vanishing moments (filter length 2N),
/// tabulated by the cascade algorithm on the dyadic grid of step 2^{-resolution}.
/// phi and psi are supported on [0, 2N - 1].
class DaubechiesWavelet {
 public:
  /// N in [2, 10]; filter coefficients come from GSL.
  explicit DaubechiesWavelet(int vanishing_moments, int resolution = 12);

  int vanishing_moments() const { return N_; }
  int filter_length() const { return static_cast<int>(h_.size()); }
  double support_length() const { return static_cast<double>(h_.size() - 1); }
  const std::vector<double>& filter() const { return h_; }

  /// Linear interpolation of the dyadic tables; zero outside the support.
  double phi(double x) const;
  double psi(double x) const;
  /// 2^{j/2} psi(2^j s - k).
  double psi_jk(int j, int k, double s) const;

  /// Tabulated values at x = i * 2^{-resolution}, i = 0..(2N-1) 2^resolution.
  const std::vector<double>& phi_table() const { return phi_; }
  const std::vector<double>& psi_table() const { return psi_; }
  double step() const { return step_; }

 private:
  double lookup(const std::vector<double>& table, double x) const;

  int N_;
  int R_;
  double step_;
  std::vector<double> h_;
  std::vector<double> phi_, psi_;
};

}  // namespace dgplab

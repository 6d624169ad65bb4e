#pragma once

// Collocation nonlinearities of u_tt = u_xx + g(u).
//
// The linear part g'(0) u is moved into the frequencies
// (omega_j = sqrt(j^2 - g'(0))); f only carries g~(u) = g(u) - g'(0) u. On the
// coefficient side every product of trigonometric polynomials is the aliased
// cyclic convolution (y * z)_j = sum_{k + l = j mod 2K} y_k z_l, so f is
// evaluated pointwise at the collocation values and transformed back. No
// dealiasing is applied.

#include <span>
#include <string>
#include <variant>
#include <vector>

#include "trigwave/spectral_core.hpp"

namespace trigwave {

/// g(u) = coefficient * u^p.
struct PowerNonlinearity {
  int p = 2;
  double coefficient = 1.0;
};

/// u_tt - u_xx + rho u = u^p, i.e. g(u) = -rho u + u^p.
struct KleinGordonNonlinearity {
  double rho = 1.0;
  int p = 2;
};

/// g(u) = -sin(u).
struct SineGordonNonlinearity {};

/// g(u) = sum_{m=1}^{M} a_m u^m with a_1 <= 0. The series is used exactly as
/// given; truncation error is the caller's concern.
struct SeriesNonlinearity {
  std::vector<double> coefficients;  // a_1, ..., a_M
};

class NonlinearitySpec {
 public:
  using Kind = std::variant<PowerNonlinearity, KleinGordonNonlinearity,
                            SineGordonNonlinearity, SeriesNonlinearity>;

  /// Throws InvalidArgument on p < 2, rho <= 0, or a_1 > 0.
  explicit NonlinearitySpec(Kind kind);

  static NonlinearitySpec power(int p, double coefficient = 1.0);
  static NonlinearitySpec klein_gordon(double rho, int p);
  static NonlinearitySpec sine_gordon();
  static NonlinearitySpec series(std::vector<double> coefficients);
  /// f = 0 (power kind with zero coefficient).
  static NonlinearitySpec zero();

  const Kind& kind() const noexcept { return kind_; }
  /// g'(0); absorbed into the frequencies.
  double linear_shift() const noexcept;
  bool is_zero() const noexcept;
  std::string name() const;

  /// g~(u) = g(u) - g'(0) u at a single (complex) collocation value.
  Complex apply_pointwise(Complex u) const;

 private:
  Kind kind_;
};

/// (y * z)_j via FFT; throws InvalidArgument on grid mismatch.
CoeffVector cyclic_convolve(const CoeffVector& y, const CoeffVector& z);
/// Same by the O(K^2) double sum.
CoeffVector cyclic_convolve_naive(const CoeffVector& y, const CoeffVector& z);

/// f(y).
CoeffVector evaluate(const NonlinearitySpec& spec, const CoeffVector& y);

/// f(Phi y) with Phi diagonal, given in storage order; throws InvalidArgument
/// if filter.size() != y.size().
CoeffVector filtered(const NonlinearitySpec& spec, std::span<const double> filter,
                     const CoeffVector& y);

}  // namespace trigwave

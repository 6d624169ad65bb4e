#pragma once

// Fourier collocation on the periodic interval [-pi, pi).
//
// A grid with parameter K carries the index set {-K, ..., K-1} and the
// collocation points x_k = pi k / K for the same k. Coefficient vectors are
// stored in FFT layout (j = 0, 1, ..., K-1, -K, ..., -1); every public accessor
// takes the mathematical index j.
//
// Normalization: to_physical evaluates u(x_k) = sum_j y_j exp(i j x_k) without
// scaling, to_spectral applies the factor 1/(2K). This is the only DFT
// normalization used anywhere in the library.

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace trigwave {

using Complex = std::complex<double>;

inline constexpr int kDefaultMaxK = 1 << 20;

class SpectralGrid {
 public:
  /// Throws InvalidArgument for K < 1 or K > max_k.
  explicit SpectralGrid(int k, int max_k = kDefaultMaxK);

  int k() const noexcept { return k_; }
  /// Number of modes / collocation points, 2K.
  std::size_t size() const noexcept { return 2 * static_cast<std::size_t>(k_); }

  int min_index() const noexcept { return -k_; }
  int max_index() const noexcept { return k_ - 1; }

  /// Storage slot of the mathematical index j (j in [-K, K-1]).
  std::size_t slot(int j) const noexcept {
    return static_cast<std::size_t>(j >= 0 ? j : j + 2 * k_);
  }
  /// Mathematical index stored in slot.
  int index(std::size_t slot) const noexcept {
    const int s = static_cast<int>(slot);
    return s < k_ ? s : s - 2 * k_;
  }
  /// Wraps an arbitrary integer into the index set modulo 2K.
  int wrap(long long j) const noexcept;

  /// Indices -K, ..., K-1 in increasing order.
  std::vector<int> indices() const;
  /// Collocation points pi k / K for k = -K, ..., K-1.
  std::vector<double> points() const;
  double spacing() const noexcept;

  bool is_power_of_two() const noexcept { return (k_ & (k_ - 1)) == 0; }

  friend bool operator==(const SpectralGrid&, const SpectralGrid&) = default;

 private:
  int k_;
};

SpectralGrid make_grid(int k, int max_k = kDefaultMaxK);

/// Fourier coefficients y_j, j in {-K, ..., K-1}.
class CoeffVector {
 public:
  explicit CoeffVector(const SpectralGrid& grid);
  /// Takes storage-order values; throws InvalidArgument on length mismatch.
  CoeffVector(const SpectralGrid& grid, std::vector<Complex> storage);

  /// Unit vector e_j.
  static CoeffVector unit(const SpectralGrid& grid, int j, Complex value = 1.0);
  /// Builds a vector from values listed in mathematical order j = -K..K-1.
  static CoeffVector from_math_order(const SpectralGrid& grid,
                                     std::span<const Complex> values);

  const SpectralGrid& grid() const noexcept { return grid_; }
  std::size_t size() const noexcept { return values_.size(); }

  Complex& operator()(int j) { return values_[grid_.slot(j)]; }
  const Complex& operator()(int j) const { return values_[grid_.slot(j)]; }

  std::span<Complex> storage() noexcept { return values_; }
  std::span<const Complex> storage() const noexcept { return values_; }

  /// Values listed in mathematical order j = -K..K-1.
  std::vector<Complex> math_order() const;

  CoeffVector& operator+=(const CoeffVector& other);
  CoeffVector& operator-=(const CoeffVector& other);
  CoeffVector& operator*=(Complex scale);

  friend CoeffVector operator+(CoeffVector a, const CoeffVector& b) { return a += b; }
  friend CoeffVector operator-(CoeffVector a, const CoeffVector& b) { return a -= b; }
  friend CoeffVector operator*(Complex s, CoeffVector a) { return a *= s; }

  bool all_finite() const noexcept;
  double max_abs() const noexcept;

  friend bool operator==(const CoeffVector&, const CoeffVector&) = default;

 private:
  SpectralGrid grid_;
  std::vector<Complex> values_;
};

/// Position and velocity coefficients on a common grid.
struct State {
  CoeffVector position;
  CoeffVector velocity;

  State(CoeffVector y, CoeffVector v);
  explicit State(const SpectralGrid& grid);

  const SpectralGrid& grid() const noexcept { return position.grid(); }
  bool all_finite() const noexcept {
    return position.all_finite() && velocity.all_finite();
  }

  friend bool operator==(const State&, const State&) = default;
};

State operator-(const State& a, const State& b);

/// <j> = max(1, |j|).
inline double bracket(int j) noexcept {
  const int a = j < 0 ? -j : j;
  return a < 1 ? 1.0 : static_cast<double>(a);
}

/// (sum_j <j>^{2s} |y_j|^2)^{1/2}.
double sobolev_norm(const CoeffVector& y, double s);

/// (||y||_{sigma+1}^2 + ||v||_sigma^2)^{1/2}.
double pair_norm(const State& state, double sigma);

/// Checks y_{-j} = conj(y_j) for 1 <= j <= K-1 and real y_0, y_{-K}.
bool is_collocation_real(const CoeffVector& y, double tol = 1e-12);

/// Collocation values u(x_k), k = -K..K-1, via FFT.
std::vector<Complex> to_physical(const CoeffVector& y);
/// Inverse of to_physical; throws InvalidArgument if u.size() != grid.size().
CoeffVector to_spectral(const SpectralGrid& grid, std::span<const Complex> u);

/// O(K^2) direct sums; valid for every K and independent of the FFT path.
std::vector<Complex> to_physical_naive(const CoeffVector& y);
CoeffVector to_spectral_naive(const SpectralGrid& grid,
                              std::span<const Complex> u);

enum class ProjectionMode { fold, truncate };

/// One Fourier coefficient u_k of a function on the torus.
struct FourierTerm {
  long long k;
  Complex value;
};

/// Maps full-space Fourier coefficients onto the grid. fold sums all k
/// congruent to j modulo 2K (trigonometric interpolation); truncate keeps
/// only k in the index set.
CoeffVector project_initial_data(std::span<const FourierTerm> coefficients,
                                 const SpectralGrid& grid, ProjectionMode mode);

}  // namespace trigwave

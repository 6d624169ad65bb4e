#include "trigwave/spectral_core.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "trigwave/errors.hpp"
#include "trigwave/fft.hpp"

namespace trigwave {

SpectralGrid::SpectralGrid(int k, int max_k) : k_(k) {
  if (k < 1) {
    throw InvalidArgument("grid parameter K must be >= 1, got " +
                          std::to_string(k));
  }
  if (k > max_k) {
    throw InvalidArgument("grid parameter K=" + std::to_string(k) +
                          " exceeds the configured maximum " +
                          std::to_string(max_k));
  }
}

int SpectralGrid::wrap(long long j) const noexcept {
  const long long n = 2LL * k_;
  long long r = ((j + k_) % n + n) % n;
  return static_cast<int>(r - k_);
}

std::vector<int> SpectralGrid::indices() const {
  std::vector<int> out;
  out.reserve(size());
  for (int j = -k_; j < k_; ++j) out.push_back(j);
  return out;
}

std::vector<double> SpectralGrid::points() const {
  std::vector<double> out;
  out.reserve(size());
  for (int j = -k_; j < k_; ++j) out.push_back(std::numbers::pi * j / k_);
  return out;
}

double SpectralGrid::spacing() const noexcept { return std::numbers::pi / k_; }

SpectralGrid make_grid(int k, int max_k) { return SpectralGrid(k, max_k); }

CoeffVector::CoeffVector(const SpectralGrid& grid)
    : grid_(grid), values_(grid.size()) {}

CoeffVector::CoeffVector(const SpectralGrid& grid, std::vector<Complex> storage)
    : grid_(grid), values_(std::move(storage)) {
  if (values_.size() != grid_.size()) {
    throw InvalidArgument("coefficient vector has length " +
                          std::to_string(values_.size()) + ", grid needs " +
                          std::to_string(grid_.size()));
  }
}

CoeffVector CoeffVector::unit(const SpectralGrid& grid, int j, Complex value) {
  if (j < grid.min_index() || j > grid.max_index()) {
    throw InvalidArgument("index " + std::to_string(j) + " outside grid");
  }
  CoeffVector out(grid);
  out(j) = value;
  return out;
}

CoeffVector CoeffVector::from_math_order(const SpectralGrid& grid,
                                         std::span<const Complex> values) {
  if (values.size() != grid.size()) {
    throw InvalidArgument("expected " + std::to_string(grid.size()) +
                          " coefficients, got " + std::to_string(values.size()));
  }
  CoeffVector out(grid);
  for (std::size_t i = 0; i < values.size(); ++i) {
    out(grid.min_index() + static_cast<int>(i)) = values[i];
  }
  return out;
}

std::vector<Complex> CoeffVector::math_order() const {
  std::vector<Complex> out;
  out.reserve(size());
  for (int j = grid_.min_index(); j <= grid_.max_index(); ++j) {
    out.push_back((*this)(j));
  }
  return out;
}

namespace {
void require_same_grid(const SpectralGrid& a, const SpectralGrid& b) {
  if (a != b) {
    throw InvalidArgument("grid mismatch: K=" + std::to_string(a.k()) +
                          " vs K=" + std::to_string(b.k()));
  }
}
}  // namespace

CoeffVector& CoeffVector::operator+=(const CoeffVector& other) {
  require_same_grid(grid_, other.grid_);
  for (std::size_t i = 0; i < values_.size(); ++i) values_[i] += other.values_[i];
  return *this;
}

CoeffVector& CoeffVector::operator-=(const CoeffVector& other) {
  require_same_grid(grid_, other.grid_);
  for (std::size_t i = 0; i < values_.size(); ++i) values_[i] -= other.values_[i];
  return *this;
}

CoeffVector& CoeffVector::operator*=(Complex scale) {
  for (auto& v : values_) v *= scale;
  return *this;
}

bool CoeffVector::all_finite() const noexcept {
  return std::all_of(values_.begin(), values_.end(), [](const Complex& v) {
    return std::isfinite(v.real()) && std::isfinite(v.imag());
  });
}

double CoeffVector::max_abs() const noexcept {
  double m = 0.0;
  for (const auto& v : values_) m = std::max(m, std::abs(v));
  return m;
}

State::State(CoeffVector y, CoeffVector v)
    : position(std::move(y)), velocity(std::move(v)) {
  require_same_grid(position.grid(), velocity.grid());
}

State::State(const SpectralGrid& grid) : position(grid), velocity(grid) {}

State operator-(const State& a, const State& b) {
  return State(a.position - b.position, a.velocity - b.velocity);
}

double sobolev_norm(const CoeffVector& y, double s) {
  const auto& grid = y.grid();
  double sum = 0.0;
  for (int j = grid.min_index(); j <= grid.max_index(); ++j) {
    const double w = std::pow(bracket(j), 2.0 * s);
    sum += w * std::norm(y(j));
  }
  return std::sqrt(sum);
}

double pair_norm(const State& state, double sigma) {
  return std::hypot(sobolev_norm(state.position, sigma + 1.0),
                    sobolev_norm(state.velocity, sigma));
}

bool is_collocation_real(const CoeffVector& y, double tol) {
  const int k = y.grid().k();
  if (std::abs(y(0).imag()) > tol || std::abs(y(-k).imag()) > tol) return false;
  for (int j = 1; j < k; ++j) {
    if (std::abs(y(-j) - std::conj(y(j))) > tol) return false;
  }
  return true;
}

// With x_k = pi k / K and k = m - K (m = 0..2K-1), exp(i j x_k) equals
// (-1)^j exp(2 pi i j m / 2K): the shift to k = -K is a sign flip on odd j.

std::vector<Complex> to_physical(const CoeffVector& y) {
  const auto& grid = y.grid();
  std::vector<Complex> u(y.storage().begin(), y.storage().end());
  for (std::size_t s = 0; s < u.size(); ++s) {
    if (grid.index(s) & 1) u[s] = -u[s];
  }
  fft::transform(u, fft::Direction::backward);
  return u;
}

CoeffVector to_spectral(const SpectralGrid& grid, std::span<const Complex> u) {
  if (u.size() != grid.size()) {
    throw InvalidArgument("expected " + std::to_string(grid.size()) +
                          " collocation values, got " + std::to_string(u.size()));
  }
  std::vector<Complex> y(u.begin(), u.end());
  fft::transform(y, fft::Direction::forward);
  const double scale = 1.0 / static_cast<double>(grid.size());
  for (std::size_t s = 0; s < y.size(); ++s) {
    y[s] *= (grid.index(s) & 1) ? -scale : scale;
  }
  return CoeffVector(grid, std::move(y));
}

std::vector<Complex> to_physical_naive(const CoeffVector& y) {
  const auto& grid = y.grid();
  const auto x = grid.points();
  std::vector<Complex> u(grid.size());
  for (std::size_t k = 0; k < x.size(); ++k) {
    Complex sum = 0.0;
    for (int j = grid.min_index(); j <= grid.max_index(); ++j) {
      sum += y(j) * std::polar(1.0, j * x[k]);
    }
    u[k] = sum;
  }
  return u;
}

CoeffVector to_spectral_naive(const SpectralGrid& grid,
                              std::span<const Complex> u) {
  if (u.size() != grid.size()) {
    throw InvalidArgument("expected " + std::to_string(grid.size()) +
                          " collocation values, got " + std::to_string(u.size()));
  }
  const auto x = grid.points();
  CoeffVector y(grid);
  for (int j = grid.min_index(); j <= grid.max_index(); ++j) {
    Complex sum = 0.0;
    for (std::size_t k = 0; k < x.size(); ++k) {
      sum += u[k] * std::polar(1.0, -j * x[k]);
    }
    y(j) = sum / static_cast<double>(grid.size());
  }
  return y;
}

CoeffVector project_initial_data(std::span<const FourierTerm> coefficients,
                                 const SpectralGrid& grid, ProjectionMode mode) {
  CoeffVector y(grid);
  for (const auto& term : coefficients) {
    if (mode == ProjectionMode::fold) {
      y(grid.wrap(term.k)) += term.value;
    } else if (term.k >= grid.min_index() && term.k <= grid.max_index()) {
      y(static_cast<int>(term.k)) += term.value;
    }
  }
  return y;
}

}  // namespace trigwave

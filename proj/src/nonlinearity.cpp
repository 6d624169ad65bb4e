#include "trigwave/nonlinearity.hpp"

#include <cmath>
#include <type_traits>

#include "trigwave/errors.hpp"
#include "trigwave/fft.hpp"

namespace trigwave {
namespace {

Complex int_power(Complex u, int p) {
  Complex result = 1.0;
  Complex base = u;
  while (p > 0) {
    if (p & 1) result *= base;
    base *= base;
    p >>= 1;
  }
  return result;
}

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

// Collocation values at x = 2 pi m / 2K, m = 0..2K-1. This is a permutation of
// the grid points; pointwise maps commute with it, so the sign twist of
// to_physical is unnecessary here.
std::vector<Complex> unshifted_values(const CoeffVector& y) {
  std::vector<Complex> u(y.storage().begin(), y.storage().end());
  fft::transform(u, fft::Direction::backward);
  return u;
}

CoeffVector unshifted_coefficients(const SpectralGrid& grid,
                                   std::vector<Complex> u) {
  fft::transform(u, fft::Direction::forward);
  const double scale = 1.0 / static_cast<double>(grid.size());
  for (auto& v : u) v *= scale;
  return CoeffVector(grid, std::move(u));
}

void require_same_grid(const CoeffVector& y, const CoeffVector& z) {
  if (y.grid() != z.grid()) {
    throw InvalidArgument("convolution operands live on different grids (K=" +
                          std::to_string(y.grid().k()) + " vs K=" +
                          std::to_string(z.grid().k()) + ")");
  }
}

}  // namespace

NonlinearitySpec::NonlinearitySpec(Kind kind) : kind_(std::move(kind)) {
  std::visit(
      Overloaded{
          [](const PowerNonlinearity& k) {
            if (k.p < 2) throw InvalidArgument("power p must be >= 2");
          },
          [](const KleinGordonNonlinearity& k) {
            if (k.p < 2) throw InvalidArgument("Klein-Gordon p must be >= 2");
            if (!(k.rho > 0.0)) throw InvalidArgument("Klein-Gordon rho must be > 0");
          },
          [](const SineGordonNonlinearity&) {},
          [](const SeriesNonlinearity& k) {
            if (!k.coefficients.empty() && k.coefficients.front() > 0.0) {
              throw InvalidArgument("series requires g'(0) = a_1 <= 0");
            }
          },
      },
      kind_);
}

NonlinearitySpec NonlinearitySpec::power(int p, double coefficient) {
  return NonlinearitySpec(PowerNonlinearity{p, coefficient});
}
NonlinearitySpec NonlinearitySpec::klein_gordon(double rho, int p) {
  return NonlinearitySpec(KleinGordonNonlinearity{rho, p});
}
NonlinearitySpec NonlinearitySpec::sine_gordon() {
  return NonlinearitySpec(SineGordonNonlinearity{});
}
NonlinearitySpec NonlinearitySpec::series(std::vector<double> coefficients) {
  return NonlinearitySpec(SeriesNonlinearity{std::move(coefficients)});
}
NonlinearitySpec NonlinearitySpec::zero() { return power(2, 0.0); }

double NonlinearitySpec::linear_shift() const noexcept {
  return std::visit(
      Overloaded{
          [](const PowerNonlinearity&) { return 0.0; },
          [](const KleinGordonNonlinearity& k) { return -k.rho; },
          [](const SineGordonNonlinearity&) { return -1.0; },
          [](const SeriesNonlinearity& k) {
            return k.coefficients.empty() ? 0.0 : k.coefficients.front();
          },
      },
      kind_);
}

bool NonlinearitySpec::is_zero() const noexcept {
  if (const auto* p = std::get_if<PowerNonlinearity>(&kind_)) {
    return p->coefficient == 0.0;
  }
  if (const auto* s = std::get_if<SeriesNonlinearity>(&kind_)) {
    for (std::size_t m = 1; m < s->coefficients.size(); ++m) {
      if (s->coefficients[m] != 0.0) return false;
    }
    return true;
  }
  return false;
}

std::string NonlinearitySpec::name() const {
  return std::visit(
      Overloaded{
          [](const PowerNonlinearity& k) {
            return "power(p=" + std::to_string(k.p) + ")";
          },
          [](const KleinGordonNonlinearity& k) {
            return "klein-gordon(p=" + std::to_string(k.p) + ")";
          },
          [](const SineGordonNonlinearity&) { return std::string("sine-gordon"); },
          [](const SeriesNonlinearity& k) {
            return "series(M=" + std::to_string(k.coefficients.size()) + ")";
          },
      },
      kind_);
}

Complex NonlinearitySpec::apply_pointwise(Complex u) const {
  return std::visit(
      Overloaded{
          [u](const PowerNonlinearity& k) { return k.coefficient * int_power(u, k.p); },
          [u](const KleinGordonNonlinearity& k) { return int_power(u, k.p); },
          [u](const SineGordonNonlinearity&) { return u - std::sin(u); },
          [u](const SeriesNonlinearity& k) {
            // Horner on a_2 u^2 + ... + a_M u^M = u^2 (a_2 + u (a_3 + ...)).
            Complex acc = 0.0;
            for (std::size_t m = k.coefficients.size(); m-- > 1;) {
              acc = acc * u + k.coefficients[m];
            }
            return acc * u * u;
          },
      },
      kind_);
}

CoeffVector cyclic_convolve(const CoeffVector& y, const CoeffVector& z) {
  require_same_grid(y, z);
  auto u = unshifted_values(y);
  const auto w = unshifted_values(z);
  for (std::size_t i = 0; i < u.size(); ++i) u[i] *= w[i];
  return unshifted_coefficients(y.grid(), std::move(u));
}

CoeffVector cyclic_convolve_naive(const CoeffVector& y, const CoeffVector& z) {
  require_same_grid(y, z);
  const auto& grid = y.grid();
  CoeffVector out(grid);
  for (int k = grid.min_index(); k <= grid.max_index(); ++k) {
    for (int l = grid.min_index(); l <= grid.max_index(); ++l) {
      out(grid.wrap(static_cast<long long>(k) + l)) += y(k) * z(l);
    }
  }
  return out;
}

CoeffVector evaluate(const NonlinearitySpec& spec, const CoeffVector& y) {
  if (spec.is_zero()) return CoeffVector(y.grid());
  auto u = unshifted_values(y);
  for (auto& v : u) v = spec.apply_pointwise(v);
  return unshifted_coefficients(y.grid(), std::move(u));
}

CoeffVector filtered(const NonlinearitySpec& spec, std::span<const double> filter,
                     const CoeffVector& y) {
  if (filter.size() != y.size()) {
    throw InvalidArgument("filter has " + std::to_string(filter.size()) +
                          " entries, vector has " + std::to_string(y.size()));
  }
  CoeffVector z = y;
  auto zs = z.storage();
  for (std::size_t i = 0; i < zs.size(); ++i) zs[i] *= filter[i];
  return evaluate(spec, z);
}

}  // namespace trigwave

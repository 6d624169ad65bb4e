#include "trigwave/integrators.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "trigwave/errors.hpp"

namespace trigwave {
namespace {

constexpr double kBlowUpFactor = 1e8;

double min_nonzero(const std::vector<double>& omegas) {
  double m = 0.0;
  for (double w : omegas) {
    if (w > 0.0 && (m == 0.0 || w < m)) m = w;
  }
  return m;
}

void require_finite(const State& state, long step) {
  if (!state.all_finite()) {
    throw BlowUpError("non-finite state after step " + std::to_string(step), step);
  }
}

class GrowthGuard {
 public:
  explicit GrowthGuard(const State& state0) : limit_(kBlowUpFactor * pair_norm(state0, 0.0)) {}

  void check(const State& state, long step) const {
    require_finite(state, step);
    if (limit_ > 0.0) {
      const double norm = pair_norm(state, 0.0);
      if (norm > limit_) {
        std::ostringstream msg;
        msg << "state norm " << norm << " exceeds 1e8 times the initial norm at step "
            << step;
        throw BlowUpError(msg.str(), step);
      }
    }
  }

 private:
  double limit_;
};

}  // namespace

double FrequencySet::max_omega() const {
  return omegas.empty() ? 0.0 : *std::max_element(omegas.begin(), omegas.end());
}

bool FrequencySet::satisfies_growth_bounds(double tol) const {
  for (int j = grid.min_index(); j <= grid.max_index(); ++j) {
    const double aj = std::abs(static_cast<double>(j));
    const double w = omega(j);
    if (w < c1 * aj - tol || w > c2 * (1.0 + aj) + tol) return false;
  }
  return true;
}

FrequencySet frequencies_spectral(const SpectralGrid& grid, double linear_shift) {
  if (linear_shift > 0.0) {
    throw InvalidArgument("linear shift g'(0) must be <= 0, got " +
                          std::to_string(linear_shift));
  }
  FrequencySet fs{grid, std::vector<double>(grid.size())};
  for (std::size_t s = 0; s < grid.size(); ++s) {
    const double j = grid.index(s);
    fs.omegas[s] = linear_shift == 0.0 ? std::abs(j) : std::sqrt(j * j - linear_shift);
  }
  fs.omega_min_nonzero = min_nonzero(fs.omegas);
  fs.origin = linear_shift == 0.0 ? FrequencyOrigin::spectral
                                  : FrequencyOrigin::spectral_shifted;
  fs.linear_shift = linear_shift;
  fs.c1 = 1.0;
  fs.c2 = 1.0 - linear_shift;
  return fs;
}

FrequencySet frequencies_finite_difference(const SpectralGrid& grid,
                                           double linear_shift) {
  if (linear_shift > 0.0) {
    throw InvalidArgument("linear shift g'(0) must be <= 0, got " +
                          std::to_string(linear_shift));
  }
  const double dx = grid.spacing();
  FrequencySet fs{grid, std::vector<double>(grid.size())};
  for (std::size_t s = 0; s < grid.size(); ++s) {
    const double w = 2.0 / dx * std::abs(std::sin(grid.index(s) * dx / 2.0));
    fs.omegas[s] = linear_shift == 0.0 ? w : std::sqrt(w * w - linear_shift);
  }
  fs.omega_min_nonzero = min_nonzero(fs.omegas);
  fs.origin = FrequencyOrigin::finite_difference;
  fs.linear_shift = linear_shift;
  fs.c1 = 2.0 / std::numbers::pi;
  fs.c2 = 1.0 - linear_shift;
  return fs;
}

FrequencySet sv_modified_frequencies(const FrequencySet& freqs, double h) {
  if (!(h > 0.0)) throw InvalidArgument("step size must be positive");
  FrequencySet out = freqs;
  for (std::size_t s = 0; s < freqs.omegas.size(); ++s) {
    const double x = h * freqs.omegas[s];
    if (!(x < 2.0)) {
      std::ostringstream msg;
      msg << "CFL violation: h*omega_j = " << x << " >= 2 at j = "
          << freqs.grid.index(s);
      throw CflViolation(msg.str(), freqs.grid.index(s));
    }
    // cos(h w~) = 1 - (h w)^2 / 2 = 1 - 2 sin^2(h w~ / 2).
    out.omegas[s] = 2.0 * std::asin(x / 2.0) / h;
  }
  out.omega_min_nonzero = min_nonzero(out.omegas);
  out.origin = FrequencyOrigin::sv_modified;
  out.step = h;
  // w <= w~ <= (pi / 2) w on the admissible range.
  out.c2 = freqs.c2 * std::numbers::pi / 2.0;
  return out;
}

OscillatorySystem::OscillatorySystem(FrequencySet frequencies,
                                     NonlinearitySpec nonlinearity,
                                     std::optional<std::vector<double>> inner_filter)
    : frequencies_(std::move(frequencies)),
      nonlinearity_(std::move(nonlinearity)),
      inner_filter_(std::move(inner_filter)) {
  if (frequencies_.omegas.size() != frequencies_.grid.size()) {
    throw InvalidArgument("frequency vector does not match the grid");
  }
  if (inner_filter_ && inner_filter_->size() != frequencies_.grid.size()) {
    throw InvalidArgument("inner filter does not match the grid");
  }
}

CoeffVector OscillatorySystem::force(const CoeffVector& y) const {
  if (inner_filter_) return filtered(nonlinearity_, *inner_filter_, y);
  return evaluate(nonlinearity_, y);
}

OscillatorySystem make_system(const SpectralGrid& grid, const NonlinearitySpec& nl,
                              SpaceDiscretization space) {
  auto freqs = space == SpaceDiscretization::spectral
                   ? frequencies_spectral(grid, nl.linear_shift())
                   : frequencies_finite_difference(grid, nl.linear_shift());
  return OscillatorySystem(std::move(freqs), nl);
}

State exact_propagator_apply(const FrequencySet& freqs, double t, const State& state) {
  if (state.grid() != freqs.grid) throw InvalidArgument("grid mismatch");
  State out(state.grid());
  const auto y = state.position.storage();
  const auto v = state.velocity.storage();
  auto oy = out.position.storage();
  auto ov = out.velocity.storage();
  for (std::size_t s = 0; s < y.size(); ++s) {
    const double w = freqs.omegas[s];
    const double c = std::cos(t * w);
    oy[s] = c * y[s] + t * sinc(t * w) * v[s];
    ov[s] = -w * std::sin(t * w) * y[s] + c * v[s];
  }
  return out;
}

long steps_for(double T, double h) {
  if (!(h > 0.0) || !(T >= 0.0)) {
    throw InvalidArgument("need h > 0 and T >= 0");
  }
  const double ratio = T / h;
  const double n = std::round(ratio);
  if (std::abs(ratio - n) > 1e-9 * std::max(1.0, n)) {
    std::ostringstream msg;
    msg << "step size h=" << h << " does not divide T=" << T;
    throw InvalidArgument(msg.str());
  }
  return static_cast<long>(n);
}

TrigIntegrator::TrigIntegrator(OscillatorySystem system, FilterSet filters, double h)
    : system_(std::move(system)), filters_(std::move(filters)), h_(h) {
  if (h == 0.0 || !std::isfinite(h)) throw InvalidArgument("step size must be nonzero");
  const auto& omegas = system_.frequencies().omegas;
  const std::size_t n = omegas.size();
  cos_.resize(n);
  sinc_h_.resize(n);
  minus_omega_sin_.resize(n);
  half_h2_psi_.resize(n);
  half_h_psi0_.resize(n);
  half_h_psi1_.resize(n);
  phi_.resize(n);
  for (std::size_t s = 0; s < n; ++s) {
    const double w = omegas[s];
    const double xi = h * w;
    cos_[s] = std::cos(xi);
    sinc_h_[s] = h * sinc(xi);
    minus_omega_sin_[s] = -w * std::sin(xi);
    half_h2_psi_[s] = 0.5 * h * h * filters_.psi(xi);
    half_h_psi0_[s] = 0.5 * h * filters_.psi0(xi);
    half_h_psi1_[s] = 0.5 * h * filters_.psi1(xi);
    phi_[s] = filters_.phi(xi);
    if (phi_[s] != 1.0) trivial_phi_ = false;
  }
}

CoeffVector TrigIntegrator::filtered_force(const CoeffVector& y) const {
  if (trivial_phi_) return system_.force(y);
  CoeffVector z = y;
  auto zs = z.storage();
  for (std::size_t s = 0; s < zs.size(); ++s) zs[s] *= phi_[s];
  return system_.force(z);
}

State TrigIntegrator::advance(const State& state, const CoeffVector& force_now,
                              CoeffVector& force_next) const {
  State out(state.grid());
  const auto y = state.position.storage();
  const auto v = state.velocity.storage();
  const auto f0 = force_now.storage();
  auto oy = out.position.storage();
  for (std::size_t s = 0; s < y.size(); ++s) {
    oy[s] = cos_[s] * y[s] + sinc_h_[s] * v[s] + half_h2_psi_[s] * f0[s];
  }
  force_next = filtered_force(out.position);
  const auto f1 = force_next.storage();
  auto ov = out.velocity.storage();
  for (std::size_t s = 0; s < y.size(); ++s) {
    ov[s] = minus_omega_sin_[s] * y[s] + cos_[s] * v[s] + half_h_psi0_[s] * f0[s] +
            half_h_psi1_[s] * f1[s];
  }
  return out;
}

State TrigIntegrator::step(const State& state) const {
  if (state.grid() != system_.grid()) throw InvalidArgument("grid mismatch");
  const CoeffVector f0 = filtered_force(state.position);
  CoeffVector f1(state.grid());
  State out = advance(state, f0, f1);
  require_finite(out, 1);
  return out;
}

State TrigIntegrator::integrate(const State& state0, long n, const Observer& observer,
                                double t0) const {
  if (n < 0) throw InvalidArgument("number of steps must be >= 0");
  if (state0.grid() != system_.grid()) throw InvalidArgument("grid mismatch");
  if (observer) observer(0, t0, state0);
  if (n == 0) return state0;
  const GrowthGuard guard(state0);
  State state = state0;
  CoeffVector force = filtered_force(state.position);
  CoeffVector next(state.grid());
  for (long i = 1; i <= n; ++i) {
    state = advance(state, force, next);
    std::swap(force, next);
    guard.check(state, i);
    if (observer) observer(i, t0 + static_cast<double>(i) * h_, state);
  }
  return state;
}

State trig_step(const OscillatorySystem& system, const FilterSet& fs, double h,
                const State& state) {
  return TrigIntegrator(system, fs, h).step(state);
}

State integrate(const OscillatorySystem& system, const FilterSet& fs, double h,
                long n, const State& state0, const Observer& observer, double t0) {
  return TrigIntegrator(system, fs, h).integrate(state0, n, observer, t0);
}

State sv_run(const OscillatorySystem& system, double h, long n, const State& state0,
             const Observer& observer, double t0) {
  if (n < 0) throw InvalidArgument("number of steps must be >= 0");
  if (!(h > 0.0)) throw InvalidArgument("step size must be positive");
  if (state0.grid() != system.grid()) throw InvalidArgument("grid mismatch");
  if (observer) observer(0, t0, state0);
  if (n == 0) return state0;

  const auto& omegas = system.frequencies().omegas;
  const std::size_t size = omegas.size();
  std::vector<double> two_minus_h2w2(size);
  for (std::size_t s = 0; s < size; ++s) {
    two_minus_h2w2[s] = 2.0 - h * h * omegas[s] * omegas[s];
  }
  const double h2 = h * h;
  const GrowthGuard guard(state0);

  CoeffVector prev = state0.position;
  CoeffVector cur(state0.grid());
  {
    const CoeffVector f = system.force(prev);
    const auto y = prev.storage();
    const auto v = state0.velocity.storage();
    const auto fs = f.storage();
    auto out = cur.storage();
    for (std::size_t s = 0; s < size; ++s) {
      out[s] = 0.5 * two_minus_h2w2[s] * y[s] + h * v[s] + 0.5 * h2 * fs[s];
    }
  }
  CoeffVector next(state0.grid());
  State state(state0.grid());
  for (long i = 1; i <= n; ++i) {
    const CoeffVector f = system.force(cur);
    const auto y0 = prev.storage();
    const auto y1 = cur.storage();
    const auto fs = f.storage();
    auto y2 = next.storage();
    for (std::size_t s = 0; s < size; ++s) {
      y2[s] = two_minus_h2w2[s] * y1[s] - y0[s] + h2 * fs[s];
    }
    state.position = cur;
    auto vel = state.velocity.storage();
    for (std::size_t s = 0; s < size; ++s) vel[s] = (y2[s] - y0[s]) / (2.0 * h);
    guard.check(state, i);
    if (observer) observer(i, t0 + static_cast<double>(i) * h, state);
    std::swap(prev, cur);
    std::swap(cur, next);
  }
  return state;
}

std::vector<State> sv_two_step_run(const OscillatorySystem& system, double h, long n,
                                   const State& state0) {
  std::vector<State> states;
  states.reserve(static_cast<std::size_t>(n) + 1);
  sv_run(system, h, n, state0,
         [&states](long, double, const State& s) { states.push_back(s); });
  return states;
}

State SvTrigForm::to_modified(const State& state) const {
  State out = state;
  auto v = out.velocity.storage();
  for (std::size_t s = 0; s < v.size(); ++s) v[s] *= velocity_transform[s];
  return out;
}

State SvTrigForm::from_modified(const State& state) const {
  State out = state;
  auto v = out.velocity.storage();
  for (std::size_t s = 0; s < v.size(); ++s) v[s] /= velocity_transform[s];
  return out;
}

SvTrigForm sv_as_trig(const OscillatorySystem& system, double h) {
  auto modified = sv_modified_frequencies(system.frequencies(), h);
  std::vector<double> transform(modified.omegas.size());
  for (std::size_t s = 0; s < transform.size(); ++s) {
    transform[s] = 1.0 / sinc(h * modified.omegas[s]);
  }
  FilterSet filters(
      "SV", [](double) { return 1.0; }, [](double) { return 1.0; },
      [](double x) { return std::cos(x) / sinc(x); },
      [](double x) { return 1.0 / sinc(x); });
  return SvTrigForm{
      OscillatorySystem(std::move(modified), system.nonlinearity(), system.inner_filter()),
      std::move(filters), std::move(transform)};
}

ReferenceResult reference_solution(const OscillatorySystem& system,
                                   const State& state0, double T, double h_ref,
                                   const ReferenceOptions& options) {
  const long n = steps_for(T, h_ref);
  const FilterSet g = method_filters("G");
  State coarse = TrigIntegrator(system, g, h_ref).integrate(state0, n);
  State fine = TrigIntegrator(system, g, h_ref / 2.0).integrate(state0, 2 * n);
  const double discrepancy = pair_norm(fine - coarse, options.s - 1.0);
  if (!(discrepancy <= options.tolerance)) {
    std::ostringstream msg;
    msg << "reference solution not converged: |||G(h) - G(h/2)|||_" << options.s - 1.0
        << " = " << discrepancy << " > " << options.tolerance << " (K="
        << system.grid().k() << ", h_ref=" << h_ref << ")";
    throw ReferenceUnconverged(msg.str(), std::move(coarse), std::move(fine),
                               discrepancy);
  }
  return ReferenceResult{std::move(fine), discrepancy};
}

}  // namespace trigwave

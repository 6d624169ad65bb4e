#pragma once

// Time integration of y'' = -Omega^2 y + f(y) with diagonal Omega.
//
// TrigIntegrator implements the explicit one-step scheme
//
//   y+  = cos(h Omega) y + h sinc(h Omega) v + h^2/2 Psi f(Phi y)
//   v+  = -Omega sin(h Omega) y + cos(h Omega) v
//         + h/2 Psi0 f(Phi y) + h/2 Psi1 f(Phi y+)
//
// with filters evaluated at xi = h omega_j. The position update does not
// depend on v+, so the two stages run in sequence without iteration.

#include <functional>
#include <optional>
#include <stdexcept>
#include <vector>

#include "trigwave/filters.hpp"
#include "trigwave/nonlinearity.hpp"
#include "trigwave/spectral_core.hpp"

namespace trigwave {

enum class FrequencyOrigin { spectral, spectral_shifted, finite_difference, sv_modified };

/// Diagonal frequencies omega_j >= 0 together with the constants of the
/// two-sided growth bound c1 |j| <= omega_j <= c2 (1 + |j|).
struct FrequencySet {
  SpectralGrid grid;
  std::vector<double> omegas;  // storage order
  double omega_min_nonzero = 0.0;
  FrequencyOrigin origin = FrequencyOrigin::spectral;
  double linear_shift = 0.0;   // g'(0) for shifted spectra
  double step = 0.0;           // h for sv_modified
  double c1 = 1.0;
  double c2 = 1.0;

  double omega(int j) const { return omegas[grid.slot(j)]; }
  double max_omega() const;
  /// Numerically checks c1 |j| <= omega_j <= c2 (1 + |j|) for every j.
  bool satisfies_growth_bounds(double tol = 1e-12) const;
};

/// omega_j = sqrt(j^2 - linear_shift); throws InvalidArgument if
/// linear_shift > 0.
FrequencySet frequencies_spectral(const SpectralGrid& grid, double linear_shift = 0.0);

/// omega_j = (2 / dx) |sin(j dx / 2)| with dx = pi / K, optionally shifted as
/// sqrt(omega_j^2 - linear_shift).
FrequencySet frequencies_finite_difference(const SpectralGrid& grid,
                                           double linear_shift = 0.0);

/// Modified frequencies with cos(h w~) = 1 - h^2 w^2 / 2, computed as
/// w~ = 2 asin(h w / 2) / h. Throws CflViolation naming the first j with
/// h omega_j >= 2.
FrequencySet sv_modified_frequencies(const FrequencySet& freqs, double h);

class OscillatorySystem {
 public:
  /// inner_filter, when present, is a diagonal applied inside f (storage
  /// order): the system force becomes f(inner_filter . y).
  OscillatorySystem(FrequencySet frequencies, NonlinearitySpec nonlinearity,
                    std::optional<std::vector<double>> inner_filter = std::nullopt);

  const SpectralGrid& grid() const noexcept { return frequencies_.grid; }
  const FrequencySet& frequencies() const noexcept { return frequencies_; }
  const NonlinearitySpec& nonlinearity() const noexcept { return nonlinearity_; }
  const std::optional<std::vector<double>>& inner_filter() const noexcept {
    return inner_filter_;
  }

  CoeffVector force(const CoeffVector& y) const;

 private:
  FrequencySet frequencies_;
  NonlinearitySpec nonlinearity_;
  std::optional<std::vector<double>> inner_filter_;
};

enum class SpaceDiscretization { spectral, finite_difference };

/// Builds the semi-discrete system for a nonlinearity, moving g'(0) into the
/// frequencies.
OscillatorySystem make_system(const SpectralGrid& grid, const NonlinearitySpec& nl,
                              SpaceDiscretization space = SpaceDiscretization::spectral);

/// Applies R(t) = [[cos(t w), t sinc(t w)], [-w sin(t w), cos(t w)]] mode by mode.
State exact_propagator_apply(const FrequencySet& freqs, double t, const State& state);

/// Observer invoked with (n, t_n, state at step n), including n = 0.
using Observer = std::function<void(long, double, const State&)>;

/// Number of steps N with N h = T; throws InvalidArgument unless T / h is an
/// integer up to 1e-9 relative.
long steps_for(double T, double h);

class TrigIntegrator {
 public:
  /// Precomputes all diagonal coefficients for this (h, frequencies) pair.
  /// h may be negative (backward in time) but not zero.
  TrigIntegrator(OscillatorySystem system, FilterSet filters, double h);

  /// One step; throws BlowUpError if the result is not finite.
  State step(const State& state) const;

  /// n steps from state0. Aborts with BlowUpError on a non-finite state or
  /// once |||state|||_0 exceeds 1e8 |||state0|||_0.
  State integrate(const State& state0, long n, const Observer& observer = {},
                  double t0 = 0.0) const;

  const OscillatorySystem& system() const noexcept { return system_; }
  const FilterSet& filters() const noexcept { return filters_; }
  double step_size() const noexcept { return h_; }

 private:
  CoeffVector filtered_force(const CoeffVector& y) const;
  State advance(const State& state, const CoeffVector& force_now,
                CoeffVector& force_next) const;

  OscillatorySystem system_;
  FilterSet filters_;
  double h_;
  bool trivial_phi_ = true;
  // Per-slot coefficients.
  std::vector<double> cos_, sinc_h_, minus_omega_sin_;
  std::vector<double> half_h2_psi_, half_h_psi0_, half_h_psi1_, phi_;
};

State trig_step(const OscillatorySystem& system, const FilterSet& fs, double h,
                const State& state);

State integrate(const OscillatorySystem& system, const FilterSet& fs, double h,
                long n, const State& state0, const Observer& observer = {},
                double t0 = 0.0);

/// Stormer-Verlet / leapfrog in two-step form:
///   y^{n+1} - 2 y^n + y^{n-1} = -h^2 Omega^2 y^n + h^2 f(y^n),
///   y^1 = y^0 + h v^0 - h^2/2 Omega^2 y^0 + h^2/2 f(y^0),
///   v^n = (y^{n+1} - y^{n-1}) / (2h)  for n >= 1.
/// The velocity at n = N uses one additional position step. No step-size
/// restriction is enforced; instability is reported as BlowUpError under the
/// same rule as TrigIntegrator::integrate.
State sv_run(const OscillatorySystem& system, double h, long n, const State& state0,
             const Observer& observer = {}, double t0 = 0.0);

/// All states n = 0..N of sv_run.
std::vector<State> sv_two_step_run(const OscillatorySystem& system, double h, long n,
                                   const State& state0);

/// Stormer-Verlet written as a trigonometric integrator on modified
/// frequencies: Phi = Psi = 1, Psi0 = cos/sinc, Psi1 = 1/sinc at h w~, acting
/// on modified velocities v~ = sinc(h W~)^{-1} v.
struct SvTrigForm {
  OscillatorySystem system;
  FilterSet filters;
  std::vector<double> velocity_transform;  // sinc(h w~_j)^{-1}, storage order

  State to_modified(const State& state) const;
  State from_modified(const State& state) const;
};

/// Throws CflViolation unless h omega_j < 2 for every j.
SvTrigForm sv_as_trig(const OscillatorySystem& system, double h);

class ReferenceUnconverged : public std::runtime_error {
 public:
  ReferenceUnconverged(const std::string& what, State coarse, State fine,
                       double discrepancy)
      : std::runtime_error(what),
        coarse_(std::move(coarse)),
        fine_(std::move(fine)),
        discrepancy_(discrepancy) {}

  const State& coarse() const noexcept { return coarse_; }
  const State& fine() const noexcept { return fine_; }
  double discrepancy() const noexcept { return discrepancy_; }

 private:
  State coarse_;
  State fine_;
  double discrepancy_;
};

struct ReferenceOptions {
  /// Regularity index s; the check uses |||.|||_{s-1}.
  double s = 0.0;
  /// Accepted |||fine - coarse|||_{s-1} (absolute).
  double tolerance = 1e-6;
};

struct ReferenceResult {
  State solution;      // method G at h_ref / 2
  double discrepancy;  // |||G(h_ref) - G(h_ref/2)|||_{s-1}
};

/// Ground truth at time T: method G at h_ref and at h_ref / 2. Throws
/// ReferenceUnconverged if the two disagree by more than the tolerance.
ReferenceResult reference_solution(const OscillatorySystem& system,
                                   const State& state0, double T, double h_ref,
                                   const ReferenceOptions& options = {});

}  // namespace trigwave

#pragma once

// Filter functions of one-step trigonometric integrators.
//
// A method is fixed by four even scalar functions psi, phi, psi0, psi1 of
// xi = h omega, all equal to 1 at xi = 0. Catalog methods carry psi0 and psi1
// in closed form (never as psi / sinc), so no removable singularity is ever
// divided through.

#include <cmath>
#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace trigwave {

/// sin(xi) / xi with sinc(0) = 1.
double sinc(double xi) noexcept;

/// Characteristic function of [-pi, pi] (closed interval).
double indicator_pi(double xi) noexcept;

class FilterSet {
 public:
  using Function = std::function<double(double)>;

  /// Throws InvalidArgument unless all four functions equal 1 at xi = 0
  /// (within 1e-14).
  FilterSet(std::string name, Function psi, Function phi, Function psi0,
            Function psi1);

  /// Piecewise-linear interpolation of tabulated values; constant
  /// extrapolation beyond the last sample. xi must be strictly increasing
  /// and start at 0.
  static FilterSet tabulated(std::string name, std::vector<double> xi,
                             std::vector<double> psi, std::vector<double> phi,
                             std::vector<double> psi0, std::vector<double> psi1);

  const std::string& name() const noexcept { return name_; }

  // Filters are even; arguments are taken by absolute value so that negative
  // step sizes (time reversal) evaluate the same functions.
  double psi(double xi) const { return psi_(std::abs(xi)); }
  double phi(double xi) const { return phi_(std::abs(xi)); }
  double psi0(double xi) const { return psi0_(std::abs(xi)); }
  double psi1(double xi) const { return psi1_(std::abs(xi)); }

  FilterSet with_phi(Function phi, std::string name) const;
  FilterSet with_psi0(Function psi0, std::string name) const;

 private:
  std::string name_;
  Function psi_, phi_, psi0_, psi1_;
};

/// Catalog names accepted by method_filters.
inline constexpr std::string_view kMethodNames[] = {"B", "C", "E", "G", "Btilde"};

/// Throws InvalidArgument for unknown names.
FilterSet method_filters(std::string_view name);

struct SymmetryReport {
  bool symmetric = false;
  bool symplectic = false;
};

/// Tests psi = sinc psi1, psi0 = cos psi1 (symmetry) and psi = sinc phi
/// (symplecticity) at every sample with absolute tolerance tol.
SymmetryReport check_symmetry_symplecticity(const FilterSet& fs,
                                            std::span<const double> xi_samples,
                                            double tol = 1e-12);

enum class FilterBound {
  phi_bounded,        // |phi| <= c
  psi_decay,          // |psi| <= c xi^beta, beta <= 0
  psi_consistency,    // |1 - psi| <= c xi^beta, beta > 0
  phi_consistency,    // |1 - phi| <= c xi^(1+beta)
  psi0_consistency,   // |1 - psi0| <= c xi^(1+beta)
  psi1_consistency,   // |1 - psi1| <= c xi^(1+beta)
};

std::string_view to_string(FilterBound bound);

struct BoundViolation {
  double xi;
  FilterBound bound;
  double lhs;
  double rhs;
};

struct AssumptionReport {
  std::string method;
  double beta;
  double c;
  std::vector<double> xi_samples;
  std::vector<BoundViolation> violations;

  bool passed() const noexcept { return violations.empty(); }
};

/// n logarithmically spaced points in [lo, hi].
std::vector<double> logspace(double lo, double hi, int n);

/// Default sampling for the filter-bound check: 2000 points in [1e-3, 1e3].
std::vector<double> default_xi_samples();

/// Samples the four filter bounds. Throws InvalidArgument if beta is outside
/// [-1, 1], c <= 0, or any sample is <= 0.
AssumptionReport check_assumption(const FilterSet& fs, double beta, double c,
                                  std::span<const double> xi_samples);

}  // namespace trigwave

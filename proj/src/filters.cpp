#include "trigwave/filters.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "trigwave/errors.hpp"

namespace trigwave {

double sinc(double xi) noexcept {
  if (std::abs(xi) < 1e-4) {
    const double x2 = xi * xi;
    return 1.0 - x2 / 6.0 + x2 * x2 / 120.0;
  }
  return std::sin(xi) / xi;
}

double indicator_pi(double xi) noexcept {
  return std::abs(xi) <= std::numbers::pi ? 1.0 : 0.0;
}

FilterSet::FilterSet(std::string name, Function psi, Function phi,
                     Function psi0, Function psi1)
    : name_(std::move(name)),
      psi_(std::move(psi)),
      phi_(std::move(phi)),
      psi0_(std::move(psi0)),
      psi1_(std::move(psi1)) {
  const auto check = [this](const Function& f, const char* which) {
    if (!f) throw InvalidArgument("filter set '" + name_ + "': " + which + " is empty");
    const double v = f(0.0);
    if (!(std::abs(v - 1.0) <= 1e-14)) {
      throw InvalidArgument("filter set '" + name_ + "': " + which +
                            "(0) = " + std::to_string(v) + ", must be 1");
    }
  };
  check(psi_, "psi");
  check(phi_, "phi");
  check(psi0_, "psi0");
  check(psi1_, "psi1");
}

namespace {

FilterSet::Function interpolant(std::vector<double> xs, std::vector<double> ys) {
  return [xs = std::move(xs), ys = std::move(ys)](double x) {
    if (x <= xs.front()) return ys.front();
    if (x >= xs.back()) return ys.back();
    const auto it = std::upper_bound(xs.begin(), xs.end(), x);
    const auto i = static_cast<std::size_t>(it - xs.begin());
    const double t = (x - xs[i - 1]) / (xs[i] - xs[i - 1]);
    return ys[i - 1] + t * (ys[i] - ys[i - 1]);
  };
}

}  // namespace

FilterSet FilterSet::tabulated(std::string name, std::vector<double> xi,
                               std::vector<double> psi, std::vector<double> phi,
                               std::vector<double> psi0,
                               std::vector<double> psi1) {
  const std::size_t n = xi.size();
  if (n < 2 || psi.size() != n || phi.size() != n || psi0.size() != n ||
      psi1.size() != n) {
    throw InvalidArgument("tabulated filter '" + name +
                          "' needs >= 2 rows and equal column lengths");
  }
  if (xi.front() != 0.0) {
    throw InvalidArgument("tabulated filter '" + name + "' must start at xi = 0");
  }
  for (std::size_t i = 1; i < n; ++i) {
    if (!(xi[i] > xi[i - 1])) {
      throw InvalidArgument("tabulated filter '" + name +
                            "': xi must be strictly increasing");
    }
  }
  return FilterSet(std::move(name), interpolant(xi, std::move(psi)),
                   interpolant(xi, std::move(phi)), interpolant(xi, std::move(psi0)),
                   interpolant(xi, std::move(psi1)));
}

FilterSet FilterSet::with_phi(Function phi, std::string name) const {
  return FilterSet(std::move(name), psi_, std::move(phi), psi0_, psi1_);
}

FilterSet FilterSet::with_psi0(Function psi0, std::string name) const {
  return FilterSet(std::move(name), psi_, phi_, std::move(psi0), psi1_);
}

FilterSet method_filters(std::string_view name) {
  using std::cos;
  if (name == "B") {
    return FilterSet(
        "B", [](double x) { return sinc(x); }, [](double) { return 1.0; },
        [](double x) { return cos(x); }, [](double) { return 1.0; });
  }
  if (name == "C") {
    return FilterSet(
        "C", [](double x) { return sinc(x) * sinc(x); },
        [](double x) { return sinc(x); },
        [](double x) { return cos(x) * sinc(x); }, [](double x) { return sinc(x); });
  }
  if (name == "E") {
    return FilterSet(
        "E", [](double x) { return sinc(x) * sinc(x); }, [](double) { return 1.0; },
        [](double x) { return cos(x) * sinc(x); }, [](double x) { return sinc(x); });
  }
  if (name == "G") {
    return FilterSet(
        "G",
        [](double x) {
          const double s = sinc(x);
          return s * s * s;
        },
        [](double x) { return sinc(x); },
        [](double x) {
          const double s = sinc(x);
          return cos(x) * s * s;
        },
        [](double x) {
          const double s = sinc(x);
          return s * s;
        });
  }
  if (name == "Btilde") {
    return FilterSet(
        "Btilde", [](double x) { return indicator_pi(x) * sinc(x); },
        [](double x) { return indicator_pi(x); },
        [](double x) { return indicator_pi(x) * cos(x); },
        [](double x) { return indicator_pi(x); });
  }
  throw InvalidArgument("unknown method '" + std::string(name) +
                        "' (expected one of B, C, E, G, Btilde)");
}

SymmetryReport check_symmetry_symplecticity(const FilterSet& fs,
                                            std::span<const double> xi_samples,
                                            double tol) {
  if (xi_samples.empty()) throw InvalidArgument("no xi samples given");
  SymmetryReport report{true, true};
  for (double xi : xi_samples) {
    const double psi1 = fs.psi1(xi);
    if (std::abs(fs.psi(xi) - sinc(xi) * psi1) > tol ||
        std::abs(fs.psi0(xi) - std::cos(xi) * psi1) > tol) {
      report.symmetric = false;
    }
    if (std::abs(fs.psi(xi) - sinc(xi) * fs.phi(xi)) > tol) {
      report.symplectic = false;
    }
  }
  return report;
}

std::string_view to_string(FilterBound bound) {
  switch (bound) {
    case FilterBound::phi_bounded: return "|phi| <= c";
    case FilterBound::psi_decay: return "|psi| <= c xi^beta";
    case FilterBound::psi_consistency: return "|1-psi| <= c xi^beta";
    case FilterBound::phi_consistency: return "|1-phi| <= c xi^(1+beta)";
    case FilterBound::psi0_consistency: return "|1-psi0| <= c xi^(1+beta)";
    case FilterBound::psi1_consistency: return "|1-psi1| <= c xi^(1+beta)";
  }
  return "?";
}

std::vector<double> logspace(double lo, double hi, int n) {
  if (n < 1 || !(lo > 0.0) || !(hi >= lo)) {
    throw InvalidArgument("logspace needs n >= 1 and 0 < lo <= hi");
  }
  std::vector<double> out(static_cast<std::size_t>(n));
  if (n == 1) {
    out[0] = lo;
    return out;
  }
  const double a = std::log10(lo);
  const double b = std::log10(hi);
  for (int i = 0; i < n; ++i) {
    out[static_cast<std::size_t>(i)] = std::pow(10.0, a + (b - a) * i / (n - 1));
  }
  out.back() = hi;
  return out;
}

std::vector<double> default_xi_samples() { return logspace(1e-3, 1e3, 2000); }

AssumptionReport check_assumption(const FilterSet& fs, double beta, double c,
                                  std::span<const double> xi_samples) {
  if (!(beta >= -1.0 && beta <= 1.0)) {
    throw InvalidArgument("beta must lie in [-1, 1], got " + std::to_string(beta));
  }
  if (!(c > 0.0)) throw InvalidArgument("c must be positive");
  AssumptionReport report{fs.name(), beta, c,
                          std::vector<double>(xi_samples.begin(), xi_samples.end()),
                          {}};
  const auto test = [&](double xi, FilterBound bound, double lhs, double rhs) {
    if (!(lhs <= rhs)) report.violations.push_back({xi, bound, lhs, rhs});
  };
  for (double xi : xi_samples) {
    if (!(xi > 0.0)) throw InvalidArgument("xi samples must be positive");
    const double consistency = c * std::pow(xi, 1.0 + beta);
    test(xi, FilterBound::phi_bounded, std::abs(fs.phi(xi)), c);
    if (beta <= 0.0) {
      test(xi, FilterBound::psi_decay, std::abs(fs.psi(xi)), c * std::pow(xi, beta));
    } else {
      test(xi, FilterBound::psi_consistency, std::abs(1.0 - fs.psi(xi)),
           c * std::pow(xi, beta));
    }
    test(xi, FilterBound::phi_consistency, std::abs(1.0 - fs.phi(xi)), consistency);
    test(xi, FilterBound::psi0_consistency, std::abs(1.0 - fs.psi0(xi)), consistency);
    test(xi, FilterBound::psi1_consistency, std::abs(1.0 - fs.psi1(xi)), consistency);
  }
  return report;
}

}  // namespace trigwave

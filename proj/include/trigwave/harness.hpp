#pragma once

// Convergence experiments: low-regularity initial data, sweeps over
// (method, K, h), errors against a verified reference, and order fits.

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "trigwave/integrators.hpp"
#include "trigwave/nonlinearity.hpp"
#include "trigwave/spectral_core.hpp"

namespace trigwave {

/// SplitMix64. The phase generator of the initial data; written out so that
/// any port reproduces the same sequence:
///
///   state += 0x9E3779B97F4A7C15
///   z = state
///   z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9
///   z = (z ^ (z >> 27)) * 0x94D049BB133111EB
///   return z ^ (z >> 31)
///
/// uniform() maps the top 53 bits to [0, 1).
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) noexcept : state_(seed) {}
  std::uint64_t next() noexcept;
  double uniform() noexcept {
    return static_cast<double>(next() >> 11) * 0x1.0p-53;
  }

 private:
  std::uint64_t state_;
};

struct InitialDataSpec {
  std::uint64_t seed = 1;
  double decay_y = 1.51;
  double decay_v = 0.51;
  int K = 32;
};

/// y_j = exp(i theta_j) <j>^{-decay_y}, v_j = exp(i phi_j) <j>^{-decay_v}.
///
/// Phases theta = 2 pi u with u from SplitMix64(seed), drawn for y in the
/// order j = 0, 1, ..., K-1, -K and then for v in the same order. The modes
/// j = 0 and j = -K get the real unit value sign(cos theta). Negative
/// j = -1..-(K-1) are set to conj(y_{|j|}), so the collocation values are real.
State generate_initial_data(const InitialDataSpec& spec, int max_k = kDefaultMaxK);

/// combined is the product-space error (err_y^2 + err_v^2)^{1/2}.
enum class ErrorComponent { position, velocity, combined };

std::string_view to_string(ErrorComponent c);

struct ErrorRecord {
  std::string method;
  int K = 0;
  double h = 0.0;
  double alpha = 0.0;
  double err_y = 0.0;  // ||y(T) - y^N||_{s+1-alpha}
  double err_v = 0.0;  // ||v(T) - v^N||_{s-alpha}
  bool blowup = false;

  double error(ErrorComponent c) const noexcept;
};

struct ReferenceInfo {
  int K;
  double discrepancy;
};

struct ErrorTable {
  std::vector<ErrorRecord> records;  // sorted by (method, K, h desc, alpha desc)
  std::vector<ReferenceInfo> references;

  std::vector<int> ks() const;
  std::vector<double> hs() const;
  const ErrorRecord* find(const std::string& method, int K, double h,
                          double alpha) const;
};

struct ExperimentConfig {
  std::string equation = "power";  // power | klein-gordon | sine-gordon
  int p = 2;
  double rho = 1.0;
  double coefficient = 1.0;  // scales the power nonlinearity; 0 gives f = 0
  SpaceDiscretization space = SpaceDiscretization::spectral;

  std::vector<std::string> methods = {"C"};  // B C E G Btilde SV
  std::vector<int> K = {32, 128, 512};
  std::vector<double> h;
  std::vector<double> alpha = {1.0, 0.5, 0.0, -0.5, -1.0};
  double T = 1.0;
  double t0 = 0.0;
  double s = 0.0;

  double h_ref = 0x1.0p-14;
  double ref_tolerance = 1e-6;

  std::uint64_t seed = 1;
  double decay_y = 1.51;
  double decay_v = 0.51;

  int jobs = 0;  // 0: hardware concurrency
  int max_K = kDefaultMaxK;
  std::string output = "convergence";  // prefix of <output>.csv / <output>.json

  NonlinearitySpec nonlinearity() const;
  /// Throws InvalidArgument naming the offending field.
  void validate() const;
};

using ProgressLog = std::function<void(const std::string&)>;

/// Integrates every (method, K, h) to T and measures errors against a
/// per-K reference in the norms of every alpha. Unstable runs are recorded
/// with infinite errors and the blowup flag. Throws ReferenceUnconverged if a
/// reference fails its self-check.
ErrorTable run_convergence_study(const ExperimentConfig& config,
                                 const ProgressLog& log = {});

struct OrderFit {
  double slope = 0.0;
  double intercept = 0.0;
  double residual = 0.0;  // RMS of log-residuals
  std::size_t used = 0;
  std::size_t excluded = 0;
};

/// Least-squares slope of log(err) against log(h). Points with nonpositive
/// or non-finite error are skipped; fewer than 3 usable points throws
/// FitUndefined.
OrderFit fit_order(const std::vector<std::pair<double, double>>& points);

/// Per h, the maximum error across all K in the table for (method, alpha).
/// With max_hk, cells with h K > max_hk are ignored and h values left without
/// any cell are dropped. Throws IncompleteGrid if a (K, h) cell is missing.
std::vector<std::pair<double, double>> uniform_error_envelope(
    const ErrorTable& table, const std::string& method, double alpha,
    ErrorComponent component = ErrorComponent::position,
    std::optional<double> max_hk = std::nullopt);

/// The `count` smallest h with h * k_max > pi, i.e. the step sizes on which
/// the largest grid is not under the CFL-type restriction.
std::vector<std::pair<double, double>> cfl_unrestricted_window(
    const std::vector<std::pair<double, double>>& envelope, int k_max,
    std::size_t count = 4);

/// Errors for one (method, K, alpha) restricted to h K <= max_hk.
std::vector<std::pair<double, double>> fixed_k_series(
    const ErrorTable& table, const std::string& method, int K, double alpha,
    ErrorComponent component, double max_hk);

struct OrderSummary {
  std::string method;
  double alpha;
  ErrorComponent component;
  std::optional<OrderFit> fit;
  std::string note;
};

/// Uniform-in-K order for every (method, alpha, position/velocity) of the
/// table, fitted on the CFL-unrestricted window.
std::vector<OrderSummary> summarize_orders(const ErrorTable& table);

/// CSV with header method,K,h,alpha,err_y,err_v,flags; 17 significant digits.
void write_csv(std::ostream& out, const ErrorTable& table);

/// Versioned JSON summary ("schema": 1) embedding the resolved config.
std::string summary_json(const ExperimentConfig& config, const ErrorTable& table,
                         const std::vector<OrderSummary>& orders);

/// The config as JSON (same keys as the config file).
std::string config_json(const ExperimentConfig& config);

}  // namespace trigwave

#include "trigwave/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <map>
#include <mutex>
#include <numbers>
#include <ostream>
#include <set>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "trigwave/errors.hpp"
#include "trigwave/filters.hpp"

namespace trigwave {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Runs body(i) for i in [0, count) on up to `jobs` threads. The first
// exception thrown by any task is rethrown after all workers finish.
void parallel_for(std::size_t count, int jobs,
                  const std::function<void(std::size_t)>& body) {
  unsigned workers = jobs > 0 ? static_cast<unsigned>(jobs)
                              : std::max(1u, std::thread::hardware_concurrency());
  workers = std::min<unsigned>(workers, static_cast<unsigned>(std::max<std::size_t>(count, 1)));
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  const auto run = [&] {
    for (std::size_t i = next++; i < count; i = next++) {
      try {
        body(i);
      } catch (...) {
        const std::lock_guard<std::mutex> lock(error_mutex);
        if (!error) error = std::current_exception();
        next = count;
      }
    }
  };
  if (workers <= 1) {
    run();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(run);
    for (auto& t : pool) t.join();
  }
  if (error) std::rethrow_exception(error);
}

bool is_known_method(const std::string& m) {
  if (m == "SV") return true;
  return std::find(std::begin(kMethodNames), std::end(kMethodNames), m) !=
         std::end(kMethodNames);
}

std::string format_double(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (std::isnan(v)) return "nan";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

std::uint64_t SplitMix64::next() noexcept {
  state_ += 0x9E3779B97F4A7C15ULL;
  std::uint64_t z = state_;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

State generate_initial_data(const InitialDataSpec& spec, int max_k) {
  const SpectralGrid grid(spec.K, max_k);
  SplitMix64 rng(spec.seed);
  const int k = grid.k();
  const auto fill = [&](CoeffVector& y, double decay) {
    const auto amplitude = [decay](int j) { return std::pow(bracket(j), -decay); };
    const auto real_unit = [&rng] {
      return std::cos(2.0 * std::numbers::pi * rng.uniform()) >= 0.0 ? 1.0 : -1.0;
    };
    y(0) = real_unit() * amplitude(0);
    for (int j = 1; j < k; ++j) {
      y(j) = std::polar(amplitude(j), 2.0 * std::numbers::pi * rng.uniform());
      y(-j) = std::conj(y(j));
    }
    y(-k) = real_unit() * amplitude(-k);
  };
  State state(grid);
  fill(state.position, spec.decay_y);
  fill(state.velocity, spec.decay_v);
  return state;
}

std::string_view to_string(ErrorComponent c) {
  switch (c) {
    case ErrorComponent::position: return "position";
    case ErrorComponent::velocity: return "velocity";
    case ErrorComponent::combined: return "combined";
  }
  return "?";
}

double ErrorRecord::error(ErrorComponent c) const noexcept {
  switch (c) {
    case ErrorComponent::position: return err_y;
    case ErrorComponent::velocity: return err_v;
    case ErrorComponent::combined: return std::hypot(err_y, err_v);
  }
  return err_y;
}

std::vector<int> ErrorTable::ks() const {
  std::set<int> s;
  for (const auto& r : records) s.insert(r.K);
  return {s.begin(), s.end()};
}

std::vector<double> ErrorTable::hs() const {
  std::set<double> s;
  for (const auto& r : records) s.insert(r.h);
  return {s.rbegin(), s.rend()};
}

const ErrorRecord* ErrorTable::find(const std::string& method, int K, double h,
                                    double alpha) const {
  for (const auto& r : records) {
    if (r.method == method && r.K == K && r.h == h && r.alpha == alpha) return &r;
  }
  return nullptr;
}

NonlinearitySpec ExperimentConfig::nonlinearity() const {
  if (equation == "power") return NonlinearitySpec::power(p, coefficient);
  if (equation == "klein-gordon") return NonlinearitySpec::klein_gordon(rho, p);
  if (equation == "sine-gordon") return NonlinearitySpec::sine_gordon();
  throw InvalidArgument("equation: unknown kind '" + equation +
                        "' (expected power, klein-gordon or sine-gordon)");
}

void ExperimentConfig::validate() const {
  const auto fail = [](const std::string& field, const std::string& why) {
    throw InvalidArgument(field + ": " + why);
  };
  (void)nonlinearity();
  if (methods.empty()) fail("methods", "list is empty");
  for (const auto& m : methods) {
    if (!is_known_method(m)) fail("methods", "unknown method '" + m + "'");
  }
  if (K.empty()) fail("K", "list is empty");
  for (int k : K) {
    if (k < 1 || (k & (k - 1)) != 0) fail("K", std::to_string(k) + " is not a power of two");
    if (k > max_K) fail("K", std::to_string(k) + " exceeds max-K " + std::to_string(max_K));
  }
  if (!(T > 0.0) || !std::isfinite(T)) fail("T", "must be positive");
  if (!std::isfinite(t0)) fail("t0", "must be finite");
  if (h.empty()) fail("h", "list is empty");
  for (double hv : h) {
    if (!(hv > 0.0)) fail("h", "step sizes must be positive");
    try {
      (void)steps_for(T, hv);
    } catch (const InvalidArgument& e) {
      fail("h", e.what());
    }
  }
  if (alpha.empty()) fail("alpha", "list is empty");
  for (double a : alpha) {
    if (!std::isfinite(a)) fail("alpha", "values must be finite");
  }
  if (!std::isfinite(s)) fail("s", "must be finite");
  if (!(h_ref > 0.0)) fail("href", "must be positive");
  try {
    (void)steps_for(T, h_ref);
  } catch (const InvalidArgument& e) {
    fail("href", e.what());
  }
  if (!(ref_tolerance > 0.0)) fail("ref_tolerance", "must be positive");
  if (!std::isfinite(decay_y) || !std::isfinite(decay_v)) fail("decay", "must be finite");
  if (jobs < 0) fail("jobs", "must be >= 0");
  if (output.empty()) fail("out", "must not be empty");
}

ErrorTable run_convergence_study(const ExperimentConfig& config, const ProgressLog& log) {
  config.validate();
  const NonlinearitySpec nl = config.nonlinearity();

  struct PerK {
    int K;
    State initial;
    OscillatorySystem system;
    std::optional<ReferenceResult> reference;
  };
  std::vector<int> ks = config.K;
  std::sort(ks.begin(), ks.end());
  ks.erase(std::unique(ks.begin(), ks.end()), ks.end());
  std::vector<PerK> per_k;
  for (int k : ks) {
    const InitialDataSpec spec{config.seed, config.decay_y, config.decay_v, k};
    const SpectralGrid grid(k, config.max_K);
    per_k.push_back(PerK{k, generate_initial_data(spec, config.max_K),
                         make_system(grid, nl, config.space), std::nullopt});
  }

  parallel_for(per_k.size(), config.jobs, [&](std::size_t i) {
    auto& entry = per_k[i];
    entry.reference = reference_solution(entry.system, entry.initial, config.T,
                                         config.h_ref,
                                         ReferenceOptions{config.s, config.ref_tolerance});
    if (log) {
      std::ostringstream msg;
      msg << "reference K=" << entry.K << " discrepancy "
          << entry.reference->discrepancy;
      log(msg.str());
    }
  });

  std::vector<double> hs = config.h;
  std::sort(hs.begin(), hs.end(), std::greater<>());
  hs.erase(std::unique(hs.begin(), hs.end()), hs.end());

  struct Task {
    std::size_t method;
    std::size_t k_index;
    double h;
  };
  std::vector<Task> tasks;
  for (std::size_t m = 0; m < config.methods.size(); ++m) {
    for (std::size_t ki = 0; ki < per_k.size(); ++ki) {
      for (double hv : hs) tasks.push_back({m, ki, hv});
    }
  }

  std::vector<std::vector<ErrorRecord>> results(tasks.size());
  parallel_for(tasks.size(), config.jobs, [&](std::size_t t) {
    const Task& task = tasks[t];
    const std::string& method = config.methods[task.method];
    const PerK& entry = per_k[task.k_index];
    const long n = steps_for(config.T, task.h);
    std::optional<State> final_state;
    try {
      if (method == "SV") {
        final_state = sv_run(entry.system, task.h, n, entry.initial);
      } else {
        final_state = TrigIntegrator(entry.system, method_filters(method), task.h)
                          .integrate(entry.initial, n);
      }
    } catch (const BlowUpError&) {
    }
    for (double a : config.alpha) {
      ErrorRecord rec{method, entry.K, task.h, a, kInf, kInf, true};
      if (final_state) {
        const State diff = entry.reference->solution - *final_state;
        rec.err_y = sobolev_norm(diff.position, config.s + 1.0 - a);
        rec.err_v = sobolev_norm(diff.velocity, config.s - a);
        rec.blowup = false;
      }
      results[t].push_back(rec);
    }
    if (log) {
      std::ostringstream msg;
      msg << method << " K=" << entry.K << " h=" << task.h
          << (final_state ? "" : " (blow-up)");
      log(msg.str());
    }
  });

  ErrorTable table;
  for (auto& chunk : results) {
    for (auto& rec : chunk) table.records.push_back(std::move(rec));
  }
  for (const auto& entry : per_k) {
    table.references.push_back({entry.K, entry.reference->discrepancy});
  }
  return table;
}

OrderFit fit_order(const std::vector<std::pair<double, double>>& points) {
  std::vector<std::pair<double, double>> logs;
  OrderFit fit;
  for (const auto& [h, err] : points) {
    if (h > 0.0 && std::isfinite(h) && err > 0.0 && std::isfinite(err)) {
      logs.emplace_back(std::log(h), std::log(err));
    } else {
      ++fit.excluded;
    }
  }
  if (logs.size() < 3) {
    throw FitUndefined("order fit needs >= 3 usable points, got " +
                       std::to_string(logs.size()));
  }
  const double n = static_cast<double>(logs.size());
  double mx = 0.0, my = 0.0;
  for (const auto& [x, y] : logs) {
    mx += x;
    my += y;
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0;
  for (const auto& [x, y] : logs) {
    sxx += (x - mx) * (x - mx);
    sxy += (x - mx) * (y - my);
  }
  if (sxx == 0.0) throw FitUndefined("order fit needs distinct step sizes");
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  double ss = 0.0;
  for (const auto& [x, y] : logs) {
    const double r = y - (fit.intercept + fit.slope * x);
    ss += r * r;
  }
  fit.residual = std::sqrt(ss / n);
  fit.used = logs.size();
  return fit;
}

std::vector<std::pair<double, double>> uniform_error_envelope(
    const ErrorTable& table, const std::string& method, double alpha,
    ErrorComponent component, std::optional<double> max_hk) {
  std::set<int> ks;
  std::set<double> hs;
  std::map<std::pair<int, double>, double> cells;
  for (const auto& r : table.records) {
    if (r.method != method || r.alpha != alpha) continue;
    ks.insert(r.K);
    hs.insert(r.h);
    cells[{r.K, r.h}] = r.error(component);
  }
  if (cells.empty()) {
    throw IncompleteGrid("no records for method " + method + " at alpha " +
                         format_double(alpha));
  }
  std::vector<std::pair<double, double>> envelope;
  for (auto it = hs.rbegin(); it != hs.rend(); ++it) {
    const double h = *it;
    bool any = false;
    double worst = 0.0;
    for (int k : ks) {
      const auto cell = cells.find({k, h});
      if (cell == cells.end()) {
        throw IncompleteGrid("missing record for method " + method + ", K=" +
                             std::to_string(k) + ", h=" + format_double(h));
      }
      if (max_hk && h * k > *max_hk) continue;
      any = true;
      worst = std::max(worst, cell->second);
      if (std::isinf(cell->second)) worst = cell->second;
    }
    if (any) envelope.emplace_back(h, worst);
  }
  return envelope;
}

std::vector<std::pair<double, double>> cfl_unrestricted_window(
    const std::vector<std::pair<double, double>>& envelope, int k_max,
    std::size_t count) {
  std::vector<std::pair<double, double>> window;
  for (const auto& point : envelope) {
    if (point.first * k_max > std::numbers::pi) window.push_back(point);
  }
  std::sort(window.begin(), window.end());
  if (window.size() > count) window.resize(count);
  std::sort(window.begin(), window.end(), std::greater<>());
  return window;
}

std::vector<std::pair<double, double>> fixed_k_series(
    const ErrorTable& table, const std::string& method, int K, double alpha,
    ErrorComponent component, double max_hk) {
  std::vector<std::pair<double, double>> out;
  for (const auto& r : table.records) {
    if (r.method == method && r.K == K && r.alpha == alpha && r.h * K <= max_hk) {
      out.emplace_back(r.h, r.error(component));
    }
  }
  std::sort(out.begin(), out.end(), std::greater<>());
  return out;
}

std::vector<OrderSummary> summarize_orders(const ErrorTable& table) {
  std::vector<std::string> methods;
  std::vector<double> alphas;
  for (const auto& r : table.records) {
    if (std::find(methods.begin(), methods.end(), r.method) == methods.end()) {
      methods.push_back(r.method);
    }
    if (std::find(alphas.begin(), alphas.end(), r.alpha) == alphas.end()) {
      alphas.push_back(r.alpha);
    }
  }
  const auto ks = table.ks();
  const int k_max = ks.empty() ? 1 : ks.back();
  std::vector<OrderSummary> out;
  for (const auto& m : methods) {
    for (double a : alphas) {
      for (auto c : {ErrorComponent::position, ErrorComponent::velocity,
                     ErrorComponent::combined}) {
        OrderSummary summary{m, a, c, std::nullopt, ""};
        try {
          if (m == "SV") {
            summary.fit = fit_order(uniform_error_envelope(table, m, a, c, 2.0));
            summary.note = "envelope over cells with hK <= 2";
          } else {
            summary.fit = fit_order(
                cfl_unrestricted_window(uniform_error_envelope(table, m, a, c), k_max));
            summary.note = "4 smallest h with h*Kmax > pi";
          }
        } catch (const std::exception& e) {
          summary.note = e.what();
        }
        out.push_back(std::move(summary));
      }
    }
  }
  return out;
}

void write_csv(std::ostream& out, const ErrorTable& table) {
  out << "method,K,h,alpha,err_y,err_v,flags\n";
  for (const auto& r : table.records) {
    out << r.method << ',' << r.K << ',' << format_double(r.h) << ','
        << format_double(r.alpha) << ',' << format_double(r.err_y) << ','
        << format_double(r.err_v) << ',' << (r.blowup ? "blowup" : "") << '\n';
  }
}

namespace {

nlohmann::json config_to_json(const ExperimentConfig& c) {
  nlohmann::json j;
  j["equation"] = c.equation;
  j["p"] = c.p;
  j["rho"] = c.rho;
  j["coefficient"] = c.coefficient;
  j["space"] = c.space == SpaceDiscretization::spectral ? "spectral" : "fd";
  j["methods"] = c.methods;
  j["K"] = c.K;
  j["h"] = c.h;
  j["alpha"] = c.alpha;
  j["T"] = c.T;
  j["t0"] = c.t0;
  j["s"] = c.s;
  j["href"] = c.h_ref;
  j["ref_tolerance"] = c.ref_tolerance;
  j["seed"] = c.seed;
  j["decay_y"] = c.decay_y;
  j["decay_v"] = c.decay_v;
  j["jobs"] = c.jobs;
  j["max_K"] = c.max_K;
  j["out"] = c.output;
  return j;
}

nlohmann::json number_or_null(double v) {
  return std::isfinite(v) ? nlohmann::json(v) : nlohmann::json(nullptr);
}

}  // namespace

std::string config_json(const ExperimentConfig& config) {
  return config_to_json(config).dump(2);
}

std::string summary_json(const ExperimentConfig& config, const ErrorTable& table,
                         const std::vector<OrderSummary>& orders) {
  nlohmann::json j;
  j["schema"] = 1;
  j["config"] = config_to_json(config);
  auto& refs = j["references"] = nlohmann::json::array();
  for (const auto& r : table.references) {
    refs.push_back({{"K", r.K}, {"discrepancy", number_or_null(r.discrepancy)}});
  }
  auto& ords = j["orders"] = nlohmann::json::array();
  for (const auto& o : orders) {
    nlohmann::json e{{"method", o.method},
                     {"alpha", o.alpha},
                     {"component", std::string(to_string(o.component))},
                     {"note", o.note}};
    if (o.fit) {
      e["slope"] = number_or_null(o.fit->slope);
      e["residual"] = number_or_null(o.fit->residual);
      e["points"] = o.fit->used;
    } else {
      e["slope"] = nullptr;
    }
    ords.push_back(std::move(e));
  }
  std::size_t blowups = 0;
  for (const auto& r : table.records) blowups += r.blowup ? 1 : 0;
  j["blowup_records"] = blowups;
  return j.dump(2);
}

}  // namespace trigwave

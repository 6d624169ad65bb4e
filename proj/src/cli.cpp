#include "trigwave/cli.hpp"

#include <yaml-cpp/yaml.h>

#include <CLI11.hpp>
#include <cmath>
#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>
#include <set>
#include <sstream>

#include <json.hpp>

#include "trigwave/errors.hpp"
#include "trigwave/filters.hpp"
#include "trigwave/integrators.hpp"

namespace trigwave::cli {
namespace {

const std::set<std::string> kConfigKeys = {
    "equation", "p",     "rho",  "coefficient", "space",   "methods", "K",
    "h",        "alpha", "T",    "t0",          "s",       "href",    "ref_tolerance",
    "seed",     "decay_y", "decay_v", "jobs",   "max_K",   "out"};

std::string where(const std::string& origin, const YAML::Mark& mark) {
  std::ostringstream s;
  s << origin;
  if (!mark.is_null()) s << ":" << mark.line + 1;
  return s.str();
}

template <class T>
T read_scalar(const YAML::Node& node, const std::string& key, const std::string& origin) {
  try {
    return node.as<T>();
  } catch (const YAML::Exception&) {
    throw InvalidArgument(where(origin, node.Mark()) + ": field '" + key +
                          "' has an invalid value");
  }
}

template <class T>
std::vector<T> read_list(const YAML::Node& node, const std::string& key,
                         const std::string& origin) {
  if (node.IsScalar()) return {read_scalar<T>(node, key, origin)};
  if (!node.IsSequence()) {
    throw InvalidArgument(where(origin, node.Mark()) + ": field '" + key +
                          "' must be a list");
  }
  std::vector<T> out;
  for (const auto& item : node) out.push_back(read_scalar<T>(item, key, origin));
  return out;
}

SpaceDiscretization parse_space(const std::string& v) {
  if (v == "spectral") return SpaceDiscretization::spectral;
  if (v == "fd") return SpaceDiscretization::finite_difference;
  throw InvalidArgument("space: expected 'spectral' or 'fd', got '" + v + "'");
}

int report_error(std::ostream& err, int code, const std::string& message) {
  err << "error: " << message << "\n";
  return code;
}

std::string fmt(double v) {
  if (!std::isfinite(v)) return std::isnan(v) ? "nan" : (v > 0 ? "inf" : "-inf");
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

struct Overrides {
  std::vector<std::string> methods;
  std::vector<int> K;
  std::vector<double> h;
  std::vector<double> alpha;
  double T = 0, s = 0, rho = 0, href = 0, coefficient = 0;
  std::uint64_t seed = 0;
  int p = 0, jobs = 0, max_k = 0;
  std::string equation, space, out;
};

// Registers the shared override flags on a subcommand.
void add_override_flags(CLI::App* app, Overrides& o) {
  app->add_option("--method", o.methods, "Methods (B C E G Btilde SV)");
  app->add_option("--K", o.K, "Grid parameters K (powers of two)");
  app->add_option("--h", o.h, "Time step sizes");
  app->add_option("--alpha", o.alpha, "Norm shifts alpha");
  app->add_option("--T", o.T, "Final time (relative to t0)");
  app->add_option("--s", o.s, "Regularity index s");
  app->add_option("--seed", o.seed, "Initial-data seed");
  app->add_option("--p", o.p, "Power of the nonlinearity");
  app->add_option("--equation", o.equation, "power | klein-gordon | sine-gordon");
  app->add_option("--rho", o.rho, "Klein-Gordon mass rho");
  app->add_option("--coefficient", o.coefficient, "Scale of the power nonlinearity");
  app->add_option("--space", o.space, "spectral | fd");
  app->add_option("--href", o.href, "Reference step size");
  app->add_option("--out", o.out, "Output path prefix");
  app->add_option("--jobs", o.jobs, "Worker threads (0 = all cores)");
  app->add_option("--max-K", o.max_k, "Largest admissible K");
}

void apply_overrides(const CLI::App* app, const Overrides& o, ExperimentConfig& c) {
  const auto given = [app](const char* name) { return app->count(name) > 0; };
  if (given("--method")) c.methods = o.methods;
  if (given("--K")) c.K = o.K;
  if (given("--h")) c.h = o.h;
  if (given("--alpha")) c.alpha = o.alpha;
  if (given("--T")) c.T = o.T;
  if (given("--s")) c.s = o.s;
  if (given("--seed")) c.seed = o.seed;
  if (given("--p")) c.p = o.p;
  if (given("--equation")) c.equation = o.equation;
  if (given("--rho")) c.rho = o.rho;
  if (given("--coefficient")) c.coefficient = o.coefficient;
  if (given("--space")) c.space = parse_space(o.space);
  if (given("--href")) c.h_ref = o.href;
  if (given("--out")) c.output = o.out;
  if (given("--jobs")) c.jobs = o.jobs;
  if (given("--max-K")) c.max_K = o.max_k;
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream f(path);
  if (!f) throw IoError("cannot open '" + path + "' for writing");
  f << content;
  f.flush();
  if (!f) throw IoError("failed writing '" + path + "'");
}

std::string table_csv(const ErrorTable& table) {
  std::ostringstream s;
  write_csv(s, table);
  return s.str();
}

struct ConfigSource {
  std::string path;
};

ExperimentConfig resolve_config(const ConfigSource& src, const CLI::App* app,
                                const Overrides& o) {
  ExperimentConfig c;
  if (!src.path.empty()) c = load_config(src.path);
  apply_overrides(app, o, c);
  c.validate();
  return c;
}

void print_orders(std::ostream& out, const std::vector<OrderSummary>& orders) {
  for (const auto& o : orders) {
    out << "  " << o.method << "  alpha=" << fmt(o.alpha) << "  "
        << to_string(o.component) << "  slope=";
    if (o.fit) {
      out << fmt(o.fit->slope) << " (residual " << fmt(o.fit->residual) << ", "
          << o.fit->used << " pts)";
    } else {
      out << "n/a";
    }
    out << "  [" << o.note << "]\n";
  }
}

int cmd_convergence(const ConfigSource& src, const CLI::App* app, const Overrides& o,
                    int verbosity, std::ostream& out) {
  const ExperimentConfig config = resolve_config(src, app, o);
  const std::string& prefix = config.output;
  ProgressLog log;
  if (verbosity > 0) log = [&out](const std::string& m) { out << m << "\n"; };
  const ErrorTable table = run_convergence_study(config, log);
  const auto orders = summarize_orders(table);
  write_file(prefix + ".csv", table_csv(table));
  write_file(prefix + ".json", summary_json(config, table, orders));
  out << "wrote " << prefix << ".csv and " << prefix << ".json\n";
  print_orders(out, orders);
  return kSuccess;
}

int cmd_sv_compare(const ConfigSource& src, const CLI::App* app, const Overrides& o,
                   const std::string& trig_method, int verbosity, std::ostream& out) {
  ExperimentConfig config = resolve_config(src, app, o);
  const std::string prefix = config.output;
  if (trig_method == "SV") throw InvalidArgument("method: choose a trigonometric method");
  (void)method_filters(trig_method);
  config.methods = {"SV", trig_method};
  // H^{s} x H^{s-1}: alpha = 1.
  config.alpha = {1.0};
  bool stable_branch = false;
  for (int k : config.K) {
    for (double h : config.h) stable_branch = stable_branch || h * k <= 2.0;
  }
  if (!stable_branch) {
    throw InvalidArgument("h, K: no cell satisfies hK <= 2, the stable branch is empty");
  }
  ProgressLog log;
  if (verbosity > 0) log = [&out](const std::string& m) { out << m << "\n"; };
  const ErrorTable table = run_convergence_study(config, log);

  std::vector<OrderSummary> orders;
  for (const auto& m : config.methods) {
    for (auto c : {ErrorComponent::combined, ErrorComponent::position,
                   ErrorComponent::velocity}) {
      OrderSummary summary{m, 1.0, c, std::nullopt, "envelope over cells with hK <= 2"};
      try {
        summary.fit = fit_order(uniform_error_envelope(table, m, 1.0, c, 2.0));
      } catch (const std::exception& e) {
        summary.note = e.what();
      }
      orders.push_back(std::move(summary));
    }
  }
  write_file(prefix + ".csv", table_csv(table));
  write_file(prefix + ".json", summary_json(config, table, orders));
  out << "wrote " << prefix << ".csv and " << prefix << ".json\n";
  out << "uniform-in-K slopes in H^" << fmt(config.s) << " x H^" << fmt(config.s - 1)
      << " (cells with hK <= 2):\n";
  print_orders(out, orders);
  for (const auto& r : table.records) {
    if (r.blowup) out << "  unstable: " << r.method << " K=" << r.K << " h=" << fmt(r.h)
                      << " hK=" << fmt(r.h * r.K) << "\n";
  }
  return kSuccess;
}

int cmd_single_run(const ConfigSource& src, const CLI::App* app, const Overrides& o,
                   bool with_reference, std::ostream& out) {
  const ExperimentConfig config = resolve_config(src, app, o);
  const std::string method = config.methods.front();
  const int k = config.K.front();
  const double h = config.h.front();
  const long n = steps_for(config.T, h);
  const SpectralGrid grid(k, config.max_K);
  const State initial = generate_initial_data(
      {config.seed, config.decay_y, config.decay_v, k}, config.max_K);
  const OscillatorySystem system = make_system(grid, config.nonlinearity(), config.space);

  nlohmann::json j;
  j["schema"] = 1;
  j["method"] = method;
  j["K"] = k;
  j["h"] = h;
  j["steps"] = n;
  j["T"] = config.T;
  try {
    const State final_state =
        method == "SV" ? sv_run(system, h, n, initial)
                       : TrigIntegrator(system, method_filters(method), h).integrate(initial, n);
    j["blowup"] = false;
    j["energy_norm"] = pair_norm(final_state, config.s);
    j["initial_energy_norm"] = pair_norm(initial, config.s);
    if (with_reference) {
      const auto ref = reference_solution(system, initial, config.T, config.h_ref,
                                          {config.s, config.ref_tolerance});
      const State diff = ref.solution - final_state;
      auto& errs = j["errors"] = nlohmann::json::array();
      for (double a : config.alpha) {
        errs.push_back({{"alpha", a},
                        {"err_y", sobolev_norm(diff.position, config.s + 1.0 - a)},
                        {"err_v", sobolev_norm(diff.velocity, config.s - a)}});
      }
      j["reference_discrepancy"] = ref.discrepancy;
    }
  } catch (const BlowUpError& e) {
    j["blowup"] = true;
    j["blowup_step"] = e.step();
  }
  out << j.dump(2) << "\n";
  return kSuccess;
}

struct CustomFilterRows {
  std::vector<double> xi, psi, phi, psi0, psi1;
};

FilterSet load_custom_filter(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw IoError("cannot read custom filter table '" + path + "'");
  CustomFilterRows rows;
  std::string line;
  int lineno = 0;
  while (std::getline(f, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    if (line.rfind("xi", 0) == 0) continue;  // header
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream ls(line);
    double v[5];
    for (double& x : v) {
      if (!(ls >> x)) {
        throw InvalidArgument(path + ":" + std::to_string(lineno) +
                              ": expected 5 columns xi,psi,phi,psi0,psi1");
      }
    }
    rows.xi.push_back(v[0]);
    rows.psi.push_back(v[1]);
    rows.phi.push_back(v[2]);
    rows.psi0.push_back(v[3]);
    rows.psi1.push_back(v[4]);
  }
  return FilterSet::tabulated("custom:" + path, rows.xi, rows.psi, rows.phi, rows.psi0,
                              rows.psi1);
}

int cmd_check_filters(const std::vector<std::string>& methods,
                      const std::vector<double>& betas, double c, int samples,
                      double xi_min, double xi_max, const std::string& custom,
                      const std::string& json_out, std::ostream& out) {
  for (double b : betas) {
    if (!(b >= -1.0 && b <= 1.0)) {
      throw InvalidArgument("beta: " + fmt(b) + " outside [-1, 1]");
    }
  }
  if (!(c > 0.0)) throw InvalidArgument("c: must be positive");
  std::vector<FilterSet> sets;
  for (const auto& m : methods) sets.push_back(method_filters(m));
  if (!custom.empty()) sets.push_back(load_custom_filter(custom));
  const auto xi = logspace(xi_min, xi_max, samples);

  nlohmann::json reports = nlohmann::json::array();
  bool all_pass = true;
  for (const auto& fs : sets) {
    const auto sym = check_symmetry_symplecticity(fs, xi);
    for (double b : betas) {
      const auto report = check_assumption(fs, b, c, xi);
      all_pass = all_pass && report.passed();
      out << fs.name() << "  beta=" << fmt(b) << "  c=" << fmt(c) << "  "
          << (report.passed() ? "PASS" : "FAIL") << "  (" << report.violations.size()
          << " violations, symmetric=" << (sym.symmetric ? "yes" : "no")
          << ", symplectic=" << (sym.symplectic ? "yes" : "no") << ")\n";
      nlohmann::json viol = nlohmann::json::array();
      for (std::size_t i = 0; i < report.violations.size(); ++i) {
        const auto& v = report.violations[i];
        if (i < 5) {
          out << "    xi=" << fmt(v.xi) << "  " << to_string(v.bound) << ": "
              << fmt(v.lhs) << " > " << fmt(v.rhs) << "\n";
        }
        viol.push_back({{"xi", v.xi},
                        {"bound", std::string(to_string(v.bound))},
                        {"lhs", v.lhs},
                        {"rhs", v.rhs}});
      }
      reports.push_back({{"method", fs.name()},
                         {"beta", b},
                         {"c", c},
                         {"samples", xi.size()},
                         {"symmetric", sym.symmetric},
                         {"symplectic", sym.symplectic},
                         {"passed", report.passed()},
                         {"violations", std::move(viol)}});
    }
  }
  if (!json_out.empty()) {
    nlohmann::json j{{"schema", 1}, {"reports", std::move(reports)}};
    write_file(json_out, j.dump(2) + "\n");
  }
  out << (all_pass ? "all filter bounds hold\n" : "filter bound violations found\n");
  return kSuccess;
}

}  // namespace

ExperimentConfig parse_config(const std::string& text, const std::string& origin) {
  YAML::Node root;
  try {
    root = YAML::Load(text);
  } catch (const YAML::Exception& e) {
    throw InvalidArgument(where(origin, e.mark) + ": " + e.msg);
  }
  if (root.IsMap() && root["schema"] && root["config"]) root = root["config"];
  if (!root.IsMap()) throw InvalidArgument(origin + ": expected a key/value map");

  ExperimentConfig c;
  for (const auto& kv : root) {
    const auto key = kv.first.as<std::string>();
    const YAML::Node& v = kv.second;
    if (!kConfigKeys.count(key)) {
      throw InvalidArgument(where(origin, kv.first.Mark()) + ": unknown field '" + key + "'");
    }
    if (key == "equation") c.equation = read_scalar<std::string>(v, key, origin);
    else if (key == "p") c.p = read_scalar<int>(v, key, origin);
    else if (key == "rho") c.rho = read_scalar<double>(v, key, origin);
    else if (key == "coefficient") c.coefficient = read_scalar<double>(v, key, origin);
    else if (key == "space") {
      try {
        c.space = parse_space(read_scalar<std::string>(v, key, origin));
      } catch (const InvalidArgument& e) {
        throw InvalidArgument(where(origin, v.Mark()) + ": " + e.what());
      }
    }
    else if (key == "methods") c.methods = read_list<std::string>(v, key, origin);
    else if (key == "K") c.K = read_list<int>(v, key, origin);
    else if (key == "h") {
      c.h = v.IsNull() ? std::vector<double>{} : read_list<double>(v, key, origin);
    }
    else if (key == "alpha") c.alpha = read_list<double>(v, key, origin);
    else if (key == "T") c.T = read_scalar<double>(v, key, origin);
    else if (key == "t0") c.t0 = read_scalar<double>(v, key, origin);
    else if (key == "s") c.s = read_scalar<double>(v, key, origin);
    else if (key == "href") c.h_ref = read_scalar<double>(v, key, origin);
    else if (key == "ref_tolerance") c.ref_tolerance = read_scalar<double>(v, key, origin);
    else if (key == "seed") c.seed = read_scalar<std::uint64_t>(v, key, origin);
    else if (key == "decay_y") c.decay_y = read_scalar<double>(v, key, origin);
    else if (key == "decay_v") c.decay_v = read_scalar<double>(v, key, origin);
    else if (key == "jobs") c.jobs = read_scalar<int>(v, key, origin);
    else if (key == "max_K") c.max_K = read_scalar<int>(v, key, origin);
    else if (key == "out") c.output = read_scalar<std::string>(v, key, origin);
  }
  return c;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw IoError("cannot read config '" + path + "'");
  std::stringstream buf;
  buf << f.rdbuf();
  return parse_config(buf.str(), path);
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Trigonometric integrators for semilinear wave equations"};
  app.set_help_flag("--help", "Print this help message and exit");
  app.require_subcommand(1);
  app.fallthrough();
  int verbosity = 0;
  app.add_flag("-v,--verbose", verbosity, "Progress output");

  ConfigSource conv_src, sv_src, single_src;
  Overrides conv_o, sv_o, single_o;

  auto* conv = app.add_subcommand("convergence", "Run a convergence sweep");
  conv->add_option("config", conv_src.path, "Config file (YAML or JSON summary)");
  add_override_flags(conv, conv_o);

  auto* svc = app.add_subcommand("sv-compare", "Stormer-Verlet vs a trigonometric method");
  svc->add_option("config", sv_src.path, "Config file (YAML or JSON summary)");
  add_override_flags(svc, sv_o);
  svc->remove_option(svc->get_option("--method"));
  std::string sv_trig = "C";
  svc->add_option("--method", sv_trig, "Trigonometric method to compare against");

  auto* single = app.add_subcommand("single-run", "Integrate one (method, K, h)");
  single->add_option("config", single_src.path, "Config file (YAML or JSON summary)");
  add_override_flags(single, single_o);
  bool no_reference = false;
  single->add_flag("--no-reference", no_reference, "Skip the reference comparison");

  auto* filt = app.add_subcommand("check-filters", "Sample the filter-function bounds");
  std::vector<std::string> filt_methods(std::begin(kMethodNames), std::end(kMethodNames));
  std::vector<double> betas = {-1.0, -0.5, 0.0, 0.5, 1.0};
  double c = 2.0;
  int samples = 2000;
  double xi_min = 1e-3, xi_max = 1e3;
  std::string custom, filt_out;
  filt->add_option("--method", filt_methods, "Catalog methods");
  filt->add_option("--beta", betas, "Exponents beta in [-1, 1]");
  filt->add_option("--c", c, "Bound constant c");
  filt->add_option("--samples", samples, "Number of log-spaced xi samples");
  filt->add_option("--xi-min", xi_min, "Smallest sampled xi");
  filt->add_option("--xi-max", xi_max, "Largest sampled xi");
  filt->add_option("--custom", custom, "CSV table xi,psi,phi,psi0,psi1 of a custom filter");
  filt->add_option("--out", filt_out, "JSON report path");

  std::vector<std::string> argv_store = args;
  std::vector<const char*> argv;
  argv.push_back("trigwave");
  for (const auto& a : argv_store) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      out << app.help();
      return kSuccess;
    }
    return report_error(err, kValidation, e.what());
  }

  try {
    if (*conv) return cmd_convergence(conv_src, conv, conv_o, verbosity, out);
    if (*svc) return cmd_sv_compare(sv_src, svc, sv_o, sv_trig, verbosity, out);
    if (*single) return cmd_single_run(single_src, single, single_o, !no_reference, out);
    if (*filt) {
      return cmd_check_filters(filt_methods, betas, c, samples, xi_min, xi_max, custom,
                               filt_out, out);
    }
  } catch (const ReferenceUnconverged& e) {
    return report_error(err, kReferenceUnconverged, e.what());
  } catch (const IoError& e) {
    return report_error(err, kIo, e.what());
  } catch (const std::invalid_argument& e) {
    return report_error(err, kValidation, e.what());
  } catch (const std::exception& e) {
    return report_error(err, kValidation, e.what());
  }
  return kValidation;
}

}  // namespace trigwave::cli

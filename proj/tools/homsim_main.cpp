//
// homsim command-line tool.
//
// Subcommands:
//   simulate-source  exact source simulation plus closed-form predictions
//   simulate-hom     two-source HOM experiment with threshold detectors
//   extract          effective/intrinsic error from measured visibility + g2
//   verify           run the self-verification suite
//   sweep            parameter sweep of simulate-source, CSV output
//
// Exit codes: 0 success, 2 validation error, 3 inconsistent measurement,
// 4 verification failure. Errors are single-line JSON on stderr. Numeric
// output uses 17 significant digits; identical invocations produce
// byte-identical output.
//

#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "homsim/extraction.hpp"
#include "homsim/hom.hpp"
#include "homsim/source.hpp"
#include "homsim/verify.hpp"

namespace {

using nlohmann::json;

std::string fmt(double v) {
  if (std::isnan(v)) return "null";
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string csv_num(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void emit_error(const std::string& msg) {
  std::cerr << "{\"error\":" << json(msg).dump() << "}\n";
}

void emit_warning(const std::string& msg) {
  std::cerr << "{\"warning\":" << json(msg).dump() << "}\n";
}

void write_output(const std::string& path, const std::string& content) {
  if (path.empty()) {
    std::cout << content;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::invalid_argument("cannot open output file: " + path);
  out << content;
}

// --config support: values fill in flags that were not given on the command
// line; explicit flags always win.
struct ConfigBinding {
  CLI::Option* opt;
  std::function<void(const json&)> assign;
};

class ConfigMerger {
 public:
  template <typename T>
  void bind(CLI::Option* opt, T& var) {
    bindings_.push_back({opt, [&var](const json& j) { var = j.get<T>(); }});
  }

  void apply(const json& cfg) const {
    for (const auto& b : bindings_) {
      std::string key = b.opt->get_lnames().front();
      if (b.opt->count() == 0 && cfg.contains(key)) b.assign(cfg.at(key));
    }
  }

 private:
  std::vector<ConfigBinding> bindings_;
};

json load_config(int argc, char** argv) {
  std::string path;
  for (int i = 1; i < argc; ++i) {
    std::string arg = argv[i];
    if (arg == "--config" && i + 1 < argc)
      path = argv[i + 1];
    else if (arg.rfind("--config=", 0) == 0)
      path = arg.substr(9);
  }
  if (path.empty()) return json::object();
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open config file: " + path);
  json cfg = json::parse(in, nullptr, true, true);
  if (!cfg.is_object()) throw std::invalid_argument("config file must hold a JSON object");
  return cfg;
}

homsim::SourceVariant parse_variant(const std::string& s) {
  if (s == "agnostic") return homsim::SourceVariant::agnostic;
  if (s == "dichroic") return homsim::SourceVariant::dichroic;
  throw std::invalid_argument("variant must be 'agnostic' or 'dichroic'");
}

struct SourceArgs {
  double eta = 1.0, p = 0.0, eps = 0.0, xi = 1.0;
  std::string variant = "agnostic";
  bool strict = false;
  std::string config_path;  // consumed during the pre-scan

  homsim::SourceParams params() const {
    return {eta, p, eps, xi, parse_variant(variant)};
  }
};

void add_source_options(CLI::App* sub, SourceArgs& a, ConfigMerger& cfg) {
  cfg.bind(sub->add_option("--eta", a.eta, "transmission efficiency in [0,1]"), a.eta);
  cfg.bind(sub->add_option("--p", a.p, "noise-photon admixture probability in [0,1/2]"), a.p);
  cfg.bind(sub->add_option("--eps", a.eps, "intrinsic indistinguishability error in [0,1]"),
           a.eps);
  cfg.bind(sub->add_option("--xi", a.xi, "noise-photon indistinguishability error in [0,1]"),
           a.xi);
  cfg.bind(sub->add_option("--variant", a.variant, "source model: agnostic|dichroic")
               ->check(CLI::IsMember({"agnostic", "dichroic"})),
           a.variant);
  cfg.bind(sub->add_flag("--strict", a.strict, "treat model-consistency warnings as errors"),
           a.strict);
  sub->add_option("--config", a.config_path, "JSON file with default parameter values");
}

struct SourceReport {
  double p0, p1, p2, g2;
  double eps_tilde_sim;  // NaN when undefined
  homsim::ClosedFormReport closed;
};

SourceReport simulate(const homsim::SourceParams& params, bool strict) {
  for (const auto& w : homsim::validate_params(params, strict)) emit_warning(w);
  homsim::LabelAllocator labels;
  homsim::SourceState src = homsim::build_source(params, labels);
  SourceReport r{};
  r.p0 = src.probability(0);
  r.p1 = src.probability(1);
  r.p2 = src.probability(2);
  double nan = std::numeric_limits<double>::quiet_NaN();
  try {
    r.g2 = homsim::g2_from_probabilities(r.p1, r.p2);
  } catch (const std::invalid_argument&) {
    r.g2 = nan;
  }
  try {
    r.eps_tilde_sim = homsim::simulated_effective_error(src);
  } catch (const std::invalid_argument&) {
    r.eps_tilde_sim = nan;
  }
  r.closed = homsim::closed_form_report(params);
  return r;
}

std::string source_json(const SourceReport& r) {
  std::ostringstream os;
  os << "{\"P0\":" << fmt(r.p0) << ",\"P1\":" << fmt(r.p1) << ",\"P2\":" << fmt(r.p2)
     << ",\"g2\":" << fmt(r.g2) << ",\"eps_tilde_sim\":" << fmt(r.eps_tilde_sim)
     << ",\"eps_tilde_exact\":" << fmt(r.closed.eps_tilde_exact)
     << ",\"eps_tilde_first_order\":" << fmt(r.closed.eps_tilde_first_order)
     << ",\"purity\":" << fmt(r.closed.purity) << ",\"predicted_P0\":" << fmt(r.closed.pn.p0)
     << ",\"predicted_P1\":" << fmt(r.closed.pn.p1) << ",\"predicted_P2\":" << fmt(r.closed.pn.p2)
     << "}\n";
  return os.str();
}

int run_simulate_source(const SourceArgs& args, const std::string& output) {
  SourceReport r = simulate(args.params(), args.strict);
  write_output(output, source_json(r));
  return 0;
}

int run_simulate_hom(const SourceArgs& args, bool with_reference, const std::string& output) {
  homsim::SourceParams params = args.params();
  for (const auto& w : homsim::validate_params(params, args.strict)) emit_warning(w);
  homsim::LabelAllocator labels;
  homsim::SourceState a = homsim::build_source(params, labels);
  homsim::SourceState b = homsim::build_source(params, labels);
  homsim::HOMStats stats = homsim::hom_stats(a, b);

  double nan = std::numeric_limits<double>::quiet_NaN();
  double g_hom = nan, v_b = nan, v_a = nan;
  try {
    g_hom = homsim::hom_correlator(stats);
    v_b = homsim::visibility_b(stats);
  } catch (const std::invalid_argument&) {
  }
  if (with_reference) {
    homsim::HOMStats ref = homsim::reference_stats(a, b);
    try {
      v_a = homsim::visibility_a(stats, ref);
    } catch (const std::invalid_argument&) {
    }
  }

  std::ostringstream os;
  os << "{\"p_joint\":" << fmt(stats.p_joint) << ",\"p_d1\":" << fmt(stats.p_d1)
     << ",\"p_d2\":" << fmt(stats.p_d2) << ",\"g_hom\":" << fmt(g_hom)
     << ",\"v_a\":" << fmt(v_a) << ",\"v_b\":" << fmt(v_b) << ",\"predicted\":";
  bool have_prediction = false;
  try {
    double eps_tilde = homsim::simulated_effective_error(a);
    double g2 = homsim::g2_from_probabilities(a.probability(1), a.probability(2));
    homsim::HOMPrediction pred = homsim::predict_hom(eps_tilde, g2, params.eta);
    os << "{\"g_hom\":" << fmt(pred.g_hom) << ",\"v_a\":" << fmt(pred.v_a)
       << ",\"v_b\":" << fmt(pred.v_b) << ",\"p_joint\":" << fmt(pred.p_joint)
       << ",\"p_d\":" << fmt(pred.p_d) << "}";
    have_prediction = true;
  } catch (const std::invalid_argument&) {
  }
  if (!have_prediction) os << "null";
  os << "}\n";
  write_output(output, os.str());
  return 0;
}

int run_extract(double visibility, const std::string& method, double g2, double xi,
                const std::string& output) {
  homsim::Method m;
  if (method == "A")
    m = homsim::Method::a;
  else if (method == "B")
    m = homsim::Method::b;
  else
    throw std::invalid_argument("method must be 'A' or 'B'");
  homsim::ExtractionResult r = homsim::extract({visibility, m, g2, xi});
  std::ostringstream os;
  os << "{\"eps_tilde\":" << fmt(r.eps_tilde)
     << ",\"eps_intrinsic\":" << fmt(r.eps_intrinsic)
     << ",\"overlap_effective\":" << fmt(r.overlap_effective) << ",\"diagnostics\":{"
     << "\"clamped_effective\":" << (r.flags.clamped_effective ? "true" : "false")
     << ",\"clamped_intrinsic\":" << (r.flags.clamped_intrinsic ? "true" : "false")
     << ",\"intrinsic_unsupported\":" << (r.flags.intrinsic_unsupported ? "true" : "false")
     << "}}\n";
  write_output(output, os.str());
  return 0;
}

int run_verify(const std::string& grid, const std::string& output) {
  if (grid != "small" && grid != "full")
    throw std::invalid_argument("grid must be 'small' or 'full'");
  auto size = grid == "full" ? homsim::verify::GridSize::full : homsim::verify::GridSize::small;
  auto results = homsim::verify::run_all_checks(size);
  size_t passed = 0;
  size_t width = 0;
  for (const auto& r : results) width = std::max(width, r.name.size());
  std::ostringstream os;
  for (const auto& r : results) {
    if (r.passed) ++passed;
    os << r.name << std::string(width + 2 - r.name.size(), ' ')
       << (r.passed ? "PASS" : "FAIL");
    char margin[32];
    std::snprintf(margin, sizeof(margin), "%.3g", r.worst_margin);
    os << "  margin " << margin;
    if (!r.passed && !r.detail.empty()) os << "  [" << r.detail << "]";
    os << "\n";
  }
  os << passed << "/" << results.size() << " checks passed\n";
  write_output(output, os.str());
  if (passed != results.size()) {
    emit_error("verification failed: " + std::to_string(results.size() - passed) +
               " check(s) did not pass");
    return 4;
  }
  return 0;
}

int run_sweep(const SourceArgs& args, const std::string& param, double from, double to,
              int steps, const std::string& output) {
  if (steps < 1) throw std::invalid_argument("sweep: steps must be >= 1");
  std::ostringstream os;
  os << "index,eta,p,eps,xi,variant,P0,P1,P2,g2,eps_tilde_sim,eps_tilde_exact,"
        "eps_tilde_first_order,purity,predicted_P0,predicted_P1,predicted_P2\n";
  for (int i = 0; i < steps; ++i) {
    double value = steps == 1 ? from : from + (to - from) * i / (steps - 1);
    SourceArgs point = args;
    if (param == "eta")
      point.eta = value;
    else if (param == "p")
      point.p = value;
    else if (param == "eps")
      point.eps = value;
    else if (param == "xi")
      point.xi = value;
    else
      throw std::invalid_argument("sweep: param must be one of eta|p|eps|xi");
    SourceReport r = simulate(point.params(), point.strict);
    os << i << "," << csv_num(point.eta) << "," << csv_num(point.p) << ","
       << csv_num(point.eps) << "," << csv_num(point.xi) << "," << point.variant << ","
       << csv_num(r.p0) << "," << csv_num(r.p1) << "," << csv_num(r.p2) << ","
       << csv_num(r.g2) << "," << csv_num(r.eps_tilde_sim) << ","
       << csv_num(r.closed.eps_tilde_exact) << "," << csv_num(r.closed.eps_tilde_first_order)
       << "," << csv_num(r.closed.purity) << "," << csv_num(r.closed.pn.p0) << ","
       << csv_num(r.closed.pn.p1) << "," << csv_num(r.closed.pn.p2) << "\n";
  }
  write_output(output, os.str());
  return 0;
}

int run(int argc, char** argv) {
  json cfg = load_config(argc, argv);
  ConfigMerger merger;

  CLI::App app{"homsim: exact few-photon interference simulator and "
               "indistinguishability-error extraction toolkit"};
  app.require_subcommand(1);

  std::string output;
  auto add_output = [&](CLI::App* sub) {
    sub->add_option("-o,--output", output, "write the result to a file instead of stdout");
  };

  SourceArgs src_args;
  auto* sim_src = app.add_subcommand(
      "simulate-source", "exact source simulation plus closed-form predictions");
  add_source_options(sim_src, src_args, merger);
  add_output(sim_src);

  SourceArgs hom_args;
  bool with_reference = false;
  auto* sim_hom = app.add_subcommand(
      "simulate-hom", "interfere two identical sources on a balanced beam splitter");
  add_source_options(sim_hom, hom_args, merger);
  merger.bind(sim_hom->add_flag("--with-reference", with_reference,
                                "also simulate a distinguishable reference pair "
                                "and report the Method-A visibility"),
              with_reference);
  add_output(sim_hom);

  double visibility = std::numeric_limits<double>::quiet_NaN();
  double g2 = std::numeric_limits<double>::quiet_NaN();
  double xi_assumption = 1.0;
  std::string method;
  std::string extract_config;
  auto* extract_cmd = app.add_subcommand(
      "extract", "recover the indistinguishability errors from visibility and g2");
  merger.bind(extract_cmd->add_option("--visibility", visibility, "measured HOM visibility"),
              visibility);
  merger.bind(extract_cmd->add_option("--method", method, "visibility definition: A|B")
                  ->check(CLI::IsMember({"A", "B"})),
              method);
  merger.bind(extract_cmd->add_option("--g2", g2, "measured g2(0)"), g2);
  merger.bind(extract_cmd->add_option("--xi", xi_assumption,
                                      "assumed noise-photon error (Method B)"),
              xi_assumption);
  extract_cmd->add_option("--config", extract_config, "JSON file with default parameter values");
  add_output(extract_cmd);

  std::string grid = "small";
  std::string verify_config;
  auto* verify_cmd = app.add_subcommand("verify", "run the self-verification suite");
  merger.bind(verify_cmd->add_option("--grid", grid, "grid size: small|full")
                  ->check(CLI::IsMember({"small", "full"})),
              grid);
  verify_cmd->add_option("--config", verify_config, "JSON file with default parameter values");
  add_output(verify_cmd);

  SourceArgs sweep_args;
  std::string sweep_param;
  double sweep_from = 0.0, sweep_to = 0.0;
  int sweep_steps = 0;
  auto* sweep_cmd =
      app.add_subcommand("sweep", "sweep one source parameter, CSV output");
  add_source_options(sweep_cmd, sweep_args, merger);
  merger.bind(sweep_cmd->add_option("--param", sweep_param, "parameter to sweep: eta|p|eps|xi")
                  ->check(CLI::IsMember({"eta", "p", "eps", "xi"})),
              sweep_param);
  merger.bind(sweep_cmd->add_option("--from", sweep_from, "first value"), sweep_from);
  merger.bind(sweep_cmd->add_option("--to", sweep_to, "last value"), sweep_to);
  merger.bind(sweep_cmd->add_option("--steps", sweep_steps, "number of grid points"),
              sweep_steps);
  add_output(sweep_cmd);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    emit_error(e.what());
    return 2;
  }
  merger.apply(cfg);

  if (app.got_subcommand(sim_src)) return run_simulate_source(src_args, output);
  if (app.got_subcommand(sim_hom)) return run_simulate_hom(hom_args, with_reference, output);
  if (app.got_subcommand(extract_cmd)) {
    if (std::isnan(visibility)) throw std::invalid_argument("--visibility is required");
    if (method.empty()) throw std::invalid_argument("--method is required");
    if (std::isnan(g2)) throw std::invalid_argument("--g2 is required");
    return run_extract(visibility, method, g2, xi_assumption, output);
  }
  if (app.got_subcommand(verify_cmd)) return run_verify(grid, output);
  if (app.got_subcommand(sweep_cmd)) {
    if (sweep_param.empty()) throw std::invalid_argument("--param is required");
    if (sweep_steps == 0) throw std::invalid_argument("--steps is required");
    return run_sweep(sweep_args, sweep_param, sweep_from, sweep_to, sweep_steps, output);
  }
  return 2;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const homsim::InconsistentMeasurement& e) {
    emit_error(e.what());
    return 3;
  } catch (const std::invalid_argument& e) {
    emit_error(e.what());
    return 2;
  } catch (const std::exception& e) {
    emit_error(std::string("internal error: ") + e.what());
    return 1;
  }
}

#include "mfaccel/cli.hpp"

#include <charconv>
#include <chrono>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "mfaccel/error.hpp"

namespace mfaccel::cli {

namespace {

using nlohmann::json;

const std::map<std::string, std::string> kCommands{
    {"build", "run the offline stage and save the model (--model)"},
    {"query", "evaluate w*, w2 and w3 at one parameter value"},
    {"order-table", "estimated convergence order p* per parameter value and component"},
    {"c-sweep", "w* error as a function of the extrapolation weight c"},
    {"rate", "sup-over-k error of w* under timestep refinement"},
    {"moments", "Monte Carlo mean and standard deviation errors"},
    {"error-vs-n", "surrogate error against the number of selected snapshots"},
};

double parse_double(const std::string& text, const char* what) {
  double v = 0.0;
  const char* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (ec != std::errc() || ptr != end)
    throw Error(ErrorCode::InvalidArgument, std::string("bad ") + what + " value '" + text + "'");
  return v;
}

// "11" or "0.5:1.2" for multi-parameter problems.
Params parse_params(const std::string& text) {
  Params k;
  std::size_t start = 0;
  while (true) {
    const std::size_t colon = text.find(':', start);
    k.push_back(parse_double(text.substr(start, colon - start), "--k"));
    if (colon == std::string::npos) break;
    start = colon + 1;
  }
  return k;
}

template <class T>
T get_as(const json& j, const std::string& key) {
  try {
    return j.get<T>();
  } catch (const json::exception&) {
    throw Error(ErrorCode::InvalidArgument, "config key '" + key + "' has the wrong type");
  }
}

std::vector<Params> params_from_json(const json& j) {
  std::vector<Params> out;
  auto one = [](const json& v) -> Params {
    if (v.is_number()) return {v.get<double>()};
    if (v.is_array()) return v.get<Params>();
    throw Error(ErrorCode::InvalidArgument, "config key 'k' entries must be numbers or arrays");
  };
  if (j.is_array()) {
    for (const auto& v : j) out.push_back(one(v));
  } else {
    out.push_back(one(j));
  }
  return out;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::Io, "cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Command-line values; a flag only overrides the config when it was given.
struct Flags {
  std::string problem, scheme, weight, model, out, config;
  double h = 0.0, tol = 0.0, t_eval = 0.0, c_min = 0.0, c_max = 0.0, fine_step = 0.0;
  int r = 0;
  std::size_t N = 0, Q = 0, n = 0, c_steps = 0, ensemble = 0, k_grid = 0;
  std::uint64_t seed = 0;
  std::vector<std::string> k;
  std::vector<int> degrees;
  std::vector<double> h_list;
};

void add_options(CLI::App& app, Flags& f) {
  app.add_option("--config", f.config, "JSON config file; flags override its values");
  app.add_option("--problem", f.problem, "oscillator | predator-prey");
  app.add_option("--scheme", f.scheme, "RK2 RK3 RK4 AB2 AB3 AB4");
  app.add_option("--h", f.h, "level-1 timestep");
  app.add_option("--r", f.r, "refinement ratio between levels");
  app.add_option("--N", f.N, "level-1 step count (overrides --h)");
  app.add_option("--Q", f.Q, "training ensemble size");
  app.add_option("--n", f.n, "maximum number of selected snapshots");
  app.add_option("--tol", f.tol, "greedy stopping tolerance, relative to the largest squared norm");
  app.add_option("--seed", f.seed, "random seed");
  app.add_option("--k", f.k, "parameter value(s); comma separated, ':' between components")->delimiter(',');
  app.add_option("--t-eval", f.t_eval, "reference time for the order estimate");
  app.add_option("--spline-degree", f.degrees, "spline degree(s); comma separated")->delimiter(',');
  app.add_option("--c-min", f.c_min, "lower end of the c grid");
  app.add_option("--c-max", f.c_max, "upper end of the c grid");
  app.add_option("--c-steps", f.c_steps, "number of c grid points");
  app.add_option("--h-list", f.h_list, "timesteps for the rate study; comma separated")->delimiter(',');
  app.add_option("--ensemble", f.ensemble, "Monte Carlo ensemble size");
  app.add_option("--k-grid", f.k_grid, "equally spaced parameter values for sup-over-k studies");
  app.add_option("--fine-step", f.fine_step, "step of the fine evaluation grid and reference solve");
  app.add_option("--weight", f.weight, "extrapolation weight: estimated | nominal");
  app.add_option("--model", f.model, "model file (written by build, read by the other commands)");
  app.add_option("--out", f.out, "CSV output path (default: stdout)");
}

std::set<std::string> apply_flags(const CLI::App& app, const Flags& f, ExperimentConfig& c) {
  std::set<std::string> seen;
  auto given = [&](const char* name) {
    if (app.count(std::string("--") + name) == 0) return false;
    seen.insert(name);
    return true;
  };
  if (given("problem")) c.problem = f.problem;
  if (given("scheme")) c.scheme = parse_scheme(f.scheme);
  if (given("h")) c.h = f.h;
  if (given("r")) c.r = f.r;
  if (given("N")) c.N = f.N;
  if (given("Q")) c.Q = f.Q;
  if (given("n")) c.n = f.n;
  if (given("tol")) c.tol = f.tol;
  if (given("seed")) c.seed = f.seed;
  if (given("k")) {
    c.k.clear();
    for (const auto& s : f.k) c.k.push_back(parse_params(s));
  }
  if (given("t-eval")) c.t_eval = f.t_eval;
  if (given("spline-degree")) c.spline_degrees = f.degrees;
  if (given("c-min")) c.c_min = f.c_min;
  if (given("c-max")) c.c_max = f.c_max;
  if (given("c-steps")) c.c_steps = f.c_steps;
  if (given("h-list")) c.h_list = f.h_list;
  if (given("ensemble")) c.ensemble = f.ensemble;
  if (given("k-grid")) c.k_grid = f.k_grid;
  if (given("fine-step")) c.fine_step = f.fine_step;
  if (given("weight")) c.weight = parse_weight_rule(f.weight);
  if (given("model")) c.model_path = f.model;
  if (given("out")) c.out_path = f.out;
  return seen;
}

void emit(const ResultTable& table, const ExperimentConfig& c, std::ostream& out) {
  if (c.out_path.empty()) {
    table.write_csv(out);
    return;
  }
  std::ofstream file(c.out_path, std::ios::binary);
  if (!file) throw Error(ErrorCode::Io, "cannot write '" + c.out_path + "'");
  table.write_csv(file);
  if (!file) throw Error(ErrorCode::Io, "write to '" + c.out_path + "' failed");
}

SurrogateModel obtain_model(const ExperimentConfig& c, std::ostream& err) {
  if (c.model_path.empty()) return build_model(c);
  SurrogateModel model = load_model(c.model_path);
  err << "loaded " << model.problem.name << "/" << scheme_name(model.scheme) << " model with n=" << model.size()
      << " from " << c.model_path << "\n";
  return model;
}

Params single_k(const ExperimentConfig& c, const SurrogateModel& model) {
  if (c.k.size() > 1) throw Error(ErrorCode::InvalidArgument, "this command takes a single --k value");
  if (c.k.empty()) return equispaced_params(model.problem.domain, 1).front();
  return c.k.front();
}

int degree_of(const ExperimentConfig& c, const SurrogateModel& model) {
  return c.spline_degrees.empty() ? scheme_order(model.scheme) : c.spline_degrees.front();
}

ResultTable run_command(const std::string& cmd, const ExperimentConfig& c, std::ostream& err) {
  if (cmd == "build") {
    if (c.model_path.empty()) throw Error(ErrorCode::InvalidArgument, "build needs --model");
    const SurrogateModel model = build_model(c);
    save_model(model, c.model_path);
    err << "saved model with n=" << model.size() << " to " << c.model_path << "\n";
    return build_summary(model);
  }
  if (cmd == "rate") return rate_table(c, convergence_rate(c));

  const SurrogateModel model = obtain_model(c, err);
  const double t_ref = c.t_eval.value_or(default_reference_time(model.base_grid));

  if (cmd == "query") {
    const LevelGrid g3 = model.grid(3);
    std::vector<double> times;
    for (std::size_t i = 0; i <= g3.steps(); ++i) times.push_back(g3.time(i));
    return query_table(model, single_k(c, model), degree_of(c, model), t_ref, times, c.weight);
  }
  if (cmd == "order-table") {
    const auto ks = c.k.empty() ? equispaced_params(model.problem.domain, 1) : c.k;
    const auto rows = estimate_orders(model, ks, t_ref, degree_of(c, model));
    for (const auto& row : rows)
      if (!row.estimate.valid)
        err << "warning: order estimate invalid at component " << row.component
            << "; falling back to the scheme order\n";
    return order_table(model, rows);
  }
  if (cmd == "c-sweep") {
    const std::vector<int> degrees =
        c.spline_degrees.empty() ? std::vector<int>{scheme_order(model.scheme)} : c.spline_degrees;
    const Params k = single_k(c, model);
    const ReferenceSolution reference(model.problem, c.fine_step);
    const auto series = c_sweep(model, k, degrees, c_grid(c.c_min, c.c_max, c.c_steps), reference, c.fine_step);
    return c_sweep_table(model, k, series);
  }
  if (cmd == "moments") {
    const ReferenceSolution reference(model.problem, c.fine_step);
    const auto res = moments(model, c.ensemble, c.seed, degree_of(c, model), reference, c.weight);
    return moments_table(model, res);
  }
  if (cmd == "error-vs-n") {
    const auto ks = c.k.empty() ? equispaced_params(model.problem.domain, c.k_grid) : c.k;
    const ReferenceSolution reference(model.problem, c.fine_step);
    return error_vs_n_table(model, surrogate_error_vs_n(model, ks, reference.as_function()));
  }
  throw Error(ErrorCode::InvalidArgument, "unknown command '" + cmd + "'");
}

}  // namespace

ExperimentConfig defaults_for(const std::string& command) {
  ExperimentConfig c;
  if (command == "rate") {
    c.n = c.Q;
    c.tol = 1e-24;
    c.weight = WeightRule::Nominal;
  }
  return c;
}

std::set<std::string> apply_json(ExperimentConfig& c, const std::string& json_text) {
  json root;
  try {
    root = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::InvalidArgument, std::string("config is not valid JSON: ") + e.what());
  }
  if (!root.is_object()) throw Error(ErrorCode::InvalidArgument, "config must be a JSON object");

  std::set<std::string> seen;
  for (const auto& [key, v] : root.items()) {
    seen.insert(key);
    if (key == "problem") c.problem = get_as<std::string>(v, key);
    else if (key == "scheme") c.scheme = parse_scheme(get_as<std::string>(v, key));
    else if (key == "h") c.h = get_as<double>(v, key);
    else if (key == "r") c.r = get_as<int>(v, key);
    else if (key == "N") c.N = get_as<std::size_t>(v, key);
    else if (key == "Q") c.Q = get_as<std::size_t>(v, key);
    else if (key == "n") c.n = get_as<std::size_t>(v, key);
    else if (key == "tol") c.tol = get_as<double>(v, key);
    else if (key == "seed") c.seed = get_as<std::uint64_t>(v, key);
    else if (key == "k") c.k = params_from_json(v);
    else if (key == "t_eval") c.t_eval = get_as<double>(v, key);
    else if (key == "spline_degree")
      c.spline_degrees = v.is_array() ? get_as<std::vector<int>>(v, key) : std::vector<int>{get_as<int>(v, key)};
    else if (key == "c_min") c.c_min = get_as<double>(v, key);
    else if (key == "c_max") c.c_max = get_as<double>(v, key);
    else if (key == "c_steps") c.c_steps = get_as<std::size_t>(v, key);
    else if (key == "h_list") c.h_list = get_as<std::vector<double>>(v, key);
    else if (key == "ensemble") c.ensemble = get_as<std::size_t>(v, key);
    else if (key == "k_grid") c.k_grid = get_as<std::size_t>(v, key);
    else if (key == "fine_step") c.fine_step = get_as<double>(v, key);
    else if (key == "weight") c.weight = parse_weight_rule(get_as<std::string>(v, key));
    else if (key == "model") c.model_path = get_as<std::string>(v, key);
    else if (key == "out") c.out_path = get_as<std::string>(v, key);
    else throw Error(ErrorCode::InvalidArgument, "unknown config key '" + key + "'");
  }
  return seen;
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app("Multifidelity surrogates with Richardson-accelerated convergence", "mfaccel");
  app.set_help_flag("--help", "print this help and exit");  // -h would clash with --h
  app.require_subcommand(1);
  app.fallthrough();
  Flags flags;
  add_options(app, flags);
  for (const auto& [name, help] : kCommands) app.add_subcommand(name, help);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kExitUsage;
  }

  const std::string cmd = app.get_subcommands().front()->get_name();
  const auto started = std::chrono::steady_clock::now();
  try {
    ExperimentConfig config = defaults_for(cmd);
    std::set<std::string> set_keys;
    if (!flags.config.empty()) set_keys = apply_json(config, read_file(flags.config));
    set_keys.merge(apply_flags(app, flags, config));
    if (cmd == "rate" && !set_keys.contains("n")) config.n = config.Q;

    const ResultTable table = run_command(cmd, config, err);
    emit(table, config, out);
  } catch (const Error& e) {
    err << "mfaccel " << cmd << ": " << e.what() << "\n";
    return is_numerical(e.code()) ? kExitNumerical : kExitUsage;
  } catch (const std::exception& e) {
    err << "mfaccel " << cmd << ": " << e.what() << "\n";
    return kExitNumerical;
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  err << "mfaccel " << cmd << ": done in " << secs << " s\n";
  return kExitOk;
}

}  // namespace mfaccel::cli

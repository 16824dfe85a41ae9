#include "app.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>

#ifndef FOPID_VERSION
#define FOPID_VERSION "dev"
#endif

namespace fopid::app {

using nlohmann::json;
namespace fs = std::filesystem;

// ---------------------------------------------------------------------------
// formatting

std::string format_double(double value) {
  if (std::isnan(value)) {
    return "nan";
  }
  if (std::isinf(value)) {
    return value > 0 ? "inf" : "-inf";
  }
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, res.ptr);
}

std::string response_csv(const gl::StepResponse& response) {
  std::string out = "t,y\n";
  out.reserve(response.samples.size() * 32);
  for (std::size_t k = 0; k < response.samples.size(); ++k) {
    out += format_double(response.time(k));
    out += ',';
    out += format_double(response.samples[k]);
    out += '\n';
  }
  return out;
}

std::pair<std::vector<double>, std::vector<double>> parse_response_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || line != "t,y") {
    throw std::runtime_error("response CSV must start with header \"t,y\"");
  }
  std::vector<double> t;
  std::vector<double> y;
  auto parse = [](std::string_view field) {
    double v = 0.0;
    const auto res = std::from_chars(field.data(), field.data() + field.size(), v);
    if (res.ec != std::errc{} || res.ptr != field.data() + field.size()) {
      throw std::runtime_error("malformed number in response CSV: " + std::string(field));
    }
    return v;
  };
  while (std::getline(in, line)) {
    if (line.empty()) {
      continue;
    }
    const auto comma = line.find(',');
    if (comma == std::string::npos) {
      throw std::runtime_error("response CSV row without comma");
    }
    const std::string_view view(line);
    t.push_back(parse(view.substr(0, comma)));
    y.push_back(parse(view.substr(comma + 1)));
  }
  return {std::move(t), std::move(y)};
}

std::string fingerprint(const std::string& bytes) {
  std::uint64_t hash = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    hash ^= c;
    hash *= 0x100000001b3ULL;
  }
  std::ostringstream os;
  os << "fnv1a64:" << std::hex << std::setw(16) << std::setfill('0') << hash;
  return os.str();
}

// ---------------------------------------------------------------------------
// job parsing

namespace {

double number_at(const json& obj, const std::string& key, const std::string& path) {
  const auto it = obj.find(key);
  if (it == obj.end()) {
    throw ConfigError(path + "." + key, "missing");
  }
  if (!it->is_number()) {
    throw ConfigError(path + "." + key, "must be a number");
  }
  const double v = it->get<double>();
  if (!std::isfinite(v)) {
    throw ConfigError(path + "." + key, "must be finite");
  }
  return v;
}

std::optional<double> optional_number(const json& obj, const std::string& key,
                                      const std::string& path) {
  if (!obj.contains(key)) {
    return std::nullopt;
  }
  return number_at(obj, key, path);
}

std::optional<std::uint64_t> optional_count(const json& obj, const std::string& key,
                                            const std::string& path) {
  if (!obj.contains(key)) {
    return std::nullopt;
  }
  const json& v = obj.at(key);
  if (!v.is_number_unsigned()) {
    throw ConfigError(path + "." + key, "must be a non-negative integer");
  }
  return v.get<std::uint64_t>();
}

std::vector<Term> parse_terms(const json& doc, const std::string& path) {
  if (!doc.is_array()) {
    throw ConfigError(path, "must be an array of [coefficient, exponent] pairs");
  }
  std::vector<Term> terms;
  for (std::size_t k = 0; k < doc.size(); ++k) {
    const json& t = doc[k];
    const std::string here = path + "[" + std::to_string(k) + "]";
    if (!t.is_array() || t.size() != 2 || !t[0].is_number() || !t[1].is_number()) {
      throw ConfigError(here, "must be a [coefficient, exponent] pair of numbers");
    }
    terms.push_back({t[0].get<double>(), t[1].get<double>()});
  }
  return terms;
}

std::pair<double, double> parse_range(const json& obj, const std::string& key,
                                      std::pair<double, double> fallback, const std::string& path) {
  if (!obj.contains(key)) {
    return fallback;
  }
  const json& r = obj.at(key);
  if (!r.is_array() || r.size() != 2 || !r[0].is_number() || !r[1].is_number()) {
    throw ConfigError(path + "." + key, "must be a [lower, upper] pair");
  }
  std::pair<double, double> out{r[0].get<double>(), r[1].get<double>()};
  if (!(out.first < out.second)) {
    throw ConfigError(path + "." + key, "lower bound must be below upper bound");
  }
  return out;
}

ControllerParams parse_params(const json& obj, const std::string& path) {
  if (!obj.is_object()) {
    throw ConfigError(path, "must be an object");
  }
  ControllerParams c;
  c.kp = number_at(obj, "kp", path);
  c.ti = number_at(obj, "ti", path);
  c.td = number_at(obj, "td", path);
  c.lambda = optional_number(obj, "lambda", path).value_or(1.0);
  c.delta = optional_number(obj, "delta", path).value_or(1.0);
  if (c.lambda < 0.0) {
    throw ConfigError(path + ".lambda", "must be non-negative");
  }
  return c;
}

std::vector<NamedController> parse_controller_list(const json& arr, const std::string& path) {
  if (!arr.is_array()) {
    throw ConfigError(path, "must be an array");
  }
  std::vector<NamedController> out;
  for (std::size_t k = 0; k < arr.size(); ++k) {
    const std::string here = path + "[" + std::to_string(k) + "]";
    const json& entry = arr[k];
    const json& params = entry.contains("params") ? entry.at("params") : entry;
    NamedController nc;
    nc.label = entry.value("label", "controller_" + std::to_string(k));
    nc.params = parse_params(params, entry.contains("params") ? here + ".params" : here);
    out.push_back(std::move(nc));
  }
  return out;
}

}  // namespace

JobMode parse_mode(const std::string& text) {
  if (text == "fractional") return JobMode::Fractional;
  if (text == "integer") return JobMode::Integer;
  if (text == "both") return JobMode::Both;
  throw ConfigError("mode", "must be one of fractional, integer, both (got \"" + text + "\")");
}

std::string to_string(JobMode mode) {
  switch (mode) {
    case JobMode::Fractional:
      return "fractional";
    case JobMode::Integer:
      return "integer";
    case JobMode::Both:
      return "both";
  }
  return "both";
}

JobConfig parse_job(const json& doc) {
  if (!doc.is_object()) {
    throw ConfigError("<root>", "job configuration must be a JSON object");
  }
  JobConfig job;
  job.name = doc.value("name", job.name);

  if (!doc.contains("plant") || !doc.at("plant").is_object()) {
    throw ConfigError("plant", "missing or not an object");
  }
  const json& plant = doc.at("plant");
  if (!plant.contains("denominator")) {
    throw ConfigError("plant.denominator", "missing");
  }
  std::vector<Term> num = plant.contains("numerator")
                              ? parse_terms(plant.at("numerator"), "plant.numerator")
                              : std::vector<Term>{{1.0, 0.0}};
  std::vector<Term> den = parse_terms(plant.at("denominator"), "plant.denominator");
  try {
    job.plant = FractionalTransferFunction::from_terms(std::move(num), std::move(den));
  } catch (const std::invalid_argument& e) {
    throw ConfigError("plant", e.what());
  }

  if (!doc.contains("spec") || !doc.at("spec").is_object()) {
    throw ConfigError("spec", "missing or not an object");
  }
  const json& spec = doc.at("spec");
  const bool direct = spec.contains("zeta") || spec.contains("omega0");
  const bool requirements = spec.contains("mp") || spec.contains("trise");
  if (direct == requirements) {
    throw ConfigError("spec", "give exactly one of {zeta, omega0} or {mp, trise}");
  }
  if (direct) {
    const double zeta = number_at(spec, "zeta", "spec");
    const double omega0 = number_at(spec, "omega0", "spec");
    if (!(zeta > 0.0 && zeta < 1.0)) {
      throw ConfigError("spec.zeta", "damping ratio must lie in (0, 1)");
    }
    if (!(omega0 > 0.0)) {
      throw ConfigError("spec.omega0", "natural frequency must be positive");
    }
    job.spec = DampingFrequency{zeta, omega0};
  } else {
    const double mp = number_at(spec, "mp", "spec");
    const double trise = number_at(spec, "trise", "spec");
    if (!(mp > 0.0 && mp < 1.0)) {
      throw ConfigError("spec.mp", "peak overshoot fraction must lie in (0, 1)");
    }
    if (!(trise > 0.0)) {
      throw ConfigError("spec.trise", "rise time must be positive");
    }
    job.spec = OvershootRiseTime{mp, trise};
  }

  if (doc.contains("mode")) {
    if (!doc.at("mode").is_string()) {
      throw ConfigError("mode", "must be a string");
    }
    job.mode = parse_mode(doc.at("mode").get<std::string>());
  }

  if (doc.contains("bounds")) {
    const json& b = doc.at("bounds");
    if (!b.is_object()) {
      throw ConfigError("bounds", "must be an object");
    }
    job.bounds.kp = parse_range(b, "kp", job.bounds.kp, "bounds");
    job.bounds.ti = parse_range(b, "ti", job.bounds.ti, "bounds");
    job.bounds.td = parse_range(b, "td", job.bounds.td, "bounds");
    job.bounds.lambda = parse_range(b, "lambda", job.bounds.lambda, "bounds");
    job.bounds.delta = parse_range(b, "delta", job.bounds.delta, "bounds");
  }

  if (doc.contains("pso")) {
    const json& p = doc.at("pso");
    if (!p.is_object()) {
      throw ConfigError("pso", "must be an object");
    }
    if (auto v = optional_count(p, "swarm_size", "pso")) {
      if (*v == 0) throw ConfigError("pso.swarm_size", "must be positive");
      job.pso.swarm_size = *v;
    }
    if (auto v = optional_count(p, "iterations", "pso")) {
      if (*v == 0) throw ConfigError("pso.iterations", "must be positive");
      job.pso.max_iterations = *v;
    }
    if (auto v = optional_count(p, "seed", "pso")) job.pso.seed = *v;
    if (auto v = optional_number(p, "target_fitness", "pso")) {
      if (*v < 0.0) throw ConfigError("pso.target_fitness", "must be non-negative");
      job.pso.target_fitness = *v;
    }
    if (auto v = optional_number(p, "inertia", "pso")) job.pso.inertia = *v;
    if (auto v = optional_number(p, "cognitive", "pso")) job.pso.cognitive = *v;
    if (auto v = optional_number(p, "social", "pso")) job.pso.social = *v;
    if (auto v = optional_number(p, "velocity_limit", "pso")) {
      if (*v <= 0.0) throw ConfigError("pso.velocity_limit", "must be positive");
      job.pso.velocity_limit_fraction = *v;
    }
    if (p.contains("coefficient_draw")) {
      const std::string d = p.at("coefficient_draw").get<std::string>();
      if (d == "per_particle") {
        job.pso.draw = pso::CoefficientDraw::PerParticle;
      } else if (d == "per_dimension") {
        job.pso.draw = pso::CoefficientDraw::PerDimension;
      } else {
        throw ConfigError("pso.coefficient_draw", "must be per_particle or per_dimension");
      }
    }
    if (job.pso.inertia < 0.0 || job.pso.cognitive < 0.0 || job.pso.social < 0.0) {
      throw ConfigError("pso", "inertia, cognitive and social must be non-negative");
    }
  }

  if (doc.contains("sim")) {
    const json& s = doc.at("sim");
    if (!s.is_object()) {
      throw ConfigError("sim", "must be an object");
    }
    if (auto v = optional_number(s, "time_step", "sim")) {
      if (*v <= 0.0) throw ConfigError("sim.time_step", "must be positive");
      job.sim.time_step = *v;
    }
    if (auto v = optional_number(s, "horizon", "sim")) {
      if (*v <= 0.0) throw ConfigError("sim.horizon", "must be positive");
      job.sim.horizon = *v;
    }
    if (s.contains("memory_length")) {
      const json& m = s.at("memory_length");
      if (m.is_string() && m.get<std::string>() == "full") {
        job.sim.memory_length.reset();
      } else if (m.is_number_integer() && m.get<std::int64_t>() > 0) {
        job.sim.memory_length = m.get<std::size_t>();
      } else {
        throw ConfigError("sim.memory_length", "must be \"full\" or a positive integer");
      }
    }
    if (s.contains("open_loop")) {
      if (!s.at("open_loop").is_boolean()) {
        throw ConfigError("sim.open_loop", "must be true or false");
      }
      job.open_loop = s.at("open_loop").get<bool>();
    }
    try {
      job.sim.validate();
    } catch (const std::invalid_argument& e) {
      throw ConfigError("sim", e.what());
    }
  }

  if (doc.contains("controllers")) {
    job.controllers = parse_controller_list(doc.at("controllers"), "controllers");
  }

  if (doc.contains("output")) {
    if (!doc.at("output").is_string()) {
      throw ConfigError("output", "must be a path string");
    }
    job.output_dir = doc.at("output").get<std::string>();
  }

  // The pole must be constructible before any work starts.
  try {
    const DampingFrequency df = resolve(job.spec);
    poles_from_damping(df.damping_ratio, df.natural_frequency);
  } catch (const DomainError& e) {
    throw ConfigError("spec", e.what());
  }
  return job;
}

namespace {

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw ConfigError(path.string(), "cannot open file");
  }
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

json parse_json_file(const fs::path& path, const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(path.string(), std::string("invalid JSON: ") + e.what());
  }
}

}  // namespace

JobConfig load_job(const fs::path& path) {
  const std::string text = read_file(path);
  return parse_job(parse_json_file(path, text));
}

std::vector<NamedController> load_controllers(const fs::path& path) {
  const std::string text = read_file(path);
  const json doc = parse_json_file(path, text);
  if (doc.contains("results")) {
    return parse_controller_list(doc.at("results"), "results");
  }
  if (doc.contains("controllers")) {
    return parse_controller_list(doc.at("controllers"), "controllers");
  }
  throw ConfigError(path.string(), "expected a \"results\" or \"controllers\" array");
}

// ---------------------------------------------------------------------------
// commands

namespace {

struct Context {
  JobConfig job;
  std::string config_bytes;
  std::string params_bytes;
  fs::path out_dir;
};

Context prepare(const CliOptions& options) {
  Context ctx;
  ctx.config_bytes = read_file(options.config);
  ctx.job = parse_job(parse_json_file(options.config, ctx.config_bytes));
  if (options.seed) {
    ctx.job.pso.seed = *options.seed;
  }
  if (options.mode) {
    ctx.job.mode = parse_mode(*options.mode);
  }
  if (options.params) {
    ctx.params_bytes = read_file(*options.params);
    ctx.job.controllers = load_controllers(*options.params);
  }
  ctx.out_dir = options.out ? *options.out : ctx.job.output_dir;
  std::error_code ec;
  fs::create_directories(ctx.out_dir, ec);
  if (ec) {
    throw ConfigError("output", "cannot create directory " + ctx.out_dir.string());
  }
  return ctx;
}

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw std::runtime_error("cannot write " + path.string());
  }
  out << content;
}

void write_manifest(const Context& ctx, const std::string& command) {
  json m;
  m["tool"] = "fopid";
  m["version"] = FOPID_VERSION;
  m["command"] = command;
  m["config_hash"] = fingerprint(ctx.config_bytes);
  m["seed"] = ctx.job.pso.seed;
  m["mode"] = to_string(ctx.job.mode);
  if (!ctx.params_bytes.empty()) {
    m["params_hash"] = fingerprint(ctx.params_bytes);
  }
  write_file(ctx.out_dir / "manifest.json", m.dump(2) + "\n");
}

json params_json(const ControllerParams& c) {
  return {{"kp", c.kp}, {"ti", c.ti}, {"td", c.td}, {"lambda", c.lambda}, {"delta", c.delta}};
}

json nullable(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

std::string pole_text(ComplexValue s) {
  std::string out = format_double(s.real());
  out += s.imag() < 0 ? " - j" : " + j";
  out += format_double(std::abs(s.imag()));
  return out;
}

std::string plant_text(const FractionalTransferFunction& tf) {
  return "(" + to_string(tf.numerator()) + ") / (" + to_string(tf.denominator()) + ")";
}

DominantPoles job_poles(const JobConfig& job, DampingFrequency& df) {
  df = resolve(job.spec);
  return poles_from_damping(df.damping_ratio, df.natural_frequency);
}

std::string safe_label(const std::string& label) {
  std::string out;
  for (char c : label) {
    const bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') ||
                    c == '_' || c == '-';
    out += ok ? c : '_';
  }
  return out.empty() ? "curve" : out;
}

template <typename Fn>
int guarded(std::ostream& err, Fn&& fn) {
  try {
    return fn();
  } catch (const ConfigError& e) {
    err << "fopid: input error: " << e.what() << "\n";
    return kExitInputError;
  } catch (const DomainError& e) {
    err << "fopid: input error: " << e.what() << "\n";
    return kExitInputError;
  } catch (const std::invalid_argument& e) {
    err << "fopid: input error: " << e.what() << "\n";
    return kExitInputError;
  } catch (const json::exception& e) {
    err << "fopid: input error: " << e.what() << "\n";
    return kExitInputError;
  }
}

}  // namespace

int run_tune(const CliOptions& options, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const Context ctx = prepare(options);
    const JobConfig& job = ctx.job;
    DampingFrequency df;
    const DominantPoles poles = job_poles(job, df);

    std::vector<TuningMode> modes;
    if (job.mode != JobMode::Fractional) modes.push_back(TuningMode::Integer);
    if (job.mode != JobMode::Integer) modes.push_back(TuningMode::Fractional);

    json report;
    report["tool"] = "fopid";
    report["version"] = FOPID_VERSION;
    report["job"] = job.name;
    report["seed"] = job.pso.seed;
    report["zeta"] = df.damping_ratio;
    report["omega0"] = df.natural_frequency;
    report["pole"] = {{"re", -poles.x}, {"im", poles.y}};
    report["swarm_size"] = job.pso.swarm_size;
    report["max_iterations"] = job.pso.max_iterations;
    report["target_fitness"] = job.pso.target_fitness;
    report["results"] = json::array();

    std::ostringstream text;
    text << "fopid tune report\n"
         << "job: " << job.name << "\n"
         << "plant: " << plant_text(job.plant) << "\n"
         << "dominant pole: " << pole_text(poles.upper()) << " (zeta " << format_double(df.damping_ratio)
         << ", omega0 " << format_double(df.natural_frequency) << ")\n"
         << "seed: " << job.pso.seed << "\n"
         << "swarm: " << job.pso.swarm_size << " particles, at most " << job.pso.max_iterations
         << " iterations, target fitness " << format_double(job.pso.target_fitness) << "\n";

    bool all_converged = true;
    std::vector<std::pair<std::string, TuneResult>> results;
    for (TuningMode mode : modes) {
      TuningProblem problem{job.plant, poles, mode, job.bounds, PoleBranch::Upper};
      TuneResult r = tune(problem, job.pso);
      const ResidualValue res = residual(r.params, problem);
      const std::string name = mode == TuningMode::Integer ? "integer" : "fractional";
      all_converged = all_converged && r.converged;

      json entry;
      entry["label"] = "tuned_" + name;
      entry["mode"] = name;
      entry["params"] = params_json(r.params);
      entry["fitness"] = r.swarm.best_fitness;
      entry["residual"] = {{"r", res.r}, {"i", res.i}, {"p", res.p}, {"f", res.f}};
      entry["iterations"] = r.swarm.iterations_run;
      entry["converged"] = r.converged;
      entry["fitness_history"] = r.swarm.fitness_history;
      report["results"].push_back(entry);

      text << "\n[" << name << "]\n"
           << "  kp         = " << format_double(r.params.kp) << "\n"
           << "  ti         = " << format_double(r.params.ti) << "\n"
           << "  td         = " << format_double(r.params.td) << "\n"
           << "  lambda     = " << format_double(r.params.lambda) << "\n"
           << "  delta      = " << format_double(r.params.delta) << "\n"
           << "  fitness    = " << format_double(r.swarm.best_fitness) << "\n"
           << "  R, I, P    = " << format_double(res.r) << ", " << format_double(res.i) << ", "
           << format_double(res.p) << "\n"
           << "  iterations = " << r.swarm.iterations_run << "\n"
           << "  converged  = " << (r.converged ? "yes" : "no") << "\n"
           << "  history    =";
      for (double h : r.swarm.fitness_history) {
        text << ' ' << format_double(h);
      }
      text << "\n";
      results.emplace_back(name, std::move(r));
    }

    if (results.size() == 2) {
      text << "\nsummary\n";
      text << "  " << std::left << std::setw(10) << "" << std::setw(26) << "integer"
           << "fractional\n";
      auto row = [&](const char* label, double a, double b) {
        text << "  " << std::left << std::setw(10) << label << std::setw(26) << format_double(a)
             << format_double(b) << "\n";
      };
      const auto& a = results[0].second;
      const auto& b = results[1].second;
      row("kp", a.params.kp, b.params.kp);
      row("ti", a.params.ti, b.params.ti);
      row("td", a.params.td, b.params.td);
      row("lambda", a.params.lambda, b.params.lambda);
      row("delta", a.params.delta, b.params.delta);
      row("fitness", a.swarm.best_fitness, b.swarm.best_fitness);
    }

    write_file(ctx.out_dir / "tune_report.txt", text.str());
    write_file(ctx.out_dir / "tune_report.json", report.dump(2) + "\n");
    write_manifest(ctx, "tune");
    out << text.str();
    if (!all_converged) {
      err << "fopid: warning: best fitness above target " << format_double(job.pso.target_fitness)
          << "\n";
      return kExitNotConverged;
    }
    return kExitOk;
  });
}

int run_simulate(const CliOptions& options, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const Context ctx = prepare(options);
    const JobConfig& job = ctx.job;
    if (job.controllers.empty() && !job.open_loop) {
      throw ConfigError("controllers", "nothing to simulate: give --params, inline controllers or "
                                       "sim.open_loop = true");
    }

    struct Curve {
      std::string label;
      FractionalTransferFunction tf;
    };
    std::vector<Curve> curves;
    if (job.open_loop) {
      curves.push_back({"open_loop", job.plant});
    }
    for (const NamedController& c : job.controllers) {
      curves.push_back({c.label, closed_loop(controller_tf(c.params), job.plant)});
    }

    json report;
    report["tool"] = "fopid";
    report["version"] = FOPID_VERSION;
    report["job"] = job.name;
    report["time_step"] = job.sim.time_step;
    report["horizon"] = job.sim.horizon;
    report["memory_length"] =
        job.sim.memory_length ? json(*job.sim.memory_length) : json("full");
    report["curves"] = json::array();

    std::ostringstream text;
    text << "fopid simulate report\n"
         << "job: " << job.name << "\n"
         << "plant: " << plant_text(job.plant) << "\n"
         << "time step " << format_double(job.sim.time_step) << " s, horizon "
         << format_double(job.sim.horizon) << " s, memory "
         << (job.sim.memory_length ? std::to_string(*job.sim.memory_length) : "full") << "\n";

    for (const Curve& curve : curves) {
      gl::StepResponse response;
      std::optional<std::size_t> diverged_at;
      try {
        response = gl::simulate_step(curve.tf, job.sim);
      } catch (const gl::DivergenceError& e) {
        response = e.partial();
        diverged_at = e.first_bad_index();
      }
      const std::string file = safe_label(curve.label) + ".csv";
      write_file(ctx.out_dir / file, response_csv(response));

      ResponseMetrics m{};
      if (response.samples.size() >= 2) {
        m = analyze(response);
      }
      if (diverged_at) {
        m.stable = false;
      }

      json entry;
      entry["label"] = curve.label;
      entry["file"] = file;
      entry["samples"] = response.samples.size();
      entry["closed_loop_denominator"] = to_string(curve.tf.denominator());
      entry["metrics"] = {{"overshoot_percent", nullable(m.overshoot_percent)},
                          {"rise_time", nullable(m.rise_time)},
                          {"settling_time", nullable(m.settling_time)},
                          {"steady_state", nullable(m.steady_state)},
                          {"stable", m.stable}};
      entry["diverged_at"] = diverged_at ? json(*diverged_at) : json(nullptr);
      report["curves"].push_back(entry);

      text << "\n[" << curve.label << "] -> " << file << "\n"
           << "  overshoot %   = " << format_double(m.overshoot_percent) << "\n"
           << "  rise time     = " << format_double(m.rise_time) << " s (10-90%)\n"
           << "  settling time = " << format_double(m.settling_time) << " s (2%)\n"
           << "  steady state  = " << format_double(m.steady_state) << "\n"
           << "  stable        = " << (m.stable ? "yes" : "no") << "\n";
      if (diverged_at) {
        text << "  diverged at sample " << *diverged_at << "\n";
      }
    }

    write_file(ctx.out_dir / "simulate_report.txt", text.str());
    write_file(ctx.out_dir / "simulate_report.json", report.dump(2) + "\n");
    write_manifest(ctx, "simulate");
    out << text.str();
    return kExitOk;
  });
}

int run_verify(const CliOptions& options, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const Context ctx = prepare(options);
    const JobConfig& job = ctx.job;
    if (job.controllers.empty()) {
      throw ConfigError("controllers", "no controller parameters: give --params or inline controllers");
    }
    DampingFrequency df;
    const DominantPoles poles = job_poles(job, df);

    json report;
    report["tool"] = "fopid";
    report["version"] = FOPID_VERSION;
    report["job"] = job.name;
    report["controllers"] = json::array();

    std::ostringstream text;
    text << "fopid verify report\n"
         << "job: " << job.name << "\n"
         << "plant: " << plant_text(job.plant) << "\n";

    for (const NamedController& c : job.controllers) {
      json entry;
      entry["label"] = c.label;
      entry["params"] = params_json(c.params);
      entry["poles"] = json::array();
      text << "\n[" << c.label << "] kp=" << format_double(c.params.kp)
           << " ti=" << format_double(c.params.ti) << " td=" << format_double(c.params.td)
           << " lambda=" << format_double(c.params.lambda)
           << " delta=" << format_double(c.params.delta) << "\n";
      for (PoleBranch branch : {PoleBranch::Upper, PoleBranch::Lower}) {
        const TuningProblem problem{job.plant, poles, TuningMode::Fractional, job.bounds, branch};
        const ResidualValue r = residual(c.params, problem);
        const ComplexValue s = problem.pole();
        entry["poles"].push_back({{"re", s.real()},
                                  {"im", s.imag()},
                                  {"r", r.r},
                                  {"i", r.i},
                                  {"p", r.p},
                                  {"f", r.f}});
        text << "  at " << pole_text(s) << ":  R = " << format_double(r.r)
             << "  I = " << format_double(r.i) << "  P = " << format_double(r.p)
             << "  f = " << format_double(r.f) << "\n";
      }
      report["controllers"].push_back(entry);
    }

    write_file(ctx.out_dir / "verify_report.txt", text.str());
    write_file(ctx.out_dir / "verify_report.json", report.dump(2) + "\n");
    write_manifest(ctx, "verify");
    out << text.str();
    return kExitOk;
  });
}

}  // namespace fopid::app

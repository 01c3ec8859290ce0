#include "bgkmix/config.hpp"

#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "bgkmix/errors.hpp"
#include "bgkmix/macroscopic.hpp"

namespace bgkmix {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream in(s);
  while (std::getline(in, cur, sep)) out.push_back(trim(cur));
  return out;
}

struct Entry {
  std::string value;
  int line = 0;
  bool used = false;
};

class Document {
public:
  explicit Document(const std::string& text) {
    std::istringstream in(text);
    std::string raw, section;
    int line_no = 0;
    while (std::getline(in, raw)) {
      ++line_no;
      std::string line = raw;
      const auto hash = line.find_first_of("#");
      if (hash != std::string::npos) line = line.substr(0, hash);
      line = trim(line);
      if (line.empty()) continue;
      if (line.front() == '[') {
        if (line.back() != ']') fail(line_no, "unterminated section header");
        section = trim(line.substr(1, line.size() - 2));
        if (!known_sections().count(section)) fail(line_no, "unknown section [" + section + "]");
        continue;
      }
      const auto eq = line.find('=');
      if (eq == std::string::npos) fail(line_no, "expected key = value");
      if (section.empty()) fail(line_no, "key outside any section");
      const std::string key = section + "." + trim(line.substr(0, eq));
      if (entries_.count(key)) fail(line_no, "duplicate key " + key);
      entries_[key] = {trim(line.substr(eq + 1)), line_no, false};
    }
  }

  bool has(const std::string& key) const { return entries_.count(key) != 0; }

  const std::string* get(const std::string& key) {
    auto it = entries_.find(key);
    if (it == entries_.end()) return nullptr;
    it->second.used = true;
    return &it->second.value;
  }

  double number(const std::string& key, double fallback) {
    const std::string* v = get(key);
    return v ? parse_number(key, *v) : fallback;
  }

  int integer(const std::string& key, int fallback) {
    const std::string* v = get(key);
    if (!v) return fallback;
    const double x = parse_number(key, *v);
    if (x != std::floor(x) || std::fabs(x) > 2e9) throw ConfigError(key + ": expected an integer, got '" + *v + "'");
    return static_cast<int>(x);
  }

  std::string text(const std::string& key, const std::string& fallback) {
    const std::string* v = get(key);
    return v ? *v : fallback;
  }

  void reject_unused() const {
    for (const auto& [key, e] : entries_)
      if (!e.used) throw ConfigError("unknown key " + key + " (line " + std::to_string(e.line) + ")");
  }

  static double parse_number(const std::string& key, const std::string& v) {
    errno = 0;
    char* end = nullptr;
    const double x = std::strtod(v.c_str(), &end);
    if (v.empty() || end != v.c_str() + v.size() || errno == ERANGE || !std::isfinite(x))
      throw ConfigError(key + ": expected a finite number, got '" + v + "'");
    return x;
  }

private:
  static const std::set<std::string>& known_sections() {
    static const std::set<std::string> s{"model", "grid", "params", "initial", "time", "suite", "compare", "output"};
    return s;
  }
  [[noreturn]] static void fail(int line, const std::string& what) {
    throw ConfigError("config line " + std::to_string(line) + ": " + what);
  }
  std::map<std::string, Entry> entries_;
};

Vec3 parse_vector(const std::string& key, const std::string& v) {
  const auto parts = split(v, ',');
  if (parts.empty() || parts.size() > 3) throw ConfigError(key + ": velocity needs 1 to 3 comma-separated components");
  Vec3 out{0.0, 0.0, 0.0};
  for (std::size_t i = 0; i < parts.size(); ++i) out[i] = Document::parse_number(key, parts[i]);
  return out;
}

// "n=1 u=0.5,0,0 T=1 ; n=0.2 u=0 T=2"
std::vector<MaxwellianComponent> parse_components(const std::string& key, const std::string& v) {
  std::vector<MaxwellianComponent> out;
  for (const std::string& part : split(v, ';')) {
    if (part.empty()) continue;
    MaxwellianComponent c;
    std::istringstream in(part);
    std::string tok;
    std::set<std::string> seen;
    while (in >> tok) {
      const auto eq = tok.find('=');
      if (eq == std::string::npos) throw ConfigError(key + ": expected name=value, got '" + tok + "'");
      const std::string name = tok.substr(0, eq), val = tok.substr(eq + 1);
      if (!seen.insert(name).second) throw ConfigError(key + ": repeated field '" + name + "'");
      if (name == "n") c.n = Document::parse_number(key, val);
      else if (name == "u") c.u = parse_vector(key, val);
      else if (name == "T") c.T = Document::parse_number(key, val);
      else throw ConfigError(key + ": unknown component field '" + name + "' (expected n, u, T)");
    }
    if (!(c.n > 0.0)) throw ConfigError(key + ": component density must be positive");
    if (!(c.T > 0.0)) throw ConfigError(key + ": component temperature must be positive");
    out.push_back(c);
  }
  if (out.empty()) throw ConfigError(key + ": needs at least one Maxwellian component");
  return out;
}

std::vector<double> parse_list(const std::string& key, const std::string& v) {
  std::vector<double> out;
  for (const std::string& s : split(v, ',')) out.push_back(Document::parse_number(key, s));
  if (out.empty()) throw ConfigError(key + ": empty list");
  return out;
}

std::string fmt(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string fmt_vec(const Vec3& u) { return fmt(u[0]) + "," + fmt(u[1]) + "," + fmt(u[2]); }

std::string fmt_components(const SpeciesInitial& s) {
  std::string out;
  for (std::size_t i = 0; i < s.components.size(); ++i) {
    const auto& c = s.components[i];
    if (i) out += " ; ";
    out += "n=" + fmt(c.n) + " u=" + fmt_vec(c.u) + " T=" + fmt(c.T);
  }
  return out;
}

} // namespace

double initial_mean_density(const SpeciesInitial& init) {
  double n = 0.0;
  for (const auto& c : init.components) n += c.n;
  return n;
}

RunConfig parse_config(const std::string& text) {
  Document doc(text);
  RunConfig cfg;
  SimulationSettings& sim = cfg.sim;
  MixtureParameters& p = sim.params;

  // [model]
  const std::string variant = doc.text("model.variant", "two-term");
  if (variant == "two-term") p.variant = ModelVariant::two_term;
  else if (variant == "single-term") p.variant = ModelVariant::single_term;
  else throw ConfigError("model.variant: expected two-term or single-term, got '" + variant + "'");
  const std::string mode = doc.text("model.maxwellian", "conservative");
  if (mode == "conservative") sim.options.maxwellian = MaxwellianMode::conservative;
  else if (mode == "sampled") sim.options.maxwellian = MaxwellianMode::sampled;
  else throw ConfigError("model.maxwellian: expected conservative or sampled, got '" + mode + "'");
  const std::string balance = doc.text("model.balance_exchange", "true");
  if (balance != "true" && balance != "false") throw ConfigError("model.balance_exchange: expected true or false");
  sim.options.balance_exchange = balance == "true";
  const std::string sign = doc.text("model.exchange_sign", "published");
  if (sign == "published") p.aap_sign = ExchangeSign::as_published;
  else if (sign == "physical") p.aap_sign = ExchangeSign::physical;
  else throw ConfigError("model.exchange_sign: expected published or physical, got '" + sign + "'");

  // [grid]
  sim.grid.velocity_dim = doc.integer("grid.dim", 3);
  sim.grid.v_max = doc.number("grid.v_max", 8.0);
  sim.grid.nodes_per_axis = doc.integer("grid.nodes", 32);
  sim.grid.n_cells = doc.integer("grid.cells", 1);
  sim.grid.domain_length = doc.number("grid.domain_length", 1.0);
  build_grid(sim.grid);  // validates
  const int d = sim.grid.velocity_dim;

  // [initial]
  if (const std::string* s1 = doc.get("initial.species1")) {
    sim.initial1.components = parse_components("initial.species1", *s1);
    cfg.has_initial = true;
  }
  if (const std::string* s2 = doc.get("initial.species2")) {
    sim.initial2.components = parse_components("initial.species2", *s2);
    if (!cfg.has_initial) throw ConfigError("initial.species1: missing (initial.species2 given)");
  } else if (cfg.has_initial) {
    throw ConfigError("initial.species2: missing (initial.species1 given)");
  }
  sim.initial1.amplitude = doc.number("initial.amplitude1", 0.0);
  sim.initial2.amplitude = doc.number("initial.amplitude2", 0.0);
  const int k = doc.integer("initial.wavenumber", 1);
  sim.initial1.wavenumber = sim.initial2.wavenumber = k;
  for (double a : {sim.initial1.amplitude, sim.initial2.amplitude})
    if (!(a >= 0.0 && a < 1.0)) throw ConfigError("initial.amplitude: must lie in [0, 1) to keep densities positive");

  // [params]
  p.m1 = doc.number("params.m1", 1.0);
  p.m2 = doc.number("params.m2", 1.0);
  p.epsilon = doc.number("params.epsilon", 1.0);
  p.nu11 = doc.number("params.nu11", 1.0);
  p.nu21 = doc.number("params.nu21", 1.0);
  p.nu22 = doc.number("params.nu22", 1.0);
  p.nu12 = doc.number("params.nu12", p.epsilon * p.nu21);
  p.alpha = doc.number("params.alpha", 1.0);
  if (doc.has("params.delta") && doc.has("params.lambda_u"))
    throw ConfigError("params.delta and params.lambda_u are mutually exclusive");
  if (doc.has("params.gamma") && doc.has("params.c"))
    throw ConfigError("params.gamma and params.c are mutually exclusive");
  if (doc.has("params.lambda_u")) {
    if (!cfg.has_initial) throw ConfigError("params.lambda_u: needs [initial] densities to determine delta");
    cfg.delta_from_lambda = true;
    cfg.lambda_u = doc.number("params.lambda_u", 0.0);
    if (cfg.lambda_u < 0.0) throw ConfigError("params.lambda_u must be nonnegative");
    p.delta = bridge_parameters(p, cfg.lambda_u, initial_mean_density(sim.initial1),
                                initial_mean_density(sim.initial2), d)
                  .delta;
  } else {
    p.delta = doc.number("params.delta", 1.0);
  }
  if (doc.has("params.c")) {
    cfg.gamma_from_c = true;
    cfg.c = doc.number("params.c", 0.0);
    const double r = p.mass_ratio() * p.epsilon;
    const Interval range{-0.5 * p.delta, 0.5 - 0.5 * r * (1.0 - p.delta)};
    if (!range.contains(cfg.c, 1e-14)) {
      char buf[200];
      std::snprintf(buf, sizeof buf,
                    "params.c = %.17g outside [%.17g, %.17g], the range keeping gamma within its positivity bounds",
                    cfg.c, range.lower, range.upper);
      throw AdmissibilityError(buf);
    }
    p.gamma = p.m1 / d * (1.0 - p.delta) * (p.delta + 2.0 * cfg.c);
  } else {
    p.gamma = doc.number("params.gamma", 0.0);
  }
  p.chi12 = doc.number("params.chi12", 0.0);
  p.chi21 = doc.number("params.chi21", 0.0);
  p.nu11_aap = doc.number("params.nu11_aap", p.nu11);
  p.nu12_aap = doc.number("params.nu12_aap", p.nu12);
  p.nu21_aap = doc.number("params.nu21_aap", p.nu21);
  p.nu22_aap = doc.number("params.nu22_aap", p.nu22);
  {
    const ValidityReport rep = validate_params(p, d);
    if (!rep.ok()) throw AdmissibilityError("params: " + rep.first_failure());
  }

  // [time]
  sim.dt = doc.number("time.dt", 0.01);
  sim.t_end = doc.number("time.t_end", 1.0);
  sim.cadence = doc.integer("time.cadence", 1);
  if (!(sim.dt > 0.0)) throw ConfigError("time.dt must be positive");
  if (sim.t_end < 0.0) throw ConfigError("time.t_end must be nonnegative");
  if (sim.cadence < 1) throw ConfigError("time.cadence must be at least 1");
  sim.envelope_q = doc.number("time.envelope_q", -1.0);

  // [suite]
  {
    const double seed = doc.number("suite.seed", static_cast<double>(cfg.suite.seed));
    if (seed < 0.0 || seed != std::floor(seed) || seed > 9.007199254740992e15)
      throw ConfigError("suite.seed must be a nonnegative integer below 2^53");
    cfg.suite.seed = static_cast<std::uint64_t>(seed);
  }
  cfg.suite.samples = doc.integer("suite.samples", cfg.suite.samples);
  cfg.suite.v_max = doc.number("suite.v_max", cfg.suite.v_max);
  cfg.suite.nodes_1d = doc.integer("suite.nodes_1d", cfg.suite.nodes_1d);
  cfg.suite.nodes_2d = doc.integer("suite.nodes_2d", cfg.suite.nodes_2d);
  cfg.suite.nodes_3d = doc.integer("suite.nodes_3d", cfg.suite.nodes_3d);
  cfg.suite.max_components = doc.integer("suite.max_components", cfg.suite.max_components);
  cfg.suite.threads = doc.integer("suite.threads", cfg.suite.threads);
  if (cfg.suite.samples < 0) throw ConfigError("suite.samples must be nonnegative");
  if (cfg.suite.max_components < 1) throw ConfigError("suite.max_components must be at least 1");
  if (!(cfg.suite.v_max > 0.0)) throw ConfigError("suite.v_max must be positive");

  // [compare]
  if (const std::string* v = doc.get("compare.dts")) cfg.compare_dts = parse_list("compare.dts", *v);
  cfg.ode_dt = doc.number("compare.ode_dt", cfg.ode_dt);
  for (double x : cfg.compare_dts)
    if (!(x > 0.0)) throw ConfigError("compare.dts entries must be positive");
  if (!(cfg.ode_dt > 0.0)) throw ConfigError("compare.ode_dt must be positive");

  // [output]
  cfg.diagnostics_file = doc.text("output.diagnostics", cfg.diagnostics_file);
  cfg.estimates_file = doc.text("output.estimates", cfg.estimates_file);
  cfg.envelopes_file = doc.text("output.envelopes", cfg.envelopes_file);
  cfg.macro_file = doc.text("output.macroscopic", cfg.macro_file);

  doc.reject_unused();
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read config file " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::string echo_config(const RunConfig& cfg) {
  const SimulationSettings& sim = cfg.sim;
  const MixtureParameters& p = sim.params;
  std::ostringstream o;
  o << "[model]\n"
    << "variant = " << (p.variant == ModelVariant::two_term ? "two-term" : "single-term") << "\n"
    << "maxwellian = " << (sim.options.maxwellian == MaxwellianMode::conservative ? "conservative" : "sampled") << "\n"
    << "balance_exchange = " << (sim.options.balance_exchange ? "true" : "false") << "\n"
    << "exchange_sign = " << (p.aap_sign == ExchangeSign::physical ? "physical" : "published") << "\n\n";
  o << "[grid]\n"
    << "dim = " << sim.grid.velocity_dim << "\n"
    << "v_max = " << fmt(sim.grid.v_max) << "\n"
    << "nodes = " << sim.grid.nodes_per_axis << "\n"
    << "cells = " << sim.grid.n_cells << "\n"
    << "domain_length = " << fmt(sim.grid.domain_length) << "\n\n";
  o << "[params]\n"
    << "m1 = " << fmt(p.m1) << "\nm2 = " << fmt(p.m2) << "\nepsilon = " << fmt(p.epsilon) << "\n"
    << "nu11 = " << fmt(p.nu11) << "\nnu12 = " << fmt(p.nu12) << "\nnu21 = " << fmt(p.nu21)
    << "\nnu22 = " << fmt(p.nu22) << "\n"
    << "alpha = " << fmt(p.alpha) << "\n";
  if (cfg.delta_from_lambda) o << "lambda_u = " << fmt(cfg.lambda_u) << "  # delta = " << fmt(p.delta) << "\n";
  else o << "delta = " << fmt(p.delta) << "\n";
  if (cfg.gamma_from_c) o << "c = " << fmt(cfg.c) << "  # gamma = " << fmt(p.gamma) << "\n";
  else o << "gamma = " << fmt(p.gamma) << "\n";
  o << "chi12 = " << fmt(p.chi12) << "\nchi21 = " << fmt(p.chi21) << "\n"
    << "nu11_aap = " << fmt(p.nu11_aap) << "\nnu12_aap = " << fmt(p.nu12_aap) << "\nnu21_aap = " << fmt(p.nu21_aap)
    << "\nnu22_aap = " << fmt(p.nu22_aap) << "\n\n";
  if (cfg.has_initial) {
    o << "[initial]\n"
      << "species1 = " << fmt_components(sim.initial1) << "\n"
      << "species2 = " << fmt_components(sim.initial2) << "\n"
      << "amplitude1 = " << fmt(sim.initial1.amplitude) << "\n"
      << "amplitude2 = " << fmt(sim.initial2.amplitude) << "\n"
      << "wavenumber = " << sim.initial1.wavenumber << "\n\n";
  }
  o << "[time]\n"
    << "dt = " << fmt(sim.dt) << "\nt_end = " << fmt(sim.t_end) << "\ncadence = " << sim.cadence << "\n"
    << "envelope_q = " << fmt(sim.envelope_q) << "\n\n";
  o << "[suite]\n"
    << "seed = " << cfg.suite.seed << "\nsamples = " << cfg.suite.samples << "\nv_max = " << fmt(cfg.suite.v_max)
    << "\nnodes_1d = " << cfg.suite.nodes_1d << "\nnodes_2d = " << cfg.suite.nodes_2d
    << "\nnodes_3d = " << cfg.suite.nodes_3d << "\nmax_components = " << cfg.suite.max_components
    << "\nthreads = " << cfg.suite.threads << "\n\n";
  o << "[compare]\ndts = ";
  for (std::size_t i = 0; i < cfg.compare_dts.size(); ++i) o << (i ? "," : "") << fmt(cfg.compare_dts[i]);
  o << "\node_dt = " << fmt(cfg.ode_dt) << "\n\n";
  o << "[output]\n"
    << "diagnostics = " << cfg.diagnostics_file << "\nestimates = " << cfg.estimates_file
    << "\nenvelopes = " << cfg.envelopes_file << "\nmacroscopic = " << cfg.macro_file << "\n";
  return o.str();
}

} // namespace bgkmix

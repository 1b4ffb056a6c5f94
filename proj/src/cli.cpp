#include "qei/cli.hpp"

#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>
#include <variant>

#include "CLI11.hpp"
#include "json.hpp"
#include "qei/minsol.hpp"

namespace qei {
namespace {

const std::set<std::string> kChannels = {"q", "q1_s", "q2_s", "q1_as",
                                         "q2_as"};
// Command-level parameters never forwarded to the model builders.
const std::set<std::string> kReservedParams = {"j_max"};

std::string json_escape(const std::string& s) {
  std::string out;
  out.reserve(s.size() + 8);
  for (char c : s) {
    switch (c) {
      case '"':
        out += "\\\"";
        break;
      case '\\':
        out += "\\\\";
        break;
      case '\n':
        out += "\\n";
        break;
      case '\t':
        out += "\\t";
        break;
      default:
        if (static_cast<unsigned char>(c) < 0x20) {
          char buf[8];
          std::snprintf(buf, sizeof(buf), "\\u%04x", c);
          out += buf;
        } else {
          out += c;
        }
    }
  }
  return out;
}

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> parts;
  std::string cur;
  for (char c : text) {
    if (c == sep) {
      parts.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  parts.push_back(cur);
  return parts;
}

double parse_number(const std::string& text, const std::string& path) {
  try {
    std::size_t pos = 0;
    const double v = std::stod(text, &pos);
    if (pos != text.size()) throw std::invalid_argument("trailing characters");
    return v;
  } catch (const std::exception&) {
    throw CliError(3, path + ": not a number: '" + text + "'");
  }
}

int parse_integer(const std::string& text, const std::string& path) {
  try {
    std::size_t pos = 0;
    const int v = std::stoi(text, &pos);
    if (pos != text.size()) throw std::invalid_argument("trailing characters");
    return v;
  } catch (const std::exception&) {
    throw CliError(3, path + ": not an integer: '" + text + "'");
  }
}

// "re" or "re,im"
Complex parse_complex(const std::string& text, const std::string& path) {
  const auto parts = split(text, ',');
  if (parts.size() == 1) return Complex(parse_number(parts[0], path), 0.0);
  if (parts.size() == 2)
    return Complex(parse_number(parts[0], path),
                   parse_number(parts[1], path));
  throw CliError(3, path + ": expected 're' or 're,im', got '" + text + "'");
}

std::vector<double> parse_coeff_list(const std::string& text,
                                     const std::string& path) {
  const auto parts = split(text, ',');
  std::vector<double> out;
  for (const auto& part : parts) {
    if (part.empty())
      throw CliError(3, path + ": empty coefficient in '" + text + "'");
    out.push_back(parse_number(part, path));
  }
  return out;
}

// "c0,c1,..." or "c0,c1/d0,d1" for a rational prefactor
RationalPrefactor parse_prefactor(const std::string& text,
                                  const std::string& path) {
  const auto sides = split(text, '/');
  if (sides.size() > 2)
    throw CliError(3, path + ": at most one '/' allowed in '" + text + "'");
  RationalPrefactor q;
  q.numerator = parse_coeff_list(sides[0], path);
  if (sides.size() == 2) q.denominator = parse_coeff_list(sides[1], path);
  return q;
}

GridSpec parse_grid(const std::string& text) {
  const auto parts = split(text, ':');
  if (parts.size() != 3)
    throw CliError(3, "grid: expected lo:hi:n, got '" + text + "'");
  GridSpec g;
  g.lo = parse_number(parts[0], "grid.lo");
  g.hi = parse_number(parts[1], "grid.hi");
  g.n = parse_integer(parts[2], "grid.n");
  return g;
}

// Typed access to the k=v parameter map with unknown-key detection.
class ParamReader {
 public:
  explicit ParamReader(const std::map<std::string, std::string>& params)
      : p_(params) {
    for (const auto& k : kReservedParams) used_.insert(k);
  }

  bool has(const std::string& k) const { return p_.count(k) != 0; }

  double number(const std::string& k, double dflt) {
    used_.insert(k);
    auto it = p_.find(k);
    return it == p_.end() ? dflt : parse_number(it->second, "params." + k);
  }

  int integer(const std::string& k, int dflt) {
    used_.insert(k);
    auto it = p_.find(k);
    return it == p_.end() ? dflt : parse_integer(it->second, "params." + k);
  }

  Complex complex_value(const std::string& k) {
    used_.insert(k);
    return parse_complex(p_.at(k), "params." + k);
  }

  // Consecutive keys b1, b2, ... from 1.
  std::vector<Complex> b_list() {
    std::vector<Complex> out;
    for (int i = 1;; ++i) {
      const std::string key = "b" + std::to_string(i);
      if (!has(key)) break;
      out.push_back(complex_value(key));
    }
    return out;
  }

  void finish(const std::string& model) const {
    for (const auto& [k, v] : p_)
      if (used_.count(k) == 0)
        throw CliError(3, "params." + k + ": not recognized for model '" +
                              model + "'");
  }

 private:
  const std::map<std::string, std::string>& p_;
  std::set<std::string> used_;
};

SFunctionSpec model_from_config(const RunConfig& cfg) {
  ParamReader pr(cfg.params);
  SFunctionSpec spec;
  if (cfg.model == "free") {
    spec = make_free_model(pr.integer("epsilon", 1), pr.number("mass", 1.0));
  } else if (cfg.model == "ising") {
    spec = make_ising_model(pr.number("mass", 1.0));
  } else if (cfg.model == "sinh-gordon") {
    if (!pr.has("b")) throw CliError(3, "params.b: required for sinh-gordon");
    spec =
        make_sinh_gordon_model(pr.complex_value("b"), pr.number("mass", 1.0));
  } else if (cfg.model == "scalar-product") {
    spec = make_scalar_product_model(pr.integer("epsilon", 1), pr.b_list(),
                                     pr.number("mass", 1.0));
  } else if (cfg.model == "gbd") {
    const auto b = pr.b_list();
    if (b.empty())
      throw CliError(3, "params.b1: at least one factor parameter required");
    spec = make_gbd_model(b, pr.number("mass", 1.0));
  } else if (cfg.model == "federbush") {
    spec = make_federbush_model(pr.number("m1", 1.0), pr.number("m2", 1.0),
                                pr.number("lambda", 0.2));
  } else if (cfg.model == "nls") {
    spec = make_nls_model(pr.integer("n", 3), pr.number("mass", 1.0));
  } else if (cfg.model == "constant") {
    spec = SFunctionSpec{
        random_constant_diagonal(pr.integer("dim", 2), cfg.seed)};
  } else {
    throw CliError(3, "model: unknown preset '" + cfg.model + "'");
  }
  pr.finish(cfg.model);
  spec.validate();
  return spec;
}

std::string params_json(const std::map<std::string, std::string>& params) {
  std::ostringstream os;
  os << "{";
  bool first = true;
  for (const auto& [k, v] : params) {
    if (!first) os << ",";
    first = false;
    os << "\"" << json_escape(k) << "\":\"" << json_escape(v) << "\"";
  }
  os << "}";
  return os.str();
}

std::string coeffs_json(const std::vector<double>& v) {
  std::ostringstream os;
  os << "[";
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) os << ",";
    os << format_number(v[i]);
  }
  os << "]";
  return os.str();
}

std::string q_json(const StressTensorSpec& spec) {
  const bool federbush =
      std::get_if<FederbushParams>(&spec.model.model) != nullptr;
  const std::vector<std::string> keys =
      federbush ? std::vector<std::string>{"q1_s", "q2_s", "q1_as", "q2_as"}
                : std::vector<std::string>{"q"};
  std::ostringstream os;
  os << "{";
  for (std::size_t i = 0; i < keys.size(); ++i) {
    if (i) os << ",";
    const RationalPrefactor q = spec.channel(keys[i]);
    os << "\"" << keys[i] << "\":{\"num\":" << coeffs_json(q.numerator)
       << ",\"den\":" << coeffs_json(q.denominator) << "}";
  }
  os << "}";
  return os.str();
}

// Leading fields shared by every structured output.
std::string result_head(const RunConfig& cfg, const std::string& label) {
  std::ostringstream os;
  os << "{\"command\":\"" << cfg.command << "\",\"seed\":" << cfg.seed
     << ",\"model\":\"" << json_escape(label) << "\",\"preset\":\""
     << json_escape(cfg.model) << "\",\"params\":" << params_json(cfg.params);
  return os.str();
}

CliResult cmd_charfct(const RunConfig& cfg) {
  const SFunctionSpec model = model_from_config(cfg);
  MinimalSolution msol;
  try {
    msol = assemble_minimal(model);
  } catch (const std::invalid_argument& e) {
    throw CliError(3, std::string("model: ") + e.what());
  }
  std::ostringstream header;
  header << "{\"f0\":" << format_number(msol.f.f0)
         << ",\"f1\":" << format_number(msol.f.f1)
         << ",\"decay_rate\":" << format_number(msol.f.decay_rate)
         << ",\"source\":\"" << json_escape(msol.source)
         << "\",\"sinh_zero_power\":" << msol.sinh_zero_power << "}";
  std::vector<std::pair<double, double>> rows;
  for (int i = 0; i < cfg.grid.n; ++i) {
    const double t =
        cfg.grid.lo + (cfg.grid.hi - cfg.grid.lo) * i / (cfg.grid.n - 1.0);
    rows.emplace_back(t, msol.f(t));
  }
  std::ostringstream os;
  if (cfg.format == "json") {
    os << result_head(cfg, model.name()) << ",\"header\":" << header.str()
       << ",\"samples\":[";
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (i) os << ",";
      os << "[" << format_number(rows[i].first) << ","
         << format_number(rows[i].second) << "]";
    }
    os << "]}\n";
  } else {
    os << "# " << result_head(cfg, model.name())
       << ",\"header\":" << header.str() << "}\n";
    os << "t,f\n";
    for (const auto& [t, f] : rows)
      os << format_number(t) << "," << format_number(f) << "\n";
  }
  return {0, os.str()};
}

CliResult cmd_verdict(const RunConfig& cfg) {
  const StressTensorSpec spec = spec_from_config(cfg);
  const QeiVerdict v = decide_qei(spec);
  std::ostringstream os;
  os << result_head(cfg, spec.model.name()) << ",\"q\":" << q_json(spec)
     << ",\"status\":\"" << to_string(v.status) << "\",\"exponent\":"
     << format_number(v.growth_exponent)
     << ",\"threshold\":" << format_number(v.threshold_exponent)
     << ",\"log_power\":" << format_number(v.log_power) << ",\"c\":"
     << (v.marginal_constant_c ? format_number(*v.marginal_constant_c)
                               : std::string("null"))
     << ",\"parity_projected\":" << (v.parity_projected ? "true" : "false")
     << ",\"clause\":\"" << json_escape(v.clause) << "\",\"rationale\":\""
     << json_escape(v.rationale) << "\"";
  if (v.witness_direction.size() > 0) {
    os << ",\"witness_direction\":[";
    for (int i = 0; i < v.witness_direction.size(); ++i) {
      if (i) os << ",";
      os << "[" << format_number(v.witness_direction(i).real()) << ","
         << format_number(v.witness_direction(i).imag()) << "]";
    }
    os << "]";
  }
  os << "}\n";
  int code = 0;
  if (v.status == QeiStatus::Fails) code = 1;
  if (v.status == QeiStatus::Marginal) code = 2;
  return {code, os.str()};
}

CliResult cmd_bound(const RunConfig& cfg) {
  const StressTensorSpec spec = spec_from_config(cfg);
  std::ostringstream os;
  if (cfg.format == "csv") {
    // curve of the bound constant against the smearing width
    os << "# " << result_head(cfg, spec.model.name())
       << ",\"q\":" << q_json(spec)
       << ",\"amplitude\":" << format_number(cfg.amplitude) << "}\n";
    os << "tau,bound_constant\n";
    for (int i = 0; i < cfg.grid.n; ++i) {
      const double tau =
          cfg.grid.lo + (cfg.grid.hi - cfg.grid.lo) * i / (cfg.grid.n - 1.0);
      const QeiBound b =
          constant_s_bound(spec, GaussianTestFunction{tau, cfg.amplitude});
      os << format_number(tau) << "," << format_number(b.constant) << "\n";
    }
    return {0, os.str()};
  }
  const QeiBound b = constant_s_bound(
      spec, GaussianTestFunction{cfg.tau, cfg.amplitude});
  os << result_head(cfg, spec.model.name()) << ",\"q\":" << q_json(spec)
     << ",\"tau\":" << format_number(cfg.tau)
     << ",\"amplitude\":" << format_number(cfg.amplitude)
     << ",\"bound_constant\":" << format_number(b.constant)
     << ",\"projector_weights\":["
     << format_number(b.projector_weights.first) << ","
     << format_number(b.projector_weights.second) << "],\"per_mass_terms\":[";
  bool first = true;
  for (const auto& [mass, terms] : b.per_mass_terms) {
    if (!first) os << ",";
    first = false;
    os << "{\"mass\":" << format_number(mass)
       << ",\"w_plus\":" << format_number(terms.first)
       << ",\"w_minus\":" << format_number(terms.second) << "}";
  }
  os << "]}\n";
  return {0, os.str()};
}

CliResult cmd_witness(const RunConfig& cfg) {
  const StressTensorSpec spec = spec_from_config(cfg);
  int j_max = 5;
  if (auto it = cfg.params.find("j_max"); it != cfg.params.end()) {
    j_max = parse_integer(it->second, "params.j_max");
    if (j_max < 0) throw CliError(3, "params.j_max: must be >= 0");
  }
  const GaussianTestFunction g{cfg.tau, cfg.amplitude};
  const std::vector<WitnessPoint> pts =
      build_witness_sequence(spec, g, j_max);
  std::ostringstream os;
  if (cfg.format == "json") {
    os << result_head(cfg, spec.model.name()) << ",\"q\":" << q_json(spec)
       << ",\"tau\":" << format_number(cfg.tau) << ",\"witness\":[";
    for (std::size_t i = 0; i < pts.size(); ++i) {
      if (i) os << ",";
      os << "[" << pts[i].j << "," << format_number(pts[i].expectation) << "]";
    }
    os << "]}\n";
    return {0, os.str()};
  }
  if (pts.empty()) return {0, ""};
  os << "# " << result_head(cfg, spec.model.name()) << ",\"q\":" << q_json(spec)
     << ",\"tau\":" << format_number(cfg.tau) << "}\n";
  os << "j,expectation\n";
  for (const auto& pt : pts)
    os << pt.j << "," << format_number(pt.expectation) << "\n";
  return {0, os.str()};
}

}  // namespace

std::string format_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.15g", v);
  return buf;
}

void RunConfig::validate() const {
  if (command != "charfct" && command != "verdict" && command != "bound" &&
      command != "witness")
    throw CliError(3, "command: must be charfct, verdict, bound, or witness");
  if (format != "json" && format != "csv")
    throw CliError(3, "format: must be json or csv");
  if (!(tau > 0.0)) throw CliError(3, "tau: must be positive");
  if (!(amplitude > 0.0)) throw CliError(3, "amplitude: must be positive");
  if (grid.n < 2) throw CliError(3, "grid.n: need at least 2 samples");
  if (!(grid.lo > 0.0) || !(grid.hi > grid.lo))
    throw CliError(3, "grid: need 0 < lo < hi");
  for (const auto& [k, v] : q)
    if (kChannels.count(k) == 0)
      throw CliError(3, "q." + k + ": unknown channel");
  if (command == "verdict" && format == "csv")
    throw CliError(3, "format: verdict emits json only");
}

std::string serialize_config(const RunConfig& cfg) {
  std::ostringstream os;
  os << "{\"command\":\"" << json_escape(cfg.command) << "\",\"model\":\""
     << json_escape(cfg.model) << "\",\"params\":" << params_json(cfg.params)
     << ",\"q\":" << params_json(cfg.q)
     << ",\"tau\":" << format_number(cfg.tau)
     << ",\"amplitude\":" << format_number(cfg.amplitude)
     << ",\"seed\":" << cfg.seed << ",\"grid\":{\"lo\":"
     << format_number(cfg.grid.lo) << ",\"hi\":" << format_number(cfg.grid.hi)
     << ",\"n\":" << cfg.grid.n << "},\"format\":\""
     << json_escape(cfg.format) << "\",\"out\":\"" << json_escape(cfg.out)
     << "\"}\n";
  return os.str();
}

RunConfig parse_config_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const std::exception& e) {
    throw CliError(3, std::string("config: ") + e.what());
  }
  if (!j.is_object()) throw CliError(3, "config: top level must be an object");
  RunConfig cfg;
  auto str_map = [](const nlohmann::json& obj, const std::string& path) {
    std::map<std::string, std::string> out;
    if (!obj.is_object()) throw CliError(3, path + ": must be an object");
    for (const auto& [k, v] : obj.items()) {
      if (!v.is_string())
        throw CliError(3, path + "." + k + ": must be a string");
      out[k] = v.get<std::string>();
    }
    return out;
  };
  for (const auto& [key, val] : j.items()) {
    try {
      if (key == "command")
        cfg.command = val.get<std::string>();
      else if (key == "model")
        cfg.model = val.get<std::string>();
      else if (key == "params")
        cfg.params = str_map(val, "config.params");
      else if (key == "q")
        cfg.q = str_map(val, "config.q");
      else if (key == "tau")
        cfg.tau = val.get<double>();
      else if (key == "amplitude")
        cfg.amplitude = val.get<double>();
      else if (key == "seed")
        cfg.seed = val.get<unsigned>();
      else if (key == "grid") {
        if (!val.is_object())
          throw CliError(3, "config.grid: must be an object");
        for (const auto& [gk, gv] : val.items()) {
          if (gk == "lo")
            cfg.grid.lo = gv.get<double>();
          else if (gk == "hi")
            cfg.grid.hi = gv.get<double>();
          else if (gk == "n")
            cfg.grid.n = gv.get<int>();
          else
            throw CliError(3, "config.grid: unknown key '" + gk + "'");
        }
      } else if (key == "format")
        cfg.format = val.get<std::string>();
      else if (key == "out")
        cfg.out = val.get<std::string>();
      else
        throw CliError(3, "config: unknown key '" + key + "'");
    } catch (const CliError&) {
      throw;
    } catch (const std::exception&) {
      throw CliError(3, "config." + key + ": wrong type");
    }
  }
  cfg.validate();
  return cfg;
}

StressTensorSpec spec_from_config(const RunConfig& cfg) {
  const SFunctionSpec model = model_from_config(cfg);
  StressTensorSpec spec = canonical_stress_tensor(model);
  const bool federbush = cfg.model == "federbush";
  for (const auto& [channel, text] : cfg.q) {
    if ((channel != "q") != federbush)
      throw CliError(3, "q." + channel + ": not a channel of model '" +
                            cfg.model + "'");
    spec.q_factors[channel] = parse_prefactor(text, "q." + channel);
  }
  if (federbush && (!spec.channel("q1_as").is_identically_zero() ||
                    !spec.channel("q2_as").is_identically_zero()))
    spec.parity_covariant = false;
  return spec;
}

std::optional<RunConfig> parse_cli(const std::vector<std::string>& args,
                                   std::string* help_text) {
  RunConfig cfg;
  // the config file provides defaults; explicit flags override below
  std::string config_path;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size())
      config_path = args[i + 1];
    else if (args[i].rfind("--config=", 0) == 0)
      config_path = args[i].substr(9);
  }
  if (!config_path.empty()) {
    std::ifstream in(config_path);
    if (!in) throw CliError(3, "config: cannot read '" + config_path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    cfg = parse_config_json(ss.str());
  }

  CLI::App app{"energy inequality verdicts, bounds, and witness curves for "
               "integrable models"};
  app.name("qei");
  app.require_subcommand(0, 1);
  std::string config_dummy;
  app.add_option("--config", config_dummy,
                 "JSON run configuration; explicit flags override it");
  app.add_option("--model", cfg.model,
                 "preset: free, ising, sinh-gordon, scalar-product, gbd, "
                 "federbush, nls, constant");
  std::vector<std::string> param_args;
  app.add_option("--param", param_args, "model parameter k=v (repeatable)");
  std::vector<std::string> q_args;
  app.add_option("--q", q_args,
                 "prefactor coefficients c0,c1,... (append /d0,d1,... for a "
                 "denominator; prefix channel= for the two-species model)");
  app.add_option("--tau", cfg.tau, "smearing width of the Gaussian");
  app.add_option("--amplitude", cfg.amplitude, "amplitude of the Gaussian");
  app.add_option("--seed", cfg.seed,
                 "seed recorded in output; drives the 'constant' preset");
  std::string grid_text;
  app.add_option("--grid", grid_text, "sampling grid lo:hi:n");
  app.add_option("--format", cfg.format, "json | csv");
  app.add_option("--out", cfg.out, "output file (default stdout)");
  app.add_subcommand("charfct",
                     "characteristic function samples with growth header");
  app.add_subcommand("verdict", "decide the energy inequality");
  app.add_subcommand("bound", "explicit lower-bound constant (constant S)");
  app.add_subcommand("witness", "diverging witness expectations when Fails");
  for (auto* sub : app.get_subcommands({})) sub->fallthrough();

  std::vector<const char*> argv;
  argv.push_back("qei");
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp& e) {
    if (help_text) *help_text = app.help();
    return std::nullopt;
  } catch (const CLI::ParseError& e) {
    throw CliError(3, std::string("usage: ") + e.what());
  }
  for (const auto* sub : app.get_subcommands()) cfg.command = sub->get_name();
  if (!grid_text.empty()) cfg.grid = parse_grid(grid_text);
  for (const std::string& kv : param_args) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos || eq == 0)
      throw CliError(3, "param: expected k=v, got '" + kv + "'");
    cfg.params[kv.substr(0, eq)] = kv.substr(eq + 1);
  }
  for (const std::string& entry : q_args) {
    std::string channel = "q";
    std::string payload = entry;
    // a '=' always separates a channel name from the coefficients
    const auto eq = entry.find('=');
    if (eq != std::string::npos) {
      channel = entry.substr(0, eq);
      payload = entry.substr(eq + 1);
    }
    cfg.q[channel] = payload;
  }
  cfg.validate();
  return cfg;
}

CliResult run_command(const RunConfig& cfg) {
  cfg.validate();
  if (cfg.command == "charfct") return cmd_charfct(cfg);
  if (cfg.command == "verdict") return cmd_verdict(cfg);
  if (cfg.command == "bound") return cmd_bound(cfg);
  return cmd_witness(cfg);
}

int cli_main(int argc, char** argv) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  try {
    std::string help;
    const auto cfg = parse_cli(args, &help);
    if (!cfg) {
      std::fputs(help.c_str(), stdout);
      return 0;
    }
    const CliResult res = run_command(*cfg);
    if (cfg->out.empty()) {
      std::fwrite(res.output.data(), 1, res.output.size(), stdout);
    } else {
      std::ofstream f(cfg->out, std::ios::binary);
      if (!f) throw CliError(5, "out: cannot write '" + cfg->out + "'");
      f << res.output;
    }
    return res.exit_code;
  } catch (const CliError& e) {
    std::fprintf(stderr, "qei: %s\n", e.what());
    return e.code;
  } catch (const HypothesisError& e) {
    std::fprintf(stderr, "qei: hypothesis not satisfied: %s\n", e.what());
    return 4;
  } catch (const VerdictPreconditionError& e) {
    std::fprintf(stderr, "qei: precondition not satisfied: %s\n", e.what());
    return 4;
  } catch (const NormalizationError& e) {
    std::fprintf(stderr, "qei: precondition not satisfied: %s\n", e.what());
    return 4;
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "qei: invalid input: %s\n", e.what());
    return 3;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "qei: internal failure: %s\n", e.what());
    return 5;
  }
}

}  // namespace qei

#include "config.hpp"

#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <numbers>
#include <sstream>

#include "zakharov/errors.hpp"

namespace zlab {

using zakharov::InvalidArgument;
using zakharov::Rational;

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::string format_real(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

double parse_plain_real(const std::string& text) {
  if (text == "pi") return std::numbers::pi;
  const char* begin = text.c_str();
  char* end = nullptr;
  errno = 0;
  const double v = std::strtod(begin, &end);
  if (end == begin || *end != '\0' || errno == ERANGE || !std::isfinite(v))
    throw InvalidArgument("'" + text + "' is not a finite real number");
  return v;
}

long long parse_integer(const std::string& text) {
  const char* begin = text.c_str();
  char* end = nullptr;
  errno = 0;
  const long long v = std::strtoll(begin, &end, 10);
  if (end == begin || *end != '\0' || errno == ERANGE)
    throw InvalidArgument("'" + text + "' is not an integer");
  return v;
}

int parse_int(const std::string& text) {
  const long long v = parse_integer(text);
  if (v < -(1LL << 30) || v > (1LL << 30)) throw InvalidArgument("'" + text + "' is out of range");
  return static_cast<int>(v);
}

std::uint64_t parse_u64(const std::string& text) {
  const char* begin = text.c_str();
  char* end = nullptr;
  errno = 0;
  if (!text.empty() && text[0] == '-') throw InvalidArgument("'" + text + "' must be non-negative");
  const unsigned long long v = std::strtoull(begin, &end, 10);
  if (end == begin || *end != '\0' || errno == ERANGE)
    throw InvalidArgument("'" + text + "' is not an unsigned integer");
  return v;
}

void require_one_of(const std::string& key, const std::string& value,
                    std::initializer_list<const char*> options) {
  std::string list;
  for (const char* o : options) {
    if (value == o) return;
    list += list.empty() ? o : std::string(" | ") + o;
  }
  throw InvalidArgument(key + " must be one of " + list + " (got '" + value + "')");
}

struct Key {
  std::function<void(RunConfig&, const std::string&)> set;
  std::function<std::optional<std::string>(const RunConfig&)> get;
};

template <class T>
Key int_key(T RunConfig::*field) {
  return {[field](RunConfig& c, const std::string& v) { c.*field = parse_int(v); },
          [field](const RunConfig& c) { return std::optional(std::to_string(c.*field)); }};
}

Key real_key(double RunConfig::*field) {
  return {[field](RunConfig& c, const std::string& v) { c.*field = parse_real_expression(v); },
          [field](const RunConfig& c) { return std::optional(format_real(c.*field)); }};
}

Key rational_key(Rational RunConfig::*field) {
  return {[field](RunConfig& c, const std::string& v) { c.*field = Rational::parse(v); },
          [field](const RunConfig& c) { return std::optional((c.*field).str()); }};
}

Key string_key(std::string RunConfig::*field, std::initializer_list<const char*> options) {
  std::vector<const char*> opts(options);
  return {[field, opts](RunConfig& c, const std::string& v) {
            if (!opts.empty()) {
              bool ok = false;
              for (const char* o : opts) ok = ok || v == o;
              if (!ok) {
                std::string list;
                for (const char* o : opts) list += list.empty() ? o : std::string(" | ") + o;
                throw InvalidArgument("must be one of " + list + " (got '" + v + "')");
              }
            }
            c.*field = v;
          },
          [field](const RunConfig& c) { return std::optional(c.*field); }};
}

const std::map<std::string, Key>& keys() {
  static const std::map<std::string, Key> table = [] {
    std::map<std::string, Key> k;
    k["dimension"] = int_key(&RunConfig::dimension);
    k["grid_size"] = int_key(&RunConfig::grid_size);
    k["box_length"] = real_key(&RunConfig::box_length);
    k["alpha"] = real_key(&RunConfig::alpha);
    k["K"] = int_key(&RunConfig::K);
    k["beta"] = {[](RunConfig& c, const std::string& v) { c.beta = parse_real_expression(v); },
                 [](const RunConfig& c) -> std::optional<std::string> {
                   if (!c.beta) return std::nullopt;
                   return format_real(*c.beta);
                 }};
    k["nonlinearity"] = {
        [](RunConfig& c, const std::string& v) { c.nonlinearity = zakharov::nonlinearity_from_string(v); },
        [](const RunConfig& c) { return std::optional(zakharov::to_string(c.nonlinearity)); }};
    k["s"] = rational_key(&RunConfig::s);
    k["l"] = rational_key(&RunConfig::l);
    k["T"] = real_key(&RunConfig::T);
    k["dt"] = real_key(&RunConfig::dt);
    k["nodes"] = int_key(&RunConfig::nodes);
    k["save_every"] = int_key(&RunConfig::save_every);
    k["seed"] = {[](RunConfig& c, const std::string& v) { c.seed = parse_u64(v); },
                 [](const RunConfig& c) { return std::optional(std::to_string(c.seed)); }};
    k["samples"] = int_key(&RunConfig::samples);
    k["iterations"] = int_key(&RunConfig::iterations);
    k["u0"] = string_key(&RunConfig::u0, {"random", "gaussian", "plane_wave"});
    k["u0_norm"] = real_key(&RunConfig::u0_norm);
    k["u0_mode"] = string_key(&RunConfig::u0_mode, {});
    k["n0"] = string_key(&RunConfig::n0, {"zero", "random", "gaussian"});
    k["n0_norm"] = real_key(&RunConfig::n0_norm);
    k["n1"] = string_key(&RunConfig::n1, {"zero", "random"});
    k["n1_norm"] = real_key(&RunConfig::n1_norm);
    k["data_decay"] = real_key(&RunConfig::data_decay);
    k["data_cutoff"] = int_key(&RunConfig::data_cutoff);
    k["estimate"] = string_key(&RunConfig::estimate, {});
    k["estimate_nodes"] = int_key(&RunConfig::estimate_nodes);
    k["scan_s_min"] = rational_key(&RunConfig::scan_s_min);
    k["scan_s_max"] = rational_key(&RunConfig::scan_s_max);
    k["scan_l_min"] = rational_key(&RunConfig::scan_l_min);
    k["scan_l_max"] = rational_key(&RunConfig::scan_l_max);
    k["scan_step"] = rational_key(&RunConfig::scan_step);
    k["scan_j_min"] = int_key(&RunConfig::scan_j_min);
    k["scan_j_max"] = int_key(&RunConfig::scan_j_max);
    k["bilinear"] = string_key(&RunConfig::bilinear, {"omega", "omega_tilde"});
    k["mass_tolerance"] = real_key(&RunConfig::mass_tolerance);
    k["hamiltonian_tolerance"] = real_key(&RunConfig::hamiltonian_tolerance);
    return k;
  }();
  return table;
}

}  // namespace

double parse_real_expression(const std::string& text) {
  const std::string t = trim(text);
  if (t.empty()) throw InvalidArgument("empty real expression");
  // factors separated by '*' or '/', evaluated left to right
  double value = 1.0;
  char op = '*';
  std::size_t pos = 0;
  while (true) {
    const auto next = t.find_first_of("*/", pos);
    const std::string factor = trim(t.substr(pos, next == std::string::npos ? std::string::npos : next - pos));
    if (factor.empty()) throw InvalidArgument("malformed real expression '" + t + "'");
    const double f = parse_plain_real(factor);
    if (op == '*') {
      value *= f;
    } else {
      if (f == 0.0) throw InvalidArgument("division by zero in '" + t + "'");
      value /= f;
    }
    if (next == std::string::npos) break;
    op = t[next];
    pos = next + 1;
  }
  if (!std::isfinite(value)) throw InvalidArgument("'" + t + "' is not finite");
  return value;
}

zakharov::DecompositionParams RunConfig::params() const {
  return zakharov::DecompositionParams::make(alpha, K, beta);
}

zakharov::GridPtr RunConfig::grid() const { return zakharov::make_grid(dimension, box_length, grid_size); }

void RunConfig::validate() const {
  if (dimension < 1 || dimension > 3) throw InvalidArgument("dimension must be 1, 2 or 3");
  (void)grid();
  (void)params();
  auto positive = [](double v, const char* name) {
    if (!(v > 0.0)) throw InvalidArgument(std::string(name) + " must be positive");
  };
  auto non_negative = [](double v, const char* name) {
    if (!(v >= 0.0)) throw InvalidArgument(std::string(name) + " must be non-negative");
  };
  positive(T, "T");
  positive(dt, "dt");
  positive(data_decay, "data_decay");
  positive(mass_tolerance, "mass_tolerance");
  positive(hamiltonian_tolerance, "hamiltonian_tolerance");
  non_negative(u0_norm, "u0_norm");
  non_negative(n0_norm, "n0_norm");
  non_negative(n1_norm, "n1_norm");
  if (nodes < 3) throw InvalidArgument("nodes must be at least 3");
  if (estimate_nodes < 3) throw InvalidArgument("estimate_nodes must be at least 3");
  if (save_every < 1) throw InvalidArgument("save_every must be at least 1");
  if (samples < 1) throw InvalidArgument("samples must be at least 1");
  if (iterations < 1) throw InvalidArgument("iterations must be at least 1");
  if (data_cutoff < 0) throw InvalidArgument("data_cutoff must be non-negative");
  if (!(scan_step > Rational(0))) throw InvalidArgument("scan_step must be positive");
  if (scan_s_min > scan_s_max) throw InvalidArgument("scan_s_min exceeds scan_s_max");
  if (scan_l_min > scan_l_max) throw InvalidArgument("scan_l_min exceeds scan_l_max");
  if (scan_j_max - scan_j_min < 1) throw InvalidArgument("scan_j_max must exceed scan_j_min");
  require_one_of("u0", u0, {"random", "gaussian", "plane_wave"});
  require_one_of("n0", n0, {"zero", "random", "gaussian"});
  require_one_of("n1", n1, {"zero", "random"});
  require_one_of("bilinear", bilinear, {"omega", "omega_tilde"});
}

RunConfig parse_config(const std::string& text) {
  RunConfig config;
  std::istringstream in(text);
  std::string line;
  int number = 0;
  std::map<std::string, int> seen;
  while (std::getline(in, line)) {
    ++number;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw InvalidArgument("config line " + std::to_string(number) + ": expected 'key = value'");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    const auto it = keys().find(key);
    if (it == keys().end())
      throw InvalidArgument("config line " + std::to_string(number) + ": unknown key '" + key + "'");
    if (const auto prev = seen.find(key); prev != seen.end())
      throw InvalidArgument("config line " + std::to_string(number) + ": duplicate key '" + key +
                            "' (first set on line " + std::to_string(prev->second) + ")");
    seen[key] = number;
    if (value.empty())
      throw InvalidArgument("config line " + std::to_string(number) + ": empty value for '" + key + "'");
    try {
      it->second.set(config, value);
    } catch (const std::exception& e) {
      throw InvalidArgument("config line " + std::to_string(number) + ": " + key + ": " + e.what());
    }
  }
  return config;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot open config file '" + path + "'");
  std::ostringstream text;
  text << in.rdbuf();
  return parse_config(text.str());
}

std::map<std::string, std::string> config_entries(const RunConfig& config) {
  std::map<std::string, std::string> out;
  for (const auto& [name, key] : keys())
    if (auto v = key.get(config)) out[name] = *v;
  return out;
}

std::string canonical(const RunConfig& config) {
  std::string out;
  for (const auto& [name, value] : config_entries(config)) out += name + " = " + value + "\n";
  return out;
}

}  // namespace zlab

#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>

#include "zakharov/bilinear.hpp"
#include "zakharov/grid.hpp"
#include "zakharov/rational.hpp"
#include "zakharov/zakharov.hpp"

namespace zlab {

/// Flat key = value run configuration. Lines are `key = value`; `#` starts a
/// comment. Every key has a fixed type and unknown keys are errors.
struct RunConfig {
  // grid and model
  int dimension = 2;
  int grid_size = 64;
  double box_length = 1.5707963267948966;  // 2*pi/4
  double alpha = 1.0;
  int K = 5;
  std::optional<double> beta;
  zakharov::Nonlinearity nonlinearity = zakharov::Nonlinearity::physical;
  zakharov::Rational s{1};
  zakharov::Rational l{0};

  // time stepping and sampling
  double T = 1.0;
  double dt = 1e-3;
  int nodes = 65;
  int save_every = 10;
  std::uint64_t seed = 1;
  int samples = 100;
  int iterations = 8;

  // initial data
  std::string u0 = "random";  // random | gaussian | plane_wave
  double u0_norm = 1.0;       // H^s norm (random, gaussian) or L2 norm (plane_wave)
  std::string u0_mode = "1,0";
  std::string n0 = "random";  // zero | random | gaussian
  double n0_norm = 0.1;       // H^l norm
  std::string n1 = "zero";    // zero | random
  double n1_norm = 0.0;       // H^{l-1} norm
  double data_decay = 2.0;
  int data_cutoff = 0;

  // estimates
  std::string estimate = "all";
  int estimate_nodes = 9;
  zakharov::Rational scan_s_min{1, 2};
  zakharov::Rational scan_s_max{2};
  zakharov::Rational scan_l_min{0};
  zakharov::Rational scan_l_max{0};
  zakharov::Rational scan_step{1, 4};
  int scan_j_min = 6;
  int scan_j_max = 9;

  // denominator scan
  std::string bilinear = "omega";  // omega | omega_tilde

  // assertion thresholds
  double mass_tolerance = 1e-8;
  double hamiltonian_tolerance = 1e-5;

  zakharov::DecompositionParams params() const;
  zakharov::GridPtr grid() const;
  /// Throws zakharov::InvalidArgument when a value is out of range.
  void validate() const;
};

/// Parses the text format. Errors name the line and key.
RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::string& path);

/// Canonical form: every key in sorted order, reals printed to full precision.
/// parse_config(canonical(c)) reproduces c exactly.
std::string canonical(const RunConfig& config);
std::map<std::string, std::string> config_entries(const RunConfig& config);

/// Real number or a product/quotient with pi, e.g. "2*pi/8", "pi", "0.5".
double parse_real_expression(const std::string& text);

}  // namespace zlab

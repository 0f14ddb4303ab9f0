#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "zakharov/bilinear.hpp"
#include "zakharov/field.hpp"
#include "zakharov/rational.hpp"

namespace zakharov {

struct RegularityPoint {
  Rational s;
  Rational l;
  int dim = 3;
};

/// Region identifiers: "theorem" plus every estimate family name (see
/// estimate_families()). The dimension of the point selects the variant.
/// Returns a description of the first violated condition, or nothing when
/// the point lies in the region. Unknown ids throw InvalidArgument.
std::optional<std::string> region_violation(const RegularityPoint& pt, const std::string& which);
bool region_membership(const RegularityPoint& pt, const std::string& which);

enum class FlowKind { schrodinger, wave };

/// Exponent pairs are given by reciprocals (1/q, 1/r); 0 encodes infinity.
/// Returns the violated admissibility condition, or nothing.
std::optional<std::string> admissibility_violation(FlowKind kind, int dim, const Rational& inv_q,
                                                   const Rational& inv_r);

enum class Regularity { s, l };

/// Spatial norm of one field slot at one time node.
struct SpatialNorm {
  enum class Kind { sobolev, besov } kind = Kind::sobolev;
  double p = 2.0;  // Besov integrability
  Regularity reg = Regularity::s;
  int slot = 0;
};

/// || sum_terms prod_norms ||_{L^{q_t}} over the time nodes (q_t may be
/// infinite). q_t = 0 takes the value at t = 0 instead, for norms of data.
struct TimeFactor {
  double q_t = 0.0;
  std::vector<std::vector<SpatialNorm>> terms;
};

/// Sum of space-time norms, e.g. L^inf H^s + L^q B^s_r for an intersection space.
using NormSum = std::vector<TimeFactor>;

enum class BetaFactor { none, constant, decay };

/// A registered inequality LHS <= C T^{t_power} prod(RHS factors).
///
/// Slots 0..inputs-1 hold the sampled inputs; the operator appends its
/// outputs after them. Pointwise operators act node by node, the others see
/// the whole sampled trajectory.
struct EstimateSpec {
  std::string name;    // "<family>/d<dim>"
  std::string family;  // region id
  int dim = 3;
  std::string lhs_text;
  std::string rhs_text;
  Rational t_power;
  BetaFactor beta_factor = BetaFactor::none;
  std::vector<FlowKind> inputs;
  bool always_free_flow = false;  // the LHS is a flow of the inputs
  int scan_high_slot = 0;         // dyadic scan: this slot at shell j, the others constant

  using PointOp = std::function<std::vector<SpectralField>(std::span<const SpectralField>,
                                                           const DecompositionParams&)>;
  using TrajectoryOp = std::function<std::vector<std::vector<SpectralField>>(
      const std::vector<std::vector<SpectralField>>&, double dt, const DecompositionParams&)>;
  PointOp point_op;
  TrajectoryOp trajectory_op;

  NormSum lhs;
  std::vector<NormSum> rhs;  // product of factors
};

/// All registered estimates (Strichartz, quadratic, boundary and cubic, for d = 2 and 3).
const std::vector<EstimateSpec>& estimate_registry();
const EstimateSpec& find_estimate(const std::string& name);
std::vector<std::string> estimate_families();

/// Exponent pair of the X^s Strichartz norm: (q, 4) with q = 8/3 for d = 3, 4 otherwise.
double strichartz_time_exponent(int dim);

struct EstimateOptions {
  double T = 0.5;
  std::size_t samples = 100;
  std::size_t nodes = 9;
  std::uint64_t seed = 1;
  int cutoff = 0;               // random-field cutoff per axis; 0 = floor(band/2) - 1
  std::size_t free_flow_every = 4;  // every k-th sample is a free flow (others time-constant)
  bool exploratory = false;
  bool force_time_constant = false;
  DecompositionParams params = DecompositionParams::make(1.0);
};

struct SampleRatio {
  std::uint64_t seed = 0;
  bool free_flow = false;
  double lhs = 0.0;
  double rhs = 0.0;
  double ratio = 0.0;
};

struct EstimateReport {
  std::string spec;
  RegularityPoint point;
  double T = 0.0;
  double beta = 0.0;
  bool exploratory = false;
  std::vector<SampleRatio> samples;
  double sup_ratio = 0.0;
  double proof_constant = 0.0;  // 2^{2 beta s} for C(beta) estimates, 0 otherwise
};

/// Ratios LHS / (T^{t_power} prod RHS) over random samples, for several
/// regularity points at once (the samples are shared). Points outside the
/// estimate's region throw InvalidArgument unless options.exploratory.
std::vector<EstimateReport> estimate_ratio(const EstimateSpec& spec,
                                           std::span<const RegularityPoint> points,
                                           const GridPtr& grid, const EstimateOptions& options);

/// CSV rows: spec,s,l,d,T,seed,lhs,rhs,ratio.
void write_ratio_csv_header(std::ostream& out);
void write_ratio_csv(const EstimateReport& report, std::ostream& out);

struct ShellScan {
  std::vector<int> shells;
  std::vector<double> ratios;
  double slope = 0.0;  // least-squares slope of log2(ratio) against j
};

/// Least-squares slope of log2(values) against x.
double fit_log2_slope(std::span<const double> x, std::span<const double> values);

struct ScanOptions {
  Rational s_min, s_max, l_min, l_max, step;
  int j_min = 6;
  int j_max = 9;
  double T = 0.5;
  DecompositionParams params = DecompositionParams::make(1.0);
};

struct ScanRow {
  Rational s;
  Rational l;
  double exponent = 0.0;
  bool inside = false;
};

/// Dyadic single-scale family: the spec's scan slot is the localized kernel
/// on the plateau of chi_j, the other slots are constants. For each (s, l)
/// fits the growth exponent of the ratio in 2^j.
std::vector<ScanRow> scan_region(const EstimateSpec& spec, const GridPtr& grid, const ScanOptions& options);
ShellScan shell_scan(const EstimateSpec& spec, const RegularityPoint& point, const GridPtr& grid,
                     const ScanOptions& options);

/// CSV: s,l,exponent,inside.
void write_scan_csv(const std::vector<ScanRow>& rows, std::ostream& out);

struct StrichartzReport {
  FlowKind kind = FlowKind::schrodinger;
  Rational inv_q, inv_r;
  double sup_homogeneous = 0.0;
  double sup_inhomogeneous = 0.0;
  std::size_t samples = 0;
};

/// Validates (q, r) exactly, then measures the homogeneous flow bound and
/// the inhomogeneous bound with the dual exponents (q', r').
StrichartzReport strichartz_check(FlowKind kind, const RegularityPoint& pt, const Rational& inv_q,
                                  const Rational& inv_r, const GridPtr& grid,
                                  const EstimateOptions& options);

}  // namespace zakharov

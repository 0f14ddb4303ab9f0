#include "commands.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

#include "zakharov/bilinear.hpp"
#include "zakharov/errors.hpp"
#include "zakharov/estimates.hpp"
#include "zakharov/littlewood_paley.hpp"
#include "zakharov/normal_form.hpp"
#include "zakharov/sampling.hpp"
#include "zakharov/zakharov.hpp"

namespace zlab {

namespace z = zakharov;
using nlohmann::json;
using z::InvalidArgument;

namespace {

std::string g17(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

class Csv {
 public:
  Csv(Manifest& manifest, const std::string& name) : out_(manifest.dir() / name) {
    if (!out_) throw std::runtime_error("cannot write " + (manifest.dir() / name).string());
    manifest.output(name);
  }
  template <class... Cells>
  void row(const Cells&... cells) {
    bool first = true;
    ((out_ << (first ? "" : ",") << cell(cells), first = false), ...);
    out_ << '\n';
  }
  std::ostream& stream() { return out_; }

 private:
  static std::string cell(double x) { return g17(x); }
  static std::string cell(const std::string& s) { return s; }
  static std::string cell(const char* s) { return s; }
  template <class I, class = std::enable_if_t<std::is_integral_v<I>>>
  static std::string cell(I i) { return std::to_string(i); }
  std::ofstream out_;
};

double relative_drift(const std::vector<double>& values) {
  const double ref = std::abs(values.front());
  double worst = 0.0;
  for (double v : values) worst = std::max(worst, std::abs(v - values.front()));
  return ref > 0.0 ? worst / ref : worst;
}

z::ResolutionNorms resolution_norms(const RunConfig& c) {
  return {c.dimension, c.s.to_double(), c.l.to_double()};
}

z::NormalFormSigns record_signs(Manifest& manifest) {
  const auto signs = z::NormalFormSigns::consistent();
  manifest.doc()["signs"] = {{"boundary", signs.boundary}, {"cross_cubic", signs.cross_cubic}};
  manifest.note(signs.describe());
  return signs;
}

z::Modes parse_modes(const std::string& text, int dim) {
  z::Modes m{0, 0, 0};
  std::istringstream in(text);
  std::string part;
  int axis = 0;
  while (std::getline(in, part, ',')) {
    if (axis >= dim) throw InvalidArgument("u0_mode '" + text + "' has more than " + std::to_string(dim) + " entries");
    try {
      std::size_t used = 0;
      m[static_cast<std::size_t>(axis)] = std::stoi(part, &used);
      if (part.find_first_not_of(" \t", used) != std::string::npos) throw std::invalid_argument(part);
    } catch (const std::exception&) {
      throw InvalidArgument("u0_mode '" + text + "' is not a list of integers");
    }
    ++axis;
  }
  if (axis != dim) throw InvalidArgument("u0_mode '" + text + "' needs " + std::to_string(dim) + " entries");
  return m;
}

z::SpectralField sampled(const z::GridPtr& grid, z::ProfileKind kind, const RunConfig& c, bool real,
                         std::uint64_t seed, double s, double value) {
  if (value == 0.0) return z::SpectralField(grid);
  z::FieldProfile profile;
  profile.kind = kind;
  profile.decay = c.data_decay;
  profile.width = grid->box_length() / 8.0;
  profile.cutoff = c.data_cutoff;
  profile.real = real;
  profile.seed = seed;
  return z::random_field(grid, profile, {z::TargetKind::sobolev, {s, 2.0, 2.0, false}}, value);
}

void write_trajectory(const RunConfig& c, const RunOptions& o, const z::Trajectory& traj, Manifest& m) {
  const auto zm = o.strict_zero_mode ? z::ZeroMode::reject : z::ZeroMode::annihilate;
  Csv csv(m, "trajectory.csv");
  csv.row("t", "mass", "hamiltonian", "Hs_u", "Hl_N");
  std::vector<double> masses, energies;
  for (std::size_t j = 0; j < traj.size(); ++j) {
    const auto wave = z::from_first_order(traj.N[j], traj.alpha);
    masses.push_back(z::mass(traj.u[j]));
    energies.push_back(z::hamiltonian(traj.u[j], wave.n, wave.ndot, traj.alpha, zm));
    csv.row(traj.times[j], masses.back(), energies.back(), z::sobolev_norm(traj.u[j], c.s.to_double()),
            z::sobolev_norm(traj.N[j], c.l.to_double()));
  }
  const double mass_drift = relative_drift(masses);
  const double energy_drift = relative_drift(energies);
  m.doc()["conservation"] = {{"mass_drift", mass_drift}, {"hamiltonian_drift", energy_drift}};
  m.check("mass_drift", mass_drift < c.mass_tolerance, mass_drift, c.mass_tolerance);
  if (traj.mode == z::Nonlinearity::physical)
    m.check("hamiltonian_drift", energy_drift < c.hamiltonian_tolerance, energy_drift, c.hamiltonian_tolerance);
  else
    m.note("hamiltonian is conserved only in physical mode; its drift is recorded but not checked");
}

void simulate(const RunConfig& c, const RunOptions& o, Manifest& m) {
  const auto grid = c.grid();
  const auto state = initial_state(c, o, grid);
  const auto traj = z::reference_solve(state, c.T, c.dt, static_cast<std::size_t>(c.save_every));
  m.doc()["scheme"] = traj.scheme;
  write_trajectory(c, o, traj, m);
}

void picard(const RunConfig& c, const RunOptions& o, Manifest& m) {
  const auto grid = c.grid();
  auto state = initial_state(c, o, grid);
  const auto params = c.params();
  z::PicardOptions po;
  po.iterations = static_cast<std::size_t>(c.iterations);
  po.nodes = static_cast<std::size_t>(c.nodes);
  po.norms = resolution_norms(c);
  po.signs = record_signs(m);
  const double eta =
      2.5 * (z::sobolev_norm(state.u, po.norms.s) + z::sobolev_norm(state.N, po.norms.l));
  const auto res = z::picard_solve(state.u, state.N, c.T, params, po);
  {
    Csv csv(m, "picard.csv");
    csv.row("iteration", "difference", "ratio");
    for (std::size_t i = 0; i < res.differences.size(); ++i)
      csv.row(i + 1, res.differences[i], i == 0 ? std::nan("") : res.ratios[i - 1]);
  }
  double worst = 0.0;
  for (double r : res.ratios) worst = std::max(worst, r);
  m.doc()["picard"] = {{"eta", eta}, {"iterations", res.iterations}, {"max_ratio", worst}};
  m.check("difference_ratio", worst < 0.5, worst, 0.5);

  state.mode = z::Nonlinearity::simplified;
  const double steps = c.T / c.dt;
  if (std::abs(steps - std::round(steps)) > 1e-9 * steps)
    throw InvalidArgument("T / dt must be an integer for the reference comparison");
  const auto ref = z::reference_solve(state, c.T, c.dt, static_cast<std::size_t>(std::round(steps)));
  const double err = (res.trajectory.u.back() - ref.u.back()).l2_norm() / ref.u.back().l2_norm();
  m.doc()["picard"]["reference_error"] = err;
  m.check("reference_error", err < 1e-3, err, 1e-3);
}

void residual(const RunConfig& c, const RunOptions& o, Manifest& m) {
  const auto grid = c.grid();
  auto state = initial_state(c, o, grid);
  state.mode = z::Nonlinearity::simplified;
  const auto signs = record_signs(m);
  const auto traj = z::reference_solve(state, c.T, c.dt);
  const auto rep = z::normal_form_residual(traj, c.params(), signs);
  Csv csv(m, "residual.csv");
  csv.row("t", "reduced_u", "reduced_N", "unreduced_u", "unreduced_N");
  for (std::size_t j = 0; j < rep.times.size(); ++j)
    csv.row(rep.times[j], rep.reduced_u[j], rep.reduced_N[j], rep.unreduced_u[j], rep.unreduced_N[j]);
  const double reduced = rep.max_reduced(), unreduced = rep.max_unreduced();
  m.doc()["residual"] = {{"max_reduced", reduced}, {"max_unreduced", unreduced}};
  const double ratio = unreduced > 0.0 ? reduced / unreduced : (reduced > 0.0 ? INFINITY : 0.0);
  m.check("reduced_over_unreduced", ratio <= 10.0, ratio, 10.0);
}

void verify_estimates(const RunConfig& c, const RunOptions& o, Manifest& m) {
  const auto grid = c.grid();
  z::EstimateOptions eo;
  eo.T = c.T;
  eo.samples = static_cast<std::size_t>(c.samples);
  eo.nodes = static_cast<std::size_t>(c.estimate_nodes);
  eo.seed = c.seed;
  eo.cutoff = c.data_cutoff;
  eo.exploratory = o.exploratory;
  eo.params = c.params();
  const z::RegularityPoint pt{c.s, c.l, c.dimension};
  const auto names = selected_estimates(c);
  // validate every point before sampling anything
  if (!o.exploratory)
    for (const auto& name : names)
      if (auto why = z::region_violation(pt, z::find_estimate(name).family))
        throw InvalidArgument("(s,l) = (" + c.s.str() + "," + c.l.str() + ") is outside the region of " +
                              name + ": " + *why);
  std::ofstream out(m.dir() / "ratios.csv");
  if (!out) throw std::runtime_error("cannot write ratios.csv");
  m.output("ratios.csv");
  z::write_ratio_csv_header(out);
  json estimates = json::object();
  for (const auto& name : names) {
    const auto& spec = z::find_estimate(name);
    const auto reports = z::estimate_ratio(spec, std::span(&pt, 1), grid, eo);
    const auto& r = reports.front();
    z::write_ratio_csv(r, out);
    estimates[name] = {{"sup_ratio", r.sup_ratio},   {"proof_constant", r.proof_constant},
                       {"samples", r.samples.size()}, {"beta", r.beta},
                       {"exploratory", r.exploratory}, {"lhs", spec.lhs_text},
                       {"rhs", spec.rhs_text}};
    m.check(name, std::isfinite(r.sup_ratio), r.sup_ratio, INFINITY, "sup ratio finite");
  }
  m.doc()["estimates"] = estimates;
}

void scan_region(const RunConfig& c, const RunOptions&, Manifest& m) {
  const auto names = selected_estimates(c);
  if (names.size() != 1)
    throw InvalidArgument("scan-region needs a single estimate (set estimate = <family>)");
  const auto& spec = z::find_estimate(names.front());
  z::ScanOptions so;
  so.s_min = c.scan_s_min;
  so.s_max = c.scan_s_max;
  so.l_min = c.scan_l_min;
  so.l_max = c.scan_l_max;
  so.step = c.scan_step;
  so.j_min = c.scan_j_min;
  so.j_max = c.scan_j_max;
  so.T = c.T;
  so.params = c.params();
  const auto rows = z::scan_region(spec, c.grid(), so);
  {
    std::ofstream out(m.dir() / "region_scan.csv");
    if (!out) throw std::runtime_error("cannot write region_scan.csv");
    m.output("region_scan.csv");
    z::write_scan_csv(rows, out);
  }
  json scan = json::array();
  bool finite = true;
  for (const auto& r : rows) {
    scan.push_back({{"s", r.s.str()}, {"l", r.l.str()}, {"exponent", r.exponent}, {"inside", r.inside}});
    finite = finite && std::isfinite(r.exponent);
  }
  m.doc()["scan"] = scan;
  m.doc()["scan_estimate"] = spec.name;
  // sign changes of the exponent along s, per l
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const auto& a = rows[i - 1];
    const auto& b = rows[i];
    if (a.l == b.l && (a.exponent < 0.0) != (b.exponent < 0.0))
      m.note("exponent changes sign between s = " + a.s.str() + " and s = " + b.s.str() + " at l = " + a.l.str());
  }
  m.check("exponents_finite", finite, static_cast<double>(rows.size()), 0.0);
}

void denominators(const RunConfig& c, const RunOptions&, Manifest& m) {
  const auto grid = c.grid();
  const auto which = c.bilinear == "omega" ? z::BilinearOperator::omega : z::BilinearOperator::omega_tilde;
  const auto rep = z::denominator_scan(*grid, c.params(), which);
  {
    Csv csv(m, "denominators.csv");
    z::write_denominator_csv(rep, csv.stream());
  }
  m.doc()["denominators"] = {{"operator", c.bilinear}, {"global_min", rep.global_min},
                             {"pairs", rep.pairs},     {"resonant", rep.resonant}};
  m.check("global_min_positive", rep.pairs > 0 && rep.global_min > 0.0, rep.global_min, 0.0);
  m.check("no_near_resonance", !rep.resonant, rep.resonant ? 1.0 : 0.0, 0.0);
}

void norms(const RunConfig& c, const RunOptions& o, Manifest& m) {
  const auto grid = c.grid();
  const auto state = initial_state(c, o, grid);
  const auto rn = resolution_norms(c);
  const double s = rn.s, l = rn.l;
  std::vector<std::pair<std::string, double>> values = {
      {"u0 L2", state.u.l2_norm()},
      {"u0 H^s", z::sobolev_norm(state.u, s)},
      {"u0 B^s_{4,2}", z::besov_norm(state.u, {s, 4.0, 2.0, false})},
      {"u0 L4", z::lp_norm(state.u, 4.0)},
      {"N0 L2", state.N.l2_norm()},
      {"N0 H^l", z::sobolev_norm(state.N, l)},
  };
  const auto flow = z::linear_flow(state.u, state.N, c.T, static_cast<std::size_t>(c.nodes), c.alpha);
  const auto x = z::resolution_norm(flow.u, flow.N, flow.dt, rn);
  values.push_back({"free flow X^s", x.xs});
  values.push_back({"free flow Y^l", x.yl});
  values.push_back({"eta", 2.5 * (values[1].second + values[5].second)});
  Csv csv(m, "norms.csv");
  csv.row("quantity", "value");
  json out = json::object();
  bool finite = true;
  for (const auto& [name, v] : values) {
    csv.row(name, v);
    out[name] = v;
    finite = finite && std::isfinite(v);
  }
  m.doc()["norms"] = out;
  m.check("norms_finite", finite, static_cast<double>(values.size()), 0.0);
}

void contraction(const RunConfig& c, const RunOptions& o, Manifest& m) {
  const auto grid = c.grid();
  const auto state = initial_state(c, o, grid);
  z::ContractionOptions co;
  co.samples = static_cast<std::size_t>(c.samples);
  co.nodes = static_cast<std::size_t>(c.nodes);
  co.seed = c.seed;
  co.norms = resolution_norms(c);
  co.signs = record_signs(m);
  const auto rep = z::contraction_diagnostics(state.u, state.N, c.T, c.params(), co);
  Csv csv(m, "contraction.csv");
  csv.row("sample", "lipschitz", "image_ratio");
  for (std::size_t i = 0; i < rep.lipschitz.size(); ++i) csv.row(i, rep.lipschitz[i], rep.image_ratio[i]);
  m.doc()["contraction"] = {{"eta", rep.eta},
                            {"beta", rep.beta},
                            {"max_lipschitz", rep.max_lipschitz()},
                            {"max_image_ratio", rep.max_image_ratio()}};
  m.check("max_lipschitz", rep.max_lipschitz() < 0.5, rep.max_lipschitz(), 0.5);
  m.check("max_image_ratio", rep.max_image_ratio() <= 1.0, rep.max_image_ratio(), 1.0);
}

using Command = void (*)(const RunConfig&, const RunOptions&, Manifest&);

const std::map<std::string, Command>& commands() {
  static const std::map<std::string, Command> table = {
      {"simulate", simulate},           {"picard", picard},
      {"residual", residual},           {"verify-estimates", verify_estimates},
      {"scan-region", scan_region},     {"denominator-scan", denominators},
      {"norms", norms},                 {"contraction", contraction},
  };
  return table;
}

}  // namespace

const std::vector<std::string>& command_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> n;
    for (const auto& [k, v] : commands()) n.push_back(k);
    return n;
  }();
  return names;
}

std::vector<std::string> selected_estimates(const RunConfig& c) {
  const std::string suffix = "/d" + std::to_string(c.dimension);
  std::vector<std::string> out;
  if (c.estimate == "all") {
    for (const auto& spec : z::estimate_registry())
      if (spec.dim == c.dimension) out.push_back(spec.name);
    if (out.empty()) throw InvalidArgument("no estimates are registered for dimension " + std::to_string(c.dimension));
    return out;
  }
  const std::string name = c.estimate.find('/') == std::string::npos ? c.estimate + suffix : c.estimate;
  const auto& spec = z::find_estimate(name);
  if (spec.dim != c.dimension)
    throw InvalidArgument("estimate " + name + " is for d = " + std::to_string(spec.dim) + " but dimension = " +
                          std::to_string(c.dimension));
  out.push_back(spec.name);
  return out;
}

InitialData initial_data(const RunConfig& c, const z::GridPtr& grid) {
  const double s = c.s.to_double(), l = c.l.to_double();
  InitialData d{z::SpectralField(grid), z::SpectralField(grid), z::SpectralField(grid)};
  if (c.u0 == "plane_wave") {
    const auto m = parse_modes(c.u0_mode, c.dimension);
    if (!grid->in_band(m)) throw InvalidArgument("u0_mode " + c.u0_mode + " lies outside the dealiasing band");
    d.u0[grid->flat_index(m)] = c.u0_norm;
  } else {
    const auto kind = c.u0 == "random" ? z::ProfileKind::sobolev_random : z::ProfileKind::gaussian_bump;
    d.u0 = sampled(grid, kind, c, false, c.seed, s, c.u0_norm);
  }
  if (c.n0 != "zero") {
    const auto kind = c.n0 == "random" ? z::ProfileKind::sobolev_random : z::ProfileKind::gaussian_bump;
    d.n0 = sampled(grid, kind, c, true, c.seed + 1, l, c.n0_norm);
  }
  if (c.n1 == "random") d.n1 = sampled(grid, z::ProfileKind::sobolev_random, c, true, c.seed + 2, l - 1.0, c.n1_norm);
  return d;
}

z::ZakharovState initial_state(const RunConfig& c, const RunOptions& o, const z::GridPtr& grid) {
  const auto d = initial_data(c, grid);
  return z::to_first_order(d.u0, d.n0, d.n1, c.alpha, c.nonlinearity,
                           o.strict_zero_mode ? z::ZeroMode::reject : z::ZeroMode::annihilate);
}

bool run_command(const std::string& command, const RunConfig& config, const RunOptions& options,
                 Manifest& manifest) {
  const auto it = commands().find(command);
  if (it == commands().end()) throw InvalidArgument("unknown command '" + command + "'");
  config.validate();
  it->second(config, options, manifest);
  return manifest.all_passed();
}

}  // namespace zlab

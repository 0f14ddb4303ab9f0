#include "zakharov/estimates.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <map>
#include <ostream>
#include <sstream>
#include <tuple>

#include "zakharov/errors.hpp"
#include "zakharov/littlewood_paley.hpp"
#include "zakharov/normal_form.hpp"
#include "zakharov/parallel.hpp"
#include "zakharov/sampling.hpp"

namespace zakharov {

namespace {

Rational R(std::int64_t a, std::int64_t b = 1) { return Rational(a, b); }

class Conditions {
 public:
  explicit Conditions(const RegularityPoint& pt) : pt_(pt) {}

  void require(bool ok, const std::string& text) {
    if (!failed_ && !ok) failed_ = text;
  }
  void exclude(const Rational& s, const Rational& l) {
    require(!(pt_.s == s && pt_.l == l), "(s,l) != (" + s.str() + ", " + l.str() + ")");
  }
  std::optional<std::string> result() const { return failed_; }

 private:
  const RegularityPoint& pt_;
  std::optional<std::string> failed_;
};

const std::vector<std::string>& family_names() {
  static const std::vector<std::string> names = {
      "strichartz-schrodinger-hom", "strichartz-schrodinger-inhom",
      "strichartz-wave-hom",        "strichartz-wave-inhom",
      "quadratic-low-high",         "quadratic-alpha-low",
      "quadratic-d-high-high",      "quadratic-d-alpha",
      "boundary-energy",            "boundary-strichartz",
      "boundary-wave",              "cubic-omega-mnu",
      "cubic-omega-duv",            "cubic-omega-tilde",
  };
  return names;
}

std::string fmt(double x) {
  std::ostringstream os;
  os << std::setprecision(17) << x;
  return os.str();
}

}  // namespace

std::optional<std::string> region_violation(const RegularityPoint& pt, const std::string& which) {
  const auto& names = family_names();
  if (which != "theorem" && std::find(names.begin(), names.end(), which) == names.end())
    throw InvalidArgument("unknown region id '" + which + "'");
  if (pt.dim != 2 && pt.dim != 3)
    throw InvalidArgument("regions are defined for d = 2 and d = 3, got d = " + std::to_string(pt.dim));
  const bool d3 = pt.dim == 3;
  const Rational& s = pt.s;
  const Rational& l = pt.l;
  Conditions c(pt);

  if (which == "theorem") {
    c.require(l >= R(0), "l >= 0");
    c.require(s >= (l + R(1)) / R(2), "s >= (l+1)/2");
    c.require(s >= l - R(1), "s >= l-1");
    if (d3)
      c.require(s <= l + R(5, 4), "s <= l+5/4");
    else
      c.require(s <= l + R(3, 2), "s <= l+3/2");
  } else if (which.rfind("strichartz-", 0) == 0) {
    // valid at every regularity
  } else if (which == "quadratic-low-high" || which == "quadratic-alpha-low") {
    c.require(s >= R(0), "s >= 0");
    c.require(l >= R(0), "l >= 0");
  } else if (which == "quadratic-d-high-high" || which == "quadratic-d-alpha") {
    c.require(R(2) * s >= l + R(1), "2s >= l+1");
  } else if (which == "boundary-energy") {
    if (d3) {
      c.require(l >= R(-1, 2), "l >= -1/2");
      c.require(s <= l + R(2), "s <= l+2");
      c.exclude(R(3, 2), R(-1, 2));
    } else {
      c.require(l >= R(-1), "l >= -1");
      c.require(s <= l + R(2), "s <= l+2");
      c.exclude(R(1), R(-1));
    }
  } else if (which == "boundary-strichartz") {
    if (d3) {
      c.require(l >= R(-1, 2), "l >= -1/2");
      c.require(s <= l + R(5, 4), "s <= l+5/4");
      c.exclude(R(3, 4), R(-1, 2));
    } else {
      c.require(l >= R(-1), "l >= -1");
      c.require(s <= l + R(3, 2), "s <= l+3/2");
      c.exclude(R(1, 2), R(-1));
    }
  } else if (which == "boundary-wave") {
    c.require(s >= l - R(1), "s >= l-1");
    if (d3) {
      c.require(s >= l / R(2) + R(1, 4), "s >= l/2+1/4");
      c.exclude(R(3, 2), R(5, 2));
    } else {
      c.require(s >= l / R(2), "s >= l/2");
      c.exclude(R(1), R(2));
    }
  } else if (which == "cubic-omega-mnu") {
    if (d3) {
      c.require(l >= R(-1, 4), "l >= -1/4");
      c.require(s <= l + R(2), "s <= l+2");
      c.require(s <= R(2) * l + R(5, 4), "s <= 2l+5/4");
      c.exclude(R(7, 4), R(-1, 4));
      c.exclude(R(11, 4), R(3, 4));
      c.exclude(R(3, 4), R(-1, 4));
    } else {
      c.require(l >= R(-1, 2), "l >= -1/2");
      c.require(s <= l + R(2), "s <= l+2");
      c.require(s <= R(2) * l + R(3, 2), "s <= 2l+3/2");
      c.exclude(R(3, 2), R(-1, 2));
      c.exclude(R(5, 2), R(1, 2));
      c.exclude(R(1, 2), R(-1, 2));
    }
  } else if (which == "cubic-omega-duv") {
    if (d3)
      c.require(s >= R(1, 2), "s >= 1/2");
    else
      c.require(s >= R(-1, 4), "s >= -1/4");
  } else if (which == "cubic-omega-tilde") {
    if (d3) {
      c.require(s >= R(1, 4), "s >= 1/4");
      c.require(l <= s + R(1), "l <= s+1");
      c.require(l <= R(2) * s + R(1, 4), "l <= 2s+1/4");
      c.exclude(R(1, 4), R(3, 4));
      c.exclude(R(3, 4), R(7, 4));
    } else {
      c.require(s >= R(0), "s >= 0");
      c.require(l <= s + R(1), "l <= s+1");
      c.require(l <= R(2) * s + R(1, 2), "l <= 2s+1/2");
      c.exclude(R(1, 2), R(3, 2));
      c.exclude(R(0), R(1, 2));
    }
  }
  return c.result();
}

bool region_membership(const RegularityPoint& pt, const std::string& which) {
  return !region_violation(pt, which).has_value();
}

std::optional<std::string> admissibility_violation(FlowKind kind, int dim, const Rational& inv_q,
                                                   const Rational& inv_r) {
  if (dim < 1 || dim > 3) throw InvalidArgument("dimension must be 1, 2 or 3");
  const Rational half = R(1, 2);
  const auto show = [](const Rational& inv) { return inv == R(0) ? std::string("inf") : (R(1) / inv).str(); };
  if (inv_q < R(0) || inv_q > half) return "2 <= q <= inf (q = " + show(inv_q) + ")";
  if (inv_r < R(0) || inv_r > half) return "2 <= r <= inf (r = " + show(inv_r) + ")";
  if (kind == FlowKind::schrodinger) {
    const Rational rhs = R(dim, 2) * (half - inv_r);
    if (!(inv_q == rhs))
      return "1/q = d/2 (1/2 - 1/r): 1/q = " + inv_q.str() + " but d/2 (1/2 - 1/r) = " + rhs.str();
    if (dim == 2 && inv_q == half && inv_r == R(0)) return "(q, r, d) != (2, inf, 2)";
    if (dim == 2 && inv_r == R(0)) return "r < inf for d = 2";
    if (dim == 3 && inv_r < R(1, 6)) return "r <= 6 for d = 3 (r = " + show(inv_r) + ")";
  } else {
    const Rational rhs = R(dim - 1, 2) * (half - inv_r);
    if (!(inv_q == rhs))
      return "1/q = (d-1)/2 (1/2 - 1/r): 1/q = " + inv_q.str() + " but (d-1)/2 (1/2 - 1/r) = " +
             rhs.str();
    if (dim == 3 && inv_q == half && inv_r == R(0)) return "(q, r, d) != (2, inf, 3)";
    if (dim == 3 && inv_r == R(0)) return "r < inf for d = 3";
  }
  return std::nullopt;
}

double strichartz_time_exponent(int dim) { return dim == 3 ? 8.0 / 3.0 : 4.0; }

// ---------------------------------------------------------------------------
// registry

namespace {

constexpr double kInf = kInfinity;

SpatialNorm Hs(int slot) { return {SpatialNorm::Kind::sobolev, 2.0, Regularity::s, slot}; }
SpatialNorm Hl(int slot) { return {SpatialNorm::Kind::sobolev, 2.0, Regularity::l, slot}; }
SpatialNorm Bs(double p, int slot) { return {SpatialNorm::Kind::besov, p, Regularity::s, slot}; }
SpatialNorm Bl(double p, int slot) { return {SpatialNorm::Kind::besov, p, Regularity::l, slot}; }

TimeFactor tf(double q, SpatialNorm n) { return {q, {{n}}}; }
NormSum single(double q, SpatialNorm n) { return {tf(q, n)}; }

SpectralField D(const SpectralField& f) { return apply_D_power(f, 1.0); }

std::vector<EstimateSpec> build_registry() {
  std::vector<EstimateSpec> out;
  for (const int d : {2, 3}) {
    const bool d3 = d == 3;
    const double qS = strichartz_time_exponent(d);        // 8/3 | 4
    const double q1 = d3 ? 8.0 / 5.0 : 4.0 / 3.0;         // dual time exponent for Schrodinger forcing
    const std::string qs = d3 ? "8/3" : "4", q1s = d3 ? "8/5" : "4/3";
    const auto add = [&](EstimateSpec spec) {
      spec.dim = d;
      spec.name = spec.family + "/d" + std::to_string(d);
      out.push_back(std::move(spec));
    };

    {
      EstimateSpec e;
      e.family = "strichartz-schrodinger-hom";
      e.lhs_text = "L^inf H^s + L^" + qs + " B^s_4 of S(t)phi";
      e.rhs_text = "H^s(phi)";
      e.inputs = {FlowKind::schrodinger};
      e.always_free_flow = true;
      e.lhs = {tf(kInf, Hs(0)), tf(qS, Bs(4.0, 0))};
      e.rhs = {single(0.0, Hs(0))};
      add(e);
    }
    {
      EstimateSpec e;
      e.family = "strichartz-schrodinger-inhom";
      e.lhs_text = "L^inf H^s + L^" + qs + " B^s_4 of int_0^t S(t-s)f(s)ds";
      e.rhs_text = "L^" + q1s + " B^s_{4/3}(f)";
      e.inputs = {FlowKind::schrodinger};
      e.trajectory_op = [](const std::vector<std::vector<SpectralField>>& in, double dt,
                           const DecompositionParams&) {
        return std::vector<std::vector<SpectralField>>{
            duhamel_cumulative(Propagator::schrodinger, in[0], dt)};
      };
      e.lhs = {tf(kInf, Hs(1)), tf(qS, Bs(4.0, 1))};
      e.rhs = {single(q1, Bs(4.0 / 3.0, 0))};
      add(e);
    }
    {
      EstimateSpec e;
      e.family = "strichartz-wave-hom";
      e.lhs_text = "L^inf H^l of W(t)phi";
      e.rhs_text = "H^l(phi)";
      e.inputs = {FlowKind::wave};
      e.always_free_flow = true;
      e.lhs = {tf(kInf, Hl(0))};
      e.rhs = {single(0.0, Hl(0))};
      add(e);
    }
    {
      const double qw = d3 ? 4.0 / 3.0 : 8.0 / 7.0;
      EstimateSpec e;
      e.family = "strichartz-wave-inhom";
      e.lhs_text = "L^inf H^l of int_0^t W(t-s)f(s)ds";
      e.rhs_text = std::string("L^") + (d3 ? "4/3" : "8/7") + " B^l_{4/3}(f)";
      e.inputs = {FlowKind::wave};
      e.trajectory_op = [](const std::vector<std::vector<SpectralField>>& in, double dt,
                           const DecompositionParams& p) {
        return std::vector<std::vector<SpectralField>>{
            duhamel_cumulative(Propagator::wave, in[0], dt, p.alpha)};
      };
      e.lhs = {tf(kInf, Hl(1))};
      e.rhs = {single(qw, Bl(4.0 / 3.0, 0))};
      add(e);
    }
    for (const bool alpha_low : {false, true}) {
      EstimateSpec e;
      e.family = alpha_low ? "quadratic-alpha-low" : "quadratic-low-high";
      e.lhs_text = "L^" + q1s + " B^s_{4/3} (Nu)_" + (alpha_low ? "aL" : "LH+HH");
      e.rhs_text = std::string("T^") + (d3 ? "1/4" : "1/2") + (alpha_low ? " C(beta)" : "") +
                   " L^inf H^l(N) L^" + qs + " B^s_4(u)";
      e.t_power = d3 ? R(1, 4) : R(1, 2);
      e.beta_factor = alpha_low ? BetaFactor::constant : BetaFactor::none;
      e.inputs = {FlowKind::wave, FlowKind::schrodinger};
      if (alpha_low)
        e.point_op = [](std::span<const SpectralField> x, const DecompositionParams& p) {
          return std::vector<SpectralField>{paraproduct(x[0], x[1], RegionTag::alphaL, p)};
        };
      else
        e.point_op = [](std::span<const SpectralField> x, const DecompositionParams& p) {
          return std::vector<SpectralField>{
              paraproduct(x[0], x[1], {RegionTag::LH, RegionTag::HH}, p)};
        };
      e.lhs = single(q1, Bs(4.0 / 3.0, 2));
      e.rhs = {single(kInf, Hl(0)), single(qS, Bs(4.0, 1))};
      add(e);
    }
    for (const bool alpha_low : {false, true}) {
      const double ql = d3 ? 4.0 / 3.0 : 8.0 / 7.0;
      EstimateSpec e;
      e.family = alpha_low ? "quadratic-d-alpha" : "quadratic-d-high-high";
      e.lhs_text = std::string("L^") + (d3 ? "4/3" : "8/7") + " B^l_{4/3} D(uv)_" +
                   (alpha_low ? "aL+La" : "HH");
      e.rhs_text = std::string("T^") + (d3 ? "3/8" : "5/8") + (alpha_low ? " C(beta)" : "") +
                   " L^inf H^s(u) L^" + qs + " B^s_4(v)";
      e.t_power = d3 ? R(3, 8) : R(5, 8);
      e.beta_factor = alpha_low ? BetaFactor::constant : BetaFactor::none;
      e.inputs = {FlowKind::schrodinger, FlowKind::schrodinger};
      if (alpha_low)
        e.point_op = [](std::span<const SpectralField> x, const DecompositionParams& p) {
          return std::vector<SpectralField>{
              D(paraproduct(x[0], x[1], {RegionTag::alphaL, RegionTag::Lalpha}, p))};
        };
      else
        e.point_op = [](std::span<const SpectralField> x, const DecompositionParams& p) {
          return std::vector<SpectralField>{D(paraproduct(x[0], x[1], RegionTag::HH, p))};
        };
      e.lhs = single(ql, Bl(4.0 / 3.0, 2));
      e.rhs = {single(kInf, Hs(0)), single(qS, Bs(4.0, 1))};
      add(e);
    }
    const auto omega_op = [](std::span<const SpectralField> x, const DecompositionParams& p) {
      return std::vector<SpectralField>{omega(x[0], x[1], p)};
    };
    {
      EstimateSpec e;
      e.family = "boundary-energy";
      e.lhs_text = "L^inf H^s Omega(N,u)";
      e.rhs_text = "2^{-beta theta1} L^inf H^l(N) L^inf H^s(u)";
      e.beta_factor = BetaFactor::decay;
      e.inputs = {FlowKind::wave, FlowKind::schrodinger};
      e.point_op = omega_op;
      e.lhs = single(kInf, Hs(2));
      e.rhs = {single(kInf, Hl(0)), single(kInf, Hs(1))};
      add(e);
    }
    {
      EstimateSpec e;
      e.family = "boundary-strichartz";
      e.lhs_text = "L^" + qs + " B^s_4 Omega(N,u)";
      e.rhs_text = "2^{-beta theta2} L^inf H^l(N) L^" + qs + " B^s_4(u)";
      e.beta_factor = BetaFactor::decay;
      e.inputs = {FlowKind::wave, FlowKind::schrodinger};
      e.point_op = omega_op;
      e.lhs = single(qS, Bs(4.0, 2));
      e.rhs = {single(kInf, Hl(0)), single(qS, Bs(4.0, 1))};
      add(e);
    }
    {
      EstimateSpec e;
      e.family = "boundary-wave";
      e.lhs_text = "L^inf H^l D Omega~(u,v)";
      e.rhs_text = "2^{-beta theta3} L^inf H^s(u) L^inf H^s(v)";
      e.beta_factor = BetaFactor::decay;
      e.inputs = {FlowKind::schrodinger, FlowKind::schrodinger};
      e.point_op = [](std::span<const SpectralField> x, const DecompositionParams& p) {
        return std::vector<SpectralField>{D(omega_tilde(x[0], x[1], p))};
      };
      e.lhs = single(kInf, Hl(2));
      e.rhs = {single(kInf, Hs(0)), single(kInf, Hs(1))};
      add(e);
    }
    {
      EstimateSpec e;
      e.family = "cubic-omega-mnu";
      e.lhs_text = "L^" + q1s + " B^s_{4/3} Omega(M,Nu)";
      e.rhs_text = std::string("T^") + (d3 ? "1/4" : "1/2") + " L^inf H^l(M) L^inf H^l(N) L^" + qs +
                   " B^s_4(u)";
      e.t_power = d3 ? R(1, 4) : R(1, 2);
      e.inputs = {FlowKind::wave, FlowKind::wave, FlowKind::schrodinger};
      e.point_op = [](std::span<const SpectralField> x, const DecompositionParams& p) {
        return std::vector<SpectralField>{omega(x[0], product(x[1], x[2]), p)};
      };
      e.lhs = single(q1, Bs(4.0 / 3.0, 3));
      e.rhs = {single(kInf, Hl(0)), single(kInf, Hl(1)), single(qS, Bs(4.0, 2))};
      add(e);
    }
    {
      EstimateSpec e;
      e.family = "cubic-omega-duv";
      e.t_power = R(1, 4);
      e.inputs = {FlowKind::schrodinger, FlowKind::schrodinger, FlowKind::schrodinger};
      e.point_op = [](std::span<const SpectralField> x, const DecompositionParams& p) {
        return std::vector<SpectralField>{omega(D(product(x[0], x[1])), x[2], p)};
      };
      if (d3) {
        e.lhs_text = "L^8/5 B^s_{4/3} Omega(D(uv),w)";
        e.rhs_text = "T^1/4 || |u|_{H^s}|v|_{B^s_4} + |u|_{B^s_4}|v|_{H^s} ||_{L^8/3} L^inf H^s(w)";
        e.lhs = single(8.0 / 5.0, Bs(4.0 / 3.0, 3));
        e.rhs = {{TimeFactor{8.0 / 3.0, {{Hs(0), Bs(4.0, 1)}, {Bs(4.0, 0), Hs(1)}}}},
                 single(kInf, Hs(2))};
      } else {
        e.lhs_text = "L^4/3 B^s_{4/3} Omega(D(uv),w)";
        e.rhs_text = "T^1/4 L^4 B^s_4(u) L^4 B^s_4(v) L^inf H^s(w)";
        e.lhs = single(4.0 / 3.0, Bs(4.0 / 3.0, 3));
        e.rhs = {single(4.0, Bs(4.0, 0)), single(4.0, Bs(4.0, 1)), single(kInf, Hs(2))};
      }
      add(e);
    }
    {
      EstimateSpec e;
      e.family = "cubic-omega-tilde";
      e.lhs_text = "L^1 H^l D Omega~(Nu,v) + L^1 H^l D Omega~(v,Nu)";
      e.rhs_text = std::string("T^") + (d3 ? "1/4" : "1/2") + " L^inf H^l(N) L^" + qs +
                   " B^s_4(u) L^" + qs + " B^s_4(v)";
      e.t_power = d3 ? R(1, 4) : R(1, 2);
      e.inputs = {FlowKind::wave, FlowKind::schrodinger, FlowKind::schrodinger};
      e.point_op = [](std::span<const SpectralField> x, const DecompositionParams& p) {
        const SpectralField Nu = product(x[0], x[1]);
        return std::vector<SpectralField>{D(omega_tilde(Nu, x[2], p)), D(omega_tilde(x[2], Nu, p))};
      };
      e.lhs = {tf(1.0, Hl(3)), tf(1.0, Hl(4))};
      e.rhs = {single(kInf, Hl(0)), single(qS, Bs(4.0, 1)), single(qS, Bs(4.0, 2))};
      add(e);
    }
  }
  return out;
}

}  // namespace

const std::vector<EstimateSpec>& estimate_registry() {
  static const std::vector<EstimateSpec> registry = build_registry();
  return registry;
}

const EstimateSpec& find_estimate(const std::string& name) {
  for (const auto& e : estimate_registry())
    if (e.name == name) return e;
  throw InvalidArgument("unknown estimate '" + name + "'");
}

std::vector<std::string> estimate_families() { return family_names(); }

// ---------------------------------------------------------------------------
// evaluation

namespace {

std::uint64_t splitmix(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

using NormKey = std::tuple<int, int, double>;  // slot, kind, p

NormKey key_of(const SpatialNorm& n) { return {n.slot, static_cast<int>(n.kind), n.p}; }

/// Per-node data from which every spatial norm of the spec can be evaluated
/// at any regularity.
struct NormData {
  std::vector<PowerSpectrum> spectra;   // sobolev
  std::vector<ShellProfile> profiles;   // besov
};

struct PreparedSample {
  std::uint64_t seed = 0;
  bool free_flow = false;
  std::size_t nodes = 0;  // 1 for time-constant samples
  std::map<NormKey, NormData> norms;
};

void collect(const NormSum& sum, std::map<NormKey, SpatialNorm>& keys) {
  for (const auto& f : sum)
    for (const auto& term : f.terms)
      for (const auto& n : term) keys.emplace(key_of(n), n);
}

std::map<NormKey, SpatialNorm> norm_keys(const EstimateSpec& spec) {
  std::map<NormKey, SpatialNorm> keys;
  collect(spec.lhs, keys);
  for (const auto& r : spec.rhs) collect(r, keys);
  return keys;
}

/// slots[slot][node]; inputs first, then operator outputs.
using SlotData = std::vector<std::vector<SpectralField>>;

void apply_operator(const EstimateSpec& spec, SlotData& slots, double dt, const DecompositionParams& p) {
  const std::size_t nodes = slots.front().size();
  if (spec.trajectory_op) {
    auto outs = spec.trajectory_op(slots, dt, p);
    for (auto& o : outs) slots.push_back(std::move(o));
  } else if (spec.point_op) {
    const std::size_t inputs = slots.size();
    std::vector<std::vector<SpectralField>> outs;
    for (std::size_t j = 0; j < nodes; ++j) {
      std::vector<SpectralField> x;
      x.reserve(inputs);
      for (std::size_t a = 0; a < inputs; ++a) x.push_back(slots[a][j]);
      auto y = spec.point_op(x, p);
      if (outs.empty()) outs.resize(y.size());
      for (std::size_t b = 0; b < y.size(); ++b) outs[b].push_back(std::move(y[b]));
    }
    for (auto& o : outs) slots.push_back(std::move(o));
  }
}

PreparedSample prepare(const EstimateSpec& spec, const SlotData& inputs, bool free_flow, std::uint64_t seed,
                       std::size_t nodes, double dt, const DecompositionParams& params,
                       const std::map<NormKey, SpatialNorm>& keys) {
  SlotData slots = inputs;
  if (spec.trajectory_op && slots.front().size() == 1)
    for (auto& s : slots) s.assign(nodes, s.front());
  apply_operator(spec, slots, dt, params);
  PreparedSample out;
  out.seed = seed;
  out.free_flow = free_flow;
  out.nodes = slots.front().size();
  for (const auto& [key, n] : keys) {
    if (n.slot < 0 || static_cast<std::size_t>(n.slot) >= slots.size())
      throw InvalidArgument("estimate " + spec.name + " refers to missing slot " + std::to_string(n.slot));
    NormData data;
    for (const auto& f : slots[n.slot]) {
      if (n.kind == SpatialNorm::Kind::sobolev)
        data.spectra.push_back(power_spectrum(f));
      else
        data.profiles.push_back(shell_profile(f, n.p));
    }
    out.norms.emplace(key, std::move(data));
  }
  return out;
}

double spatial_value(const PreparedSample& sample, const SpatialNorm& n, std::size_t node, double s,
                     double l) {
  const NormData& data = sample.norms.at(key_of(n));
  const double reg = n.reg == Regularity::s ? s : l;
  if (n.kind == SpatialNorm::Kind::sobolev) return sobolev_from_spectrum(data.spectra[node], reg);
  return besov_from_profile(data.profiles[node], reg, 2.0, false);
}

double evaluate_sum(const NormSum& sum, const PreparedSample& sample, std::size_t nodes, double dt, double s,
                    double l) {
  double total = 0.0;
  for (const auto& f : sum) {
    std::vector<double> values(nodes);
    for (std::size_t j = 0; j < nodes; ++j) {
      const std::size_t node = sample.nodes == 1 ? 0 : j;
      double v = 0.0;
      for (const auto& term : f.terms) {
        double prod = 1.0;
        for (const auto& n : term) prod *= spatial_value(sample, n, node, s, l);
        v += prod;
      }
      values[j] = v;
    }
    total += f.q_t == 0.0 ? values.front() : time_norm(values, dt, f.q_t);
  }
  return total;
}

SpectralField flow(FlowKind kind, const SpectralField& f, double t, double alpha) {
  return kind == FlowKind::schrodinger ? schrodinger_propagate(f, t) : wave_propagate(f, t, alpha);
}

/// Random inputs of sample i. Every fourth sample (per options) is a free flow.
SlotData sample_inputs(const EstimateSpec& spec, const GridPtr& grid, const EstimateOptions& o, std::size_t i,
                       bool free_flow, double dt, std::uint64_t seed) {
  static constexpr double kDecays[] = {0.5, 1.25, 2.0, 2.75, 3.5};
  const int cutoff = o.cutoff > 0 ? o.cutoff : std::max(1, grid->dealias_band() / 2 - 1);
  SlotData slots;
  for (std::size_t a = 0; a < spec.inputs.size(); ++a) {
    FieldProfile prof;
    prof.kind = ProfileKind::sobolev_random;
    prof.decay = kDecays[(i + a) % 5];
    prof.cutoff = cutoff;
    prof.seed = splitmix(seed * 16 + a);
    SpectralField f = profile_field(grid, prof);
    const double norm = f.l2_norm();
    if (norm > 0.0) f *= 1.0 / norm;
    std::vector<SpectralField> nodes;
    if (free_flow) {
      for (std::size_t j = 0; j < o.nodes; ++j)
        nodes.push_back(flow(spec.inputs[a], f, static_cast<double>(j) * dt, o.params.alpha));
    } else {
      nodes.push_back(std::move(f));
    }
    slots.push_back(std::move(nodes));
  }
  return slots;
}

void check_points(const EstimateSpec& spec, std::span<const RegularityPoint> points, const GridPtr& grid,
                  bool exploratory) {
  for (const auto& pt : points) {
    if (pt.dim != spec.dim)
      throw InvalidArgument("estimate " + spec.name + " needs d = " + std::to_string(spec.dim) +
                            ", point has d = " + std::to_string(pt.dim));
    if (!exploratory) {
      if (const auto v = region_violation(pt, spec.family))
        throw InvalidArgument("(s,l) = (" + pt.s.str() + ", " + pt.l.str() + ") is outside the region of " +
                              spec.name + ": " + *v + " fails");
    }
  }
  if (grid->dim() != spec.dim)
    throw InvalidArgument("estimate " + spec.name + " needs a d = " + std::to_string(spec.dim) + " grid");
}

double ratio_of(double lhs, double rhs, const std::string& spec) {
  if (!std::isfinite(lhs) || !std::isfinite(rhs))
    throw NumericalGuard("estimate " + spec + ": non-finite norm (lhs " + fmt(lhs) + ", rhs " + fmt(rhs) + ")");
  if (lhs == 0.0) return 0.0;
  if (rhs == 0.0) throw NumericalGuard("estimate " + spec + ": positive LHS with vanishing RHS");
  return lhs / rhs;
}

struct Evaluated {
  double lhs, rhs;
};

Evaluated evaluate(const EstimateSpec& spec, const PreparedSample& sample, std::size_t nodes, double T,
                   const RegularityPoint& pt) {
  const double dt = T / static_cast<double>(nodes - 1);
  const double s = pt.s.to_double(), l = pt.l.to_double();
  const double lhs = evaluate_sum(spec.lhs, sample, nodes, dt, s, l);
  double rhs = std::pow(T, spec.t_power.to_double());
  for (const auto& factor : spec.rhs) rhs *= evaluate_sum(factor, sample, nodes, dt, s, l);
  return {lhs, rhs};
}

}  // namespace

std::vector<EstimateReport> estimate_ratio(const EstimateSpec& spec, std::span<const RegularityPoint> points,
                                           const GridPtr& grid, const EstimateOptions& options) {
  check_points(spec, points, grid, options.exploratory);
  options.params.validate();
  if (!(options.T > 0.0)) throw InvalidArgument("estimate horizon T must be positive");
  if (options.nodes < 3) throw InvalidArgument("estimates need at least three time nodes");
  const double dt = options.T / static_cast<double>(options.nodes - 1);
  const auto keys = norm_keys(spec);

  std::vector<PreparedSample> prepared(options.samples);
  parallel_for(options.samples, [&](std::size_t i) {
    const std::uint64_t seed = options.seed + i;
    const bool free_flow =
        spec.always_free_flow ||
        (!options.force_time_constant && options.free_flow_every > 0 &&
         i % options.free_flow_every == options.free_flow_every - 1);
    const SlotData inputs = sample_inputs(spec, grid, options, i, free_flow, dt, seed);
    prepared[i] = prepare(spec, inputs, free_flow, seed, options.nodes, dt, options.params, keys);
  });

  std::vector<EstimateReport> reports;
  for (const auto& pt : points) {
    EstimateReport rep;
    rep.spec = spec.name;
    rep.point = pt;
    rep.T = options.T;
    rep.beta = options.params.beta;
    rep.exploratory = !region_membership(pt, spec.family);
    if (spec.beta_factor == BetaFactor::constant)
      rep.proof_constant = std::exp2(2.0 * options.params.beta * pt.s.to_double());
    for (const auto& sample : prepared) {
      const Evaluated v = evaluate(spec, sample, options.nodes, options.T, pt);
      SampleRatio r{sample.seed, sample.free_flow, v.lhs, v.rhs, ratio_of(v.lhs, v.rhs, spec.name)};
      rep.sup_ratio = std::max(rep.sup_ratio, r.ratio);
      rep.samples.push_back(r);
    }
    reports.push_back(std::move(rep));
  }
  return reports;
}

void write_ratio_csv_header(std::ostream& out) { out << "spec,s,l,d,T,seed,lhs,rhs,ratio\n"; }

void write_ratio_csv(const EstimateReport& report, std::ostream& out) {
  for (const auto& r : report.samples)
    out << report.spec << ',' << report.point.s.str() << ',' << report.point.l.str() << ','
        << report.point.dim << ',' << fmt(report.T) << ',' << r.seed << ',' << fmt(r.lhs) << ','
        << fmt(r.rhs) << ',' << fmt(r.ratio) << '\n';
}

// ---------------------------------------------------------------------------
// dyadic scans

double fit_log2_slope(std::span<const double> x, std::span<const double> values) {
  if (x.size() != values.size() || x.size() < 2)
    throw InvalidArgument("slope fit needs at least two matching samples");
  double mx = 0.0, my = 0.0;
  std::vector<double> y(values.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(values[i] > 0.0) || !std::isfinite(values[i]))
      throw NumericalGuard("slope fit: ratio " + fmt(values[i]) + " is not positive and finite");
    y[i] = std::log2(values[i]);
    mx += x[i];
    my += y[i];
  }
  mx /= static_cast<double>(x.size());
  my /= static_cast<double>(x.size());
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
  }
  return sxy / sxx;
}

namespace {

std::vector<PreparedSample> dyadic_family(const EstimateSpec& spec, const GridPtr& grid,
                                          const ScanOptions& options) {
  if (grid->dim() != spec.dim) throw InvalidArgument("scan grid dimension does not match " + spec.name);
  if (options.j_max <= options.j_min) throw InvalidArgument("scan needs j_max > j_min");
  const auto keys = norm_keys(spec);
  const std::size_t count = static_cast<std::size_t>(options.j_max - options.j_min + 1);
  std::vector<PreparedSample> out(count);
  for (std::size_t idx = 0; idx < count; ++idx) {
    const int j = options.j_min + static_cast<int>(idx);
    SlotData inputs;
    for (std::size_t a = 0; a < spec.inputs.size(); ++a) {
      SpectralField f(grid);
      if (static_cast<int>(a) == spec.scan_high_slot) {
        FieldProfile prof;
        prof.kind = ProfileKind::dyadic_kernel;
        prof.shell = j;
        f = profile_field(grid, prof);
      } else {
        f[0] = 1.0;
      }
      inputs.push_back({std::move(f)});
    }
    out[idx] = prepare(spec, inputs, false, static_cast<std::uint64_t>(j), 3, options.T / 2, options.params, keys);
  }
  return out;
}

ShellScan scan_point(const EstimateSpec& spec, const std::vector<PreparedSample>& family,
                     const RegularityPoint& pt, const ScanOptions& options) {
  ShellScan scan;
  std::vector<double> x;
  for (std::size_t idx = 0; idx < family.size(); ++idx) {
    const int j = options.j_min + static_cast<int>(idx);
    const Evaluated v = evaluate(spec, family[idx], 3, options.T, pt);
    scan.shells.push_back(j);
    scan.ratios.push_back(ratio_of(v.lhs, v.rhs, spec.name));
    x.push_back(j);
  }
  scan.slope = fit_log2_slope(x, scan.ratios);
  return scan;
}

}  // namespace

ShellScan shell_scan(const EstimateSpec& spec, const RegularityPoint& point, const GridPtr& grid,
                     const ScanOptions& options) {
  return scan_point(spec, dyadic_family(spec, grid, options), point, options);
}

std::vector<ScanRow> scan_region(const EstimateSpec& spec, const GridPtr& grid, const ScanOptions& options) {
  if (!(options.step > R(0))) throw InvalidArgument("scan step must be positive");
  if (options.s_max < options.s_min || options.l_max < options.l_min)
    throw InvalidArgument("scan ranges must be nonempty");
  const auto family = dyadic_family(spec, grid, options);
  std::vector<ScanRow> rows;
  for (Rational s = options.s_min; s <= options.s_max; s = s + options.step)
    for (Rational l = options.l_min; l <= options.l_max; l = l + options.step) {
      const RegularityPoint pt{s, l, spec.dim};
      rows.push_back({s, l, scan_point(spec, family, pt, options).slope, region_membership(pt, spec.family)});
    }
  return rows;
}

void write_scan_csv(const std::vector<ScanRow>& rows, std::ostream& out) {
  out << "s,l,exponent,inside\n";
  for (const auto& r : rows)
    out << r.s.str() << ',' << r.l.str() << ',' << fmt(r.exponent) << ',' << (r.inside ? 1 : 0) << '\n';
}

// ---------------------------------------------------------------------------
// Strichartz

StrichartzReport strichartz_check(FlowKind kind, const RegularityPoint& pt, const Rational& inv_q,
                                  const Rational& inv_r, const GridPtr& grid, const EstimateOptions& options) {
  if (const auto v = admissibility_violation(kind, pt.dim, inv_q, inv_r))
    throw InvalidArgument(std::string(kind == FlowKind::schrodinger ? "Schrodinger" : "wave") +
                          "-admissible condition violated: " + *v);
  const auto inverse = [](const Rational& inv) { return inv == R(0) ? kInf : 1.0 / inv.to_double(); };
  const double q = inverse(inv_q), r = inverse(inv_r);
  const double q_dual = inverse(R(1) - inv_q), r_dual = inverse(R(1) - inv_r);
  const bool schr = kind == FlowKind::schrodinger;
  const auto space = [schr](double p, int slot) {
    return schr ? Bs(p, slot) : Bl(p, slot);
  };
  const auto energy = [schr](int slot) { return schr ? Hs(slot) : Hl(slot); };

  EstimateSpec hom;
  hom.name = hom.family = schr ? "strichartz-schrodinger-hom" : "strichartz-wave-hom";
  hom.dim = pt.dim;
  hom.inputs = {kind};
  hom.always_free_flow = true;
  hom.lhs = single(q, space(r, 0));
  hom.rhs = {single(0.0, energy(0))};

  EstimateSpec inhom;
  inhom.name = inhom.family = schr ? "strichartz-schrodinger-inhom" : "strichartz-wave-inhom";
  inhom.dim = pt.dim;
  inhom.inputs = {kind};
  inhom.trajectory_op = [schr](const std::vector<std::vector<SpectralField>>& in, double dt,
                               const DecompositionParams& p) {
    return std::vector<std::vector<SpectralField>>{
        duhamel_cumulative(schr ? Propagator::schrodinger : Propagator::wave, in[0], dt, p.alpha)};
  };
  inhom.lhs = {tf(kInf, energy(1))};
  if (schr) inhom.lhs.push_back(tf(q, space(r, 1)));
  inhom.rhs = {single(q_dual, space(r_dual, 0))};

  const std::vector<RegularityPoint> points{pt};
  StrichartzReport out;
  out.kind = kind;
  out.inv_q = inv_q;
  out.inv_r = inv_r;
  EstimateOptions o = options;
  o.exploratory = true;
  out.sup_homogeneous = estimate_ratio(hom, points, grid, o).front().sup_ratio;
  out.sup_inhomogeneous = estimate_ratio(inhom, points, grid, o).front().sup_ratio;
  out.samples = options.samples;
  return out;
}

}  // namespace zakharov

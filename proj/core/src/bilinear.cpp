#include "zakharov/bilinear.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>
#include <sstream>

#include "zakharov/errors.hpp"
#include "zakharov/littlewood_paley.hpp"
#include "zakharov/parallel.hpp"

namespace zakharov {

namespace {

bool modes_less(const Modes& a, const Modes& b) { return a < b; }

Modes add(const Modes& a, const Modes& b) { return {a[0] + b[0], a[1] + b[1], a[2] + b[2]}; }
Modes sub(const Modes& a, const Modes& b) { return {a[0] - b[0], a[1] - b[1], a[2] - b[2]}; }

bool on_lattice(const Modes& m, const TorusGrid& grid) {
  const int half = grid.points() / 2;
  for (int a = 0; a < grid.dim(); ++a)
    if (m[a] < -half || m[a] >= half) return false;
  return true;
}

std::string format_modes(const Modes& m, int dim, char sep) {
  std::ostringstream os;
  os << '(' << m[0];
  for (int a = 1; a < dim; ++a) os << sep << m[a];
  os << ')';
  return os.str();
}

std::array<double, 3> scaled(const Modes& m, double unit) {
  return {unit * m[0], unit * m[1], unit * m[2]};
}

double norm_sq(const std::array<double, 3>& v) { return v[0] * v[0] + v[1] * v[1] + v[2] * v[2]; }

// Weight of the high/low split with the high factor at `high` and the low
// factor at `low`: sum over shells k > beta of piece_k(high) * cum_{k-K}(low).
double split_weight(const ShellTable& table, std::size_t high, std::size_t low,
                    const DecompositionParams& params) {
  double w = 0.0;
  for (const auto& e : table.entries(high))
    if (e.k > params.beta) w += e.weight * table.cumulative(low, e.k - params.K);
  return w;
}

// Lattice points that can carry the low factor of a high/low split.
std::vector<std::size_t> low_candidates(const TorusGrid& grid, const ShellTable& table,
                                        const DecompositionParams& params,
                                        const SpectralField* nonzero_in) {
  const double radius = 1.6 * std::ldexp(1.0, table.kmax() - params.K);
  const auto kabs = grid.wavenumber_abs();
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (kabs[i] >= radius || !grid.in_band(i)) continue;
    if (nonzero_in && (*nonzero_in)[i] == cplx(0.0)) continue;
    out.push_back(i);
  }
  std::sort(out.begin(), out.end(), [&grid](std::size_t x, std::size_t y) {
    return modes_less(grid.modes(x), grid.modes(y));
  });
  return out;
}

std::vector<std::size_t> band_indices(const TorusGrid& grid) {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < grid.size(); ++i)
    if (grid.in_band(i)) out.push_back(i);
  return out;
}

[[noreturn]] void resonance_error(const TorusGrid& grid, const Modes& xi, const Modes& eta,
                                  double denom) {
  std::ostringstream os;
  os << "near-resonant denominator " << denom << " at xi = " << format_modes(xi, grid.dim(), ',')
     << ", eta = " << format_modes(eta, grid.dim(), ',') << " (lattice indices)";
  throw NumericalGuard(os.str());
}

// One high/low pass of a normal-form operator. `first` sits at xi - eta and
// `second` at eta; `high_is_first` selects XL (true) or LX (false).
void accumulate_pass(const SpectralField& first, const SpectralField& second, bool high_is_first,
                     BilinearOperator which, const DecompositionParams& params, double prefactor,
                     SpectralField& out) {
  const auto& grid = first.grid();
  const auto table = shell_table(grid);
  const SpectralField& low_field = high_is_first ? second : first;
  const SpectralField& high_field = high_is_first ? first : second;
  const auto lows = low_candidates(grid, *table, params, &low_field);
  if (lows.empty()) return;
  std::vector<Modes> low_modes(lows.size());
  for (std::size_t j = 0; j < lows.size(); ++j) low_modes[j] = grid.modes(lows[j]);
  const auto band = band_indices(grid);
  const double unit = grid.wavenumber_unit();

  std::vector<std::size_t> highs;
  for (std::size_t i = 0; i < grid.size(); ++i)
    if (high_field[i] != cplx(0.0)) highs.push_back(i);
  if (highs.size() < band.size()) {
    // Sparse high factor: reach each output mode from the nonzero high
    // coefficients. Terms arrive in the same order as in the gather below.
    std::vector<Modes> high_modes(highs.size());
    for (std::size_t h = 0; h < highs.size(); ++h) high_modes[h] = grid.modes(highs[h]);
    std::vector<cplx> acc(grid.size());
    bool resonant = false;
    std::size_t bad_xi = 0, bad_j = 0;
    Modes bad_b{};
    double bad_denom = 0.0;
    for (std::size_t j = 0; j < lows.size(); ++j) {
      const cplx low_coeff = low_field[lows[j]];
      for (std::size_t h = 0; h < highs.size(); ++h) {
        const Modes xi = add(high_modes[h], low_modes[j]);
        if (!grid.in_band(xi)) continue;
        const double w = split_weight(*table, highs[h], lows[j], params);
        if (w == 0.0) continue;
        const Modes a = high_is_first ? high_modes[h] : low_modes[j];
        const Modes b = high_is_first ? low_modes[j] : high_modes[h];
        const double denom = denominator(which, scaled(a, unit), scaled(b, unit), params.alpha);
        const std::size_t xi_flat = grid.flat_index(xi);
        if (near_resonant(denom, norm_sq(scaled(xi, unit)))) {
          if (!resonant || xi_flat < bad_xi || (xi_flat == bad_xi && j < bad_j)) {
            resonant = true;
            bad_xi = xi_flat;
            bad_j = j;
            bad_b = b;
            bad_denom = denom;
          }
          continue;
        }
        acc[xi_flat] += (w / denom) * high_field[highs[h]] * low_coeff;
      }
    }
    if (resonant) resonance_error(grid, grid.modes(bad_xi), bad_b, bad_denom);
    for (const std::size_t i : band) out[i] += prefactor * acc[i];
    return;
  }

  std::vector<cplx> partial(band.size());
  parallel_for(band.size(), [&](std::size_t idx) {
    const Modes xi = grid.modes(band[idx]);
    const auto xi_vec = scaled(xi, unit);
    const double xi_sq = norm_sq(xi_vec);
    cplx acc = 0.0;
    for (std::size_t j = 0; j < lows.size(); ++j) {
      const Modes hi = sub(xi, low_modes[j]);
      if (!on_lattice(hi, grid)) continue;
      const std::size_t hi_flat = grid.flat_index(hi);
      const cplx hi_coeff = high_field[hi_flat];
      if (hi_coeff == cplx(0.0)) continue;
      const double w = split_weight(*table, hi_flat, lows[j], params);
      if (w == 0.0) continue;
      const Modes a = high_is_first ? hi : low_modes[j];
      const Modes b = high_is_first ? low_modes[j] : hi;
      const double denom = denominator(which, scaled(a, unit), scaled(b, unit), params.alpha);
      if (near_resonant(denom, xi_sq)) resonance_error(grid, xi, b, denom);
      acc += (w / denom) * hi_coeff * low_field[lows[j]];
    }
    partial[idx] = acc;
  });
  for (std::size_t idx = 0; idx < band.size(); ++idx) out[band[idx]] += prefactor * partial[idx];
}

template <class Pred>
SpectralField region_sum(const SpectralField& f, const SpectralField& g, Pred region) {
  const auto table = shell_table(f.grid());
  const auto label = [floor = table->kmin()](int k) { return k == floor ? kZeroModeShell : k; };
  const auto pred = [&](int k1, int k2) { return region(label(k1), label(k2)); };
  SpectralField out(f.grid_ptr());
  for (int k1 = table->kmin(); k1 <= table->kmax(); ++k1) {
    SpectralField fk(f.grid_ptr()), gk(g.grid_ptr());
    bool f_any = false, g_any = false;
    for (std::size_t i = 0; i < f.size(); ++i) {
      if (f[i] != cplx(0.0)) {
        const double w = table->piece(i, k1);
        if (w != 0.0) {
          fk[i] = w * f[i];
          f_any = true;
        }
      }
      if (g[i] != cplx(0.0)) {
        double w = 0.0;
        for (const auto& e : table->entries(i))
          if (pred(k1, static_cast<int>(e.k))) w += e.weight;
        if (w != 0.0) {
          gk[i] = w * g[i];
          g_any = true;
        }
      }
    }
    if (f_any && g_any) out += product(fk, gk);
  }
  return out;
}

}  // namespace

double DecompositionParams::default_beta(double alpha, int K) {
  return std::ceil(K + std::abs(std::log2(alpha)));
}

DecompositionParams DecompositionParams::make(double alpha, int K, std::optional<double> beta) {
  if (!(alpha > 0.0) || !std::isfinite(alpha))
    throw InvalidArgument("ion sound speed alpha must be positive");
  DecompositionParams p{K, beta.value_or(default_beta(alpha, K)), alpha};
  p.validate();
  return p;
}

void DecompositionParams::validate() const {
  if (K < 5) throw InvalidArgument("separation parameter K must be at least 5");
  if (!(alpha > 0.0) || !std::isfinite(alpha))
    throw InvalidArgument("ion sound speed alpha must be positive");
  const double bound = K + std::abs(std::log2(alpha));
  if (!(beta >= bound)) {
    std::ostringstream os;
    os.precision(17);
    os << "beta = " << beta << " violates beta >= K + |log2 alpha| = " << bound;
    throw InvalidArgument(os.str());
  }
}

std::string to_string(RegionTag tag) {
  switch (tag) {
    case RegionTag::HH: return "HH";
    case RegionTag::LH: return "LH";
    case RegionTag::HL: return "HL";
    case RegionTag::alphaL: return "aL";
    case RegionTag::XL: return "XL";
    case RegionTag::Lalpha: return "La";
    case RegionTag::LX: return "LX";
  }
  return "?";
}

RegionTag region_from_string(const std::string& name) {
  for (auto t : {RegionTag::HH, RegionTag::LH, RegionTag::HL, RegionTag::alphaL, RegionTag::XL,
                 RegionTag::Lalpha, RegionTag::LX})
    if (to_string(t) == name) return t;
  throw InvalidArgument("unknown region tag '" + name + "'");
}

bool region_member(int k1, int k2, RegionTag tag, const DecompositionParams& p) {
  switch (tag) {
    case RegionTag::HH: return std::abs(k1 - k2) <= p.K - 1;
    case RegionTag::LH: return k1 <= k2 - p.K;
    case RegionTag::HL: return k2 <= k1 - p.K;
    case RegionTag::alphaL: return k2 <= k1 - p.K && k1 <= p.beta;
    case RegionTag::XL: return k2 <= k1 - p.K && k1 > p.beta;
    case RegionTag::Lalpha: return region_member(k2, k1, RegionTag::alphaL, p);
    case RegionTag::LX: return region_member(k2, k1, RegionTag::XL, p);
  }
  return false;
}

SpectralField paraproduct(const SpectralField& f, const SpectralField& g, RegionTag tag,
                          const DecompositionParams& params) {
  require_same_grid(f, g, "paraproduct");
  if (tag == RegionTag::HL)
    return paraproduct(f, g, RegionTag::alphaL, params) + paraproduct(f, g, RegionTag::XL, params);
  return region_sum(f, g, [&](int k1, int k2) { return region_member(k1, k2, tag, params); });
}

SpectralField paraproduct(const SpectralField& f, const SpectralField& g,
                          std::initializer_list<RegionTag> tags, const DecompositionParams& params) {
  SpectralField out(f.grid_ptr());
  for (auto t : tags) out += paraproduct(f, g, t, params);
  return out;
}

double denominator(BilinearOperator which, const std::array<double, 3>& a,
                   const std::array<double, 3>& b, double alpha) {
  const std::array<double, 3> xi{a[0] + b[0], a[1] + b[1], a[2] + b[2]};
  if (which == BilinearOperator::omega)
    return -norm_sq(xi) + alpha * std::sqrt(norm_sq(a)) + norm_sq(b);
  return norm_sq(a) - norm_sq(b) - alpha * std::sqrt(norm_sq(xi));
}

bool near_resonant(double denom, double xi_sq) {
  return std::abs(denom) < 1e-9 * std::max(xi_sq, 1.0);
}

double pair_weight(BilinearOperator which, std::size_t a, std::size_t b, const TorusGrid& grid,
                   const DecompositionParams& params) {
  const auto table = shell_table(grid);
  double w = split_weight(*table, a, b, params);
  if (which == BilinearOperator::omega_tilde) w += split_weight(*table, b, a, params);
  return w;
}

SpectralField omega(const SpectralField& f, const SpectralField& g, const DecompositionParams& params) {
  require_same_grid(f, g, "omega");
  SpectralField out(f.grid_ptr());
  const double prefactor = 1.0 / std::sqrt(f.grid().volume());
  accumulate_pass(f, g, true, BilinearOperator::omega, params, prefactor, out);
  return out;
}

SpectralField omega_tilde(const SpectralField& f, const SpectralField& g,
                          const DecompositionParams& params) {
  require_same_grid(f, g, "omega_tilde");
  const SpectralField gbar = g.conj();
  SpectralField out(f.grid_ptr());
  const double prefactor = params.alpha / std::sqrt(f.grid().volume());
  accumulate_pass(f, gbar, true, BilinearOperator::omega_tilde, params, prefactor, out);
  accumulate_pass(f, gbar, false, BilinearOperator::omega_tilde, params, prefactor, out);
  return out;
}

DenominatorReport denominator_scan(const TorusGrid& grid, const DecompositionParams& params,
                                   BilinearOperator which) {
  params.validate();
  const auto table = shell_table(grid);
  const auto lows = low_candidates(grid, *table, params, nullptr);
  const auto band = band_indices(grid);
  const double unit = grid.wavenumber_unit();

  DenominatorReport report;
  report.which = which;
  report.global_min = std::numeric_limits<double>::infinity();
  std::vector<DenominatorShell> shells;
  for (int k = table->kmin(); k <= table->kmax(); ++k)
    shells.push_back({k, std::numeric_limits<double>::infinity(), {}, {}});

  const int passes = which == BilinearOperator::omega ? 1 : 2;
  for (int pass = 0; pass < passes; ++pass) {
    const bool high_is_first = pass == 0;
    for (std::size_t hi : band) {
      bool any_high = false;
      for (const auto& e : table->entries(hi)) any_high = any_high || e.k > params.beta;
      if (!any_high) continue;
      const Modes hm = grid.modes(hi);
      for (std::size_t lo : lows) {
        const Modes lm = grid.modes(lo);
        const Modes xi = add(hm, lm);
        if (!grid.in_band(xi)) continue;
        const Modes a = high_is_first ? hm : lm;
        const Modes b = high_is_first ? lm : hm;
        const auto xi_vec = scaled(xi, unit);
        const double d = denominator(which, scaled(a, unit), scaled(b, unit), params.alpha);
        bool counted = false;
        for (const auto& e : table->entries(hi)) {
          if (e.k <= params.beta || table->cumulative(lo, e.k - params.K) == 0.0) continue;
          counted = true;
          auto& s = shells[static_cast<std::size_t>(e.k - table->kmin())];
          if (std::abs(d) < s.min_abs) s = {e.k, std::abs(d), xi, b};
        }
        if (!counted) continue;
        ++report.pairs;
        if (std::abs(d) < report.global_min) {
          report.global_min = std::abs(d);
          report.global_xi = xi;
          report.global_eta = b;
        }
        if (near_resonant(d, norm_sq(xi_vec))) report.resonant = true;
      }
    }
  }
  for (const auto& s : shells)
    if (std::isfinite(s.min_abs)) report.shells.push_back(s);
  return report;
}

void write_denominator_csv(const DenominatorReport& report, std::ostream& out) {
  out << "shell,min_abs_denominator,argmin_xi,argmin_eta\n";
  char buf[64];
  for (const auto& s : report.shells) {
    std::snprintf(buf, sizeof buf, "%.17g", s.min_abs);
    out << s.shell << ',' << buf << ',' << s.argmin_xi[0] << ';' << s.argmin_xi[1] << ';'
        << s.argmin_xi[2] << ',' << s.argmin_eta[0] << ';' << s.argmin_eta[1] << ';'
        << s.argmin_eta[2] << '\n';
  }
}

}  // namespace zakharov

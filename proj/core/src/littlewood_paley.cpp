#include "zakharov/littlewood_paley.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <list>
#include <mutex>
#include <numbers>
#include <tuple>
#include <utility>
#include <vector>

#include "zakharov/errors.hpp"

namespace zakharov {

namespace {

double g_smooth(double t) { return t > 0.0 ? std::exp(-1.0 / t) : 0.0; }

double psi(double t) {
  if (t <= 0.0) return 0.0;
  if (t >= 1.0) return 1.0;
  const double a = g_smooth(t), b = g_smooth(1.0 - t);
  return a / (a + b);
}

double power_sum(std::span<const double> v, double q) {
  if (std::isinf(q)) {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::abs(x));
    return m;
  }
  double s = 0.0;
  for (double x : v) s += std::pow(std::abs(x), q);
  return std::pow(s, 1.0 / q);
}

void check_exponent(double p, const char* what) {
  if (!(p >= 1.0)) throw InvalidArgument(std::string(what) + " must lie in [1, inf]");
}

struct Nonzero {
  std::size_t flat;
  double kabs;
  cplx value;
};

std::vector<Nonzero> nonzeros(const SpectralField& field) {
  const auto kabs = field.grid().wavenumber_abs();
  std::vector<Nonzero> out;
  for (std::size_t i = 0; i < field.size(); ++i)
    if (field[i] != cplx(0.0)) out.push_back({i, kabs[i], field[i]});
  return out;
}

using Entry = std::pair<std::size_t, cplx>;

double lp_of_entries(const GridPtr& grid, const std::vector<Entry>& entries, double p);

// ||m(|xi|) fhat||_p for a real radial weight, from the nonzero coefficients.
template <class Weight>
double weighted_lp(const GridPtr& grid, const std::vector<Nonzero>& support, double p, Weight weight) {
  std::vector<Entry> entries;
  double l2 = 0.0;
  for (const auto& e : support) {
    const double w = weight(e.kabs);
    if (w == 0.0) continue;
    entries.emplace_back(e.flat, w * e.value);
    l2 += std::norm(entries.back().second);
  }
  if (entries.empty()) return 0.0;
  if (p == 2.0) return std::sqrt(l2);
  return lp_of_entries(grid, entries, p);
}

}  // namespace

double eta0(double r) {
  constexpr double lo = 5.0 / 4.0, hi = 8.0 / 5.0;
  if (r <= lo) return 1.0;
  if (r >= hi) return 0.0;
  return psi((hi - r) / (hi - lo));
}

double chi(double r, int k) { return eta0(std::ldexp(r, -k)) - eta0(std::ldexp(r, 1 - k)); }

double chi_cumulative(double r, int k) { return eta0(std::ldexp(r, -k)); }

ShellRange shell_range(const TorusGrid& grid) {
  const int kmin = static_cast<int>(std::floor(std::log2(grid.wavenumber_unit()))) - 1;
  const int kmax = static_cast<int>(std::ceil(std::log2(grid.max_wavenumber()))) + 1;
  return {kmin, kmax};
}

SpectralField project(const SpectralField& field, int k, Projection kind) {
  if (kind == Projection::shell)
    return radial_multiplier(field, [k](double r) { return chi(r, k); });
  return radial_multiplier(field, [k](double r) { return chi_cumulative(r, k); });
}

ShellTable::ShellTable(const TorusGrid& grid)
    : range_(shell_range(grid)), entries_(grid.size()), counts_(grid.size(), 0) {
  const auto kabs = grid.wavenumber_abs();
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double r = kabs[i];
    auto& e = entries_[i];
    std::uint8_t c = 0;
    const double low = chi_cumulative(r, range_.kmin);
    if (low != 0.0) e[c++] = {static_cast<std::int16_t>(range_.kmin), low};
    if (r > 0.0) {
      const int k0 = static_cast<int>(std::floor(std::log2(r)));
      for (int k = std::max(k0 - 1, range_.kmin + 1); k <= std::min(k0 + 2, range_.kmax); ++k) {
        const double w = chi(r, k);
        if (w != 0.0) {
          if (c == 2) throw NumericalGuard("shell table: more than two overlapping shells");
          e[c++] = {static_cast<std::int16_t>(k), w};
        }
      }
    }
    counts_[i] = c;
  }
}

double ShellTable::piece(std::size_t flat, int k) const {
  for (const auto& e : entries(flat))
    if (e.k == k) return e.weight;
  return 0.0;
}

double ShellTable::cumulative(std::size_t flat, int j) const {
  if (flat == 0) return 1.0;  // chi_{<=j}(0) = 1 for every j
  double s = 0.0;
  for (const auto& e : entries(flat))
    if (e.k <= j) s += e.weight;
  return s;
}

SpectralField ShellTable::piece_of(const SpectralField& field, int k) const {
  SpectralField out(field.grid_ptr());
  for (std::size_t i = 0; i < field.size(); ++i)
    if (field[i] != cplx(0.0)) out[i] = piece(i, k) * field[i];
  return out;
}

std::shared_ptr<const ShellTable> shell_table(const TorusGrid& grid) {
  using Key = std::tuple<int, int, double>;
  static std::mutex mutex;
  static std::list<std::pair<Key, std::shared_ptr<const ShellTable>>> cache;
  constexpr std::size_t capacity = 6;
  const Key key{grid.dim(), grid.points(), grid.box_length()};
  std::lock_guard lock(mutex);
  for (auto it = cache.begin(); it != cache.end(); ++it) {
    if (it->first == key) {
      cache.splice(cache.begin(), cache, it);
      return cache.front().second;
    }
  }
  auto table = std::make_shared<const ShellTable>(grid);
  cache.emplace_front(key, table);
  if (cache.size() > capacity) cache.pop_back();
  return table;
}

double sobolev_norm(const SpectralField& field, double s) {
  const auto k2 = field.grid().wavenumber_sq();
  double sum = 0.0;
  for (std::size_t i = 0; i < field.size(); ++i)
    if (field[i] != cplx(0.0)) sum += std::pow(1.0 + k2[i], s) * std::norm(field[i]);
  return std::sqrt(sum);
}

namespace {

// x^{2/3}: cube root by Halley steps from an exponent-bit guess.
double pow_two_thirds(double x) {
  if (!(x >= std::numeric_limits<double>::min()) || !std::isfinite(x)) {
    const double c = std::cbrt(x);
    return c * c;
  }
  double c = std::bit_cast<double>(std::bit_cast<std::uint64_t>(x) / 3 + 0x2a9f7893782da1ceull);
  for (int k = 0; k < 3; ++k) {
    const double c3 = c * c * c;
    c *= (c3 + 2 * x) / (2 * c3 + x);
  }
  return c * c;
}

// Quadrature L^p norm of the field with the given coefficients. For even
// integer p, |f|^p is a trigonometric polynomial of per-axis degree p * M, so
// the rectangle rule on any grid with more than p * M points per axis
// integrates it exactly; the smallest such grid is used.
double lp_of_entries(const GridPtr& grid, const std::vector<Entry>& entries, double p) {
  int M = 0;
  for (const auto& e : entries) {
    const Modes m = grid->modes(e.first);
    for (int a = 0; a < grid->dim(); ++a) M = std::max(M, std::abs(m[a]));
  }
  GridPtr sampled = grid;
  if (p >= 4.0 && p <= 64.0 && std::fmod(p, 2.0) == 0.0) {
    int points = 8;
    while (points <= static_cast<int>(p) * M) points *= 2;
    if (points < grid->points()) sampled = resized_grid(*grid, points);
  }
  // Unscaled values V^{1/2} f(x_j), in a buffer reused across calls.
  thread_local std::vector<cplx> values;
  values.assign(sampled->size(), cplx(0.0));
  for (const auto& [i, c] : entries)
    values[sampled == grid ? i : sampled->flat_index(grid->modes(i))] = c;
  sampled->fft_backward_band(values, M);
  const double scale = 1.0 / std::sqrt(sampled->volume());
  if (std::isinf(p)) {
    double m = 0.0;
    for (const auto& v : values) m = std::max(m, std::norm(v));
    return std::sqrt(m) * scale;
  }
  double s = 0.0;
  if (p == 2.0) {
    for (const auto& v : values) s += std::norm(v);
  } else if (p == 4.0) {
    for (const auto& v : values) {
      const double a = std::norm(v);
      s += a * a;
    }
  } else if (p == 4.0 / 3.0) {
    for (const auto& v : values) s += pow_two_thirds(std::norm(v));
  } else {
    const double half = p / 2.0;
    for (const auto& v : values) s += std::pow(std::norm(v), half);
  }
  return std::pow(s * sampled->cell_volume(), 1.0 / p) * scale;
}

}  // namespace

double lp_norm(const SpectralField& field, double p) {
  check_exponent(p, "lp_norm: p");
  std::vector<Entry> entries;
  for (std::size_t i = 0; i < field.size(); ++i)
    if (field[i] != cplx(0.0)) entries.emplace_back(i, field[i]);
  return lp_of_entries(field.grid_ptr(), entries, p);
}

ShellProfile shell_profile(const SpectralField& field, double p) {
  check_exponent(p, "shell_profile: p");
  const auto range = shell_range(field.grid());
  ShellProfile out;
  out.p = p;
  out.kmin = range.kmin;
  out.shells.resize(static_cast<std::size_t>(range.kmax - range.kmin + 1));
  const auto support = nonzeros(field);
  for (int k = range.kmin; k <= range.kmax; ++k)
    out.shells[static_cast<std::size_t>(k - range.kmin)] =
        weighted_lp(field.grid_ptr(), support, p, [k](double r) { return chi(r, k); });
  out.low = weighted_lp(field.grid_ptr(), support, p, [](double r) { return chi_cumulative(r, 0); });
  return out;
}

double besov_from_profile(const ShellProfile& profile, double s, double q, bool homogeneous) {
  check_exponent(q, "besov: q");
  std::vector<double> weighted;
  weighted.reserve(profile.shells.size());
  for (std::size_t i = 0; i < profile.shells.size(); ++i) {
    const int k = profile.kmin + static_cast<int>(i);
    if (!homogeneous && k < 1) continue;
    if (profile.shells[i] == 0.0) continue;
    weighted.push_back(std::exp2(k * s) * profile.shells[i]);
  }
  const double tail = power_sum(weighted, q);
  return homogeneous ? tail : profile.low + tail;
}

double besov_norm(const SpectralField& field, const NormSpec& spec) {
  return besov_from_profile(shell_profile(field, spec.p), spec.s, spec.q, spec.homogeneous);
}

PowerSpectrum power_spectrum(const SpectralField& field) {
  const auto& grid = field.grid();
  const double unit2 = grid.wavenumber_unit() * grid.wavenumber_unit();
  std::vector<double> by_m2;
  for (std::size_t i = 0; i < field.size(); ++i) {
    if (field[i] == cplx(0.0)) continue;
    const Modes m = grid.modes(i);
    const std::size_t m2 = static_cast<std::size_t>(m[0] * m[0] + m[1] * m[1] + m[2] * m[2]);
    if (by_m2.size() <= m2) by_m2.resize(m2 + 1, 0.0);
    by_m2[m2] += std::norm(field[i]);
  }
  PowerSpectrum out;
  for (std::size_t m2 = 0; m2 < by_m2.size(); ++m2) {
    if (by_m2[m2] == 0.0) continue;
    out.k2.push_back(unit2 * static_cast<double>(m2));
    out.energy.push_back(by_m2[m2]);
  }
  return out;
}

double sobolev_from_spectrum(const PowerSpectrum& spectrum, double s) {
  double sum = 0.0;
  for (std::size_t i = 0; i < spectrum.k2.size(); ++i)
    sum += std::pow(1.0 + spectrum.k2[i], s) * spectrum.energy[i];
  return std::sqrt(sum);
}

std::vector<double> simpson_weights(std::size_t nodes, double h) {
  if (nodes < 3) throw InvalidArgument("Simpson quadrature needs at least three nodes");
  const std::size_t intervals = nodes - 1;
  std::vector<double> w(nodes, 0.0);
  const std::size_t simpson_end = intervals % 2 == 0 ? intervals : intervals - 3;
  for (std::size_t j = 0; j + 2 <= simpson_end; j += 2) {
    w[j] += h / 3.0;
    w[j + 1] += 4.0 * h / 3.0;
    w[j + 2] += h / 3.0;
  }
  if (simpson_end != intervals) {
    const std::size_t j = simpson_end;
    w[j] += 3.0 * h / 8.0;
    w[j + 1] += 9.0 * h / 8.0;
    w[j + 2] += 9.0 * h / 8.0;
    w[j + 3] += 3.0 * h / 8.0;
  }
  return w;
}

double time_norm(std::span<const double> values, double dt, double q_t) {
  check_exponent(q_t, "time exponent");
  if (values.size() < 3) throw InvalidArgument("space-time norm needs at least three time nodes");
  if (std::isinf(q_t)) return power_sum(values, q_t);
  const auto w = simpson_weights(values.size(), dt);
  double s = 0.0;
  for (std::size_t j = 0; j < values.size(); ++j) s += w[j] * std::pow(std::abs(values[j]), q_t);
  return std::pow(s, 1.0 / q_t);
}

double spacetime_norm(std::span<const SpectralField> samples, double dt, double q_t,
                      const NormSpec& inner) {
  if (samples.size() < 3) throw InvalidArgument("space-time norm needs at least three time nodes");
  std::vector<double> values(samples.size());
  for (std::size_t j = 0; j < samples.size(); ++j) values[j] = besov_norm(samples[j], inner);
  return time_norm(values, dt, q_t);
}

}  // namespace zakharov

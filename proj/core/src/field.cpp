#include "zakharov/field.hpp"

#include <cmath>
#include <algorithm>
#include <iostream>
#include <list>
#include <mutex>
#include <sstream>

#include "zakharov/errors.hpp"

namespace zakharov {

namespace {

std::mutex& warning_mutex() {
  static std::mutex m;
  return m;
}

std::function<void(const std::string&)>& warning_handler() {
  static std::function<void(const std::string&)> handler = [](const std::string& msg) {
    std::cerr << "warning: " << msg << '\n';
  };
  return handler;
}

// Grid on which a product of factors with degrees mf and mg is exact on every
// kept output mode |m| <= min(band, mf + mg): wrapped sums land at distance
// n' - |m| > mf + mg from the origin, where the true product vanishes.
int product_points(const TorusGrid& grid, int mf, int mg) {
  const int kept = std::min(grid.dealias_band(), mf + mg);
  int points = 8;
  while (points <= mf + mg + kept) points *= 2;
  return points;
}

SpectralField multiply_on(const GridPtr& target, const SpectralField& f, const SpectralField* g) {
  const bool same = target.get() == &f.grid();
  const SpectralField fs = same ? f : transfer(f, target);
  auto a = fs.physical();
  if (g) {
    const auto b = (same ? *g : transfer(*g, target)).physical();
    for (std::size_t i = 0; i < a.size(); ++i) a[i] *= b[i];
  } else {
    for (auto& v : a) v = std::norm(v);
  }
  auto coarse = SpectralField::from_physical(target, a);
  if (same) {
    dealias_in_place(coarse);
    return coarse;
  }
  const int reach = (target->points() - 1) / 2;
  SpectralField out(f.grid_ptr());
  const auto& grid = f.grid();
  for (std::size_t i = 0; i < coarse.size(); ++i) {
    const Modes m = target->modes(i);
    bool keep = grid.in_band(m);
    for (int d = 0; d < grid.dim() && keep; ++d) keep = std::abs(m[d]) <= reach;
    if (keep) out[grid.flat_index(m)] = coarse[i];
  }
  return out;
}

}  // namespace

int max_mode(const SpectralField& field) {
  const auto& grid = field.grid();
  int M = 0;
  for (std::size_t i = 0; i < field.size(); ++i) {
    if (field[i] == cplx(0.0)) continue;
    const Modes m = grid.modes(i);
    for (int a = 0; a < grid.dim(); ++a) M = std::max(M, std::abs(m[a]));
  }
  return M;
}

GridPtr resized_grid(const TorusGrid& grid, int points) {
  static std::mutex mutex;
  static std::list<GridPtr> cache;
  std::lock_guard lock(mutex);
  for (const auto& g : cache)
    if (g->dim() == grid.dim() && g->points() == points && g->box_length() == grid.box_length()) return g;
  cache.push_back(make_grid(grid.dim(), grid.box_length(), points));
  if (cache.size() > 16) cache.pop_front();
  return cache.back();
}

SpectralField transfer(const SpectralField& field, const GridPtr& target) {
  const auto& grid = field.grid();
  const int reach = (target->points() - 1) / 2;
  SpectralField out(target);
  for (std::size_t i = 0; i < field.size(); ++i) {
    if (field[i] == cplx(0.0)) continue;
    const Modes m = grid.modes(i);
    bool fits = true;
    for (int a = 0; a < grid.dim() && fits; ++a) fits = std::abs(m[a]) <= reach;
    if (fits) out[target->flat_index(m)] = field[i];
  }
  return out;
}

void set_warning_handler(std::function<void(const std::string&)> handler) {
  std::lock_guard lock(warning_mutex());
  warning_handler() = std::move(handler);
}

void warn(const std::string& message) {
  std::lock_guard lock(warning_mutex());
  if (warning_handler()) warning_handler()(message);
}

SpectralField::SpectralField(GridPtr grid) : grid_(std::move(grid)), coeffs_(grid_->size()) {}

SpectralField::SpectralField(GridPtr grid, std::vector<cplx> coefficients)
    : grid_(std::move(grid)), coeffs_(std::move(coefficients)) {
  if (coeffs_.size() != grid_->size())
    throw InvalidArgument("coefficient array size does not match grid");
}

SpectralField SpectralField::from_physical(GridPtr grid, std::span<const cplx> values) {
  auto coeffs = transform(*grid, values, Direction::forward);
  return SpectralField(std::move(grid), std::move(coeffs));
}

SpectralField SpectralField::from_function(
    GridPtr grid, const std::function<cplx(const std::array<double, 3>&)>& f) {
  std::vector<cplx> values(grid->size());
  for (std::size_t i = 0; i < values.size(); ++i) values[i] = f(grid->position(i));
  return from_physical(std::move(grid), values);
}

std::vector<cplx> SpectralField::physical() const {
  return transform(*grid_, coeffs_, Direction::inverse);
}

double SpectralField::l2_norm() const {
  double s = 0.0;
  for (const auto& c : coeffs_) s += std::norm(c);
  return std::sqrt(s);
}

SpectralField SpectralField::conj() const {
  SpectralField out(grid_);
  for (std::size_t i = 0; i < coeffs_.size(); ++i) {
    Modes m = grid_->modes(i);
    for (auto& v : m) v = -v;
    out.coeffs_[i] = std::conj(coeffs_[grid_->flat_index(m)]);
  }
  return out;
}

SpectralField SpectralField::real_part() const {
  SpectralField out = conj();
  out += *this;
  out *= 0.5;
  return out;
}

SpectralField SpectralField::imag_part() const {
  SpectralField out = *this;
  out -= conj();
  out *= cplx(0.0, -0.5);
  return out;
}

SpectralField& SpectralField::operator+=(const SpectralField& other) {
  require_same_grid(*this, other, "operator+=");
  for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] += other.coeffs_[i];
  return *this;
}

SpectralField& SpectralField::operator-=(const SpectralField& other) {
  require_same_grid(*this, other, "operator-=");
  for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] -= other.coeffs_[i];
  return *this;
}

SpectralField& SpectralField::operator*=(cplx c) {
  for (auto& v : coeffs_) v *= c;
  return *this;
}

SpectralField operator+(SpectralField a, const SpectralField& b) { return a += b; }
SpectralField operator-(SpectralField a, const SpectralField& b) { return a -= b; }
SpectralField operator*(cplx c, SpectralField a) { return a *= c; }

void require_same_grid(const SpectralField& a, const SpectralField& b, const char* where) {
  if (!a.grid().same_as(b.grid()))
    throw InvalidArgument(std::string(where) + ": fields live on different grids");
}

std::vector<cplx> transform(const TorusGrid& grid, std::span<const cplx> data, Direction direction) {
  if (data.size() != grid.size()) throw InvalidArgument("transform: array size does not match grid");
  std::vector<cplx> out(data.begin(), data.end());
  if (direction == Direction::forward) {
    grid.fft_forward(out);
    const double scale = std::sqrt(grid.volume()) / static_cast<double>(grid.size());
    for (auto& v : out) v *= scale;
  } else {
    grid.fft_backward(out);
    const double scale = 1.0 / std::sqrt(grid.volume());
    for (auto& v : out) v *= scale;
  }
  return out;
}

SpectralField fourier_multiplier(const SpectralField& field, const Symbol& symbol) {
  const auto& grid = field.grid();
  SpectralField out(field.grid_ptr());
  const auto kabs = grid.wavenumber_abs();
  for (std::size_t i = 0; i < field.size(); ++i) {
    const cplx c = field[i];
    const cplx m = symbol(Wavevector{grid.wavevector(i), kabs[i]});
    if (!std::isfinite(m.real()) || !std::isfinite(m.imag())) {
      if (c == cplx(0.0)) continue;
      const Modes md = grid.modes(i);
      std::ostringstream os;
      os << "fourier_multiplier: non-finite symbol at lattice index (" << md[0];
      for (int a = 1; a < grid.dim(); ++a) os << ", " << md[a];
      os << ")";
      throw NumericalGuard(os.str());
    }
    out[i] = m * c;
  }
  return out;
}

SpectralField radial_multiplier(const SpectralField& field, const std::function<double(double)>& m) {
  SpectralField out(field.grid_ptr());
  const auto kabs = field.grid().wavenumber_abs();
  for (std::size_t i = 0; i < field.size(); ++i)
    if (field[i] != cplx(0.0)) out[i] = m(kabs[i]) * field[i];
  return out;
}

SpectralField apply_D_power(const SpectralField& field, double a, ZeroMode zero_mode) {
  const auto kabs = field.grid().wavenumber_abs();
  SpectralField out(field.grid_ptr());
  if (a < 0.0 && std::abs(field[0]) > 1e-12 * std::max(field.l2_norm(), 1e-300)) {
    if (zero_mode == ZeroMode::reject)
      throw InvalidArgument("apply_D_power: negative power applied to a field with nonzero mean");
    warn("apply_D_power: negative power annihilates the nonzero mean of the input");
  }
  for (std::size_t i = 0; i < field.size(); ++i) {
    if (kabs[i] == 0.0) {
      out[i] = (a == 0.0) ? field[i] : cplx(0.0);
      continue;
    }
    out[i] = std::pow(kabs[i], a) * field[i];
  }
  return out;
}

SpectralField schrodinger_propagate(const SpectralField& field, double t) {
  if (t == 0.0) return field;
  const auto k2 = field.grid().wavenumber_sq();
  SpectralField out(field.grid_ptr());
  for (std::size_t i = 0; i < field.size(); ++i)
    if (field[i] != cplx(0.0)) out[i] = std::polar(1.0, t * k2[i]) * field[i];
  return out;
}

SpectralField wave_propagate(const SpectralField& field, double t, double alpha) {
  if (!(alpha > 0.0)) throw InvalidArgument("wave_propagate: ion sound speed must be positive");
  if (t == 0.0) return field;
  const auto kabs = field.grid().wavenumber_abs();
  SpectralField out(field.grid_ptr());
  for (std::size_t i = 0; i < field.size(); ++i)
    if (field[i] != cplx(0.0)) out[i] = std::polar(1.0, alpha * t * kabs[i]) * field[i];
  return out;
}

void dealias_in_place(SpectralField& field) {
  const auto& grid = field.grid();
  for (std::size_t i = 0; i < field.size(); ++i)
    if (!grid.in_band(i)) field[i] = 0.0;
}

SpectralField dealias(const SpectralField& field) {
  SpectralField out = field;
  dealias_in_place(out);
  return out;
}

SpectralField product(const SpectralField& f, const SpectralField& g) {
  require_same_grid(f, g, "product");
  const auto& grid = f.grid();
  const int points = product_points(grid, max_mode(f), max_mode(g));
  return multiply_on(points < grid.points() ? resized_grid(grid, points) : f.grid_ptr(), f, &g);
}

SpectralField abs_squared(const SpectralField& u) {
  const auto& grid = u.grid();
  const int M = max_mode(u);
  const int points = product_points(grid, M, M);
  return multiply_on(points < grid.points() ? resized_grid(grid, points) : u.grid_ptr(), u, nullptr);
}

cplx inner_product(const SpectralField& f, const SpectralField& g) {
  require_same_grid(f, g, "inner_product");
  cplx s = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) s += std::conj(f[i]) * g[i];
  return s;
}

}  // namespace zakharov

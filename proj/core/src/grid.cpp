#include "zakharov/grid.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <mutex>
#include <numbers>
#include <string>

#include "zakharov/errors.hpp"

namespace zakharov {

namespace {

// The FFTW planner is not re-entrant; execution with new-array is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

int signed_mode(int index, int n) { return index < n / 2 ? index : index - n; }

// Plans are made on fftw_malloc storage, whose alignment offset is 0.
int plan_slot(fftw_complex* p) { return fftw_alignment_of(reinterpret_cast<double*>(p)) == 0 ? 0 : 1; }

}  // namespace

TorusGrid::TorusGrid(int dim, double box_length, int points)
    : dim_(dim), n_(points), box_length_(box_length) {
  size_ = 1;
  for (int a = 0; a < dim_; ++a) size_ *= static_cast<std::size_t>(n_);
  unit_ = 2.0 * std::numbers::pi / box_length_;
  volume_ = std::pow(box_length_, dim_);

  k2_.resize(size_);
  kabs_.resize(size_);
  band_mask_.resize(size_);
  const int band = dealias_band();
  max_k_ = 0.0;
  for (std::size_t f = 0; f < size_; ++f) {
    const Modes m = modes(f);
    double s = 0.0;
    bool inside = true;
    for (int a = 0; a < dim_; ++a) {
      s += static_cast<double>(m[a]) * m[a];
      inside = inside && std::abs(m[a]) <= band;
    }
    k2_[f] = s * unit_ * unit_;
    kabs_[f] = std::sqrt(k2_[f]);
    band_mask_[f] = inside ? 1 : 0;
    max_k_ = std::max(max_k_, kabs_[f]);
  }

  std::array<int, 3> dims{n_, n_, n_};
  std::lock_guard lock(planner_mutex());
  auto* scratch = fftw_alloc_complex(size_);
  for (const int slot : {0, 1}) {
    const unsigned flags = slot == 0 ? FFTW_ESTIMATE : FFTW_ESTIMATE | FFTW_UNALIGNED;
    forward_plan_[slot] = fftw_plan_dft(dim_, dims.data(), scratch, scratch, FFTW_FORWARD, flags);
    backward_plan_[slot] = fftw_plan_dft(dim_, dims.data(), scratch, scratch, FFTW_BACKWARD, flags);
  }
  for (int a = 0; a < dim_; ++a) {
    int lines = 1;
    for (int b = a + 1; b < dim_; ++b) lines *= n_;
    axis_plan_[a] = fftw_plan_many_dft(1, &n_, lines, scratch, nullptr, lines, 1, scratch, nullptr, lines, 1,
                                       FFTW_BACKWARD, FFTW_ESTIMATE);
  }
  fftw_free(scratch);
}

TorusGrid::~TorusGrid() {
  std::lock_guard lock(planner_mutex());
  for (const int slot : {0, 1}) {
    fftw_destroy_plan(static_cast<fftw_plan>(forward_plan_[slot]));
    fftw_destroy_plan(static_cast<fftw_plan>(backward_plan_[slot]));
  }
  for (int a = 0; a < dim_; ++a) fftw_destroy_plan(static_cast<fftw_plan>(axis_plan_[a]));
}

Modes TorusGrid::modes(std::size_t flat) const {
  Modes m{0, 0, 0};
  for (int a = dim_ - 1; a >= 0; --a) {
    m[a] = signed_mode(static_cast<int>(flat % n_), n_);
    flat /= n_;
  }
  return m;
}

std::size_t TorusGrid::flat_index(const Modes& m) const {
  std::size_t flat = 0;
  for (int a = 0; a < dim_; ++a) {
    const int wrapped = ((m[a] % n_) + n_) % n_;
    flat = flat * n_ + static_cast<std::size_t>(wrapped);
  }
  return flat;
}

std::array<double, 3> TorusGrid::wavevector(std::size_t flat) const {
  const Modes m = modes(flat);
  return {unit_ * m[0], unit_ * m[1], unit_ * m[2]};
}

std::array<double, 3> TorusGrid::position(std::size_t flat) const {
  std::array<double, 3> x{0.0, 0.0, 0.0};
  const double h = box_length_ / n_;
  for (int a = dim_ - 1; a >= 0; --a) {
    x[a] = h * static_cast<double>(flat % n_);
    flat /= n_;
  }
  return x;
}

bool TorusGrid::in_band(const Modes& m) const {
  const int band = dealias_band();
  for (int a = 0; a < dim_; ++a)
    if (std::abs(m[a]) > band) return false;
  return true;
}

void TorusGrid::fft_forward(std::span<cplx> data) const {
  auto* p = reinterpret_cast<fftw_complex*>(data.data());
  fftw_execute_dft(static_cast<fftw_plan>(forward_plan_[plan_slot(p)]), p, p);
}

void TorusGrid::fft_backward(std::span<cplx> data) const {
  auto* p = reinterpret_cast<fftw_complex*>(data.data());
  fftw_execute_dft(static_cast<fftw_plan>(backward_plan_[plan_slot(p)]), p, p);
}

void TorusGrid::fft_backward_band(std::span<cplx> data, int reach) const {
  auto* p = reinterpret_cast<fftw_complex*>(data.data());
  if (dim_ == 1 || 4 * reach + 2 > n_ || plan_slot(p) != 0) {
    fft_backward(data);
    return;
  }
  // Axis a runs after every later axis: lines with an earlier coordinate
  // outside the band are still zero.
  std::vector<int> band;
  for (int i = 0; i < n_; ++i)
    if (std::abs(signed_mode(i, n_)) <= reach) band.push_back(i);
  for (int a = dim_ - 1; a >= 0; --a) {
    std::size_t slab = 1;
    for (int b = a; b < dim_; ++b) slab *= static_cast<std::size_t>(n_);
    const auto plan = static_cast<fftw_plan>(axis_plan_[a]);
    if (a == 0) {
      fftw_execute_dft(plan, p, p);
    } else if (a == 1) {
      for (const int i : band) fftw_execute_dft(plan, p + i * slab, p + i * slab);
    } else {
      for (const int i : band)
        for (const int j : band) {
          const std::size_t base = (static_cast<std::size_t>(i) * n_ + j) * slab;
          fftw_execute_dft(plan, p + base, p + base);
        }
    }
  }
}

GridPtr make_grid(int dim, double box_length, int points) {
  if (dim < 1 || dim > 3)
    throw InvalidArgument("grid dimension must be 1, 2 or 3 (got " + std::to_string(dim) + ")");
  if (points < 8 || (points & (points - 1)) != 0)
    throw InvalidArgument("points per axis must be a power of two >= 8 (got " +
                          std::to_string(points) + ")");
  if (!(box_length > 0.0) || !std::isfinite(box_length))
    throw InvalidArgument("box length must be positive and finite");
  return std::make_shared<const TorusGrid>(dim, box_length, points);
}

}  // namespace zakharov

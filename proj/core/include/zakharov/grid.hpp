#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <memory>
#include <span>
#include <vector>

namespace zakharov {

using cplx = std::complex<double>;
using Modes = std::array<int, 3>;  // signed lattice index per axis; unused axes are 0

/// Periodic box [0, L)^d sampled with n points per axis, together with its
/// frequency lattice (2*pi/L) * {-n/2, ..., n/2-1}^d.
///
/// Storage order is row-major over axes, each axis in FFT order
/// (0, 1, ..., n/2-1, -n/2, ..., -1). The grid owns the FFT plans; it is shared
/// between fields through GridPtr and never mutated after construction.
class TorusGrid {
 public:
  TorusGrid(int dim, double box_length, int points);
  ~TorusGrid();
  TorusGrid(const TorusGrid&) = delete;
  TorusGrid& operator=(const TorusGrid&) = delete;

  int dim() const { return dim_; }
  int points() const { return n_; }
  double box_length() const { return box_length_; }
  std::size_t size() const { return size_; }

  /// Lattice spacing 2*pi/L.
  double wavenumber_unit() const { return unit_; }
  double volume() const { return volume_; }
  double cell_volume() const { return volume_ / static_cast<double>(size_); }

  /// Largest per-axis |m| kept by the 2/3 rule: floor(n/3).
  int dealias_band() const { return n_ / 3; }

  Modes modes(std::size_t flat) const;
  std::size_t flat_index(const Modes& m) const;  // periodic wrap of each axis
  std::array<double, 3> wavevector(std::size_t flat) const;
  std::array<double, 3> position(std::size_t flat) const;

  /// |xi|^2 and |xi| for every lattice point, in storage order.
  std::span<const double> wavenumber_sq() const { return k2_; }
  std::span<const double> wavenumber_abs() const { return kabs_; }

  /// True when every axis satisfies |m| <= floor(n/3).
  bool in_band(std::size_t flat) const { return band_mask_[flat] != 0; }
  bool in_band(const Modes& m) const;

  /// Largest |xi| present on the lattice (the corner mode).
  double max_wavenumber() const { return max_k_; }

  /// Unnormalized in-place DFTs over the whole array (sign -1 forward, +1 backward).
  void fft_forward(std::span<cplx> data) const;
  void fft_backward(std::span<cplx> data) const;
  /// fft_backward for arrays whose nonzero entries all have |m_a| <= reach;
  /// 1-D lines that are still identically zero are skipped.
  void fft_backward_band(std::span<cplx> data, int reach) const;

  bool same_as(const TorusGrid& other) const {
    return this == &other ||
           (dim_ == other.dim_ && n_ == other.n_ && box_length_ == other.box_length_);
  }

 private:
  int dim_;
  int n_;
  double box_length_;
  std::size_t size_;
  double unit_;
  double volume_;
  double max_k_;
  std::vector<double> k2_;
  std::vector<double> kabs_;
  std::vector<unsigned char> band_mask_;
  // [0]: SIMD plans for arrays with the planner's alignment, [1]: any alignment
  std::array<void*, 2> forward_plan_{};
  std::array<void*, 2> backward_plan_{};
  std::array<void*, 3> axis_plan_{};  // backward along axis a over every line of one slab
};

using GridPtr = std::shared_ptr<const TorusGrid>;

/// Validates and builds a grid: d in {1,2,3}, n a power of two >= 8, L > 0.
GridPtr make_grid(int dim, double box_length, int points);

}  // namespace zakharov

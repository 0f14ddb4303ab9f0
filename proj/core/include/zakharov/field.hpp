#pragma once

#include <array>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "zakharov/grid.hpp"

namespace zakharov {

enum class Direction { forward, inverse };
enum class ZeroMode { annihilate, reject };

/// Complex field on a torus grid, stored by its Fourier coefficients.
///
/// Normalization: f(x) = V^{-1/2} sum_xi fhat(xi) e^{i xi.x}, so the quadrature
/// L2 norm (sum |f_j|^2 dV)^{1/2} equals the l2 norm of the coefficients, and a
/// constant field of unit L2 norm has fhat(0) = 1.
class SpectralField {
 public:
  explicit SpectralField(GridPtr grid);
  SpectralField(GridPtr grid, std::vector<cplx> coefficients);

  static SpectralField from_physical(GridPtr grid, std::span<const cplx> values);
  static SpectralField from_function(
      GridPtr grid, const std::function<cplx(const std::array<double, 3>&)>& f);

  const TorusGrid& grid() const { return *grid_; }
  const GridPtr& grid_ptr() const { return grid_; }
  std::size_t size() const { return coeffs_.size(); }

  std::span<const cplx> coefficients() const { return coeffs_; }
  std::span<cplx> coefficients() { return coeffs_; }
  cplx operator[](std::size_t i) const { return coeffs_[i]; }
  cplx& operator[](std::size_t i) { return coeffs_[i]; }

  std::vector<cplx> physical() const;

  double l2_norm() const;

  /// Pointwise complex conjugate in physical space.
  SpectralField conj() const;
  SpectralField real_part() const;
  SpectralField imag_part() const;

  SpectralField& operator+=(const SpectralField& other);
  SpectralField& operator-=(const SpectralField& other);
  SpectralField& operator*=(cplx c);

 private:
  GridPtr grid_;
  std::vector<cplx> coeffs_;
};

SpectralField operator+(SpectralField a, const SpectralField& b);
SpectralField operator-(SpectralField a, const SpectralField& b);
SpectralField operator*(cplx c, SpectralField a);

/// Throws InvalidArgument when the two fields live on different grids.
void require_same_grid(const SpectralField& a, const SpectralField& b, const char* where);

/// Normalized transform between physical samples and coefficients. The map is
/// unitary with respect to the quadrature L2 inner product.
std::vector<cplx> transform(const TorusGrid& grid, std::span<const cplx> data, Direction direction);

struct Wavevector {
  std::array<double, 3> xi;
  double magnitude;
};
using Symbol = std::function<cplx(const Wavevector&)>;

/// Multiplies coefficients by symbol(xi). A non-finite symbol value at a
/// lattice point with a nonzero coefficient raises NumericalGuard naming the lattice index.
SpectralField fourier_multiplier(const SpectralField& field, const Symbol& symbol);

/// Real radial multiplier m(|xi|); no finiteness screening.
SpectralField radial_multiplier(const SpectralField& field, const std::function<double(double)>& m);

/// D^a with D = sqrt(-Laplacian). For a < 0 the zero mode is annihilated or,
/// under ZeroMode::reject, a nonzero mean (above 1e-12 relative) is an error.
SpectralField apply_D_power(const SpectralField& field, double a,
                            ZeroMode zero_mode = ZeroMode::annihilate);

/// S(t) = exp(i t |xi|^2).
SpectralField schrodinger_propagate(const SpectralField& field, double t);
/// W_alpha(t) = exp(i alpha t |xi|).
SpectralField wave_propagate(const SpectralField& field, double t, double alpha);

/// 2/3 rule: zero every coefficient with some axis index |m| > floor(n/3).
SpectralField dealias(const SpectralField& field);
void dealias_in_place(SpectralField& field);

/// Largest |m_a| over nonzero coefficients (0 for the zero field).
int max_mode(const SpectralField& field);
/// Cached grid with the same dimension and box but `points` per axis.
GridPtr resized_grid(const TorusGrid& grid, int points);
/// Copy every coefficient whose modes exist on `target`; the rest are dropped.
SpectralField transfer(const SpectralField& field, const GridPtr& target);

/// Dealiased pointwise product f*g. Band-limited factors are multiplied on the
/// smallest grid that still resolves the kept modes without wraparound.
SpectralField product(const SpectralField& f, const SpectralField& g);
/// Dealiased |u|^2.
SpectralField abs_squared(const SpectralField& u);

/// <f, g> = sum conj(fhat) ghat = int conj(f) g dx.
cplx inner_product(const SpectralField& f, const SpectralField& g);

/// Installs the sink for non-fatal warnings (default: stderr).
void set_warning_handler(std::function<void(const std::string&)> handler);
void warn(const std::string& message);

}  // namespace zakharov

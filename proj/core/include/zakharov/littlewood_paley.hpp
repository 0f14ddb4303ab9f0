#pragma once

#include <array>
#include <cstdint>
#include <limits>
#include <memory>
#include <span>
#include <vector>

#include "zakharov/field.hpp"

namespace zakharov {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

/// Radial bump: 1 on [0, 5/4], 0 on [8/5, inf), smooth and nonincreasing in
/// between. Built from psi(t) = g(t) / (g(t) + g(1-t)), g(t) = exp(-1/t).
double eta0(double r);

/// chi_k(r) = eta0(r / 2^k) - eta0(r / 2^{k-1}); supported in [5/8, 8/5] * 2^k.
double chi(double r, int k);
/// chi_{<=k}(r) = eta0(r / 2^k).
double chi_cumulative(double r, int k);

/// Shells that can be nonempty on a grid:
/// kmin = floor(log2(2 pi / L)) - 1, kmax = ceil(log2(max |xi|)) + 1.
struct ShellRange {
  int kmin;
  int kmax;
};
ShellRange shell_range(const TorusGrid& grid);

enum class Projection { shell, cumulative };

/// P_k (shell) or P_{<=k} (cumulative) as Fourier multipliers.
SpectralField project(const SpectralField& field, int k, Projection kind);

/// Finite-lattice dyadic partition used by the paraproducts. Piece kmin is the
/// cumulative projector P_{<=kmin} (on the lattice it holds only the zero
/// mode); pieces k in (kmin, kmax] are the shells P_k. The pieces sum to the
/// identity exactly, and sum_{k<=j} piece_k = chi_{<=j} for j >= kmin.
class ShellTable {
 public:
  explicit ShellTable(const TorusGrid& grid);

  int kmin() const { return range_.kmin; }
  int kmax() const { return range_.kmax; }
  ShellRange range() const { return range_; }
  int shell_count() const { return range_.kmax - range_.kmin + 1; }

  struct Entry {
    std::int16_t k;
    double weight;
  };
  /// Nonzero pieces at a lattice point (at most two).
  std::span<const Entry> entries(std::size_t flat) const {
    return {entries_[flat].data(), counts_[flat]};
  }
  double piece(std::size_t flat, int k) const;
  /// chi_{<=j} at the lattice point: sum_{k' <= j} piece_{k'} for j >= kmin;
  /// below kmin only the zero mode is inside, with weight 1.
  double cumulative(std::size_t flat, int j) const;

  /// Apply piece k as a multiplier.
  SpectralField piece_of(const SpectralField& field, int k) const;

 private:
  ShellRange range_;
  std::vector<std::array<Entry, 2>> entries_;
  std::vector<std::uint8_t> counts_;
};

/// Cached table for a grid (keyed by dimension, points and box length).
std::shared_ptr<const ShellTable> shell_table(const TorusGrid& grid);

/// ||<xi>^s fhat||_{l2}, <xi> = (1 + |xi|^2)^{1/2}.
double sobolev_norm(const SpectralField& field, double s);

/// Quadrature L^p norm (sum |f_j|^p dV)^{1/p}; p = infinity gives the max.
/// Even integer p is evaluated on the coarsest grid that integrates |f|^p exactly.
double lp_norm(const SpectralField& field, double p);

struct NormSpec {
  double s = 0.0;
  double p = 2.0;
  double q = 2.0;
  bool homogeneous = false;
};

/// Homogeneous: || 2^{ks} ||P_k f||_p ||_{l^q}, over the grid's shell range.
/// Inhomogeneous: ||P_{<=0} f||_p + ( sum_{k>=1} 2^{ksq} ||P_k f||_p^q )^{1/q}.
double besov_norm(const SpectralField& field, const NormSpec& spec);

/// Per-shell L^p norms, reusable for any (s, q).
struct ShellProfile {
  double p = 2.0;
  int kmin = 0;
  std::vector<double> shells;  // ||P_k f||_p for k = kmin..kmax
  double low = 0.0;            // ||P_{<=0} f||_p
};
ShellProfile shell_profile(const SpectralField& field, double p);
double besov_from_profile(const ShellProfile& profile, double s, double q, bool homogeneous);

/// Radial power spectrum: |xi|^2 -> sum |fhat|^2, for Sobolev norms at any s.
struct PowerSpectrum {
  std::vector<double> k2;
  std::vector<double> energy;
};
PowerSpectrum power_spectrum(const SpectralField& field);
double sobolev_from_spectrum(const PowerSpectrum& spectrum, double s);

/// Composite Simpson weights on `nodes` uniform nodes with spacing h. An odd
/// number of intervals closes with the 3/8 rule on the last three.
std::vector<double> simpson_weights(std::size_t nodes, double h);

/// (int |a(t)|^{q_t} dt)^{1/q_t} by Simpson quadrature; q_t = infinity gives
/// the max over nodes. Requires at least three nodes.
double time_norm(std::span<const double> values, double dt, double q_t);

/// L^{q_t}_t of inner(field(t)) over a uniformly sampled trajectory.
double spacetime_norm(std::span<const SpectralField> samples, double dt, double q_t,
                      const NormSpec& inner);

}  // namespace zakharov

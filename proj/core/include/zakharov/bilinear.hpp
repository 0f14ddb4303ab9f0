#pragma once

#include <array>
#include <initializer_list>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "zakharov/field.hpp"

namespace zakharov {

/// Separation K, high-frequency threshold beta and ion sound speed alpha.
struct DecompositionParams {
  int K = 5;
  double beta = 5.0;
  double alpha = 1.0;

  /// beta defaults to ceil(K + |log2 alpha|). Validates the result.
  static DecompositionParams make(double alpha, int K = 5, std::optional<double> beta = {});
  static double default_beta(double alpha, int K);
  /// Throws InvalidArgument unless K >= 5, alpha > 0 and beta >= K + |log2 alpha|.
  void validate() const;
};

enum class RegionTag { HH, LH, HL, alphaL, XL, Lalpha, LX };

std::string to_string(RegionTag tag);
RegionTag region_from_string(const std::string& name);

/// Shell label of the zero mode in region predicates: P_{<=j} contains the
/// zero mode for every j, so the floor piece ranks below every shell.
inline constexpr int kZeroModeShell = -(1 << 20);

/// Pair (k1, k2) of shells of the first and second factor.
bool region_member(int k1, int k2, RegionTag tag, const DecompositionParams& params);

/// Sum of P_{k1} f * P_{k2} g over the pairs of the region, each product
/// dealiased. Shells are the grid's ShellTable pieces, so the HH, LH and HL
/// parts add up to the dealiased product. HL is assembled as alphaL + XL.
SpectralField paraproduct(const SpectralField& f, const SpectralField& g, RegionTag tag,
                          const DecompositionParams& params);
/// Sum of several regions, accumulated in the listed order.
SpectralField paraproduct(const SpectralField& f, const SpectralField& g,
                          std::initializer_list<RegionTag> tags, const DecompositionParams& params);

/// Omega(f, g)^(xi) = V^{-1/2} sum_eta m_XL(xi-eta, eta) fhat(xi-eta) ghat(eta)
///                    / (-|xi|^2 + alpha |xi-eta| + |eta|^2)
/// with m_XL the smooth XL mask. Output restricted to the dealiasing band.
SpectralField omega(const SpectralField& f, const SpectralField& g, const DecompositionParams& params);

/// Omega~(f, g)^(xi) = alpha V^{-1/2} sum_eta (m_XL + m_LX)(xi-eta, eta) fhat(xi-eta) conj(g)^(eta)
///                     / (|xi-eta|^2 - |eta|^2 - alpha |xi|)
SpectralField omega_tilde(const SpectralField& f, const SpectralField& g,
                          const DecompositionParams& params);

enum class BilinearOperator { omega, omega_tilde };

/// Smooth region weight of a lattice pair (first factor at a, second at b).
double pair_weight(BilinearOperator which, std::size_t a, std::size_t b, const TorusGrid& grid,
                   const DecompositionParams& params);

/// Resonance denominator for output xi = a + b.
double denominator(BilinearOperator which, const std::array<double, 3>& a,
                   const std::array<double, 3>& b, double alpha);

/// Near-resonance threshold: |denominator| < 1e-9 max(|xi|^2, 1).
bool near_resonant(double denom, double xi_sq);

struct DenominatorShell {
  int shell = 0;  // shell of the high-frequency factor
  double min_abs = 0.0;
  Modes argmin_xi{};
  Modes argmin_eta{};
};

struct DenominatorReport {
  BilinearOperator which = BilinearOperator::omega;
  std::vector<DenominatorShell> shells;
  double global_min = 0.0;
  Modes global_xi{};
  Modes global_eta{};
  std::size_t pairs = 0;
  bool resonant = false;  // some pair falls under the near-resonance threshold
};

/// Exhaustive scan of the masked pair set restricted to the dealiasing band.
DenominatorReport denominator_scan(const TorusGrid& grid, const DecompositionParams& params,
                                   BilinearOperator which);

/// CSV: shell,min_abs_denominator,argmin_xi,argmin_eta (index tuples joined by ';').
void write_denominator_csv(const DenominatorReport& report, std::ostream& out);

}  // namespace zakharov

#pragma once

#include <cstdint>

#include "zakharov/field.hpp"
#include "zakharov/littlewood_paley.hpp"

namespace zakharov {

enum class ProfileKind {
  sobolev_random,  // Gaussian coefficients times <xi>^{-decay}
  dyadic_shell,    // Gaussian coefficients on the plateau of chi_shell
  dyadic_kernel,   // unit coefficients on the plateau of chi_shell (a localized P_j delta)
  gaussian_bump,   // exp(-|x - c|^2 / (2 width^2)) centred in the box
};

/// Random or deterministic field family.
///
/// Random coefficients are drawn in signed lattice order over the cube
/// |m_i| <= cutoff, independently of n, so refining a grid with the same box
/// reproduces the same function.
struct FieldProfile {
  ProfileKind kind = ProfileKind::sobolev_random;
  double decay = 1.0;
  int shell = 0;
  double width = 0.5;
  int cutoff = 0;  // per-axis |m| bound for random draws; 0 means the dealiasing band
  bool real = false;
  std::uint64_t seed = 1;
};

enum class TargetKind { sobolev, besov, lebesgue };

struct TargetNorm {
  TargetKind kind = TargetKind::sobolev;
  NormSpec spec;  // s for sobolev; s, p, q, homogeneous for besov; p for lebesgue
};

double evaluate_norm(const SpectralField& field, const TargetNorm& target);

/// Field of the given profile rescaled so that its target norm equals value.
/// Dealiased. Throws InvalidArgument for a dyadic shell without lattice points
/// in the band.
SpectralField random_field(const GridPtr& grid, const FieldProfile& profile, const TargetNorm& target,
                           double value);

/// Unscaled field of the profile.
SpectralField profile_field(const GridPtr& grid, const FieldProfile& profile);

}  // namespace zakharov

#include "zakharov/sampling.hpp"

#include <cmath>
#include <random>

#include "zakharov/errors.hpp"

namespace zakharov {

namespace {

bool on_plateau(double r, int j) {
  const double lo = 0.8 * std::ldexp(1.0, j), hi = 1.25 * std::ldexp(1.0, j);
  return r >= lo && r <= hi;
}

SpectralField random_cube(const GridPtr& grid, const FieldProfile& profile,
                          const std::function<double(double)>& amplitude) {
  const int band = grid->dealias_band();
  const int cutoff = profile.cutoff > 0 ? std::min(profile.cutoff, band) : band;
  std::mt19937_64 rng(profile.seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  SpectralField out(grid);
  const double unit = grid->wavenumber_unit();
  const int d = grid->dim();
  Modes m{0, 0, 0};
  const int c1 = d >= 2 ? cutoff : 0, c2 = d >= 3 ? cutoff : 0;
  for (m[0] = -cutoff; m[0] <= cutoff; ++m[0])
    for (m[1] = -c1; m[1] <= c1; ++m[1])
      for (m[2] = -c2; m[2] <= c2; ++m[2]) {
        const double re = normal(rng), im = normal(rng);
        const double r = unit * std::sqrt(double(m[0] * m[0] + m[1] * m[1] + m[2] * m[2]));
        const double a = amplitude(r);
        if (a != 0.0) out[grid->flat_index(m)] = a * cplx(re, im) / std::sqrt(2.0);
      }
  return out;
}

}  // namespace

double evaluate_norm(const SpectralField& field, const TargetNorm& target) {
  switch (target.kind) {
    case TargetKind::sobolev: return sobolev_norm(field, target.spec.s);
    case TargetKind::besov: return besov_norm(field, target.spec);
    case TargetKind::lebesgue: return lp_norm(field, target.spec.p);
  }
  return 0.0;
}

SpectralField profile_field(const GridPtr& grid, const FieldProfile& profile) {
  SpectralField out(grid);
  switch (profile.kind) {
    case ProfileKind::sobolev_random: {
      const double decay = profile.decay;
      out = random_cube(grid, profile, [decay](double r) { return std::pow(1.0 + r * r, -decay / 2); });
      break;
    }
    case ProfileKind::dyadic_shell: {
      const int j = profile.shell;
      out = random_cube(grid, profile, [j](double r) { return on_plateau(r, j) ? 1.0 : 0.0; });
      break;
    }
    case ProfileKind::dyadic_kernel: {
      const auto kabs = grid->wavenumber_abs();
      for (std::size_t i = 0; i < grid->size(); ++i)
        if (grid->in_band(i) && on_plateau(kabs[i], profile.shell)) out[i] = 1.0;
      break;
    }
    case ProfileKind::gaussian_bump: {
      const double L = grid->box_length(), w = profile.width;
      const int d = grid->dim();
      out = SpectralField::from_function(grid, [&](const std::array<double, 3>& x) {
        double r2 = 0.0;
        for (int a = 0; a < d; ++a) r2 += (x[a] - L / 2) * (x[a] - L / 2);
        return cplx(std::exp(-r2 / (2 * w * w)));
      });
      break;
    }
  }
  if (profile.real) out = out.real_part();
  dealias_in_place(out);
  if ((profile.kind == ProfileKind::dyadic_shell || profile.kind == ProfileKind::dyadic_kernel) &&
      out.l2_norm() == 0.0)
    throw InvalidArgument("dyadic shell " + std::to_string(profile.shell) +
                          " has no lattice points inside the dealiasing band");
  return out;
}

SpectralField random_field(const GridPtr& grid, const FieldProfile& profile, const TargetNorm& target,
                           double value) {
  if (value == 0.0) return SpectralField(grid);
  if (!(value > 0.0)) throw InvalidArgument("random_field: target value must be nonnegative");
  SpectralField out = profile_field(grid, profile);
  const double current = evaluate_norm(out, target);
  if (!(current > 0.0) || !std::isfinite(current))
    throw InvalidArgument("random_field: profile has zero or non-finite target norm");
  out *= value / current;
  return out;
}

}  // namespace zakharov

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "../support/oracles.hpp"
#include "zakharov/errors.hpp"
#include "zakharov/littlewood_paley.hpp"
#include "zakharov/sampling.hpp"

using namespace zakharov;

namespace {

constexpr double kPi = std::numbers::pi;

SpectralField plane_wave(const GridPtr& g, Modes m, cplx amplitude = 1.0) {
  SpectralField f(g);
  f[g->flat_index(m)] = amplitude;
  return f;
}

}  // namespace

TEST(Bump, PlateauAndSupport) {
  EXPECT_EQ(eta0(0.0), 1.0);
  EXPECT_EQ(eta0(1.25), 1.0);
  EXPECT_EQ(eta0(1.7), 0.0);
  EXPECT_EQ(eta0(1.6), 0.0);
  for (double r = 1.25; r < 1.6; r += 0.01) EXPECT_GE(eta0(r), eta0(r + 0.01));
  EXPECT_EQ(chi(1.0, 0), 1.0);
}

TEST(Bump, MatchesIndependentFormula) {
  for (double r = 0.0; r < 3.0; r += 0.013) EXPECT_NEAR(eta0(r), oracle::bump(r), 1e-15);
}

TEST(Shells, TelescopingAndSupport) {
  double sum = 0.0;
  for (int k = -20; k <= 20; ++k) sum += chi(3.7, k);
  EXPECT_NEAR(sum, 1.0, 1e-15);
  for (int k = -3; k <= 6; ++k) EXPECT_EQ(chi(std::ldexp(1.0, k) / 4, k), 0.0);
}

TEST(Shells, PartitionOfUnityOnLattice) {
  for (int d = 1; d <= 3; ++d) {
    const auto g = make_grid(d, 2 * kPi / 3, d == 3 ? 16 : 64);
    const auto range = shell_range(*g);
    const auto table = shell_table(*g);
    const auto kabs = g->wavenumber_abs();
    for (std::size_t i = 1; i < g->size(); ++i) {
      double sum = 0.0;
      for (int k = range.kmin; k <= range.kmax; ++k) sum += chi(kabs[i], k);
      ASSERT_NEAR(sum, 1.0, 1e-14) << "d = " << d << ", flat " << i;
      double pieces = 0.0;
      for (const auto& e : table->entries(i)) pieces += e.weight;
      ASSERT_NEAR(pieces, 1.0, 1e-14);
      ASSERT_LE(table->entries(i).size(), 2u);
    }
    // zero mode lies in the floor piece and in every cumulative projector
    EXPECT_EQ(table->piece(0, range.kmin), 1.0);
    EXPECT_EQ(table->cumulative(0, range.kmin - 5), 1.0);
  }
}

TEST(Shells, CumulativeMatchesBump) {
  const auto g = make_grid(2, 2 * kPi / 5, 32);
  const auto table = shell_table(*g);
  const auto kabs = g->wavenumber_abs();
  for (std::size_t i = 0; i < g->size(); ++i)
    for (int j = table->kmin(); j <= table->kmax(); ++j)
      ASSERT_NEAR(table->cumulative(i, j), chi_cumulative(kabs[i], j), 1e-14);
}

TEST(Projection, PlaneWaveOnDyadicSphere) {
  const auto g = make_grid(2, 2 * kPi, 32);
  const auto f = plane_wave(g, {8, 0, 0});  // |xi| = 2^3
  EXPECT_LT(oracle::rel_error(project(f, 3, Projection::shell), f), 1e-15);
  for (int m : {0, 1, 5, 6}) EXPECT_EQ(project(f, m, Projection::shell).l2_norm(), 0.0) << m;
}

TEST(Projection, ShellsReconstructAndCumulativeConverges) {
  const auto g = make_grid(2, 2 * kPi, 32);
  const auto f = oracle::random_band_field(g, 12);
  const auto range = shell_range(*g);
  SpectralField sum = project(f, range.kmin, Projection::cumulative);
  for (int k = range.kmin + 1; k <= range.kmax; ++k) sum += project(f, k, Projection::shell);
  EXPECT_LT(oracle::rel_error(sum, f), 1e-14);
  EXPECT_LT(oracle::rel_error(project(f, range.kmax, Projection::cumulative), f), 1e-15);
}

TEST(Projection, AlmostOrthogonality) {
  // 0 <= chi_k and sum chi_k = 1 with at most two overlapping shells give
  // ||f||^2 / 2 <= sum ||P_k f||^2 <= ||f||^2.
  const auto g = make_grid(2, 2 * kPi, 32);
  const auto range = shell_range(*g);
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    auto f = oracle::random_band_field(g, 1000 + seed);
    f[0] = 0.0;
    double sum = 0.0;
    for (int k = range.kmin; k <= range.kmax; ++k) {
      const double n = project(f, k, Projection::shell).l2_norm();
      sum += n * n;
    }
    const double total = f.l2_norm() * f.l2_norm();
    ASSERT_GE(sum, 0.5 * total * (1 - 1e-14));
    ASSERT_LE(sum, total * (1 + 1e-14));
  }
}

TEST(Sobolev, Definitions) {
  const auto g = make_grid(2, 2 * kPi, 16);
  const auto f = oracle::random_band_field(g, 2);
  EXPECT_NEAR(sobolev_norm(f, 0.0), f.l2_norm(), 1e-14 * f.l2_norm());
  const auto one = plane_wave(g, {0, 0, 0});
  for (double s : {-1.0, 0.5, 3.0}) EXPECT_DOUBLE_EQ(sobolev_norm(one, s), 1.0);
  const auto pw = plane_wave(g, {3, 4, 0});
  for (double s : {-0.5, 1.0, 1.75}) EXPECT_NEAR(sobolev_norm(pw, s), std::pow(26.0, s / 2), 1e-12);
  EXPECT_NEAR(sobolev_from_spectrum(power_spectrum(f), 1.3), sobolev_norm(f, 1.3), 1e-12 * sobolev_norm(f, 1.3));
}

TEST(Besov, ZeroAndSingleShell) {
  const auto g = make_grid(2, 2 * kPi, 32);
  EXPECT_EQ(besov_norm(SpectralField(g), {1.0, 4.0, 2.0, false}), 0.0);
  const auto f = plane_wave(g, {0, 8, 0});
  for (double p : {2.0, 4.0, kInfinity})
    for (double s : {0.5, 1.0, 2.0}) {
      const double expected = std::exp2(3 * s) * lp_norm(f, p);
      EXPECT_NEAR(besov_norm(f, {s, p, 2.0, false}), expected, 1e-12 * expected);
      EXPECT_NEAR(besov_norm(f, {s, p, kInfinity, true}), expected, 1e-12 * expected);
    }
}

TEST(Besov, EquivalentToSobolevWithinOverlapConstants) {
  // B^s_{2,2}^2 >= sum m(xi) |fhat|^2 >= B^2 / 2 with
  // m = eta0^2 + sum_{k>=1} 2^{2ks} chi_k^2; bound m / <xi>^{2s} on the lattice.
  const auto g = make_grid(2, 2 * kPi, 64);
  const auto range = shell_range(*g);
  const double s = 1.0;
  double lo = INFINITY, hi = 0.0;
  for (const double r : g->wavenumber_abs()) {
    double m = oracle::below(r, 0) * oracle::below(r, 0);
    for (int k = 1; k <= range.kmax; ++k) m += std::exp2(2 * k * s) * oracle::shell(r, k) * oracle::shell(r, k);
    const double w = m / std::pow(1 + r * r, s);
    lo = std::min(lo, w);
    hi = std::max(hi, w);
  }
  const double c = std::sqrt(lo), C = std::sqrt(2 * hi);
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const auto f = oracle::random_band_field(g, 500 + seed, 1.0 + 0.02 * static_cast<double>(seed));
    const double ratio = besov_norm(f, {s, 2.0, 2.0, false}) / sobolev_norm(f, s);
    ASSERT_GE(ratio, c * (1 - 1e-12)) << seed;
    ASSERT_LE(ratio, C * (1 + 1e-12)) << seed;
  }
}

TEST(Lebesgue, PlaneWaveAndBadExponent) {
  const auto g = make_grid(2, 3.0, 16);
  const auto f = plane_wave(g, {1, 2, 0}, 2.0);
  const double V = g->volume();
  EXPECT_NEAR(lp_norm(f, 4.0), 2.0 / std::sqrt(V) * std::pow(V, 0.25), 1e-12);
  EXPECT_NEAR(lp_norm(f, kInfinity), 2.0 / std::sqrt(V), 1e-12);
  EXPECT_THROW(lp_norm(f, 0.5), InvalidArgument);
}

TEST(Lebesgue, EvenExponentsMatchFullGridQuadrature) {
  for (const int d : {1, 2, 3}) {
    const auto g = make_grid(d, 2 * kPi / 4, d == 3 ? 32 : 64);
    for (const int cutoff : {1, 3, 5, 10}) {
      auto f = oracle::random_band_field(g, 40 + cutoff, 0.5);
      for (std::size_t i = 0; i < f.size(); ++i) {
        const Modes m = g->modes(i);
        for (int a = 0; a < d; ++a)
          if (std::abs(m[a]) > cutoff) f[i] = 0.0;
      }
      const auto values = f.physical();
      for (const double p : {4.0, 6.0}) {
        double direct = 0.0;
        for (const auto& v : values) direct += std::pow(std::abs(v), p);
        direct = std::pow(direct * g->cell_volume(), 1.0 / p);
        EXPECT_NEAR(lp_norm(f, p), direct, 1e-12 * direct) << "d " << d << " cutoff " << cutoff << " p " << p;
      }
    }
  }
}

TEST(TimeNorm, ConstantRampAndInfinity) {
  const auto g = make_grid(1, 2 * kPi, 16);
  const auto f = plane_wave(g, {2, 0, 0});
  const NormSpec inner{1.0, 2.0, 2.0, false};
  const double value = besov_norm(f, inner);
  const double T = 0.8;
  std::vector<SpectralField> constant(9, f);
  EXPECT_NEAR(spacetime_norm(constant, T / 8, 4.0, inner), std::pow(T, 0.25) * value, 1e-13);
  EXPECT_NEAR(spacetime_norm(constant, T / 8, kInfinity, inner), value, 1e-13);

  std::vector<double> ramp;
  for (int j = 0; j <= 10; ++j) ramp.push_back(j / 10.0);
  EXPECT_NEAR(time_norm(ramp, 0.1, 2.0), 1.0 / std::sqrt(3.0), 1e-14);
  ramp.push_back(1.1);  // odd interval count uses the 3/8 closure
  EXPECT_NEAR(time_norm(ramp, 0.1, 2.0), std::sqrt(1.1 * 1.1 * 1.1 / 3.0), 1e-14);

  EXPECT_THROW(spacetime_norm(std::vector<SpectralField>(2, f), 0.1, 2.0, inner), InvalidArgument);
}

TEST(TimeNorm, SimpsonIsExactForCubics) {
  for (std::size_t nodes : {3u, 4u, 5u, 8u, 9u}) {
    const double h = 0.3;
    const auto w = simpson_weights(nodes, h);
    const double T = h * static_cast<double>(nodes - 1);
    double integral = 0.0;
    for (std::size_t j = 0; j < nodes; ++j) {
      const double t = h * static_cast<double>(j);
      integral += w[j] * (1 - 2 * t + 3 * t * t * t);
    }
    EXPECT_NEAR(integral, T - T * T + 0.75 * T * T * T * T, 1e-13) << nodes;
  }
}

TEST(Sampling, ScalingAndZeroValue) {
  const auto g = make_grid(2, 2 * kPi, 32);
  FieldProfile p;
  p.seed = 4;
  p.decay = 1.5;
  EXPECT_EQ(random_field(g, p, {TargetKind::sobolev, {1.0}}, 0.0).l2_norm(), 0.0);
  const auto f = random_field(g, p, {TargetKind::besov, {0.5, 4.0, 2.0, false}}, 3.0);
  EXPECT_NEAR(besov_norm(f, {0.5, 4.0, 2.0, false}), 3.0, 3e-12);
  EXPECT_LT(oracle::rel_error(dealias(f), f), 1e-15);
}

TEST(Sampling, DyadicShellNormsAgree) {
  const auto g = make_grid(2, 2 * kPi, 64);
  const double s = 1.5;
  for (int j = 2; j <= 4; ++j) {
    FieldProfile p;
    p.kind = ProfileKind::dyadic_shell;
    p.shell = j;
    p.seed = 40 + static_cast<std::uint64_t>(j);
    const auto f = random_field(g, p, {TargetKind::sobolev, {s}}, 1.0);
    EXPECT_LT(oracle::rel_error(project(f, j, Projection::shell), f), 1e-15);  // on the plateau
    const double b = besov_norm(f, {s, 2.0, 2.0, false});
    EXPECT_NEAR(b, std::exp2(j * s) * f.l2_norm(), 1e-12 * b);
    const double r_lo = 0.8 * std::exp2(j), r_hi = 1.25 * std::exp2(j);
    EXPECT_GE(b, std::exp2(j * s) / std::pow(1 + r_hi * r_hi, s / 2) * (1 - 1e-12));
    EXPECT_LE(b, std::exp2(j * s) / std::pow(1 + r_lo * r_lo, s / 2) * (1 + 1e-12));
  }
  FieldProfile outside;
  outside.kind = ProfileKind::dyadic_shell;
  outside.shell = 12;
  EXPECT_THROW(random_field(g, outside, {TargetKind::sobolev, {s}}, 1.0), InvalidArgument);
}

TEST(Sampling, SeedsDecorrelate) {
  const auto g = make_grid(2, 2 * kPi, 64);
  FieldProfile a, b;
  a.seed = 1;
  b.seed = 2;
  const auto f = random_field(g, a, {TargetKind::sobolev, {0.0}}, 1.0);
  const auto h = random_field(g, b, {TargetKind::sobolev, {0.0}}, 1.0);
  EXPECT_LT(std::abs(inner_product(f, h)), 0.2);
}

TEST(Sampling, RefinementReproducesTheFunction) {
  FieldProfile p;
  p.seed = 8;
  p.cutoff = 6;
  const auto coarse = profile_field(make_grid(2, 2.0, 32), p);
  const auto fine = profile_field(make_grid(2, 2.0, 64), p);
  for (std::size_t i = 0; i < coarse.size(); ++i) {
    const auto m = coarse.grid().modes(i);
    ASSERT_EQ(coarse[i], fine[fine.grid().flat_index(m)]);
  }
  EXPECT_NEAR(coarse.l2_norm(), fine.l2_norm(), 1e-13);
}

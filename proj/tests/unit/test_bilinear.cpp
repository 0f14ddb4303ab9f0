#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "../support/oracles.hpp"
#include "zakharov/bilinear.hpp"
#include "zakharov/errors.hpp"

using namespace zakharov;

namespace {

constexpr double kPi = std::numbers::pi;

SpectralField plane_wave(const GridPtr& g, Modes m, cplx amplitude = 1.0) {
  SpectralField f(g);
  f[g->flat_index(m)] = amplitude;
  return f;
}

const DecompositionParams kDefault = DecompositionParams::make(1.0);

}  // namespace

TEST(Params, DefaultsAndValidation) {
  EXPECT_EQ(kDefault.K, 5);
  EXPECT_EQ(kDefault.beta, 5.0);
  EXPECT_EQ(DecompositionParams::make(0.5).beta, 6.0);
  EXPECT_EQ(DecompositionParams::make(2.0).beta, 6.0);
  EXPECT_EQ(DecompositionParams::make(3.0).beta, 7.0);
  EXPECT_NO_THROW(DecompositionParams::make(2.0, 5, 6.0));
  EXPECT_THROW(DecompositionParams::make(2.0, 5, 5.5), InvalidArgument);
  EXPECT_THROW(DecompositionParams::make(1.0, 4), InvalidArgument);
  EXPECT_THROW(DecompositionParams::make(0.0), InvalidArgument);
}

TEST(Regions, Membership) {
  const auto& p = kDefault;
  EXPECT_TRUE(region_member(3, 10, RegionTag::LH, p));
  EXPECT_FALSE(region_member(3, 10, RegionTag::HH, p));
  EXPECT_FALSE(region_member(3, 10, RegionTag::HL, p));
  EXPECT_TRUE(region_member(10, 3, RegionTag::XL, p));
  EXPECT_FALSE(region_member(10, 3, RegionTag::alphaL, p));
  EXPECT_TRUE(region_member(7, 4, RegionTag::HH, p));
  EXPECT_TRUE(region_member(5, 0, RegionTag::alphaL, p));
  EXPECT_TRUE(region_member(6, 0, RegionTag::XL, p));
}

TEST(Regions, EveryPairInExactlyOneMainRegion) {
  const auto& p = kDefault;
  for (int a = -4; a <= 14; ++a)
    for (int b = -4; b <= 14; ++b) {
      const int count = region_member(a, b, RegionTag::HH, p) + region_member(a, b, RegionTag::LH, p) +
                        region_member(a, b, RegionTag::HL, p);
      ASSERT_EQ(count, 1) << a << ", " << b;
      ASSERT_EQ(region_member(a, b, RegionTag::HL, p),
                region_member(a, b, RegionTag::alphaL, p) || region_member(a, b, RegionTag::XL, p));
      ASSERT_EQ(region_member(a, b, RegionTag::LX, p), region_member(b, a, RegionTag::XL, p));
      ASSERT_EQ(region_member(a, b, RegionTag::Lalpha, p), region_member(b, a, RegionTag::alphaL, p));
    }
}

TEST(Regions, NamesRoundTrip) {
  for (auto t : {RegionTag::HH, RegionTag::LH, RegionTag::HL, RegionTag::alphaL, RegionTag::XL, RegionTag::Lalpha,
                 RegionTag::LX})
    EXPECT_EQ(region_from_string(to_string(t)), t);
  EXPECT_THROW(region_from_string("HX"), InvalidArgument);
}

TEST(Paraproduct, SinglePairLandsInLowHigh) {
  const auto g = make_grid(1, 2 * kPi / 4, 1024);
  const auto f = plane_wave(g, {2, 0, 0});    // |xi| = 8, shell 3
  const auto h = plane_wave(g, {256, 0, 0});  // |xi| = 1024, shell 10
  const auto fg = product(f, h);
  EXPECT_LT(oracle::rel_error(paraproduct(f, h, RegionTag::LH, kDefault), fg), 1e-15);
  EXPECT_EQ(paraproduct(f, h, RegionTag::HH, kDefault).l2_norm(), 0.0);
  EXPECT_EQ(paraproduct(f, h, RegionTag::HL, kDefault).l2_norm(), 0.0);
}

TEST(Paraproduct, ReconstructsTheProduct) {
  struct Case {
    int d, n;
  };
  for (const auto [d, n] : {Case{1, 256}, Case{2, 64}, Case{3, 16}}) {
    const auto g = make_grid(d, 2 * kPi / 8, n);
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
      const auto f = oracle::random_band_field(g, 2 * seed + 1, 0.5);
      const auto h = oracle::random_band_field(g, 2 * seed + 2, 0.5);
      const auto fg = product(f, h);
      const auto parts = paraproduct(f, h, {RegionTag::LH, RegionTag::HH, RegionTag::HL}, kDefault);
      ASSERT_LE((parts - fg).l2_norm(), 1e-12 * fg.l2_norm()) << "d = " << d << ", seed " << seed;
      const auto hl = paraproduct(f, h, RegionTag::HL, kDefault);
      const auto split = paraproduct(f, h, {RegionTag::alphaL, RegionTag::XL}, kDefault);
      ASSERT_EQ((hl - split).l2_norm(), 0.0);
    }
  }
}

TEST(Omega, ZeroInputs) {
  const auto g = make_grid(1, 2 * kPi / 4, 128);
  const auto f = oracle::random_band_field(g, 1);
  const SpectralField zero(g);
  EXPECT_EQ(omega(f, zero, kDefault).l2_norm(), 0.0);
  EXPECT_EQ(omega(zero, f, kDefault).l2_norm(), 0.0);
  EXPECT_EQ(omega_tilde(f, zero, kDefault).l2_norm(), 0.0);
}

TEST(Omega, SinglePairFormula) {
  const auto g = make_grid(1, 2 * kPi / 4, 128);  // unit 4
  const double V = g->volume();
  // physical plane waves e^{i a x}: coefficient sqrt(V)
  const auto f = plane_wave(g, {32, 0, 0}, std::sqrt(V));  // |a| = 128, plateau of shell 7 > beta
  const auto h = plane_wave(g, {1, 0, 0}, std::sqrt(V));   // |b| = 4 <= 5/4 * 2^{7-5}
  const double a = 128, b = 4;
  const auto out = omega(f, h, kDefault);
  const double denom = -(a + b) * (a + b) + a + b * b;
  EXPECT_NEAR(std::abs(out[g->flat_index({33, 0, 0})] - std::sqrt(V) / denom), 0.0, 1e-15 * std::sqrt(V));
  EXPECT_NEAR(out.l2_norm(), std::sqrt(V) / std::abs(denom), 1e-15 * std::sqrt(V));
}

TEST(OmegaTilde, SinglePairWithRealSecondFactor) {
  const auto g = make_grid(1, 2 * kPi / 4, 128);
  const double V = g->volume(), alpha = 1.0;
  const auto f = plane_wave(g, {32, 0, 0}, std::sqrt(V));
  auto h = plane_wave(g, {1, 0, 0}, std::sqrt(V));  // 2 cos(4x): real
  h[g->flat_index({-1, 0, 0})] = std::sqrt(V);
  const auto out = omega_tilde(f, h, kDefault);
  for (const int sign : {1, -1}) {
    const double a = 128, b = 4.0 * sign;
    const double denom = a * a - b * b - alpha * std::abs(a + b);
    const auto idx = g->flat_index({32 + sign, 0, 0});
    EXPECT_NEAR(std::abs(out[idx] - alpha * std::sqrt(V) / denom), 0.0, 1e-15 * std::sqrt(V)) << sign;
  }
}

TEST(OmegaTilde, WeightIsTheSymmetrizedMask) {
  const auto g = make_grid(2, 2 * kPi / 8, 32);
  for (std::size_t a = 0; a < g->size(); a += 7)
    for (std::size_t b = 0; b < g->size(); b += 5) {
      const double tilde = pair_weight(BilinearOperator::omega_tilde, a, b, *g, kDefault);
      const double xl = pair_weight(BilinearOperator::omega, a, b, *g, kDefault);
      const double lx = pair_weight(BilinearOperator::omega, b, a, *g, kDefault);
      ASSERT_NEAR(tilde, xl + lx, 1e-15);
    }
}

TEST(Omega, MatchesDoubleLoopOracle) {
  struct Case {
    int d, n;
    double L;
  };
  for (const auto [d, n, L] : {Case{1, 256, 2 * kPi / 16}, Case{2, 64, 2 * kPi / 16}}) {
    const auto g = make_grid(d, L, n);
    for (const auto alpha : {0.5, 1.0, 2.0}) {
      const auto p = DecompositionParams::make(alpha);
      for (std::uint64_t seed = 0; seed < 4; ++seed) {
        const auto f = oracle::random_band_field(g, 70 + seed, 0.5);
        const auto h = oracle::random_band_field(g, 90 + seed, 0.5);
        for (const auto which : {BilinearOperator::omega, BilinearOperator::omega_tilde}) {
          const auto fast = which == BilinearOperator::omega ? omega(f, h, p) : omega_tilde(f, h, p);
          const auto slow = oracle::bilinear(which, f, h, p);
          ASSERT_GT(slow.l2_norm(), 0.0) << "d = " << d << ", alpha " << alpha << ", seed " << seed;
          ASSERT_LT(oracle::rel_error(fast, slow), 1e-12) << "d = " << d << ", alpha " << alpha;
        }
      }
    }
  }
}

TEST(Denominators, ArithmeticAtZeroLowFrequency) {
  for (int k = 1; k <= 10; ++k) {
    const double a = std::exp2(k);
    const double denom = denominator(BilinearOperator::omega, {a, 0, 0}, {0, 0, 0}, 1.0);
    EXPECT_DOUBLE_EQ(denom, -a * a + a);
    EXPECT_LT(denom, 0.0);
    EXPECT_GE(std::abs(denom), a * a / 2);
  }
  EXPECT_TRUE(near_resonant(1e-12, 4.0));
  EXPECT_FALSE(near_resonant(1e-3, 4.0));
}

TEST(Denominators, ScanIsStrictlyPositive) {
  const auto g = make_grid(1, 2 * kPi / 16, 64);
  for (const auto which : {BilinearOperator::omega, BilinearOperator::omega_tilde}) {
    const auto rep = denominator_scan(*g, kDefault, which);
    EXPECT_GT(rep.pairs, 0u);
    EXPECT_GT(rep.global_min, 0.0);
    EXPECT_FALSE(rep.resonant);
    for (const auto& s : rep.shells) {
      EXPECT_GE(s.min_abs, rep.global_min);
      const Modes first{s.argmin_xi[0] - s.argmin_eta[0], 0, 0};
      const double d = denominator(which, g->wavevector(g->flat_index(first)),
                                   g->wavevector(g->flat_index(s.argmin_eta)), 1.0);
      EXPECT_NEAR(std::abs(d), s.min_abs, 1e-9 * s.min_abs);
    }
  }
}

TEST(Omega, SparseInputsMatchDoubleLoopOracle) {
  const auto thin = [](SpectralField f, std::size_t keep) {
    for (std::size_t i = 0; i < f.size(); ++i)
      if (i % keep != 0) f[i] = 0.0;
    return f;
  };
  struct Case {
    int d, n;
    double L;
  };
  for (const auto [d, n, L] : {Case{2, 64, 2 * kPi / 16}, Case{3, 16, 2 * kPi / 16}}) {
    const auto g = make_grid(d, L, n);
    const auto p = DecompositionParams::make(1.0);
    for (const std::size_t keep : {2u, 5u}) {
      const auto f = thin(oracle::random_band_field(g, 300 + keep, 0.5), keep);
      const auto h = thin(oracle::random_band_field(g, 400 + keep, 0.5), 3);
      for (const auto which : {BilinearOperator::omega, BilinearOperator::omega_tilde}) {
        const auto fast = which == BilinearOperator::omega ? omega(f, h, p) : omega_tilde(f, h, p);
        const auto slow = oracle::bilinear(which, f, h, p);
        ASSERT_GT(slow.l2_norm(), 0.0) << "d = " << d << ", keep " << keep;
        EXPECT_LT(oracle::rel_error(fast, slow), 1e-12) << "d = " << d << ", keep " << keep;
      }
    }
  }
}

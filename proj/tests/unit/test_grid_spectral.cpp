#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <numbers>
#include <random>
#include <sstream>

#include "../support/oracles.hpp"
#include "zakharov/errors.hpp"
#include "zakharov/field.hpp"
#include "zakharov/field_io.hpp"
#include "zakharov/grid.hpp"

using namespace zakharov;

namespace {

constexpr double kPi = std::numbers::pi;

SpectralField plane_wave(const GridPtr& g, Modes m, cplx amplitude = 1.0) {
  SpectralField f(g);
  f[g->flat_index(m)] = amplitude;
  return f;
}

}  // namespace

TEST(Grid, LatticeOfSmallSquareGrid) {
  const auto g = make_grid(2, 2 * kPi, 8);
  EXPECT_EQ(g->size(), 64u);
  EXPECT_DOUBLE_EQ(g->wavenumber_unit(), 1.0);
  int lo = 100, hi = -100;
  for (std::size_t i = 0; i < g->size(); ++i)
    for (int ax = 0; ax < 2; ++ax) {
      lo = std::min(lo, g->modes(i)[ax]);
      hi = std::max(hi, g->modes(i)[ax]);
    }
  EXPECT_EQ(lo, -4);
  EXPECT_EQ(hi, 3);
  const auto xi = g->wavevector(g->flat_index({-4, 3, 0}));
  EXPECT_DOUBLE_EQ(xi[0], -4.0);
  EXPECT_DOUBLE_EQ(xi[1], 3.0);
}

TEST(Grid, CountsAndSpacing) {
  EXPECT_EQ(make_grid(3, 2 * kPi, 32)->size(), 32768u);
  EXPECT_DOUBLE_EQ(make_grid(1, 4 * kPi, 16)->wavenumber_unit(), 0.5);
}

TEST(Grid, RejectsBadShapes) {
  EXPECT_THROW(make_grid(4, 1.0, 16), InvalidArgument);
  EXPECT_THROW(make_grid(2, 1.0, 24), InvalidArgument);
  EXPECT_THROW(make_grid(2, 1.0, 4), InvalidArgument);
  EXPECT_THROW(make_grid(2, -1.0, 16), InvalidArgument);
}

TEST(Grid, FlatIndexRoundTrip) {
  const auto g = make_grid(3, 1.0, 8);
  for (std::size_t i = 0; i < g->size(); ++i) EXPECT_EQ(g->flat_index(g->modes(i)), i);
  EXPECT_EQ(g->flat_index({0, 0, 0}), 0u);
}

TEST(Transform, ZeroAndConstant) {
  const auto g = make_grid(2, 3.0, 16);
  const std::vector<cplx> zeros(g->size(), 0.0);
  for (const auto& c : transform(*g, zeros, Direction::forward)) EXPECT_EQ(c, cplx(0.0));

  const double value = 1.0 / std::sqrt(g->volume());  // unit L2
  const std::vector<cplx> constant(g->size(), value);
  const auto coeffs = transform(*g, constant, Direction::forward);
  EXPECT_NEAR(std::abs(coeffs[0] - 1.0), 0.0, 1e-14);
  for (std::size_t i = 1; i < coeffs.size(); ++i) EXPECT_LT(std::abs(coeffs[i]), 1e-14);
}

TEST(Transform, RandomRoundTripAndParseval) {
  for (int d = 1; d <= 3; ++d) {
    const auto g = make_grid(d, 2.5, d == 3 ? 8 : 32);
    std::mt19937_64 rng(7 + d);
    std::normal_distribution<double> n01;
    std::vector<cplx> x(g->size());
    for (auto& v : x) v = {n01(rng), n01(rng)};
    const auto c = transform(*g, x, Direction::forward);
    const auto back = transform(*g, c, Direction::inverse);
    double err = 0.0, scale = 0.0, l2x = 0.0, l2c = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
      err += std::norm(back[i] - x[i]);
      scale += std::norm(x[i]);
      l2x += std::norm(x[i]) * g->cell_volume();
      l2c += std::norm(c[i]);
    }
    EXPECT_LT(std::sqrt(err / scale), 1e-13) << "d = " << d;
    EXPECT_NEAR(l2x, l2c, 1e-12 * l2x) << "d = " << d;
  }
}

TEST(Transform, BandPrunedInverseMatchesFullInverse) {
  std::mt19937_64 rng(9);
  std::normal_distribution<double> n01;
  for (const int d : {1, 2, 3}) {
    const auto g = make_grid(d, 2.5, d == 3 ? 32 : 64);
    for (const int reach : {0, 1, 3, 7, 20}) {
      std::vector<cplx> data(g->size());
      for (std::size_t i = 0; i < data.size(); ++i) {
        const Modes m = g->modes(i);
        bool inside = true;
        for (int a = 0; a < d; ++a) inside = inside && std::abs(m[a]) <= reach;
        if (inside) data[i] = cplx(n01(rng), n01(rng));
      }
      auto full = data;
      g->fft_backward(full);
      g->fft_backward_band(data, reach);
      double err = 0.0, scale = 0.0;
      for (std::size_t i = 0; i < data.size(); ++i) {
        err = std::max(err, std::abs(data[i] - full[i]));
        scale = std::max(scale, std::abs(full[i]));
      }
      EXPECT_LE(err, 1e-13 * scale) << "d " << d << " reach " << reach;
    }
  }
}

TEST(Transform, PlaneWaveHasSingleCoefficient) {
  const auto g = make_grid(2, 2 * kPi, 16);
  const auto f = SpectralField::from_function(g, [&](const auto& x) {
    return std::exp(cplx(0.0, 3 * x[0] - 2 * x[1])) / std::sqrt(g->volume());
  });
  const std::size_t idx = g->flat_index({3, -2, 0});
  EXPECT_NEAR(std::abs(f[idx] - 1.0), 0.0, 1e-13);
  EXPECT_NEAR(f.l2_norm(), 1.0, 1e-13);
}

TEST(Multiplier, IdentityZeroAndLaplacian) {
  const auto g = make_grid(2, 2 * kPi, 16);
  const auto f = oracle::random_band_field(g, 3);
  const auto id = fourier_multiplier(f, [](const Wavevector&) { return cplx(1.0); });
  EXPECT_EQ(oracle::rel_error(id, f), 0.0);
  const auto zero = fourier_multiplier(f, [](const Wavevector&) { return cplx(0.0); });
  EXPECT_EQ(zero.l2_norm(), 0.0);

  const auto pw = plane_wave(g, {2, -3, 0});
  const auto lap = fourier_multiplier(pw, [](const Wavevector& w) { return cplx(w.magnitude * w.magnitude); });
  EXPECT_NEAR(std::abs(lap[g->flat_index({2, -3, 0})] - 13.0), 0.0, 1e-12);
}

TEST(Multiplier, NonFiniteSymbolIsGuarded) {
  const auto g = make_grid(1, 2 * kPi, 16);
  const auto f = plane_wave(g, {0, 0, 0});
  try {
    fourier_multiplier(f, [](const Wavevector& w) { return cplx(1.0 / w.magnitude); });
    FAIL() << "expected NumericalGuard";
  } catch (const NumericalGuard& e) {
    EXPECT_NE(std::string(e.what()).find("non-finite symbol at lattice index (0)"), std::string::npos) << e.what();
  }
}

TEST(DPower, PlaneWaveAndInversePair) {
  const auto g = make_grid(2, 2 * kPi, 16);
  const auto pw = plane_wave(g, {3, 4, 0});
  EXPECT_NEAR(std::abs(apply_D_power(pw, 1.0)[g->flat_index({3, 4, 0})] - 5.0), 0.0, 1e-13);

  auto f = oracle::random_band_field(g, 5);
  f[0] = 0.0;
  const auto back = apply_D_power(apply_D_power(f, -1.0), 1.0);
  EXPECT_LT(oracle::rel_error(back, f), 1e-12);

  const auto c = SpectralField::from_function(g, [](const auto& x) { return cplx(std::cos(x[0])); });
  const auto d2 = apply_D_power(c, 2.0);
  EXPECT_LT(oracle::rel_error(d2, c), 1e-13);  // -Laplacian eigenvalue 1
}

TEST(DPower, ZeroModePolicy) {
  const auto g = make_grid(1, 2 * kPi, 16);
  auto f = plane_wave(g, {0, 0, 0}, 2.0);
  f[g->flat_index({1, 0, 0})] = 1.0;
  const auto annihilated = apply_D_power(f, -1.0, ZeroMode::annihilate);
  EXPECT_EQ(annihilated[0], cplx(0.0));
  EXPECT_THROW(apply_D_power(f, -1.0, ZeroMode::reject), InvalidArgument);
  f[0] = 0.0;
  EXPECT_NO_THROW(apply_D_power(f, -1.0, ZeroMode::reject));
}

TEST(Propagators, IdentityAtZeroAndEigenfunctions) {
  const auto g = make_grid(2, 2 * kPi, 16);
  const auto f = oracle::random_band_field(g, 9);
  EXPECT_EQ(oracle::rel_error(schrodinger_propagate(f, 0.0), f), 0.0);
  EXPECT_EQ(oracle::rel_error(wave_propagate(f, 0.0, 2.0), f), 0.0);

  const Modes m{2, 1, 0};
  const auto pw = plane_wave(g, m);
  const double t = 0.37, alpha = 1.5;
  const auto s = schrodinger_propagate(pw, t);
  EXPECT_NEAR(std::abs(s[g->flat_index(m)] - std::exp(cplx(0.0, t * 5.0))), 0.0, 1e-14);
  const auto w = wave_propagate(pw, t, alpha);
  EXPECT_NEAR(std::abs(w[g->flat_index(m)] - std::exp(cplx(0.0, alpha * t * std::sqrt(5.0)))), 0.0, 1e-14);
  EXPECT_NEAR(wave_propagate(f, 1.3, alpha).l2_norm(), f.l2_norm(), 1e-13 * f.l2_norm());
}

TEST(Propagators, GaussianMatchesFreeSpaceSolution) {
  // S(t) solves u_t = -i Lap u, which takes exp(-|x|^2 / (2 s^2)) to
  // (s^2 / w)^{d/2} exp(-|x|^2 / (2 w)) with w = s^2 - 2 i t.
  const double L = 40.0, s = 1.0, t = 0.5;
  const auto g = make_grid(1, L, 512);
  const cplx w = s * s - cplx(0.0, 2.0 * t);
  const auto u0 = SpectralField::from_function(g, [&](const auto& x) {
    const double r = x[0] - L / 2;
    return cplx(std::exp(-r * r / (2 * s * s)));
  });
  const auto exact = SpectralField::from_function(g, [&](const auto& x) {
    const double r = x[0] - L / 2;
    return std::sqrt(s * s / w) * std::exp(-r * r / (2.0 * w));
  });
  EXPECT_LT(oracle::rel_error(schrodinger_propagate(u0, t), exact), 1e-6);
}

TEST(Dealias, BandAndProducts) {
  const auto g = make_grid(2, 2 * kPi, 32);
  const auto f = oracle::random_band_field(g, 21);
  EXPECT_EQ(oracle::rel_error(dealias(f), f), 0.0);

  SpectralField noise(g);
  for (std::size_t i = 0; i < g->size(); ++i) noise[i] = 1.0;
  const auto kept = dealias(noise);
  std::size_t survivors = 0;
  for (std::size_t i = 0; i < g->size(); ++i) survivors += kept[i] != cplx(0.0);
  const std::size_t per_axis = 2 * (32 / 3) + 1;
  EXPECT_EQ(survivors, per_axis * per_axis);

  const auto h = oracle::random_band_field(g, 22);
  EXPECT_LT(oracle::rel_error(product(f, h), oracle::product(f, h)), 1e-12);
  EXPECT_LT(oracle::rel_error(abs_squared(f), oracle::product(f, f.conj())), 1e-12);
}

TEST(Dealias, BandLimitedProductsMatchDirectConvolution) {
  const auto cut = [](SpectralField f, int c) {
    for (std::size_t i = 0; i < f.size(); ++i)
      for (int a = 0; a < f.grid().dim(); ++a)
        if (std::abs(f.grid().modes(i)[a]) > c) f[i] = 0.0;
    return f;
  };
  for (const int d : {1, 2, 3}) {
    const auto g = make_grid(d, 2 * kPi / 3, d == 1 ? 64 : d == 2 ? 32 : 16);
    const int band = g->dealias_band();
    for (const auto& [cf, cg] : std::vector<std::pair<int, int>>{{0, 0}, {1, 2}, {2, 1}, {3, band}, {band, band}}) {
      const auto f = cut(oracle::random_band_field(g, 60 + cf), cf);
      const auto h = cut(oracle::random_band_field(g, 70 + cg), cg);
      EXPECT_EQ(max_mode(f), cf);
      EXPECT_LT(oracle::rel_error(product(f, h), oracle::product(f, h)), 1e-13) << d << " " << cf << " " << cg;
      EXPECT_LT(oracle::rel_error(abs_squared(h), oracle::product(h, h.conj())), 1e-13) << d << " " << cg;
    }
  }
  EXPECT_EQ(max_mode(SpectralField(make_grid(2, 1.0, 8))), 0);
}

TEST(Dealias, TransferBetweenGrids) {
  const auto fine = make_grid(2, 3.0, 32);
  const auto coarse = resized_grid(*fine, 8);
  EXPECT_EQ(coarse->points(), 8);
  EXPECT_EQ(coarse, resized_grid(*fine, 8));
  SpectralField f(fine);
  f[fine->flat_index({3, -2, 0})] = 2.0;
  f[fine->flat_index({5, 0, 0})] = 1.0;  // does not fit on 8 points
  const auto down = transfer(f, coarse);
  EXPECT_EQ(down[coarse->flat_index({3, -2, 0})], cplx(2.0));
  EXPECT_DOUBLE_EQ(down.l2_norm(), 2.0);
  const auto up = transfer(down, fine);
  EXPECT_EQ(up[fine->flat_index({3, -2, 0})], cplx(2.0));
  EXPECT_DOUBLE_EQ(up.l2_norm(), 2.0);
}

TEST(Field, ConjugateAndParts) {
  const auto g = make_grid(2, 1.7, 16);
  const auto f = oracle::random_band_field(g, 4);
  const auto rebuilt = f.real_part() + cplx(0.0, 1.0) * f.imag_part();
  EXPECT_LT(oracle::rel_error(rebuilt, f), 1e-14);
  EXPECT_LT(oracle::rel_error(f.conj().conj(), f), 1e-14);
  EXPECT_NEAR(inner_product(f, f).real(), f.l2_norm() * f.l2_norm(), 1e-12);
}

TEST(Field, GridMismatchIsAnError) {
  const auto a = SpectralField(make_grid(2, 1.0, 16));
  const auto b = SpectralField(make_grid(2, 2.0, 16));
  EXPECT_THROW(a + b, InvalidArgument);
}

TEST(FieldIo, BinaryRoundTripAndCsv) {
  const auto g = make_grid(2, 1.25, 8);
  const auto f = oracle::random_band_field(g, 31);
  const auto path = std::filesystem::temp_directory_path() / "zakharov_field_io_test.zkf";
  write_field_binary(f, path);
  const auto back = read_field_binary(path);
  std::filesystem::remove(path);
  EXPECT_EQ(back.grid().box_length(), 1.25);
  EXPECT_EQ(oracle::rel_error(back, f), 0.0);
  std::ostringstream csv;
  write_field_csv(f, csv);
  EXPECT_EQ(csv.str().rfind("m1,m2,re,im\n", 0), 0u);
}

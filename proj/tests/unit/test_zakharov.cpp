#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "../support/oracles.hpp"
#include "zakharov/errors.hpp"
#include "zakharov/littlewood_paley.hpp"
#include "zakharov/sampling.hpp"
#include "zakharov/zakharov.hpp"

using namespace zakharov;

namespace {

constexpr double kPi = std::numbers::pi;

SpectralField plane_wave(const GridPtr& g, Modes m, cplx amplitude = 1.0) {
  SpectralField f(g);
  f[g->flat_index(m)] = amplitude;
  return f;
}

SpectralField from(const GridPtr& g, const std::function<cplx(const std::array<double, 3>&)>& f) {
  return SpectralField::from_function(g, f);
}

SpectralField small_random(const GridPtr& g, std::uint64_t seed, double h1, bool real = false) {
  FieldProfile p;
  p.decay = 2.0;
  p.cutoff = 4;
  p.seed = seed;
  p.real = real;
  return random_field(g, p, {TargetKind::sobolev, {1.0}}, h1);
}

}  // namespace

TEST(FirstOrder, Reduction) {
  const auto g = make_grid(2, 2 * kPi, 16);
  const double alpha = 1.5;
  const auto n0 = from(g, [](const auto& x) { return cplx(std::cos(x[0] + 2 * x[1])); });
  const SpectralField zero(g);
  EXPECT_EQ(oracle::rel_error(to_first_order(zero, n0, zero, alpha).N, n0), 0.0);

  const auto cosx = from(g, [](const auto& x) { return cplx(std::cos(x[0])); });
  const auto N = to_first_order(zero, zero, alpha * cosx, alpha).N;
  EXPECT_LT(oracle::rel_error(N, cplx(0.0, -1.0) * cosx), 1e-14);

  auto n1_mean_zero = small_random(g, 3, 1.0, true);
  n1_mean_zero[0] = 0.0;
  const auto state = to_first_order(zero, n0, n1_mean_zero, alpha);
  const auto back = from_first_order(state.N, alpha);
  EXPECT_LT(oracle::rel_error(back.n, n0), 1e-12);
  EXPECT_LT(oracle::rel_error(back.ndot, n1_mean_zero), 1e-12);
}

TEST(FirstOrder, WaveVariables) {
  const auto g = make_grid(1, 2 * kPi, 16);
  const auto n = from(g, [](const auto& x) { return cplx(std::sin(3 * x[0])); });
  EXPECT_EQ(from_first_order(n, 1.0).ndot.l2_norm(), 0.0);
  const auto cosx = from(g, [](const auto& x) { return cplx(std::cos(x[0])); });
  const auto w = from_first_order(cplx(0.0, -1.0) * cosx, 2.0);
  EXPECT_LT(oracle::rel_error(w.ndot, 2.0 * cosx), 1e-14);
  EXPECT_LT(w.n.l2_norm(), 1e-15);
}

TEST(FirstOrder, StrictZeroModeRejectsMeanOfIonVelocity) {
  const auto g = make_grid(1, 2 * kPi, 16);
  const SpectralField zero(g);
  const auto n1 = plane_wave(g, {0, 0, 0}, 1.0);
  EXPECT_NO_THROW(to_first_order(zero, zero, n1, 1.0, Nonlinearity::physical, ZeroMode::annihilate));
  EXPECT_THROW(to_first_order(zero, zero, n1, 1.0, Nonlinearity::physical, ZeroMode::reject), InvalidArgument);
}

TEST(Invariants, MassOfSimpleStates) {
  const auto g = make_grid(2, 3.0, 16);
  EXPECT_EQ(mass(SpectralField(g)), 0.0);
  const double A = 0.7, V = g->volume();
  const auto pw = from(g, [&](const auto& x) { return A * std::exp(cplx(0.0, g->wavenumber_unit() * (x[0] - 2 * x[1]))); });
  EXPECT_NEAR(mass(pw), A * A * V, 1e-13);
  const auto f = oracle::random_band_field(g, 5);
  EXPECT_NEAR(mass(schrodinger_propagate(f, 0.9)), mass(f), 1e-13 * mass(f));
}

TEST(Invariants, HamiltonianOfSimpleStates) {
  for (int d = 1; d <= 3; ++d) {
    const auto g = make_grid(d, 2 * kPi, 8);
    const SpectralField zero(g);
    const auto n = from(g, [](const auto& x) { return cplx(std::cos(x[0])); });
    EXPECT_NEAR(hamiltonian(zero, n, zero, 1.0), g->volume() / 4, 1e-12);
    const double A = 0.5;
    const auto u = from(g, [&](const auto& x) { return A * std::exp(cplx(0.0, 2 * x[0])); });
    EXPECT_NEAR(hamiltonian(u, zero, zero, 1.0), 4.0 * A * A * g->volume(), 1e-12);
  }
}

TEST(Invariants, HamiltonianMatchesDirectQuadrature) {
  // Analytic gradients and D^{-1} ndot, integrated by the trapezoid rule
  // (exact for these trigonometric polynomials up to the decay of e^{i sin y}).
  const auto g = make_grid(2, 2 * kPi, 32);
  const double alpha = 1.3;
  auto u_fn = [](double x, double y) { return (1.0 + 0.3 * std::cos(x)) * std::exp(cplx(0.0, std::sin(y))); };
  auto ux = [](double x, double y) { return -0.3 * std::sin(x) * std::exp(cplx(0.0, std::sin(y))); };
  auto uy = [](double x, double y) {
    return (1.0 + 0.3 * std::cos(x)) * cplx(0.0, std::cos(y)) * std::exp(cplx(0.0, std::sin(y)));
  };
  auto n_fn = [](double x, double y) { return 0.2 * std::cos(x + y) + 0.1; };
  auto ndot_fn = [](double x, double y) { return 0.1 * std::sin(2 * x) - 0.3 * std::cos(y); };
  auto dinv_ndot = [](double x, double y) { return 0.05 * std::sin(2 * x) - 0.3 * std::cos(y); };

  double direct = 0.0;
  for (std::size_t i = 0; i < g->size(); ++i) {
    const auto p = g->position(i);
    const double x = p[0], y = p[1];
    const double grad2 = std::norm(ux(x, y)) + std::norm(uy(x, y));
    const double dn = dinv_ndot(x, y), nn = n_fn(x, y);
    direct += grad2 + (dn * dn / (alpha * alpha) + nn * nn) / 2 - nn * std::norm(u_fn(x, y));
  }
  direct *= g->cell_volume();

  const auto u = from(g, [&](const auto& p) { return u_fn(p[0], p[1]); });
  const auto n = from(g, [&](const auto& p) { return cplx(n_fn(p[0], p[1])); });
  const auto ndot = from(g, [&](const auto& p) { return cplx(ndot_fn(p[0], p[1])); });
  EXPECT_NEAR(hamiltonian(u, n, ndot, alpha), direct, 1e-12 * std::abs(direct));
}

TEST(Rhs, FreeFlowsAndModeAgreement) {
  const auto g = make_grid(2, 2 * kPi, 16);
  const double alpha = 0.8;
  const auto u = oracle::random_band_field(g, 1);
  const auto N = oracle::random_band_field(g, 2);
  const SpectralField zero(g);
  const auto k2 = g->wavenumber_sq();
  const auto kabs = g->wavenumber_abs();

  const auto du = rhs({u, zero, 0.0, alpha, Nonlinearity::simplified}).du;
  const auto dN = rhs({zero, N, 0.0, alpha, Nonlinearity::simplified}).dN;
  for (std::size_t i = 0; i < g->size(); ++i) {
    ASSERT_NEAR(std::abs(du[i] - cplx(0.0, k2[i]) * u[i]), 0.0, 1e-12);
    ASSERT_NEAR(std::abs(dN[i] - cplx(0.0, alpha * kabs[i]) * N[i]), 0.0, 1e-12);
  }

  const auto real_N = N.real_part();
  const auto a = rhs({u, real_N, 0.0, alpha, Nonlinearity::simplified});
  const auto b = rhs({u, real_N, 0.0, alpha, Nonlinearity::physical});
  EXPECT_LT(oracle::rel_error(a.du, b.du), 1e-14);
  EXPECT_LT(oracle::rel_error(a.dN, b.dN), 1e-14);
}

TEST(ReferenceSolve, PlaneWaveIsExact) {
  const auto g = make_grid(2, 2 * kPi, 32);
  const Modes m{3, -2, 0};
  const auto u0 = plane_wave(g, m, 0.9);
  for (const auto mode : {Nonlinearity::simplified, Nonlinearity::physical}) {
    const auto traj = reference_solve({u0, SpectralField(g), 0.0, 1.0, mode}, 1.0, 1e-2, 100);
    EXPECT_LT((traj.u.back() - schrodinger_propagate(u0, 1.0)).l2_norm(), 1e-10);
    EXPECT_LT(traj.N.back().l2_norm(), 1e-10);
  }
}

TEST(ReferenceSolve, NoEnvelopeGivesFreeWave) {
  const auto g = make_grid(2, 2 * kPi, 32);
  const auto N0 = oracle::random_band_field(g, 3);
  const auto traj = reference_solve({SpectralField(g), N0, 0.0, 1.7, Nonlinearity::physical}, 0.5, 1e-2, 50);
  EXPECT_LT((traj.N.back() - wave_propagate(N0, 0.5, 1.7)).l2_norm(), 1e-12);
}

TEST(ReferenceSolve, FourthOrderSelfConvergence) {
  const auto g = make_grid(2, 2 * kPi, 32);
  const auto u0 = small_random(g, 5, 1.0);
  const auto N0 = small_random(g, 6, 0.5);
  const double T = 0.25;
  std::vector<SpectralField> finals;
  for (const double dt : {T / 8, T / 16, T / 32}) {
    const auto steps = static_cast<std::size_t>(std::lround(T / dt));
    finals.push_back(reference_solve({u0, N0, 0.0, 1.0, Nonlinearity::physical}, T, dt, steps).u.back());
  }
  const double order = std::log2((finals[0] - finals[1]).l2_norm() / (finals[1] - finals[2]).l2_norm());
  EXPECT_NEAR(order, 4.0, 0.3);
}

TEST(ReferenceSolve, ConservesMassAndEnergy) {
  const auto g = make_grid(2, 2 * kPi, 32);
  const double alpha = 1.0;
  const auto u0 = small_random(g, 7, 1.0);
  const auto n0 = small_random(g, 8, 0.3, true);
  const auto state = to_first_order(u0, n0, SpectralField(g), alpha, Nonlinearity::physical);
  const auto traj = reference_solve(state, 0.5, 1e-3, 100);
  auto energy = [&](std::size_t j) {
    const auto w = from_first_order(traj.N[j], alpha);
    return hamiltonian(traj.u[j], w.n, w.ndot, alpha);
  };
  const double m0 = mass(traj.u.front()), e0 = energy(0);
  for (std::size_t j = 1; j < traj.size(); ++j) {
    EXPECT_LT(std::abs(mass(traj.u[j]) - m0), 1e-10 * m0);
    EXPECT_LT(std::abs(energy(j) - e0), 1e-7 * std::abs(e0));
  }
}

TEST(ReferenceSolve, RejectsIncommensurateStep) {
  const auto g = make_grid(1, 2 * kPi, 16);
  const SpectralField zero(g);
  EXPECT_THROW(reference_solve({zero, zero, 0.0, 1.0, Nonlinearity::physical}, 1.0, 0.3), InvalidArgument);
}

TEST(ReferenceSolve, BlowUpTripsTheGuard) {
  const auto g = make_grid(2, 2 * kPi, 16);
  const auto u0 = small_random(g, 9, 1e5);
  const auto N0 = small_random(g, 10, 1e5);
  EXPECT_THROW(reference_solve({u0, N0, 0.0, 1.0, Nonlinearity::simplified}, 1.0, 0.1), NumericalGuard);
}

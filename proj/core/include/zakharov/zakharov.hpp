#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "zakharov/field.hpp"

namespace zakharov {

/// simplified: Schrodinger nonlinearity N u. physical: Re(N) u = (N + conj N) u / 2.
enum class Nonlinearity { simplified, physical };

std::string to_string(Nonlinearity mode);
Nonlinearity nonlinearity_from_string(const std::string& name);

/// First-order Zakharov state
///   (i d_t - Lap) u = NL(N) u,   (i d_t + alpha D) N = alpha D |u|^2.
struct ZakharovState {
  SpectralField u;
  SpectralField N;
  double t = 0.0;
  double alpha = 1.0;
  Nonlinearity mode = Nonlinearity::simplified;
};

/// N = n0 - i D^{-1} n1 / alpha. n0 and n1 must be real; the zero mode of n1
/// is handled per zero_mode.
ZakharovState to_first_order(const SpectralField& u0, const SpectralField& n0,
                             const SpectralField& n1, double alpha,
                             Nonlinearity mode = Nonlinearity::physical,
                             ZeroMode zero_mode = ZeroMode::annihilate);

struct WaveVariables {
  SpectralField n;
  SpectralField ndot;
};
/// n = Re N, ndot = -alpha D Im N.
WaveVariables from_first_order(const SpectralField& N, double alpha);

/// int |u|^2 dx.
double mass(const SpectralField& u);

/// int |grad u|^2 + (|D^{-1} ndot|^2 / alpha^2 + n^2) / 2 - n |u|^2 dx.
double hamiltonian(const SpectralField& u, const SpectralField& n, const SpectralField& ndot,
                   double alpha, ZeroMode zero_mode = ZeroMode::annihilate);

/// Nonlinear potential acting on u: N (simplified) or Re N (physical).
SpectralField potential(const SpectralField& N, Nonlinearity mode);

struct StateDerivative {
  SpectralField du;
  SpectralField dN;
};

/// d_t u = i|xi|^2 u - i NL(N)u,  d_t N = i alpha |xi| N - i alpha |xi| |u|^2 (hat side),
/// products dealiased.
StateDerivative rhs(const ZakharovState& state);

struct Trajectory {
  std::vector<double> times;
  std::vector<SpectralField> u;
  std::vector<SpectralField> N;
  double alpha = 1.0;
  Nonlinearity mode = Nonlinearity::simplified;
  double dt = 0.0;  // spacing of the stored nodes
  std::string scheme;

  std::size_t size() const { return times.size(); }
  ZakharovState state(std::size_t j) const { return {u[j], N[j], times[j], alpha, mode}; }
  const TorusGrid& grid() const { return u.front().grid(); }
};

/// Integrating-factor RK4 (Lawson) with exact linear flows; every stage is
/// dealiased. Stores every `save_every`-th step. T / dt must be an integer.
/// Throws NumericalGuard when a norm exceeds 1e12 or turns non-finite.
Trajectory reference_solve(const ZakharovState& initial, double T, double dt,
                           std::size_t save_every = 1);

}  // namespace zakharov

#include "zakharov/zakharov.hpp"

#include <cmath>
#include <sstream>

#include "zakharov/errors.hpp"

namespace zakharov {

namespace {

constexpr double kBlowUp = 1e12;

void require_real(const SpectralField& f, const char* name) {
  const double scale = std::max(f.l2_norm(), 1e-300);
  if (f.imag_part().l2_norm() > 1e-10 * scale)
    throw InvalidArgument(std::string(name) + " must be real-valued");
}

struct Pair {
  SpectralField u;
  SpectralField N;
};

Pair nonlinear_part(const SpectralField& u, const SpectralField& N, double alpha, Nonlinearity mode) {
  SpectralField du = product(potential(N, mode), u);
  du *= cplx(0.0, -1.0);
  SpectralField dN = apply_D_power(abs_squared(u), 1.0);
  dN *= cplx(0.0, -alpha);
  return {std::move(du), std::move(dN)};
}

Pair linear_flow(const Pair& y, double h, double alpha) {
  return {schrodinger_propagate(y.u, h), wave_propagate(y.N, h, alpha)};
}

Pair axpy(const Pair& y, double h, const Pair& k) {
  Pair out = y;
  out.u += cplx(h) * k.u;
  out.N += cplx(h) * k.N;
  return out;
}

void guard(const Pair& y, double t_last_good) {
  const double nu = y.u.l2_norm(), nn = y.N.l2_norm();
  if (!std::isfinite(nu) || !std::isfinite(nn) || nu > kBlowUp || nn > kBlowUp) {
    std::ostringstream os;
    os << "reference_solve: norm blow-up; last good time t = " << t_last_good;
    throw NumericalGuard(os.str());
  }
}

}  // namespace

std::string to_string(Nonlinearity mode) {
  return mode == Nonlinearity::simplified ? "simplified" : "physical";
}

Nonlinearity nonlinearity_from_string(const std::string& name) {
  if (name == "simplified") return Nonlinearity::simplified;
  if (name == "physical") return Nonlinearity::physical;
  throw InvalidArgument("unknown nonlinearity mode '" + name + "'");
}

ZakharovState to_first_order(const SpectralField& u0, const SpectralField& n0,
                             const SpectralField& n1, double alpha, Nonlinearity mode,
                             ZeroMode zero_mode) {
  if (!(alpha > 0.0)) throw InvalidArgument("ion sound speed alpha must be positive");
  require_same_grid(u0, n0, "to_first_order");
  require_same_grid(n0, n1, "to_first_order");
  require_real(n0, "n0");
  require_real(n1, "n1");
  SpectralField N = apply_D_power(n1, -1.0, zero_mode);
  N *= cplx(0.0, -1.0 / alpha);
  N += n0;
  return {u0, std::move(N), 0.0, alpha, mode};
}

WaveVariables from_first_order(const SpectralField& N, double alpha) {
  SpectralField ndot = apply_D_power(N.imag_part(), 1.0);
  ndot *= -alpha;
  return {N.real_part(), std::move(ndot)};
}

double mass(const SpectralField& u) {
  const double norm = u.l2_norm();
  return norm * norm;
}

double hamiltonian(const SpectralField& u, const SpectralField& n, const SpectralField& ndot,
                   double alpha, ZeroMode zero_mode) {
  require_same_grid(u, n, "hamiltonian");
  require_same_grid(n, ndot, "hamiltonian");
  const auto& grid = u.grid();
  const auto k2 = grid.wavenumber_sq();
  if (std::abs(ndot[0]) > 1e-12 * std::max(ndot.l2_norm(), 1e-300)) {
    if (zero_mode == ZeroMode::reject)
      throw InvalidArgument("hamiltonian: ndot must have zero mean");
    warn("hamiltonian: zero mode of ndot dropped from D^{-1}");
  }
  double gradient = 0.0, kinetic = 0.0, potential_energy = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    gradient += k2[i] * std::norm(u[i]);
    if (k2[i] > 0.0) kinetic += std::norm(ndot[i]) / (k2[i] * alpha * alpha);
    potential_energy += std::norm(n[i]);
  }
  const auto uu = u.physical();
  const auto nn = n.physical();
  double coupling = 0.0;
  for (std::size_t j = 0; j < uu.size(); ++j) coupling += nn[j].real() * std::norm(uu[j]);
  coupling *= grid.cell_volume();
  return gradient + 0.5 * (kinetic + potential_energy) - coupling;
}

SpectralField potential(const SpectralField& N, Nonlinearity mode) {
  return mode == Nonlinearity::simplified ? N : N.real_part();
}

StateDerivative rhs(const ZakharovState& state) {
  auto nl = nonlinear_part(state.u, state.N, state.alpha, state.mode);
  const auto k2 = state.u.grid().wavenumber_sq();
  const auto kabs = state.u.grid().wavenumber_abs();
  for (std::size_t i = 0; i < state.u.size(); ++i) {
    nl.u[i] += cplx(0.0, k2[i]) * state.u[i];
    nl.N[i] += cplx(0.0, state.alpha * kabs[i]) * state.N[i];
  }
  return {std::move(nl.u), std::move(nl.N)};
}

Trajectory reference_solve(const ZakharovState& initial, double T, double dt, std::size_t save_every) {
  if (!(dt > 0.0) || !(T >= 0.0)) throw InvalidArgument("reference_solve: need dt > 0 and T >= 0");
  if (save_every == 0) throw InvalidArgument("reference_solve: save_every must be positive");
  require_same_grid(initial.u, initial.N, "reference_solve");
  const double ratio = T / dt;
  const auto steps = static_cast<std::size_t>(std::llround(ratio));
  if (std::abs(ratio - static_cast<double>(steps)) > 1e-9 * std::max(1.0, ratio))
    throw InvalidArgument("reference_solve: T / dt must be an integer");
  if (steps % save_every != 0)
    throw InvalidArgument("reference_solve: step count must be a multiple of save_every");

  const double alpha = initial.alpha;
  const auto mode = initial.mode;
  auto F = [&](const Pair& y) { return nonlinear_part(y.u, y.N, alpha, mode); };

  Trajectory traj;
  traj.alpha = alpha;
  traj.mode = mode;
  traj.dt = dt * static_cast<double>(save_every);
  traj.scheme = "lawson-rk4";

  Pair y{dealias(initial.u), dealias(initial.N)};
  traj.times.push_back(initial.t);
  traj.u.push_back(y.u);
  traj.N.push_back(y.N);
  const double h = dt;
  for (std::size_t step = 1; step <= steps; ++step) {
    const Pair k1 = F(y);
    const Pair y_half = linear_flow(y, h / 2, alpha);
    const Pair k2 = F(linear_flow(axpy(y, h / 2, k1), h / 2, alpha));
    const Pair k3 = F(axpy(y_half, h / 2, k2));
    const Pair k4 = F(axpy(linear_flow(y, h, alpha), h, linear_flow(k3, h / 2, alpha)));

    Pair mid = k2;
    mid.u += k3.u;
    mid.N += k3.N;
    Pair next = linear_flow(y, h, alpha);
    next = axpy(next, h / 6, linear_flow(k1, h, alpha));
    next = axpy(next, h / 3, linear_flow(mid, h / 2, alpha));
    next = axpy(next, h / 6, k4);
    dealias_in_place(next.u);
    dealias_in_place(next.N);
    guard(next, initial.t + h * static_cast<double>(step - 1));
    y = std::move(next);
    if (step % save_every == 0) {
      traj.times.push_back(initial.t + h * static_cast<double>(step));
      traj.u.push_back(y.u);
      traj.N.push_back(y.N);
    }
  }
  return traj;
}

}  // namespace zakharov

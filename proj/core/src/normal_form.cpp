#include "zakharov/normal_form.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "zakharov/errors.hpp"
#include "zakharov/littlewood_paley.hpp"
#include "zakharov/sampling.hpp"

namespace zakharov {

namespace {

SpectralField propagate(Propagator kind, const SpectralField& f, double t, double alpha) {
  return kind == Propagator::schrodinger ? schrodinger_propagate(f, t) : wave_propagate(f, t, alpha);
}

const cplx kMinusI{0.0, -1.0};

// Quadratic and cubic forcing of the reduced equations at one time.
struct Forcing {
  SpectralField u;
  SpectralField N;
};

Forcing reduced_forcing(const SpectralField& u, const SpectralField& N, const DecompositionParams& p,
                        const NormalFormSigns& signs) {
  const SpectralField Nu = product(N, u);
  SpectralField fu = Nu - paraproduct(N, u, RegionTag::XL, p);
  fu += omega(cplx(p.alpha) * apply_D_power(abs_squared(u), 1.0), u, p);
  fu += omega(N, Nu, p);

  const SpectralField ubar = u.conj();
  SpectralField uu = product(u, ubar);
  uu -= paraproduct(u, ubar, {RegionTag::XL, RegionTag::LX}, p);
  SpectralField fN = cplx(p.alpha) * apply_D_power(uu, 1.0);
  SpectralField cubic = omega_tilde(Nu, u, p);
  cubic += cplx(static_cast<double>(signs.cross_cubic)) * omega_tilde(u, Nu, p);
  fN += apply_D_power(cubic, 1.0);
  return {std::move(fu), std::move(fN)};
}

SpectralField boundary_u(const SpectralField& u, const SpectralField& N, const DecompositionParams& p) {
  return omega(N, u, p);
}

SpectralField boundary_N(const SpectralField& u, const DecompositionParams& p) {
  return apply_D_power(omega_tilde(u, u, p), 1.0);
}

void require_nodes(std::size_t nodes) {
  if (nodes < 3) throw InvalidArgument("time integration needs at least three nodes");
}

double max_of(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, x);
  return m;
}

std::vector<SpectralField> difference(std::span<const SpectralField> a, std::span<const SpectralField> b) {
  std::vector<SpectralField> out;
  out.reserve(a.size());
  for (std::size_t j = 0; j < a.size(); ++j) out.push_back(a[j] - b[j]);
  return out;
}

}  // namespace

std::string NormalFormSigns::describe() const {
  std::ostringstream os;
  os << "boundary sign " << (boundary > 0 ? "+1" : "-1") << ", cross cubic sign "
     << (cross_cubic > 0 ? "+1" : "-1");
  if (boundary == -1 && cross_cubic == -1)
    os << " (boundary terms enter as S(t)Omega(0) - Omega(t); N-equation cubic term "
          "D Omega~(u,Nu) enters with a minus sign)";
  return os.str();
}

SpectralField duhamel(Propagator kind, std::span<const SpectralField> integrand, double dt,
                      double alpha) {
  require_nodes(integrand.size());
  const auto w = simpson_weights(integrand.size(), dt);
  const double t = dt * static_cast<double>(integrand.size() - 1);
  SpectralField acc(integrand.front().grid_ptr());
  for (std::size_t k = 0; k < integrand.size(); ++k) {
    const double s = dt * static_cast<double>(k);
    acc += cplx(w[k]) * propagate(kind, integrand[k], t - s, alpha);
  }
  acc *= kMinusI;
  return acc;
}

std::vector<SpectralField> duhamel_cumulative(Propagator kind, std::span<const SpectralField> integrand,
                                              double dt, double alpha) {
  require_nodes(integrand.size());
  if (kind == Propagator::wave && !(alpha > 0.0))
    throw InvalidArgument("wave_propagate: ion sound speed must be positive");
  const std::size_t M = integrand.size();
  const auto grid = integrand.front().grid_ptr();
  for (const auto& f : integrand) require_same_grid(f, integrand.front(), "duhamel_cumulative");
  const auto omega = kind == Propagator::schrodinger ? grid->wavenumber_sq() : grid->wavenumber_abs();
  const double speed = kind == Propagator::schrodinger ? 1.0 : alpha;

  // Every step is diagonal in Fourier space: run the recursion mode by mode
  // over the modes where some integrand is nonzero.
  std::vector<SpectralField> integral(M, SpectralField(grid));
  std::vector<cplx> g(M), acc(M);
  for (std::size_t i = 0; i < grid->size(); ++i) {
    bool any = false;
    for (std::size_t k = 0; k < M && !any; ++k) any = integrand[k][i] != cplx(0.0);
    if (!any) continue;
    const double w = speed * omega[i];
    for (std::size_t k = 0; k < M; ++k) {
      const double t = dt * static_cast<double>(k);
      g[k] = t == 0.0 ? integrand[k][i] : std::polar(1.0, -t * w) * integrand[k][i];
    }
    acc[0] = 0.0;
    acc[1] = cplx(dt / 12.0) * (cplx(5.0) * g[0] + cplx(8.0) * g[1] - g[2]);
    for (std::size_t j = 2; j < M; j += 2)
      acc[j] = acc[j - 2] + cplx(dt / 3.0) * (g[j - 2] + cplx(4.0) * g[j - 1] + g[j]);
    for (std::size_t j = 3; j < M; j += 2)
      acc[j] = acc[j - 3] + cplx(3.0 * dt / 8.0) * (g[j - 3] + cplx(3.0) * (g[j - 2] + g[j - 1]) + g[j]);
    for (std::size_t j = 0; j < M; ++j) {
      const double t = dt * static_cast<double>(j);
      integral[j][i] = kMinusI * (t == 0.0 ? acc[j] : std::polar(1.0, t * w) * acc[j]);
    }
  }
  return integral;
}

double xs_norm(std::span<const SpectralField> u, double dt, const ResolutionNorms& norms) {
  double sup = 0.0;
  std::vector<double> besov(u.size());
  const NormSpec b4{norms.s, 4.0, 2.0, false};
  for (std::size_t j = 0; j < u.size(); ++j) {
    sup = std::max(sup, sobolev_norm(u[j], norms.s));
    besov[j] = besov_norm(u[j], b4);
  }
  return sup + time_norm(besov, dt, norms.time_exponent());
}

double yl_norm(std::span<const SpectralField> N, const ResolutionNorms& norms) {
  double sup = 0.0;
  for (const auto& f : N) sup = std::max(sup, sobolev_norm(f, norms.l));
  return sup;
}

ResolutionValue resolution_norm(std::span<const SpectralField> u, std::span<const SpectralField> N,
                                double dt, const ResolutionNorms& norms) {
  return {xs_norm(u, dt, norms), yl_norm(N, norms)};
}

SampledPair linear_flow(const SpectralField& u0, const SpectralField& N0, double T, std::size_t nodes,
                        double alpha) {
  require_nodes(nodes);
  if (!(T > 0.0)) throw InvalidArgument("time horizon must be positive");
  SampledPair out;
  out.dt = T / static_cast<double>(nodes - 1);
  for (std::size_t j = 0; j < nodes; ++j) {
    const double t = out.dt * static_cast<double>(j);
    out.u.push_back(schrodinger_propagate(u0, t));
    out.N.push_back(wave_propagate(N0, t, alpha));
  }
  return out;
}

SampledPair picard_map(const SampledPair& iterate, const SpectralField& u0, const SpectralField& N0,
                       const DecompositionParams& params, const NormalFormSigns& signs) {
  const std::size_t M = iterate.u.size();
  require_nodes(M);
  if (iterate.N.size() != M) throw InvalidArgument("picard_map: u and N sample counts differ");
  const double b = static_cast<double>(signs.boundary);
  const double dt = iterate.dt;

  std::vector<SpectralField> fu, fN, bu, bN;
  fu.reserve(M);
  fN.reserve(M);
  bu.reserve(M);
  bN.reserve(M);
  for (std::size_t k = 0; k < M; ++k) {
    auto f = reduced_forcing(iterate.u[k], iterate.N[k], params, signs);
    fu.push_back(std::move(f.u));
    fN.push_back(std::move(f.N));
    bu.push_back(boundary_u(iterate.u[k], iterate.N[k], params));
    bN.push_back(boundary_N(iterate.u[k], params));
  }
  const auto du = duhamel_cumulative(Propagator::schrodinger, fu, dt, params.alpha);
  const auto dN = duhamel_cumulative(Propagator::wave, fN, dt, params.alpha);
  const SpectralField u_start = u0 - cplx(b) * boundary_u(u0, N0, params);
  const SpectralField N_start = N0 - cplx(b) * boundary_N(u0, params);

  SampledPair out;
  out.dt = dt;
  for (std::size_t j = 0; j < M; ++j) {
    const double t = dt * static_cast<double>(j);
    SpectralField u = schrodinger_propagate(u_start, t);
    u += cplx(b) * bu[j];
    u += du[j];
    SpectralField N = wave_propagate(N_start, t, params.alpha);
    N += cplx(b) * bN[j];
    N += dN[j];
    out.u.push_back(std::move(u));
    out.N.push_back(std::move(N));
  }
  return out;
}

PicardResult picard_solve(const SpectralField& u0, const SpectralField& N0, double T,
                          const DecompositionParams& params, const PicardOptions& options) {
  require_same_grid(u0, N0, "picard_solve");
  params.validate();
  SampledPair current = linear_flow(dealias(u0), dealias(N0), T, options.nodes, params.alpha);
  PicardResult result;
  int rising = 0;
  for (std::size_t m = 1; m <= options.iterations; ++m) {
    SampledPair next = picard_map(current, current.u.front(), current.N.front(), params, options.signs);
    const auto du = difference(next.u, current.u);
    const auto dN = difference(next.N, current.N);
    const double diff = resolution_norm(du, dN, next.dt, options.norms).total();
    const double scale = resolution_norm(next.u, next.N, next.dt, options.norms).total();
    if (!std::isfinite(diff)) throw NumericalGuard("picard_solve: non-finite iterate");
    result.differences.push_back(diff);
    if (result.differences.size() >= 2) {
      const double prev = result.differences[result.differences.size() - 2];
      const double ratio = prev > 0.0 ? diff / prev : 0.0;
      result.ratios.push_back(ratio);
      rising = ratio > 1.0 ? rising + 1 : 0;
      if (rising >= 2) {
        std::ostringstream os;
        os << "picard_solve: iteration diverges; last ratios "
           << result.ratios[result.ratios.size() - 2] << ", " << ratio;
        throw NumericalGuard(os.str());
      }
    }
    current = std::move(next);
    result.iterations = m;
    if (diff <= options.tolerance * scale) break;
  }
  Trajectory& traj = result.trajectory;
  traj.alpha = params.alpha;
  traj.mode = Nonlinearity::simplified;
  traj.dt = current.dt;
  traj.scheme = "picard-normal-form";
  for (std::size_t j = 0; j < current.u.size(); ++j)
    traj.times.push_back(current.dt * static_cast<double>(j));
  traj.u = std::move(current.u);
  traj.N = std::move(current.N);
  return result;
}

double ResidualReport::max_reduced() const { return std::max(max_of(reduced_u), max_of(reduced_N)); }
double ResidualReport::max_unreduced() const {
  return std::max(max_of(unreduced_u), max_of(unreduced_N));
}

ResidualReport normal_form_residual(const Trajectory& trajectory, const DecompositionParams& params,
                                    const NormalFormSigns& signs) {
  if (trajectory.mode != Nonlinearity::simplified)
    throw InvalidArgument("normal_form_residual: the reduction holds for the simplified nonlinearity");
  const std::size_t M = trajectory.size();
  if (M < 5) throw InvalidArgument("normal_form_residual: need at least five time nodes");
  if (std::abs(trajectory.alpha - params.alpha) > 1e-15 * params.alpha)
    throw InvalidArgument("normal_form_residual: alpha differs between trajectory and parameters");
  const double b = static_cast<double>(signs.boundary);
  const double dt = trajectory.dt;
  const double alpha = params.alpha;

  // Interaction-picture variables of the reduced and original unknowns.
  std::vector<SpectralField> wu, wN, wu0, wN0;
  for (std::size_t k = 0; k < M; ++k) {
    const auto& u = trajectory.u[k];
    const auto& N = trajectory.N[k];
    const double t = trajectory.times[k];
    wu.push_back(schrodinger_propagate(u - cplx(b) * boundary_u(u, N, params), -t));
    wN.push_back(wave_propagate(N - cplx(b) * boundary_N(u, params), -t, alpha));
    wu0.push_back(schrodinger_propagate(u, -t));
    wN0.push_back(wave_propagate(N, -t, alpha));
  }
  auto lhs = [&](const std::vector<SpectralField>& w, std::size_t j, Propagator kind) {
    SpectralField d = w[j - 2] - cplx(8.0) * w[j - 1] + cplx(8.0) * w[j + 1] - w[j + 2];
    d *= cplx(0.0, 1.0 / (12.0 * dt));
    return propagate(kind, d, trajectory.times[j], alpha);
  };

  ResidualReport report;
  for (std::size_t j = 2; j + 2 < M; ++j) {
    const auto& u = trajectory.u[j];
    const auto& N = trajectory.N[j];
    const auto f = reduced_forcing(u, N, params, signs);
    report.times.push_back(trajectory.times[j]);
    report.reduced_u.push_back((lhs(wu, j, Propagator::schrodinger) - f.u).l2_norm());
    report.reduced_N.push_back((lhs(wN, j, Propagator::wave) - f.N).l2_norm());
    report.unreduced_u.push_back((lhs(wu0, j, Propagator::schrodinger) - product(N, u)).l2_norm());
    report.unreduced_N.push_back(
        (lhs(wN0, j, Propagator::wave) - cplx(alpha) * apply_D_power(abs_squared(u), 1.0)).l2_norm());
  }
  return report;
}

double ContractionReport::max_lipschitz() const { return max_of(lipschitz); }
double ContractionReport::max_image_ratio() const { return max_of(image_ratio); }

namespace {

double lipschitz_from_images(const SampledPair& a, const SampledPair& b, const SampledPair& pa,
                             const SampledPair& pb, const ResolutionNorms& norms) {
  const double num =
      resolution_norm(difference(pa.u, pb.u), difference(pa.N, pb.N), a.dt, norms).total();
  const double den =
      resolution_norm(difference(a.u, b.u), difference(a.N, b.N), a.dt, norms).total();
  if (den == 0.0) return 0.0;
  return num / den;
}

}  // namespace

double lipschitz_factor(const SampledPair& a, const SampledPair& b, const SpectralField& u0,
                        const SpectralField& N0, const DecompositionParams& params,
                        const ResolutionNorms& norms, const NormalFormSigns& signs) {
  return lipschitz_from_images(a, b, picard_map(a, u0, N0, params, signs),
                               picard_map(b, u0, N0, params, signs), norms);
}

ContractionReport contraction_diagnostics(const SpectralField& u0, const SpectralField& N0, double T,
                                          const DecompositionParams& params,
                                          const ContractionOptions& options) {
  require_same_grid(u0, N0, "contraction_diagnostics");
  params.validate();
  const auto& norms = options.norms;
  ContractionReport report;
  report.beta = params.beta;
  report.eta = 2.5 * (sobolev_norm(u0, norms.s) + sobolev_norm(N0, norms.l));

  const auto grid = u0.grid_ptr();
  const double alpha = params.alpha;
  const int d = grid->dim();
  std::mt19937_64 rng(options.seed);
  std::uniform_real_distribution<double> radius(0.0, 1.0);

  auto draw = [&](std::uint64_t seed) {
    FieldProfile pu{ProfileKind::sobolev_random, norms.s + 0.5 * d + 1.0, 0, 0.5, 0, false, seed};
    FieldProfile pN{ProfileKind::sobolev_random, norms.l + 0.5 * d + 1.0, 0, 0.5, 0, false, seed + 1};
    const auto a = profile_field(grid, pu);
    const auto bN = profile_field(grid, pN);
    SampledPair pair = linear_flow(a, bN, T, options.nodes, alpha);
    const double size = resolution_norm(pair.u, pair.N, pair.dt, norms).total();
    const double scale = size > 0.0 ? radius(rng) * report.eta / size : 0.0;
    for (auto& f : pair.u) f *= scale;
    for (auto& f : pair.N) f *= scale;
    return pair;
  };

  for (std::size_t i = 0; i < options.samples; ++i) {
    const std::uint64_t seed = options.seed * 1000003ULL + 4 * i;
    const SampledPair a = draw(seed);
    const SampledPair b = draw(seed + 2);
    const auto pa = picard_map(a, u0, N0, params, options.signs);
    const auto pb = picard_map(b, u0, N0, params, options.signs);
    report.lipschitz.push_back(lipschitz_from_images(a, b, pa, pb, norms));
    double size = 0.0;
    for (const auto* image : {&pa, &pb})
      size = std::max(size, resolution_norm(image->u, image->N, image->dt, norms).total());
    report.image_ratio.push_back(report.eta > 0.0 ? size / report.eta : 0.0);
  }
  return report;
}

}  // namespace zakharov

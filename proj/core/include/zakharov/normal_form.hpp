#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "zakharov/bilinear.hpp"
#include "zakharov/zakharov.hpp"

namespace zakharov {

/// Signs of the normal-form integral equations
///   u = S(t)u0 - b S(t)Omega(N,u)(0) + b Omega(N,u)(t) - i int S(t-s)[...]
///   N = W(t)N0 - b W(t)D Omega~(u,u)(0) + b D Omega~(u,u)(t)
///       - i int W(t-s)[alpha D(u ubar)_{HH+aL+La} + D Omega~(Nu,u) + c D Omega~(u,Nu)]
/// with b = boundary and c = cross_cubic. With the resonance denominators
/// -|xi|^2 + alpha|xi-eta| + |eta|^2 and |xi-eta|^2 - |eta|^2 - alpha|xi| the
/// consistent choice is b = c = -1. The literal display corresponds to b = c = +1.
struct NormalFormSigns {
  int boundary = -1;
  int cross_cubic = -1;
  static NormalFormSigns consistent() { return {-1, -1}; }
  static NormalFormSigns literal() { return {1, 1}; }
  std::string describe() const;
};

enum class Propagator { schrodinger, wave };

/// -i int_0^t P(t-s) F(s) ds at t = (nodes-1) dt by composite Simpson
/// (3/8 closure on an odd interval count). Needs at least three nodes.
SpectralField duhamel(Propagator kind, std::span<const SpectralField> integrand, double dt,
                      double alpha = 1.0);

/// Same integral at every node t_j = j dt; node 1 uses the third-order
/// h (5, 8, -1) / 12 rule.
std::vector<SpectralField> duhamel_cumulative(Propagator kind, std::span<const SpectralField> integrand,
                                              double dt, double alpha = 1.0);

/// X(T) = X^s x Y^l. d = 3: sup_t H^s + L^{8/3}_t B^s_4 and sup_t H^l;
/// d = 1, 2: the Besov time exponent is 4. Sup over nodes stands in for C_t.
struct ResolutionNorms {
  int dim = 2;
  double s = 1.0;
  double l = 0.0;
  double time_exponent() const { return dim == 3 ? 8.0 / 3.0 : 4.0; }
};

struct ResolutionValue {
  double xs = 0.0;  // u part
  double yl = 0.0;  // N part
  double total() const { return xs + yl; }
};

double xs_norm(std::span<const SpectralField> u, double dt, const ResolutionNorms& norms);
double yl_norm(std::span<const SpectralField> N, const ResolutionNorms& norms);
ResolutionValue resolution_norm(std::span<const SpectralField> u, std::span<const SpectralField> N,
                                double dt, const ResolutionNorms& norms);

/// Time-sampled pair (u, N) on uniform nodes 0, dt, ..., T.
struct SampledPair {
  std::vector<SpectralField> u;
  std::vector<SpectralField> N;
  double dt = 0.0;
};

/// Free flows (S(t)u0, W(t)N0) on `nodes` uniform nodes over [0, T].
SampledPair linear_flow(const SpectralField& u0, const SpectralField& N0, double T,
                        std::size_t nodes, double alpha);

/// Phi(u, N): the right-hand sides of the integral equations evaluated on the
/// sampled pair. The t = 0 boundary terms use the data (u0, N0).
SampledPair picard_map(const SampledPair& iterate, const SpectralField& u0, const SpectralField& N0,
                       const DecompositionParams& params, const NormalFormSigns& signs = {});

struct PicardOptions {
  std::size_t iterations = 8;
  std::size_t nodes = 65;
  ResolutionNorms norms;
  NormalFormSigns signs;
  double tolerance = 1e-13;  // stop once the difference falls below tolerance * ||iterate||
};

struct PicardResult {
  Trajectory trajectory;
  std::vector<double> differences;  // X(T) norm of successive differences
  std::vector<double> ratios;       // differences[m] / differences[m-1]
  std::size_t iterations = 0;
};

/// Iterates Phi from the linear flow. Throws NumericalGuard when two
/// consecutive ratios exceed 1.
PicardResult picard_solve(const SpectralField& u0, const SpectralField& N0, double T,
                          const DecompositionParams& params, const PicardOptions& options = {});

struct ResidualReport {
  std::vector<double> times;  // interior nodes where the stencil fits
  std::vector<double> reduced_u;
  std::vector<double> reduced_N;
  std::vector<double> unreduced_u;
  std::vector<double> unreduced_N;
  double max_reduced() const;
  double max_unreduced() const;
};

/// Residuals of the reduced equations
///   (i d_t + D^2)(u - b Omega(N,u)) = (Nu)_{LH+HH+aL} + Omega(alpha D|u|^2, u) + Omega(N, Nu)
///   (i d_t + alpha D)(N - b D Omega~(u,u)) = alpha D|u|^2_{HH+aL+La} + D Omega~(Nu,u) + c D Omega~(u,Nu)
/// and of the original equations, along a simplified-mode trajectory. Time
/// derivatives are 4th-order central differences of P(-t) v(t), so
/// (i d_t + L) v = i P(t) d_t (P(-t) v).
ResidualReport normal_form_residual(const Trajectory& trajectory, const DecompositionParams& params,
                                    const NormalFormSigns& signs = {});

struct ContractionOptions {
  std::size_t samples = 50;
  std::size_t nodes = 33;
  std::uint64_t seed = 1;
  ResolutionNorms norms;
  NormalFormSigns signs;
};

struct ContractionReport {
  double eta = 0.0;
  double beta = 0.0;
  std::vector<double> lipschitz;     // per sample
  std::vector<double> image_ratio;   // ||Phi(u,N)||_X / eta per sample
  double max_lipschitz() const;
  double max_image_ratio() const;
};

/// eta = 5/2 (||u0||_{H^s} + ||N0||_{H^l}). Samples are free flows of random
/// data with H^s / H^l matched decay, scaled into the X(T) ball of radius eta.
ContractionReport contraction_diagnostics(const SpectralField& u0, const SpectralField& N0, double T,
                                          const DecompositionParams& params,
                                          const ContractionOptions& options = {});

/// Lipschitz factor of Phi for two given sampled pairs.
double lipschitz_factor(const SampledPair& a, const SampledPair& b, const SpectralField& u0,
                        const SpectralField& N0, const DecompositionParams& params,
                        const ResolutionNorms& norms, const NormalFormSigns& signs = {});

}  // namespace zakharov

#pragma once

#include <cstdint>

#include "heatlab/estimate.hpp"
#include "heatlab/geometry.hpp"
#include "heatlab/rng.hpp"

namespace heatlab {

/// Heat content and heat loss of a single ball, H + F = |B| exactly.
struct BallHeat {
  Estimate content;
  Estimate loss;
};

/// Deterministic heat content / loss of B(0; r) in R^m.
///
/// Uses H = E[lens(|V|)] and F = E[|B| - lens(|V|)] with V ~ N(0, 2t I),
/// integrated over u = |V| / sqrt(t) with its chi-type density. For
/// sqrt(t) < r/50 the loss is integrated directly (deficit form) and H is
/// formed as |B| - F, so neither quantity suffers cancellation. The Gaussian
/// tail beyond the quadrature window is bounded with the incomplete gamma
/// function. The returned error is at most `tol` unless the panel budget is
/// exhausted, in which case ConvergenceError is thrown.
BallHeat ball_heat(int m, double r, double t, double tol);

Estimate heat_content_ball(int m, double r, double t, double tol);
Estimate heat_loss_ball(int m, double r, double t, double tol);

/// Tallies of one Monte Carlo pass: x uniform on Omega, y = x + sqrt(2t) Z.
struct HeatTally {
  std::uint64_t samples = 0;
  std::uint64_t same_ball = 0;   ///< y landed in the ball x was drawn from
  std::uint64_t other_ball = 0;  ///< y landed in a different ball
};

/// Sample k uses CounterRng(stream, k); chunks of samples are spread over
/// `threads` workers and summed in index order.
HeatTally heat_tally(const BallUnion& omega, double t, std::uint64_t n, Stream stream, unsigned threads = 1);

/// |Omega| times a hit fraction, with its binomial standard error.
Estimate tally_estimate(double volume, std::uint64_t hits, std::uint64_t samples);

Estimate heat_content_mc(const BallUnion& omega, double t, std::uint64_t n, Stream stream, unsigned threads = 1);
Estimate heat_loss_mc(const BallUnion& omega, double t, std::uint64_t n, Stream stream, unsigned threads = 1);

/// Off-diagonal contribution  ∫_{B_i} dx ∫_{B_j} dy p(x, y; t).
///
/// Reduced to  ∫_0^{r_i+r_j} dρ ρ^{m-1} lens(r_i, r_j, ρ) ∫_{S^{m-1}} p(|D - ρω|)
/// with D = z_j - z_i; the spherical average collapses to a single polar
/// angle with weight sin^{m-2}. Both levels use adaptive Gauss–Kronrod.
Estimate cross_term(int m, const Ball& bi, const Ball& bj, double t, double tol);

/// Spherical average helper: ∫_0^π exp(-kappa (1 - cos θ)) sin^{m-2} θ dθ.
double polar_angle_weight(int m, double kappa, double rel_tol = 1e-12);

}  // namespace heatlab

#pragma once

#include <cstdint>
#include <span>

#include "heatlab/estimate.hpp"
#include "heatlab/geometry.hpp"
#include "heatlab/rng.hpp"

namespace heatlab {

/// |B(x; R) ∩ Omega|, summed ball by ball (exact by disjointness).
double mu(const BallUnion& omega, std::span<const double> x, double R);

/// |B(x; R) - Omega| = omega_m R^m - mu.
double nu(const BallUnion& omega, std::span<const double> x, double R);

/// The pair  G_mu(t) = ∫_Ω mu(x; √t) / |B(x; √t)| dx  and
/// G_nu(t) = ∫_Ω nu(x; √t) / |B(x; √t)| dx.
struct FunctionalValue {
  double t = 0.0;
  Estimate g_mu;
  Estimate g_nu;
};

/// Monte Carlo over x uniform in Omega; mu is exact at each sample. Sample k
/// draws its point exactly as heat_tally does for the same stream, so both
/// see the same x_k. g_mu + g_nu = |Omega| per sample.
FunctionalValue functionals_mc(const BallUnion& omega, double t, std::uint64_t n, Stream stream,
                               unsigned threads = 1);

Estimate g_mu(const BallUnion& omega, double t, std::uint64_t n, Stream stream, unsigned threads = 1);
Estimate g_nu(const BallUnion& omega, double t, std::uint64_t n, Stream stream, unsigned threads = 1);

/// Deterministic G_mu / G_nu for a single ball B(0; r): mu depends only on
/// |x|, leaving a radial integral of lens volumes.
FunctionalValue functionals_ball(int m, double r, double t, double tol);

}  // namespace heatlab

#pragma once

// Reference values computed once with 30-digit arithmetic (mpmath) and
// frozen here. Library code never reads this file.

namespace oracle {

/// f(f(1)) for f(t) = t^{1/2} / Gamma(3/2).
inline constexpr double compose_stable_half_at_one = 1.1986229503064475;
/// f(1) for the same f, i.e. 2 / sqrt(pi).
inline constexpr double stable_half_at_one = 1.1283791670955126;
/// 1 / Gamma(1/2) = 1 / sqrt(pi).
inline constexpr double inv_gamma_half = 0.5641895835477563;
/// exp(-(1 - e^{-1})): Laplace functional of the unit Poisson subordinator at lambda = tau = 1.
inline constexpr double unit_poisson_laplace = 0.5314636053866157;
/// exp(-2).
inline constexpr double exp_minus_two = 0.1353352832366127;
/// 2^{-1/2}.
inline constexpr double inv_sqrt_two = 0.7071067811865476;
/// Gamma(3/2) = sqrt(pi) / 2: stable scale giving phi(lambda) = sqrt(lambda).
inline constexpr double gamma_three_halves = 0.8862269254527580;
/// 1 - e^{-1}.
inline constexpr double one_minus_inv_e = 0.6321205588285577;

}  // namespace oracle

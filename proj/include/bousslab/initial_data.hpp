// initial_data.hpp
// Mean-free initial data families: band-limited solenoidal noise and a
// Taylor-Green-type single-mode pair, rescaled to a prescribed H2 size.

#pragma once

#include "bousslab/linear_propagator.hpp"
#include "bousslab/rng.hpp"

namespace bousslab {

// Random divergence-free band-limited data: independent Gaussian amplitudes
// on modes with band_lo <= max(|m1|, |m2|) <= band_hi, Hermitian-symmetrized,
// Leray-projected, dealiased, and rescaled so that
// sqrt(||u||_H2^2 + ||theta||_H2^2) = eps_h2 exactly.
LinearState random_solenoidal(const FrequencyGrid& g, int band_lo, int band_hi, double eps_h2,
                              SplitMix64& rng);

// Taylor-Green velocity (sin x1 cos x2, -cos x1 sin x2) with a single-mode
// temperature sin x1 sin x2, rescaled to eps_h2.
LinearState taylor_green(const FrequencyGrid& g, double eps_h2);

// Rescale (u, theta) so the combined H2 norm equals eps_h2.
void rescale_h2(LinearState& s, double eps_h2);

} // namespace bousslab

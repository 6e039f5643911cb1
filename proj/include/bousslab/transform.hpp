// transform.hpp
// FFTW-backed transforms between physical samples and normalized Fourier
// coefficients. Plans are cached per grid size behind a mutex; execution on
// caller-owned buffers is thread safe.

#pragma once

#include "bousslab/spectral_field.hpp"

namespace bousslab {

// Physical samples -> coefficients (forward DFT scaled by 1/(n1*n2)).
SpectralField to_spectral(const PhysicalField& f);

// Coefficients -> physical samples. Imaginary residue from non-Hermitian
// input is discarded; for Hermitian fields it is roundoff.
PhysicalField to_physical(const SpectralField& f);

// Complex-to-complex variants used internally and by tests.
std::vector<cplx> forward_c2c(const FrequencyGrid& g, const std::vector<cplx>& samples);
std::vector<cplx> backward_c2c(const FrequencyGrid& g, const std::vector<cplx>& coeffs);

} // namespace bousslab

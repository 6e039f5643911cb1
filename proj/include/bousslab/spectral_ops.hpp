// spectral_ops.hpp
// Fourier-multiplier operators and norms on periodic fields: derivatives,
// inverse Laplacian, Helmholtz-Leray projection, 2/3-rule dealiasing,
// (anisotropic) Sobolev norms, and physical-space products.
//
// Conventions fixed here once:
//   * coefficients are normalized, f(x) = sum_k c(k) e^{i k.x};
//   * the Plancherel weight per mode is grid.cellweight() = (2*pi)^2*L1*L2,
//     so ||f||_L2^2 = cellweight * sum |c|^2 equals the physical integral;
//   * Delta^{-1}, the Leray projection and all Riesz-type multipliers act as
//     0 on the k = 0 mode (perturbation fields are mean-free).

#pragma once

#include "bousslab/spectral_field.hpp"

namespace bousslab {

// d^order/dx_axis^order as the multiplier (i*k_axis)^order, order >= 1,
// axis in {1,2}. Nyquist lines are zeroed for odd orders so Hermitian
// symmetry survives.
SpectralField derivative(const SpectralField& f, int axis, int order);

// Multiplier -1/|k|^2; the k = 0 coefficient is set to 0.
SpectralField inverse_laplacian(const SpectralField& f);

// P = I - k k^T/|k|^2 per mode; k = 0 zeroed.
VectorField leray_project(const VectorField& v);

// i k . v per mode.
SpectralField divergence(const VectorField& v);

// Zeroes |index1| > n1/3 or |index2| > n2/3.
SpectralField dealias(const SpectralField& f);
VectorField dealias(const VectorField& v);

// ( sum_k |k|^{2s} |k_axis|^{-2 sigma} |c(k)|^2 * cellweight )^{1/2}.
// If sigma > 0 (or s < 0), modes on the singular set must carry zero
// amplitude (tolerance 1e-14 relative to the largest coefficient); nonzero
// amplitude there is an error rather than silently dropped mass.
double aniso_norm(const SpectralField& f, double s, double sigma, int axis);

// Plancherel L2 norm (aniso_norm with s = sigma = 0).
double l2_norm(const SpectralField& f);
double l2_norm(const VectorField& v);

// Homogeneous Sobolev seminorm |||k|^s f||.
double hs_seminorm(const SpectralField& f, double s);

// H1/H2 norms per the fixed convention (||f||^2 + ||grad f||^2 [+ ||lap f||^2])^{1/2}.
double h1_norm(const SpectralField& f);
double h2_norm(const SpectralField& f);
double h1_norm(const VectorField& v);
double h2_norm(const VectorField& v);

// || d_axis f ||_{H2}-type seminorm: H2 norm of the first derivative.
double deriv_h2_norm(const SpectralField& f, int axis);
double deriv_h2_norm(const VectorField& v, int axis);
double deriv_l2_norm(const SpectralField& f, int axis);
double deriv_l2_norm(const VectorField& v, int axis);

// Real L2 inner product of real fields, integral f g dx.
double inner(const SpectralField& f, const SpectralField& g);
double inner(const VectorField& a, const VectorField& b);

// Riesz multiplier |k_1|/|k| (L2-norm equivalent of d_1 (-Delta)^{-1/2}).
SpectralField riesz1(const SpectralField& f);

// Physical-space product with dealiasing: T(f*g).
SpectralField pointwise_product(const SpectralField& f, const SpectralField& g);

// Largest mode-wise divergence relative to the field size (0 for exactly
// divergence-free fields).
double divergence_rel(const VectorField& v);

// Zero the mean (k = 0) coefficient.
void remove_mean(SpectralField& f);

} // namespace bousslab

// spectral_field.hpp
// Complex Fourier coefficients of a real scalar field, plus the two-component
// vector wrapper. Coefficients are normalized so f(x) = sum_k c[k] e^{i k.x}.

#pragma once

#include "bousslab/frequency_grid.hpp"

#include <complex>
#include <vector>

namespace bousslab {

using cplx = std::complex<double>;

struct SpectralField {
    FrequencyGrid grid;
    std::vector<cplx> c;

    SpectralField() = default;
    explicit SpectralField(const FrequencyGrid& g) : grid(g), c(g.size(), cplx{0.0, 0.0}) {}

    cplx& operator()(int i1, int i2) { return c[grid.at(i1, i2)]; }
    const cplx& operator()(int i1, int i2) const { return c[grid.at(i1, i2)]; }

    SpectralField& operator+=(const SpectralField& o);
    SpectralField& operator-=(const SpectralField& o);
    SpectralField& operator*=(double a);
};

SpectralField operator+(SpectralField a, const SpectralField& b);
SpectralField operator-(SpectralField a, const SpectralField& b);
SpectralField operator*(double a, SpectralField f);

struct VectorField {
    SpectralField u1, u2;

    VectorField() = default;
    explicit VectorField(const FrequencyGrid& g) : u1(g), u2(g) {}
    const FrequencyGrid& grid() const { return u1.grid; }
};

VectorField operator+(const VectorField& a, const VectorField& b);
VectorField operator-(const VectorField& a, const VectorField& b);
VectorField operator*(double a, const VectorField& v);

// Real samples on the physical collocation grid, same row-major layout.
struct PhysicalField {
    FrequencyGrid grid;
    std::vector<double> v;

    PhysicalField() = default;
    explicit PhysicalField(const FrequencyGrid& g) : grid(g), v(g.size(), 0.0) {}
};

// Projects onto exact Hermitian symmetry c(-k) = conj(c(k)); the symmetric
// part is kept, so fields built from random complex noise become real-valued.
void enforce_hermitian(SpectralField& f);

// Largest |c(-k) - conj(c(k))| over the lattice; 0 for a real field.
double hermitian_defect(const SpectralField& f);

} // namespace bousslab

#include "bousslab/spectral_field.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace bousslab {

static void check_same_grid(const SpectralField& a, const SpectralField& b)
{
    if (!(a.grid == b.grid))
        throw std::invalid_argument("spectral field arithmetic: grid mismatch");
}

SpectralField& SpectralField::operator+=(const SpectralField& o)
{
    check_same_grid(*this, o);
    for (std::size_t i = 0; i < c.size(); ++i) c[i] += o.c[i];
    return *this;
}

SpectralField& SpectralField::operator-=(const SpectralField& o)
{
    check_same_grid(*this, o);
    for (std::size_t i = 0; i < c.size(); ++i) c[i] -= o.c[i];
    return *this;
}

SpectralField& SpectralField::operator*=(double a)
{
    for (auto& z : c) z *= a;
    return *this;
}

SpectralField operator+(SpectralField a, const SpectralField& b) { return a += b; }
SpectralField operator-(SpectralField a, const SpectralField& b) { return a -= b; }
SpectralField operator*(double a, SpectralField f) { return f *= a; }

VectorField operator+(const VectorField& a, const VectorField& b)
{
    VectorField r;
    r.u1 = a.u1 + b.u1;
    r.u2 = a.u2 + b.u2;
    return r;
}

VectorField operator-(const VectorField& a, const VectorField& b)
{
    VectorField r;
    r.u1 = a.u1 - b.u1;
    r.u2 = a.u2 - b.u2;
    return r;
}

VectorField operator*(double a, const VectorField& v)
{
    VectorField r;
    r.u1 = a * v.u1;
    r.u2 = a * v.u2;
    return r;
}

// Index of the mirrored mode -k for array position i (mod n).
static inline int mirror(int i, int n) { return (n - i) % n; }

void enforce_hermitian(SpectralField& f)
{
    const int n1 = f.grid.n1, n2 = f.grid.n2;
    for (int i = 0; i < n1; ++i) {
        const int im = mirror(i, n1);
        for (int j = 0; j < n2; ++j) {
            const int jm = mirror(j, n2);
            if (i > im || (i == im && j > jm)) continue; // visit each pair once
            cplx& a = f(i, j);
            cplx& b = f(im, jm);
            if (i == im && j == jm) {
                a = cplx{a.real(), 0.0}; // self-conjugate mode must be real
            } else {
                const cplx s = 0.5 * (a + std::conj(b));
                a = s;
                b = std::conj(s);
            }
        }
    }
}

double hermitian_defect(const SpectralField& f)
{
    const int n1 = f.grid.n1, n2 = f.grid.n2;
    double worst = 0.0;
    for (int i = 0; i < n1; ++i) {
        const int im = mirror(i, n1);
        for (int j = 0; j < n2; ++j) {
            const int jm = mirror(j, n2);
            worst = std::max(worst, std::abs(f(im, jm) - std::conj(f(i, j))));
        }
    }
    return worst;
}

} // namespace bousslab

// frequency_grid.hpp
// Discrete wavenumber lattice for a periodic box [0, 2*pi*L1) x [0, 2*pi*L2).
// Mode indices follow the standard FFT layout {0..n/2-1, -n/2..-1}; the
// wavenumber of index m along axis i is m / Li.

#pragma once

#include <cstddef>
#include <stdexcept>
#include <vector>

namespace bousslab {

struct FrequencyGrid {
    int n1 = 0, n2 = 0;
    double L1 = 1.0, L2 = 1.0;
    std::vector<int> m1, m2;    // integer indices per array position
    std::vector<double> k1, k2; // wavenumbers m/L per array position

    std::size_t size() const { return static_cast<std::size_t>(n1) * n2; }
    std::size_t at(int i1, int i2) const { return static_cast<std::size_t>(i1) * n2 + i2; }

    bool operator==(const FrequencyGrid& o) const
    {
        return n1 == o.n1 && n2 == o.n2 && L1 == o.L1 && L2 == o.L2;
    }

    // Domain area (2*pi*L1)*(2*pi*L2); the per-mode Plancherel weight.
    double cellweight() const;

    // Physical grid spacing along each axis.
    double dx1() const;
    double dx2() const;
};

// Builds the wavenumber lattice. n1, n2 must be even and >= 4; L1, L2 > 0.
FrequencyGrid make_grid(int n1, int n2, double L1, double L2);

} // namespace bousslab

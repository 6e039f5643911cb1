#include "bousslab/frequency_grid.hpp"

#include <cmath>
#include <numbers>

namespace bousslab {

double FrequencyGrid::cellweight() const
{
    const double two_pi = 2.0 * std::numbers::pi;
    return (two_pi * L1) * (two_pi * L2);
}

double FrequencyGrid::dx1() const { return 2.0 * std::numbers::pi * L1 / n1; }
double FrequencyGrid::dx2() const { return 2.0 * std::numbers::pi * L2 / n2; }

FrequencyGrid make_grid(int n1, int n2, double L1, double L2)
{
    if (n1 < 4 || n2 < 4)
        throw std::invalid_argument("make_grid: mode counts must be >= 4");
    if (n1 % 2 != 0 || n2 % 2 != 0)
        throw std::invalid_argument("make_grid: mode counts must be even");
    if (!(L1 > 0.0) || !(L2 > 0.0))
        throw std::invalid_argument("make_grid: domain scales must be positive");

    FrequencyGrid g;
    g.n1 = n1;
    g.n2 = n2;
    g.L1 = L1;
    g.L2 = L2;
    g.m1.resize(n1);
    g.m2.resize(n2);
    g.k1.resize(n1);
    g.k2.resize(n2);
    for (int i = 0; i < n1; ++i) {
        g.m1[i] = (i < n1 / 2) ? i : i - n1;
        g.k1[i] = g.m1[i] / L1;
    }
    for (int j = 0; j < n2; ++j) {
        g.m2[j] = (j < n2 / 2) ? j : j - n2;
        g.k2[j] = g.m2[j] / L2;
    }
    return g;
}

} // namespace bousslab

#include "bousslab/transform.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>
#include <stdexcept>

namespace bousslab {

namespace {

struct Plans {
    fftw_plan fwd = nullptr; // c2c forward
    fftw_plan bwd = nullptr; // c2c backward
    fftw_plan r2c = nullptr; // real -> half spectrum
    fftw_plan c2r = nullptr; // half spectrum -> real
};

// Plan cache keyed on (n1, n2). FFTW_ESTIMATE keeps plan selection (and hence
// rounding) independent of runtime timing; FFTW_UNALIGNED lets us execute on
// arbitrary caller buffers via fftw_execute_dft*.
class PlanCache {
  public:
    Plans get(int n1, int n2)
    {
        std::lock_guard<std::mutex> lock(mtx_);
        auto key = std::make_pair(n1, n2);
        auto it = plans_.find(key);
        if (it != plans_.end()) return it->second;

        const std::size_t n = static_cast<std::size_t>(n1) * n2;
        std::vector<cplx> a(n), b(n);
        std::vector<double> r(n);
        std::vector<cplx> h(static_cast<std::size_t>(n1) * (n2 / 2 + 1));
        auto* pa = reinterpret_cast<fftw_complex*>(a.data());
        auto* pb = reinterpret_cast<fftw_complex*>(b.data());
        auto* ph = reinterpret_cast<fftw_complex*>(h.data());
        Plans p;
        const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
        p.fwd = fftw_plan_dft_2d(n1, n2, pa, pb, FFTW_FORWARD, flags);
        p.bwd = fftw_plan_dft_2d(n1, n2, pa, pb, FFTW_BACKWARD, flags);
        p.r2c = fftw_plan_dft_r2c_2d(n1, n2, r.data(), ph, flags);
        p.c2r = fftw_plan_dft_c2r_2d(n1, n2, ph, r.data(), flags);
        if (!p.fwd || !p.bwd || !p.r2c || !p.c2r)
            throw std::runtime_error("transform: FFTW plan creation failed");
        plans_[key] = p;
        return p;
    }

  private:
    std::mutex mtx_;
    std::map<std::pair<int, int>, Plans> plans_;
};

PlanCache& cache()
{
    static PlanCache c;
    return c;
}

} // namespace

std::vector<cplx> forward_c2c(const FrequencyGrid& g, const std::vector<cplx>& samples)
{
    if (samples.size() != g.size()) throw std::invalid_argument("forward_c2c: size mismatch");
    Plans p = cache().get(g.n1, g.n2);
    std::vector<cplx> in = samples, out(samples.size());
    fftw_execute_dft(p.fwd, reinterpret_cast<fftw_complex*>(in.data()),
                     reinterpret_cast<fftw_complex*>(out.data()));
    const double scale = 1.0 / static_cast<double>(g.size());
    for (auto& z : out) z *= scale;
    return out;
}

std::vector<cplx> backward_c2c(const FrequencyGrid& g, const std::vector<cplx>& coeffs)
{
    if (coeffs.size() != g.size()) throw std::invalid_argument("backward_c2c: size mismatch");
    Plans p = cache().get(g.n1, g.n2);
    std::vector<cplx> in = coeffs, out(coeffs.size());
    fftw_execute_dft(p.bwd, reinterpret_cast<fftw_complex*>(in.data()),
                     reinterpret_cast<fftw_complex*>(out.data()));
    return out;
}

// Real fields ride the half-spectrum transforms (the Hermitian invariant
// holds for every field in this artifact); the full lattice is mirrored on
// the way out, so to_spectral output is exactly Hermitian.
SpectralField to_spectral(const PhysicalField& f)
{
    const auto& g = f.grid;
    Plans p = cache().get(g.n1, g.n2);
    const int nh = g.n2 / 2 + 1;
    std::vector<double> in = f.v;
    std::vector<cplx> half(static_cast<std::size_t>(g.n1) * nh);
    fftw_execute_dft_r2c(p.r2c, in.data(), reinterpret_cast<fftw_complex*>(half.data()));

    SpectralField out(g);
    const double scale = 1.0 / static_cast<double>(g.size());
    for (int i = 0; i < g.n1; ++i) {
        const int im = (g.n1 - i) % g.n1;
        for (int j = 0; j < g.n2; ++j) {
            if (j < nh)
                out(i, j) = half[static_cast<std::size_t>(i) * nh + j] * scale;
            else
                out(i, j) =
                    std::conj(half[static_cast<std::size_t>(im) * nh + (g.n2 - j)]) * scale;
        }
    }
    return out;
}

PhysicalField to_physical(const SpectralField& f)
{
    const auto& g = f.grid;
    Plans p = cache().get(g.n1, g.n2);
    const int nh = g.n2 / 2 + 1;
    std::vector<cplx> half(static_cast<std::size_t>(g.n1) * nh);
    for (int i = 0; i < g.n1; ++i)
        for (int j = 0; j < nh; ++j)
            half[static_cast<std::size_t>(i) * nh + j] = f(i, j);

    PhysicalField out(g);
    fftw_execute_dft_c2r(p.c2r, reinterpret_cast<fftw_complex*>(half.data()), out.v.data());
    return out;
}

} // namespace bousslab

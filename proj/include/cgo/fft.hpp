#ifndef CGO_FFT_HPP
#define CGO_FFT_HPP

// Thin FFTW wrapper. Forward transforms are unnormalized with kernel
// e^{-i m·x}; inverse transforms divide by n³.

#include <fftw3.h>

#include <map>
#include <mutex>
#include <tuple>

#include "grid.hpp"

namespace cgo {

namespace detail {

class PlanCache {
public:
    static PlanCache& instance()
    {
        static PlanCache cache;
        return cache;
    }

    /// Plan for `howmany` contiguous component-major 3-D transforms.
    fftw_plan get(int n, int howmany, int sign)
    {
        std::lock_guard lock(mutex_);
        const auto key = std::make_tuple(n, howmany, sign);
        if (auto it = plans_.find(key); it != plans_.end()) return it->second;
        const int dims[3] = {n, n, n};
        const int dist = n * n * n;
        std::vector<fftw_complex> scratch(static_cast<std::size_t>(dist) * howmany);
        fftw_plan p = fftw_plan_many_dft(3, dims, howmany, scratch.data(), nullptr, 1, dist, scratch.data(), nullptr,
                                         1, dist, sign, FFTW_ESTIMATE | FFTW_UNALIGNED);
        plans_.emplace(key, p);
        return p;
    }

    ~PlanCache()
    {
        for (auto& [key, p] : plans_) fftw_destroy_plan(p);
    }

private:
    std::mutex mutex_;
    std::map<std::tuple<int, int, int>, fftw_plan> plans_;
};

inline void transform(std::vector<cplx>& data, int n, int howmany, int sign)
{
    fftw_plan p = PlanCache::instance().get(n, howmany, sign);
    auto* ptr = reinterpret_cast<fftw_complex*>(data.data());
    fftw_execute_dft(p, ptr, ptr);
}

}  // namespace detail

template <int C>
BasicField<C, SpectralTag> fft_forward(const BasicField<C, PhysicalTag>& f)
{
    BasicField<C, SpectralTag> out(f.grid());
    out.data() = f.data();
    detail::transform(out.data(), f.grid().n(), C, FFTW_FORWARD);
    return out;
}

template <int C>
BasicField<C, PhysicalTag> fft_inverse(const BasicField<C, SpectralTag>& F)
{
    BasicField<C, PhysicalTag> out(F.grid());
    out.data() = F.data();
    detail::transform(out.data(), F.grid().n(), C, FFTW_BACKWARD);
    const double scale = 1.0 / static_cast<double>(F.grid().size());
    for (auto& z : out.data()) z *= scale;
    return out;
}

/// Discrete ∫⟨u, v⟩ evaluated from spectra: (h³/N) Σ_m û(m) v̂(-m).
inline cplx spectral_inner(const SpectralField& u, const SpectralField& v)
{
    const Grid& g = u.grid();
    cplx s{};
    for (int b = 0; b < kBlades; ++b)
        for (std::size_t i = 0; i < g.size(); ++i) s += u(b, i) * v(b, g.negated(i));
    return s * g.cell_volume() / static_cast<double>(g.size());
}

/// Applies a per-frequency map sym(ξ, û(ξ)) -> GradedForm to a form field.
template <class Sym>
SpectralField apply_symbol(const SpectralField& F, Sym&& sym)
{
    const Grid& g = F.grid();
    SpectralField out(g);
    for (std::size_t i = 0; i < g.size(); ++i) out.set(i, sym(g.xi(i), F.at(i)));
    return out;
}

template <class Sym>
FormField apply_symbol(const FormField& f, Sym&& sym)
{
    return fft_inverse(apply_symbol(fft_forward(f), std::forward<Sym>(sym)));
}

}  // namespace cgo

#endif  // CGO_FFT_HPP

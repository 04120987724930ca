#ifndef CGO_CALCULUS_HPP
#define CGO_CALCULUS_HPP

// Exterior calculus on periodic form fields. Every operator is a Fourier
// multiplier; the conjugated operators use the complex covector κ = iξ + ζ:
//   d_ζ  <->  κ ∧ ·        δ_ζ  <->  (−1)^l κ ∨ ·   on grade l.

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "fft.hpp"
#include "grid.hpp"
#include "random.hpp"

namespace cgo {

enum class ClampPolicy {
    Project,  ///< clamped modes are dropped (set to zero, excluded from norms)
    Floor,    ///< |p| raised to the floor, phase kept
};

struct ClampReport {
    std::size_t clamped = 0;
    std::size_t total = 0;
    double min_unclamped_abs_p = std::numeric_limits<double>::infinity();

    double fraction() const { return total ? static_cast<double>(clamped) / static_cast<double>(total) : 0.0; }
};

inline double default_clamp_floor(const Grid& g) { return 1e-8 * g.dxi() * g.dxi(); }

namespace symbols {

inline GradedForm xi_form(const std::array<double, 3>& xi) { return GradedForm::one_form(xi[0], xi[1], xi[2]); }

/// κ = iξ + ζ as a 1-form.
inline GradedForm kappa(const std::array<double, 3>& xi, const ComplexCovector& zeta)
{
    return GradedForm::one_form(I * xi[0] + zeta[0], I * xi[1] + zeta[1], I * xi[2] + zeta[2]);
}

inline GradedForm d(const GradedForm& kappa, const GradedForm& u) { return wedge(kappa, u); }
inline GradedForm delta(const GradedForm& kappa, const GradedForm& u) { return vee(kappa, u.involution()); }

/// p_ζ(ξ) = |ξ|² − 2i⟨ζ, ξ⟩.
inline cplx p(const std::array<double, 3>& xi, const ComplexCovector& zeta)
{
    const double xx = xi[0] * xi[0] + xi[1] * xi[1] + xi[2] * xi[2];
    return xx - 2.0 * I * zeta.dot_real(xi);
}

/// Symbol of Δ_ζ: |ξ|² − 2i⟨ζ, ξ⟩ − ⟨ζ, ζ⟩.
inline cplx conj_laplacian(const std::array<double, 3>& xi, const ComplexCovector& zeta)
{
    return p(xi, zeta) - zeta.dot(zeta);
}

inline double norm2(const std::array<double, 3>& xi) { return xi[0] * xi[0] + xi[1] * xi[1] + xi[2] * xi[2]; }

}  // namespace symbols

/// p_ζ tabulated over a grid together with the clamp set.
class ConjugatedSymbol {
public:
    ConjugatedSymbol(const Grid& g, const ComplexCovector& zeta, double floor) : grid_(g), zeta_(zeta), floor_(floor)
    {
        if (!(floor > 0.0)) throw std::invalid_argument("clamp floor must be positive");
        p_.resize(g.size());
        clamped_.resize(g.size());
        report_.total = g.size();
        for (std::size_t i = 0; i < g.size(); ++i) {
            p_[i] = symbols::p(g.xi(i), zeta);
            const double a = std::abs(p_[i]);
            clamped_[i] = a < floor;
            if (clamped_[i])
                ++report_.clamped;
            else
                report_.min_unclamped_abs_p = std::min(report_.min_unclamped_abs_p, a);
        }
    }

    const Grid& grid() const { return grid_; }
    const ComplexCovector& zeta() const { return zeta_; }
    double floor() const { return floor_; }
    const ClampReport& report() const { return report_; }
    cplx p(std::size_t i) const { return p_[i]; }
    bool clamped(std::size_t i) const { return clamped_[i] != 0; }

    /// Effective divisor at bin i: p itself, or p raised to the floor.
    cplx divisor(std::size_t i) const
    {
        if (!clamped_[i]) return p_[i];
        const double a = std::abs(p_[i]);
        return a > 0.0 ? p_[i] * (floor_ / a) : cplx(floor_);
    }

    /// max(|p|, floor)^{2b}, or 0 for clamped modes under Project.
    double weight(std::size_t i, double b, ClampPolicy policy) const
    {
        if (clamped_[i] && policy == ClampPolicy::Project) return 0.0;
        return std::pow(std::max(std::abs(p_[i]), floor_), 2.0 * b);
    }

private:
    Grid grid_;
    ComplexCovector zeta_;
    double floor_;
    std::vector<cplx> p_;
    std::vector<std::uint8_t> clamped_;
    ClampReport report_;
};

// --- derivatives -----------------------------------------------------------

inline SpectralField conj_ext_deriv(const SpectralField& F, const ComplexCovector& zeta)
{
    return apply_symbol(F, [&](const auto& xi, const GradedForm& u) { return symbols::d(symbols::kappa(xi, zeta), u); });
}
inline SpectralField conj_coderiv(const SpectralField& F, const ComplexCovector& zeta)
{
    return apply_symbol(F,
                        [&](const auto& xi, const GradedForm& u) { return symbols::delta(symbols::kappa(xi, zeta), u); });
}

/// d_ζ = d + ζ∧.
inline FormField conj_ext_deriv(const FormField& f, const ComplexCovector& zeta)
{
    return fft_inverse(conj_ext_deriv(fft_forward(f), zeta));
}
/// δ_ζ = δ + (−1)^l ζ∨ on grade l.
inline FormField conj_coderiv(const FormField& f, const ComplexCovector& zeta)
{
    return fft_inverse(conj_coderiv(fft_forward(f), zeta));
}

inline FormField ext_deriv(const FormField& f) { return conj_ext_deriv(f, ComplexCovector{}); }
inline FormField coderiv(const FormField& f) { return conj_coderiv(f, ComplexCovector{}); }

/// (d + δ) applied to a form field.
inline FormField dirac(const FormField& f)
{
    return apply_symbol(f, [](const auto& xi, const GradedForm& u) {
        const auto k = symbols::kappa(xi, ComplexCovector{});
        return symbols::d(k, u) + symbols::delta(k, u);
    });
}

inline FormField conj_laplacian(const FormField& f, const ComplexCovector& zeta)
{
    return apply_symbol(f, [&](const auto& xi, const GradedForm& u) { return symbols::conj_laplacian(xi, zeta) * u; });
}

/// dδ + δd with symbol |ξ|².
inline FormField hodge_laplacian(const FormField& f) { return conj_laplacian(f, ComplexCovector{}); }

/// d of a scalar field as a grade-1 field.
inline FormField gradient(const ScalarField& s) { return ext_deriv(as_form(s)); }

// --- resolvent and weighted norms --------------------------------------------

/// Requires ⟨ζ,ζ⟩ = −k² to 1e−10 relative.
inline void check_zeta_shell(const ComplexCovector& zeta, double k)
{
    const double scale = std::max({1.0, k * k, zeta.norm() * zeta.norm()});
    if (std::abs(zeta.dot(zeta) + k * k) > 1e-10 * scale)
        throw std::invalid_argument("resolvent requires <zeta,zeta> = -k^2");
}

/// In-place division of a spectrum by p_ζ.
inline void apply_resolvent(SpectralField& F, const ConjugatedSymbol& sym, ClampPolicy policy)
{
    const Grid& g = F.grid();
    for (std::size_t i = 0; i < g.size(); ++i) {
        if (sym.clamped(i) && policy == ClampPolicy::Project) {
            for (int b = 0; b < kBlades; ++b) F(b, i) = 0.0;
            continue;
        }
        const cplx inv = 1.0 / sym.divisor(i);
        for (int b = 0; b < kBlades; ++b) F(b, i) *= inv;
    }
}

struct ResolventResult {
    FormField field;
    ClampReport report;
};

/// (Δ_ζ − k²)^{-1} via the symbol p_ζ^{-1}.
inline ResolventResult resolvent(const FormField& f, const ComplexCovector& zeta, double k, double floor,
                                 ClampPolicy policy = ClampPolicy::Floor)
{
    check_zeta_shell(zeta, k);
    const ConjugatedSymbol sym(f.grid(), zeta, floor);
    auto F = fft_forward(f);
    apply_resolvent(F, sym, policy);
    return {fft_inverse(F), sym.report()};
}

/// Weighted norm (L³/N²) Σ w(m)|F̂(m)|² on a spectrum.
inline double bourgain_norm(const SpectralField& F, const ConjugatedSymbol& sym, double b,
                            ClampPolicy policy = ClampPolicy::Floor)
{
    const Grid& g = F.grid();
    double s = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) {
        double a = 0.0;
        for (int c = 0; c < kBlades; ++c) a += std::norm(F(c, i));
        if (a != 0.0) s += sym.weight(i, b, policy) * a;
    }
    const double N = static_cast<double>(g.size());
    return std::sqrt(s * g.cell_volume() / N);
}

/// ‖f‖ in X^b_ζ with clamped weights.
inline double bourgain_norm(const FormField& f, const ComplexCovector& zeta, double b, double floor,
                            ClampPolicy policy = ClampPolicy::Floor)
{
    if (b != 0.5 && b != -0.5) throw std::invalid_argument("bourgain_norm requires b = +1/2 or -1/2");
    return bourgain_norm(fft_forward(f), ConjugatedSymbol(f.grid(), zeta, floor), b, policy);
}

struct SobolevNorms {
    double l2 = 0.0;
    double hm1 = 0.0;
};

inline SobolevNorms sobolev_norms(const FormField& f)
{
    const auto F = fft_forward(f);
    const Grid& g = f.grid();
    double l2 = 0.0, hm1 = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) {
        double a = 0.0;
        for (int c = 0; c < kBlades; ++c) a += std::norm(F(c, i));
        l2 += a;
        hm1 += a / (1.0 + symbols::norm2(g.xi(i)));
    }
    const double scale = g.cell_volume() / static_cast<double>(g.size());
    return {std::sqrt(l2 * scale), std::sqrt(hm1 * scale)};
}

// --- smoothing ------------------------------------------------------------------

/// Gaussian low-pass exp(−h²|ξ|²/2).
inline FormField mollify(const FormField& f, double h)
{
    if (!(h > 0.0)) throw std::invalid_argument("mollify requires h > 0");
    return apply_symbol(f, [h](const auto& xi, const GradedForm& u) {
        return std::exp(-0.5 * h * h * symbols::norm2(xi)) * u;
    });
}

/// Sharp spectral cutoff keeping |m_j| < fraction·n/2 on every axis.
template <int C>
BasicField<C, PhysicalTag> lowpass(const BasicField<C, PhysicalTag>& f, double fraction = 2.0 / 3.0)
{
    const Grid& g = f.grid();
    auto F = fft_forward(f);
    const double cut = fraction * g.n() / 2.0;
    for (std::size_t i = 0; i < g.size(); ++i) {
        const auto m = g.wavevector(i);
        if (std::abs(m[0]) >= cut || std::abs(m[1]) >= cut || std::abs(m[2]) >= cut)
            for (int c = 0; c < C; ++c) F(c, i) = 0.0;
    }
    return fft_inverse(F);
}

/// D*t = −Σ_k Σ_j ∂_j(2 t_jk) dx^k.
inline FormField sym_coderiv(const SymTensorField& t)
{
    using algebra::SymTensor2;
    const Grid& g = t.grid();
    const auto T = fft_forward(t);
    SpectralField out(g);
    for (std::size_t i = 0; i < g.size(); ++i) {
        const auto xi = g.xi(i);
        for (int k = 1; k <= 3; ++k) {
            cplx s{};
            for (int j = 1; j <= 3; ++j) s += I * xi[j - 1] * 2.0 * T(SymTensor2::slot(j, k), i);
            out(k, i) = -s;
        }
    }
    return fft_inverse(out);
}

inline SymTensorField sym_product(const FormField& u, const FormField& v)
{
    SymTensorField t(u.grid());
    for (std::size_t i = 0; i < u.points(); ++i) {
        const auto s = algebra::sym_product(u.at(i).grade(1), v.at(i).grade(1));
        for (int c = 0; c < algebra::SymTensor2::kEntries; ++c) t(c, i) = s[c];
    }
    return t;
}

/// Random field with Gaussian spectrum supported on |m_j| <= K, restricted
/// to the grades flagged in `grade_mask`. Physical values have unit RMS.
inline FormField random_bandlimited(const Grid& g, CounterRng& rng, int K, unsigned grade_mask = 0b1111)
{
    if (2 * K >= g.n()) throw std::invalid_argument("band limit must stay below Nyquist");
    SpectralField F(g);
    for (int a = -K; a <= K; ++a)
        for (int b = -K; b <= K; ++b)
            for (int c = -K; c <= K; ++c) {
                const std::size_t i = g.bin_of_wavevector({a, b, c});
                for (int blade = 0; blade < kBlades; ++blade)
                    if (grade_mask & (1u << algebra::grade_of_blade(blade))) F(blade, i) = rng.complex_normal();
            }
    auto f = fft_inverse(F);
    double s = 0.0;
    for (const auto& z : f.data()) s += std::norm(z);
    if (s > 0.0) f *= std::sqrt(static_cast<double>(g.size()) / s);
    return f;
}

}  // namespace cgo

#endif  // CGO_CALCULUS_HPP

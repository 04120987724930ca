#ifndef CGO_UNIQUENESS_HPP
#define CGO_UNIQUENESS_HPP

// Integral pairing of two CGO solutions, its large-s targets, and the unique
// continuation contraction certificate.

#include <cmath>
#include <string>
#include <vector>

#include "cgo.hpp"

namespace cgo {

struct MediumPair {
    DerivedMedium dm1;
    DerivedMedium dm2;

    /// Throws unless both media share grid and constants and agree outside
    /// the central sub-box.
    void validate() const
    {
        if (!(dm1.grid == dm2.grid)) throw std::invalid_argument("medium pair: grids differ");
        if (dm1.omega != dm2.omega || dm1.eps0 != dm2.eps0 || dm1.mu0 != dm2.mu0)
            throw std::invalid_argument("medium pair: omega, eps0 and mu0 must agree");
        const Grid& g = dm1.grid;
        for (std::size_t i = 0; i < g.size(); ++i) {
            if (in_central_box(g.point(i), g.L())) continue;
            if (std::abs(dm1.gamma(0, i) - dm2.gamma(0, i)) > 1e-12 || std::abs(dm1.mu(0, i) - dm2.mu(0, i)) > 1e-12)
                throw std::invalid_argument("medium pair: coefficients differ outside the central sub-box");
        }
    }

    MediumPair swapped() const { return {dm2, dm1}; }
};

inline MediumPair make_medium_pair(DerivedMedium dm1, DerivedMedium dm2)
{
    MediumPair mp{std::move(dm1), std::move(dm2)};
    mp.validate();
    return mp;
}

namespace detail {

inline ScalarField pointwise_scalar(const Grid& g, auto&& f)
{
    ScalarField out(g);
    for (std::size_t i = 0; i < g.size(); ++i) out(0, i) = f(i);
    return out;
}

/// h³ Σ f(x) e^{iρ·x}, read off the spectrum at −ρ.
inline cplx fourier_at(const ScalarField& f, const Vec3& rho)
{
    const Grid& g = f.grid();
    const std::array<int, 3> m = {static_cast<int>(std::lround(-rho[0] / g.dxi())),
                                  static_cast<int>(std::lround(-rho[1] / g.dxi())),
                                  static_cast<int>(std::lround(-rho[2] / g.dxi()))};
    return g.cell_volume() * fft_forward(f)(0, g.bin_of_wavevector(m));
}

/// δd f for a scalar field, i.e. −Δf.
inline ScalarField neg_laplacian(const ScalarField& f) { return component(coderiv(gradient(f)), 0); }

inline ScalarField relation_field(const MediumPair& mp, bool use_a)
{
    const auto& x1 = use_a ? mp.dm1.a : mp.dm1.b;
    const auto& x2 = use_a ? mp.dm2.a : mp.dm2.b;
    const auto& d1 = use_a ? mp.dm1.da : mp.dm1.db;
    const auto& d2 = use_a ? mp.dm2.da : mp.dm2.db;
    const Grid& g = mp.dm1.grid;
    const auto lap = neg_laplacian(x2 - x1);
    const double w2 = mp.dm1.omega * mp.dm1.omega;
    return pointwise_scalar(g, [&](std::size_t i) {
        return lap(0, i) - inner(d1.at(i) + d2.at(i), d2.at(i) - d1.at(i)) +
               w2 * (mp.dm2.gamma(0, i) * mp.dm2.mu(0, i) - mp.dm1.gamma(0, i) * mp.dm1.mu(0, i));
    });
}

}  // namespace detail

/// Strong form δd(a₂−a₁) − ⟨d(a₁+a₂), d(a₂−a₁)⟩ + ω²(γ₂μ₂ − γ₁μ₁).
inline ScalarField relation_a(const MediumPair& mp) { return detail::relation_field(mp, true); }
/// The same with b in place of a.
inline ScalarField relation_b(const MediumPair& mp) { return detail::relation_field(mp, false); }

/// ∫⟨d(a₂−a₁), d e_{iρ}⟩ − ∫⟨d(a₁+a₂), d(a₂−a₁)⟩e_{iρ} + ∫ω²(γ₂μ₂−γ₁μ₁)e_{iρ}.
inline cplx target_a(const MediumPair& mp, const Vec3& rho) { return detail::fourier_at(relation_a(mp), rho); }
inline cplx target_b(const MediumPair& mp, const Vec3& rho) { return detail::fourier_at(relation_b(mp), rho); }

/// Value the pairing approaches for large s: minus the relation integral of
/// the polarization (E → a, H → b).
inline cplx pairing_limit(const MediumPair& mp, const Vec3& rho, Polarization p)
{
    return -(p == Polarization::E ? target_a(mp, rho) : target_b(mp, rho));
}

/// ∫ e^{iρ·x} ⟨(Q₂ − Q₁) w, v⟩ for periodic factors w, v.
inline cplx potential_pairing(const MediumPair& mp, const Vec3& rho, const FormField& w, const FormField& v)
{
    const Grid& g = mp.dm1.grid;
    const auto dw = mp.dm2.q.apply(w) - mp.dm1.q.apply(w);
    cplx s{};
    for (std::size_t i = 0; i < g.size(); ++i) {
        const auto x = g.point(i);
        s += std::exp(I * vec::dot(rho, x)) * inner(dw.at(i), v.at(i));
    }
    return g.cell_volume() * s;
}

struct PairingResult {
    cplx value;
    CGOSolution w;  ///< ζ₁ solution against medium 1
    CGOSolution v;  ///< ζ₂ solution against medium 2
};

/// ∫ e_{iρ} ⟨(Q₂ − Q₁)(A + R), B + S⟩ with R solved against medium 1 and S
/// against medium 2.
inline PairingResult pairing(const MediumPair& mp, const CGOGeometry& geo, Polarization p,
                             const SolverOptions& opt = {}, cplx amplitude_scale = 1.0)
{
    auto w = solve_cgo(mp.dm1, geo.zeta1, amplitude_scale * amplitude_A(geo, p), opt);
    auto v = solve_cgo(mp.dm2, geo.zeta2, amplitude_B(geo, p), opt);
    const Grid& g = mp.dm1.grid;
    const auto value = potential_pairing(mp, geo.rho, FormField::constant(g, w.amplitude) + w.remainder,
                                         FormField::constant(g, v.amplitude) + v.remainder);
    return {value, std::move(w), std::move(v)};
}

struct ScatteringOutput {
    Vec3 rho{};
    double s = 0.0;
    cplx pairing;
    cplx target;  ///< pairing_limit for the polarization
    double abs_error = 0.0;
    bool ok = false;
    std::string error;
};

inline std::vector<ScatteringOutput> convergence_experiment(const MediumPair& mp, const Vec3& rho, Polarization p,
                                                            const std::vector<double>& s_list, double angle,
                                                            const SolverOptions& opt = {})
{
    for (std::size_t j = 1; j < s_list.size(); ++j)
        if (!(s_list[j] > s_list[j - 1])) throw std::invalid_argument("convergence_experiment: s values must increase");
    const cplx limit = pairing_limit(mp, rho, p);
    const auto [eta1, eta2] = frame(rho, angle);
    std::vector<ScatteringOutput> rows(s_list.size());
    parallel_for(s_list.size(), [&](std::size_t j) {
        auto& row = rows[j];
        row.rho = rho;
        row.s = s_list[j];
        row.target = limit;
        try {
            const auto geo = make_geometry(mp.dm1.grid, rho, eta1, eta2, row.s, mp.dm1.k);
            row.pairing = pairing(mp, geo, p, opt).value;
            row.abs_error = std::abs(row.pairing - limit);
            row.ok = true;
        } catch (const DivergenceError& e) {
            row.error = e.what();
        } catch (const ResonantGridError& e) {
            row.error = e.what();
        }
    });
    return rows;
}

// --- unique continuation ---------------------------------------------------------

/// Scalar coefficients of the coupled system for f = γ₂^{1/2} − γ₁^{1/2}, g = μ₂^{1/2} − μ₁^{1/2}.
struct UcpCoefficients {
    ScalarField V, W, a, b, c, d;
};

/// Coefficients built from a medium pair. The coupling coefficients b and d
/// carry the sign that makes the system a multiple of the two relations.
inline UcpCoefficients ucp_coefficients(const MediumPair& mp)
{
    const Grid& g = mp.dm1.grid;
    const auto& d1 = mp.dm1;
    const auto& d2 = mp.dm2;
    const double w2 = d1.omega * d1.omega;
    const auto G = d1.gamma_sqrt + d2.gamma_sqrt;
    const auto M = d1.mu_sqrt + d2.mu_sqrt;
    const auto lapG = detail::neg_laplacian(G), lapM = detail::neg_laplacian(M);
    auto inside = [&](std::size_t i) { return in_central_box(g.point(i), g.L()) ? 1.0 : 0.0; };
    UcpCoefficients c;
    c.V = detail::pointwise_scalar(g, [&](std::size_t i) { return -inside(i) * lapG(0, i) / G(0, i); });
    c.W = detail::pointwise_scalar(g, [&](std::size_t i) { return -inside(i) * lapM(0, i) / M(0, i); });
    c.a = detail::pointwise_scalar(g, [&](std::size_t i) {
        return inside(i) * w2 * d1.gamma_sqrt(0, i) * d2.gamma_sqrt(0, i) * (d1.mu(0, i) + d2.mu(0, i));
    });
    c.b = detail::pointwise_scalar(g, [&](std::size_t i) {
        return inside(i) * w2 * d1.gamma_sqrt(0, i) * d2.gamma_sqrt(0, i) * (d1.gamma(0, i) + d2.gamma(0, i)) *
               M(0, i) / G(0, i);
    });
    c.c = detail::pointwise_scalar(g, [&](std::size_t i) {
        return inside(i) * w2 * d1.mu_sqrt(0, i) * d2.mu_sqrt(0, i) * (d1.gamma(0, i) + d2.gamma(0, i));
    });
    c.d = detail::pointwise_scalar(g, [&](std::size_t i) {
        return inside(i) * w2 * d1.mu_sqrt(0, i) * d2.mu_sqrt(0, i) * (d1.mu(0, i) + d2.mu(0, i)) * G(0, i) /
               M(0, i);
    });
    return c;
}

struct RecoveryResidual {
    ScalarField first;   ///< −Δf + Vf + af + bg
    ScalarField second;  ///< −Δg + Wg + cg + df
};

inline RecoveryResidual recovery_residual(const MediumPair& mp, const UcpCoefficients& c)
{
    const Grid& g = mp.dm1.grid;
    const auto f = mp.dm2.gamma_sqrt - mp.dm1.gamma_sqrt;
    const auto h = mp.dm2.mu_sqrt - mp.dm1.mu_sqrt;
    const auto lf = detail::neg_laplacian(f), lh = detail::neg_laplacian(h);
    return {detail::pointwise_scalar(g,
                                     [&](std::size_t i) {
                                         return lf(0, i) + (c.V(0, i) + c.a(0, i)) * f(0, i) + c.b(0, i) * h(0, i);
                                     }),
            detail::pointwise_scalar(g, [&](std::size_t i) {
                return lh(0, i) + (c.W(0, i) + c.c(0, i)) * h(0, i) + c.d(0, i) * f(0, i);
            })};
}

/// The grade-{0,3} system as a pointwise matrix: w⁰ carries u, w³ carries ∗v.
inline MatrixField ucp_system(const UcpCoefficients& c)
{
    const Grid& g = c.V.grid();
    MatrixField M(g);
    for (std::size_t i = 0; i < g.size(); ++i) {
        M(0, 0, i) = c.V(0, i) + c.a(0, i);
        M(0, 7, i) = c.b(0, i);
        M(7, 7, i) = c.W(0, i) + c.c(0, i);
        M(7, 0, i) = c.d(0, i);
    }
    return M;
}

/// ζ = (|ζ|/√2)(η₁ + iη₂), so that ⟨ζ, ζ⟩ = 0.
inline ComplexCovector null_covector(double magnitude, const Vec3& eta1, const Vec3& eta2)
{
    ComplexCovector z;
    const double c = magnitude / std::sqrt(2.0);
    for (int j = 0; j < 3; ++j) z[j] = cplx(c * eta1[j], c * eta2[j]);
    return z;
}

struct UcpReport {
    double zeta_norm = 0.0;
    double contraction = 0.0;  ///< lower bound for ‖(Δ_ζ)⁻¹ Q‖ on X^{1/2}
    bool certified = false;
    bool inconclusive = false;
    int max_iterations = 0;    ///< fixed-point steps needed by the slowest start
    double worst_final = 0.0;  ///< largest final X^{1/2} norm over the starts
};

struct UcpOptions {
    int trials = 16;
    int power_steps = 12;
    int starts = 10;
    double target = 1e-8;
    int max_iter = 200;
    double clamp_floor = 0.0;
};

/// Norm estimate of the fixed-point map w ↦ −(Δ_ζ)⁻¹ Q w and its iteration
/// from random starts.
inline UcpReport ucp_contraction_check(const UcpCoefficients& c, const ComplexCovector& zeta, std::uint64_t seed,
                                       const UcpOptions& opt = {})
{
    const Grid& g = c.V.grid();
    check_zeta_shell(zeta, 0.0);
    for (const ScalarField* f : {&c.V, &c.W, &c.a, &c.b, &c.c, &c.d})
        for (std::size_t i = 0; i < g.size(); ++i)
            if (!in_central_box(g.point(i), g.L()) && (*f)(0, i) != cplx{})
                throw std::invalid_argument("ucp coefficients must vanish outside the central sub-box");

    const auto M = ucp_system(c);
    const double floor = opt.clamp_floor > 0.0 ? opt.clamp_floor : default_clamp_floor(g);
    const ConjugatedSymbol sym(g, zeta, floor);
    UcpReport rep;
    rep.zeta_norm = zeta.norm();
    rep.contraction = detail::operator_norm_lower_bound(M, sym, opt.trials, seed, opt.power_steps);
    rep.inconclusive = rep.contraction >= 0.9 && rep.contraction <= 1.1;
    rep.certified = rep.contraction < 0.9;

    for (int start = 0; start < opt.starts; ++start) {
        CounterRng rng(seed, 0x0c9000ULL + static_cast<std::uint64_t>(start));
        SpectralField W(g);
        for (std::size_t i = 0; i < g.size(); ++i) {
            if (sym.clamped(i)) continue;
            W(0, i) = rng.complex_normal();
            W(7, i) = rng.complex_normal();
        }
        W *= cplx(1.0 / bourgain_norm(W, sym, 0.5, ClampPolicy::Project));
        double norm = 1.0;
        int it = 0;
        while (norm >= opt.target && it < opt.max_iter) {
            auto F = fft_forward(M.apply(fft_inverse(W)));
            apply_resolvent(F, sym, ClampPolicy::Project);
            W = F * cplx(-1.0);
            norm = bourgain_norm(W, sym, 0.5, ClampPolicy::Project);
            ++it;
            if (!std::isfinite(norm) || norm > 1e6) break;
        }
        rep.max_iterations = std::max(rep.max_iterations, it);
        rep.worst_final = std::max(rep.worst_final, norm);
    }
    return rep;
}

}  // namespace cgo

#endif  // CGO_UNIQUENESS_HPP

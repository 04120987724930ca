#ifndef CGO_MEDIA_HPP
#define CGO_MEDIA_HPP

// Media, the rescaled first-order operators P and Pᵗ, and the zeroth-order
// potentials Q and Q̃.

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "calculus.hpp"
#include "errors.hpp"

namespace cgo {

/// A·(1 − |x−c|²/r²)^p inside the ball, 0 outside. `offset` is measured
/// from the box center.
struct Bump {
    std::array<double, 3> offset{};
    double radius = 1.0;
    double amplitude = 0.0;
    double exponent = 4.0;

    double operator()(const std::array<double, 3>& x, double L) const
    {
        double r2 = 0.0;
        for (int j = 0; j < 3; ++j) {
            const double dx = x[j] - (0.5 * L + offset[j]);
            r2 += dx * dx;
        }
        const double t = 1.0 - r2 / (radius * radius);
        return t > 0.0 ? amplitude * std::pow(t, exponent) : 0.0;
    }
};

struct MediumSpec {
    double omega = 1.0;
    double eps0 = 1.0;
    double mu0 = 1.0;
    std::vector<Bump> eps;
    std::vector<Bump> mu;
    std::vector<Bump> sigma;
};

/// True when x lies in the central sub-box [L/4, 3L/4]³.
inline bool in_central_box(const std::array<double, 3>& x, double L)
{
    for (double c : x)
        if (c < 0.25 * L || c > 0.75 * L) return false;
    return true;
}

/// Sampled coefficients ε, μ, σ on a grid with their background constants.
struct Medium {
    Grid grid;
    double omega = 1.0;
    double eps0 = 1.0;
    double mu0 = 1.0;
    ScalarField eps;
    ScalarField mu;
    ScalarField sigma;

    static Medium background(const Grid& g, double omega, double eps0, double mu0)
    {
        Medium m{g, omega, eps0, mu0, ScalarField(g), ScalarField(g), ScalarField(g)};
        for (auto& z : m.eps.comp(0)) z = eps0;
        for (auto& z : m.mu.comp(0)) z = mu0;
        return m;
    }

    /// Samples the bumps, low-passes at 2/3 Nyquist, clamps to the admissible
    /// bounds and restores the exact background outside the central sub-box.
    static Medium from_spec(const Grid& g, const MediumSpec& spec)
    {
        Medium m = background(g, spec.omega, spec.eps0, spec.mu0);
        const double L = g.L();
        auto build = [&](const std::vector<Bump>& bumps, double base, double lower) {
            ScalarField f = sample_scalar(g, [&](const auto& x) {
                double v = 0.0;
                for (const auto& b : bumps) v += b(x, L);
                return cplx(v);
            });
            if (!bumps.empty()) f = lowpass(f);
            for (std::size_t i = 0; i < g.size(); ++i) {
                f(0, i) = in_central_box(g.point(i), L) ? std::max(base + f(0, i).real(), lower) : base;
            }
            return f;
        };
        m.eps = build(spec.eps, spec.eps0, spec.eps0);
        m.mu = build(spec.mu, spec.mu0, spec.mu0);
        m.sigma = build(spec.sigma, 0.0, 0.0);
        return m;
    }

    /// Throws unless ε ≥ ε₀, μ ≥ μ₀, σ ≥ 0 and (optionally) the
    /// perturbation vanishes outside the central sub-box.
    void validate(bool check_support = true) const
    {
        if (!(omega > 0.0)) throw std::invalid_argument("medium: omega must be positive");
        if (!(eps0 > 0.0) || !(mu0 > 0.0)) throw std::invalid_argument("medium: eps0 and mu0 must be positive");
        const double L = grid.L();
        for (std::size_t i = 0; i < grid.size(); ++i) {
            const double e = eps(0, i).real(), m = mu(0, i).real(), s = sigma(0, i).real();
            if (!(e >= eps0)) throw std::invalid_argument("medium: eps below eps0");
            if (!(m >= mu0)) throw std::invalid_argument("medium: mu below mu0");
            if (!(s >= 0.0)) throw std::invalid_argument("medium: sigma negative");
            if (check_support && !in_central_box(grid.point(i), L) && (e != eps0 || m != mu0 || s != 0.0))
                throw std::invalid_argument("medium: perturbation outside the central sub-box");
        }
    }
};

/// Pointwise 8×8 complex matrix over a grid, stored entry-major.
class MatrixField {
public:
    MatrixField() = default;
    explicit MatrixField(const Grid& g) : grid_(g), data_(64 * g.size()) {}

    const Grid& grid() const { return grid_; }
    cplx& operator()(int row, int col, std::size_t i) { return data_[(row * 8 + col) * grid_.size() + i]; }
    const cplx& operator()(int row, int col, std::size_t i) const { return data_[(row * 8 + col) * grid_.size() + i]; }

    FormField apply(const FormField& w) const
    {
        FormField out(grid_);
        const std::size_t N = grid_.size();
        for (int r = 0; r < kBlades; ++r) {
            auto o = out.comp(r);
            for (int c = 0; c < kBlades; ++c) {
                const cplx* m = &data_[(r * 8 + c) * N];
                const auto wc = w.comp(c);
                for (std::size_t i = 0; i < N; ++i) o[i] += m[i] * wc[i];
            }
        }
        return out;
    }

    /// Applies the pointwise conjugate transpose.
    FormField apply_adjoint(const FormField& w) const
    {
        FormField out(grid_);
        const std::size_t N = grid_.size();
        for (int r = 0; r < kBlades; ++r) {
            auto o = out.comp(r);
            for (int c = 0; c < kBlades; ++c) {
                const cplx* m = &data_[(c * 8 + r) * N];
                const auto wc = w.comp(c);
                for (std::size_t i = 0; i < N; ++i) o[i] += std::conj(m[i]) * wc[i];
            }
        }
        return out;
    }

    double max_abs() const
    {
        double m = 0.0;
        for (const auto& z : data_) m = std::max(m, std::abs(z));
        return m;
    }

private:
    Grid grid_;
    std::vector<cplx> data_;
};

struct DerivedMedium {
    Grid grid;
    double omega = 1.0;
    double eps0 = 1.0;
    double mu0 = 1.0;
    double k = 1.0;
    ScalarField gamma;  ///< ε + iσ/ω
    ScalarField mu;
    ScalarField a;  ///< ½ log γ
    ScalarField b;  ///< ½ log μ
    ScalarField g;  ///< γ^{1/2} μ^{1/2}
    ScalarField gamma_sqrt;
    ScalarField mu_sqrt;
    FormField da;
    FormField db;
    MatrixField q;   ///< Q as a multiplication operator
    MatrixField qt;  ///< Q̃ as a multiplication operator
};

inline double wavenumber(double omega, double eps0, double mu0) { return omega * std::sqrt(eps0 * mu0); }

namespace detail {

/// da∧v¹ + da∨(v¹+v³) + db∧(v⁰+v²) − db∨v² + iωg v
inline GradedForm p_lower(const GradedForm& v, const GradedForm& da, const GradedForm& db, cplx iwg)
{
    const auto v0 = v.grade(0), v1 = v.grade(1), v2 = v.grade(2), v3 = v.grade(3);
    return wedge(da, v1) + vee(da, v1 + v3) + wedge(db, v0 + v2) - vee(db, v2) + iwg * v;
}

/// db∧w¹ + db∨(w¹+w³) + da∧(w⁰+w²) − da∨w² + iωg w
inline GradedForm pt_lower(const GradedForm& w, const GradedForm& da, const GradedForm& db, cplx iwg)
{
    return p_lower(w, db, da, iwg);
}

/// (d_ζ + δ_ζ) Σ s_l f^l with s_l = (−1)^l (sign = +1) or (−1)^{l+1} (sign = −1).
inline FormField dirac_graded(const FormField& f, const ComplexCovector& zeta, double sign)
{
    return apply_symbol(f, [&](const auto& xi, const GradedForm& u) {
        const auto kap = symbols::kappa(xi, zeta);
        const auto s = sign * u.involution();
        return symbols::d(kap, s) + symbols::delta(kap, s);
    });
}

template <class Lower>
FormField apply_lower(const FormField& v, const DerivedMedium& dm, Lower&& lower)
{
    FormField out(v.grid());
    for (std::size_t i = 0; i < v.points(); ++i)
        out.set(i, lower(v.at(i), dm.da.at(i), dm.db.at(i), I * dm.omega * dm.g(0, i)));
    return out;
}

/// M e_B = D(L₂ e_B) + L₁ L₂ e_B + k² e_B for each blade B. The iωg e_B part
/// of L₂ e_B is differentiated by the chain rule dg = g (da + db).
template <class L1, class L2>
MatrixField assemble_potential(const DerivedMedium& dm, double outer_sign, L1&& l1, L2&& l2)
{
    MatrixField M(dm.grid);
    const std::size_t N = dm.grid.size();
    for (int B = 0; B < kBlades; ++B) {
        const auto eB = GradedForm::blade(B);
        FormField inner(dm.grid), coeff_part(dm.grid);
        for (std::size_t i = 0; i < N; ++i) {
            const auto da = dm.da.at(i), db = dm.db.at(i);
            inner.set(i, l2(eB, da, db, I * dm.omega * dm.g(0, i)));
            coeff_part.set(i, l2(eB, da, db, cplx{}));
        }
        auto outer = dirac_graded(coeff_part, ComplexCovector{}, outer_sign);
        const auto signed_e = outer_sign * eB.involution();
        for (std::size_t i = 0; i < N; ++i) {
            const auto da = dm.da.at(i), db = dm.db.at(i);
            const auto dg = (I * dm.omega * dm.g(0, i)) * (da + db);
            const auto chain = symbols::d(dg, signed_e) + symbols::delta(dg, signed_e);
            const auto lower = l1(inner.at(i), da, db, I * dm.omega * dm.g(0, i));
            for (int r = 0; r < kBlades; ++r)
                M(r, B, i) = outer(r, i) + chain[r] + lower[r] + (r == B ? dm.k * dm.k : 0.0);
        }
    }
    return M;
}

}  // namespace detail

/// Derived coefficients; gradients by spectral differentiation.
inline DerivedMedium derive(const Medium& m, bool check_support = true)
{
    m.validate(check_support);
    const Grid& grid = m.grid;
    DerivedMedium dm;
    dm.grid = grid;
    dm.omega = m.omega;
    dm.eps0 = m.eps0;
    dm.mu0 = m.mu0;
    dm.k = wavenumber(m.omega, m.eps0, m.mu0);
    dm.gamma = ScalarField(grid);
    dm.mu = m.mu;
    dm.a = dm.b = dm.g = dm.gamma_sqrt = dm.mu_sqrt = ScalarField(grid);
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const cplx gam = m.eps(0, i).real() + I * m.sigma(0, i).real() / m.omega;
        const cplx mu = m.mu(0, i).real();
        dm.gamma(0, i) = gam;
        dm.a(0, i) = 0.5 * std::log(gam);
        dm.b(0, i) = 0.5 * std::log(mu);
        dm.gamma_sqrt(0, i) = std::sqrt(gam);
        dm.mu_sqrt(0, i) = std::sqrt(mu);
        dm.g(0, i) = std::exp(dm.a(0, i) + dm.b(0, i));
    }
    dm.da = gradient(dm.a);
    dm.db = gradient(dm.b);
    dm.q = detail::assemble_potential(dm, 1.0, detail::p_lower, detail::pt_lower);
    dm.qt = detail::assemble_potential(dm, -1.0, detail::pt_lower, detail::p_lower);
    return dm;
}

/// e_{−ζ} P e_{ζ} v; ζ = 0 gives P itself.
inline FormField apply_P(const FormField& v, const DerivedMedium& dm, const ComplexCovector& zeta = {})
{
    return detail::dirac_graded(v, zeta, 1.0) + detail::apply_lower(v, dm, detail::p_lower);
}

/// e_{−ζ} Pᵗ e_{ζ} w; ζ = 0 gives Pᵗ itself.
inline FormField apply_Pt(const FormField& w, const DerivedMedium& dm, const ComplexCovector& zeta = {})
{
    return detail::dirac_graded(w, zeta, -1.0) + detail::apply_lower(w, dm, detail::pt_lower);
}

/// Q w = P(Pᵗ w) − (dδ + δd) w + k² w, applied through its matrix field.
inline FormField apply_Q(const FormField& w, const DerivedMedium& dm) { return dm.q.apply(w); }

/// Q̃ w = Pᵗ(P w) − (dδ + δd) w + k² w, applied through its matrix field.
inline FormField apply_Qt(const FormField& w, const DerivedMedium& dm) { return dm.qt.apply(w); }

/// Literal composition P(Pᵗ w) − (dδ+δd)w + k²w.
inline FormField apply_Q_composed(const FormField& w, const DerivedMedium& dm)
{
    return apply_P(apply_Pt(w, dm), dm) - hodge_laplacian(w) + (dm.k * dm.k) * w;
}

/// Literal composition Pᵗ(P w) − (dδ+δd)w + k²w.
inline FormField apply_Qt_composed(const FormField& w, const DerivedMedium& dm)
{
    return apply_Pt(apply_P(w, dm), dm) - hodge_laplacian(w) + (dm.k * dm.k) * w;
}

/// q̃ on a grade-{0,3} field.
inline FormField apply_qtilde(const FormField& w03, const DerivedMedium& dm)
{
    for (int b = 1; b < 7; ++b)
        for (const auto& z : w03.comp(b))
            if (z != cplx{}) throw std::invalid_argument("apply_qtilde requires a grade-{0,3} input");
    return apply_Qt(w03, dm).grades(0b1001);
}

/// u¹ + u² = γ^{−1/2} v¹ + μ^{−1/2} v².
inline FormField to_maxwell(const FormField& v, const DerivedMedium& dm)
{
    FormField u(v.grid());
    for (std::size_t i = 0; i < v.points(); ++i) {
        for (int b = 1; b <= 3; ++b) u(b, i) = v(b, i) / dm.gamma_sqrt(0, i);
        for (int b = 4; b <= 6; ++b) u(b, i) = v(b, i) / dm.mu_sqrt(0, i);
    }
    return u;
}

/// δu² + iωγu¹ − du¹ + iωμu².
inline FormField maxwell_residual(const FormField& u, const DerivedMedium& dm)
{
    const auto u1 = u.grade(1), u2 = u.grade(2);
    FormField r = coderiv(u2) - ext_deriv(u1);
    for (std::size_t i = 0; i < u.points(); ++i) {
        for (int b = 1; b <= 3; ++b) r(b, i) += I * dm.omega * dm.gamma(0, i) * u(b, i);
        for (int b = 4; b <= 6; ++b) r(b, i) += I * dm.omega * dm.mu(0, i) * u(b, i);
    }
    return r;
}

}  // namespace cgo

#endif  // CGO_MEDIA_HPP

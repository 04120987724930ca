#ifndef CGO_WEAK_FORMS_HPP
#define CGO_WEAK_FORMS_HPP

// Weak-form potentials assembled term by term by quadrature. Serves as an
// independent route to the matrix-field realization of Q and Q̃.

#include "media.hpp"

namespace cgo::weak {

inline ScalarField pointwise_inner(const FormField& u, const FormField& v)
{
    ScalarField s(u.grid());
    for (std::size_t i = 0; i < u.points(); ++i) s(0, i) = inner(u.at(i), v.at(i));
    return s;
}

/// ∫⟨X, d f⟩ for a grade-1 field X and scalar f.
inline cplx pair_with_gradient(const FormField& X, const ScalarField& f)
{
    return integrate_inner(X, gradient(f));
}

inline cplx pair_with_dstar(const FormField& X, const FormField& u, const FormField& v)
{
    return integrate_inner(X, sym_coderiv(sym_product(u, v)));
}

inline ScalarField times(const ScalarField& a, const ScalarField& b)
{
    ScalarField out(a.grid());
    for (std::size_t i = 0; i < a.points(); ++i) out(0, i) = a(0, i) * b(0, i);
    return out;
}

inline cplx integrate_product(const ScalarField& a, const ScalarField& b) { return integrate(times(a, b)); }

struct WeakParts {
    FormField w0, w1, w2, w3, p0, p1, p2, p3;
    ScalarField contrast;  // γμ − ε₀μ₀
    FormField dg;          // d(γ^{1/2}μ^{1/2}) by the chain rule
    ScalarField dada, dbdb;
};

inline WeakParts split(const FormField& w, const FormField& phi, const DerivedMedium& dm)
{
    WeakParts p{w.grade(0), w.grade(1), w.grade(2), w.grade(3), phi.grade(0), phi.grade(1), phi.grade(2),
                phi.grade(3), ScalarField(w.grid()), dm.da + dm.db, pointwise_inner(dm.da, dm.da),
                pointwise_inner(dm.db, dm.db)};
    for (std::size_t i = 0; i < w.points(); ++i) {
        p.contrast(0, i) = dm.gamma(0, i) * dm.mu(0, i) - dm.eps0 * dm.mu0;
        p.dg.set(i, dm.g(0, i) * p.dg.at(i));
    }
    return p;
}

/// ⟨Q w, φ⟩ from its six-term weak expression.
inline cplx weak_Q(const FormField& w, const FormField& phi, const DerivedMedium& dm)
{
    const auto p = split(w, phi, dm);
    const double om = dm.omega;
    cplx s = -om * om * integrate_product(p.contrast, pointwise_inner(w, phi));
    s += integrate_inner((2.0 * I * om) * (vee(p.dg, p.w1 + p.w3) + wedge(p.dg, p.w0 + p.w2)), phi);
    s += integrate_product(p.dada, pointwise_inner(p.w0 + p.w2, p.p0 + p.p2));
    s += integrate_product(p.dbdb, pointwise_inner(p.w1 + p.w3, p.p1 + p.p3));
    s += pair_with_gradient(dm.da, pointwise_inner(p.w2 - p.w0, p.p0 + p.p2));
    s += pair_with_gradient(dm.db, pointwise_inner(p.w1 - p.w3, p.p1 + p.p3));
    s += pair_with_dstar(dm.db, p.w1, p.p1);
    s += pair_with_dstar(dm.da, hodge(p.w2), hodge(p.p2));
    return s;
}

/// ⟨Q̃ w, φ⟩ from its weak expression.
inline cplx weak_Qt(const FormField& w, const FormField& phi, const DerivedMedium& dm)
{
    const auto p = split(w, phi, dm);
    const double om = dm.omega;
    cplx s = -om * om * integrate_product(p.contrast, pointwise_inner(w, phi));
    s += integrate_inner((2.0 * I * om) * (wedge(p.dg, p.w1) - vee(p.dg, p.w2)), phi);
    s += integrate_product(p.dbdb, pointwise_inner(p.w0 + p.w2, p.p0 + p.p2));
    s += integrate_product(p.dada, pointwise_inner(p.w1 + p.w3, p.p1 + p.p3));
    s += pair_with_gradient(dm.db, pointwise_inner(p.w0 - p.w2, p.p0 + p.p2));
    s += pair_with_gradient(dm.da, pointwise_inner(p.w3 - p.w1, p.p1 + p.p3));
    s -= pair_with_dstar(dm.da, p.w1, p.p1);
    s -= pair_with_dstar(dm.db, hodge(p.w2), hodge(p.p2));
    return s;
}

/// ⟨q̃ (v⁰ + v³), φ⁰ + φ³⟩ from its weak expression.
inline cplx weak_qtilde(const FormField& v, const FormField& phi, const DerivedMedium& dm)
{
    const auto p = split(v, phi, dm);
    const double om = dm.omega;
    cplx s = -om * om * integrate_product(p.contrast, pointwise_inner(p.w0 + p.w3, p.p0 + p.p3));
    s += integrate_product(p.dbdb, pointwise_inner(p.w0, p.p0));
    s += integrate_product(p.dada, pointwise_inner(p.w3, p.p3));
    s += pair_with_gradient(dm.db, pointwise_inner(p.w0, p.p0));
    s += pair_with_gradient(dm.da, pointwise_inner(p.w3, p.p3));
    return s;
}

/// ∫⟨δw,δφ⟩ + ⟨dw,dφ⟩ − k²⟨w,φ⟩.
inline cplx helmholtz_form(const FormField& w, const FormField& phi, double k)
{
    return integrate_inner(coderiv(w), coderiv(phi)) +
           integrate_inner(ext_deriv(w), ext_deriv(phi)) - k * k * integrate_inner(w, phi);
}

}  // namespace cgo::weak

#endif  // CGO_WEAK_FORMS_HPP

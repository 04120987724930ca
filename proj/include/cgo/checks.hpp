#ifndef CGO_CHECKS_HPP
#define CGO_CHECKS_HPP

// Identity suites shared by the CLI and the acceptance run. Each check
// reports its worst measured error against a fixed tolerance.

#include <chrono>
#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "algebra.hpp"
#include "calculus.hpp"
#include "media.hpp"
#include "random.hpp"
#include "weak_forms.hpp"

namespace cgo::checks {

using algebra::BladeTables;
using algebra::kTables;

struct CheckResult {
    std::string name;
    double error = 0.0;
    double tolerance = 0.0;
    bool passed = false;
};

struct SuiteReport {
    std::string suite;
    std::vector<CheckResult> checks;
    double seconds = 0.0;

    bool passed() const
    {
        for (const auto& c : checks)
            if (!c.passed) return false;
        return !checks.empty();
    }

    void add(std::string name, double error, double tolerance)
    {
        checks.push_back({std::move(name), error, tolerance, error < tolerance});
    }

    nlohmann::json to_json() const
    {
        nlohmann::json j;
        j["suite"] = suite;
        j["passed"] = passed();
        j["seconds"] = seconds;
        j["checks"] = nlohmann::json::array();
        for (const auto& c : checks)
            j["checks"].push_back({{"name", c.name}, {"error", c.error}, {"tolerance", c.tolerance}, {"passed", c.passed}});
        return j;
    }
};

namespace detail {

class Stopwatch {
public:
    double seconds() const
    {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    }

private:
    std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

/// Running maximum of named errors, in insertion order.
class Tracker {
public:
    void update(const std::string& name, double err)
    {
        for (auto& [n, e] : entries_)
            if (n == name) {
                e = std::max(e, err);
                return;
            }
        entries_.emplace_back(name, err);
    }
    void flush(SuiteReport& rep, double tol) const
    {
        for (const auto& [n, e] : entries_) rep.add(n, e, tol);
    }

private:
    std::vector<std::pair<std::string, double>> entries_;
};

inline double parity(int e) { return (e % 2) ? -1.0 : 1.0; }

inline double rel(cplx a, cplx b)
{
    const double s = std::max(std::abs(a), std::abs(b));
    return s > 0.0 ? std::abs(a - b) / s : 0.0;
}

inline double rel_field(const FormField& a, const FormField& b)
{
    const double s = std::max(a.max_abs(), b.max_abs());
    return s > 0.0 ? (a - b).max_abs() / s : 0.0;
}

/// |⟨a,b⟩ − c| normalized by the Cauchy–Schwarz scale ‖a‖‖b‖.
inline double pairing_error(cplx lhs, cplx rhs, double scale) { return scale > 0.0 ? std::abs(lhs - rhs) / scale : 0.0; }

/// Every algebra identity for one tuple of inputs; u, v of grades l, m.
inline void algebra_identities(Tracker& tr, const BladeTables& t, const GradedForm& u, int l, const GradedForm& v,
                               int m, const GradedForm& w, const GradedForm& p, const GradedForm& q,
                               const GradedForm& ul, const GradedForm& vl, const std::array<double, 3>& xi)
{
    tr.update("anti_commutation", (wedge(u, v, t) - parity(l * m) * wedge(v, u, t)).max_abs());
    tr.update("hodge_involution", (hodge(hodge(w, t), t) - w).max_abs());

    cplx via_star{};
    for (int g = 0; g <= 3; ++g) via_star += hodge(wedge(w.grade(g), hodge(v.grade(g), t), t), t)[0];
    tr.update("inner_via_hodge", std::abs(inner(w, v) - via_star));
    tr.update("hodge_isometry", std::abs(inner(u, w) - inner(hodge(u, t), hodge(w, t))));
    tr.update("vee_wedge_adjunction", std::abs(inner(wedge(w, v, t), u) - inner(w, vee(v, u, t))));

    // v ∨ u = (−1)^{(n+m−l)(l−m)} ∗(v ∧ ∗u) for m ≤ l, 0 otherwise
    const GradedForm star_formula =
        m <= l ? parity((3 + m - l) * (l - m)) * hodge(wedge(v, hodge(u, t), t), t) : GradedForm{};
    tr.update("vee_hodge_formula", (vee(v, u, t) - star_formula).max_abs());

    const auto comm = vee(p, wedge(q, u, t), t) - wedge(q, vee(p, u, t), t);
    tr.update("one_form_commutator", (comm - parity(l) * inner(p, q) * u).max_abs());

    const cplx prod = inner(vee(p, ul, t), vee(q, vl, t)) + inner(wedge(q, ul, t), wedge(p, vl, t));
    tr.update("product_identity", std::abs(prod - inner(p, q) * inner(ul, vl)));

    const auto xf = GradedForm::one_form(xi[0], xi[1], xi[2]);
    const auto delta_sym = (parity(l) * I) * vee(xf, u, t);
    const auto star_d_star = parity(3 * (l + 1) + 1) * hodge(I * wedge(xf, hodge(u, t), t), t);
    tr.update("codifferential_symbol", (delta_sym - star_d_star).max_abs());
}

}  // namespace detail

/// Copy of the sign tables with dx¹ ∨ dx¹ flipped; used to show that the
/// suite detects a wrong contraction sign.
inline BladeTables corrupted_tables()
{
    BladeTables t = kTables;
    t.vee_sign[1][1] = -t.vee_sign[1][1];
    return t;
}

/// Algebra identities over all basis blade combinations and `random_forms`
/// seeded random tuples.
inline SuiteReport algebra_suite(const BladeTables& t = kTables, std::uint64_t seed = 1, int random_forms = 1000,
                                 double tol = 1e-12)
{
    detail::Stopwatch clock;
    detail::Tracker tr;
    const std::array<double, 3> e1 = {1.0, 0.0, 0.0};

    for (int a = 0; a < kBlades; ++a) {
        const auto u = GradedForm::blade(a);
        const int l = algebra::grade_of_blade(a);
        for (int b = 0; b < kBlades; ++b) {
            const auto v = GradedForm::blade(b);
            const int m = algebra::grade_of_blade(b);
            for (int c = 0; c < kBlades; ++c) {
                const auto w = GradedForm::blade(c);
                for (int pi = 1; pi <= 3; ++pi) {
                    const auto p = GradedForm::blade(pi);
                    const auto q = GradedForm::blade(1 + (pi + c) % 3);
                    // ul, vl range over same-grade blades
                    const int lo = algebra::kGradeBegin[l], len = algebra::kGradeEnd[l] - lo;
                    const auto ul = GradedForm::blade(lo + (b % len));
                    const auto vl = GradedForm::blade(lo + (c % len));
                    detail::algebra_identities(tr, t, u, l, v, m, w, p, q, ul, vl,
                                               {e1[0] + pi, e1[1] - c, e1[2] + 0.5 * b});
                }
            }
        }
    }

    CounterRng rng(seed, 0xa1);
    for (int trial = 0; trial < random_forms; ++trial) {
        const int l = static_cast<int>(rng.next() % 4);
        const int m = static_cast<int>(rng.next() % 4);
        const auto u = rng.graded_form(l), v = rng.graded_form(m), w = rng.graded_form();
        const auto p = rng.graded_form(1), q = rng.graded_form(1);
        const auto ul = rng.graded_form(l), vl = rng.graded_form(l);
        const std::array<double, 3> xi = {rng.normal(), rng.normal(), rng.normal()};
        detail::algebra_identities(tr, t, u, l, v, m, w, p, q, ul, vl, xi);
        // the adjunction again with full graded forms in every slot
        const auto a = rng.graded_form(), b = rng.graded_form(), c = rng.graded_form();
        tr.update("vee_wedge_adjunction", std::abs(inner(wedge(a, b, t), c) - inner(a, vee(b, c, t))));
    }

    SuiteReport rep{"algebra", {}, 0.0};
    tr.flush(rep, tol);
    rep.seconds = clock.seconds();
    return rep;
}

/// Field calculus identities on band-limited random fields; relative errors.
inline SuiteReport calculus_suite(const Grid& g, std::uint64_t seed = 1, int trials = 2, double tol = 1e-10)
{
    detail::Stopwatch clock;
    detail::Tracker tr;
    const int K = std::max(1, 5 * g.n() / 32);  // products of two fields stay below Nyquist
    ComplexCovector zeta;
    zeta[0] = {0.7, 0.3};
    zeta[1] = {-0.2, 1.1};
    zeta[2] = {0.4, -0.5};

    for (int t = 0; t < trials; ++t) {
        CounterRng rng(seed, 0xca1c0000ULL + static_cast<std::uint64_t>(t));
        const auto u = random_bandlimited(g, rng, K), v = random_bandlimited(g, rng, K);

        const auto du = ext_deriv(u);
        tr.update("d_squared", ext_deriv(du).max_abs() / du.max_abs());
        const auto dlu = coderiv(u);
        tr.update("delta_squared", coderiv(dlu).max_abs() / dlu.max_abs());

        const double scale = l2_norm(du) * l2_norm(v);
        tr.update("adjointness", detail::pairing_error(integrate_inner(du, v), integrate_inner(u, coderiv(v)), scale));
        tr.update("parseval", detail::pairing_error(integrate_inner(u, v), spectral_inner(fft_forward(u), fft_forward(v)),
                                                    l2_norm(u) * l2_norm(v)));

        FormField star_form(g);
        for (int l = 0; l <= 3; ++l) star_form += detail::parity(3 * (l + 1) + 1) * hodge(ext_deriv(hodge(u.grade(l))));
        tr.update("codifferential_hodge_form", detail::rel_field(dlu, star_form));

        // ‖φ‖²_{L²} = ‖φ‖²_{H⁻¹} + ‖(d+δ)φ‖²_{H⁻¹} up to the grade involution
        const auto np = sobolev_norms(u);
        const auto nd = sobolev_norms(dirac(involution(u)));
        const double l2sq = np.l2 * np.l2;
        tr.update("l2_hminus1_identity", std::abs(l2sq - (np.hm1 * np.hm1 + nd.hm1 * nd.hm1)) / l2sq);

        const auto lap = conj_laplacian(u, zeta);
        const auto composed = conj_coderiv(conj_ext_deriv(u, zeta), zeta) + conj_ext_deriv(conj_coderiv(u, zeta), zeta);
        tr.update("conj_laplacian_factorization", detail::rel_field(lap, composed));

        const std::array<int, 3> m0 = {static_cast<int>(rng.next() % 3) + 1, -1 - static_cast<int>(rng.next() % 2), 1};
        const std::array<double, 3> xi0 = {m0[0] * g.dxi(), m0[1] * g.dxi(), m0[2] * g.dxi()};
        FormField wave(g);
        const int blade = static_cast<int>(rng.next() % kBlades);
        for (std::size_t i = 0; i < g.size(); ++i)
            wave(blade, i) = std::exp(I * (xi0[0] * g.point(i)[0] + xi0[1] * g.point(i)[1] + xi0[2] * g.point(i)[2]));
        const cplx symbol = symbols::norm2(xi0) - 2.0 * I * zeta.dot_real(xi0) - zeta.dot(zeta);
        tr.update("conj_laplacian_symbol", detail::rel_field(conj_laplacian(wave, zeta), symbol * wave));

        const auto a = random_bandlimited(g, rng, K, 0b0010), b = random_bandlimited(g, rng, K, 0b0010);
        const auto lhs = vee(a, ext_deriv(b)) + vee(b, ext_deriv(a)) + vee(coderiv(a), b) + vee(coderiv(b), a);
        FormField ab(g);
        for (std::size_t i = 0; i < g.size(); ++i) ab(0, i) = inner(a.at(i), b.at(i));
        tr.update("symmetric_tensor_identity", detail::rel_field(lhs, ext_deriv(ab) + sym_coderiv(sym_product(a, b))));
    }

    SuiteReport rep{"calculus", {}, 0.0};
    tr.flush(rep, tol);
    rep.seconds = clock.seconds();
    return rep;
}

/// X^{-1/2} → X^{1/2} norm of the clamped resolvent: the diagonal maximum
/// equals one, random fields never exceed it and a single mode attains it.
inline SuiteReport resolvent_suite(const Grid& g, std::uint64_t seed = 1, double tol = 1e-15)
{
    detail::Stopwatch clock;
    SuiteReport rep{"resolvent", {}, 0.0};
    double diag_err = 0.0, random_excess = 0.0, mode_err = 0.0;
    int case_index = 0;
    for (double k : {0.5, 1.0, 2.5}) {
        for (double s : {2.0, 8.0, 31.0}) {
            CounterRng rng(seed, 0x7e50ULL + static_cast<std::uint64_t>(case_index++));
            const double th = rng.uniform(0.0, 6.283185307179586);
            const std::array<double, 3> e1 = {std::cos(th), std::sin(th), 0.0};
            const std::array<double, 3> e2 = {0.0, 0.0, 1.0};
            ComplexCovector zeta;  // ⟨ζ,ζ⟩ = s² − (s² + k²) = −k²
            for (int j = 0; j < 3; ++j) zeta[j] = cplx(s * e1[j], std::sqrt(s * s + k * k) * e2[j]);
            const ConjugatedSymbol sym(g, zeta, default_clamp_floor(g));

            double norm = 0.0;
            for (std::size_t i = 0; i < g.size(); ++i) {
                if (sym.clamped(i)) continue;
                const double a = std::abs(sym.p(i));
                norm = std::max(norm, std::sqrt(a) / std::abs(sym.divisor(i)) * std::sqrt(a));
            }
            diag_err = std::max(diag_err, std::abs(norm - 1.0));

            const auto f = random_bandlimited(g, rng, std::max(1, g.n() / 4));
            const double in = bourgain_norm(f, zeta, -0.5, default_clamp_floor(g));
            const double out = bourgain_norm(resolvent(f, zeta, k, default_clamp_floor(g)).field, zeta, 0.5,
                                             default_clamp_floor(g));
            random_excess = std::max(random_excess, std::max(0.0, out / in - 1.0));

            FormField wave(g);
            for (std::size_t i = 0; i < g.size(); ++i) {
                const auto x = g.point(i);
                wave(2, i) = std::exp(I * g.dxi() * (2.0 * x[0] - x[1] + 3.0 * x[2]));
            }
            const double win = bourgain_norm(wave, zeta, -0.5, default_clamp_floor(g));
            const double wout = bourgain_norm(resolvent(wave, zeta, k, default_clamp_floor(g)).field, zeta, 0.5,
                                              default_clamp_floor(g));
            mode_err = std::max(mode_err, std::abs(wout / win - 1.0));
        }
    }
    rep.add("diagonal_maximum_is_one", diag_err, tol);
    rep.add("random_field_ratio_at_most_one", random_excess, 1e-12);
    rep.add("single_mode_attains_one", mode_err, 1e-12);
    rep.seconds = clock.seconds();
    return rep;
}

/// Weak factorization identities and weak vs strong potentials for
/// `pairs` random band-limited (w, φ).
inline SuiteReport factorization_suite(const DerivedMedium& dm, std::uint64_t seed = 1, int pairs = 20,
                                       double tol = 1e-6)
{
    detail::Stopwatch clock;
    detail::Tracker tr;
    const Grid& g = dm.grid;
    const int K = std::max(1, g.n() / 8);
    for (int t = 0; t < pairs; ++t) {
        CounterRng rng(seed, 0xfac70000ULL + static_cast<std::uint64_t>(t));
        const auto w = random_bandlimited(g, rng, K), phi = random_bandlimited(g, rng, K);
        const cplx base = weak::helmholtz_form(w, phi, dm.k);
        tr.update("transpose_factorization", detail::rel(integrate_inner(apply_Pt(w, dm), apply_Pt(phi, dm)),
                                                         base + integrate_inner(apply_Q(w, dm), phi)));
        tr.update("direct_factorization", detail::rel(integrate_inner(apply_P(w, dm), apply_P(phi, dm)),
                                                      base + integrate_inner(apply_Qt(w, dm), phi)));
        tr.update("transpose_pairing",
                  detail::rel(integrate_inner(apply_P(w, dm), phi), integrate_inner(w, apply_Pt(phi, dm))));
        tr.update("weak_Q_matches_strong", detail::rel(weak::weak_Q(w, phi, dm), integrate_inner(apply_Q(w, dm), phi)));
        tr.update("weak_Qt_matches_strong",
                  detail::rel(weak::weak_Qt(w, phi, dm), integrate_inner(apply_Qt(w, dm), phi)));

        const auto w03 = w.grades(0b1001), phi03 = phi.grades(0b1001);
        const auto qt = apply_Qt(w03, dm);
        const double leak = qt.grades(0b0110).max_abs();
        tr.update("qtilde_decoupling", qt.max_abs() > 0.0 ? leak / qt.max_abs() : leak);
        tr.update("weak_qtilde_matches_strong",
                  detail::rel(weak::weak_qtilde(w03, phi03, dm), integrate_inner(apply_qtilde(w03, dm), phi03)));
    }
    SuiteReport rep{"factorization", {}, 0.0};
    tr.flush(rep, tol);
    rep.seconds = clock.seconds();
    return rep;
}

}  // namespace cgo::checks

#endif  // CGO_CHECKS_HPP

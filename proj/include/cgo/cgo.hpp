#ifndef CGO_CGO_HPP
#define CGO_CGO_HPP

// CGO geometry, amplitudes and the remainder solver. All fields here are the
// periodic factors of e^{ζ·x}(·); the exponential itself is applied only by
// physical_samples().

#include <array>
#include <cmath>
#include <numbers>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "calculus.hpp"
#include "errors.hpp"
#include "media.hpp"
#include "parallel.hpp"

namespace cgo {

using Vec3 = std::array<double, 3>;

namespace vec {

inline double dot(const Vec3& a, const Vec3& b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]; }
inline double norm(const Vec3& a) { return std::sqrt(dot(a, a)); }
inline Vec3 scaled(const Vec3& a, double s) { return {a[0] * s, a[1] * s, a[2] * s}; }
inline Vec3 add(const Vec3& a, const Vec3& b) { return {a[0] + b[0], a[1] + b[1], a[2] + b[2]}; }
inline Vec3 cross(const Vec3& a, const Vec3& b)
{
    return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}
inline GradedForm form(const Vec3& a) { return GradedForm::one_form(a[0], a[1], a[2]); }

}  // namespace vec

struct CGOGeometry {
    Vec3 rho{};
    Vec3 eta1{};
    Vec3 eta2{};
    double s = 1.0;
    double k = 1.0;
    ComplexCovector zeta1;
    ComplexCovector zeta2;
};

enum class Polarization { E, H };

inline std::string_view to_string(Polarization p) { return p == Polarization::E ? "E" : "H"; }

inline Polarization parse_polarization(std::string_view s)
{
    if (s == "E" || s == "e") return Polarization::E;
    if (s == "H" || s == "h") return Polarization::H;
    throw std::invalid_argument("polarization must be \"E\" or \"H\"");
}

inline Vec3 lattice_vector(const Grid& g, const std::array<int, 3>& m)
{
    return {m[0] * g.dxi(), m[1] * g.dxi(), m[2] * g.dxi()};
}

inline bool on_lattice(const Grid& g, const Vec3& rho)
{
    for (double r : rho) {
        const double m = r / g.dxi();
        if (std::abs(m - std::round(m)) > 1e-9) return false;
    }
    return true;
}

/// ζ₁ = −√(s²+|ρ|²/4) η₁ + i(ρ/2 − √(s²+k²) η₂), ζ₂ = √(s²+|ρ|²/4) η₁ + i(ρ/2 + √(s²+k²) η₂).
inline CGOGeometry make_geometry(const Grid& g, const Vec3& rho, const Vec3& eta1, const Vec3& eta2, double s,
                                 double k)
{
    if (!(s >= 1.0)) throw std::invalid_argument("geometry: s must be >= 1");
    if (!(k >= 0.0)) throw std::invalid_argument("geometry: k must be nonnegative");
    const double scale = std::max(1.0, vec::norm(rho));
    if (std::abs(vec::norm(eta1) - 1.0) > 1e-12 || std::abs(vec::norm(eta2) - 1.0) > 1e-12)
        throw std::invalid_argument("geometry: eta1 and eta2 must be unit covectors");
    if (std::abs(vec::dot(eta1, eta2)) > 1e-12 || std::abs(vec::dot(eta1, rho)) > 1e-12 * scale ||
        std::abs(vec::dot(eta2, rho)) > 1e-12 * scale)
        throw std::invalid_argument("geometry: eta1, eta2 and rho must be mutually orthogonal");
    if (!on_lattice(g, rho)) throw std::invalid_argument("geometry: rho must lie on the frequency lattice");

    CGOGeometry geo{rho, eta1, eta2, s, k, {}, {}};
    const double a = std::sqrt(s * s + 0.25 * vec::dot(rho, rho));
    const double b = std::sqrt(s * s + k * k);
    for (int j = 0; j < 3; ++j) {
        geo.zeta1[j] = cplx(-a * eta1[j], 0.5 * rho[j] - b * eta2[j]);
        geo.zeta2[j] = cplx(a * eta1[j], 0.5 * rho[j] + b * eta2[j]);
    }
    return geo;
}

/// Orthonormal pair in the plane ρ^⊥, rotated by θ from a fixed base pair.
inline std::pair<Vec3, Vec3> frame(const Vec3& rho, double theta)
{
    Vec3 e1{1.0, 0.0, 0.0}, e2{0.0, 1.0, 0.0};
    const double r = vec::norm(rho);
    if (r > 0.0) {
        const Vec3 n = vec::scaled(rho, 1.0 / r);
        int axis = 0;
        for (int j = 1; j < 3; ++j)
            if (std::abs(n[j]) < std::abs(n[axis])) axis = j;
        Vec3 t{};
        t[axis] = 1.0;
        e1 = vec::add(t, vec::scaled(n, -n[axis]));
        e1 = vec::scaled(e1, 1.0 / vec::norm(e1));
        e2 = vec::cross(n, e1);
    }
    const double c = std::cos(theta), s = std::sin(theta);
    return {vec::add(vec::scaled(e1, c), vec::scaled(e2, s)), vec::add(vec::scaled(e1, -s), vec::scaled(e2, c))};
}

struct PolarizationForms {
    GradedForm alpha;
    GradedForm beta;
};

/// E: α = η₁, β = 0.  H: α = 0, β = |ρ|⁻¹ η₂∧ρ.
inline PolarizationForms polarization_forms(const CGOGeometry& geo, Polarization p)
{
    if (p == Polarization::E) return {vec::form(geo.eta1), GradedForm{}};
    const double r = vec::norm(geo.rho);
    if (r == 0.0) throw std::invalid_argument("H polarization requires rho != 0");
    return {GradedForm{}, (1.0 / r) * wedge(vec::form(geo.eta2), vec::form(geo.rho))};
}

namespace detail {

inline void require_polarization(const PolarizationForms& pf)
{
    if (pf.alpha.max_abs() == 0.0 && pf.beta.max_abs() == 0.0)
        throw std::invalid_argument("polarization must not vanish");
}

}  // namespace detail

/// √2/|ζ₁| (ζ₁∨α + ikα + ikβ + ζ₁∧β).
inline GradedForm amplitude_A(const CGOGeometry& geo, const PolarizationForms& pf)
{
    detail::require_polarization(pf);
    const auto z = geo.zeta1.as_form();
    const cplx ik = I * geo.k;
    return (std::sqrt(2.0) / geo.zeta1.norm()) * (vee(z, pf.alpha) + ik * pf.alpha + ik * pf.beta + wedge(z, pf.beta));
}
inline GradedForm amplitude_A(const CGOGeometry& geo, Polarization p)
{
    return amplitude_A(geo, polarization_forms(geo, p));
}

/// −√2/|ζ₂| (ζ₂∨(α+β) + ζ₂∧(−α+β) + ik(α+β)).
inline GradedForm amplitude_B(const CGOGeometry& geo, const PolarizationForms& pf)
{
    detail::require_polarization(pf);
    const auto z = geo.zeta2.as_form();
    const auto sum = pf.alpha + pf.beta;
    return (-std::sqrt(2.0) / geo.zeta2.norm()) * (vee(z, sum) + wedge(z, pf.beta - pf.alpha) + (I * geo.k) * sum);
}
inline GradedForm amplitude_B(const CGOGeometry& geo, Polarization p)
{
    return amplitude_B(geo, polarization_forms(geo, p));
}

/// Large-s limits −(η₁+iη₂)∨α − (η₁+iη₂)∧β and −(η₁+iη₂)∨(α+β) − (η₁+iη₂)∧(−α+β).
inline GradedForm limit_A(const CGOGeometry& geo, Polarization p)
{
    const auto pf = polarization_forms(geo, p);
    const auto e = vec::form(geo.eta1) + I * vec::form(geo.eta2);
    return -vee(e, pf.alpha) - wedge(e, pf.beta);
}
inline GradedForm limit_B(const CGOGeometry& geo, Polarization p)
{
    const auto pf = polarization_forms(geo, p);
    const auto e = vec::form(geo.eta1) + I * vec::form(geo.eta2);
    return -vee(e, pf.alpha + pf.beta) - wedge(e, pf.beta - pf.alpha);
}

/// −ζ∨A¹ + ikA⁰ − ζ∧A² + ikA³.
inline GradedForm incidence_residual(const ComplexCovector& zeta, double k, const GradedForm& A)
{
    const auto z = zeta.as_form();
    const cplx ik = I * k;
    return -vee(z, A.grade(1)) + ik * A.grade(0) - wedge(z, A.grade(2)) + ik * A.grade(3);
}

// --- remainder solver --------------------------------------------------------

struct SolverOptions {
    double tol = 1e-10;
    int max_iter = 200;
    double clamp_floor = 0.0;  ///< 0 selects default_clamp_floor(grid)
    double clamp_threshold = 1e-3;
    double divergence_factor = 0.95;
    int divergence_window = 3;

    double floor_for(const Grid& g) const { return clamp_floor > 0.0 ? clamp_floor : default_clamp_floor(g); }
};

struct SolveDiagnostics {
    int iterations = 0;
    double residual = 0.0;        ///< ‖p R̂ + (M(A+R))^‖ in X^{-1/2}
    double source_norm = 0.0;     ///< ‖M A‖ in X^{-1/2}
    double remainder_norm = 0.0;  ///< ‖R‖ in X^{1/2}
    double contraction = 0.0;     ///< max of the last three increment ratios
    ClampReport clamp;
    std::vector<double> increments;
};

struct CGOSolution {
    ComplexCovector zeta;
    GradedForm amplitude;
    FormField remainder;
    SolveDiagnostics diag;
};

namespace detail {

inline double measured_contraction(const std::vector<double>& inc)
{
    double c = 0.0;
    const std::size_t n = inc.size();
    for (std::size_t j = (n > 3 ? n - 3 : 1); j < n; ++j)
        if (inc[j - 1] > 0.0) c = std::max(c, inc[j] / inc[j - 1]);
    return c;
}

/// Fixed point x = −p⁻¹(source + M x) on the unclamped modes.
inline std::pair<FormField, SolveDiagnostics> neumann(const MatrixField& M, const ConjugatedSymbol& sym,
                                                      const FormField& source, const SolverOptions& opt)
{
    const Grid& g = source.grid();
    SolveDiagnostics diag;
    diag.clamp = sym.report();
    if (diag.clamp.fraction() > opt.clamp_threshold)
        throw ResonantGridError("clamped fraction " + std::to_string(diag.clamp.fraction()) + " exceeds threshold",
                                diag.clamp.fraction());

    const auto S = fft_forward(source);
    diag.source_norm = bourgain_norm(S, sym, -0.5, ClampPolicy::Project);
    const double target = opt.tol * (diag.source_norm + 1.0);

    FormField x(g);
    SpectralField X(g);
    int above = 0;
    for (int it = 1; it <= opt.max_iter; ++it) {
        SpectralField F = it == 1 ? S : fft_forward(source + M.apply(x));
        apply_resolvent(F, sym, ClampPolicy::Project);
        F *= cplx(-1.0);
        const double inc = bourgain_norm(F - X, sym, 0.5, ClampPolicy::Project);
        X = std::move(F);
        x = fft_inverse(X);
        diag.iterations = it;
        diag.increments.push_back(inc);
        diag.contraction = measured_contraction(diag.increments);

        if (inc <= target) {
            auto r = fft_forward(source + M.apply(x));
            for (std::size_t i = 0; i < g.size(); ++i)
                for (int b = 0; b < kBlades; ++b) r(b, i) += sym.p(i) * X(b, i);
            diag.residual = bourgain_norm(r, sym, -0.5, ClampPolicy::Project);
            if (diag.residual <= target) {
                diag.remainder_norm = bourgain_norm(X, sym, 0.5, ClampPolicy::Project);
                return {std::move(x), std::move(diag)};
            }
        }
        const std::size_t n = diag.increments.size();
        if (n >= 2 && diag.increments[n - 2] > 0.0 && inc / diag.increments[n - 2] >= opt.divergence_factor)
            ++above;
        else
            above = 0;
        if (above >= opt.divergence_window || !std::isfinite(inc))
            throw DivergenceError("Neumann iteration is not contracting", diag.contraction, it);
    }
    throw DivergenceError("Neumann iteration did not reach tolerance", diag.contraction, opt.max_iter);
}

/// M·c at every point for a constant form c.
inline FormField apply_constant(const MatrixField& M, const GradedForm& c)
{
    return M.apply(FormField::constant(M.grid(), c));
}

}  // namespace detail

/// Solves (Δ_ζ − k²)R + Q R = −Q A in conjugated variables by Neumann series.
inline CGOSolution solve_cgo(const DerivedMedium& dm, const ComplexCovector& zeta, const GradedForm& A,
                             const SolverOptions& opt = {})
{
    check_zeta_shell(zeta, dm.k);
    const ConjugatedSymbol sym(dm.grid, zeta, opt.floor_for(dm.grid));
    auto [R, diag] = detail::neumann(dm.q, sym, detail::apply_constant(dm.q, A), opt);
    return {zeta, A, std::move(R), std::move(diag)};
}

/// Conjugated v = e_{−ζ} Pᵗ e_ζ (A + R).
inline FormField conjugated_v(const DerivedMedium& dm, const CGOSolution& sol)
{
    return apply_Pt(FormField::constant(dm.grid, sol.amplitude) + sol.remainder, dm, sol.zeta);
}

/// ‖(v⁰ + v³)‖ / ‖v‖ in L² for v the conjugated Pᵗ image of the solution.
inline double check_grade03(const DerivedMedium& dm, const CGOSolution& sol)
{
    const auto v = conjugated_v(dm, sol);
    const double total = l2_norm(v);
    return total > 0.0 ? l2_norm(v.grades(0b1001)) / total : 0.0;
}

/// e^{ζ·x}(A + R(x)) at the grid points.
inline FormField physical_samples(const CGOSolution& sol)
{
    const Grid& g = sol.remainder.grid();
    FormField out(g);
    for (std::size_t i = 0; i < g.size(); ++i) {
        const cplx e = std::exp(sol.zeta.dot_real(g.point(i)));
        out.set(i, e * (sol.amplitude + sol.remainder.at(i)));
    }
    return out;
}

// --- operator norm estimate --------------------------------------------------

struct QNormEstimate {
    double estimate = 0.0;  ///< lower bound for ‖M‖ from X^{1/2} to X^{-1/2}
    double h = 0.0;         ///< mollifier scale |ζ|^{-1/2}
    double smooth_term = 0.0;
    double rough_term = 0.0;
};

namespace detail {

/// |p|^{-1/2} F M F⁻¹ |p|^{-1/2}, or the same with M*, on a spectrum.
inline SpectralField weighted_apply(const MatrixField& M, const ConjugatedSymbol& sym, const SpectralField& U,
                                    bool adjoint)
{
    const Grid& g = U.grid();
    SpectralField W = U;
    for (std::size_t i = 0; i < g.size(); ++i) {
        const double w = sym.weight(i, -0.25, ClampPolicy::Project);
        for (int b = 0; b < kBlades; ++b) W(b, i) *= w;
    }
    const auto u = fft_inverse(W);
    auto V = fft_forward(adjoint ? M.apply_adjoint(u) : M.apply(u));
    for (std::size_t i = 0; i < g.size(); ++i) {
        const double w = sym.weight(i, -0.25, ClampPolicy::Project);
        for (int b = 0; b < kBlades; ++b) V(b, i) *= w;
    }
    return V;
}

inline double spectral_l2(const SpectralField& F)
{
    double s = 0.0;
    for (int b = 0; b < kBlades; ++b)
        for (const auto& z : F.comp(b)) s += std::norm(z);
    return std::sqrt(s);
}

/// Random starts followed by power iteration on K*K; every value is a lower bound.
inline double operator_norm_lower_bound(const MatrixField& M, const ConjugatedSymbol& sym, int trials,
                                        std::uint64_t seed, int power_steps)
{
    const Grid& g = M.grid();
    double best = 0.0;
    SpectralField best_u(g);
    for (int t = 0; t < trials; ++t) {
        CounterRng rng(seed, static_cast<std::uint64_t>(t));
        SpectralField U(g);
        for (int b = 0; b < kBlades; ++b)
            for (std::size_t i = 0; i < g.size(); ++i)
                if (!sym.clamped(i)) U(b, i) = rng.complex_normal();
        const double nu = spectral_l2(U);
        if (nu == 0.0) continue;
        const double val = spectral_l2(weighted_apply(M, sym, U, false)) / nu;
        if (val > best || t == 0) {
            best = std::max(best, val);
            best_u = std::move(U);
        }
    }
    SpectralField U = best_u;
    for (int it = 0; it < power_steps; ++it) {
        const double nu = spectral_l2(U);
        if (nu == 0.0) break;
        U *= cplx(1.0 / nu);
        const auto KU = weighted_apply(M, sym, U, false);
        best = std::max(best, spectral_l2(KU));
        U = weighted_apply(M, sym, KU, true);
    }
    return best;
}

}  // namespace detail

/// Randomized lower bound for ‖Q‖ from X^{1/2}_ζ to X^{-1/2}_ζ, with the
/// mollifier split evaluated at h = |ζ|^{-1/2}.
inline QNormEstimate q_norm_estimate(const DerivedMedium& dm, const ComplexCovector& zeta, int trials,
                                     std::uint64_t seed, const SolverOptions& opt = {}, int power_steps = 12)
{
    if (trials < 16) throw std::invalid_argument("q_norm_estimate requires at least 16 trials");
    const ConjugatedSymbol sym(dm.grid, zeta, opt.floor_for(dm.grid));
    QNormEstimate q;
    q.estimate = detail::operator_norm_lower_bound(dm.q, sym, trials, seed, power_steps);
    const double zn = zeta.norm();
    q.h = 1.0 / std::sqrt(zn);
    const auto alpha = mollify(dm.da, q.h), beta = mollify(dm.db, q.h);
    q.smooth_term = (coderiv(alpha).max_abs() + coderiv(beta).max_abs()) / zn;
    q.rough_term = (dm.da - alpha).max_abs() + (dm.db - beta).max_abs();
    return q;
}

// --- average decay -----------------------------------------------------------

struct DecaySample {
    double lambda = 0.0;
    double s = 0.0;
    double angle = 0.0;
    bool ok = false;
    int iterations = 0;
    double residual = 0.0;
    double remainder_norm = 0.0;
    double source_norm = 0.0;
    double clamped_fraction = 0.0;
    double contraction = 0.0;
    std::string error;
};

struct DecayLevel {
    double lambda = 0.0;
    int samples = 0;
    int failures = 0;
    double mean_r2 = 0.0;
    double stderr_r2 = 0.0;
    double mean_qa2 = 0.0;
    double stderr_qa2 = 0.0;
};

struct DecayStudy {
    std::vector<DecaySample> samples;
    std::vector<DecayLevel> levels;
};

namespace detail {

inline std::pair<double, double> mean_and_stderr(const std::vector<double>& v)
{
    if (v.empty()) return {0.0, 0.0};
    double m = 0.0;
    for (double x : v) m += x;
    m /= static_cast<double>(v.size());
    if (v.size() < 2) return {m, 0.0};
    double s2 = 0.0;
    for (double x : v) s2 += (x - m) * (x - m);
    s2 /= static_cast<double>(v.size() - 1);
    return {m, std::sqrt(s2 / static_cast<double>(v.size()))};
}

}  // namespace detail

/// Sample point j of level l: golden-ratio angle, stratified s ∈ [λ, 2λ).
inline std::pair<double, double> decay_sample_point(std::uint64_t seed, std::size_t level, int j, int n, double lambda)
{
    CounterRng offsets(seed, 0x5eed0000ULL + level);
    const double angle_offset = offsets.uniform();
    CounterRng jitter(seed, 0x517a7000ULL + level);
    const double u = static_cast<double>(jitter.at(static_cast<std::uint64_t>(j)) >> 11) * 0x1.0p-53;
    const double angle = 2.0 * std::numbers::pi * golden_sequence(static_cast<std::uint64_t>(j), angle_offset);
    const double s = lambda * (1.0 + (static_cast<double>(j) + u) / static_cast<double>(n));
    return {angle, s};
}

inline DecayStudy decay_study(const DerivedMedium& dm, const Vec3& rho, Polarization pol,
                              const std::vector<double>& lambdas, int n_samples, std::uint64_t seed,
                              const SolverOptions& opt = {})
{
    if (n_samples < 8) throw std::invalid_argument("decay_study requires at least 8 samples per level");
    if (lambdas.empty()) throw std::invalid_argument("decay_study requires at least one lambda");
    for (std::size_t l = 0; l < lambdas.size(); ++l) {
        if (!(lambdas[l] >= 1.0)) throw std::invalid_argument("decay_study: lambda values must be >= 1");
        if (l > 0 && !(lambdas[l] > lambdas[l - 1]))
            throw std::invalid_argument("decay_study: lambda values must be increasing");
    }

    DecayStudy out;
    const std::size_t n = static_cast<std::size_t>(n_samples);
    out.samples.resize(lambdas.size() * n);
    parallel_for(out.samples.size(), [&](std::size_t idx) {
        const std::size_t level = idx / n;
        const int j = static_cast<int>(idx % n);
        DecaySample& smp = out.samples[idx];
        smp.lambda = lambdas[level];
        std::tie(smp.angle, smp.s) = decay_sample_point(seed, level, j, n_samples, smp.lambda);
        try {
            const auto [eta1, eta2] = frame(rho, smp.angle);
            const auto geo = make_geometry(dm.grid, rho, eta1, eta2, smp.s, dm.k);
            const auto sol = solve_cgo(dm, geo.zeta1, amplitude_A(geo, pol), opt);
            smp.ok = true;
            smp.iterations = sol.diag.iterations;
            smp.residual = sol.diag.residual;
            smp.remainder_norm = sol.diag.remainder_norm;
            smp.source_norm = sol.diag.source_norm;
            smp.clamped_fraction = sol.diag.clamp.fraction();
            smp.contraction = sol.diag.contraction;
        } catch (const DivergenceError& e) {
            smp.error = e.what();
            smp.contraction = e.contraction();
            smp.iterations = e.iterations();
        } catch (const ResonantGridError& e) {
            smp.error = e.what();
            smp.clamped_fraction = e.clamp_fraction();
        }
    });

    for (std::size_t level = 0; level < lambdas.size(); ++level) {
        DecayLevel lv;
        lv.lambda = lambdas[level];
        std::vector<double> r2, qa2;
        for (std::size_t j = 0; j < n; ++j) {
            const auto& smp = out.samples[level * n + j];
            if (!smp.ok) {
                ++lv.failures;
                continue;
            }
            r2.push_back(smp.remainder_norm * smp.remainder_norm);
            qa2.push_back(smp.source_norm * smp.source_norm);
        }
        lv.samples = static_cast<int>(r2.size());
        if (lv.failures * 5 > n_samples)
            throw StatisticalError("decay study: more than 20% of the samples failed at lambda = " + std::to_string(lv.lambda));
        std::tie(lv.mean_r2, lv.stderr_r2) = detail::mean_and_stderr(r2);
        std::tie(lv.mean_qa2, lv.stderr_qa2) = detail::mean_and_stderr(qa2);
        out.levels.push_back(lv);
    }
    return out;
}

}  // namespace cgo

#endif  // CGO_CGO_HPP

#include <gtest/gtest.h>

#include <numbers>

#include "cgo/calculus.hpp"
#include "oracles.hpp"

using namespace cgo;

namespace {

const Grid kGrid(32, 2.0 * std::numbers::pi);
constexpr int kBand = 5;  // products of two fields stay below Nyquist

double rel(double err, double scale) { return err / std::max(scale, 1e-300); }

FormField rand_field(std::uint64_t seed, unsigned grades = 0b1111, const Grid& g = kGrid)
{
    CounterRng rng(seed);
    return random_bandlimited(g, rng, kBand * g.n() / 32, grades);
}

ComplexCovector test_zeta()
{
    ComplexCovector z;
    z[0] = {0.7, 0.3};
    z[1] = {-0.2, 1.1};
    z[2] = {0.4, -0.5};
    return z;
}

}  // namespace

TEST(Grid, Validation)
{
    EXPECT_THROW(Grid(12, 1.0), std::invalid_argument);
    EXPECT_THROW(Grid(4, 1.0), std::invalid_argument);
    EXPECT_THROW(Grid(8, -1.0), std::invalid_argument);
    const Grid g(8, 2.0);
    for (std::size_t i = 0; i < g.size(); ++i) {
        const auto m = g.wavevector(i);
        EXPECT_EQ(g.bin_of_wavevector(m), i);
        EXPECT_EQ(g.negated(g.negated(i)), i);
    }
}

TEST(Fft, ConstantAndRoundTrip)
{
    const GradedForm c = GradedForm::blade(3, {1.5, -0.5});
    const auto F = fft_forward(FormField::constant(kGrid, c));
    EXPECT_NEAR(std::abs(F(3, 0) - c[3] * static_cast<double>(kGrid.size())), 0.0, 1e-9);
    for (std::size_t i = 1; i < kGrid.size(); ++i) ASSERT_LT(std::abs(F(3, i)), 1e-9);

    const auto f = rand_field(1);
    const auto back = fft_inverse(fft_forward(f));
    EXPECT_LT(rel((back - f).max_abs(), f.max_abs()), 1e-12);
}

TEST(Fft, Parseval)
{
    const auto u = rand_field(2), v = rand_field(3);
    const cplx lhs = integrate_inner(u, v);
    const cplx rhs = spectral_inner(fft_forward(u), fft_forward(v));
    EXPECT_LT(std::abs(lhs - rhs) / std::abs(lhs), 1e-12);
}

TEST(Calculus, DerivativeOfSine)
{
    const double L = kGrid.L();
    const auto s = sample_scalar(kGrid, [L](const auto& x) { return cplx(std::sin(2 * std::numbers::pi * x[0] / L)); });
    const auto ds = gradient(s);
    double err = 0.0;
    for (std::size_t i = 0; i < kGrid.size(); ++i) {
        const auto x = kGrid.point(i);
        const double expected = (2 * std::numbers::pi / L) * std::cos(2 * std::numbers::pi * x[0] / L);
        err = std::max(err, std::abs(ds(1, i) - expected));
        err = std::max(err, std::abs(ds(2, i)) + std::abs(ds(3, i)) + std::abs(ds(0, i)));
    }
    EXPECT_LT(err, 1e-12);
}

TEST(Calculus, NilpotentAndAdjoint)
{
    const auto u = rand_field(4), v = rand_field(5);
    const double scale = ext_deriv(u).max_abs();
    EXPECT_LT(rel(ext_deriv(ext_deriv(u)).max_abs(), scale), 1e-10);
    EXPECT_LT(rel(coderiv(coderiv(u)).max_abs(), scale), 1e-10);
    const cplx lhs = integrate_inner(ext_deriv(u), v);
    const cplx rhs = integrate_inner(u, coderiv(v));
    EXPECT_LT(std::abs(lhs - rhs) / std::abs(lhs), 1e-10);
}

TEST(Calculus, CoderivOfScalarVanishes)
{
    const auto u = rand_field(6, 0b0001);
    EXPECT_LT(coderiv(u).max_abs(), 1e-12);
}

TEST(Calculus, CoderivMatchesStarDStar)
{
    const auto u = rand_field(7);
    FormField expected(kGrid);
    for (int l = 0; l <= 3; ++l) {
        const double sign = ((3 * (l + 1) + 1) % 2) ? -1.0 : 1.0;
        expected += sign * hodge(ext_deriv(hodge(u.grade(l))));
    }
    EXPECT_LT(rel((coderiv(u) - expected).max_abs(), expected.max_abs()), 1e-12);
}

TEST(Calculus, ConjugatedOperators)
{
    const auto u = rand_field(8);
    const auto zeta = test_zeta();
    EXPECT_LT((conj_ext_deriv(u, ComplexCovector{}) - ext_deriv(u)).max_abs(), 1e-13);
    EXPECT_LT((conj_coderiv(u, ComplexCovector{}) - coderiv(u)).max_abs(), 1e-13);

    const auto du = conj_ext_deriv(u, zeta);
    EXPECT_LT(rel(conj_ext_deriv(du, zeta).max_abs(), du.max_abs()), 1e-12);

    // d_ζ = d + ζ∧ pointwise
    const auto zf = FormField::constant(kGrid, zeta.as_form());
    EXPECT_LT(rel((du - ext_deriv(u) - wedge(zf, u)).max_abs(), du.max_abs()), 1e-12);
    // δ_ζ = δ + (−1)^l ζ∨ pointwise
    const auto dz = conj_coderiv(u, zeta);
    EXPECT_LT(rel((dz - coderiv(u) - vee(zf, involution(u))).max_abs(), dz.max_abs()), 1e-12);

    const auto lap = conj_laplacian(u, zeta);
    const auto composed = conj_coderiv(du, zeta) + conj_ext_deriv(conj_coderiv(u, zeta), zeta);
    EXPECT_LT(rel((lap - composed).max_abs(), lap.max_abs()), 1e-10);
}

TEST(Calculus, ConjLaplacianExamples)
{
    const auto zeta = test_zeta();
    const GradedForm c = GradedForm::blade(5, {0.3, 0.9});
    const auto out = conj_laplacian(FormField::constant(kGrid, c), zeta);
    const auto expected = -zeta.dot(zeta) * c;
    for (std::size_t i = 0; i < kGrid.size(); i += 97) EXPECT_LT((out.at(i) - expected).max_abs(), 1e-12);

    // plane wave e^{iξ₀·x} dx¹
    const std::array<int, 3> m0 = {2, -3, 1};
    FormField wave(kGrid);
    for (std::size_t i = 0; i < kGrid.size(); ++i) {
        const auto x = kGrid.point(i);
        wave(1, i) = std::exp(I * (m0[0] * x[0] + m0[1] * x[1] + m0[2] * x[2]) * kGrid.dxi());
    }
    const std::array<double, 3> xi0 = {m0[0] * kGrid.dxi(), m0[1] * kGrid.dxi(), m0[2] * kGrid.dxi()};
    const cplx symbol = symbols::norm2(xi0) - 2.0 * I * zeta.dot_real(xi0) - zeta.dot(zeta);
    EXPECT_LT(rel((conj_laplacian(wave, zeta) - symbol * wave).max_abs(), std::abs(symbol)), 1e-12);

    const auto u = rand_field(9);
    const auto hl = hodge_laplacian(u);
    const auto dd = ext_deriv(coderiv(u)) + coderiv(ext_deriv(u));
    EXPECT_LT(rel((hl - dd).max_abs(), hl.max_abs()), 1e-10);
}

TEST(Calculus, ResolventInverse)
{
    const double k = 1.0;
    const double s = 3.3;
    ComplexCovector zeta;  // ⟨ζ,ζ⟩ = s² − (s² + k²) = −k²
    zeta[0] = -s;
    zeta[1] = I * std::sqrt(s * s + k * k);
    const auto f = rand_field(10);
    const double floor = default_clamp_floor(kGrid);

    // remove the clamp set from f first
    const ConjugatedSymbol sym(kGrid, zeta, floor);
    auto F = fft_forward(f);
    for (std::size_t i = 0; i < kGrid.size(); ++i)
        if (sym.clamped(i))
            for (int b = 0; b < kBlades; ++b) F(b, i) = 0.0;
    const auto g = fft_inverse(F);
    const auto Hg = conj_laplacian(g, zeta) - (k * k) * g;
    const auto res = resolvent(Hg, zeta, k, floor, ClampPolicy::Project);
    EXPECT_LT(rel((res.field - g).max_abs(), g.max_abs()), 1e-10);
    EXPECT_GE(res.report.clamped, 1u);  // ξ = 0 lies on p_ζ = 0

    // the floor policy agrees with exact inversion away from the clamp set
    const auto floored = fft_forward(resolvent(Hg, zeta, k, floor, ClampPolicy::Floor).field);
    double err = 0.0, scale = 0.0;
    for (std::size_t i = 0; i < kGrid.size(); ++i) {
        if (sym.clamped(i)) continue;
        for (int b = 0; b < kBlades; ++b) {
            err = std::max(err, std::abs(floored(b, i) - F(b, i)));
            scale = std::max(scale, std::abs(F(b, i)));
        }
    }
    EXPECT_LT(err / scale, 1e-10);

    ComplexCovector off = zeta;
    off[2] = 0.5;
    EXPECT_THROW(resolvent(f, off, k, floor), std::invalid_argument);
}

TEST(Calculus, ResolventOperatorNormIsOne)
{
    const double k = 1.0, s = 5.0;
    ComplexCovector zeta;
    zeta[0] = -s;
    zeta[1] = I * std::sqrt(s * s + k * k);
    const ConjugatedSymbol sym(kGrid, zeta, default_clamp_floor(kGrid));
    double norm = 0.0;
    for (std::size_t i = 0; i < kGrid.size(); ++i) {
        if (sym.clamped(i)) continue;
        const double a = std::abs(sym.p(i));
        norm = std::max(norm, std::sqrt(a) / std::abs(sym.divisor(i)) * std::sqrt(a));
    }
    EXPECT_DOUBLE_EQ(norm, 1.0);
}

TEST(Calculus, BourgainNorm)
{
    const auto zeta = test_zeta();
    const double floor = default_clamp_floor(kGrid);
    EXPECT_EQ(bourgain_norm(FormField(kGrid), zeta, 0.5, floor), 0.0);
    EXPECT_THROW(bourgain_norm(FormField(kGrid), zeta, 1.0, floor), std::invalid_argument);

    const auto f = rand_field(11), g = rand_field(12);
    const double nf = bourgain_norm(f, zeta, 0.5, floor);
    EXPECT_NEAR(bourgain_norm(cplx(2.5, -1.0) * f, zeta, 0.5, floor), std::abs(cplx(2.5, -1.0)) * nf, 1e-10 * nf);
    EXPECT_LE(bourgain_norm(f + g, zeta, 0.5, floor), nf + bourgain_norm(g, zeta, 0.5, floor) * (1 + 1e-14));

    // duality bound on the pairing
    const cplx pair = integrate_inner(f, g);
    EXPECT_LE(std::abs(pair), nf * bourgain_norm(g, zeta, -0.5, floor) * (1 + 1e-12));

    // plane wave on 8³ by direct summation
    const Grid small(8, 3.0);
    const std::array<int, 3> m0 = {1, -2, 3};
    FormField wave(small);
    for (std::size_t i = 0; i < small.size(); ++i) {
        const auto x = small.point(i);
        wave(2, i) = std::exp(I * small.dxi() * (m0[0] * x[0] + m0[1] * x[1] + m0[2] * x[2]));
    }
    const std::array<double, 3> xi0 = {m0[0] * small.dxi(), m0[1] * small.dxi(), m0[2] * small.dxi()};
    const double ap = std::abs(symbols::p(xi0, zeta));
    double direct = 0.0;
    for (std::size_t i = 0; i < small.size(); ++i) direct += std::norm(wave(2, i));
    direct *= small.cell_volume();  // L² norm² = L³
    for (double b : {0.5, -0.5}) {
        const double expected = std::pow(ap, b) * std::sqrt(direct);
        EXPECT_NEAR(bourgain_norm(wave, zeta, b, default_clamp_floor(small)), expected, 1e-12 * expected);
    }
}

TEST(Calculus, SobolevNormsAndLocalRegularity)
{
    const GradedForm c = GradedForm::blade(0, 2.0);
    const auto n0 = sobolev_norms(FormField::constant(kGrid, c));
    const double L = kGrid.L();
    EXPECT_NEAR(n0.l2, 2.0 * std::pow(L, 1.5), 1e-10);
    EXPECT_NEAR(n0.hm1, n0.l2, 1e-10);

    const auto phi = rand_field(13);
    const auto np = sobolev_norms(phi);
    const auto rhs = sobolev_norms(dirac(involution(phi)));
    const double lhs2 = np.l2 * np.l2;
    EXPECT_LT(std::abs(lhs2 - (np.hm1 * np.hm1 + rhs.hm1 * rhs.hm1)) / lhs2, 1e-10);

    // H^{-1} of a single high-frequency plane wave
    const std::array<int, 3> m0 = {7, 0, -4};
    FormField wave(kGrid);
    for (std::size_t i = 0; i < kGrid.size(); ++i) {
        const auto x = kGrid.point(i);
        wave(6, i) = std::exp(I * kGrid.dxi() * (m0[0] * x[0] + m0[1] * x[1] + m0[2] * x[2]));
    }
    const auto nw = sobolev_norms(wave);
    const double xi2 = (49.0 + 16.0) * kGrid.dxi() * kGrid.dxi();
    EXPECT_NEAR(nw.hm1, nw.l2 / std::sqrt(1.0 + xi2), 1e-10 * nw.l2);
}

TEST(Calculus, Mollifier)
{
    const auto f = rand_field(14);
    EXPECT_LT((mollify(f, 1e-6) - f).max_abs(), 1e-10);
    const auto c = FormField::constant(kGrid, GradedForm::blade(4, {1.0, 2.0}));
    EXPECT_LT((mollify(c, 0.7) - c).max_abs(), 1e-12);
    EXPECT_THROW(mollify(f, 0.0), std::invalid_argument);

    // gradient of the mollified field scales like 1/h: step input,
    // finite-difference gradient oracle
    const Grid g(64, 2.0 * std::numbers::pi);
    const auto rf = as_form(sample_scalar(g, [](const auto& x) { return cplx(std::sin(x[0]) >= 0.0 ? 1.0 : -1.0); }));
    const double sup = rf.max_abs();
    std::vector<double> ratio;
    for (double h : {1.0, 0.5, 0.25}) {
        const auto m = mollify(rf, h);
        double grad = 0.0;
        for (std::size_t i = 0; i < g.size(); ++i) {
            const auto c3 = g.coords(i);
            const std::size_t ip = g.index((c3[0] + 1) % g.n(), c3[1], c3[2]);
            grad = std::max(grad, std::abs(m(0, ip) - m(0, i)) / g.h());
        }
        ratio.push_back(grad * h / sup);
    }
    for (double r : ratio) {
        EXPECT_GT(r, 0.3);
        EXPECT_LT(r, 3.0);
    }
}

TEST(Calculus, SymmetricTensorCoderivative)
{
    EXPECT_LT(sym_coderiv(SymTensorField(kGrid)).max_abs(), 1e-14);

    const double L = kGrid.L();
    const double w = 2 * std::numbers::pi / L;
    SymTensorField t(kGrid);
    for (std::size_t i = 0; i < kGrid.size(); ++i) t(algebra::SymTensor2::slot(1, 1), i) = std::sin(w * kGrid.point(i)[0]);
    const auto out = sym_coderiv(t);
    double err = 0.0;
    for (std::size_t i = 0; i < kGrid.size(); ++i)
        err = std::max(err, std::abs(out(1, i) + 2.0 * w * std::cos(w * kGrid.point(i)[0])));
    EXPECT_LT(err, 1e-12);

    const auto u = rand_field(16, 0b0010), v = rand_field(17, 0b0010);
    const auto lhs = vee(u, ext_deriv(v)) + vee(v, ext_deriv(u)) + vee(coderiv(u), v) + vee(coderiv(v), u);
    FormField uv(kGrid);
    for (std::size_t i = 0; i < kGrid.size(); ++i) uv(0, i) = inner(u.at(i), v.at(i));
    const auto rhs = ext_deriv(uv) + sym_coderiv(sym_product(u, v));
    EXPECT_LT(rel((lhs - rhs).max_abs(), lhs.max_abs()), 1e-10);
}

TEST(Calculus, RadialOracleSanity)
{
    // Gaussian check of the radial quadrature used by other suites.
    const double q = 1.7;
    const double v = oracle::radial_fourier([](double r) { return std::exp(-r * r); }, 8.0, q);
    const double expected = std::pow(std::numbers::pi, 1.5) * std::exp(-q * q / 4.0);
    EXPECT_NEAR(v, expected, 1e-9);
}

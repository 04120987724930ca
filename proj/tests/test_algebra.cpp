#include <gtest/gtest.h>

#include "cgo/algebra.hpp"
#include "cgo/random.hpp"
#include "oracles.hpp"

using namespace cgo;
using algebra::grade_of_blade;

namespace {

constexpr double kTol = 1e-12;

GradedForm e(int blade) { return GradedForm::blade(blade); }

}  // namespace

TEST(Algebra, BladeLayout)
{
    for (int b = 0; b < kBlades; ++b) {
        algebra::Blade bl(b);
        EXPECT_EQ(bl.index(), b);
        EXPECT_EQ(algebra::Blade::from_mask(bl.mask()), bl);
    }
    EXPECT_EQ(algebra::Blade(0).grade(), 0);
    EXPECT_EQ(algebra::Blade(5).grade(), 2);
    EXPECT_EQ(algebra::Blade(7).grade(), 3);
    EXPECT_THROW(algebra::Blade(8), std::out_of_range);
}

TEST(Algebra, WedgeExamples)
{
    EXPECT_EQ(wedge(e(1), e(2)), e(4));
    EXPECT_EQ(wedge(e(2), e(1)), -e(4));
    EXPECT_EQ(wedge(e(1), e(1)), GradedForm{});
    const cplx c{2.0, 1.0};
    EXPECT_EQ(wedge(GradedForm::scalar(c), e(6)), GradedForm::blade(6, c));
    EXPECT_EQ(wedge(e(4), e(3)), e(7));
    EXPECT_EQ(wedge(e(3), e(4)), e(7));
    EXPECT_EQ(wedge(e(2), e(5)), -e(7));
}

TEST(Algebra, TablesMatchPermutationOracle)
{
    for (int a = 0; a < kBlades; ++a) {
        EXPECT_EQ(hodge(e(a)), oracle::hodge(e(a))) << a;
        for (int b = 0; b < kBlades; ++b) {
            EXPECT_EQ(wedge(e(a), e(b)), oracle::wedge(e(a), e(b))) << a << "," << b;
            EXPECT_LT(oracle::max_diff(vee(e(a), e(b)), oracle::vee(e(a), e(b))), kTol) << a << "," << b;
        }
    }
}

TEST(Algebra, HodgeExamples)
{
    EXPECT_EQ(hodge(e(0)), e(7));
    EXPECT_EQ(hodge(e(2)), -e(5));
    for (int b = 0; b < kBlades; ++b) EXPECT_EQ(hodge(hodge(e(b))), e(b));
}

TEST(Algebra, InnerExamples)
{
    EXPECT_EQ(inner(e(4), e(4)), cplx(1.0));
    EXPECT_EQ(inner(e(4), e(5)), cplx(0.0));
    EXPECT_EQ(inner(I * e(1), I * e(1)), cplx(-1.0));
    for (int a = 0; a < kBlades; ++a)
        for (int b = 0; b < kBlades; ++b) EXPECT_EQ(inner(e(a), e(b)), cplx(a == b ? 1.0 : 0.0));
}

TEST(Algebra, VeeExamples)
{
    EXPECT_EQ(vee(e(1), e(1)), e(0));
    EXPECT_EQ(vee(e(4), e(3)), GradedForm{});
    EXPECT_EQ(vee(e(7), e(1)), GradedForm{});
    EXPECT_EQ(vee(e(0), e(5)), e(5));
}

TEST(Algebra, SymProduct)
{
    const auto t11 = algebra::sym_product(e(1), e(1));
    EXPECT_EQ(t11(1, 1), cplx(1.0));
    for (int s = 1; s < algebra::SymTensor2::kEntries; ++s) EXPECT_EQ(t11[s], cplx(0.0));
    const auto t12 = algebra::sym_product(e(1), e(2));
    EXPECT_EQ(t12(1, 2), cplx(0.5));
    EXPECT_EQ(t12(2, 1), cplx(0.5));
    EXPECT_EQ(t12(1, 1), cplx(0.0));
    EXPECT_THROW(algebra::sym_product(e(0), e(1)), std::invalid_argument);
    EXPECT_THROW(algebra::sym_product(e(1) + e(4), e(1)), std::invalid_argument);

    CounterRng rng(11);
    for (int t = 0; t < 100; ++t) {
        const auto u = rng.graded_form(1), v = rng.graded_form(1);
        EXPECT_EQ(algebra::sym_product(u, v), algebra::sym_product(v, u));
    }
}

TEST(Algebra, GradeProjection)
{
    CounterRng rng(3);
    const auto u = rng.graded_form();
    GradedForm sum;
    for (int l = 0; l <= 3; ++l) {
        const auto p = u.grade(l);
        EXPECT_TRUE(p.is_pure_grade(l));
        sum += p;
    }
    EXPECT_EQ(sum, u);
    EXPECT_EQ(u.grades(0b1001), u.grade(0) + u.grade(3));
}

class AlgebraRandom : public ::testing::TestWithParam<int> {};

TEST_P(AlgebraRandom, Identities)
{
    CounterRng rng(static_cast<std::uint64_t>(GetParam()));
    for (int trial = 0; trial < 100; ++trial) {
        const int l = static_cast<int>(rng.next() % 4);
        const int m = static_cast<int>(rng.next() % 4);
        const auto u = rng.graded_form(l), v = rng.graded_form(m);
        const auto w = rng.graded_form();

        // anti-commutation
        const double sign = ((l * m) % 2) ? -1.0 : 1.0;
        EXPECT_LT(oracle::max_diff(wedge(u, v), sign * wedge(v, u)), kTol);
        // ∗∗ = 1 for n = 3
        EXPECT_LT(oracle::max_diff(hodge(hodge(w)), w), kTol);
        // inner through the star
        const auto u2 = rng.graded_form(l), u3 = rng.graded_form(l);
        EXPECT_LT(std::abs(inner(u2, u3) - hodge(wedge(u2, hodge(u3)))[0]), kTol);
        EXPECT_LT(std::abs(inner(u, w) - inner(hodge(u), hodge(w))), kTol);
        // vee/wedge adjunction
        const auto a = rng.graded_form(), b = rng.graded_form(), c = rng.graded_form();
        EXPECT_LT(std::abs(inner(wedge(a, b), c) - inner(a, vee(b, c))), kTol);
        EXPECT_LT(oracle::max_diff(vee(b, c), oracle::vee(b, c)), kTol);
        EXPECT_LT(oracle::max_diff(wedge(a, b), oracle::wedge(a, b)), kTol);
        // 1-form commutator
        const auto p = rng.graded_form(1), q = rng.graded_form(1);
        const double sl = (l % 2) ? -1.0 : 1.0;
        const auto lhs = vee(p, wedge(q, u)) - wedge(q, vee(p, u));
        EXPECT_LT(oracle::max_diff(lhs, sl * inner(p, q) * u), kTol);
        // product identity
        const auto ul = rng.graded_form(l), vl = rng.graded_form(l);
        const cplx left = inner(vee(p, ul), vee(q, vl)) + inner(wedge(q, ul), wedge(p, vl));
        EXPECT_LT(std::abs(left - inner(p, q) * inner(ul, vl)), kTol);
        // δ = (−1)^{n(l+1)+1} ∗d∗ at the symbol level
        const std::array<double, 3> xi = {rng.normal(), rng.normal(), rng.normal()};
        const auto xf = GradedForm::one_form(xi[0], xi[1], xi[2]);
        const double sd = ((3 * (l + 1) + 1) % 2) ? -1.0 : 1.0;
        const auto delta_sym = (sl * I) * vee(xf, u);
        const auto star_d_star = sd * hodge(I * wedge(xf, hodge(u)));
        EXPECT_LT(oracle::max_diff(delta_sym, star_d_star), kTol);
    }
}

INSTANTIATE_TEST_SUITE_P(Seeds, AlgebraRandom, ::testing::Range(0, 10));

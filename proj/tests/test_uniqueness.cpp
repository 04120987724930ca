#include <gtest/gtest.h>

#include <numbers>

#include "cgo/uniqueness.hpp"
#include "fixtures.hpp"
#include "oracles.hpp"

using namespace cgo;

namespace {

const MediumPair& distinct()
{
    static const MediumPair mp =
        make_medium_pair(fixtures::derived(fixtures::two_bump()), fixtures::derived(fixtures::other_bump()));
    return mp;
}

const MediumPair& identical()
{
    static const MediumPair mp =
        make_medium_pair(fixtures::derived(fixtures::two_bump()), fixtures::derived(fixtures::two_bump()));
    return mp;
}

Vec3 rho_ref(const Grid& g = fixtures::grid32()) { return lattice_vector(g, {1, 0, 0}); }

CGOGeometry geometry(double s, const Grid& g = fixtures::grid32(), double angle = 0.7)
{
    const auto [e1, e2] = frame(rho_ref(g), angle);
    return make_geometry(g, rho_ref(g), e1, e2, s, 1.0);
}

/// The three relation integrals by direct quadrature, with d e_{iρ} = iρ e_{iρ}.
cplx weak_target(const MediumPair& mp, const Vec3& rho, bool use_a)
{
    const Grid& g = mp.dm1.grid;
    const auto& d1 = use_a ? mp.dm1.da : mp.dm1.db;
    const auto& d2 = use_a ? mp.dm2.da : mp.dm2.db;
    const auto drho = I * vec::form(rho);
    const double w2 = mp.dm1.omega * mp.dm1.omega;
    cplx s{};
    for (std::size_t i = 0; i < g.size(); ++i) {
        const cplx e = std::exp(I * vec::dot(rho, g.point(i)));
        const auto diff = d2.at(i) - d1.at(i);
        s += inner(diff, drho) * e;
        s -= inner(d1.at(i) + d2.at(i), diff) * e;
        s += w2 * (mp.dm2.gamma(0, i) * mp.dm2.mu(0, i) - mp.dm1.gamma(0, i) * mp.dm1.mu(0, i)) * e;
    }
    return g.cell_volume() * s;
}

double rel(cplx a, cplx b) { return std::abs(a - b) / std::max(std::abs(a), std::abs(b)); }

}  // namespace

TEST(MediumPair, Validation)
{
    EXPECT_NO_THROW(distinct().validate());
    auto bad = distinct();
    bad.dm2.gamma(0, 0) += 0.1;  // grid corner lies outside the sub-box
    EXPECT_THROW(bad.validate(), std::invalid_argument);
    bad = distinct();
    bad.dm2.omega = 2.0;
    EXPECT_THROW(bad.validate(), std::invalid_argument);
    const Grid g16(16, fixtures::grid32().L());
    EXPECT_THROW(make_medium_pair(fixtures::background(), fixtures::background(g16)), std::invalid_argument);
}

TEST(Targets, IdenticalMediaVanish)
{
    const auto& mp = identical();
    for (const auto& m : std::vector<std::array<int, 3>>{{0, 0, 0}, {1, 0, 0}, {2, -1, 3}}) {
        const auto rho = lattice_vector(mp.dm1.grid, m);
        EXPECT_EQ(target_a(mp, rho), cplx{});
        EXPECT_EQ(target_b(mp, rho), cplx{});
    }
}

TEST(Targets, MatchWeakQuadratureAtBothSigns)
{
    const auto& mp = distinct();
    for (const auto& m : std::vector<std::array<int, 3>>{{1, 0, 0}, {2, -1, 3}, {0, 0, 0}}) {
        for (double sign : {1.0, -1.0}) {
            const auto rho = vec::scaled(lattice_vector(mp.dm1.grid, m), sign);
            EXPECT_LT(rel(target_a(mp, rho), weak_target(mp, rho, true)), 1e-10);
            EXPECT_LT(rel(target_b(mp, rho), weak_target(mp, rho, false)), 1e-10);
        }
    }
}

TEST(Targets, ZeroFrequencyDropsTheDerivativeTerm)
{
    const auto& mp = distinct();
    const Grid& g = mp.dm1.grid;
    cplx s{};
    for (std::size_t i = 0; i < g.size(); ++i) {
        const auto diff = mp.dm2.da.at(i) - mp.dm1.da.at(i);
        s += -inner(mp.dm1.da.at(i) + mp.dm2.da.at(i), diff) +
             mp.dm1.omega * mp.dm1.omega *
                 (mp.dm2.gamma(0, i) * mp.dm2.mu(0, i) - mp.dm1.gamma(0, i) * mp.dm1.mu(0, i));
    }
    EXPECT_LT(rel(target_a(mp, {0, 0, 0}), g.cell_volume() * s), 1e-12);
}

TEST(Targets, ClosedFormBumpContrast)
{
    // μ₂ = 1 + bump, all else background: only the ω² term survives in the
    // a-relation, and it is ω² times the Fourier transform of the bump. The
    // sampled bump is only C⁵ at its rim, so the grid sum carries a small
    // quadrature error that must shrink quickly under refinement.
    const Bump bump{{0.2, -0.1, 0.15}, 1.1, 0.3, 6.0};
    const double omega = 1.3;
    auto worst = [&](int n) {
        const Grid g(n, fixtures::grid32().L());
        const auto m1 = Medium::background(g, omega, 1.0, 1.0);
        auto m2 = m1;
        for (std::size_t i = 0; i < g.size(); ++i) m2.mu(0, i) = 1.0 + bump(g.point(i), g.L());
        const auto mp = make_medium_pair(derive(m1), derive(m2));
        const double c = 0.5 * g.L();
        const Vec3 center = {c + 0.2, c - 0.1, c + 0.15};
        double err = 0.0;
        for (const auto& m : std::vector<std::array<int, 3>>{{1, 0, 0}, {2, -1, 1}, {0, 0, 0}}) {
            const auto rho = lattice_vector(g, m);
            const double ft = oracle::radial_fourier(
                [&](double r) { return bump({c + 0.2 + r, c - 0.1, c + 0.15}, g.L()); }, bump.radius, vec::norm(rho));
            const cplx expected = omega * omega * std::exp(I * vec::dot(rho, center)) * ft;
            err = std::max(err, rel(target_a(mp, rho), expected));
        }
        return err;
    };
    const double coarse = worst(16), fine = worst(32);
    EXPECT_LT(fine, 1e-5);
    EXPECT_LT(fine, coarse / 8.0);
}

TEST(Pairing, IdenticalMediaVanish)
{
    for (auto p : {Polarization::E, Polarization::H}) {
        const auto r = pairing(identical(), geometry(8.0), p);
        EXPECT_LT(std::abs(r.value), 1e-9);
        EXPECT_GT(r.w.remainder.max_abs(), 0.0);
    }
}

TEST(Pairing, LimitAmplitudesReproduceTargets)
{
    // With R = S = 0 and the large-s amplitudes, the pairing is a weak form
    // of the relation integrals; the targets are computed in strong form.
    const auto& mp = distinct();
    const Grid& g = mp.dm1.grid;
    for (double angle : {0.0, 0.7, 2.1}) {
        const auto geo = geometry(8.0, g, angle);
        for (auto p : {Polarization::E, Polarization::H}) {
            const auto v = potential_pairing(mp, geo.rho, FormField::constant(g, limit_A(geo, p)),
                                             FormField::constant(g, limit_B(geo, p)));
            EXPECT_LT(rel(v, pairing_limit(mp, geo.rho, p)), 1e-9) << to_string(p) << " angle " << angle;
        }
    }
}

TEST(Pairing, LinearInTheAmplitude)
{
    const auto geo = geometry(16.0);
    const cplx c(1.7, -0.4);
    const auto base = pairing(distinct(), geo, Polarization::E).value;
    const auto scaled = pairing(distinct(), geo, Polarization::E, {}, c).value;
    EXPECT_LT(rel(scaled, c * base), 1e-8);
}

TEST(Pairing, SwappedPairTracksAntisymmetricTargets)
{
    const auto& mp = distinct();
    const auto sw = mp.swapped();
    const auto geo = geometry(32.0);
    for (auto p : {Polarization::E, Polarization::H}) {
        const cplx lim = pairing_limit(mp, geo.rho, p);
        EXPECT_LT(std::abs(lim + pairing_limit(sw, geo.rho, p)), 1e-12 * std::abs(lim));
        const cplx sum = pairing(mp, geo, p).value + pairing(sw, geo, p).value;
        EXPECT_LT(std::abs(sum), 1e-2 * std::abs(lim));
    }
}

TEST(Convergence, ErrorShrinksWithS)
{
    const auto& mp = distinct();
    for (auto p : {Polarization::E, Polarization::H}) {
        const auto rows = convergence_experiment(mp, rho_ref(), p, {8.0, 16.0, 32.0}, 0.7);
        ASSERT_EQ(rows.size(), 3u);
        for (const auto& r : rows) {
            ASSERT_TRUE(r.ok) << r.error;
            EXPECT_EQ(r.target, pairing_limit(mp, rho_ref(), p));
            EXPECT_DOUBLE_EQ(r.abs_error, std::abs(r.pairing - r.target));
        }
        EXPECT_LT(rows[2].abs_error, rows[0].abs_error) << to_string(p);
        EXPECT_LT(rows[2].abs_error, 0.05 * std::abs(rows[2].target));
    }
    EXPECT_THROW(convergence_experiment(mp, rho_ref(), Polarization::E, {16.0, 8.0}, 0.7), std::invalid_argument);
}

TEST(Convergence, IdenticalMediaStayAtFloor)
{
    const auto rows = convergence_experiment(identical(), rho_ref(), Polarization::H, {8.0, 32.0}, 0.3);
    for (const auto& r : rows) {
        ASSERT_TRUE(r.ok);
        EXPECT_LT(r.abs_error, 1e-9);
    }
}

TEST(Recovery, IdentityWithRelationsConvergesUnderRefinement)
{
    // The coupled system is (2g₁g₂/G)·(a-relation) and (2m₁m₂/M)·(b-relation)
    // in the continuum; on the grid the gap is discretization error. The same
    // refinement also bounds the change of the pairing by the change of its
    // target.
    auto measure = [](int n) {
        const Grid g(n, fixtures::grid32().L());
        const auto mp = make_medium_pair(fixtures::derived(fixtures::two_bump(), g),
                                         fixtures::derived(fixtures::other_bump(), g));
        const auto c = ucp_coefficients(mp);
        const auto rr = recovery_residual(mp, c);
        const auto ea = relation_a(mp), eb = relation_b(mp);
        double e1 = 0.0, e2 = 0.0;
        for (std::size_t i = 0; i < g.size(); ++i) {
            const cplx g1 = mp.dm1.gamma_sqrt(0, i), g2 = mp.dm2.gamma_sqrt(0, i);
            const cplx m1 = mp.dm1.mu_sqrt(0, i), m2 = mp.dm2.mu_sqrt(0, i);
            e1 = std::max(e1, std::abs(rr.first(0, i) - 2.0 * g1 * g2 / (g1 + g2) * ea(0, i)));
            e2 = std::max(e2, std::abs(rr.second(0, i) - 2.0 * m1 * m2 / (m1 + m2) * eb(0, i)));
        }
        const auto geo = geometry(8.0, g);
        struct Out {
            double e1, e2;
            cplx pe, ph, ta, tb;
        };
        return Out{e1, e2, pairing(mp, geo, Polarization::E).value, pairing(mp, geo, Polarization::H).value,
                   target_a(mp, geo.rho), target_b(mp, geo.rho)};
    };
    const auto coarse = measure(32);
    const auto fine = measure(64);
    EXPECT_LT(fine.e1, coarse.e1 / 50.0);
    EXPECT_LT(fine.e2, coarse.e2 / 50.0);
    EXPECT_LT(fine.e1, 1e-4);
    EXPECT_LT(fine.e2, 1e-4);
    EXPECT_LT(std::abs(fine.pe - coarse.pe), 10.0 * std::abs(fine.ta - coarse.ta));
    EXPECT_LT(std::abs(fine.ph - coarse.ph), 10.0 * std::abs(fine.tb - coarse.tb));
}

TEST(Recovery, ResidualVanishesForIdenticalMedia)
{
    const auto& mp = identical();
    const auto rr = recovery_residual(mp, ucp_coefficients(mp));
    EXPECT_EQ(rr.first.max_abs(), 0.0);
    EXPECT_EQ(rr.second.max_abs(), 0.0);
}

TEST(Ucp, CoefficientsLiveInTheBox)
{
    const auto c = ucp_coefficients(distinct());
    const Grid& g = c.V.grid();
    for (const ScalarField* f : {&c.V, &c.W, &c.a, &c.b, &c.c, &c.d}) {
        for (std::size_t i = 0; i < g.size(); ++i) {
            if (!in_central_box(g.point(i), g.L())) {
                ASSERT_EQ((*f)(0, i), cplx{});
            }
        }
    }
    for (std::size_t i = 0; i < g.size(); ++i) {
        if (in_central_box(g.point(i), g.L())) {
            ASSERT_GT(c.b(0, i).real(), 0.0);
            ASSERT_GT(c.d(0, i).real(), 0.0);
        }
    }

    auto bad = c;
    bad.a(0, 0) = 1.0;
    const auto [e1, e2] = frame({1.0, 2.0, 3.0}, 0.3);
    EXPECT_THROW(ucp_contraction_check(bad, null_covector(8.0, e1, e2), 1), std::invalid_argument);
    ComplexCovector off;  // ⟨ζ, ζ⟩ = 1
    off[0] = 1.0;
    EXPECT_THROW(ucp_contraction_check(c, off, 1), std::invalid_argument);
}

TEST(Ucp, ZeroCoefficientsGiveZeroNorm)
{
    const Grid& g = fixtures::grid32();
    UcpCoefficients c{ScalarField(g), ScalarField(g), ScalarField(g), ScalarField(g), ScalarField(g), ScalarField(g)};
    const auto [e1, e2] = frame({1.0, 2.0, 3.0}, 0.3);
    const auto rep = ucp_contraction_check(c, null_covector(8.0, e1, e2), 1);
    EXPECT_EQ(rep.contraction, 0.0);
    EXPECT_TRUE(rep.certified);
    EXPECT_EQ(rep.worst_final, 0.0);
    EXPECT_EQ(rep.max_iterations, 1);
}

TEST(Ucp, ContractionDecreasesAndIterationCollapses)
{
    const auto c = ucp_coefficients(distinct());
    const auto [e1, e2] = frame({1.0, 2.0, 3.0}, 0.3);
    std::vector<double> est;
    for (double mag : {8.0, 16.0, 32.0}) {
        const auto z = null_covector(mag, e1, e2);
        EXPECT_LT(std::abs(z.dot(z)), 1e-12 * mag * mag);
        EXPECT_NEAR(z.norm(), mag, 1e-12 * mag);
        const auto rep = ucp_contraction_check(c, z, 7);
        est.push_back(rep.contraction);
        if (rep.contraction < 1.0) {
            EXPECT_LT(rep.worst_final, 1e-8);
            EXPECT_LT(rep.max_iterations, 200);
        }
    }
    EXPECT_LT(est[1], est[0]);
    EXPECT_LT(est[2], est[1]);
    EXPECT_LT(est[2], 1.0);
}

#include "doctest.h"

#include "dysonforge/seeds.hpp"

#include <cmath>

using namespace dysonforge;
using namespace dysonforge::seeds;
using liealg::gen;
using liealg::K1;
using liealg::K2;
using liealg::K3;
using liealg::K4;

namespace {

auxode::DrivingProfile constant_profile(double a, double lambda)
{
    auxode::DrivingProfile p;
    p.name = "const";
    p.a = auxode::ScalarFunction::constant(a);
    p.lambda = auxode::ScalarFunction::constant(lambda);
    return p;
}

SeedSpec spec_of(int index, double k = 1.0, double x0 = 0.1)
{
    SeedSpec s;
    s.index = index;
    s.k = k;
    s.x0 = x0;
    return s;
}

double flow_distance(const AlgebraPath& closed, const std::function<AlgebraElement(double)>& ham,
                     const auxode::Grid& grid)
{
    const auto flow = auxode::invariant_flow(ham, closed(grid.front()), grid);
    return auxode::path_distance(closed, flow.as_path(), grid);
}

}  // namespace

TEST_CASE("closed-form f+- at a single point")
{
    const auxode::Grid g = auxode::uniform_grid(0.0, 1.0, 16);
    const auto zero = std::make_shared<const auxode::CoefficientPath>(g, std::vector<double>(16, 0.0),
                                                                       std::vector<double>(16, 0.0));
    const auto [fp, fm] = f_pm(spec_of(2), constant_profile(0.0, 0.4), zero);
    CHECK(fp->at(0.5).value == doctest::Approx(-0.2));
    CHECK(fm->at(0.5).value == doctest::Approx(0.2));

    const auto [a1, b1] = f_pm(spec_of(1), auxode::profile_b(), nullptr);
    CHECK(a1->at(0.3).value == auxode::profile_b().a_at(0.3).value);
    CHECK(b1->at(0.3).value == auxode::profile_b().a_at(0.3).value);
}

TEST_CASE("f+ - f- takes one form across the seeds")
{
    const auto grid = auxode::uniform_grid(0.0, 10.0, 201);
    SeedFactory factory(auxode::profile_b(), grid);
    for (int i = 2; i <= 6; ++i) {
        const Seed s = factory.build(spec_of(i, 0.8, 0.2));
        const double sign = i >= 5 ? 1.0 : -1.0;
        for (double t : {0.0, 2.5, 7.0}) {
            const double x = s.x->at(t).value;
            const double expected = sign * auxode::profile_b().lambda_at(t).value / (0.8 * (1.0 + x * x));
            CHECK(s.f_plus->at(t).value - s.f_minus->at(t).value == doctest::Approx(expected).epsilon(1e-12));
        }
    }
}

TEST_CASE("TDDE output of every seed is f+K1 + f-K2")
{
    const auto grid = auxode::uniform_grid(0.0, 10.0, 1001);
    for (const char* key : {"a", "b", "c"}) {
        SeedFactory factory(auxode::standard_profile(key), grid);
        for (int i = 1; i <= 6; ++i) {
            const Seed s = factory.build(spec_of(i));
            const auto r = hermitian_counterpart(s, factory.profile(), grid);
            CHECK(r.max_anti_hermitian < 1e-6);
            CHECK(r.max_off_span < 1e-6);
            CHECK(r.max_closed_form_error < 1e-6);
        }
    }
}

TEST_CASE("lower sign selector is not TDDE-consistent")
{
    const auto grid = auxode::uniform_grid(0.0, 10.0, 201);
    SeedFactory factory(auxode::profile_a(), grid);
    SeedSpec s = spec_of(4);
    s.sign = SignSelector::Lower;
    const auto r = hermitian_counterpart(factory.build(s), factory.profile(), grid);
    CHECK(r.max_anti_hermitian < 1e-6);
    CHECK(r.max_closed_form_error > 1e-2);
}

TEST_CASE("identity map returns H")
{
    const AlgebraPath H = hamiltonian(auxode::profile_b());
    const auto out = tdde_rhs(GroupElement(), H, 1.7);
    CHECK((out - H(1.7)).max_abs() == 0.0);
    CHECK_FALSE(liealg::is_hermitian(out).hermitian);
}

TEST_CASE("gamma-dot from Hermiticity: eta2 and eta3 ansatz")
{
    const auto grid = auxode::uniform_grid(0.0, 10.0, 1001);
    SeedFactory factory(auxode::profile_b(), grid);
    const AlgebraPath H = hamiltonian(factory.profile());

    const Seed s2 = factory.build(spec_of(2));
    const Seed s3 = factory.build(spec_of(3));
    double err2 = 0.0;
    double err3 = 0.0;
    for (double t : grid) {
        const auto f = s2.eta.factors();
        const std::array<AlgebraElement, 2> q{f[0].generator, f[1].generator};
        const std::array<double, 2> gam{f[0].coefficient(t).real(), f[1].coefficient(t).real()};
        const auto sol = solve_gamma_dot_by_hermiticity(q, gam, H(t));
        const double lam = factory.profile().lambda_at(t).value;
        err2 = std::max(err2, std::abs(sol.gamma_dot[0] + lam * std::cosh(gam[1])) / lam);
        err2 = std::max(err2, std::abs(sol.gamma_dot[1] - lam * std::tanh(gam[0]) * std::sinh(gam[1])) / lam);

        const auto f3 = s3.eta.factors();
        const std::array<AlgebraElement, 2> q3{f3[0].weight * f3[0].generator, f3[1].weight * f3[1].generator};
        const std::array<double, 2> g3{f3[0].scale->at(t).value, f3[1].scale->at(t).value};
        const auto sol3 = solve_gamma_dot_by_hermiticity(q3, g3, H(t));
        CHECK_FALSE(sol3.rank_deficient);
        err3 = std::max(err3, std::abs(sol3.gamma_dot[0] - f3[0].scale->at(t).rate));
        err3 = std::max(err3, std::abs(sol3.gamma_dot[1] - f3[1].scale->at(t).rate));
    }
    CHECK(err2 < 1e-6);
    CHECK(err3 < 1e-6);

    const AlgebraElement hermitian_h = 0.9 * (gen(K1) + gen(K2));
    const std::array<AlgebraElement, 2> q{gen(K3), gen(K4)};
    const std::array<double, 2> gam{0.3, -0.4};
    const auto still = solve_gamma_dot_by_hermiticity(q, gam, hermitian_h);
    CHECK(still.gamma_dot.cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("inv1 family")
{
    const auto grid = auxode::uniform_grid(0.0, 10.0, 1001);
    SeedFactory factory(auxode::profile_b(), grid);
    const Seed s2 = factory.build(spec_of(2));
    const Seed s3 = factory.build(spec_of(3));

    const InvariantConstants flat = {0.7, 1.1, 0.0, 0.3};
    const auto c = invariant_inv1(s2, flat, factory.f_difference_integral(s2));
    CHECK((c(4.0) - (0.7 * gen(K1) + 1.1 * gen(K2))).max_abs() < 1e-15);

    const auto i2 = invariant_inv1(s2, kDefaultConstants, factory.f_difference_integral(s2));
    const auto i3 = invariant_inv1(s3, kDefaultConstants, factory.f_difference_integral(s3));
    CHECK(auxode::path_distance(i2, i3, grid) < 1e-12);

    const AlgebraPath H = hamiltonian(factory.profile());
    const auto h2 = [&](double t) { return tdde_rhs(s2.eta, H, t); };
    CHECK(flow_distance(i2, h2, grid) < 1e-8);
    CHECK(auxode::lr_residual(i2, h2, grid) < 1e-8);
}

TEST_CASE("inv3 family")
{
    const auto grid = auxode::uniform_grid(0.0, 10.0, 1001);
    SeedFactory unit(constant_profile(1.0, 0.4), grid);
    const Seed s1 = unit.build(spec_of(1));
    const RhoPaths r1 = solve_rho_pair(s1, grid, 1.0, 0.0);
    CHECK((invariant_inv3(s1, r1)(3.0) - 2.0 * (gen(K1) + gen(K2))).max_abs() < 1e-12);
    const RhoPaths r2 = solve_rho_pair(s1, grid, 1.7, 0.1);
    CHECK(r2.plus->values() == r2.minus->values());

    SeedFactory factory(auxode::profile_b(), grid);
    const AlgebraPath H = hamiltonian(factory.profile());
    for (int i = 2; i <= 6; ++i) {
        const Seed s = factory.build(spec_of(i));
        const auto inv = invariant_inv3(s, solve_rho_pair(s, grid));
        const auto h = [&](double t) { return tdde_rhs(s.eta, H, t); };
        CHECK(flow_distance(inv, h, grid) < 1e-8);
        CHECK(auxode::lr_residual(inv, h, grid) < 1e-8);
    }
}

TEST_CASE("invariant of the non-Hermitian Hamiltonian")
{
    const auto grid = auxode::uniform_grid(0.0, 10.0, 1001);
    SeedFactory factory(auxode::profile_b(), grid);
    const AlgebraPath H = hamiltonian(factory.profile());

    const auto flat = invariant_IH({0.8, 0.6, 0.0, 0.2}, factory.profile(), factory.g_path());
    CHECK((flat(5.0) - (0.4 * (gen(K1) + gen(K2)) + 0.6 * gen(K3))).max_abs() < 1e-15);
    CHECK(auxode::lr_residual(flat, H.value, grid) < 1e-15);

    const auto ih = invariant_IH(kDefaultConstants, factory.profile(), factory.g_path());
    CHECK_FALSE(liealg::is_hermitian(ih(1.0)).hermitian);
    CHECK(flow_distance(ih, H.value, grid) < 1e-8);

    for (int i = 2; i <= 6; ++i) {
        const Seed s = factory.build(spec_of(i));
        const auto ih_h = liealg::conjugate_path(s.eta, ih);
        const auto h = [&](double t) { return tdde_rhs(s.eta, H, t); };
        CHECK(auxode::lr_residual(ih_h, h, grid) < 1e-6);
    }
}

TEST_CASE("seed reports pass on the shipped profiles")
{
    const auto grid = auxode::uniform_grid(0.0, 10.0, 1001);
    SeedFactory factory(auxode::profile_c(), grid);
    for (int i = 1; i <= 6; ++i) {
        CHECK(seed_report(factory, spec_of(i), kDefaultConstants, 1e-6).passed);
    }
    CHECK_THROWS_AS(factory.build(spec_of(7)), DomainError);
    CHECK_THROWS_AS(factory.build(spec_of(3, 0.0)), DomainError);
}

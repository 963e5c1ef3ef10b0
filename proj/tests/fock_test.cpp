#include "doctest.h"
#include "support.hpp"

#include "dysonforge/expm.hpp"
#include "dysonforge/fock.hpp"
#include "dysonforge/seeds.hpp"

#include <cmath>
#include <sstream>

using namespace dysonforge;
using namespace dysonforge::fock;
using liealg::gen;
using liealg::K1;
using liealg::K2;
using liealg::K3;
using liealg::K4;
using testing_support::Draw;

namespace {

Matrix identity(const FockRep& rep) { return Matrix::Identity(rep.interior_dim(), rep.interior_dim()); }

seeds::SeedSpec spec_of(int index)
{
    seeds::SeedSpec s;
    s.index = index;
    return s;
}

}  // namespace

TEST_CASE("truncation bookkeeping")
{
    CHECK_THROWS_AS(FockRep(6, 1), DomainError);
    CHECK_THROWS_AS(FockRep(24, 7), DomainError);
    CHECK_THROWS_AS(FockRep(24, 0), DomainError);
    const FockRep rep(24, 6);
    CHECK(rep.box_dim() == 576);
    CHECK(rep.shell_limit() == 17);
    CHECK(rep.interior_dim() == 171);
    CHECK(FockRep::shell_offset(3) == 6);
    CHECK(FockRep::preserves_shells(gen(K1) + gen(K3, {0.0, 2.0})));
    CHECK_FALSE(FockRep::preserves_shells(gen(liealg::Generator::K0X)));
}

TEST_CASE("block commutators")
{
    const FockRep small(8, 2);
    const Matrix k1 = small.interior_matrix(gen(K1));
    const Matrix k2 = small.interior_matrix(gen(K2));
    CHECK((k1 * k2 - k2 * k1).cwiseAbs().maxCoeff() < 1e-13);

    const FockRep rep(24, 6);
    const Matrix k3 = rep.interior_matrix(gen(K3));
    const Matrix k4 = rep.interior_matrix(gen(K4));
    const Matrix expected = rep.interior_matrix(liealg::Complex(0.0, 0.5) * (gen(K1) - gen(K2)));
    CHECK((k3 * k4 - k4 * k3 - expected).cwiseAbs().maxCoeff() < 1e-10);
    CHECK(commutator_deviation(rep) < 1e-10);
}

TEST_CASE("realisation of group elements")
{
    const FockRep rep(16, 4);
    CHECK((rep.realize(GroupElement(), 0.0) - identity(rep)).cwiseAbs().maxCoeff() == 0.0);

    Draw draw(21);
    for (int trial = 0; trial < 10; ++trial) {
        const auto q = draw.k_span(0.6);
        const auto g = GroupElement::exp_constant(q) * GroupElement::exp_constant(draw.k_span(0.4));
        const auto x = draw.k_span();
        const Matrix r = rep.realize(g, 0.0);
        const Matrix lhs = r * rep.interior_matrix(x) * r.inverse();
        CHECK(relative_distance(lhs, rep.interior_matrix(g.conjugate(x))) < 1e-8);

        const Matrix box = linalg::expm(Matrix(rep.box_matrix(q)));
        CHECK(relative_distance(rep.realize(GroupElement::exp_constant(q), 0.0), rep.restrict(box)) < 1e-10);
    }
}

TEST_CASE("the unitary A is unitary on the block")
{
    seeds::SeedFactory factory(auxode::profile_a(), auxode::uniform_grid(0.0, 10.0, 201));
    const auto eta3 = factory.build(spec_of(3)).eta;
    const auto eta4 = factory.build(spec_of(4)).eta;
    const FockRep rep(16, 4);
    const Matrix a = rep.realize((eta4 * eta3.inverse()).simplified(), 2.0);
    CHECK((a.adjoint() * a - identity(rep)).cwiseAbs().maxCoeff() < 1e-8);
}

TEST_CASE("left log-derivative against finite differences")
{
    seeds::SeedFactory factory(auxode::profile_b(), auxode::uniform_grid(0.0, 10.0, 1001));
    const auto eta = factory.build(spec_of(2)).eta;
    const FockRep rep(12, 3);
    const double h = 1e-5;
    for (double t : {0.5, 3.0, 6.5}) {
        const Matrix d = (rep.realize(eta, t + h) - rep.realize(eta, t - h)) / (2.0 * h);
        const Matrix analytic = rep.interior_matrix(eta.left_log_derivative(t)) * rep.realize(eta, t);
        CHECK(relative_distance(d, analytic) < 1e-6);
    }
}

TEST_CASE("metric positivity")
{
    const FockRep rep(16, 4);
    const auto unit = metric_check(GroupElement(), rep, 0.0);
    CHECK(unit.min_eigenvalue == doctest::Approx(1.0));
    CHECK(unit.max_eigenvalue == doctest::Approx(1.0));

    seeds::SeedFactory factory(auxode::profile_a(), auxode::uniform_grid(0.0, 10.0, 101));
    const auto eta4 = factory.build(spec_of(4)).eta;
    for (double t : factory.grid()) {
        const auto m = metric_check(eta4, rep, t);
        CHECK(m.min_eigenvalue > 0.0);
        CHECK(m.hermiticity_deviation < 1e-10);
    }
    CHECK(std::isinf(fingerprint_distance({1.0, 2.0}, {1.0})));
}

TEST_CASE("Lewis-Riesenfeld residual and spectrum drift")
{
    const auto grid = auxode::uniform_grid(0.0, 10.0, 1001);
    seeds::SeedFactory factory(auxode::profile_a(), grid);
    const auto seed = factory.build(spec_of(2));
    const auto H = seeds::hamiltonian(factory.profile());
    const AlgebraFn h = [&](double t) { return seeds::tdde_rhs(seed.eta, H, t); };
    const auto inv = seeds::invariant_inv1(seed, seeds::kDefaultConstants, factory.f_difference_integral(seed));
    const FockRep rep(24, 6);
    const auto window = auxode::uniform_grid(0.0, 2.0, 11);
    for (double r : lr_residual(inv, h, rep, window)) {
        CHECK(r <= 1e-5);
    }
    const auto drift = invariant_spectrum_drift(inv, rep, window, 10);
    CHECK(drift.max_drift <= 1e-4);
    CHECK(drift.spectra.front().size() == 10);

    const auto still = liealg::constant_algebra_path(gen(K1) + gen(K2));
    const AlgebraFn commuting = [](double) { return 0.3 * (gen(K1) + gen(K2)); };
    for (double r : lr_residual(still, commuting, rep, window)) {
        CHECK(r == 0.0);
    }
    CHECK(invariant_spectrum_drift(still, rep, window).max_drift == 0.0);

    std::ostringstream os;
    write_spectra_csv(os, drift);
    CHECK(os.str().rfind("t,l1,l2,", 0) == 0);
}

TEST_CASE("TDSE mapping and its wrong-map control")
{
    seeds::SeedFactory factory(auxode::profile_a(), auxode::uniform_grid(0.0, 10.0, 1001));
    const auto s2 = factory.build(spec_of(2));
    const auto s3 = factory.build(spec_of(3));
    const auto H = seeds::hamiltonian(factory.profile());
    const AlgebraFn h = [&](double t) { return seeds::tdde_rhs(s2.eta, H, t); };
    const FockRep rep(16, 4);
    const auto window = auxode::uniform_grid(0.0, 2.0, 11);
    CHECK(tdse_mapping(s2.eta, H.value, h, rep, window).min_fidelity > 1.0 - 1e-5);
    CHECK(tdse_mapping(s3.eta, H.value, h, rep, window).min_fidelity < 0.99);
    CHECK(coherent_state(rep, {0.6, 0.2}, {-0.3, 0.4}).norm() == doctest::Approx(1.0));
}

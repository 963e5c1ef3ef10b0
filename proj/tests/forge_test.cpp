#include "doctest.h"

#include "dysonforge/forge.hpp"

#include <cmath>
#include <sstream>

using namespace dysonforge;
using namespace dysonforge::forge;
using liealg::gen;
using liealg::K1;
using liealg::K2;

namespace {

seeds::SeedSpec spec_of(int index)
{
    seeds::SeedSpec s;
    s.index = index;
    return s;
}

struct Fixture {
    seeds::SeedFactory factory;
    ForgePair pair;
    PairInvariants inv;
    IterationLedger ledger;

    Fixture(int eta, int eta_tilde, int samples = 401, int n_max = 5)
        : factory(auxode::profile_a(), auxode::uniform_grid(0.0, 10.0, samples)),
          pair(make_pair(factory, spec_of(eta), spec_of(eta_tilde))),
          inv(select_invariants(factory, pair)),
          ledger(iterate(pair, inv, factory.profile(), n_max))
    {
    }
};

}  // namespace

TEST_CASE("A for the shipped pairs")
{
    seeds::SeedFactory factory(auxode::profile_a(), auxode::uniform_grid(0.0, 10.0, 201));
    const ForgePair u = make_pair(factory, spec_of(3), spec_of(4));
    REQUIRE(u.a.size() == 1);
    const auto& f = u.a.factors()[0];
    const double x = u.eta.x->at(2.0).value;
    const AlgebraElement exponent = f.coefficient(2.0) * f.generator;
    CHECK((exponent - liealg::Complex(0.0, std::atan(x)) * (gen(K1) + gen(K2))).max_abs() < 1e-15);

    CHECK(make_pair(factory, spec_of(2), spec_of(3)).a.size() == 4);
    CHECK(make_pair(factory, spec_of(5), spec_of(5)).a.is_identity());

    seeds::SeedFactory other(auxode::profile_a(), auxode::uniform_grid(0.0, 5.0, 201));
    CHECK_THROWS_AS(make_pair(factory.build(spec_of(3)), other.build(spec_of(4)), factory.grid(), other.grid()),
                    DomainError);
}

TEST_CASE("unitary pair: every gate passes and both printed series are reproduced")
{
    Fixture fx(3, 4);
    CHECK(fx.ledger.entries.size() == 22);
    CHECK(fx.ledger.admitted_count() == 22);
    CHECK_FALSE(fx.ledger.any_refused());
    for (const auto& e : fx.ledger.entries) {
        CHECK(e.gate_residual < 1e-8);
        CHECK(e.h_anti_hermitian < 1e-8);
    }

    // h of the first forged map, written out term by term.
    const auto* e1 = fx.ledger.find(Kind::EtaTilde, 1);
    REQUIRE(e1 != nullptr);
    const double k = 1.0;
    double err = 0.0;
    for (std::size_t i = 0; i < fx.ledger.grid.size(); i += 20) {
        const double t = fx.ledger.grid[i];
        const double x = fx.pair.eta.x->at(t).value;
        const double lam = fx.factory.profile().lambda_at(t).value;
        const double a = fx.factory.profile().a_at(t).value;
        const double s = 1.0 + x * x;
        const double d = std::sqrt(1.0 + k * k * s);
        const double c1 = a + lam * (3.0 * d - 1.0) / (2.0 * k * s);
        const double c2 = a + lam * (3.0 * d + 1.0) / (2.0 * k * s);
        err = std::max(err, std::abs(e1->h[i][liealg::index(K1)].real() - c1));
        err = std::max(err, std::abs(e1->h[i][liealg::index(K2)].real() - c2));
    }
    CHECK(err < 1e-10);

    const auto fams = printed_families_unitary(fx.factory.profile(), 1.0, fx.pair.eta.x);
    const auto m1 = match_family(fx.ledger, fams[0]);
    const auto m2 = match_family(fx.ledger, fams[1]);
    CHECK(m1.matched);
    CHECK(m1.index_map() == "eta_tilde: m = n");
    CHECK(m2.matched);
    CHECK(m2.index_map() == "eta: m = -n");
}

TEST_CASE("n = 0 reproduces the seed Hamiltonian exactly")
{
    Fixture fx(3, 4, 101, 1);
    const auto H = seeds::hamiltonian(fx.factory.profile());
    const auto* e0 = fx.ledger.find(Kind::Eta, 0);
    REQUIRE(e0 != nullptr);
    for (std::size_t i = 0; i < fx.ledger.grid.size(); ++i) {
        const auto direct = seeds::tdde_rhs(fx.pair.eta.eta, H, fx.ledger.grid[i]);
        CHECK(direct.coeffs().real() == e0->h[i].real());
    }
}

TEST_CASE("nonunitary pair: shared invariant, both printed families, symmetry operators")
{
    Fixture fx(2, 3);
    CHECK_FALSE(fx.ledger.any_refused());
    CHECK(fixed_point_residual(fx.pair.a, fx.inv.i_h_tilde, fx.ledger.grid) < 1e-8);
    const auto fams = printed_families_nonunitary(fx.factory.profile(), 1.0, fx.pair.eta.x);
    for (const auto& f : fams) {
        const auto m = match_family(fx.ledger, f);
        CHECK(m.matched);
        CHECK(m.shift == 0);
        CHECK(m.sign == 1);
    }
    const auto sym = symmetry_ops(fx.pair, fx.inv.i_h, fx.inv.i_h_tilde);
    CHECK(sym.s.size() == 7);
    CHECK(sym.max_residual() < 1e-8);

    const auto i_H = liealg::conjugate_path(fx.pair.eta.eta.inverse(), fx.inv.i_h);
    const auto at = a_tilde_symmetry_check(fx.pair, i_H);
    CHECK(at.holds());
    CHECK(series_consistency(fx.pair, Kind::Eta, 3, fx.factory.profile(), auxode::uniform_grid(0.0, 2.0, 11)) < 1e-10);
}

TEST_CASE("unitary A has trivial symmetry operators")
{
    Fixture fx(3, 4, 101, 1);
    const auto sym = symmetry_ops(fx.pair, fx.inv.i_h, fx.inv.i_h_tilde);
    CHECK(sym.s.is_identity());
    CHECK(sym.s_tilde.is_identity());

    Fixture same(4, 4, 101, 1);
    CHECK(symmetry_ops(same.pair, same.inv.i_h, same.inv.i_h_tilde).s.is_identity());
    const auto ih = seeds::invariant_IH(seeds::kDefaultConstants, same.factory.profile(), same.factory.g_path());
    CHECK(a_tilde_symmetry_check(same.pair, ih).holds());
}

TEST_CASE("breakdown pairs are refused at the first step")
{
    for (int other : {2, 3, 4}) {
        Fixture fx(1, other, 201);
        CHECK(fx.inv.family == "inv3");
        CHECK(fx.ledger.any_refused());
        const auto* e = fx.ledger.find(Kind::Eta, 1);
        REQUIRE(e != nullptr);
        CHECK(e->refused);
        CHECK(e->gate_residual > 1e-3);
        CHECK(fx.ledger.find(Kind::Eta, 2) == nullptr);
        CHECK_FALSE(e->breakdown.empty());
    }
    Fixture fx(1, 2, 201);
    const auto ih = seeds::invariant_IH(seeds::kDefaultConstants, fx.factory.profile(), fx.factory.g_path());
    const auto at = a_tilde_symmetry_check(fx.pair, ih);
    CHECK_FALSE(at.fixed);
    CHECK_FALSE(at.same_picture);
}

TEST_CASE("combination rules")
{
    const Kind E = Kind::Eta;
    const Kind T = Kind::EtaTilde;
    const auto r = combine({T, 1}, {E, 2});
    CHECK(r.first == Indexed{E, 2});
    CHECK(r.second == Indexed{T, 1});
    const auto z = combine({E, 0}, {E, 0});
    CHECK(z.first == Indexed{E, 0});
    CHECK(z.second == Indexed{E, 0});
}

TEST_CASE("combination arithmetic holds as operators")
{
    Fixture fx(3, 4, 101, 1);
    const fock::FockRep rep(16, 4);
    const auto c = verify_combination(fx.pair, {Kind::EtaTilde, 2}, {Kind::Eta, -1}, rep, 1.0);
    CHECK(c.error_first < 1e-8);
    CHECK(c.error_second < 1e-8);
}

TEST_CASE("metric fingerprints")
{
    Fixture u(3, 4, 101, 3);
    const fock::FockRep rep(16, 4);
    attach_fingerprints(u.ledger, u.pair, rep, 1.0);
    const auto& f0 = u.ledger.find(Kind::Eta, 0)->fingerprint;
    for (int n = -3; n <= 3; ++n) {
        CHECK(fock::fingerprint_distance(f0, u.ledger.find(Kind::Eta, n)->fingerprint) < 1e-6);
    }

    Fixture nu(2, 3, 101, 2);
    const auto a = fock::metric_fingerprint(nu.pair.map(Kind::Eta, 0), rep, 1.0);
    const auto b = fock::metric_fingerprint(nu.pair.map(Kind::Eta, 2), rep, 1.0);
    CHECK(fock::fingerprint_distance(a, b) > 1e-3);
}

TEST_CASE("ledger serialisation")
{
    Fixture fx(1, 2, 101, 2);
    const auto j = ledger_to_json(fx.ledger);
    CHECK(j.at("pair") == "eta1,eta2");
    CHECK(j.at("invariant_family") == "inv3");
    CHECK(j.at("refused") == true);
    bool saw_refused = false;
    for (const auto& e : j.at("entries")) {
        if (e.at("status") == "REFUSED") {
            saw_refused = true;
            CHECK(e.contains("breakdown_anti_hermitian"));
            CHECK_FALSE(e.contains("h"));
        }
    }
    CHECK(saw_refused);

    std::ostringstream os;
    write_h_series_csv(os, fx.ledger, 0);
    std::istringstream lines(os.str());
    std::string header;
    std::getline(lines, header);
    CHECK(header.rfind("t,eta:K+x,eta:K-x", 0) == 0);
    CHECK(header.find("eta_tilde:I-") != std::string::npos);
    int rows = 0;
    for (std::string line; std::getline(lines, line);) {
        ++rows;
    }
    CHECK(rows == 101);
}

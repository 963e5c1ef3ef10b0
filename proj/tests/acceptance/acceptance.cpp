// Acceptance run: one PASS/FAIL line per criterion, tolerances fixed below.
// Usage: acceptance [--suite-start <file holding epoch seconds>]

#include "dysonforge/cli.hpp"
#include "dysonforge/fock.hpp"
#include "dysonforge/forge.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>

using namespace dysonforge;
using forge::Kind;
using liealg::AlgebraElement;
using Clock = std::chrono::steady_clock;

namespace {

constexpr double kAlgebraTol = 1e-14;
constexpr double kFockCommutatorTol = 1e-10;
constexpr double kAlgebraSeconds = 10.0;
constexpr double kGammaDotTol = 1e-6;
constexpr double kEpTol = 1e-6;
constexpr double kEpControl = 1e-2;
constexpr double kFamilyTol = 1e-6;
constexpr double kUnitaryGateTol = 1e-8;
constexpr double kFingerprintTol = 1e-6;
constexpr double kOperatorTol = 1e-8;
constexpr double kBreakdownGate = 1e-3;
constexpr double kFlowTol = 1e-8;
constexpr double kLrTol = 1e-6;
constexpr double kDriftTol = 1e-4;
constexpr double kInfidelityTol = 1e-5;
constexpr double kCombinationTol = 1e-8;
constexpr double kSuiteSeconds = 300.0;

constexpr int kFockN = 24;
constexpr int kFockGuard = 6;
constexpr int kSamples = 1001;

struct Outcome {
    bool pass = false;
    std::string detail;
};

double seconds_since(Clock::time_point start)
{
    return std::chrono::duration<double>(Clock::now() - start).count();
}

seeds::SeedSpec spec_of(int index)
{
    seeds::SeedSpec s;
    s.index = index;
    return s;
}

auxode::Grid full_grid() { return auxode::uniform_grid(0.0, 10.0, kSamples); }

struct Forged {
    seeds::SeedFactory factory;
    forge::ForgePair pair;
    forge::PairInvariants inv;
    forge::IterationLedger ledger;

    Forged(const auxode::DrivingProfile& profile, int eta, int eta_tilde, int n_max = 5)
        : factory(profile, full_grid()),
          pair(forge::make_pair(factory, spec_of(eta), spec_of(eta_tilde))),
          inv(forge::select_invariants(factory, pair)),
          ledger(forge::iterate(pair, inv, factory.profile(), n_max))
    {
    }
};

double flow_distance(const liealg::AlgebraPath& closed, const std::function<AlgebraElement(double)>& ham,
                     const auxode::Grid& grid)
{
    const auto flow = auxode::invariant_flow(ham, closed(grid.front()), grid);
    return auxode::path_distance(closed, flow.as_path(), grid);
}

Outcome algebra_suite()
{
    const auto start = Clock::now();
    const auto report = liealg::verify_structure_constants(liealg::derive_structure_constants(), kAlgebraTol);
    const auto frozen = liealg::verify_structure_constants(liealg::StructureConstants::standard(), kAlgebraTol);
    const fock::FockRep rep(kFockN, kFockGuard);
    const double comm = fock::commutator_deviation(rep);
    const double elapsed = seconds_since(start);
    const bool pass = report.passed() && frozen.passed() && frozen.relation_error <= kAlgebraTol &&
                      frozen.derivation_error <= kAlgebraTol && comm <= kFockCommutatorTol &&
                      elapsed < kAlgebraSeconds;
    return {pass, fmt::format("{} brackets, relation err {:.1e}, derivation err {:.1e}, jacobi {:.1e}, "
                              "Fock N={} commutators {:.1e} (<= {:.0e}), {:.2f} s (< {:.0f} s)",
                              frozen.brackets_checked, frozen.relation_error, frozen.derivation_error,
                              std::max(report.jacobi_error, frozen.jacobi_error), kFockN, comm, kFockCommutatorTol,
                              elapsed, kAlgebraSeconds)};
}

Outcome eta2_first_order()
{
    const auto grid = full_grid();
    seeds::SeedFactory factory(auxode::profile_b(), grid);
    const auto H = seeds::hamiltonian(factory.profile());
    const seeds::Seed s2 = factory.build(spec_of(2));
    const auto f = s2.eta.factors();
    double err = 0.0;
    bool deficient = false;
    for (double t : grid) {
        const std::array<AlgebraElement, 2> q{f[0].generator, f[1].generator};
        const std::array<double, 2> gam{f[0].coefficient(t).real(), f[1].coefficient(t).real()};
        const auto sol = seeds::solve_gamma_dot_by_hermiticity(q, gam, H(t));
        deficient = deficient || sol.rank_deficient;
        const double expected = -factory.profile().lambda_at(t).value * std::cosh(gam[1]);
        err = std::max(err, std::abs(sol.gamma_dot[0] - expected) / std::abs(expected));
    }
    return {err < kGammaDotTol && !deficient,
            fmt::format("profile b, t in [0,10]: max rel err of gamma1' = -lambda cosh gamma2 {:.2e} (< {:.0e})", err,
                        kGammaDotTol)};
}

Outcome ermakov_transform()
{
    const auto grid = full_grid();
    double worst = 0.0;
    double control = std::numeric_limits<double>::infinity();
    for (const char* key : {"a", "b", "c"}) {
        const auto profile = auxode::standard_profile(key);
        const auto x = auxode::constrained_x2(profile, 1.0, 0.1, grid);
        worst = std::max(worst, auxode::ep_transform_check(profile, x, 1.0));
        const auto free = auxode::solve_aux1(profile, 0.1, 0.3, grid);
        control = std::min(control, auxode::ep_transform_check(profile, free, 1.0));
    }
    return {worst < kEpTol && control > kEpControl,
            fmt::format("constrained sup residual {:.2e} (< {:.0e}), unconstrained control {:.2e} (> {:.0e})", worst,
                        kEpTol, control, kEpControl)};
}

Outcome unitary_series()
{
    Forged fx(auxode::profile_a(), 3, 4);
    double gate = 0.0;
    for (const auto& e : fx.ledger.entries) {
        gate = std::max(gate, e.gate_residual);
    }
    const auto fams = forge::printed_families_unitary(fx.factory.profile(), 1.0, fx.pair.eta.x);
    bool matched = true;
    std::string maps;
    double family_err = 0.0;
    for (const auto& fam : fams) {
        const auto m = forge::match_family(fx.ledger, fam, kFamilyTol);
        matched = matched && m.matched;
        family_err = std::max(family_err, m.error);
        maps += fmt::format(" {}<-{}", fam.name, m.index_map());
    }
    const fock::FockRep rep(kFockN, kFockGuard);
    forge::attach_fingerprints(fx.ledger, fx.pair, rep, 1.0);
    double spread = 0.0;
    for (auto kind : {Kind::Eta, Kind::EtaTilde}) {
        const auto& f0 = fx.ledger.find(kind, 0)->fingerprint;
        for (int n = -5; n <= 5; ++n) {
            const auto* e = fx.ledger.find(kind, n);
            spread = e ? std::max(spread, fock::fingerprint_distance(f0, e->fingerprint))
                       : std::numeric_limits<double>::infinity();
        }
    }
    const bool pass = !fx.ledger.any_refused() && fx.ledger.admitted_count() == 22 && matched &&
                      gate < kUnitaryGateTol && spread <= kFingerprintTol;
    return {pass, fmt::format("(eta3,eta4) k=1 profile a n=-5..5: {} admitted, families err {:.2e} (< {:.0e});{}, "
                              "gate {:.1e} (< {:.0e}), fingerprint spread {:.1e} (<= {:.0e})",
                              fx.ledger.admitted_count(), family_err, kFamilyTol, maps, gate, kUnitaryGateTol, spread,
                              kFingerprintTol)};
}

Outcome nonunitary_series()
{
    Forged fx(auxode::profile_a(), 2, 3);
    const double fixed = forge::fixed_point_residual(fx.pair.a, fx.inv.i_h_tilde, fx.ledger.grid);
    const auto fams = forge::printed_families_nonunitary(fx.factory.profile(), 1.0, fx.pair.eta.x);
    bool matched = true;
    std::string maps;
    for (const auto& fam : fams) {
        const auto m = forge::match_family(fx.ledger, fam, kFamilyTol);
        matched = matched && m.matched;
        maps += fmt::format(" {}<-{} ({:.1e})", fam.name, m.index_map(), m.error);
    }
    const auto sym = forge::symmetry_ops(fx.pair, fx.inv.i_h, fx.inv.i_h_tilde);
    const double sym_err = sym.max_residual();
    return {fixed <= kOperatorTol && matched && sym_err < kOperatorTol,
            fmt::format("(eta2,eta3): A I A^-1 = I residual {:.1e} (<= {:.0e});{}; symmetry operators {:.1e} (< {:.0e})",
                        fixed, kOperatorTol, maps, sym_err, kOperatorTol)};
}

Outcome breakdown(const std::filesystem::path& scratch)
{
    bool pass = true;
    std::string detail;
    for (int other : {2, 3, 4}) {
        Forged fx(auxode::profile_a(), 1, other, 1);
        double gate = 0.0;
        for (const auto& e : fx.ledger.entries) {
            if (e.refused) {
                gate = std::max(gate, e.gate_residual);
            }
        }
        nlohmann::json j = {{"pair", {{"eta", 1}, {"eta_tilde", other}}},
                            {"n_max", 1},
                            {"output", (scratch / fmt::format("breakdown_{}", other)).string()}};
        std::ostringstream log;
        const int code = cli::cmd_forge(cli::parse_config(j), log);
        const bool ok = fx.inv.family == "inv3" && fx.ledger.any_refused() && gate > kBreakdownGate &&
                        code == cli::kGateRefused;
        pass = pass && ok;
        detail += fmt::format(" (eta1,eta{}): gate {:.2e} (> {:.0e}), exit {};", other, gate, kBreakdownGate, code);
    }
    return {pass, detail.substr(1, detail.size() - 2)};
}

Outcome invariant_oracles()
{
    const auto grid = full_grid();
    seeds::SeedFactory factory(auxode::profile_b(), grid);
    const auto H = seeds::hamiltonian(factory.profile());
    double flow = 0.0;
    double lr = 0.0;
    const auto ih = seeds::invariant_IH(seeds::kDefaultConstants, factory.profile(), factory.g_path());
    flow = std::max(flow, flow_distance(ih, H.value, grid));
    for (int i = 2; i <= 6; ++i) {
        const seeds::Seed s = factory.build(spec_of(i));
        const auto h = [&](double t) { return seeds::tdde_rhs(s.eta, H, t); };
        const auto inv1 = seeds::invariant_inv1(s, seeds::kDefaultConstants, factory.f_difference_integral(s));
        const auto inv3 = seeds::invariant_inv3(s, seeds::solve_rho_pair(s, grid));
        flow = std::max({flow, flow_distance(inv1, h, grid), flow_distance(inv3, h, grid)});
        lr = std::max(lr, auxode::lr_residual(liealg::conjugate_path(s.eta, ih), h, grid));
    }
    return {flow <= kFlowTol && lr <= kLrTol,
            fmt::format("profile b: inv1/inv3/IH vs flow {:.1e} (<= {:.0e}), conjugate(eta_i, I_H) LR i=2..6 {:.1e} "
                        "(<= {:.0e})",
                        flow, kFlowTol, lr, kLrTol)};
}

Outcome fock_physics()
{
    const fock::FockRep rep(kFockN, kFockGuard);
    const auto window = auxode::uniform_grid(0.0, 2.0, 21);
    double drift = 0.0;
    double min_eig = std::numeric_limits<double>::infinity();
    double infidelity = 0.0;
    for (auto [eta, eta_tilde] : {std::pair{3, 4}, std::pair{2, 3}}) {
        Forged fx(auxode::profile_a(), eta, eta_tilde);
        const auto H = seeds::hamiltonian(fx.factory.profile());
        drift = std::max(drift, fock::invariant_spectrum_drift(fx.inv.i_h, rep, window, 10).max_drift);
        for (const auto& e : fx.ledger.entries) {
            if (!e.refused) {
                min_eig = std::min(min_eig, fock::metric_check(fx.pair.map(e.kind, e.n), rep, 1.0).min_eigenvalue);
            }
        }
        for (const auto* seed : {&fx.pair.eta, &fx.pair.eta_tilde}) {
            const fock::AlgebraFn h = [&](double t) { return seeds::tdde_rhs(seed->eta, H, t); };
            infidelity = std::max(infidelity, 1.0 - fock::tdse_mapping(seed->eta, H.value, h, rep, window).min_fidelity);
        }
    }
    return {drift <= kDriftTol && min_eig > 0.0 && infidelity <= kInfidelityTol,
            fmt::format("N={}, (eta3,eta4) and (eta2,eta3): drift {:.1e} (<= {:.0e}), metric min {:.1e} (> 0), "
                        "1 - fidelity on [0,2] {:.1e} (<= {:.0e})",
                        kFockN, drift, kDriftTol, min_eig, infidelity, kInfidelityTol)};
}

Outcome combination_arithmetic()
{
    Forged fx(auxode::profile_a(), 3, 4, 0);
    const fock::FockRep rep(kFockN, kFockGuard);
    std::mt19937_64 rng(20261015);
    std::uniform_int_distribution<int> index(-3, 3);
    std::bernoulli_distribution coin(0.5);
    double worst = 0.0;
    bool indices = true;
    for (int i = 0; i < 50; ++i) {
        const forge::Indexed p{coin(rng) ? Kind::Eta : Kind::EtaTilde, index(rng)};
        const forge::Indexed q{coin(rng) ? Kind::Eta : Kind::EtaTilde, index(rng)};
        const auto c = forge::verify_combination(fx.pair, p, q, rep, 1.0);
        worst = std::max({worst, c.error_first, c.error_second});
        const int ep = forge::ForgePair::a_power(p.kind, p.n);
        const int eq = forge::ForgePair::a_power(q.kind, q.n);
        indices = indices && forge::ForgePair::a_power(c.predicted.first.kind, c.predicted.first.n) == 2 * eq - ep &&
                  forge::ForgePair::a_power(c.predicted.second.kind, c.predicted.second.n) == 2 * ep - eq;
    }
    return {worst <= kCombinationTol && indices,
            fmt::format("50 draws on (eta3,eta4) at t=1, N={}: max operator error {:.1e} (<= {:.0e})", kFockN, worst,
                        kCombinationTol)};
}

Outcome suite_clock(const std::string& start_file, Clock::time_point own_start)
{
    double elapsed = seconds_since(own_start);
    std::string source = "acceptance binary only";
    if (!start_file.empty()) {
        std::ifstream in(start_file);
        long long stamp = 0;
        if (in >> stamp) {
            elapsed = static_cast<double>(std::time(nullptr) - stamp);
            source = "whole ctest suite";
        }
    }
    return {elapsed < kSuiteSeconds, fmt::format("{}: {:.0f} s (< {:.0f} s)", source, elapsed, kSuiteSeconds)};
}

}  // namespace

int main(int argc, char** argv)
{
    const auto own_start = Clock::now();
    std::string start_file;
    for (int i = 1; i + 1 < argc; ++i) {
        if (std::string(argv[i]) == "--suite-start") {
            start_file = argv[i + 1];
        }
    }
    const auto scratch = std::filesystem::temp_directory_path() /
                         fmt::format("dysonforge_acceptance_{}", std::random_device{}());

    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
        {"algebra suite", algebra_suite},
        {"eta2 first-order recovery", eta2_first_order},
        {"Ermakov-Pinney transform", ermakov_transform},
        {"unitary series", unitary_series},
        {"nonunitary series", nonunitary_series},
        {"eta1 breakdown", [&] { return breakdown(scratch); }},
        {"invariant oracles", invariant_oracles},
        {"Fock-level physics", fock_physics},
        {"combination arithmetic", combination_arithmetic},
    };

    int failures = 0;
    int number = 0;
    const auto report = [&](const std::string& name, const Outcome& o) {
        ++number;
        failures += o.pass ? 0 : 1;
        std::cout << fmt::format("{} {} {}: {}", o.pass ? "PASS" : "FAIL", number, name, o.detail) << std::endl;
    };
    for (const auto& [name, run] : criteria) {
        Outcome o;
        try {
            o = run();
        } catch (const std::exception& e) {
            o = {false, fmt::format("exception: {}", e.what())};
        }
        report(name, o);
    }
    report("suite wall-clock", suite_clock(start_file, own_start));
    std::filesystem::remove_all(scratch);
    return failures == 0 ? 0 : 1;
}

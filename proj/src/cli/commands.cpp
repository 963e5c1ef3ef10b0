#include "dysonforge/cli.hpp"

#include "dysonforge/errors.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <ostream>
#include <set>

namespace dysonforge::cli {

namespace {

using nlohmann::json;
namespace fs = std::filesystem;

double max_of(const std::vector<double>& v)
{
    double m = 0.0;
    for (double x : v) {
        m = std::isnan(x) ? x : std::max(m, x);
        if (std::isnan(m)) {
            break;
        }
    }
    return m;
}

class Checks {
public:
    void at_most(const std::string& name, double value, double tol) { add(name, value, tol, "<=", value <= tol); }
    void at_least(const std::string& name, double value, double bound)
    {
        add(name, value, bound, ">=", value >= bound);
    }
    void above(const std::string& name, double value, double bound) { add(name, value, bound, ">", value > bound); }
    void flag(const std::string& name, bool ok)
    {
        json j = {{"name", name}, {"value", ok}, {"verdict", ok ? "PASS" : "FAIL"}};
        entries_.push_back(std::move(j));
        ok_ = ok_ && ok;
    }

    bool passed() const { return ok_; }
    const json& entries() const { return entries_; }

    void print(std::ostream& log) const
    {
        for (const auto& e : entries_) {
            if (e.contains("tolerance")) {
                log << fmt::format("  {} {} = {:.3e} ({} {:.1e})\n", e["verdict"].get<std::string>(),
                                   e["name"].get<std::string>(), number(e["value"]),
                                   e["relation"].get<std::string>(), e["tolerance"].get<double>());
            } else {
                log << fmt::format("  {} {}\n", e["verdict"].get<std::string>(), e["name"].get<std::string>());
            }
        }
    }

private:
    static double number(const json& v) { return v.is_number() ? v.get<double>() : std::nan(""); }

    void add(const std::string& name, double value, double tol, const char* relation, bool ok)
    {
        json j = {{"name", name}, {"tolerance", tol}, {"relation", relation}, {"verdict", ok ? "PASS" : "FAIL"}};
        j["value"] = std::isfinite(value) ? json(value) : json(nullptr);
        entries_.push_back(std::move(j));
        ok_ = ok_ && ok;
    }

    json entries_ = json::array();
    bool ok_ = true;
};

json envelope(const RunConfig& c, const std::string& verb, const Checks& checks, json results)
{
    json cfg = config_to_json(c);
    json j;
    j["verb"] = verb;
    j["config_hash"] = config_hash(c);
    j["tolerances"] = cfg["tolerances"];
    j["config"] = std::move(cfg);
    j["profile_resolved"] = {{"name", c.profile.name}, {"a", c.profile.a.describe()}, {"lambda", c.profile.lambda.describe()}};
    j["results"] = std::move(results);
    j["checks"] = checks.entries();
    j["verdict"] = checks.passed() ? "PASS" : "FAIL";
    return j;
}

fs::path output_dir(const RunConfig& c)
{
    fs::path dir(c.output);
    fs::create_directories(dir);
    return dir;
}

void write_text(const fs::path& path, const std::function<void(std::ostream&)>& body)
{
    std::ofstream os(path);
    if (!os) {
        throw ConfigError(fmt::format("cannot write '{}'", path.string()));
    }
    body(os);
}

std::vector<seeds::SeedSpec> distinct_seeds(const RunConfig& c)
{
    std::vector<seeds::SeedSpec> out{c.eta};
    if (c.eta_tilde.index != c.eta.index) {
        out.push_back(c.eta_tilde);
    }
    return out;
}

liealg::StructureConstants faulty_table()
{
    liealg::StructureConstants t = liealg::StructureConstants::standard();
    const int a = liealg::index(liealg::K1);
    const int b = liealg::index(liealg::K3);
    const int k = liealg::index(liealg::K4);
    t.at(a, b, k) += liealg::Complex(0.0, 0.25);
    t.at(b, a, k) -= liealg::Complex(0.0, 0.25);
    return t;
}

}  // namespace

void write_json(const fs::path& path, const json& j)
{
    write_text(path, [&](std::ostream& os) { os << j.dump(2) << '\n'; });
}

int cmd_check_algebra(const RunConfig& c, std::ostream& log, bool inject_fault)
{
    const liealg::StructureConstants table = inject_fault ? faulty_table() : liealg::StructureConstants::standard();
    const liealg::AlgebraReport r = liealg::verify_structure_constants(table, c.tol.algebra);

    Checks checks;
    json results;
    results["brackets_checked"] = r.brackets_checked;
    results["antisymmetry_error"] = r.antisymmetry_error;
    results["jacobi_error"] = r.jacobi_error;
    results["derivation_error"] = r.derivation_error;
    results["relation_error"] = r.relation_error;
    results["injected_fault"] = inject_fault;
    if (r.first_failure) {
        results["first_failure"] = {{"bracket", liealg::bracket_name(r.first_failure->a, r.first_failure->b)},
                                    {"deviation", r.first_failure->deviation}};
    }
    checks.flag("structure constants match derivation and documented relations", !r.first_failure);
    checks.at_most("antisymmetry error", r.antisymmetry_error, 0.0);
    checks.at_most("jacobi error", r.jacobi_error, c.tol.algebra);

    const liealg::AlgebraPath H = seeds::hamiltonian(c.profile);
    double pt = 0.0;
    for (double t : c.grid()) {
        const auto x = H.value(t);
        pt = std::max(pt, (liealg::pt_transform(x) - x).max_abs());
    }
    results["pt_symmetry_deviation"] = pt;
    checks.at_most("PT symmetry of H", pt, c.tol.algebra);

    const fock::FockRep rep(c.fock.n, c.fock.guard);
    const double comm = fock::commutator_deviation(rep);
    results["fock"] = {{"n", rep.n()}, {"guard", rep.guard()}, {"interior_dim", rep.interior_dim()},
                       {"commutator_deviation", comm}};
    checks.at_most("Fock block commutators", comm, c.tol.fock_commutator);

    log << fmt::format("check-algebra: {} brackets\n", r.brackets_checked);
    if (r.first_failure) {
        log << fmt::format("  first failing bracket {} (deviation {:.3e})\n",
                           liealg::bracket_name(r.first_failure->a, r.first_failure->b), r.first_failure->deviation);
    }
    checks.print(log);
    write_json(output_dir(c) / "algebra.json", envelope(c, "check-algebra", checks, std::move(results)));
    return checks.passed() ? kPass : kNumericalFailure;
}

int cmd_solve_aux(const RunConfig& c, std::ostream& log)
{
    const fs::path dir = output_dir(c);
    seeds::SeedFactory factory(c.profile, c.grid());
    Checks checks;
    json results;
    const auto g = factory.g_path();
    write_text(dir / "aux_g.csv", [&](std::ostream& os) { g->write_csv(os); });

    json paths = json::array();
    std::set<std::pair<double, double>> seen;
    for (const auto& spec : distinct_seeds(c)) {
        if (spec.index == 1 || !seen.insert({spec.k, spec.x0}).second) {
            continue;
        }
        const auto x = factory.x_path(spec.k, spec.x0);
        const double aux1 = auxode::aux1_residual(c.profile, *x);
        const double first = auxode::first_order_residual(c.profile, spec.k, *x);
        const double ep = auxode::ep_transform_check(c.profile, *x, spec.k);
        const auto sinh = auxode::sinh_identity(c.profile, spec.k, *x, *g);
        const std::string tag = fmt::format("k={:g},x0={:g}", spec.k, spec.x0);
        const std::string file = fmt::format("aux_x_{}.csv", paths.size());
        write_text(dir / file, [&](std::ostream& os) { x->write_csv(os); });
        paths.push_back({{"k", spec.k},
                         {"x0", spec.x0},
                         {"file", file},
                         {"aux1_residual", aux1},
                         {"first_order_residual", first},
                         {"ep_transform_residual", ep},
                         {"sinh_identity",
                          {{"printed_kappa", sinh.kappa},
                           {"printed_residual", sinh.residual},
                           {"conserved_kappa", sinh.conserved_kappa},
                           {"conserved_residual", sinh.conserved_residual}}}});
        checks.at_most("aux1 " + tag, aux1, c.tol.residual);
        checks.at_most("first-order constraint " + tag, first, c.tol.residual);
        checks.at_most("Ermakov-Pinney transform " + tag, ep, c.tol.residual);
        checks.at_most("conserved sinh combination " + tag, sinh.conserved_residual, c.tol.residual);
    }
    results["x_paths"] = std::move(paths);

    // The residual takes ρ̈ from a stencil, so it is evaluated on a finer grid than the run's.
    const auto fine = auxode::uniform_grid(c.t0, c.t1, 4 * (c.samples - 1) + 1);
    json rho = json::array();
    for (const auto& spec : distinct_seeds(c)) {
        const auto seed = factory.build(spec);
        const auto r = seeds::solve_rho_pair(seed, fine, c.rho0, c.rhodot0);
        const double plus = auxode::rho_ep_residual(*seed.f_plus, *r.plus);
        const double minus = auxode::rho_ep_residual(*seed.f_minus, *r.minus);
        rho.push_back({{"seed", spec.index},
                       {"samples", fine.size()},
                       {"rho_plus_residual", plus},
                       {"rho_minus_residual", minus}});
        checks.at_most(fmt::format("rho+ of seed {}", spec.index), plus, c.tol.residual);
        checks.at_most(fmt::format("rho- of seed {}", spec.index), minus, c.tol.residual);
    }
    results["rho"] = std::move(rho);

    log << "solve-aux:\n";
    checks.print(log);
    write_json(dir / "aux.json", envelope(c, "solve-aux", checks, std::move(results)));
    return checks.passed() ? kPass : kNumericalFailure;
}

int cmd_build_seed(const RunConfig& c, std::ostream& log)
{
    const fs::path dir = output_dir(c);
    seeds::SeedFactory factory(c.profile, c.grid());
    bool ok = true;
    for (const auto& spec : distinct_seeds(c)) {
        const auto r = seeds::seed_report(factory, spec, c.constants, c.tol.residual);
        Checks checks;
        checks.at_most("TDDE output anti-Hermitian part", r.counterpart.max_anti_hermitian, c.tol.residual);
        checks.at_most("TDDE output outside span{K1,K2}", r.counterpart.max_off_span, c.tol.residual);
        checks.at_most("closed-form f+- error", r.counterpart.max_closed_form_error, c.tol.residual);
        checks.at_most("aux1 residual", r.aux1_residual, c.tol.residual);
        checks.at_most("first-order residual", r.first_order_residual, c.tol.residual);
        checks.at_most("f+ - f- error", r.f_difference_error, c.tol.residual);
        checks.at_most("inv1 LR residual", r.inv1_lr_residual, c.tol.residual);
        checks.at_most("inv3 LR residual", r.inv3_lr_residual, c.tol.residual);

        json table = {{"t", json::array()},
                      {"f_plus", json::array()},
                      {"f_minus", json::array()},
                      {"f_plus_closed", json::array()},
                      {"f_minus_closed", json::array()}};
        for (const auto& s : r.counterpart.samples) {
            table["t"].push_back(s.t);
            table["f_plus"].push_back(s.f_plus);
            table["f_minus"].push_back(s.f_minus);
            table["f_plus_closed"].push_back(s.f_plus_closed);
            table["f_minus_closed"].push_back(s.f_minus_closed);
        }
        json results = {{"seed", spec.index},
                        {"profile", r.profile},
                        {"max_anti_hermitian", r.counterpart.max_anti_hermitian},
                        {"max_off_span", r.counterpart.max_off_span},
                        {"max_closed_form_error", r.counterpart.max_closed_form_error},
                        {"aux1_residual", r.aux1_residual},
                        {"first_order_residual", r.first_order_residual},
                        {"f_difference_error", r.f_difference_error},
                        {"inv1_lr_residual", r.inv1_lr_residual},
                        {"inv3_lr_residual", r.inv3_lr_residual},
                        {"f", std::move(table)}};
        log << fmt::format("build-seed {}:\n", spec.index);
        checks.print(log);
        write_json(dir / fmt::format("seed_{}.json", spec.index),
                   envelope(c, "build-seed", checks, std::move(results)));
        ok = ok && checks.passed();
    }
    return ok ? kPass : kNumericalFailure;
}

namespace {

struct Prepared {
    seeds::SeedFactory factory;
    forge::ForgePair pair;
    forge::PairInvariants invariants;

    explicit Prepared(const RunConfig& c)
        : factory(c.profile, c.grid()),
          pair(forge::make_pair(factory, c.eta, c.eta_tilde, c.bindings)),
          invariants(forge::select_invariants(factory, pair, c.constants, c.rho0))
    {
    }
};

bool is_unitary(const forge::ForgePair& pair, const fock::FockRep& rep, double t)
{
    const forge::GroupElement s = (pair.a.dagger() * pair.a).simplified();
    if (s.is_identity()) {
        return true;
    }
    const fock::Matrix m = rep.realize(s, t);
    return fock::relative_distance(m, fock::Matrix::Identity(m.rows(), m.cols())) <= 1e-10;
}

bool shared_seed_constants(const forge::ForgePair& pair)
{
    return pair.eta.spec.k == pair.eta_tilde.spec.k && pair.eta.spec.x0 == pair.eta_tilde.spec.x0;
}

}  // namespace

int cmd_forge(const RunConfig& c, std::ostream& log)
{
    const fs::path dir = output_dir(c);
    Prepared p(c);
    const auto& pair = p.pair;
    const auto& inv = p.invariants;

    forge::IterationLedger ledger = forge::iterate(pair, inv, c.profile, c.n_max, c.tol.gate);
    const fock::FockRep rep(c.fock.n, c.fock.guard);
    attach_fingerprints(ledger, pair, rep, c.fock.t);

    Checks checks;
    json results;
    results["a_factors"] = pair.a.size();
    results["alignment"] = {{"c4", inv.alignment.c4},
                            {"residual", inv.alignment.residual},
                            {"degenerate", inv.alignment.degenerate},
                            {"found", inv.alignment.found}};
    results["admitted"] = ledger.admitted_count();
    double gate = 0.0;
    for (const auto& e : ledger.entries) {
        if (!e.refused) {
            gate = std::max(gate, e.gate_residual);
        }
    }
    checks.flag("no gate refused", !ledger.any_refused());

    if (!ledger.any_refused()) {
        checks.at_most("admitted gate residual", gate, c.tol.gate);
        const bool unitary = is_unitary(pair, rep, c.fock.t);
        results["a_unitary"] = unitary;

        const double fixed = forge::fixed_point_residual(pair.a, inv.i_h_tilde, c.grid());
        results["shared_invariant_fixed_point"] = fixed;
        checks.at_most("A fixes the shared invariant", fixed, c.tol.operator_);

        std::vector<forge::PrintedFamily> families;
        const int lo = std::min(pair.eta.spec.index, pair.eta_tilde.spec.index);
        const int hi = std::max(pair.eta.spec.index, pair.eta_tilde.spec.index);
        if (shared_seed_constants(pair) && lo == 3 && hi == 4) {
            families = forge::printed_families_unitary(c.profile, pair.eta.spec.k, pair.eta.x);
        } else if (shared_seed_constants(pair) && lo == 2 && hi == 3) {
            families = forge::printed_families_nonunitary(c.profile, pair.eta.spec.k, pair.eta.x);
        }
        json matches = json::array();
        for (const auto& fam : families) {
            const auto m = forge::match_family(ledger, fam, c.tol.residual);
            matches.push_back({{"family", m.family},
                               {"series", forge::kind_name(m.kind)},
                               {"index_map", m.index_map()},
                               {"error", m.error},
                               {"matched", m.matched}});
            checks.at_most(fmt::format("family {} ({})", m.family, m.index_map()), m.error, c.tol.residual);
        }
        results["family_matches"] = std::move(matches);

        const auto sym = forge::symmetry_ops(pair, inv.i_h, inv.i_h_tilde);
        results["symmetry"] = {{"s_factors", sym.s.size()},
                               {"s_tilde_factors", sym.s_tilde.size()},
                               {"residual", sym.max_residual()}};
        checks.at_most("symmetry operators fix the invariants", sym.max_residual(), c.tol.operator_);

        const auto i_H = liealg::conjugate_path(pair.eta.eta.inverse(), inv.i_h);
        const auto at = forge::a_tilde_symmetry_check(pair, i_H, c.tol.operator_);
        results["a_tilde"] = {{"fixed_point_residual", at.fixed_point_residual},
                              {"picture_residual", at.picture_residual},
                              {"holds", at.holds()},
                              {"consistent", at.consistent()}};
        checks.flag("A-tilde fixed point and shared picture agree", at.consistent());

        const auto window = c.window();
        double series = 0.0;
        for (auto kind : {forge::Kind::Eta, forge::Kind::EtaTilde}) {
            series = std::max(series, forge::series_consistency(pair, kind, c.n_max, c.profile, window));
        }
        results["series_consistency"] = series;
        checks.at_most("gauge recurrence matches direct TDDE", series, c.tol.operator_);
    } else {
        json refused = json::array();
        for (const auto& e : ledger.entries) {
            if (e.refused) {
                refused.push_back({{"kind", forge::kind_name(e.kind)}, {"n", e.n}, {"gate_residual", e.gate_residual}});
            }
        }
        results["refused"] = std::move(refused);
    }

    for (int n = -c.n_max; n <= c.n_max; ++n) {
        const auto* a = ledger.find(forge::Kind::Eta, n);
        const auto* b = ledger.find(forge::Kind::EtaTilde, n);
        if ((a && !a->refused) || (b && !b->refused)) {
            write_text(dir / fmt::format("h_series_{}.csv", n),
                       [&](std::ostream& os) { forge::write_h_series_csv(os, ledger, n); });
        }
    }

    results["ledger"] = forge::ledger_to_json(ledger);
    log << fmt::format("forge {}: {} admitted, invariant {}\n", ledger.pair, ledger.admitted_count(),
                       ledger.invariant_family);
    for (const auto& e : ledger.entries) {
        if (e.refused) {
            log << fmt::format("  REFUSED {} n = {} (gate residual {:.3e} at t = {:g})\n", forge::kind_name(e.kind),
                               e.n, e.gate_residual, e.breakdown_t);
        }
    }
    checks.print(log);
    write_json(dir / "ledger.json", envelope(c, "forge", checks, std::move(results)));
    if (ledger.any_refused()) {
        return kGateRefused;
    }
    return checks.passed() ? kPass : kNumericalFailure;
}

int cmd_verify_fock(const RunConfig& c, std::ostream& log)
{
    const fs::path dir(c.output);
    const fs::path ledger_path = dir / "ledger.json";
    if (!fs::exists(ledger_path)) {
        throw ConfigError(fmt::format("verify-fock: no ledger at '{}'; run forge first", ledger_path.string()));
    }
    json stored;
    {
        std::ifstream in(ledger_path);
        try {
            in >> stored;
        } catch (const json::exception& e) {
            throw ConfigError(fmt::format("verify-fock: unreadable ledger: {}", e.what()));
        }
    }
    if (stored.value("config_hash", std::string()) != config_hash(c)) {
        throw ConfigError("verify-fock: ledger was produced by a different configuration");
    }

    Prepared p(c);
    const auto& pair = p.pair;
    const auto& inv = p.invariants;
    const fock::FockRep rep(c.fock.n, c.fock.guard);
    const auto window = c.window();
    const liealg::AlgebraPath H = seeds::hamiltonian(c.profile);
    const fock::AlgebraFn h = [&](double t) { return seeds::tdde_rhs(pair.eta.eta, H, t); };
    const fock::AlgebraFn h_tilde = [&](double t) { return seeds::tdde_rhs(pair.eta_tilde.eta, H, t); };

    Checks checks;
    json results;
    const double comm = fock::commutator_deviation(rep);
    results["commutator_deviation"] = comm;
    checks.at_most("block commutators", comm, c.tol.fock_commutator);

    std::vector<forge::Indexed> admitted;
    for (const auto& e : stored.at("results").at("ledger").at("entries")) {
        if (e.at("status") == "ADMITTED") {
            admitted.push_back({e.at("kind") == "eta" ? forge::Kind::Eta : forge::Kind::EtaTilde, e.at("n").get<int>()});
        }
    }

    double min_eig = std::numeric_limits<double>::infinity();
    json metric = json::array();
    for (const auto& e : admitted) {
        const auto m = fock::metric_check(pair.map(e.kind, e.n), rep, c.fock.t);
        min_eig = std::min(min_eig, m.min_eigenvalue);
        metric.push_back({{"kind", forge::kind_name(e.kind)},
                          {"n", e.n},
                          {"min_eigenvalue", m.min_eigenvalue},
                          {"max_eigenvalue", std::isfinite(m.max_eigenvalue) ? json(m.max_eigenvalue) : json(nullptr)}});
    }
    results["metric"] = std::move(metric);
    if (!admitted.empty()) {
        checks.above("metric minimum eigenvalue over admitted entries", min_eig, 0.0);
    }

    const bool unitary = is_unitary(pair, rep, c.fock.t);
    results["a_unitary"] = unitary;
    double spread = 0.0;
    for (auto kind : {forge::Kind::Eta, forge::Kind::EtaTilde}) {
        const auto base = std::find(admitted.begin(), admitted.end(), forge::Indexed{kind, 0});
        if (base == admitted.end()) {
            continue;
        }
        const auto f0 = fock::metric_fingerprint(pair.map(kind, 0), rep, c.fock.t);
        for (const auto& e : admitted) {
            if (e.kind == kind && e.n != 0) {
                const double d = fock::fingerprint_distance(f0, fock::metric_fingerprint(pair.map(kind, e.n), rep, c.fock.t));
                spread = std::isfinite(d) ? std::max(spread, d) : d;
            }
        }
    }
    results["fingerprint_spread"] = std::isfinite(spread) ? json(spread) : json(nullptr);
    if (unitary) {
        checks.at_most("metric fingerprints equal across n", spread, c.tol.fingerprint);
    }

    const auto drift = fock::invariant_spectrum_drift(inv.i_h, rep, window, c.fock.lowest);
    write_text(dir / "spectra.csv", [&](std::ostream& os) { fock::write_spectra_csv(os, drift); });
    results["spectrum_drift"] = drift.max_drift;
    checks.at_most("invariant spectrum drift", drift.max_drift, c.tol.fock_drift);

    const double lr_i = max_of(fock::lr_residual(inv.i_h, h, rep, window));
    const double lr_it = max_of(fock::lr_residual(inv.i_h_tilde, h_tilde, rep, window));
    results["lr_residual"] = {{"i_h", lr_i}, {"i_h_tilde", lr_it}};
    checks.at_most("LR residual of I_h", lr_i, c.tol.fock_lr);
    checks.at_most("LR residual of I_h~", lr_it, c.tol.fock_lr);
    const auto s = (pair.a.dagger() * pair.a).simplified();
    if (!s.is_identity()) {
        const double lr_s = max_of(fock::lr_residual(s, h, rep, window));
        results["lr_residual"]["s"] = lr_s;
        checks.at_most("LR residual of S", lr_s, c.tol.fock_lr);
    }

    const auto tdse = fock::tdse_mapping(pair.eta.eta, H.value, h, rep, window);
    const auto tdse_tilde = fock::tdse_mapping(pair.eta_tilde.eta, H.value, h_tilde, rep, window);
    results["tdse"] = {{"eta_min_fidelity", tdse.min_fidelity}, {"eta_tilde_min_fidelity", tdse_tilde.min_fidelity}};
    checks.at_most("TDSE mapping infidelity (eta)", 1.0 - tdse.min_fidelity, c.tol.fidelity);
    checks.at_most("TDSE mapping infidelity (eta~)", 1.0 - tdse_tilde.min_fidelity, c.tol.fidelity);

    // Truncation study on a smaller box. The drift is covariance-limited on both boxes, so the
    // convergence verdict is carried by the inv3 spectrum against its exact ladder.
    const int small_n = c.fock.convergence_n;
    const fock::FockRep small(small_n, std::max(1, std::min(c.fock.guard, small_n / 4)));
    const double small_drift = fock::invariant_spectrum_drift(inv.i_h, small, window, c.fock.lowest).max_drift;
    const double ratio = drift.max_drift > 0.0 ? small_drift / drift.max_drift : std::numeric_limits<double>::infinity();

    std::vector<double> ladder;
    for (int m = 0; static_cast<int>(ladder.size()) < c.fock.lowest; ++m) {
        for (int j = 0; j <= m && static_cast<int>(ladder.size()) < c.fock.lowest; ++j) {
            ladder.push_back(2.0 + 2.0 * m);
        }
    }
    const auto inv3 = seeds::invariant_inv3(pair.eta, seeds::solve_rho_pair(pair.eta, c.grid(), c.rho0, c.rhodot0));
    const auto spectral_error = [&](const fock::FockRep& r) {
        const auto d = fock::invariant_spectrum_drift(inv3, r, {c.fock.t, c.fock.t}, c.fock.lowest);
        double err = 0.0;
        for (std::size_t k = 0; k < ladder.size() && k < d.spectra[0].size(); ++k) {
            err = std::max(err, std::abs(d.spectra[0][k] - ladder[k]));
        }
        return err;
    };
    const double err_small = spectral_error(small);
    const double err_big = spectral_error(rep);
    const double err_ratio = err_big > 0.0 ? err_small / err_big : std::numeric_limits<double>::infinity();
    results["convergence"] = {{"n_small", small_n},
                              {"n", c.fock.n},
                              {"drift_small", small_drift},
                              {"drift", drift.max_drift},
                              {"drift_ratio", ratio},
                              {"inv3_spectral_error_small", err_small},
                              {"inv3_spectral_error", err_big},
                              {"inv3_spectral_error_ratio", std::isfinite(err_ratio) ? json(err_ratio) : json(nullptr)}};
    checks.at_least("truncation convergence ratio", err_ratio, 2.0);

    log << fmt::format("verify-fock {} (N = {}, {} block states):\n", pair.label(), rep.n(), rep.interior_dim());
    checks.print(log);
    write_json(dir / "fock.json", envelope(c, "verify-fock", checks, std::move(results)));
    return checks.passed() ? kPass : kNumericalFailure;
}

int cmd_report(const RunConfig& c, std::ostream& log)
{
    const fs::path dir(c.output);
    std::vector<fs::path> files;
    for (const char* name : {"algebra.json", "aux.json"}) {
        files.push_back(dir / name);
    }
    for (const auto& spec : distinct_seeds(c)) {
        files.push_back(dir / fmt::format("seed_{}.json", spec.index));
    }
    files.push_back(dir / "ledger.json");
    files.push_back(dir / "fock.json");

    const std::string hash = config_hash(c);
    json sections = json::array();
    bool any = false;
    bool all_pass = true;
    bool refused = false;
    for (const auto& f : files) {
        if (!fs::exists(f)) {
            sections.push_back({{"file", f.filename().string()}, {"present", false}});
            continue;
        }
        json j;
        {
            std::ifstream in(f);
            try {
                in >> j;
            } catch (const json::exception& e) {
                throw ConfigError(fmt::format("report: unreadable '{}': {}", f.string(), e.what()));
            }
        }
        any = true;
        const bool same = j.value("config_hash", std::string()) == hash;
        const std::string verdict = j.value("verdict", std::string("FAIL"));
        json failed = json::array();
        for (const auto& chk : j.value("checks", json::array())) {
            if (chk.value("verdict", "") != "PASS") {
                failed.push_back(chk.at("name"));
            }
        }
        if (f.filename() == "ledger.json") {
            refused = j.at("results").at("ledger").value("refused", false);
        }
        all_pass = all_pass && same && verdict == "PASS";
        sections.push_back({{"file", f.filename().string()},
                            {"present", true},
                            {"verb", j.value("verb", "")},
                            {"config_hash_matches", same},
                            {"verdict", verdict},
                            {"failed_checks", std::move(failed)}});
        log << fmt::format("  {:4} {}{}\n", verdict, f.filename().string(), same ? "" : " (stale config)");
    }
    if (!any) {
        throw ConfigError(fmt::format("report: no reports under '{}'", dir.string()));
    }
    Checks checks;
    checks.flag("all present reports pass for this configuration", all_pass);
    json results = {{"sections", std::move(sections)}, {"gate_refused", refused}};
    write_json(output_dir(c) / "report.json", envelope(c, "report", checks, std::move(results)));
    if (refused) {
        return kGateRefused;
    }
    return all_pass ? kPass : kNumericalFailure;
}

}  // namespace dysonforge::cli

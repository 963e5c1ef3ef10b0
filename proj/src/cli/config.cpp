#include "dysonforge/cli.hpp"

#include "dysonforge/errors.hpp"

#include <fmt/format.h>

#include <cmath>
#include <fstream>
#include <set>

namespace dysonforge::cli {

namespace {

using nlohmann::json;

void only_keys(const json& j, const std::string& where, std::initializer_list<const char*> allowed)
{
    if (!j.is_object()) {
        throw ConfigError(fmt::format("{}: expected an object", where));
    }
    const std::set<std::string> ok(allowed.begin(), allowed.end());
    for (const auto& [key, value] : j.items()) {
        if (!ok.count(key)) {
            throw ConfigError(fmt::format("{}: unknown key '{}'", where, key));
        }
    }
}

double number(const json& j, const std::string& where, const char* key, double fallback)
{
    if (!j.contains(key)) {
        return fallback;
    }
    const json& v = j.at(key);
    if (!v.is_number()) {
        throw ConfigError(fmt::format("{}.{}: expected a number", where, key));
    }
    const double x = v.get<double>();
    if (!std::isfinite(x)) {
        throw ConfigError(fmt::format("{}.{}: not finite", where, key));
    }
    return x;
}

int integer(const json& j, const std::string& where, const char* key, int fallback)
{
    if (!j.contains(key)) {
        return fallback;
    }
    const json& v = j.at(key);
    if (!v.is_number_integer()) {
        throw ConfigError(fmt::format("{}.{}: expected an integer", where, key));
    }
    return v.get<int>();
}

std::string text(const json& j, const std::string& where, const char* key, const std::string& fallback)
{
    if (!j.contains(key)) {
        return fallback;
    }
    if (!j.at(key).is_string()) {
        throw ConfigError(fmt::format("{}.{}: expected a string", where, key));
    }
    return j.at(key).get<std::string>();
}

auxode::ScalarFunction scalar_function(const json& j, const std::string& where)
{
    if (j.is_number()) {
        return auxode::ScalarFunction::constant(j.get<double>());
    }
    only_keys(j, where, {"constant", "sinusoidal", "exponential"});
    if (j.size() != 1) {
        throw ConfigError(fmt::format("{}: give exactly one of constant, sinusoidal, exponential", where));
    }
    if (j.contains("constant")) {
        return auxode::ScalarFunction::constant(number(j, where, "constant", 0.0));
    }
    if (j.contains("sinusoidal")) {
        const json& s = j.at("sinusoidal");
        const std::string w = where + ".sinusoidal";
        only_keys(s, w, {"offset", "amplitude", "omega", "phase"});
        return auxode::ScalarFunction::sinusoidal(number(s, w, "offset", 0.0), number(s, w, "amplitude", 0.0),
                                                  number(s, w, "omega", 1.0), number(s, w, "phase", 0.0));
    }
    const json& e = j.at("exponential");
    const std::string w = where + ".exponential";
    only_keys(e, w, {"amplitude", "rate", "offset"});
    return auxode::ScalarFunction::exponential(number(e, w, "amplitude", 1.0), number(e, w, "rate", 0.0),
                                               number(e, w, "offset", 0.0));
}

auxode::DrivingProfile profile_from(const json& j)
{
    if (j.is_string()) {
        const auto key = j.get<std::string>();
        if (key != "a" && key != "b" && key != "c") {
            throw ConfigError(fmt::format("profile: unknown standard profile '{}'", key));
        }
        return auxode::standard_profile(key);
    }
    only_keys(j, "profile", {"name", "a", "lambda"});
    if (!j.contains("a") || !j.contains("lambda")) {
        throw ConfigError("profile: a custom profile needs both 'a' and 'lambda'");
    }
    auxode::DrivingProfile p;
    p.name = text(j, "profile", "name", "custom");
    p.a = scalar_function(j.at("a"), "profile.a");
    p.lambda = scalar_function(j.at("lambda"), "profile.lambda");
    return p;
}

seeds::SeedSpec seed_from(const json& j, const std::string& where, seeds::SeedSpec spec)
{
    if (j.is_number_integer()) {
        spec.index = j.get<int>();
    } else {
        only_keys(j, where, {"index", "k", "x0", "sign", "eta2", "eta1_k4"});
        spec.index = integer(j, where, "index", spec.index);
        spec.k = number(j, where, "k", spec.k);
        spec.x0 = number(j, where, "x0", spec.x0);
        const std::string sign = text(j, where, "sign", "upper");
        if (sign != "upper" && sign != "lower") {
            throw ConfigError(fmt::format("{}.sign: expected 'upper' or 'lower'", where));
        }
        spec.sign = sign == "upper" ? seeds::SignSelector::Upper : seeds::SignSelector::Lower;
        const std::string eta2 = text(j, where, "eta2", "linear");
        if (eta2 != "linear" && eta2 != "ermakov") {
            throw ConfigError(fmt::format("{}.eta2: expected 'linear' or 'ermakov'", where));
        }
        spec.eta2 = eta2 == "linear" ? seeds::Eta2Parametrization::Linear : seeds::Eta2Parametrization::Ermakov;
        spec.eta1_k4 = number(j, where, "eta1_k4", spec.eta1_k4);
    }
    if (spec.index < 1 || spec.index > 6) {
        throw ConfigError(fmt::format("{}.index: {} outside 1..6", where, spec.index));
    }
    return spec;
}

json seed_to_json(const seeds::SeedSpec& s)
{
    return {{"index", s.index},
            {"k", s.k},
            {"x0", s.x0},
            {"sign", s.sign == seeds::SignSelector::Upper ? "upper" : "lower"},
            {"eta2", s.eta2 == seeds::Eta2Parametrization::Linear ? "linear" : "ermakov"},
            {"eta1_k4", s.eta1_k4}};
}

void validate(RunConfig& c)
{
    if (c.samples < 16) {
        throw ConfigError(fmt::format("grid.samples: {} is below the minimum 16", c.samples));
    }
    if (!(c.t1 > c.t0)) {
        throw ConfigError("grid: t1 must exceed t0");
    }
    for (seeds::SeedSpec* s : {&c.eta, &c.eta_tilde}) {
        if (c.bindings.k) {
            s->k = *c.bindings.k;
        }
        if (c.bindings.x0) {
            s->x0 = *c.bindings.x0;
        }
        if (s->index >= 2 && s->k == 0.0) {
            throw ConfigError(fmt::format("seed {}: k must be nonzero", s->index));
        }
        if (s->index == 2 && s->eta2 == seeds::Eta2Parametrization::Ermakov && s->k >= 0.0) {
            throw ConfigError("seed 2: the Ermakov parametrization needs k < 0 (x > 0 on the window)");
        }
    }
    if (c.n_max < 0 || c.n_max > 20) {
        throw ConfigError(fmt::format("n_max: {} outside 0..20", c.n_max));
    }
    if (!(c.rho0 > 0.0)) {
        throw ConfigError("rho0 must be positive");
    }
    const Tolerances& t = c.tol;
    for (double v : {t.gate, t.algebra, t.residual, t.operator_, t.fock_commutator, t.fock_lr, t.fock_drift,
                     t.fingerprint, t.fidelity}) {
        if (!(v > 0.0)) {
            throw ConfigError("tolerances must be positive");
        }
    }
    const FockSettings& f = c.fock;
    if (f.n < 8) {
        throw ConfigError(fmt::format("fock.n: {} is below the minimum 8", f.n));
    }
    if (f.guard < 1 || f.guard > f.n / 4) {
        throw ConfigError(fmt::format("fock.guard: {} outside [1, {}]", f.guard, f.n / 4));
    }
    if (f.convergence_n < 8 || f.convergence_n >= f.n) {
        throw ConfigError(fmt::format("fock.convergence_n: {} must lie in [8, {})", f.convergence_n, f.n));
    }
    if (f.t < c.t0 || f.t > c.t1) {
        throw ConfigError("fock.t must lie on the grid window");
    }
    if (!(f.window_t1 > c.t0) || f.window_t1 > c.t1 || f.window_samples < 2) {
        throw ConfigError("fock window must lie inside the grid with at least two samples");
    }
    if (f.lowest < 1) {
        throw ConfigError("fock.lowest must be positive");
    }
    if (c.output.empty()) {
        throw ConfigError("output directory must not be empty");
    }
    try {
        c.profile.require_nonvanishing_lambda(c.grid());
    } catch (const DomainError& e) {
        throw ConfigError(fmt::format("profile: {}", e.what()));
    }
}

}  // namespace

auxode::Grid RunConfig::window() const { return auxode::uniform_grid(t0, fock.window_t1, fock.window_samples); }

RunConfig parse_config(const json& j)
{
    try {
        only_keys(j, "config", {"profile", "grid", "pair", "constants", "rho0", "rhodot0", "n_max", "tolerances",
                                "fock", "output"});
        RunConfig c;
        c.profile_source = j.contains("profile") ? j.at("profile") : json("a");
        c.profile = profile_from(c.profile_source);
        if (j.contains("grid")) {
            const json& g = j.at("grid");
            only_keys(g, "grid", {"t0", "t1", "samples"});
            c.t0 = number(g, "grid", "t0", c.t0);
            c.t1 = number(g, "grid", "t1", c.t1);
            c.samples = integer(g, "grid", "samples", c.samples);
        }
        c.eta.index = 3;
        c.eta_tilde.index = 4;
        if (j.contains("pair")) {
            const json& p = j.at("pair");
            only_keys(p, "pair", {"eta", "eta_tilde", "bindings"});
            if (p.contains("eta")) {
                c.eta = seed_from(p.at("eta"), "pair.eta", c.eta);
            }
            if (p.contains("eta_tilde")) {
                c.eta_tilde = seed_from(p.at("eta_tilde"), "pair.eta_tilde", c.eta_tilde);
            }
            if (p.contains("bindings")) {
                const json& b = p.at("bindings");
                only_keys(b, "pair.bindings", {"k", "x0"});
                if (b.contains("k")) {
                    c.bindings.k = number(b, "pair.bindings", "k", 0.0);
                }
                if (b.contains("x0")) {
                    c.bindings.x0 = number(b, "pair.bindings", "x0", 0.0);
                }
            }
        }
        if (j.contains("constants")) {
            const json& k = j.at("constants");
            if (!k.is_array() || k.size() != 4) {
                throw ConfigError("constants: expected [c1, c2, c3, c4]");
            }
            for (std::size_t i = 0; i < 4; ++i) {
                if (!k[i].is_number()) {
                    throw ConfigError("constants: expected numbers");
                }
                c.constants[i] = k[i].get<double>();
            }
        }
        c.rho0 = number(j, "config", "rho0", c.rho0);
        c.rhodot0 = number(j, "config", "rhodot0", c.rhodot0);
        c.n_max = integer(j, "config", "n_max", c.n_max);
        if (j.contains("tolerances")) {
            const json& t = j.at("tolerances");
            const std::string w = "tolerances";
            only_keys(t, w, {"gate", "algebra", "residual", "operator", "fock_commutator", "fock_lr", "fock_drift",
                             "fingerprint", "fidelity"});
            c.tol.gate = number(t, w, "gate", c.tol.gate);
            c.tol.algebra = number(t, w, "algebra", c.tol.algebra);
            c.tol.residual = number(t, w, "residual", c.tol.residual);
            c.tol.operator_ = number(t, w, "operator", c.tol.operator_);
            c.tol.fock_commutator = number(t, w, "fock_commutator", c.tol.fock_commutator);
            c.tol.fock_lr = number(t, w, "fock_lr", c.tol.fock_lr);
            c.tol.fock_drift = number(t, w, "fock_drift", c.tol.fock_drift);
            c.tol.fingerprint = number(t, w, "fingerprint", c.tol.fingerprint);
            c.tol.fidelity = number(t, w, "fidelity", c.tol.fidelity);
        }
        if (j.contains("fock")) {
            const json& f = j.at("fock");
            only_keys(f, "fock", {"n", "guard", "convergence_n", "t", "window_t1", "window_samples", "lowest"});
            c.fock.n = integer(f, "fock", "n", c.fock.n);
            c.fock.guard = integer(f, "fock", "guard", c.fock.guard);
            c.fock.convergence_n = integer(f, "fock", "convergence_n", c.fock.convergence_n);
            c.fock.t = number(f, "fock", "t", c.fock.t);
            c.fock.window_t1 = number(f, "fock", "window_t1", c.fock.window_t1);
            c.fock.window_samples = integer(f, "fock", "window_samples", c.fock.window_samples);
            c.fock.lowest = integer(f, "fock", "lowest", c.fock.lowest);
        }
        c.output = text(j, "config", "output", c.output);
        validate(c);
        return c;
    } catch (const json::exception& e) {
        throw ConfigError(fmt::format("config: {}", e.what()));
    }
}

RunConfig load_config(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in) {
        throw ConfigError(fmt::format("cannot open config '{}'", path.string()));
    }
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw ConfigError(fmt::format("config '{}' is not valid JSON: {}", path.string(), e.what()));
    }
    return parse_config(j);
}

json config_to_json(const RunConfig& c)
{
    json j;
    j["profile"] = c.profile_source;
    j["grid"] = {{"t0", c.t0}, {"t1", c.t1}, {"samples", c.samples}};
    json bindings = json::object();
    if (c.bindings.k) {
        bindings["k"] = *c.bindings.k;
    }
    if (c.bindings.x0) {
        bindings["x0"] = *c.bindings.x0;
    }
    j["pair"] = {{"eta", seed_to_json(c.eta)}, {"eta_tilde", seed_to_json(c.eta_tilde)}, {"bindings", bindings}};
    j["constants"] = c.constants;
    j["rho0"] = c.rho0;
    j["rhodot0"] = c.rhodot0;
    j["n_max"] = c.n_max;
    j["tolerances"] = {{"gate", c.tol.gate},
                       {"algebra", c.tol.algebra},
                       {"residual", c.tol.residual},
                       {"operator", c.tol.operator_},
                       {"fock_commutator", c.tol.fock_commutator},
                       {"fock_lr", c.tol.fock_lr},
                       {"fock_drift", c.tol.fock_drift},
                       {"fingerprint", c.tol.fingerprint},
                       {"fidelity", c.tol.fidelity}};
    j["fock"] = {{"n", c.fock.n},
                 {"guard", c.fock.guard},
                 {"convergence_n", c.fock.convergence_n},
                 {"t", c.fock.t},
                 {"window_t1", c.fock.window_t1},
                 {"window_samples", c.fock.window_samples},
                 {"lowest", c.fock.lowest}};
    j["output"] = c.output;
    return j;
}

std::string config_hash(const RunConfig& c)
{
    json j = config_to_json(c);
    j.erase("output");
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char ch : j.dump()) {
        h ^= ch;
        h *= 1099511628211ULL;
    }
    return fmt::format("{:016x}", h);
}

RunConfig apply_overrides(const RunConfig& c, const Overrides& o)
{
    RunConfig out = c;
    if (o.out) {
        out.output = *o.out;
    }
    if (o.n_max) {
        out.n_max = *o.n_max;
    }
    if (o.tol) {
        out.tol.gate = *o.tol;
    }
    if (o.fock_n) {
        out.fock.n = *o.fock_n;
        out.fock.guard = std::min(out.fock.guard, std::max(1, *o.fock_n / 4));
        if (out.fock.convergence_n >= *o.fock_n) {
            out.fock.convergence_n = std::max(8, 2 * *o.fock_n / 3);
        }
    }
    validate(out);
    return out;
}

}  // namespace dysonforge::cli

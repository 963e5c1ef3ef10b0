#pragma once

// Batch front-end: run configuration, verbs and their report files.

#include "dysonforge/forge.hpp"

#include "json.hpp"

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>

namespace dysonforge::cli {

enum ExitCode : int {
    kPass = 0,
    kGateRefused = 2,
    kNumericalFailure = 3,
    kConfigError = 4,
};

struct Tolerances {
    double gate = forge::kDefaultGateTolerance;
    double algebra = 1e-14;
    double residual = 1e-6;   ///< auxiliary ODEs, seeds, family matches
    double operator_ = 1e-8;  ///< fixed points, symmetry operators, combinations
    double fock_commutator = 1e-10;
    double fock_lr = 1e-5;
    double fock_drift = 1e-4;
    double fingerprint = 1e-6;
    double fidelity = 1e-5;  ///< allowed 1 − fidelity
};

struct FockSettings {
    int n = 24;
    int guard = 6;
    int convergence_n = 16;
    double t = 1.0;            ///< time of metric checks
    double window_t1 = 2.0;    ///< window [t0, window_t1] for drift, LR and TDSE checks
    int window_samples = 21;
    int lowest = 10;
};

struct RunConfig {
    nlohmann::json profile_source;  ///< as given: "a" | "b" | "c" | {a, lambda}
    auxode::DrivingProfile profile;
    double t0 = 0.0;
    double t1 = 10.0;
    int samples = 1001;
    seeds::SeedSpec eta;
    seeds::SeedSpec eta_tilde;
    forge::Bindings bindings;
    seeds::InvariantConstants constants = seeds::kDefaultConstants;
    double rho0 = seeds::kDefaultRho0;
    double rhodot0 = 0.0;
    int n_max = forge::kDefaultNmax;
    Tolerances tol;
    FockSettings fock;
    std::string output = "out";

    auxode::Grid grid() const { return auxode::uniform_grid(t0, t1, samples); }
    auxode::Grid window() const;
};

/// Validates against the schema; unknown keys and out-of-domain values raise ConfigError.
RunConfig parse_config(const nlohmann::json& j);
RunConfig load_config(const std::filesystem::path& path);
/// The fully resolved configuration, defaults included.
nlohmann::json config_to_json(const RunConfig& c);
/// FNV-1a 64 of the compact resolved configuration, as 16 hex digits.
std::string config_hash(const RunConfig& c);

struct Overrides {
    std::optional<std::string> out;
    std::optional<int> n_max;
    std::optional<double> tol;  ///< gate tolerance
    std::optional<int> fock_n;
};
/// Applies command-line overrides and re-validates.
RunConfig apply_overrides(const RunConfig& c, const Overrides& o);

/// Each verb writes its report under c.output and returns an ExitCode.
int cmd_check_algebra(const RunConfig& c, std::ostream& log, bool inject_fault = false);
int cmd_solve_aux(const RunConfig& c, std::ostream& log);
int cmd_build_seed(const RunConfig& c, std::ostream& log);
int cmd_forge(const RunConfig& c, std::ostream& log);
int cmd_verify_fock(const RunConfig& c, std::ostream& log);
int cmd_report(const RunConfig& c, std::ostream& log);

/// Writes JSON with two-space indentation and a trailing newline.
void write_json(const std::filesystem::path& path, const nlohmann::json& j);

}  // namespace dysonforge::cli

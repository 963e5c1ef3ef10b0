#include "dysonforge/cli.hpp"
#include "dysonforge/errors.hpp"

#include "CLI11.hpp"

#include <iostream>

using namespace dysonforge;

int main(int argc, char** argv)
{
    CLI::App app{"Dyson map forging and verification"};
    app.require_subcommand(1);

    std::string config_path;
    cli::Overrides overrides;
    bool inject_fault = false;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", config_path, "run configuration (JSON)")->check(CLI::ExistingFile);
        sub->add_option("--out", overrides.out, "output directory");
        sub->add_option("--nmax", overrides.n_max, "largest |n| of the iteration");
        sub->add_option("--tol", overrides.tol, "gate tolerance");
        sub->add_option("--fock-n", overrides.fock_n, "Fock cutoff N");
    };

    auto* algebra = app.add_subcommand("check-algebra", "structure constants, Jacobi, PT symmetry, Fock commutators");
    add_common(algebra);
    algebra->add_flag("--inject-fault", inject_fault, "corrupt one bracket (self-test)");
    auto* aux = app.add_subcommand("solve-aux", "auxiliary equations and their residuals");
    add_common(aux);
    auto* seed = app.add_subcommand("build-seed", "seed maps and their Hermitian Hamiltonians");
    add_common(seed);
    auto* forge = app.add_subcommand("forge", "gated iteration of the seed pair");
    add_common(forge);
    auto* fock = app.add_subcommand("verify-fock", "truncated Fock checks of a forged ledger");
    add_common(fock);
    auto* report = app.add_subcommand("report", "aggregate the reports of one output directory");
    add_common(report);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : cli::kConfigError;
    }

    try {
        const cli::RunConfig base = config_path.empty() ? cli::parse_config(nlohmann::json::object())
                                                        : cli::load_config(config_path);
        const cli::RunConfig c = cli::apply_overrides(base, overrides);
        if (algebra->parsed()) {
            return cli::cmd_check_algebra(c, std::cout, inject_fault);
        }
        if (aux->parsed()) {
            return cli::cmd_solve_aux(c, std::cout);
        }
        if (seed->parsed()) {
            return cli::cmd_build_seed(c, std::cout);
        }
        if (forge->parsed()) {
            return cli::cmd_forge(c, std::cout);
        }
        if (fock->parsed()) {
            return cli::cmd_verify_fock(c, std::cout);
        }
        return cli::cmd_report(c, std::cout);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return cli::kConfigError;
    } catch (const DomainError& e) {
        std::cerr << "domain error: " << e.what() << '\n';
        return cli::kNumericalFailure;
    } catch (const NumericalError& e) {
        std::cerr << "numerical failure: " << e.what() << '\n';
        return cli::kNumericalFailure;
    } catch (const std::filesystem::filesystem_error& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return cli::kConfigError;
    }
}

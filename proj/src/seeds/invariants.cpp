#include "dysonforge/seeds.hpp"

#include "dysonforge/errors.hpp"

#include <fmt/format.h>

#include <cmath>

namespace dysonforge::seeds {

namespace {

using liealg::Complex;
using liealg::Generator;
using liealg::Sample;
using liealg::gen;

constexpr Complex kI{0.0, 1.0};

struct RhoState {
    double f, fdot, rho, rhodot, rhoddot;
};

RhoState rho_state(const liealg::ScalarPath& f, const auxode::CoefficientPath& rho, double t)
{
    const Sample fs = f.at(t);
    const Sample r = rho.at(t);
    const double f2 = fs.value * fs.value;
    const double rdd = fs.rate / fs.value * r.rate - f2 * r.value + f2 / (r.value * r.value * r.value);
    return {fs.value, fs.rate, r.value, r.rate, rdd};
}

// α(K₊+K₋) + β(K₊−K₋) + δK₀ for one mode, and its time derivative.
std::pair<AlgebraElement, AlgebraElement> mode_invariant(const RhoState& s, Generator kp, Generator km, Generator k0)
{
    const double f2 = s.f * s.f;
    const double alpha = s.rho * s.rho;
    const double beta = 1.0 / alpha + s.rhodot * s.rhodot / f2;
    const double delta = -2.0 * s.rho * s.rhodot / s.f;
    const double alpha_dot = 2.0 * s.rho * s.rhodot;
    const double beta_dot = -2.0 * s.rhodot / (alpha * s.rho) + 2.0 * s.rhodot * s.rhoddot / f2 -
                            2.0 * s.rhodot * s.rhodot * s.fdot / (f2 * s.f);
    const double delta_dot = -2.0 * (s.rhodot * s.rhodot + s.rho * s.rhoddot) / s.f +
                             2.0 * s.rho * s.rhodot * s.fdot / f2;
    const AlgebraElement value = gen(kp, alpha + beta) + gen(km, alpha - beta) + gen(k0, delta);
    const AlgebraElement rate = gen(kp, alpha_dot + beta_dot) + gen(km, alpha_dot - beta_dot) + gen(k0, delta_dot);
    return {value, rate};
}

}  // namespace

AlgebraPath invariant_inv1(const Seed& seed, const InvariantConstants& c, auxode::PathPtr f_difference_integral)
{
    if (seed.spec.index < 2 || seed.spec.index > 6) {
        throw DomainError("invariant_inv1 applies to seeds 2..6");
    }
    if (!f_difference_integral) {
        throw DomainError("invariant_inv1 needs the integral of f+ - f-");
    }
    const auto F = f_difference_integral;
    auto value = [c, F](double t) {
        const double phi = c[3] - F->at(t).value;
        return gen(liealg::K1, c[0]) + gen(liealg::K2, c[1]) + gen(liealg::K3, c[2] * std::cos(phi)) -
               gen(liealg::K4, c[2] * std::sin(phi));
    };
    auto rate = [c, F](double t) {
        const Sample s = F->at(t);
        const double phi = c[3] - s.value;
        const double phidot = -s.rate;
        return gen(liealg::K3, -c[2] * std::sin(phi) * phidot) - gen(liealg::K4, c[2] * std::cos(phi) * phidot);
    };
    return {value, rate};
}

RhoPaths solve_rho_pair(const Seed& seed, const auxode::Grid& grid, double rho0, double rhodot0)
{
    RhoPaths out;
    out.plus = std::make_shared<const auxode::CoefficientPath>(auxode::solve_rho_ep(*seed.f_plus, rho0, rhodot0, grid));
    out.minus = std::make_shared<const auxode::CoefficientPath>(auxode::solve_rho_ep(*seed.f_minus, rho0, rhodot0, grid));
    return out;
}

AlgebraPath invariant_inv3(const Seed& seed, const RhoPaths& rho)
{
    if (!rho.plus || !rho.minus) {
        throw DomainError("invariant_inv3 needs both rho paths");
    }
    const auto fp = seed.f_plus;
    const auto fm = seed.f_minus;
    const auto rp = rho.plus;
    const auto rm = rho.minus;
    auto both = [fp, fm, rp, rm](double t) {
        const RhoState sp = rho_state(*fp, *rp, t);
        const RhoState sm = rho_state(*fm, *rm, t);
        if (sp.f == 0.0 || sm.f == 0.0) {
            throw DomainError(fmt::format("invariant_inv3: f vanishes at t = {:.17g}", t));
        }
        const auto x = mode_invariant(sp, Generator::KplusX, Generator::KminusX, Generator::K0X);
        const auto y = mode_invariant(sm, Generator::KplusY, Generator::KminusY, Generator::K0Y);
        return std::make_pair(x.first + y.first, x.second + y.second);
    };
    return {[both](double t) { return both(t).first; }, [both](double t) { return both(t).second; }};
}

AlgebraPath invariant_IH(const InvariantConstants& c, const auxode::DrivingProfile& profile, auxode::PathPtr g)
{
    if (!g) {
        throw DomainError("invariant_IH needs g = integral of lambda");
    }
    auto value = [c, g](double t) {
        const double psi = c[3] - g->at(t).value;
        const double ch = c[2] * std::cosh(psi);
        return gen(liealg::K1, 0.5 * c[0] + ch) + gen(liealg::K2, 0.5 * c[0] - ch) + gen(liealg::K3, c[1]) +
               gen(liealg::K4, kI * (2.0 * c[2] * std::sinh(psi)));
    };
    auto rate = [c, g, profile](double t) {
        const double psi = c[3] - g->at(t).value;
        const double psidot = -profile.lambda_at(t).value;
        const double sh = c[2] * std::sinh(psi) * psidot;
        return gen(liealg::K1, sh) - gen(liealg::K2, sh) +
               gen(liealg::K4, kI * (2.0 * c[2] * std::cosh(psi) * psidot));
    };
    return {value, rate};
}

SeedReport seed_report(SeedFactory& factory, const SeedSpec& spec, const InvariantConstants& c, double tol)
{
    SeedReport r;
    r.spec = spec;
    r.profile = factory.profile().name;
    const Seed seed = factory.build(spec);
    const auto& profile = factory.profile();
    const auto& grid = factory.grid();
    r.counterpart = hermitian_counterpart(seed, profile, grid);

    const AlgebraPath H = hamiltonian(profile);
    const auto h = [&seed, &H](double t) { return tdde_rhs(seed.eta, H, t); };

    if (seed.x) {
        r.aux1_residual = auxode::aux1_residual(profile, *seed.x);
        r.first_order_residual = auxode::first_order_residual(profile, spec.k, *seed.x);
        const double sign = (spec.index >= 5 ? 1.0 : -1.0) * (spec.sign == SignSelector::Upper ? 1.0 : -1.0);
        for (double t : grid) {
            const double x = seed.x->at(t).value;
            const double expected = sign * profile.lambda_at(t).value / (spec.k * (1.0 + x * x));
            const double diff = seed.f_plus->at(t).value - seed.f_minus->at(t).value;
            r.f_difference_error = std::max(r.f_difference_error, std::abs(diff - expected));
        }
        r.inv1_lr_residual = auxode::lr_residual(invariant_inv1(seed, c, factory.f_difference_integral(seed)), h, grid);
    } else {
        for (double t : grid) {
            r.f_difference_error =
                std::max(r.f_difference_error, std::abs(seed.f_plus->at(t).value - seed.f_minus->at(t).value));
        }
    }
    r.inv3_lr_residual = auxode::lr_residual(invariant_inv3(seed, solve_rho_pair(seed, grid)), h, grid);

    r.passed = r.counterpart.max_anti_hermitian <= tol && r.counterpart.max_off_span <= tol &&
               r.counterpart.max_closed_form_error <= tol && r.aux1_residual <= tol &&
               r.first_order_residual <= tol && r.f_difference_error <= tol && r.inv1_lr_residual <= tol &&
               r.inv3_lr_residual <= tol;
    return r;
}

}  // namespace dysonforge::seeds

#include "dysonforge/forge.hpp"

#include "dysonforge/errors.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

namespace dysonforge::forge {

namespace {

using liealg::AdMatrix;
using liealg::Complex;
using liealg::gen;

constexpr Complex kI{0.0, 1.0};

double relative_gap(const AlgebraElement& a, const AlgebraElement& b)
{
    return (a - b).max_abs() / std::max(1.0, b.max_abs());
}

const seeds::Seed& seed_of(const ForgePair& pair, Kind kind)
{
    return kind == Kind::Eta ? pair.eta : pair.eta_tilde;
}

GateResult run_gate(const GroupElement& g, const AlgebraPath& invariant, const auxode::Grid& grid, double tol)
{
    GateResult out;
    for (double t : grid) {
        const AlgebraElement x = g.conjugate(invariant.value(t), t);
        const double r = anti_hermitian_measure(x);
        out.residual_path.push_back(r);
        if (r > out.residual || out.residual_path.size() == 1) {
            out.residual = r;
            out.worst_t = t;
            out.worst_anti_hermitian = liealg::anti_hermitian_part(x);
        }
    }
    out.pass = out.residual <= tol;
    return out;
}

}  // namespace

std::string_view kind_name(Kind kind) { return kind == Kind::Eta ? "eta" : "eta_tilde"; }

GroupElement ForgePair::map(Kind kind, int n) const { return a.power(n) * seed_of(*this, kind).eta; }

std::string ForgePair::label() const
{
    return fmt::format("eta{},eta{}", eta.spec.index, eta_tilde.spec.index);
}

ForgePair make_pair(seeds::SeedFactory& factory, seeds::SeedSpec eta, seeds::SeedSpec eta_tilde,
                    const Bindings& bindings)
{
    for (seeds::SeedSpec* spec : {&eta, &eta_tilde}) {
        if (bindings.k) {
            spec->k = *bindings.k;
        }
        if (bindings.x0) {
            spec->x0 = *bindings.x0;
        }
    }
    return make_pair(factory.build(eta), factory.build(eta_tilde), factory.grid(), factory.grid());
}

ForgePair make_pair(const seeds::Seed& eta, const seeds::Seed& eta_tilde, const auxode::Grid& eta_grid,
                    const auxode::Grid& eta_tilde_grid)
{
    if (eta_grid != eta_tilde_grid) {
        throw DomainError(fmt::format("make_pair: seeds built on different grids ({} vs {} samples)", eta_grid.size(),
                                      eta_tilde_grid.size()));
    }
    ForgePair pair;
    pair.eta = eta;
    pair.eta_tilde = eta_tilde;
    pair.a = (eta_tilde.eta * eta.eta.inverse()).simplified();
    pair.a_tilde = (eta.eta.inverse() * eta_tilde.eta).simplified();
    pair.grid = eta_grid;
    return pair;
}

double anti_hermitian_measure(const AlgebraElement& x)
{
    return x.coeffs().imag().cwiseAbs().maxCoeff() / std::max(1.0, x.max_abs());
}

GateResult gate_s1(const GroupElement& a, const AlgebraPath& i_h_tilde, const auxode::Grid& grid, double tol)
{
    return run_gate(a, i_h_tilde, grid, tol);
}

GateResult gate_s2(const GroupElement& a, const AlgebraPath& i_h, const auxode::Grid& grid, double tol)
{
    return run_gate(a.inverse(), i_h, grid, tol);
}

double fixed_point_residual(const GroupElement& g, const AlgebraPath& x, const auxode::Grid& grid)
{
    double worst = 0.0;
    for (double t : grid) {
        const AlgebraElement v = x.value(t);
        worst = std::max(worst, relative_gap(g.conjugate(v, t), v));
    }
    return worst;
}

AxisAlignment align_shared_invariant(const GroupElement& a, double t, double c4_configured)
{
    const AdMatrix ad = a.adjoint(t);
    Eigen::Matrix<Complex, liealg::kDim, 2> m;
    m.col(0) = ad.col(liealg::index(liealg::K3));
    m(liealg::index(liealg::K3), 0) -= 1.0;
    m.col(1) = -ad.col(liealg::index(liealg::K4));
    m(liealg::index(liealg::K4), 1) += 1.0;

    AxisAlignment out;
    out.c4 = c4_configured;
    Eigen::JacobiSVD<decltype(m)> svd(m, Eigen::ComputeFullV);
    const auto s = svd.singularValues();
    out.residual = s(1);
    if (s(0) <= 1e-12) {
        out.degenerate = true;
        out.found = true;
        return out;
    }
    if (s(1) > 1e-8 * s(0)) {
        return out;
    }
    Eigen::Vector2cd v = svd.matrixV().col(1);
    const int big = std::abs(v(0)) >= std::abs(v(1)) ? 0 : 1;
    v *= std::conj(v(big)) / std::abs(v(big));
    double c = v(0).real();
    double sn = v(1).real();
    if (c < 0.0) {
        c = -c;
        sn = -sn;
    }
    out.c4 = std::atan2(sn, c);
    out.found = true;
    return out;
}

PairInvariants select_invariants(seeds::SeedFactory& factory, const ForgePair& pair,
                                 const seeds::InvariantConstants& c, double rho0)
{
    PairInvariants out;
    const auxode::Grid& grid = pair.grid;
    if (pair.eta.spec.index == 1 || pair.eta_tilde.spec.index == 1) {
        out.family = "inv3";
        out.eta_constants = c;
        out.eta_tilde_constants = c;
        out.i_h = seeds::invariant_inv3(pair.eta, seeds::solve_rho_pair(pair.eta, grid, rho0));
        out.i_h_tilde = seeds::invariant_inv3(pair.eta_tilde, seeds::solve_rho_pair(pair.eta_tilde, grid, rho0));
        return out;
    }
    out.family = "inv1";
    out.alignment = align_shared_invariant(pair.a, grid.front(), c[3]);
    seeds::InvariantConstants aligned = c;
    aligned[3] = out.alignment.c4;
    out.eta_constants = aligned;
    out.eta_tilde_constants = aligned;
    out.i_h = seeds::invariant_inv1(pair.eta, aligned, factory.f_difference_integral(pair.eta));
    out.i_h_tilde = seeds::invariant_inv1(pair.eta_tilde, aligned, factory.f_difference_integral(pair.eta_tilde));
    return out;
}

const LedgerEntry* IterationLedger::find(Kind kind, int n) const
{
    for (const auto& e : entries) {
        if (e.kind == kind && e.n == n) {
            return &e;
        }
    }
    return nullptr;
}

bool IterationLedger::any_refused() const
{
    return std::any_of(entries.begin(), entries.end(), [](const LedgerEntry& e) { return e.refused; });
}

int IterationLedger::admitted_count() const
{
    return static_cast<int>(std::count_if(entries.begin(), entries.end(), [](const LedgerEntry& e) { return !e.refused; }));
}

IterationLedger iterate(const ForgePair& pair, const PairInvariants& invariants, const auxode::DrivingProfile& profile,
                        int n_max, double tol_gate)
{
    if (n_max < 0) {
        throw DomainError("iterate: n_max must be non-negative");
    }
    IterationLedger ledger;
    ledger.pair = pair.label();
    ledger.invariant_family = invariants.family;
    ledger.n_max = n_max;
    ledger.tol_gate = tol_gate;
    ledger.grid = pair.grid;

    const auxode::Grid& grid = pair.grid;
    const std::size_t nt = grid.size();
    const AlgebraPath H = seeds::hamiltonian(profile);
    const GroupElement a_inv = pair.a.inverse();
    std::vector<AdMatrix> up(nt), down(nt);
    for (std::size_t i = 0; i < nt; ++i) {
        up[i] = pair.a.adjoint(grid[i]);
        down[i] = a_inv.adjoint(grid[i]);
    }

    auto admitted = [&](Kind kind, int n, double gate) {
        LedgerEntry e;
        e.kind = kind;
        e.n = n;
        e.gate_residual = gate;
        const GroupElement map = pair.map(kind, n);
        e.h.reserve(nt);
        for (double t : grid) {
            const AlgebraElement h = seeds::tdde_rhs(map, H, t);
            e.h_anti_hermitian = std::max(e.h_anti_hermitian, h.coeffs().imag().cwiseAbs().maxCoeff());
            e.h.push_back(h.coeffs());
        }
        return e;
    };

    for (Kind kind : {Kind::Eta, Kind::EtaTilde}) {
        const AlgebraPath& start = kind == Kind::Eta ? invariants.i_h : invariants.i_h_tilde;
        std::vector<LedgerEntry> series;
        series.push_back(admitted(kind, 0, 0.0));
        for (int dir : {+1, -1}) {
            std::vector<Coefficients> carried(nt);
            for (std::size_t i = 0; i < nt; ++i) {
                carried[i] = start.value(grid[i]).coeffs();
            }
            const auto& ad = dir > 0 ? up : down;
            for (int step = 1; step <= n_max; ++step) {
                const int n = dir * step;
                double residual = 0.0;
                std::size_t worst = 0;
                for (std::size_t i = 0; i < nt; ++i) {
                    carried[i] = ad[i] * carried[i];
                    const double r = anti_hermitian_measure(AlgebraElement(carried[i]));
                    if (r > residual) {
                        residual = r;
                        worst = i;
                    }
                }
                if (!(residual <= tol_gate)) {
                    LedgerEntry e;
                    e.kind = kind;
                    e.n = n;
                    e.refused = true;
                    e.gate_residual = residual;
                    e.breakdown_t = grid[worst];
                    for (const auto& c : carried) {
                        e.breakdown.push_back(liealg::anti_hermitian_part(AlgebraElement(c)).coeffs());
                    }
                    series.push_back(std::move(e));
                    break;
                }
                series.push_back(admitted(kind, n, residual));
            }
        }
        std::sort(series.begin(), series.end(), [](const LedgerEntry& x, const LedgerEntry& y) { return x.n < y.n; });
        for (auto& e : series) {
            ledger.entries.push_back(std::move(e));
        }
    }
    return ledger;
}

void attach_fingerprints(IterationLedger& ledger, const ForgePair& pair, const fock::FockRep& rep, double t)
{
    for (auto& e : ledger.entries) {
        if (!e.refused) {
            e.fingerprint = fock::metric_fingerprint(pair.map(e.kind, e.n), rep, t);
        }
    }
}

double series_consistency(const ForgePair& pair, Kind kind, int n_max, const auxode::DrivingProfile& profile,
                          const auxode::Grid& grid)
{
    const AlgebraPath H = seeds::hamiltonian(profile);
    const GroupElement a_inv = pair.a.inverse();
    const GroupElement& seed = seed_of(pair, kind).eta;
    double worst = 0.0;
    for (double t : grid) {
        const AlgebraElement h0 = seeds::tdde_rhs(seed, H, t);
        for (int dir : {+1, -1}) {
            const GroupElement& step = dir > 0 ? pair.a : a_inv;
            const AdMatrix ad = step.adjoint(t);
            const AlgebraElement shift = kI * step.left_log_derivative(t);
            AlgebraElement h = h0;
            for (int k = 1; k <= n_max; ++k) {
                h = AlgebraElement(ad * h.coeffs()) + shift;
                const AlgebraElement direct = seeds::tdde_rhs(pair.map(kind, dir * k), H, t);
                worst = std::max(worst, relative_gap(h, direct));
            }
        }
    }
    return worst;
}

double SymmetryOps::max_residual() const
{
    double worst = 0.0;
    for (double r : s_residual) {
        worst = std::max(worst, r);
    }
    for (double r : s_tilde_residual) {
        worst = std::max(worst, r);
    }
    return worst;
}

SymmetryOps symmetry_ops(const ForgePair& pair, const AlgebraPath& i_h, const AlgebraPath& i_h_tilde)
{
    SymmetryOps out;
    out.s = (pair.a.dagger() * pair.a).simplified();
    out.s_tilde = (pair.a * pair.a.dagger()).simplified();
    for (double t : pair.grid) {
        const AlgebraElement x = i_h.value(t);
        const AlgebraElement y = i_h_tilde.value(t);
        out.s_residual.push_back(relative_gap(out.s.conjugate(x, t), x));
        out.s_tilde_residual.push_back(relative_gap(out.s_tilde.conjugate(y, t), y));
    }
    return out;
}

ATildeCheck a_tilde_symmetry_check(const ForgePair& pair, const AlgebraPath& i_H, double tol)
{
    ATildeCheck out;
    out.fixed_point_residual = fixed_point_residual(pair.a_tilde, i_H, pair.grid);
    for (double t : pair.grid) {
        const AlgebraElement x = i_H.value(t);
        out.picture_residual = std::max(out.picture_residual, relative_gap(pair.eta_tilde.eta.conjugate(x, t),
                                                                           pair.eta.eta.conjugate(x, t)));
    }
    out.fixed = out.fixed_point_residual <= tol;
    out.same_picture = out.picture_residual <= tol;
    return out;
}

std::pair<Indexed, Indexed> combine(Indexed first, Indexed second)
{
    const int n = first.n;
    const int m = second.n;
    const Kind E = Kind::Eta;
    const Kind T = Kind::EtaTilde;
    if (first.kind == T && second.kind == T) {
        return {{T, 2 * m - n}, {T, 2 * n - m}};
    }
    if (first.kind == T && second.kind == E) {
        return {{E, 2 * m - n - 1}, {T, 2 * n - m + 1}};
    }
    if (first.kind == E && second.kind == T) {
        return {{T, 2 * m - n + 1}, {E, 2 * n - m - 1}};
    }
    return {{E, 2 * m - n}, {E, 2 * n - m}};
}

CombinationCheck verify_combination(const ForgePair& pair, Indexed first, Indexed second, const fock::FockRep& rep,
                                    double t)
{
    CombinationCheck out;
    out.predicted = combine(first, second);
    const GroupElement p = pair.map(first.kind, first.n);
    const GroupElement q = pair.map(second.kind, second.n);
    const fock::Matrix forged_first = rep.realize(q * p.inverse() * q, t);
    const fock::Matrix forged_second = rep.realize(p * q.inverse() * p, t);
    out.error_first =
        fock::relative_distance(forged_first, rep.realize(pair.map(out.predicted.first.kind, out.predicted.first.n), t));
    out.error_second = fock::relative_distance(
        forged_second, rep.realize(pair.map(out.predicted.second.kind, out.predicted.second.n), t));
    return out;
}

namespace {

struct PairScalars {
    double a, lambda, s, delta;
};

PairScalars scalars(const auxode::DrivingProfile& profile, double k, const auxode::PathPtr& x, double t)
{
    const double xv = x->at(t).value;
    const double s = 1.0 + xv * xv;
    return {profile.a_at(t).value, profile.lambda_at(t).value, s, std::sqrt(1.0 + k * k * s)};
}

AlgebraElement split_form(const PairScalars& v, double k, double coefficient)
{
    const double e = v.lambda / (2.0 * k * v.s);
    const double sym = v.a - coefficient * v.lambda * v.delta / (2.0 * k * v.s);
    return gen(liealg::K2, e) - gen(liealg::K1, e) + gen(liealg::K1, sym) + gen(liealg::K2, sym);
}

}  // namespace

std::vector<PrintedFamily> printed_families_unitary(const auxode::DrivingProfile& profile, double k, auxode::PathPtr x)
{
    if (!x) {
        throw DomainError("printed families need the shared x path");
    }
    auto h = [profile, k, x](int m, double t) {
        const PairScalars v = scalars(profile, k, x, t);
        const double den = 2.0 * k * v.s;
        const double shift = (m - 1) * v.lambda * v.delta / (k * v.s);
        return gen(liealg::K1, v.a + v.lambda * (3.0 * v.delta - 1.0) / den + shift) +
               gen(liealg::K2, v.a + v.lambda * (3.0 * v.delta + 1.0) / den + shift);
    };
    auto h_tilde = [profile, k, x](int m, double t) {
        return split_form(scalars(profile, k, x, t), k, 2.0 * m + 1.0);
    };
    return {{"unitary_h", h}, {"unitary_h_tilde", h_tilde}};
}

std::vector<PrintedFamily> printed_families_nonunitary(const auxode::DrivingProfile& profile, double k,
                                                       auxode::PathPtr x)
{
    if (!x) {
        throw DomainError("printed families need the shared x path");
    }
    auto first = [profile, k, x](int m, double t) { return split_form(scalars(profile, k, x, t), k, m + 1.0); };
    auto second = [profile, k, x](int m, double t) { return split_form(scalars(profile, k, x, t), k, m); };
    return {{"nonunitary_first", first}, {"nonunitary_second", second}};
}

std::string FamilyMatch::index_map() const
{
    std::string rhs = sign > 0 ? "n" : "-n";
    if (shift > 0) {
        rhs += fmt::format(" + {}", shift);
    } else if (shift < 0) {
        rhs += fmt::format(" - {}", -shift);
    }
    return fmt::format("{}: m = {}", kind_name(kind), rhs);
}

FamilyMatch match_family(const IterationLedger& ledger, const PrintedFamily& family, double tol)
{
    FamilyMatch best;
    best.family = family.name;
    best.error = std::numeric_limits<double>::infinity();
    for (Kind kind : {Kind::Eta, Kind::EtaTilde}) {
        for (int sign : {1, -1}) {
            for (int shift : {0, 1, -1}) {
                double err = 0.0;
                int used = 0;
                for (const auto& e : ledger.entries) {
                    if (e.kind != kind || e.refused) {
                        continue;
                    }
                    ++used;
                    for (std::size_t i = 0; i < ledger.grid.size(); ++i) {
                        const AlgebraElement printed = family.h(sign * e.n + shift, ledger.grid[i]);
                        err = std::max(err, relative_gap(AlgebraElement(e.h[i]), printed));
                    }
                }
                // Within tolerance the smallest index shift wins; the two series are shifts of each other.
                const bool better = err < tol ? (best.error >= tol || std::abs(shift) < std::abs(best.shift) ||
                                                 (std::abs(shift) == std::abs(best.shift) && err < best.error))
                                              : err < best.error;
                if (used >= 2 && better) {
                    best.kind = kind;
                    best.sign = sign;
                    best.shift = shift;
                    best.error = err;
                }
            }
        }
    }
    best.matched = best.error < tol;
    return best;
}

}  // namespace dysonforge::forge

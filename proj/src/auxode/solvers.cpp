#include "dysonforge/auxode.hpp"

#include "dysonforge/errors.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <tuple>
#include <cmath>

namespace dysonforge::auxode {

namespace {

using Vec1 = Eigen::Matrix<double, 1, 1>;
using Vec2 = Eigen::Vector2d;

// Sup-norm of the residual over the window divided by the sup of the largest term.
class RelativeResidual {
public:
    template <typename... Terms>
    void add(double residual, Terms... terms)
    {
        num_ = std::max(num_, std::abs(residual));
        ((den_ = std::max(den_, std::abs(terms))), ...);
    }
    double value() const { return den_ > 0.0 ? num_ / den_ : num_; }

private:
    double num_ = 0.0;
    double den_ = 0.0;
};

double lambda_ratio(const Sample& l) { return l.rate / l.value; }

CoefficientPath second_order_path(const ode::Solution<Vec2>& sol, std::string name)
{
    std::vector<double> v;
    std::vector<double> d;
    v.reserve(sol.y.size());
    d.reserve(sol.y.size());
    for (const Vec2& y : sol.y) {
        v.push_back(y[0]);
        d.push_back(y[1]);
    }
    return CoefficientPath(sol.t, std::move(v), std::move(d), std::move(name));
}

}  // namespace

ode::Options default_options() { return {}; }

double constrained_slope(double lambda, double k, double x)
{
    if (k == 0.0) {
        throw DomainError("first-order constraint needs k != 0");
    }
    return -lambda * std::sqrt(1.0 + k * k * (1.0 + x * x)) / k;
}

CoefficientPath quadrature(const std::function<double(double)>& f, const Grid& grid, std::string name,
                           const ode::Options& opt)
{
    const ode::Rhs<Vec1> rhs = [&f](double t, const Vec1&) { return Vec1(f(t)); };
    const auto sol = ode::integrate<Vec1>(rhs, Vec1(0.0), grid, opt);
    std::vector<double> v;
    std::vector<double> d;
    for (std::size_t i = 0; i < sol.t.size(); ++i) {
        v.push_back(sol.y[i][0]);
        d.push_back(sol.dy[i][0]);
    }
    return CoefficientPath(sol.t, std::move(v), std::move(d), std::move(name));
}

CoefficientPath lambda_integral(const DrivingProfile& profile, const Grid& grid)
{
    return quadrature([&profile](double t) { return profile.lambda_at(t).value; }, grid, "g");
}

CoefficientPath solve_aux1(const DrivingProfile& profile, double x0, double xdot0, const Grid& grid,
                           const ode::Options& opt)
{
    profile.require_nonvanishing_lambda(grid);
    const ode::Rhs<Vec2> rhs = [&profile](double t, const Vec2& y) {
        const Sample l = profile.lambda_at(t);
        return Vec2(y[1], lambda_ratio(l) * y[1] + l.value * l.value * y[0]);
    };
    return second_order_path(ode::integrate<Vec2>(rhs, Vec2(x0, xdot0), grid, opt), "x");
}

CoefficientPath solve_aux2(const DrivingProfile& profile, double k, double chi0, double chidot0,
                           const Grid& grid, const ode::Options& opt)
{
    if (!(chi0 > 0.0)) {
        throw DomainError("solve_aux2 needs chi0 > 0");
    }
    profile.require_nonvanishing_lambda(grid);
    const ode::Rhs<Vec2> rhs = [&profile, k](double t, const Vec2& y) {
        const Sample l = profile.lambda_at(t);
        const double l2 = l.value * l.value;
        const double c3 = y[0] * y[0] * y[0];
        return Vec2(y[1], lambda_ratio(l) * y[1] + l2 * y[0] + k * k * l2 / c3);
    };
    const ode::Guard<Vec2> guard = [](double, const Vec2& y) { return y[0] > 0.0; };
    try {
        return second_order_path(ode::integrate<Vec2>(rhs, Vec2(chi0, chidot0), grid, opt, guard), "chi");
    } catch (const NumericalError& e) {
        throw NumericalError(fmt::format("solve_aux2: chi reached the k^2 lambda^2/chi^3 singularity ({})",
                                         e.what()));
    }
}

CoefficientPath constrained_x2(const DrivingProfile& profile, double k, double x0, const Grid& grid,
                               const ode::Options& opt)
{
    if (k == 0.0) {
        throw DomainError("constrained_x2 needs k2 != 0");
    }
    profile.require_nonvanishing_lambda(grid);
    const ode::Rhs<Vec1> rhs = [&profile, k](double t, const Vec1& y) {
        return Vec1(constrained_slope(profile.lambda_at(t).value, k, y[0]));
    };
    const auto sol = ode::integrate<Vec1>(rhs, Vec1(x0), grid, opt);
    std::vector<double> v;
    std::vector<double> d;
    for (std::size_t i = 0; i < sol.t.size(); ++i) {
        v.push_back(sol.y[i][0]);
        d.push_back(sol.dy[i][0]);
    }
    return CoefficientPath(sol.t, std::move(v), std::move(d), "x2");
}

double aux1_residual(const DrivingProfile& profile, const CoefficientPath& x)
{
    const auto xdd = x.node_second_derivatives();
    RelativeResidual r;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const Sample l = profile.lambda_at(x.grid()[i]);
        const double damp = lambda_ratio(l) * x.derivs()[i];
        const double spring = l.value * l.value * x.values()[i];
        r.add(xdd[i] - damp - spring, xdd[i], damp, spring);
    }
    return r.value();
}

double aux2_residual(const DrivingProfile& profile, double k, const CoefficientPath& chi)
{
    const auto cdd = chi.node_second_derivatives();
    RelativeResidual r;
    for (std::size_t i = 0; i < chi.size(); ++i) {
        const Sample l = profile.lambda_at(chi.grid()[i]);
        const double c = chi.values()[i];
        const double l2 = l.value * l.value;
        const double damp = lambda_ratio(l) * chi.derivs()[i];
        const double spring = l2 * c;
        const double ep = k * k * l2 / (c * c * c);
        r.add(cdd[i] - damp - spring - ep, cdd[i], damp, spring, ep);
    }
    return r.value();
}

double first_order_residual(const DrivingProfile& profile, double k, const CoefficientPath& x)
{
    RelativeResidual r;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double target = constrained_slope(profile.lambda_at(x.grid()[i]).value, k, x.values()[i]);
        r.add(x.derivs()[i] - target, x.derivs()[i], target);
    }
    return r.value();
}

double ep_transform_check(const DrivingProfile& profile, const CoefficientPath& x, double k_i)
{
    if (k_i == 0.0) {
        throw DomainError("ep_transform_check needs k_i != 0");
    }
    const bool degenerate = std::all_of(x.values().begin(), x.values().end(),
                                        [](double v) { return std::abs(v) < 1e-300; });
    if (degenerate) {
        throw DomainError("ep_transform_check: x identically zero is not an admissible input");
    }
    const double k = -1.0 / k_i;
    const auto xdd = x.node_second_derivatives();
    RelativeResidual r;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const Sample l = profile.lambda_at(x.grid()[i]);
        const double xv = x.values()[i];
        const double xd = x.derivs()[i];
        const double chi = std::sqrt(1.0 + xv * xv);
        const double chi3 = chi * chi * chi;
        const double chid = xv * xd / chi;
        const double chidd = (xd * xd + xv * xdd[i]) / chi - xv * xv * xd * xd / chi3;
        const double l2 = l.value * l.value;
        const double damp = lambda_ratio(l) * chid;
        const double spring = l2 * chi;
        const double ep = k * k * l2 / chi3;
        r.add(chidd - damp - spring - ep, chidd, damp, spring, ep);
    }
    return r.value();
}

SinhIdentity sinh_identity(const DrivingProfile&, double k, const CoefficientPath& x, const CoefficientPath& g)
{
    if (x.grid() != g.grid()) {
        throw DomainError("sinh_identity: x and g must share a grid");
    }
    // Fit a constant to a sampled combination; residual relative to its largest term.
    const auto fit = [&](auto&& terms) {
        std::vector<double> values;
        double scale = 0.0;
        for (std::size_t i = 0; i < x.size(); ++i) {
            const double xv = x.values()[i];
            const double delta = std::sqrt(1.0 + k * k * (1.0 + xv * xv));
            const auto [p, q] = terms(k * xv, delta, g.values()[i]);
            values.push_back(p + q);
            scale = std::max({scale, std::abs(p), std::abs(q)});
        }
        double mean = 0.0;
        for (double v : values) {
            mean += v;
        }
        mean /= static_cast<double>(values.size());
        double worst = 0.0;
        for (double v : values) {
            worst = std::max(worst, std::abs(v - mean));
        }
        return std::pair{mean, worst / std::max(scale, 1e-300)};
    };
    SinhIdentity out;
    std::tie(out.kappa, out.residual) =
        fit([](double kx, double d, double gv) { return std::pair{kx * std::sinh(gv), -d * std::cosh(gv)}; });
    std::tie(out.conserved_kappa, out.conserved_residual) =
        fit([](double kx, double d, double gv) { return std::pair{kx * std::cosh(gv), d * std::sinh(gv)}; });
    return out;
}

CoefficientPath solve_rho_ep(const liealg::ScalarPath& f, double rho0, double rhodot0, const Grid& grid,
                             const ode::Options& opt)
{
    if (!(rho0 > 0.0)) {
        throw DomainError("solve_rho_ep needs rho0 > 0");
    }
    for (double t : grid) {
        if (f.at(t).value == 0.0 || !std::isfinite(f.at(t).value)) {
            throw DomainError(fmt::format("solve_rho_ep: f vanishes at t = {:.17g}", t));
        }
    }
    for (std::size_t i = 1; i < grid.size(); ++i) {
        if (std::signbit(f.at(grid[i]).value) != std::signbit(f.at(grid[i - 1]).value)) {
            throw DomainError(fmt::format("solve_rho_ep: f changes sign in [{:.17g}, {:.17g}]", grid[i - 1],
                                          grid[i]));
        }
    }
    const ode::Rhs<Vec2> rhs = [&f](double t, const Vec2& y) {
        const Sample s = f.at(t);
        const double f2 = s.value * s.value;
        const double r3 = y[0] * y[0] * y[0];
        return Vec2(y[1], (s.rate / s.value) * y[1] - f2 * y[0] + f2 / r3);
    };
    const ode::Guard<Vec2> guard = [](double, const Vec2& y) { return y[0] > 0.0; };
    return second_order_path(ode::integrate<Vec2>(rhs, Vec2(rho0, rhodot0), grid, opt, guard), "rho");
}

double rho_ep_residual(const liealg::ScalarPath& f, const CoefficientPath& rho)
{
    const auto rdd = rho.node_second_derivatives();
    RelativeResidual r;
    for (std::size_t i = 0; i < rho.size(); ++i) {
        const Sample s = f.at(rho.grid()[i]);
        const double p = rho.values()[i];
        const double f2 = s.value * s.value;
        const double damp = (s.rate / s.value) * rho.derivs()[i];
        const double spring = f2 * p;
        const double ep = f2 / (p * p * p);
        r.add(rdd[i] - damp + spring - ep, rdd[i], damp, spring, ep);
    }
    return r.value();
}

AlgebraSeries invariant_flow(const std::function<liealg::AlgebraElement(double)>& hamiltonian,
                             const liealg::AlgebraElement& initial, const Grid& grid, const ode::Options& opt)
{
    using State = Eigen::VectorXcd;
    const liealg::Complex minus_i(0.0, -1.0);
    const ode::Rhs<State> rhs = [&hamiltonian, minus_i](double t, const State& c) {
        const liealg::AdMatrix ad = liealg::ad_matrix(hamiltonian(t));
        return State(minus_i * (ad * c));
    };
    const State c0 = initial.coeffs();
    const auto sol = ode::integrate<State>(rhs, c0, grid, opt);
    std::vector<liealg::Coefficients> values;
    std::vector<liealg::Coefficients> rates;
    for (std::size_t i = 0; i < sol.t.size(); ++i) {
        values.emplace_back(sol.y[i]);
        rates.emplace_back(sol.dy[i]);
    }
    return AlgebraSeries(sol.t, std::move(values), std::move(rates));
}

double lr_residual(const liealg::AlgebraPath& invariant,
                   const std::function<liealg::AlgebraElement(double)>& hamiltonian, const Grid& grid)
{
    const liealg::Complex i(0.0, 1.0);
    double worst = 0.0;
    for (double t : grid) {
        const liealg::AlgebraElement x = invariant.value(t);
        const liealg::AlgebraElement res = i * invariant.rate(t) + liealg::bracket(x, hamiltonian(t));
        worst = std::max(worst, res.max_abs() / std::max(1.0, x.max_abs()));
    }
    return worst;
}

double path_distance(const liealg::AlgebraPath& a, const liealg::AlgebraPath& b, const Grid& grid)
{
    double worst = 0.0;
    for (double t : grid) {
        const liealg::AlgebraElement bv = b.value(t);
        worst = std::max(worst, (a.value(t) - bv).max_abs() / std::max(1.0, bv.max_abs()));
    }
    return worst;
}

}  // namespace dysonforge::auxode

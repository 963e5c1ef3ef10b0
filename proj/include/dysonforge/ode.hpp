#pragma once

// Adaptive Dormand–Prince 5(4) (Boost.Odeint) stepping exactly onto every requested output time.
// Between outputs callers interpolate with cubic Hermite polynomials built from the stored
// states and right-hand sides, which is the dense output used throughout.

#include "dysonforge/errors.hpp"

#include <Eigen/Dense>
#include <boost/numeric/odeint.hpp>
#include <boost/numeric/odeint/external/eigen/eigen.hpp>
#include <fmt/format.h>

#include <functional>
#include <vector>

namespace dysonforge::ode {

struct Options {
    double rtol = 1e-10;
    double atol = 1e-10;
    double initial_step = 0.0;  ///< 0 selects an automatic guess
    int max_steps = 2'000'000;  ///< between two output times
};

template <typename State>
struct Solution {
    std::vector<double> t;
    std::vector<State> y;
    std::vector<State> dy;  ///< right-hand side at each output node
};

template <typename State>
using Rhs = std::function<State(double, const State&)>;

/// Optional admissibility test at output times; returning false aborts with NumericalError.
template <typename State>
using Guard = std::function<bool(double, const State&)>;

namespace detail {

using Flat = Eigen::VectorXd;

// Complex states are integrated as interleaved real and imaginary parts.
template <typename State>
Flat flatten(const State& s)
{
    if constexpr (Eigen::NumTraits<typename State::Scalar>::IsComplex) {
        Flat f(2 * s.size());
        for (Eigen::Index i = 0; i < s.size(); ++i) {
            f[2 * i] = s[i].real();
            f[2 * i + 1] = s[i].imag();
        }
        return f;
    } else {
        return Flat(s);
    }
}

template <typename State>
State unflatten(const Flat& f, const State& like)
{
    State s = like;
    if constexpr (Eigen::NumTraits<typename State::Scalar>::IsComplex) {
        for (Eigen::Index i = 0; i < s.size(); ++i) {
            s[i] = {f[2 * i], f[2 * i + 1]};
        }
    } else {
        s = f;
    }
    return s;
}

}  // namespace detail

template <typename State>
Solution<State> integrate(const Rhs<State>& f, const State& y0, const std::vector<double>& times,
                          const Options& opt = {}, const Guard<State>& guard = {})
{
    namespace odeint = boost::numeric::odeint;
    using detail::Flat;

    if (times.empty()) {
        throw DomainError("ode::integrate: no output times");
    }
    for (std::size_t i = 1; i < times.size(); ++i) {
        if (!(times[i] > times[i - 1])) {
            throw DomainError("ode::integrate: output times must be strictly increasing");
        }
    }

    Solution<State> sol;
    const auto system = [&](const Flat& x, Flat& dxdt, double t) {
        dxdt = detail::flatten(f(t, detail::unflatten(x, y0)));
    };
    const auto observe = [&](const Flat& x, double t) {
        const State y = detail::unflatten(x, y0);
        if (!x.allFinite() || (guard && !guard(t, y))) {
            throw NumericalError(fmt::format("ode::integrate: state inadmissible at t = {:.17g}", t));
        }
        sol.t.push_back(t);
        sol.y.push_back(y);
        sol.dy.push_back(f(t, y));
    };

    Flat x = detail::flatten(y0);
    if (times.size() == 1) {
        observe(x, times.front());
        return sol;
    }
    const double span = times.back() - times.front();
    const double h0 = opt.initial_step > 0.0 ? opt.initial_step : std::min(1e-3, span / 100.0);
    using Stepper = odeint::runge_kutta_dopri5<Flat, double, Flat, double, odeint::vector_space_algebra>;
    try {
        odeint::integrate_times(odeint::make_controlled<Stepper>(opt.atol, opt.rtol), system, x, times.begin(),
                                times.end(), h0, observe, odeint::max_step_checker(opt.max_steps));
    } catch (const odeint::step_adjustment_error& e) {
        throw NumericalError(fmt::format("ode::integrate: {}", e.what()));
    } catch (const odeint::no_progress_error& e) {
        throw NumericalError(fmt::format("ode::integrate: {}", e.what()));
    }
    return sol;
}

}  // namespace dysonforge::ode

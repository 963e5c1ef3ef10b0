#include "dysonforge/auxode.hpp"

#include "dysonforge/errors.hpp"

#include <fmt/format.h>

#include <cmath>

namespace dysonforge::auxode {

ScalarFunction ScalarFunction::constant(double v)
{
    ScalarFunction f;
    f.kind = Kind::Constant;
    f.offset = v;
    return f;
}

ScalarFunction ScalarFunction::sinusoidal(double offset, double amplitude, double omega, double phase)
{
    ScalarFunction f;
    f.kind = Kind::Sinusoidal;
    f.offset = offset;
    f.amplitude = amplitude;
    f.omega = omega;
    f.phase = phase;
    return f;
}

ScalarFunction ScalarFunction::exponential(double amplitude, double rate, double offset)
{
    ScalarFunction f;
    f.kind = Kind::Exponential;
    f.offset = offset;
    f.amplitude = amplitude;
    f.rate = rate;
    return f;
}

ScalarFunction ScalarFunction::tabulated(PathPtr table)
{
    if (!table) {
        throw DomainError("tabulated function needs a path");
    }
    ScalarFunction f;
    f.kind = Kind::Tabulated;
    f.table = std::move(table);
    return f;
}

Sample ScalarFunction::at(double t) const
{
    switch (kind) {
    case Kind::Constant:
        return {offset, 0.0};
    case Kind::Sinusoidal: {
        const double arg = omega * t + phase;
        return {offset + amplitude * std::sin(arg), amplitude * omega * std::cos(arg)};
    }
    case Kind::Exponential: {
        const double e = amplitude * std::exp(rate * t);
        return {offset + e, rate * e};
    }
    case Kind::Tabulated:
        return table->at(t);
    }
    return {};
}

std::string ScalarFunction::describe() const
{
    switch (kind) {
    case Kind::Constant: return fmt::format("{:.17g}", offset);
    case Kind::Sinusoidal:
        return fmt::format("{:.17g} + {:.17g} sin({:.17g} t + {:.17g})", offset, amplitude, omega, phase);
    case Kind::Exponential:
        return fmt::format("{:.17g} + {:.17g} exp({:.17g} t)", offset, amplitude, rate);
    case Kind::Tabulated: return fmt::format("tabulated({})", table->describe());
    }
    return {};
}

void DrivingProfile::require_nonvanishing_lambda(const Grid& grid) const
{
    for (double t : grid) {
        const double l = lambda.at(t).value;
        if (!std::isfinite(l) || std::abs(l) < 1e-300) {
            throw DomainError(fmt::format("lambda vanishes at t = {:.17g} in profile '{}'", t, name));
        }
    }
    for (std::size_t i = 1; i < grid.size(); ++i) {
        if (std::signbit(lambda.at(grid[i]).value) != std::signbit(lambda.at(grid[i - 1]).value)) {
            throw DomainError(fmt::format("lambda changes sign in [{:.17g}, {:.17g}] in profile '{}'",
                                          grid[i - 1], grid[i], name));
        }
    }
}

DrivingProfile profile_a()
{
    return {"a", ScalarFunction::constant(1.0), ScalarFunction::constant(0.4)};
}

DrivingProfile profile_b()
{
    return {"b", ScalarFunction::constant(1.0), ScalarFunction::sinusoidal(0.4, 0.1, 1.0)};
}

DrivingProfile profile_c()
{
    return {"c", ScalarFunction::constant(1.0), ScalarFunction::exponential(0.5, -0.1)};
}

DrivingProfile standard_profile(const std::string& key)
{
    if (key == "a") {
        return profile_a();
    }
    if (key == "b") {
        return profile_b();
    }
    if (key == "c") {
        return profile_c();
    }
    throw DomainError(fmt::format("unknown standard profile '{}'", key));
}

}  // namespace dysonforge::auxode

#include "dysonforge/auxode.hpp"

#include "dysonforge/errors.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <ostream>

namespace dysonforge::auxode {

namespace {

struct Locator {
    std::size_t i;  // left node
    double s;       // position in [0, 1]
    double h;
    bool exact;     // t coincides with node i
};

Locator locate(const Grid& grid, double t)
{
    const double t0 = grid.front();
    const double t1 = grid.back();
    const double slack = 1e-9 * std::max(1.0, t1 - t0);
    if (!(t >= t0 - slack && t <= t1 + slack)) {
        throw DomainError(fmt::format("time {:.17g} outside path window [{:.17g}, {:.17g}]", t, t0, t1));
    }
    t = std::clamp(t, t0, t1);
    auto it = std::upper_bound(grid.begin(), grid.end(), t);
    std::size_t i = it == grid.begin() ? 0 : static_cast<std::size_t>(it - grid.begin()) - 1;
    if (grid[i] == t) {
        return {i, 0.0, 0.0, true};
    }
    if (i + 1 >= grid.size()) {
        return {grid.size() - 1, 0.0, 0.0, true};
    }
    const double h = grid[i + 1] - grid[i];
    return {i, (t - grid[i]) / h, h, false};
}

struct HermiteBasis {
    double h00, h10, h01, h11;
    double d00, d10, d01, d11;
};

HermiteBasis hermite(double s)
{
    const double s2 = s * s;
    const double s3 = s2 * s;
    return {2 * s3 - 3 * s2 + 1, s3 - 2 * s2 + s, -2 * s3 + 3 * s2, s3 - s2,
            6 * s2 - 6 * s,      3 * s2 - 4 * s + 1, -6 * s2 + 6 * s, 3 * s2 - 2 * s};
}

void require_grid(const Grid& grid, std::size_t n_values, std::size_t n_derivs)
{
    if (grid.size() < 2) {
        throw DomainError("path grid needs at least two nodes");
    }
    if (n_values != grid.size() || n_derivs != grid.size()) {
        throw DomainError("path values and derivatives must match the grid length");
    }
    for (std::size_t i = 1; i < grid.size(); ++i) {
        if (!(grid[i] > grid[i - 1])) {
            throw DomainError(fmt::format("path grid not strictly increasing at index {}", i));
        }
    }
}

}  // namespace

Grid uniform_grid(double t0, double t1, int n)
{
    if (n < 2 || !(t1 > t0)) {
        throw DomainError("uniform_grid: need n >= 2 and t1 > t0");
    }
    Grid g(static_cast<std::size_t>(n));
    const double h = (t1 - t0) / (n - 1);
    for (int i = 0; i < n; ++i) {
        g[static_cast<std::size_t>(i)] = t0 + h * i;
    }
    g.back() = t1;
    return g;
}

std::vector<double> differentiate(const Grid& grid, const std::vector<double>& samples)
{
    const std::size_t n = grid.size();
    if (samples.size() != n || n < 2) {
        throw DomainError("differentiate: sample count must match a grid of at least two nodes");
    }
    const std::size_t width = std::min<std::size_t>(5, n);
    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t half = width / 2;
        std::size_t start = i >= half ? i - half : 0;
        start = std::min(start, n - width);
        const double h = grid[std::min(start + 1, n - 1)] - grid[start];
        Eigen::MatrixXd v(width, width);
        for (std::size_t j = 0; j < width; ++j) {
            const double d = (grid[start + j] - grid[i]) / h;
            double p = 1.0;
            for (std::size_t r = 0; r < width; ++r) {
                v(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(j)) = p;
                p *= d;
            }
        }
        Eigen::VectorXd rhs = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(width));
        rhs[1] = 1.0;
        const Eigen::VectorXd w = v.fullPivLu().solve(rhs);
        double acc = 0.0;
        for (std::size_t j = 0; j < width; ++j) {
            acc += w[static_cast<Eigen::Index>(j)] * samples[start + j];
        }
        out[i] = acc / h;
    }
    return out;
}

CoefficientPath::CoefficientPath(Grid grid, std::vector<double> values, std::vector<double> derivs,
                                 std::string name)
    : grid_(std::move(grid)), values_(std::move(values)), derivs_(std::move(derivs)), name_(std::move(name))
{
    require_grid(grid_, values_.size(), derivs_.size());
}

Sample CoefficientPath::at(double t) const
{
    const Locator loc = locate(grid_, t);
    if (loc.exact) {
        return {values_[loc.i], derivs_[loc.i]};
    }
    const HermiteBasis b = hermite(loc.s);
    const double y0 = values_[loc.i];
    const double y1 = values_[loc.i + 1];
    const double m0 = derivs_[loc.i];
    const double m1 = derivs_[loc.i + 1];
    return {b.h00 * y0 + b.h10 * loc.h * m0 + b.h01 * y1 + b.h11 * loc.h * m1,
            (b.d00 * y0 + b.d01 * y1) / loc.h + b.d10 * m0 + b.d11 * m1};
}

std::vector<double> CoefficientPath::node_second_derivatives() const
{
    return differentiate(grid_, derivs_);
}

void CoefficientPath::write_csv(std::ostream& os) const
{
    os << "t,value,deriv\n";
    for (std::size_t i = 0; i < grid_.size(); ++i) {
        os << fmt::format("{:.17g},{:.17g},{:.17g}\n", grid_[i], values_[i], derivs_[i]);
    }
}

AlgebraSeries::AlgebraSeries(Grid grid, std::vector<liealg::Coefficients> values,
                             std::vector<liealg::Coefficients> rates)
    : grid_(std::move(grid)), values_(std::move(values)), rates_(std::move(rates))
{
    require_grid(grid_, values_.size(), rates_.size());
}

liealg::AlgebraElement AlgebraSeries::value(double t) const
{
    const Locator loc = locate(grid_, t);
    if (loc.exact) {
        return liealg::AlgebraElement(values_[loc.i]);
    }
    const HermiteBasis b = hermite(loc.s);
    return liealg::AlgebraElement(b.h00 * values_[loc.i] + (b.h10 * loc.h) * rates_[loc.i] +
                                  b.h01 * values_[loc.i + 1] + (b.h11 * loc.h) * rates_[loc.i + 1]);
}

liealg::AlgebraElement AlgebraSeries::rate(double t) const
{
    const Locator loc = locate(grid_, t);
    if (loc.exact) {
        return liealg::AlgebraElement(rates_[loc.i]);
    }
    const HermiteBasis b = hermite(loc.s);
    return liealg::AlgebraElement((b.d00 / loc.h) * values_[loc.i] + (b.d01 / loc.h) * values_[loc.i + 1] +
                                  b.d10 * rates_[loc.i] + b.d11 * rates_[loc.i + 1]);
}

liealg::AlgebraPath AlgebraSeries::as_path() const
{
    auto self = std::make_shared<const AlgebraSeries>(*this);
    return {[self](double t) { return self->value(t); }, [self](double t) { return self->rate(t); }};
}

}  // namespace dysonforge::auxode

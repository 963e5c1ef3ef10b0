#pragma once

// Scalar auxiliary equations of the seed construction and the linear coefficient flow that
// defines Lewis-Riesenfeld invariants.

#include "dysonforge/group.hpp"
#include "dysonforge/liealg.hpp"
#include "dysonforge/ode.hpp"

#include <iosfwd>
#include <memory>
#include <string>
#include <vector>

namespace dysonforge::auxode {

using liealg::Sample;
using Grid = std::vector<double>;

/// n equally spaced samples on [t0, t1], endpoints included.
Grid uniform_grid(double t0, double t1, int n);

/// Sampled real function with first derivatives; cubic Hermite between nodes.
class CoefficientPath final : public liealg::ScalarPath {
public:
    CoefficientPath(Grid grid, std::vector<double> values, std::vector<double> derivs,
                    std::string name = {});

    Sample at(double t) const override;
    std::string describe() const override { return name_; }

    const Grid& grid() const { return grid_; }
    const std::vector<double>& values() const { return values_; }
    const std::vector<double>& derivs() const { return derivs_; }
    std::size_t size() const { return grid_.size(); }
    const std::string& name() const { return name_; }

    /// Second derivative at each node from a five-point stencil on the derivative samples.
    std::vector<double> node_second_derivatives() const;

    /// Columns t, value, deriv at 17 significant digits.
    void write_csv(std::ostream& os) const;

private:
    Grid grid_;
    std::vector<double> values_;
    std::vector<double> derivs_;
    std::string name_;
};

using PathPtr = std::shared_ptr<const CoefficientPath>;

/// First derivative at each node from a five-point stencil (nonuniform grids allowed).
std::vector<double> differentiate(const Grid& grid, const std::vector<double>& samples);

/// Closed-form scalar function of time.
struct ScalarFunction {
    enum class Kind { Constant, Sinusoidal, Exponential, Tabulated };

    Kind kind = Kind::Constant;
    double offset = 0.0;     ///< constant value, or additive offset
    double amplitude = 0.0;  ///< sinusoid / exponential amplitude
    double omega = 0.0;      ///< sinusoid angular frequency
    double phase = 0.0;      ///< sinusoid phase
    double rate = 0.0;       ///< exponential rate: amplitude·e^{rate·t}
    PathPtr table;

    static ScalarFunction constant(double v);
    /// offset + amplitude·sin(omega·t + phase)
    static ScalarFunction sinusoidal(double offset, double amplitude, double omega, double phase = 0.0);
    /// offset + amplitude·exp(rate·t)
    static ScalarFunction exponential(double amplitude, double rate, double offset = 0.0);
    static ScalarFunction tabulated(PathPtr table);

    Sample at(double t) const;
    std::string describe() const;
};

/// a(t) and λ(t) of the non-Hermitian Hamiltonian.
struct DrivingProfile {
    std::string name;
    ScalarFunction a;
    ScalarFunction lambda;

    Sample a_at(double t) const { return a.at(t); }
    Sample lambda_at(double t) const { return lambda.at(t); }

    /// Throws DomainError naming the first grid time where λ vanishes.
    void require_nonvanishing_lambda(const Grid& grid) const;
};

/// Shipped test profiles.
DrivingProfile profile_a();  ///< a = 1, λ = 0.4
DrivingProfile profile_b();  ///< a = 1, λ = 0.4 + 0.1 sin t
DrivingProfile profile_c();  ///< a = 1, λ = 0.5 e^{−t/10}
/// "a", "b" or "c"; throws DomainError otherwise.
DrivingProfile standard_profile(const std::string& key);

ode::Options default_options();

/// ∫_{t0}^{t} f through the same integrator; derivs hold f itself.
CoefficientPath quadrature(const std::function<double(double)>& f, const Grid& grid,
                           std::string name = {}, const ode::Options& opt = default_options());

/// g(t) = ∫λ.
CoefficientPath lambda_integral(const DrivingProfile& profile, const Grid& grid);

/// ẍ − (λ̇/λ)ẋ − λ²x = 0.
CoefficientPath solve_aux1(const DrivingProfile& profile, double x0, double xdot0, const Grid& grid,
                           const ode::Options& opt = default_options());

/// χ̈ − (λ̇/λ)χ̇ − λ²χ = k²λ²/χ³.
CoefficientPath solve_aux2(const DrivingProfile& profile, double k, double chi0, double chidot0,
                           const Grid& grid, const ode::Options& opt = default_options());

/// ẋ = −λ√(1+k²(1+x²))/k.
CoefficientPath constrained_x2(const DrivingProfile& profile, double k, double x0, const Grid& grid,
                               const ode::Options& opt = default_options());

/// Initial slope implied by the first-order constraint.
double constrained_slope(double lambda, double k, double x);

/// Residuals below are relative: sup_t |lhs − rhs| over sup_t of the largest single term,
/// with second derivatives taken from the stencil on the derivative samples.
double aux1_residual(const DrivingProfile& profile, const CoefficientPath& x);
double aux2_residual(const DrivingProfile& profile, double k, const CoefficientPath& chi);
/// Same normalisation for ẋ = −λΔ/k, Δ = √(1+k²(1+x²)).
double first_order_residual(const DrivingProfile& profile, double k, const CoefficientPath& x);

/// Aux₂ residual of χ = √(1+x²) with Aux₂ constant −1/k_i.
double ep_transform_check(const DrivingProfile& profile, const CoefficientPath& x, double k_i);

/// κ = k x sinh g − Δ cosh g fitted as a constant; residual of the multiplied-through identity
/// k x sinh g = κ + Δ cosh g, relative to its largest term. Along ẋ = −λΔ/k that combination
/// drifts as 2λ(k x cosh g − Δ sinh g); the conserved one is k x cosh g + Δ sinh g, reported
/// with the same normalisation.
struct SinhIdentity {
    double kappa = 0.0;
    double residual = 0.0;
    double conserved_kappa = 0.0;
    double conserved_residual = 0.0;
};
SinhIdentity sinh_identity(const DrivingProfile& profile, double k, const CoefficientPath& x,
                           const CoefficientPath& g);

/// ρ̈ − (ḟ/f)ρ̇ + f²ρ = f²/ρ³ for a sampled or closed-form f.
CoefficientPath solve_rho_ep(const liealg::ScalarPath& f, double rho0, double rhodot0, const Grid& grid,
                             const ode::Options& opt = default_options());
double rho_ep_residual(const liealg::ScalarPath& f, const CoefficientPath& rho);

/// Time-indexed algebra element with sampled rates; cubic Hermite between nodes.
class AlgebraSeries {
public:
    AlgebraSeries(Grid grid, std::vector<liealg::Coefficients> values,
                  std::vector<liealg::Coefficients> rates);

    liealg::AlgebraElement value(double t) const;
    liealg::AlgebraElement rate(double t) const;
    const Grid& grid() const { return grid_; }
    const std::vector<liealg::Coefficients>& values() const { return values_; }
    const std::vector<liealg::Coefficients>& rates() const { return rates_; }
    liealg::AlgebraPath as_path() const;

private:
    Grid grid_;
    std::vector<liealg::Coefficients> values_;
    std::vector<liealg::Coefficients> rates_;
};

/// ∂t c = −i ad(H(t)) c, the coefficient form of i∂tI + [I, H] = 0.
AlgebraSeries invariant_flow(const std::function<liealg::AlgebraElement(double)>& hamiltonian,
                             const liealg::AlgebraElement& initial, const Grid& grid,
                             const ode::Options& opt = default_options());

/// sup_t ‖i∂tI + [I, H]‖ / max(1, ‖I‖), with ∂tI from the path's analytic rate.
double lr_residual(const liealg::AlgebraPath& invariant,
                   const std::function<liealg::AlgebraElement(double)>& hamiltonian, const Grid& grid);

/// sup_t max_k |a_k(t) − b_k(t)| / max(1, ‖b‖).
double path_distance(const liealg::AlgebraPath& a, const liealg::AlgebraPath& b, const Grid& grid);

}  // namespace dysonforge::auxode

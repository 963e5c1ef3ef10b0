#pragma once

// The six two-factor seed Dyson maps, their Hermitian counterparts h = f₊K₁ + f₋K₂, and the
// invariant families used by the forge.

#include "dysonforge/auxode.hpp"
#include "dysonforge/group.hpp"

#include <array>
#include <map>
#include <optional>
#include <tuple>
#include <vector>

namespace dysonforge::seeds {

using liealg::AlgebraElement;
using liealg::AlgebraPath;
using liealg::GroupElement;
using liealg::ScalarPathPtr;

/// Which of the two printed signs feeds f₊. Only Upper is consistent with the TDDE.
enum class SignSelector { Upper, Lower };

enum class Eta2Parametrization {
    Linear,     ///< γ₁ = arcsinh x₂ (odd continuation of arccosh√(1+x₂²)), γ₂ = arcsinh(−1/(k₂√(1+x₂²)))
    Ermakov,    ///< γ₁ = arccosh χ, γ₂ = arcsinh(k/χ), χ from Aux₂
};

struct SeedSpec {
    int index = 2;      ///< 1..6
    double k = 1.0;     ///< k_i, ignored for index 1
    double x0 = 0.1;    ///< x_i(t0); ẋ_i(t0) follows from the first-order constraint
    SignSelector sign = SignSelector::Upper;
    Eta2Parametrization eta2 = Eta2Parametrization::Linear;
    double eta1_k4 = 0.0;  ///< constant exponent of K₄ in η₁ = e^{c K₄} e^{−g K₃}
};

/// (q₁, q₂) of each row, q₂ possibly carrying a factor i.
struct SeedGenerators {
    AlgebraElement q1;
    AlgebraElement q2;
};
SeedGenerators seed_generators(int index);

struct Seed {
    SeedSpec spec;
    GroupElement eta;
    auxode::PathPtr x;      ///< null for η₁
    auxode::PathPtr chi;    ///< only for the Ermakov parametrization of η₂
    ScalarPathPtr f_plus;
    ScalarPathPtr f_minus;
};

/// H(t) = a(K₁+K₂) + iλK₃ with its time derivative.
AlgebraPath hamiltonian(const auxode::DrivingProfile& profile);

/// Builds seeds on one profile and grid. Auxiliary paths and γ paths are cached per
/// (k, x₀), so seeds sharing constants share scale objects and their products simplify exactly.
class SeedFactory {
public:
    SeedFactory(auxode::DrivingProfile profile, auxode::Grid grid);

    const auxode::DrivingProfile& profile() const { return profile_; }
    const auxode::Grid& grid() const { return grid_; }

    Seed build(const SeedSpec& spec);

    /// Solution of the first-order constraint (hence of Aux₁).
    auxode::PathPtr x_path(double k, double x0);
    /// g = ∫_{t0}^t λ.
    auxode::PathPtr g_path();
    /// ∫_{t0}^t (f₊ − f₋) for the given seed.
    auxode::PathPtr f_difference_integral(const Seed& seed);

private:
    ScalarPathPtr cached(const std::string& key, const std::function<ScalarPathPtr()>& make);

    auxode::DrivingProfile profile_;
    auxode::Grid grid_;
    std::map<std::pair<double, double>, auxode::PathPtr> x_cache_;
    std::map<std::string, ScalarPathPtr> path_cache_;
    auxode::PathPtr g_;
};

/// Closed-form f₊, f₋ per row (with `a`), resolved by the sign selector.
std::pair<ScalarPathPtr, ScalarPathPtr> f_pm(const SeedSpec& spec, const auxode::DrivingProfile& profile,
                                              auxode::PathPtr x);

/// Ad(η)H + i(∂tη)η⁻¹.
AlgebraElement tdde_rhs(const GroupElement& eta, const AlgebraPath& h, double t);

struct CounterpartSample {
    double t = 0.0;
    double f_plus = 0.0;   ///< Re K₁ coefficient of the TDDE output
    double f_minus = 0.0;  ///< Re K₂ coefficient
    double anti_hermitian = 0.0;
    double off_span = 0.0;  ///< largest coefficient outside span{K₁, K₂}
    double f_plus_closed = 0.0;
    double f_minus_closed = 0.0;
};

struct HermitianCounterpart {
    std::vector<CounterpartSample> samples;
    double max_anti_hermitian = 0.0;
    double max_off_span = 0.0;
    double max_closed_form_error = 0.0;  ///< against f_pm, relative to max(1, |f|)
};

HermitianCounterpart hermitian_counterpart(const Seed& seed, const auxode::DrivingProfile& profile,
                                           const auxode::Grid& grid);

/// Least-squares γ̇ making the TDDE output Hermitian for a given factor structure.
struct GammaDotSolution {
    Eigen::VectorXd gamma_dot;
    double residual = 0.0;  ///< ‖anti-Hermitian part‖∞ left after the solve
    int rank = 0;
    bool rank_deficient = false;
};
GammaDotSolution solve_gamma_dot_by_hermiticity(std::span<const AlgebraElement> generators,
                                                std::span<const double> gammas,
                                                const AlgebraElement& hamiltonian);

/// c₁..c₄ of the invariant families.
using InvariantConstants = std::array<double, 4>;
inline constexpr InvariantConstants kDefaultConstants = {1.0, 1.0, 0.5, 0.0};

/// c₁K₁ + c₂K₂ + c₃cos φ K₃ − c₃sin φ K₄, φ = c₄ − ∫_{t0}^t (f₊ − f₋).
AlgebraPath invariant_inv1(const Seed& seed, const InvariantConstants& c, auxode::PathPtr f_difference_integral);

/// ρ ≡ 1 solves the Ermakov-Pinney equation for every f and gives the trivial invariant 2(K₁+K₂).
inline constexpr double kDefaultRho0 = 2.0;

/// ρ± from the Ermakov-Pinney equation with f±; ρ₀ and ρ̇₀ shared by both signs.
struct RhoPaths {
    auxode::PathPtr plus;
    auxode::PathPtr minus;
};
RhoPaths solve_rho_pair(const Seed& seed, const auxode::Grid& grid, double rho0 = kDefaultRho0,
                        double rhodot0 = 0.0);

/// α±(K₊+K₋) + β±(K₊−K₋) + δ±K₀ per mode.
AlgebraPath invariant_inv3(const Seed& seed, const RhoPaths& rho);

/// C₁K₁ + C₂K₂ + C₃K₃ + iC₄K₄ with ψ = c₄ − g.
AlgebraPath invariant_IH(const InvariantConstants& c, const auxode::DrivingProfile& profile, auxode::PathPtr g);

struct SeedReport {
    SeedSpec spec;
    std::string profile;
    HermitianCounterpart counterpart;
    double aux1_residual = 0.0;
    double first_order_residual = 0.0;
    double f_difference_error = 0.0;  ///< |f₊ − f₋ − (∓λ/(k(1+x²)))|, closed forms
    double inv1_lr_residual = 0.0;
    double inv3_lr_residual = 0.0;
    bool passed = false;
};
SeedReport seed_report(SeedFactory& factory, const SeedSpec& spec, const InvariantConstants& c, double tol);

}  // namespace dysonforge::seeds

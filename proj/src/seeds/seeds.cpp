#include "dysonforge/seeds.hpp"

#include "dysonforge/errors.hpp"
#include "dysonforge/expm.hpp"

#include <fmt/format.h>

#include <cmath>
#include <numbers>

namespace dysonforge::seeds {

namespace {

using liealg::Complex;
using liealg::Sample;
using liealg::gen;
using liealg::K1;
using liealg::K2;
using liealg::K3;
using liealg::K4;

constexpr Complex kI{0.0, 1.0};

void require_index(int index)
{
    if (index < 1 || index > 6) {
        throw DomainError(fmt::format("seed index {} outside 1..6", index));
    }
}

// p, q of f = a + λ(p + qΔ)/(2k(1+x²)), upper sign, Δ = √(1+k²(1+x²)).
std::pair<double, double> row_coefficients(int index, bool upper)
{
    const double s = upper ? 1.0 : -1.0;
    switch (index) {
    case 2: return {-s, 0.0};
    case 3: return {-s, -1.0};
    case 4: return {-s, 1.0};
    case 5: return {s, 1.0};
    case 6: return {s, -1.0};
    default: return {0.0, 0.0};
    }
}

ScalarPathPtr closed_form_f(int index, bool upper, double k, const auxode::DrivingProfile& profile,
                            auxode::PathPtr x, std::string name)
{
    if (index == 1) {
        return liealg::function_path([profile](double t) { return profile.a_at(t); }, std::move(name));
    }
    const auto [p, q] = row_coefficients(index, upper);
    return liealg::function_path(
        [profile, x, p = p, q = q, k](double t) {
            const Sample a = profile.a_at(t);
            const Sample l = profile.lambda_at(t);
            const Sample xs = x->at(t);
            const double s = 1.0 + xs.value * xs.value;
            const double delta = std::sqrt(1.0 + k * k * s);
            const double u = (p + q * delta) / s;
            const double du_dx = (q * k * k * xs.value / delta * s - (p + q * delta) * 2.0 * xs.value) / (s * s);
            return Sample{a.value + l.value * u / (2.0 * k),
                          a.rate + (l.rate * u + l.value * du_dx * xs.rate) / (2.0 * k)};
        },
        std::move(name));
}

}  // namespace

SeedGenerators seed_generators(int index)
{
    require_index(index);
    switch (index) {
    case 1: return {gen(K4), gen(K3)};
    case 2: return {gen(K3), gen(K4)};
    case 3: return {gen(K4), gen(K1, kI)};
    case 4: return {gen(K4), gen(K2, kI)};
    case 5: return {gen(K3), gen(K1, kI)};
    default: return {gen(K3), gen(K2, kI)};
    }
}

AlgebraPath hamiltonian(const auxode::DrivingProfile& profile)
{
    return {[profile](double t) {
                const double a = profile.a_at(t).value;
                return gen(K1, a) + gen(K2, a) + gen(K3, kI * profile.lambda_at(t).value);
            },
            [profile](double t) {
                const double a = profile.a_at(t).rate;
                return gen(K1, a) + gen(K2, a) + gen(K3, kI * profile.lambda_at(t).rate);
            }};
}

SeedFactory::SeedFactory(auxode::DrivingProfile profile, auxode::Grid grid)
    : profile_(std::move(profile)), grid_(std::move(grid))
{
    profile_.require_nonvanishing_lambda(grid_);
}

auxode::PathPtr SeedFactory::x_path(double k, double x0)
{
    const auto key = std::make_pair(k, x0);
    auto it = x_cache_.find(key);
    if (it != x_cache_.end()) {
        return it->second;
    }
    auto path = std::make_shared<const auxode::CoefficientPath>(auxode::constrained_x2(profile_, k, x0, grid_));
    x_cache_.emplace(key, path);
    return path;
}

auxode::PathPtr SeedFactory::g_path()
{
    if (!g_) {
        g_ = std::make_shared<const auxode::CoefficientPath>(auxode::lambda_integral(profile_, grid_));
    }
    return g_;
}

auxode::PathPtr SeedFactory::f_difference_integral(const Seed& seed)
{
    const ScalarPathPtr fp = seed.f_plus;
    const ScalarPathPtr fm = seed.f_minus;
    return std::make_shared<const auxode::CoefficientPath>(auxode::quadrature(
        [fp, fm](double t) { return fp->at(t).value - fm->at(t).value; }, grid_, "int_f_pm"));
}

ScalarPathPtr SeedFactory::cached(const std::string& key, const std::function<ScalarPathPtr()>& make)
{
    auto it = path_cache_.find(key);
    if (it != path_cache_.end()) {
        return it->second;
    }
    ScalarPathPtr p = make();
    path_cache_.emplace(key, p);
    return p;
}

Seed SeedFactory::build(const SeedSpec& spec)
{
    require_index(spec.index);
    Seed seed;
    seed.spec = spec;
    const SeedGenerators q = seed_generators(spec.index);

    if (spec.index == 1) {
        const ScalarPathPtr g = g_path();
        seed.eta = GroupElement::exp(q.q1, liealg::constant_path(spec.eta1_k4), 1.0, "c*K4") *
                   GroupElement::exp(q.q2, g, -1.0, "-g*K3");
        std::tie(seed.f_plus, seed.f_minus) = f_pm(spec, profile_, nullptr);
        return seed;
    }

    const double k = spec.k;
    if (k == 0.0) {
        throw DomainError(fmt::format("seed {} needs k != 0", spec.index));
    }
    const auxode::PathPtr x = x_path(k, spec.x0);
    seed.x = x;
    const std::string tag = fmt::format("{:a}:{:a}", k, spec.x0);

    auto arcsinh_k_root = [&] {
        return cached("arcsinh_k_root:" + tag, [x, k] {
            return liealg::function_path(
                [x, k](double t) {
                    const Sample xs = x->at(t);
                    const double s = std::sqrt(1.0 + xs.value * xs.value);
                    const double u = k * s;
                    return Sample{std::asinh(u), k * xs.value * xs.rate / s / std::sqrt(1.0 + u * u)};
                },
                "arcsinh(k sqrt(1+x^2))");
        });
    };
    auto arctan_x = [&] {
        return cached("arctan:" + tag, [x] {
            return liealg::function_path(
                [x](double t) {
                    const Sample xs = x->at(t);
                    return Sample{std::atan(xs.value), xs.rate / (1.0 + xs.value * xs.value)};
                },
                "arctan(x)");
        });
    };
    auto arccot_x = [&] {
        return cached("arccot:" + tag, [x] {
            return liealg::function_path(
                [x](double t) {
                    const Sample xs = x->at(t);
                    return Sample{std::numbers::pi / 2.0 - std::atan(xs.value),
                                  -xs.rate / (1.0 + xs.value * xs.value)};
                },
                "arccot(x)");
        });
    };

    switch (spec.index) {
    case 2:
        if (spec.eta2 == Eta2Parametrization::Linear) {
            const ScalarPathPtr g1 = cached("arcsinh_x:" + tag, [x] {
                return liealg::function_path(
                    [x](double t) {
                        const Sample xs = x->at(t);
                        return Sample{std::asinh(xs.value), xs.rate / std::sqrt(1.0 + xs.value * xs.value)};
                    },
                    "arcsinh(x)");
            });
            const ScalarPathPtr g2 = cached("arcsinh_inv:" + tag, [x, k] {
                return liealg::function_path(
                    [x, k](double t) {
                        const Sample xs = x->at(t);
                        const double s2 = 1.0 + xs.value * xs.value;
                        const double s = std::sqrt(s2);
                        const double u = -1.0 / (k * s);
                        const double du = xs.value * xs.rate / (k * s2 * s);
                        return Sample{std::asinh(u), du / std::sqrt(1.0 + u * u)};
                    },
                    "arcsinh(-1/(k sqrt(1+x^2)))");
            });
            seed.eta = GroupElement::exp(q.q1, g1, 1.0, "g1*K3") * GroupElement::exp(q.q2, g2, 1.0, "g2*K4");
        } else {
            const double kep = -1.0 / k;
            const double chi0 = std::sqrt(1.0 + spec.x0 * spec.x0);
            const double chidot0 = spec.x0 * x->at(grid_.front()).rate / chi0;
            auto chi = std::make_shared<const auxode::CoefficientPath>(
                auxode::solve_aux2(profile_, kep, chi0, chidot0, grid_));
            seed.chi = chi;
            const ScalarPathPtr g1 = liealg::function_path(
                [chi](double t) {
                    const Sample c = chi->at(t);
                    if (!(c.value >= 1.0)) {
                        throw DomainError(fmt::format("arccosh argument {:.17g} < 1 at t = {:.17g}", c.value, t));
                    }
                    return Sample{std::acosh(c.value), c.rate / std::sqrt(c.value * c.value - 1.0)};
                },
                "arccosh(chi)");
            const ScalarPathPtr g2 = liealg::function_path(
                [chi, kep](double t) {
                    const Sample c = chi->at(t);
                    const double u = kep / c.value;
                    const double du = -kep * c.rate / (c.value * c.value);
                    return Sample{std::asinh(u), du / std::sqrt(1.0 + u * u)};
                },
                "arcsinh(k/chi)");
            seed.eta = GroupElement::exp(q.q1, g1, 1.0, "g1*K3") * GroupElement::exp(q.q2, g2, 1.0, "g2*K4");
        }
        break;
    case 3:
        seed.eta = GroupElement::exp(q.q1, arcsinh_k_root(), 1.0, "g1*K4") *
                   GroupElement::exp(q.q2, arctan_x(), -1.0, "-arctan(x)*iK1");
        break;
    case 4:
        seed.eta = GroupElement::exp(q.q1, arcsinh_k_root(), 1.0, "g1*K4") *
                   GroupElement::exp(q.q2, arctan_x(), 1.0, "arctan(x)*iK2");
        break;
    case 5:
        seed.eta = GroupElement::exp(q.q1, arcsinh_k_root(), 1.0, "g1*K3") *
                   GroupElement::exp(q.q2, arccot_x(), -1.0, "-arccot(x)*iK1");
        break;
    case 6:
        seed.eta = GroupElement::exp(q.q1, arcsinh_k_root(), 1.0, "g1*K3") *
                   GroupElement::exp(q.q2, arccot_x(), 1.0, "arccot(x)*iK2");
        break;
    default: break;
    }
    std::tie(seed.f_plus, seed.f_minus) = f_pm(spec, profile_, x);
    return seed;
}

std::pair<ScalarPathPtr, ScalarPathPtr> f_pm(const SeedSpec& spec, const auxode::DrivingProfile& profile,
                                              auxode::PathPtr x)
{
    require_index(spec.index);
    if (spec.index != 1 && !x) {
        throw DomainError(fmt::format("seed {} needs its x path", spec.index));
    }
    const bool upper = spec.sign == SignSelector::Upper;
    return {closed_form_f(spec.index, upper, spec.k, profile, x, "f+"),
            closed_form_f(spec.index, !upper, spec.k, profile, x, "f-")};
}

AlgebraElement tdde_rhs(const GroupElement& eta, const AlgebraPath& h, double t)
{
    return eta.conjugate(h.value(t), t) + kI * eta.left_log_derivative(t);
}

HermitianCounterpart hermitian_counterpart(const Seed& seed, const auxode::DrivingProfile& profile,
                                           const auxode::Grid& grid)
{
    HermitianCounterpart out;
    const AlgebraPath H = hamiltonian(profile);
    for (double t : grid) {
        const AlgebraElement h = tdde_rhs(seed.eta, H, t);
        CounterpartSample s;
        s.t = t;
        s.f_plus = h[K1].real();
        s.f_minus = h[K2].real();
        s.anti_hermitian = liealg::is_hermitian(h).residual;
        for (liealg::Generator g : liealg::kGenerators) {
            if (g != K1 && g != K2) {
                s.off_span = std::max(s.off_span, std::abs(h[g]));
            }
        }
        s.f_plus_closed = seed.f_plus->at(t).value;
        s.f_minus_closed = seed.f_minus->at(t).value;
        const double err =
            std::max(std::abs(s.f_plus - s.f_plus_closed) / std::max(1.0, std::abs(s.f_plus_closed)),
                     std::abs(s.f_minus - s.f_minus_closed) / std::max(1.0, std::abs(s.f_minus_closed)));
        out.max_anti_hermitian = std::max(out.max_anti_hermitian, s.anti_hermitian);
        out.max_off_span = std::max(out.max_off_span, s.off_span);
        out.max_closed_form_error = std::max(out.max_closed_form_error, err);
        out.samples.push_back(s);
    }
    return out;
}

GammaDotSolution solve_gamma_dot_by_hermiticity(std::span<const AlgebraElement> generators,
                                                std::span<const double> gammas,
                                                const AlgebraElement& hamiltonian_value)
{
    if (generators.size() != gammas.size() || generators.empty() || generators.size() > 3) {
        throw DomainError("solve_gamma_dot_by_hermiticity: need 1..3 factors with one gamma each");
    }
    const auto m = static_cast<Eigen::Index>(generators.size());
    Eigen::Matrix<double, liealg::kDim, Eigen::Dynamic> system(liealg::kDim, m);
    liealg::AdMatrix prefix = liealg::AdMatrix::Identity();
    for (Eigen::Index j = 0; j < m; ++j) {
        const auto& q = generators[static_cast<std::size_t>(j)];
        // γ̇_j enters h as i·Ad(prefix)q_j; its anti-Hermitian share is the imaginary part.
        system.col(j) = (kI * (prefix * q.coeffs())).imag();
        prefix = prefix * linalg::expm(gammas[static_cast<std::size_t>(j)] * liealg::ad_matrix(q));
    }
    const Eigen::Matrix<double, liealg::kDim, 1> base = (prefix * hamiltonian_value.coeffs()).imag();

    Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(system);
    cod.setThreshold(1e-10);
    GammaDotSolution out;
    out.gamma_dot = cod.solve(Eigen::VectorXd(-base));
    out.rank = static_cast<int>(cod.rank());
    out.rank_deficient = out.rank < m;
    out.residual = (base + system * out.gamma_dot).cwiseAbs().maxCoeff();
    return out;
}

}  // namespace dysonforge::seeds

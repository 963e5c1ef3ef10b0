#include "dysonforge/liealg.hpp"

#include <fmt/format.h>

#include <cmath>

namespace dysonforge::liealg {

namespace {

constexpr std::array<std::string_view, kDim> kLabels = {
    "K+x", "K-x", "K0x", "K+y", "K-y", "K0y", "J+", "J-", "I+", "I-",
};

}  // namespace

std::string_view label(Generator g) { return kLabels[index(g)]; }

std::string_view alias(Generator g)
{
    switch (g) {
    case K1: return "K1";
    case K2: return "K2";
    case K3: return "K3";
    case K4: return "K4";
    default: return {};
    }
}

std::optional<Generator> parse_generator(std::string_view text)
{
    for (Generator g : kGenerators) {
        if (text == label(g) || (!alias(g).empty() && text == alias(g))) {
            return g;
        }
    }
    return std::nullopt;
}

AlgebraElement AlgebraElement::basis(Generator g, Complex scale)
{
    AlgebraElement e;
    e.coeffs_[index(g)] = scale;
    return e;
}

bool AlgebraElement::is_exact_zero() const
{
    for (int k = 0; k < kDim; ++k) {
        if (coeffs_[k] != Complex(0.0, 0.0)) {
            return false;
        }
    }
    return true;
}

std::string to_string(const AlgebraElement& x)
{
    std::string out;
    for (Generator g : kGenerators) {
        const Complex c = x[g];
        if (c == Complex(0.0, 0.0)) {
            continue;
        }
        if (!out.empty()) {
            out += " + ";
        }
        out += fmt::format("({:.12g}{:+.12g}i) {}", c.real(), c.imag(), label(g));
    }
    return out.empty() ? "0" : out;
}

HermiticityCheck is_hermitian(const AlgebraElement& x, double tol)
{
    const double residual = x.coeffs().imag().cwiseAbs().maxCoeff();
    return {residual <= tol, residual};
}

AlgebraElement hermitian_part(const AlgebraElement& x)
{
    return AlgebraElement(x.coeffs().real().cast<Complex>());
}

AlgebraElement anti_hermitian_part(const AlgebraElement& x)
{
    return AlgebraElement(Complex(0.0, 1.0) * x.coeffs().imag().cast<Complex>());
}

AlgebraElement pt_transform(const AlgebraElement& x)
{
    AlgebraElement y = x.adjoint();
    for (Generator g : {Generator::K0X, Generator::K0Y, Generator::Iplus, Generator::Iminus}) {
        y[g] = -y[g];
    }
    return y;
}

AlgebraElement bracket(const AlgebraElement& x, const AlgebraElement& y)
{
    return StructureConstants::standard().bracket(x, y);
}

AdMatrix ad_matrix(const AlgebraElement& x) { return StructureConstants::standard().ad_matrix(x); }

}  // namespace dysonforge::liealg

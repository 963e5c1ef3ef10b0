#include "dysonforge/liealg.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <vector>

namespace dysonforge::liealg {

namespace {

using G = Generator;
constexpr Complex kI{0.0, 1.0};

// [a, b] = i·imag·k, one line per (a, b, k) with a before b in basis order.
constexpr StructureConstants::Entry kTable[] = {
    {G::KplusX, G::KminusX, G::K0X, 2.0},
    {G::KplusX, G::K0X, G::KminusX, -2.0},
    {G::KplusX, G::Jplus, G::Iminus, 1.0},
    {G::KplusX, G::Jminus, G::Iplus, -1.0},
    {G::KplusX, G::Iplus, G::Jminus, 1.0},
    {G::KplusX, G::Iminus, G::Jplus, -1.0},
    {G::KminusX, G::K0X, G::KplusX, -2.0},
    {G::KminusX, G::Jplus, G::Iplus, -1.0},
    {G::KminusX, G::Jminus, G::Iminus, 1.0},
    {G::KminusX, G::Iplus, G::Jplus, -1.0},
    {G::KminusX, G::Iminus, G::Jminus, 1.0},
    {G::K0X, G::Jplus, G::Jminus, -1.0},
    {G::K0X, G::Jminus, G::Jplus, -1.0},
    {G::K0X, G::Iplus, G::Iminus, -1.0},
    {G::K0X, G::Iminus, G::Iplus, -1.0},
    {G::KplusY, G::KminusY, G::K0Y, 2.0},
    {G::KplusY, G::K0Y, G::KminusY, -2.0},
    {G::KplusY, G::Jplus, G::Iminus, 1.0},
    {G::KplusY, G::Jminus, G::Iplus, 1.0},
    {G::KplusY, G::Iplus, G::Jminus, -1.0},
    {G::KplusY, G::Iminus, G::Jplus, -1.0},
    {G::KminusY, G::K0Y, G::KplusY, -2.0},
    {G::KminusY, G::Jplus, G::Iplus, -1.0},
    {G::KminusY, G::Jminus, G::Iminus, -1.0},
    {G::KminusY, G::Iplus, G::Jplus, -1.0},
    {G::KminusY, G::Iminus, G::Jminus, -1.0},
    {G::K0Y, G::Jplus, G::Jminus, 1.0},
    {G::K0Y, G::Jminus, G::Jplus, 1.0},
    {G::K0Y, G::Iplus, G::Iminus, -1.0},
    {G::K0Y, G::Iminus, G::Iplus, -1.0},
    {G::Jplus, G::Jminus, G::K0X, 0.5},
    {G::Jplus, G::Jminus, G::K0Y, -0.5},
    {G::Jplus, G::Iplus, G::KminusX, 0.5},
    {G::Jplus, G::Iplus, G::KminusY, 0.5},
    {G::Jplus, G::Iminus, G::KplusX, -0.5},
    {G::Jplus, G::Iminus, G::KplusY, -0.5},
    {G::Jminus, G::Iplus, G::KplusX, -0.5},
    {G::Jminus, G::Iplus, G::KplusY, 0.5},
    {G::Jminus, G::Iminus, G::KminusX, 0.5},
    {G::Jminus, G::Iminus, G::KminusY, -0.5},
    {G::Iplus, G::Iminus, G::K0X, -0.5},
    {G::Iplus, G::Iminus, G::K0Y, -0.5},
};

// Phase-space coordinates ξ = (x, y, p_x, p_y); generator = ½ ξᵀ A ξ.
using Quadratic = Eigen::Matrix4d;

Quadratic quadratic_form(Generator g)
{
    Quadratic a = Quadratic::Zero();
    auto sym = [&a](int i, int j, double v) {
        a(i, j) = v;
        a(j, i) = v;
    };
    switch (g) {
    case G::KplusX: sym(0, 0, 1.0); sym(2, 2, 1.0); break;
    case G::KminusX: sym(0, 0, -1.0); sym(2, 2, 1.0); break;
    case G::K0X: sym(0, 2, 1.0); break;
    case G::KplusY: sym(1, 1, 1.0); sym(3, 3, 1.0); break;
    case G::KminusY: sym(1, 1, -1.0); sym(3, 3, 1.0); break;
    case G::K0Y: sym(1, 3, 1.0); break;
    case G::Jplus: sym(0, 3, 0.5); sym(1, 2, 0.5); break;
    case G::Jminus: sym(0, 3, 0.5); sym(1, 2, -0.5); break;
    case G::Iplus: sym(0, 1, 0.5); sym(2, 3, 0.5); break;
    case G::Iminus: sym(0, 1, 0.5); sym(2, 3, -0.5); break;
    }
    return a;
}

Eigen::Matrix<double, 10, 1> upper_entries(const Quadratic& a)
{
    Eigen::Matrix<double, 10, 1> v;
    int n = 0;
    for (int i = 0; i < 4; ++i) {
        for (int j = i; j < 4; ++j) {
            v[n++] = a(i, j);
        }
    }
    return v;
}

AlgebraElement relation(std::initializer_list<std::pair<Generator, Complex>> terms)
{
    AlgebraElement e;
    for (const auto& [g, c] : terms) {
        e[g] += c;
    }
    return e;
}

std::vector<Relation> make_k_relations()
{
    return {
        {K1, K2, AlgebraElement::zero()},
        {K1, K3, relation({{K4, kI}})},
        {K1, K4, relation({{K3, -kI}})},
        {K2, K3, relation({{K4, -kI}})},
        {K2, K4, relation({{K3, kI}})},
        {K3, K4, relation({{K1, 0.5 * kI}, {K2, -0.5 * kI}})},
    };
}

// The documented relations, one pair at a time, with the [J-, I±] row taken from the derivation.
std::vector<Relation> make_extended_relations()
{
    const Complex i = kI;
    const Complex h = 0.5 * kI;
    return {
        {G::K0X, G::KplusX, relation({{G::KminusX, 2.0 * i}})},
        {G::K0X, G::KminusX, relation({{G::KplusX, 2.0 * i}})},
        {G::K0Y, G::KplusY, relation({{G::KminusY, 2.0 * i}})},
        {G::K0Y, G::KminusY, relation({{G::KplusY, 2.0 * i}})},
        {G::KplusX, G::KminusX, relation({{G::K0X, 2.0 * i}})},
        {G::KplusY, G::KminusY, relation({{G::K0Y, 2.0 * i}})},
        {G::K0X, G::Jplus, relation({{G::Jminus, -i}})},
        {G::K0X, G::Jminus, relation({{G::Jplus, -i}})},
        {G::K0Y, G::Jplus, relation({{G::Jminus, i}})},
        {G::K0Y, G::Jminus, relation({{G::Jplus, i}})},
        {G::K0X, G::Iplus, relation({{G::Iminus, -i}})},
        {G::K0X, G::Iminus, relation({{G::Iplus, -i}})},
        {G::K0Y, G::Iplus, relation({{G::Iminus, -i}})},
        {G::K0Y, G::Iminus, relation({{G::Iplus, -i}})},
        {G::KplusX, G::Jplus, relation({{G::Iminus, i}})},
        {G::KminusX, G::Jplus, relation({{G::Iplus, -i}})},
        {G::KplusY, G::Jplus, relation({{G::Iminus, i}})},
        {G::KminusY, G::Jplus, relation({{G::Iplus, -i}})},
        {G::KplusX, G::Jminus, relation({{G::Iplus, -i}})},
        {G::KminusX, G::Jminus, relation({{G::Iminus, i}})},
        {G::KplusY, G::Jminus, relation({{G::Iplus, i}})},
        {G::KminusY, G::Jminus, relation({{G::Iminus, -i}})},
        {G::KplusX, G::Iplus, relation({{G::Jminus, i}})},
        {G::KminusX, G::Iplus, relation({{G::Jplus, -i}})},
        {G::KplusY, G::Iplus, relation({{G::Jminus, -i}})},
        {G::KminusY, G::Iplus, relation({{G::Jplus, -i}})},
        {G::KplusX, G::Iminus, relation({{G::Jplus, -i}})},
        {G::KminusX, G::Iminus, relation({{G::Jminus, i}})},
        {G::KplusY, G::Iminus, relation({{G::Jplus, -i}})},
        {G::KminusY, G::Iminus, relation({{G::Jminus, -i}})},
        {G::Jplus, G::Jminus, relation({{G::K0X, h}, {G::K0Y, -h}})},
        {G::Iplus, G::Iminus, relation({{G::K0X, -h}, {G::K0Y, -h}})},
        {G::Jplus, G::Iplus, relation({{G::KminusX, h}, {G::KminusY, h}})},
        {G::Jplus, G::Iminus, relation({{G::KplusX, -h}, {G::KplusY, -h}})},
        {G::Jminus, G::Iplus, relation({{G::KplusX, -h}, {G::KplusY, h}})},
        {G::Jminus, G::Iminus, relation({{G::KminusX, h}, {G::KminusY, -h}})},
    };
}

}  // namespace

StructureConstants::StructureConstants() { table_.fill(Complex(0.0, 0.0)); }

StructureConstants StructureConstants::from_entries(std::span<const Entry> entries)
{
    StructureConstants sc;
    for (const Entry& e : entries) {
        sc.at(index(e.a), index(e.b), index(e.k)) += Complex(0.0, e.imag);
        sc.at(index(e.b), index(e.a), index(e.k)) -= Complex(0.0, e.imag);
    }
    return sc;
}

const StructureConstants& StructureConstants::standard()
{
    static const StructureConstants table = from_entries(kTable);
    return table;
}

AlgebraElement StructureConstants::bracket(const AlgebraElement& x, const AlgebraElement& y) const
{
    Coefficients out = Coefficients::Zero();
    for (int a = 0; a < kDim; ++a) {
        const Complex xa = x.coeffs()[a];
        if (xa == Complex(0.0, 0.0)) {
            continue;
        }
        for (int b = 0; b < kDim; ++b) {
            const Complex xy = xa * y.coeffs()[b];
            if (xy == Complex(0.0, 0.0)) {
                continue;
            }
            for (int k = 0; k < kDim; ++k) {
                const Complex c = (*this)(a, b, k);
                if (c != Complex(0.0, 0.0)) {
                    out[k] += xy * c;
                }
            }
        }
    }
    return AlgebraElement(out);
}

AlgebraElement StructureConstants::bracket(Generator a, Generator b) const
{
    Coefficients out;
    for (int k = 0; k < kDim; ++k) {
        out[k] = (*this)(index(a), index(b), k);
    }
    return AlgebraElement(out);
}

AdMatrix StructureConstants::ad_matrix(const AlgebraElement& x) const
{
    AdMatrix m = AdMatrix::Zero();
    for (int a = 0; a < kDim; ++a) {
        const Complex xa = x.coeffs()[a];
        if (xa == Complex(0.0, 0.0)) {
            continue;
        }
        for (int b = 0; b < kDim; ++b) {
            for (int k = 0; k < kDim; ++k) {
                m(k, b) += xa * (*this)(a, b, k);
            }
        }
    }
    return m;
}

StructureConstants derive_structure_constants()
{
    Eigen::Matrix4d omega = Eigen::Matrix4d::Zero();
    omega.block<2, 2>(0, 2) = Eigen::Matrix2d::Identity();
    omega.block<2, 2>(2, 0) = -Eigen::Matrix2d::Identity();

    Eigen::Matrix<double, 10, 10> basis;
    for (Generator g : kGenerators) {
        basis.col(index(g)) = upper_entries(quadratic_form(g));
    }
    const auto lu = basis.fullPivLu();

    StructureConstants sc;
    for (Generator ga : kGenerators) {
        for (Generator gb : kGenerators) {
            const Quadratic a = quadratic_form(ga);
            const Quadratic b = quadratic_form(gb);
            // {½ξᵀAξ, ½ξᵀBξ} = ½ξᵀ(AΩB − BΩA)ξ; commutator = i·Poisson bracket.
            const Quadratic poisson = a * omega * b - b * omega * a;
            const Eigen::Matrix<double, 10, 1> c = lu.solve(upper_entries(poisson));
            for (int k = 0; k < kDim; ++k) {
                sc.at(index(ga), index(gb), k) = Complex(0.0, c[k]);
            }
        }
    }
    return sc;
}

std::span<const Relation> k_subalgebra_relations()
{
    static const std::vector<Relation> relations = make_k_relations();
    return relations;
}

std::span<const Relation> extended_relations()
{
    static const std::vector<Relation> relations = make_extended_relations();
    return relations;
}

std::string bracket_name(Generator a, Generator b)
{
    std::string name = fmt::format("[{},{}]", label(a), label(b));
    if (!alias(a).empty() && !alias(b).empty()) {
        name += fmt::format(" (alias [{},{}])", alias(a), alias(b));
    }
    return name;
}

AlgebraReport verify_structure_constants(const StructureConstants& table, double tol)
{
    AlgebraReport report;
    const StructureConstants derived = derive_structure_constants();

    auto note_failure = [&report](Generator a, Generator b, double deviation) {
        if (!report.first_failure) {
            report.first_failure = BracketMismatch{a, b, deviation};
        }
    };

    // Documented relations first, so a corrupted K-subalgebra entry is named before anything else.
    auto check_relations = [&](std::span<const Relation> relations) {
        for (const Relation& r : relations) {
            const double dev = (table.bracket(r.a, r.b) - r.result).max_abs();
            report.relation_error = std::max(report.relation_error, dev);
            if (dev > tol) {
                note_failure(r.a, r.b, dev);
            }
        }
    };
    check_relations(k_subalgebra_relations());
    check_relations(extended_relations());

    for (int a = 0; a < kDim; ++a) {
        for (int b = a + 1; b < kDim; ++b) {
            ++report.brackets_checked;
            double dev = 0.0;
            for (int k = 0; k < kDim; ++k) {
                dev = std::max(dev, std::abs(table(a, b, k) - derived(a, b, k)));
            }
            report.derivation_error = std::max(report.derivation_error, dev);
            if (dev > tol) {
                note_failure(kGenerators[a], kGenerators[b], dev);
            }
        }
    }

    for (int a = 0; a < kDim; ++a) {
        for (int b = 0; b < kDim; ++b) {
            for (int k = 0; k < kDim; ++k) {
                report.antisymmetry_error =
                    std::max(report.antisymmetry_error, std::abs(table(a, b, k) + table(b, a, k)));
            }
        }
    }

    // [a,[b,c]] + [b,[c,a]] + [c,[a,b]] = 0
    for (Generator a : kGenerators) {
        for (Generator b : kGenerators) {
            for (Generator c : kGenerators) {
                const AlgebraElement ga = gen(a);
                const AlgebraElement gb = gen(b);
                const AlgebraElement gc = gen(c);
                const AlgebraElement j = table.bracket(ga, table.bracket(gb, gc)) +
                                         table.bracket(gb, table.bracket(gc, ga)) +
                                         table.bracket(gc, table.bracket(ga, gb));
                report.jacobi_error = std::max(report.jacobi_error, j.max_abs());
            }
        }
    }
    return report;
}

}  // namespace dysonforge::liealg

#include "dysonforge/group.hpp"

#include "dysonforge/errors.hpp"
#include "dysonforge/expm.hpp"

#include <fmt/format.h>

#include <cmath>

namespace dysonforge::liealg {

namespace {

bool commute_exactly(const AlgebraElement& x, const AlgebraElement& y)
{
    return bracket(x, y).is_exact_zero();
}

bool same_scale(const Factor& a, const Factor& b)
{
    if (a.scale == b.scale) {
        return true;
    }
    return dynamic_cast<const ConstantPath*>(a.scale.get()) != nullptr &&
           dynamic_cast<const ConstantPath*>(b.scale.get()) != nullptr;
}

bool is_trivial(const Factor& f)
{
    if (f.weight == Complex(0.0, 0.0) || f.generator.is_exact_zero()) {
        return true;
    }
    const auto* c = dynamic_cast<const ConstantPath*>(f.scale.get());
    return c != nullptr && c->value() == 0.0;
}

// exp(w_i s_i q_i)·exp(w_j s_j q_j) = exp(s (w_i q_i + w_j q_j)) for a shared s, or the constant
// product folded into a unit scale.
Factor merge(const Factor& a, const Factor& b)
{
    Factor m;
    if (a.scale == b.scale) {
        m.generator = a.weight * a.generator + b.weight * b.generator;
        m.scale = a.scale;
    } else {
        const double sa = a.scale->at(0.0).value;
        const double sb = b.scale->at(0.0).value;
        m.generator = (a.weight * sa) * a.generator + (b.weight * sb) * b.generator;
        m.scale = constant_path(1.0);
    }
    m.weight = 1.0;
    m.label = a.label == b.label ? a.label : a.label + "*" + b.label;
    return m;
}

}  // namespace

std::string ConstantPath::describe() const { return fmt::format("const({:.17g})", value_); }

ScalarPathPtr constant_path(double value) { return std::make_shared<ConstantPath>(value); }

ScalarPathPtr function_path(std::function<Sample(double)> fn, std::string name)
{
    return std::make_shared<FunctionPath>(std::move(fn), std::move(name));
}

GroupElement GroupElement::exp(const AlgebraElement& generator, ScalarPathPtr scale, Complex weight,
                               std::string label)
{
    return GroupElement({Factor{generator, weight, std::move(scale), std::move(label)}});
}

GroupElement GroupElement::exp_constant(const AlgebraElement& exponent, std::string label)
{
    return exp(exponent, constant_path(1.0), 1.0, std::move(label));
}

GroupElement GroupElement::operator*(const GroupElement& rhs) const
{
    std::vector<Factor> out = factors_;
    out.insert(out.end(), rhs.factors_.begin(), rhs.factors_.end());
    return GroupElement(std::move(out));
}

GroupElement GroupElement::inverse() const
{
    std::vector<Factor> out(factors_.rbegin(), factors_.rend());
    for (Factor& f : out) {
        f.weight = -f.weight;
    }
    return GroupElement(std::move(out));
}

GroupElement GroupElement::dagger() const
{
    std::vector<Factor> out(factors_.rbegin(), factors_.rend());
    for (Factor& f : out) {
        f.weight = std::conj(f.weight);
        f.generator = f.generator.adjoint();
    }
    return GroupElement(std::move(out));
}

GroupElement GroupElement::power(int n) const
{
    if (n == 0 || factors_.empty()) {
        return {};
    }
    if (factors_.size() == 1) {
        Factor f = factors_.front();
        f.weight *= static_cast<double>(n);
        return GroupElement({f});
    }
    const GroupElement base = n > 0 ? *this : inverse();
    std::vector<Factor> out;
    out.reserve(factors_.size() * static_cast<std::size_t>(std::abs(n)));
    for (int k = 0; k < std::abs(n); ++k) {
        out.insert(out.end(), base.factors_.begin(), base.factors_.end());
    }
    return GroupElement(std::move(out));
}

GroupElement GroupElement::simplified() const
{
    std::vector<Factor> fs;
    for (const Factor& f : factors_) {
        if (!is_trivial(f)) {
            fs.push_back(f);
        }
    }
    bool changed = true;
    while (changed) {
        changed = false;
        for (std::size_t i = 0; i < fs.size() && !changed; ++i) {
            for (std::size_t j = i + 1; j < fs.size(); ++j) {
                if (!commute_exactly(fs[i].generator, fs[j].generator)) {
                    // fs[j] cannot move past fs[i]; later ones still may if they commute.
                    continue;
                }
                bool clear = same_scale(fs[i], fs[j]);
                for (std::size_t m = i + 1; clear && m < j; ++m) {
                    clear = commute_exactly(fs[m].generator, fs[j].generator);
                }
                if (!clear) {
                    continue;
                }
                fs[i] = merge(fs[i], fs[j]);
                fs.erase(fs.begin() + static_cast<std::ptrdiff_t>(j));
                if (is_trivial(fs[i])) {
                    fs.erase(fs.begin() + static_cast<std::ptrdiff_t>(i));
                }
                changed = true;
                break;
            }
        }
    }
    return GroupElement(std::move(fs));
}

void GroupElement::check_finite(double t) const
{
    for (std::size_t j = 0; j < factors_.size(); ++j) {
        const Factor& f = factors_[j];
        const Sample s = f.scale->at(t);
        if (!std::isfinite(s.value) || !std::isfinite(s.rate)) {
            throw NumericalError(fmt::format("factor {} ({}, scale {}) is not finite at t = {:.17g}",
                                             j, f.label.empty() ? to_string(f.generator) : f.label,
                                             f.scale->describe(), t));
        }
    }
}

AdMatrix GroupElement::adjoint(double t) const
{
    check_finite(t);
    AdMatrix ad = AdMatrix::Identity();
    for (const Factor& f : factors_) {
        const Complex c = f.coefficient(t);
        if (c == Complex(0.0, 0.0)) {
            continue;
        }
        ad = ad * linalg::expm(c * ad_matrix(f.generator));
    }
    return ad;
}

AlgebraElement GroupElement::conjugate(const AlgebraElement& x, double t) const
{
    if (factors_.empty()) {
        return x;
    }
    return AlgebraElement(adjoint(t) * x.coeffs());
}

AlgebraElement GroupElement::left_log_derivative(double t) const
{
    check_finite(t);
    AlgebraElement out;
    AdMatrix prefix = AdMatrix::Identity();
    for (const Factor& f : factors_) {
        const Complex rate = f.rate(t);
        if (rate != Complex(0.0, 0.0)) {
            out += AlgebraElement(rate * (prefix * f.generator.coeffs()));
        }
        const Complex c = f.coefficient(t);
        if (c != Complex(0.0, 0.0)) {
            prefix = prefix * linalg::expm(c * ad_matrix(f.generator));
        }
    }
    return out;
}

AlgebraPath constant_algebra_path(const AlgebraElement& x)
{
    return {[x](double) { return x; }, [](double) { return AlgebraElement::zero(); }};
}

AlgebraPath conjugate_path(const GroupElement& g, const AlgebraPath& x)
{
    AlgebraPath out;
    out.value = [g, x](double t) { return g.conjugate(x.value(t), t); };
    out.rate = [g, x](double t) {
        const AlgebraElement gx = g.conjugate(x.value(t), t);
        return bracket(g.left_log_derivative(t), gx) + g.conjugate(x.rate(t), t);
    };
    return out;
}

}  // namespace dysonforge::liealg

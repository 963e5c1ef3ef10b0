#pragma once

// Group elements kept as ordered products of exponentials exp(w·s(t)·q).
// Nothing here ever takes a logarithm or merges factors through BCH; the only
// rewriting is exact (adjacent exponents that commute exactly and share a scale).

#include "dysonforge/liealg.hpp"

#include <functional>
#include <memory>
#include <span>
#include <string>
#include <vector>

namespace dysonforge::liealg {

/// Value and first time derivative of a real scalar function at one instant.
struct Sample {
    double value = 0.0;
    double rate = 0.0;
};

class ScalarPath {
public:
    virtual ~ScalarPath() = default;
    virtual Sample at(double t) const = 0;
    virtual std::string describe() const = 0;
};

using ScalarPathPtr = std::shared_ptr<const ScalarPath>;

class ConstantPath final : public ScalarPath {
public:
    explicit ConstantPath(double value) : value_(value) {}
    Sample at(double) const override { return {value_, 0.0}; }
    std::string describe() const override;
    double value() const { return value_; }

private:
    double value_;
};

class FunctionPath final : public ScalarPath {
public:
    FunctionPath(std::function<Sample(double)> fn, std::string name)
        : fn_(std::move(fn)), name_(std::move(name))
    {
    }
    Sample at(double t) const override { return fn_(t); }
    std::string describe() const override { return name_; }

private:
    std::function<Sample(double)> fn_;
    std::string name_;
};

ScalarPathPtr constant_path(double value);
ScalarPathPtr function_path(std::function<Sample(double)> fn, std::string name);

/// exp(weight · scale(t) · generator).
struct Factor {
    AlgebraElement generator;
    Complex weight{1.0, 0.0};
    ScalarPathPtr scale;
    std::string label;

    Complex coefficient(double t) const { return weight * scale->at(t).value; }
    Complex rate(double t) const { return weight * scale->at(t).rate; }
};

class GroupElement {
public:
    GroupElement() = default;  // identity
    explicit GroupElement(std::vector<Factor> factors) : factors_(std::move(factors)) {}

    static GroupElement exp(const AlgebraElement& generator, ScalarPathPtr scale,
                            Complex weight = 1.0, std::string label = {});
    /// exp(exponent) with a time-independent exponent.
    static GroupElement exp_constant(const AlgebraElement& exponent, std::string label = {});

    std::span<const Factor> factors() const { return factors_; }
    std::size_t size() const { return factors_.size(); }
    bool is_identity() const { return factors_.empty(); }

    /// Concatenation: (*this)·rhs.
    GroupElement operator*(const GroupElement& rhs) const;

    /// Reversed factors, negated weights.
    GroupElement inverse() const;
    /// Reversed factors, conjugated weights and generators.
    GroupElement dagger() const;
    /// n-fold repetition (inverse for n < 0); a single factor gets its weight scaled instead.
    GroupElement power(int n) const;
    /// Exact rewriting: merges factors that share a scale path and whose generators commute
    /// exactly with each other and with everything in between; drops zero exponents.
    GroupElement simplified() const;

    /// Ad(G) = Π exp(c_j ad q_j) on coefficient vectors.
    AdMatrix adjoint(double t = 0.0) const;
    /// G X G⁻¹.
    AlgebraElement conjugate(const AlgebraElement& x, double t = 0.0) const;
    /// (∂t G) G⁻¹ = Σ_j ċ_j Ad(prefix_{<j}) q_j.
    AlgebraElement left_log_derivative(double t) const;

    /// Throws NumericalError naming the first factor whose coefficient is not finite at t.
    void check_finite(double t) const;

private:
    std::vector<Factor> factors_;
};

inline AlgebraElement conjugate(const GroupElement& g, const AlgebraElement& x, double t = 0.0)
{
    return g.conjugate(x, t);
}
inline GroupElement inverse(const GroupElement& g) { return g.inverse(); }
inline GroupElement dagger(const GroupElement& g) { return g.dagger(); }
inline AlgebraElement left_log_derivative(const GroupElement& g, double t)
{
    return g.left_log_derivative(t);
}

/// Time-indexed algebra element with its time derivative.
struct AlgebraPath {
    std::function<AlgebraElement(double)> value;
    std::function<AlgebraElement(double)> rate;

    AlgebraElement operator()(double t) const { return value(t); }
};

/// Constant path, zero rate.
AlgebraPath constant_algebra_path(const AlgebraElement& x);
/// t ↦ G(t) X(t) G(t)⁻¹ with rate [L, GXG⁻¹] + G Ẋ G⁻¹, L the left log-derivative.
AlgebraPath conjugate_path(const GroupElement& g, const AlgebraPath& x);

}  // namespace dysonforge::liealg

#pragma once

// Hand-rolled generators and small helpers shared by the test binaries.

#include "dysonforge/liealg.hpp"

#include <random>

namespace testing_support {

using dysonforge::liealg::AlgebraElement;
using dysonforge::liealg::Coefficients;
using dysonforge::liealg::Complex;
using dysonforge::liealg::Generator;

class Draw {
public:
    explicit Draw(unsigned seed) : rng_(seed) {}

    double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }
    int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }
    bool coin() { return integer(0, 1) == 1; }

    /// Complex coefficients on all ten generators.
    AlgebraElement element(double scale = 1.0)
    {
        Coefficients c;
        for (int k = 0; k < dysonforge::liealg::kDim; ++k) {
            c[k] = Complex(uniform(-scale, scale), uniform(-scale, scale));
        }
        return AlgebraElement(c);
    }

    /// Real coefficients, i.e. a Hermitian element.
    AlgebraElement hermitian(double scale = 1.0)
    {
        Coefficients c;
        for (int k = 0; k < dysonforge::liealg::kDim; ++k) {
            c[k] = uniform(-scale, scale);
        }
        return AlgebraElement(c);
    }

    /// Real combination of K1..K4.
    AlgebraElement k_span(double scale = 1.0)
    {
        using namespace dysonforge::liealg;
        return uniform(-scale, scale) * gen(K1) + uniform(-scale, scale) * gen(K2) +
               uniform(-scale, scale) * gen(K3) + uniform(-scale, scale) * gen(K4);
    }

    Generator generator() { return dysonforge::liealg::kGenerators[static_cast<std::size_t>(integer(0, 9))]; }

    std::mt19937_64& engine() { return rng_; }

private:
    std::mt19937_64 rng_;
};

inline double distance(const AlgebraElement& a, const AlgebraElement& b) { return (a - b).max_abs(); }

}  // namespace testing_support

#pragma once

// Matrix exponential through Eigen's MatrixFunctions module (scaling and squaring with Padé
// approximants), with argument checks. Works for any dense Eigen matrix with real or complex scalars.

#include <Eigen/Dense>
#include <unsupported/Eigen/MatrixFunctions>

#include <stdexcept>

namespace dysonforge::linalg {

template <typename Derived>
typename Derived::PlainObject expm(const Eigen::MatrixBase<Derived>& input)
{
    using Matrix = typename Derived::PlainObject;
    const Matrix a = input;
    if (a.rows() != a.cols()) {
        throw std::invalid_argument("expm: matrix must be square");
    }
    if (!a.allFinite()) {
        throw std::domain_error("expm: non-finite matrix entry");
    }
    return a.exp();
}

}  // namespace dysonforge::linalg

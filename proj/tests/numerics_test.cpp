#include "doctest.h"
#include "support.hpp"

#include "dysonforge/expm.hpp"
#include "dysonforge/ode.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>

using namespace dysonforge;
using testing_support::Draw;

TEST_CASE("expm against eigendecomposition of Hermitian matrices")
{
    Draw draw(3);
    for (double scale : {1e-3, 0.1, 1.0, 5.0, 40.0}) {
        Eigen::MatrixXcd a(6, 6);
        for (int i = 0; i < 6; ++i) {
            for (int j = 0; j < 6; ++j) {
                a(i, j) = {draw.uniform(-scale, scale), draw.uniform(-scale, scale)};
            }
        }
        const Eigen::MatrixXcd h = 0.5 * (a + a.adjoint());
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h);
        const Eigen::MatrixXcd oracle =
            es.eigenvectors() * es.eigenvalues().cast<std::complex<double>>().unaryExpr([](std::complex<double> v) {
                return std::exp(std::complex<double>(0.0, 1.0) * v);
            }).asDiagonal() * es.eigenvectors().adjoint();
        const Eigen::MatrixXcd u = linalg::expm(Eigen::MatrixXcd(std::complex<double>(0.0, 1.0) * h));
        CHECK((u - oracle).cwiseAbs().maxCoeff() < 1e-12 * std::max(1.0, scale));
    }
}

TEST_CASE("expm(A) expm(-A) is the identity")
{
    Draw draw(4);
    for (int trial = 0; trial < 10; ++trial) {
        Eigen::MatrixXd a(5, 5);
        for (int i = 0; i < 5; ++i) {
            for (int j = 0; j < 5; ++j) {
                a(i, j) = draw.uniform(-1.5, 1.5);
            }
        }
        const Eigen::MatrixXd p = linalg::expm(a) * linalg::expm(Eigen::MatrixXd(-a));
        CHECK((p - Eigen::MatrixXd::Identity(5, 5)).cwiseAbs().maxCoeff() < 1e-12);
    }
    Eigen::Matrix2d nil;
    nil << 0.0, 1.0, 0.0, 0.0;
    const Eigen::Matrix2d e = linalg::expm(nil);
    CHECK(e(0, 1) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(e(0, 0) == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("Dormand-Prince: linear decay and harmonic motion")
{
    std::vector<double> times;
    for (int i = 0; i <= 50; ++i) {
        times.push_back(0.2 * i);
    }
    using V = Eigen::VectorXd;
    const ode::Rhs<V> decay = [](double, const V& y) { return V(-0.7 * y); };
    const auto s = ode::integrate<V>(decay, V::Constant(1, 2.0), times);
    for (std::size_t i = 0; i < times.size(); ++i) {
        CHECK(s.y[i][0] == doctest::Approx(2.0 * std::exp(-0.7 * times[i])).epsilon(1e-9));
    }

    const ode::Rhs<V> sho = [](double, const V& y) {
        V d(2);
        d << y[1], -4.0 * y[0];
        return d;
    };
    V y0(2);
    y0 << 1.0, 0.0;
    const auto o = ode::integrate<V>(sho, y0, times);
    for (std::size_t i = 0; i < times.size(); ++i) {
        CHECK(std::abs(o.y[i][0] - std::cos(2.0 * times[i])) < 1e-8);
        CHECK(std::abs(o.dy[i][1] + 4.0 * o.y[i][0]) < 1e-12);
    }
}

TEST_CASE("Dormand-Prince: guards and bad input")
{
    using V = Eigen::VectorXd;
    const ode::Rhs<V> grow = [](double, const V& y) { return V(y); };
    CHECK_THROWS_AS(ode::integrate<V>(grow, V::Constant(1, 1.0), {0.0, 0.0}), DomainError);
    const ode::Guard<V> bounded = [](double, const V& y) { return y[0] < 10.0; };
    CHECK_THROWS_AS(ode::integrate<V>(grow, V::Constant(1, 1.0), {0.0, 1.0, 2.0, 3.0}, {}, bounded), NumericalError);
}

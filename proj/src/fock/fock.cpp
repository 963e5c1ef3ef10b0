#include "dysonforge/fock.hpp"

#include "dysonforge/errors.hpp"
#include "dysonforge/expm.hpp"
#include "dysonforge/ode.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>

namespace dysonforge::fock {

namespace {

using liealg::Generator;
using liealg::kDim;

constexpr Complex kI{0.0, 1.0};

double max_abs(const Matrix& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

Sparse kron(const Matrix& a, const Matrix& b)
{
    std::vector<Eigen::Triplet<Complex>> triplets;
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
        for (Eigen::Index j = 0; j < a.cols(); ++j) {
            if (a(i, j) == Complex(0.0)) {
                continue;
            }
            for (Eigen::Index k = 0; k < b.rows(); ++k) {
                for (Eigen::Index l = 0; l < b.cols(); ++l) {
                    if (b(k, l) != Complex(0.0)) {
                        triplets.emplace_back(i * b.rows() + k, j * b.cols() + l, a(i, j) * b(k, l));
                    }
                }
            }
        }
    }
    Sparse out(a.rows() * b.rows(), a.cols() * b.cols());
    out.setFromTriplets(triplets.begin(), triplets.end());
    return out;
}

bool all_real(const AlgebraElement& x) { return x.coeffs().imag().cwiseAbs().maxCoeff() == 0.0; }
bool all_imaginary(const AlgebraElement& x) { return x.coeffs().real().cwiseAbs().maxCoeff() == 0.0; }

std::vector<double> key_of(const AlgebraElement& x)
{
    std::vector<double> key;
    key.reserve(2 * kDim);
    for (int k = 0; k < kDim; ++k) {
        key.push_back(x.coeffs()[k].real());
        key.push_back(x.coeffs()[k].imag());
    }
    return key;
}

bool shells_preserved(const GroupElement& g)
{
    return std::all_of(g.factors().begin(), g.factors().end(),
                       [](const liealg::Factor& f) { return FockRep::preserves_shells(f.generator); });
}

}  // namespace

FockRep::FockRep(int n, int guard) : n_(n), guard_(guard)
{
    if (n < 8) {
        throw DomainError(fmt::format("build_rep: N = {} is below the minimum 8", n));
    }
    if (guard < 1 || guard > n / 4) {
        throw DomainError(fmt::format("build_rep: N_guard = {} outside [1, {}]", guard, n / 4));
    }

    Matrix a = Matrix::Zero(n, n);
    for (int k = 1; k < n; ++k) {
        a(k - 1, k) = std::sqrt(static_cast<double>(k));
    }
    const Matrix ad = a.adjoint();
    const Matrix x = (a + ad) / std::sqrt(2.0);
    const Matrix p = kI * (ad - a) / std::sqrt(2.0);
    const Matrix id = Matrix::Identity(n, n);

    const Matrix kplus = 0.5 * (p * p + x * x);
    const Matrix kminus = 0.5 * (p * p - x * x);
    const Matrix kzero = 0.5 * (x * p + p * x);

    generators_.resize(kDim);
    generators_[liealg::index(Generator::KplusX)] = kron(kplus, id);
    generators_[liealg::index(Generator::KminusX)] = kron(kminus, id);
    generators_[liealg::index(Generator::K0X)] = kron(kzero, id);
    generators_[liealg::index(Generator::KplusY)] = kron(id, kplus);
    generators_[liealg::index(Generator::KminusY)] = kron(id, kminus);
    generators_[liealg::index(Generator::K0Y)] = kron(id, kzero);
    const Sparse xpy = kron(x, p);
    const Sparse ypx = kron(p, x);
    const Sparse xy = kron(x, x);
    const Sparse pp = kron(p, p);
    generators_[liealg::index(Generator::Jplus)] = 0.5 * (xpy + ypx);
    generators_[liealg::index(Generator::Jminus)] = 0.5 * (xpy - ypx);
    generators_[liealg::index(Generator::Iplus)] = 0.5 * (xy + pp);
    generators_[liealg::index(Generator::Iminus)] = 0.5 * (xy - pp);
    for (auto& g : generators_) {
        g.prune(Complex(0.0), 1e-300);
    }

    for (int s = 0; s <= shell_limit(); ++s) {
        for (int nx = 0; nx <= s; ++nx) {
            interior_.push_back(nx * n + (s - nx));
        }
    }
    for (const auto& g : generators_) {
        interior_generators_.push_back(restrict(Matrix(g)));
    }
}

FockRep build_rep(int n, int guard) { return FockRep(n, guard); }

Sparse FockRep::box_matrix(const AlgebraElement& x) const
{
    Sparse out(box_dim(), box_dim());
    for (int k = 0; k < kDim; ++k) {
        if (x.coeffs()[k] != Complex(0.0)) {
            out += x.coeffs()[k] * generators_[k];
        }
    }
    return out;
}

Matrix FockRep::interior_matrix(const AlgebraElement& x) const
{
    Matrix out = Matrix::Zero(interior_dim(), interior_dim());
    for (int k = 0; k < kDim; ++k) {
        if (x.coeffs()[k] != Complex(0.0)) {
            out += x.coeffs()[k] * interior_generators_[k];
        }
    }
    return out;
}

Matrix FockRep::restrict(const Matrix& box) const
{
    if (box.rows() != box_dim() || box.cols() != box_dim()) {
        throw DomainError("FockRep::restrict: matrix is not box-sized");
    }
    const int m = interior_dim();
    Matrix out(m, m);
    for (int j = 0; j < m; ++j) {
        for (int i = 0; i < m; ++i) {
            out(i, j) = box(interior_[i], interior_[j]);
        }
    }
    return out;
}

bool FockRep::preserves_shells(const AlgebraElement& x)
{
    for (Generator g : liealg::kGenerators) {
        if (g == liealg::K1 || g == liealg::K2 || g == liealg::K3 || g == liealg::K4) {
            continue;
        }
        if (x[g] != Complex(0.0)) {
            return false;
        }
    }
    return true;
}

Matrix FockRep::shell_block(const AlgebraElement& x, int s) const
{
    Matrix out = Matrix::Zero(s + 1, s + 1);
    for (int k = 0; k < kDim; ++k) {
        if (x.coeffs()[k] != Complex(0.0)) {
            out += x.coeffs()[k] * interior_generators_[k].block(shell_offset(s), shell_offset(s), s + 1, s + 1);
        }
    }
    return out;
}

const FockRep::Spectral* FockRep::spectral(const AlgebraElement& q) const
{
    const bool real = all_real(q);
    if (!real && !all_imaginary(q)) {
        return nullptr;
    }
    auto key = key_of(q);
    auto it = spectral_cache_.find(key);
    if (it != spectral_cache_.end()) {
        return it->second.get();
    }
    const AlgebraElement herm = real ? q : AlgebraElement(q.coeffs() / kI);
    auto sp = std::make_unique<Spectral>();
    for (int s = 0; s <= shell_limit(); ++s) {
        Eigen::SelfAdjointEigenSolver<Matrix> es(shell_block(herm, s));
        sp->vectors.push_back(es.eigenvectors());
        Eigen::VectorXcd ev = es.eigenvalues().cast<Complex>();
        sp->eigenvalues.push_back(real ? ev : Eigen::VectorXcd(kI * ev));
    }
    return spectral_cache_.emplace(std::move(key), std::move(sp)).first->second.get();
}

namespace {

Complex checked_coefficient(const liealg::Factor& f, std::size_t index, double t)
{
    const Complex c = f.coefficient(t);
    if (!std::isfinite(c.real()) || !std::isfinite(c.imag())) {
        throw NumericalError(fmt::format("realize: factor {} ({}) has a non-finite coefficient at t = {:.17g}",
                                         index, f.label, t));
    }
    return c;
}

void require_finite(const Matrix& m, const liealg::Factor& f, std::size_t index, double t)
{
    if (!m.allFinite()) {
        throw NumericalError(fmt::format("realize: factor {} ({}) overflows at t = {:.17g} (coefficient {:.6g}{:+.6g}i)",
                                         index, f.label, t, f.coefficient(t).real(), f.coefficient(t).imag()));
    }
}

}  // namespace

Matrix FockRep::realize_shells(const GroupElement& g, double t) const
{
    const auto factors = g.factors();
    std::vector<Complex> coeff(factors.size());
    std::vector<const Spectral*> spectra(factors.size());
    for (std::size_t j = 0; j < factors.size(); ++j) {
        coeff[j] = checked_coefficient(factors[j], j, t);
        spectra[j] = spectral(factors[j].generator);
    }
    Matrix out = Matrix::Zero(interior_dim(), interior_dim());
    for (int s = 0; s <= shell_limit(); ++s) {
        Matrix block = Matrix::Identity(s + 1, s + 1);
        for (std::size_t j = 0; j < factors.size(); ++j) {
            Matrix e;
            if (const Spectral* sp = spectra[j]) {
                const Eigen::VectorXcd d = (coeff[j] * sp->eigenvalues[s]).array().exp();
                e = sp->vectors[s] * d.asDiagonal() * sp->vectors[s].adjoint();
            } else {
                e = linalg::expm(Matrix(coeff[j] * shell_block(factors[j].generator, s)));
            }
            block = block * e;
            require_finite(block, factors[j], j, t);
        }
        out.block(shell_offset(s), shell_offset(s), s + 1, s + 1) = block;
    }
    return out;
}

Matrix FockRep::realize_box(const GroupElement& g, double t) const
{
    Matrix out = Matrix::Identity(box_dim(), box_dim());
    const auto factors = g.factors();
    for (std::size_t j = 0; j < factors.size(); ++j) {
        const Complex c = checked_coefficient(factors[j], j, t);
        out = out * linalg::expm(Matrix(c * Matrix(box_matrix(factors[j].generator))));
        require_finite(out, factors[j], j, t);
    }
    return restrict(out);
}

Matrix FockRep::realize(const GroupElement& g, double t) const
{
    return shells_preserved(g) ? realize_shells(g, t) : realize_box(g, t);
}

double commutator_deviation(const FockRep& rep)
{
    double worst = 0.0;
    for (int a = 0; a < kDim; ++a) {
        for (int b = a + 1; b < kDim; ++b) {
            const Sparse& ma = rep.generator(liealg::kGenerators[a]);
            const Sparse& mb = rep.generator(liealg::kGenerators[b]);
            const Sparse comm = Sparse(ma * mb) - Sparse(mb * ma);
            const Matrix lhs = rep.restrict(Matrix(comm));
            const Matrix rhs = rep.interior_matrix(
                liealg::bracket(liealg::gen(liealg::kGenerators[a]), liealg::gen(liealg::kGenerators[b])));
            worst = std::max(worst, max_abs(lhs - rhs));
        }
    }
    return worst;
}

MetricCheck metric_check(const GroupElement& eta, const FockRep& rep, double t)
{
    const Matrix m = rep.realize(eta, t);
    const Matrix minv = rep.realize(eta.inverse(), t);
    const Matrix rho = m.adjoint() * m;
    MetricCheck out;
    out.hermiticity_deviation = max_abs(rho - rho.adjoint()) / std::max(max_abs(rho), 1e-300);
    const Eigen::VectorXd s = Eigen::BDCSVD<Matrix>(m).singularValues();
    const Eigen::VectorXd sinv = Eigen::BDCSVD<Matrix>(minv).singularValues();
    out.max_eigenvalue = s(0) * s(0);
    out.min_eigenvalue = 1.0 / (sinv(0) * sinv(0));
    return out;
}

std::vector<double> metric_fingerprint(const GroupElement& eta, const FockRep& rep, double t)
{
    // Eigenvalues rather than singular values: the spectra are highly degenerate and the
    // divide-and-conquer SVD loses digits inside clusters.
    const Matrix m = rep.realize(eta, t);
    const Matrix minv = rep.realize(eta.inverse(), t);
    const Eigen::VectorXd e = Eigen::SelfAdjointEigenSolver<Matrix>(m.adjoint() * m, Eigen::EigenvaluesOnly).eigenvalues();
    const Eigen::VectorXd einv =
        Eigen::SelfAdjointEigenSolver<Matrix>(minv * minv.adjoint(), Eigen::EigenvaluesOnly).eigenvalues();
    const auto n = e.size();
    std::vector<double> direct(n), inverted(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        direct[i] = std::log(e(i));
        inverted[i] = -std::log(einv(i));
    }
    std::sort(direct.begin(), direct.end());
    std::sort(inverted.begin(), inverted.end());
    // Large eigenvalues from η†η, small ones from η⁻¹η⁻† = (η†η)⁻¹: each side is accurate where it is large.
    std::vector<double> out(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        out[i] = direct[i] >= 0.0 ? direct[i] : inverted[i];
    }
    return out;
}

double fingerprint_distance(const std::vector<double>& a, const std::vector<double>& b)
{
    if (a.size() != b.size()) {
        return std::numeric_limits<double>::infinity();
    }
    double worst = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        worst = std::max(worst, std::abs(a[i] - b[i]));
    }
    return worst;
}

namespace {

// [O, h] on the block; h keeps the block closed, so block(O)·block(h) is the block of the product.
Matrix block_commutator(const Matrix& o, const AlgebraElement& h, const FockRep& rep)
{
    if (FockRep::preserves_shells(h)) {
        const Matrix hm = rep.interior_matrix(h);
        return o * hm - hm * o;
    }
    throw DomainError("lr_residual: h must lie in span{K1..K4} for a block-level commutator");
}

double normalised(const Matrix& residual, const Matrix& o, const AlgebraElement& h, const FockRep& rep)
{
    const double scale = max_abs(o) * max_abs(rep.interior_matrix(h));
    const double r = max_abs(residual);
    return scale > 0.0 ? r / scale : r;
}

}  // namespace

std::vector<double> lr_residual(const liealg::AlgebraPath& o, const AlgebraFn& h, const FockRep& rep,
                                const auxode::Grid& grid)
{
    std::vector<double> out;
    out.reserve(grid.size());
    for (double t : grid) {
        const AlgebraElement ht = h(t);
        const Matrix om = rep.interior_matrix(o.value(t));
        const Matrix comm = block_commutator(om, ht, rep);
        const Matrix residual = kI * rep.interior_matrix(o.rate(t)) + comm;
        out.push_back(normalised(residual, om, ht, rep));
    }
    return out;
}

std::vector<double> lr_residual(const GroupElement& o, const AlgebraFn& h, const FockRep& rep,
                                const auxode::Grid& grid)
{
    std::vector<double> out;
    out.reserve(grid.size());
    for (double t : grid) {
        const AlgebraElement ht = h(t);
        const Matrix om = rep.realize(o, t);
        const Matrix dot = rep.interior_matrix(o.left_log_derivative(t)) * om;
        const Matrix residual = kI * dot + block_commutator(om, ht, rep);
        out.push_back(normalised(residual, om, ht, rep));
    }
    return out;
}

SpectrumDrift invariant_spectrum_drift(const liealg::AlgebraPath& invariant, const FockRep& rep,
                                       const auxode::Grid& grid, int lowest)
{
    SpectrumDrift out;
    const int count = std::min(lowest, rep.interior_dim());
    for (double t : grid) {
        const Matrix m = rep.interior_matrix(invariant.value(t));
        const Matrix herm = 0.5 * (m + m.adjoint());
        const Eigen::VectorXd ev = Eigen::SelfAdjointEigenSolver<Matrix>(herm, Eigen::EigenvaluesOnly).eigenvalues();
        std::vector<double> spectrum(ev.data(), ev.data() + count);
        if (!out.spectra.empty()) {
            for (int k = 0; k < count; ++k) {
                out.max_drift = std::max(out.max_drift, std::abs(spectrum[k] - out.spectra.front()[k]));
            }
        }
        out.t.push_back(t);
        out.spectra.push_back(std::move(spectrum));
    }
    return out;
}

void write_spectra_csv(std::ostream& os, const SpectrumDrift& drift)
{
    const std::size_t count = drift.spectra.empty() ? 0 : drift.spectra.front().size();
    os << "t";
    for (std::size_t k = 1; k <= count; ++k) {
        os << ",l" << k;
    }
    os << '\n';
    for (std::size_t i = 0; i < drift.t.size(); ++i) {
        os << fmt::format("{:.17g}", drift.t[i]);
        for (double v : drift.spectra[i]) {
            os << fmt::format(",{:.17g}", v);
        }
        os << '\n';
    }
}

Vector coherent_state(const FockRep& rep, Complex alpha, Complex beta)
{
    const int n = rep.n();
    Vector out(rep.interior_dim());
    for (int i = 0; i < rep.interior_dim(); ++i) {
        const int nx = rep.interior()[i] / n;
        const int ny = rep.interior()[i] % n;
        const double log_norm = 0.5 * (std::lgamma(nx + 1.0) + std::lgamma(ny + 1.0));
        out(i) = std::pow(alpha, nx) * std::pow(beta, ny) * std::exp(-log_norm);
    }
    return out / out.norm();
}

TdseCheck tdse_mapping(const GroupElement& eta, const AlgebraFn& big_h, const AlgebraFn& small_h,
                       const FockRep& rep, const auxode::Grid& grid, Complex alpha, Complex beta)
{
    if (grid.size() < 2) {
        throw DomainError("tdse_mapping: need at least two grid times");
    }
    const Vector psi0 = coherent_state(rep, alpha, beta);
    const Vector phi0 = rep.realize(eta, grid.front()) * psi0;

    ode::Options opt;
    opt.rtol = 1e-11;
    opt.atol = 1e-13;
    const ode::Rhs<Vector> fh = [&](double t, const Vector& y) -> Vector {
        return -kI * (rep.interior_matrix(big_h(t)) * y);
    };
    const ode::Rhs<Vector> fsmall = [&](double t, const Vector& y) -> Vector {
        return -kI * (rep.interior_matrix(small_h(t)) * y);
    };
    const auto psi = ode::integrate<Vector>(fh, psi0, grid, opt);
    const auto phi = ode::integrate<Vector>(fsmall, phi0, grid, opt);

    TdseCheck out;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const Vector mapped = rep.realize(eta, grid[i]) * psi.y[i];
        const Complex overlap = phi.y[i].dot(mapped);
        const double f = std::norm(overlap) / (phi.y[i].squaredNorm() * mapped.squaredNorm());
        out.t.push_back(grid[i]);
        out.fidelity.push_back(f);
        out.min_fidelity = std::min(out.min_fidelity, f);
    }
    return out;
}

double relative_distance(const Matrix& a, const Matrix& b)
{
    if (a.rows() != b.rows() || a.cols() != b.cols()) {
        return std::numeric_limits<double>::infinity();
    }
    return max_abs(a - b) / std::max(1.0, max_abs(b));
}

}  // namespace dysonforge::fock

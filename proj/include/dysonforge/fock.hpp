#pragma once

// Truncated two-mode number basis. States |n_x, n_y> with n_x, n_y < N, index n_x·N + n_y.
// The reported block is the set of complete total-occupation shells n_x + n_y ≤ N − 1 − N_guard.
// K₁..K₄ conserve total occupation, so on that block their matrices, and every group element
// built from them, are exact; the other six generators move between shells by two.

#include "dysonforge/auxode.hpp"
#include "dysonforge/group.hpp"

#include <Eigen/Sparse>

#include <iosfwd>
#include <map>
#include <memory>
#include <vector>

namespace dysonforge::fock {

using liealg::AlgebraElement;
using liealg::Complex;
using liealg::GroupElement;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using Sparse = Eigen::SparseMatrix<Complex>;

class FockRep {
public:
    /// N ≥ 8, 1 ≤ N_guard ≤ N/4.
    FockRep(int n, int guard);

    int n() const { return n_; }
    int guard() const { return guard_; }
    int box_dim() const { return n_ * n_; }
    int interior_dim() const { return static_cast<int>(interior_.size()); }
    /// Box indices of the reported block, shell by shell.
    const std::vector<int>& interior() const { return interior_; }
    /// Offset of shell s inside the block; shell s has s + 1 states.
    static int shell_offset(int s) { return s * (s + 1) / 2; }
    int shell_limit() const { return n_ - 1 - guard_; }

    const Sparse& generator(liealg::Generator g) const { return generators_[liealg::index(g)]; }
    Sparse box_matrix(const AlgebraElement& x) const;
    /// Principal block of the box matrix on the reported states.
    Matrix interior_matrix(const AlgebraElement& x) const;
    Matrix restrict(const Matrix& box) const;

    /// True when x lies in span{K₁, K₂, K₃, K₄}.
    static bool preserves_shells(const AlgebraElement& x);

    /// Product of factor exponentials at t, on the reported block. Shell-preserving products are
    /// formed on the block itself; anything else is formed on the full box and then restricted.
    Matrix realize(const GroupElement& g, double t) const;

private:
    // Per-shell eigendecomposition of a generator that is Hermitian or i·Hermitian.
    struct Spectral {
        std::vector<Matrix> vectors;
        std::vector<Eigen::VectorXcd> eigenvalues;
    };
    const Spectral* spectral(const AlgebraElement& q) const;
    Matrix shell_block(const AlgebraElement& x, int s) const;
    Matrix realize_shells(const GroupElement& g, double t) const;
    Matrix realize_box(const GroupElement& g, double t) const;

    int n_;
    int guard_;
    std::vector<Sparse> generators_;
    std::vector<int> interior_;
    std::vector<Matrix> interior_generators_;
    mutable std::map<std::vector<double>, std::unique_ptr<Spectral>> spectral_cache_;
};

FockRep build_rep(int n, int guard);

/// Largest |[M_a, M_b] − M([a,b])| over the 45 pairs on the reported block.
double commutator_deviation(const FockRep& rep);

struct MetricCheck {
    double min_eigenvalue = 0.0;
    double max_eigenvalue = 0.0;
    double hermiticity_deviation = 0.0;  ///< ‖ρ − ρ†‖ / ‖ρ‖ on the block
};
/// ρ = η†η. The smallest eigenvalue is taken as 1/σ_max(η⁻¹)² so it survives large condition numbers.
MetricCheck metric_check(const GroupElement& eta, const FockRep& rep, double t);

/// Sorted log-eigenvalues of η†η on the block.
std::vector<double> metric_fingerprint(const GroupElement& eta, const FockRep& rep, double t);
/// max_k |a_k − b_k|; infinity when the lengths differ.
double fingerprint_distance(const std::vector<double>& a, const std::vector<double>& b);

using AlgebraFn = std::function<AlgebraElement(double)>;

/// ‖i∂tO + [O, h]‖ / (‖O‖·‖h‖) per grid time, max-entry norms on the block.
/// The time derivative is analytic: the path rate for algebra elements and M(L)·O, L the left
/// log-derivative, for group elements.
std::vector<double> lr_residual(const liealg::AlgebraPath& o, const AlgebraFn& h, const FockRep& rep,
                                const auxode::Grid& grid);
std::vector<double> lr_residual(const GroupElement& o, const AlgebraFn& h, const FockRep& rep,
                                const auxode::Grid& grid);

struct SpectrumDrift {
    std::vector<double> t;
    std::vector<std::vector<double>> spectra;  ///< lowest eigenvalues per time, ascending
    double max_drift = 0.0;                    ///< max_{t,k} |λ_k(t) − λ_k(t₀)|
};
/// Eigenvalues of the Hermitian part of the block matrix of I(t).
SpectrumDrift invariant_spectrum_drift(const liealg::AlgebraPath& invariant, const FockRep& rep,
                                       const auxode::Grid& grid, int lowest = 10);
/// Columns t, l1..lk at 17 significant digits.
void write_spectra_csv(std::ostream& os, const SpectrumDrift& drift);

struct TdseCheck {
    std::vector<double> t;
    std::vector<double> fidelity;
    double min_fidelity = 1.0;
};
/// Evolves ψ under H and φ under h from φ(t₀) = η(t₀)ψ(t₀) and compares φ(t) with η(t)ψ(t)
/// up to a global phase. The initial state is a coherent state cut to the reported block.
TdseCheck tdse_mapping(const GroupElement& eta, const AlgebraFn& big_h, const AlgebraFn& small_h,
                       const FockRep& rep, const auxode::Grid& grid, Complex alpha = {0.6, 0.2},
                       Complex beta = {-0.3, 0.4});

/// Coherent-state amplitudes on the block, normalised.
Vector coherent_state(const FockRep& rep, Complex alpha, Complex beta);

/// max |a − b| / max(1, max |b|) on the block.
double relative_distance(const Matrix& a, const Matrix& b);

}  // namespace dysonforge::fock

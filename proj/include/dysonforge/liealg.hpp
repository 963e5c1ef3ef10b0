#pragma once

// The ten-generator quadratic algebra of two oscillator modes.
//
// Basis order (all generators Hermitian, ħ = 1):
//   K+x = (p_x² + x²)/2   K-x = (p_x² - x²)/2   K0x = {x, p_x}/2
//   K+y = (p_y² + y²)/2   K-y = (p_y² - y²)/2   K0y = {y, p_y}/2
//   J+  = (x p_y + y p_x)/2                     J-  = (x p_y - y p_x)/2
//   I+  = (x y + p_x p_y)/2                     I-  = (x y - p_x p_y)/2
// with the aliases K1 = K+x, K2 = K+y, K3 = I+, K4 = J-.

#include <Eigen/Dense>

#include <array>
#include <complex>
#include <optional>
#include <span>
#include <string>
#include <string_view>

namespace dysonforge::liealg {

using Complex = std::complex<double>;

inline constexpr int kDim = 10;
inline constexpr double kDefaultHermiticityTolerance = 1e-9;

using Coefficients = Eigen::Matrix<Complex, kDim, 1>;
using AdMatrix = Eigen::Matrix<Complex, kDim, kDim>;

enum class Generator : int {
    KplusX = 0,
    KminusX,
    K0X,
    KplusY,
    KminusY,
    K0Y,
    Jplus,
    Jminus,
    Iplus,
    Iminus,
};

inline constexpr Generator K1 = Generator::KplusX;
inline constexpr Generator K2 = Generator::KplusY;
inline constexpr Generator K3 = Generator::Iplus;
inline constexpr Generator K4 = Generator::Jminus;

inline constexpr std::array<Generator, kDim> kGenerators = {
    Generator::KplusX, Generator::KminusX, Generator::K0X,    Generator::KplusY,
    Generator::KminusY, Generator::K0Y,    Generator::Jplus,  Generator::Jminus,
    Generator::Iplus,  Generator::Iminus,
};

constexpr int index(Generator g) { return static_cast<int>(g); }

/// Canonical label ("K+x", "J-", ...).
std::string_view label(Generator g);
/// "K1".."K4" for aliased generators, empty otherwise.
std::string_view alias(Generator g);
/// Accepts canonical labels and the K1..K4 aliases.
std::optional<Generator> parse_generator(std::string_view text);

/// Complex coefficient vector over the Hermitian basis.
class AlgebraElement {
public:
    AlgebraElement() : coeffs_(Coefficients::Zero()) {}
    explicit AlgebraElement(const Coefficients& coeffs) : coeffs_(coeffs) {}

    static AlgebraElement basis(Generator g, Complex scale = 1.0);
    static AlgebraElement zero() { return AlgebraElement(); }

    const Coefficients& coeffs() const { return coeffs_; }
    Complex operator[](Generator g) const { return coeffs_[index(g)]; }
    Complex& operator[](Generator g) { return coeffs_[index(g)]; }

    /// Element-wise complex conjugate of the coefficients, i.e. the operator adjoint.
    AlgebraElement adjoint() const { return AlgebraElement(coeffs_.conjugate()); }

    double max_abs() const { return coeffs_.cwiseAbs().maxCoeff(); }
    /// True only when every coefficient is exactly zero.
    bool is_exact_zero() const;

    AlgebraElement& operator+=(const AlgebraElement& o)
    {
        coeffs_ += o.coeffs_;
        return *this;
    }
    AlgebraElement& operator-=(const AlgebraElement& o)
    {
        coeffs_ -= o.coeffs_;
        return *this;
    }
    AlgebraElement& operator*=(Complex s)
    {
        coeffs_ *= s;
        return *this;
    }

    friend AlgebraElement operator+(AlgebraElement a, const AlgebraElement& b) { return a += b; }
    friend AlgebraElement operator-(AlgebraElement a, const AlgebraElement& b) { return a -= b; }
    friend AlgebraElement operator-(AlgebraElement a) { return a *= -1.0; }
    friend AlgebraElement operator*(Complex s, AlgebraElement a) { return a *= s; }
    friend AlgebraElement operator*(AlgebraElement a, Complex s) { return a *= s; }
    friend AlgebraElement operator*(double s, AlgebraElement a) { return a *= s; }

private:
    Coefficients coeffs_;
};

/// Shorthand for basis elements: gen(K3) == AlgebraElement::basis(K3).
inline AlgebraElement gen(Generator g, Complex scale = 1.0) { return AlgebraElement::basis(g, scale); }

/// Human-readable sum, e.g. "(1+0i) K+x + (0+0.5i) I+".
std::string to_string(const AlgebraElement& x);

struct HermiticityCheck {
    bool hermitian = false;
    double residual = 0.0;  ///< max_k |Im coeff_k|
};

HermiticityCheck is_hermitian(const AlgebraElement& x, double tol = kDefaultHermiticityTolerance);
AlgebraElement hermitian_part(const AlgebraElement& x);
/// i·Im(coeffs): the part that violates Hermiticity.
AlgebraElement anti_hermitian_part(const AlgebraElement& x);

/// Antilinear PT action: conjugate coefficients, then flip K0x, K0y, I+, I-.
AlgebraElement pt_transform(const AlgebraElement& x);

/// [G_a, G_b] = Σ_k c(a, b, k) G_k.
class StructureConstants {
public:
    /// One bracket [a, b] = i·imag·G_k; the antisymmetric partner is implied.
    struct Entry {
        Generator a;
        Generator b;
        Generator k;
        double imag;
    };

    StructureConstants();
    static StructureConstants from_entries(std::span<const Entry> entries);
    /// The frozen table for the basis above.
    static const StructureConstants& standard();

    Complex operator()(int a, int b, int k) const { return table_[(a * kDim + b) * kDim + k]; }
    Complex& at(int a, int b, int k) { return table_[(a * kDim + b) * kDim + k]; }

    AlgebraElement bracket(const AlgebraElement& x, const AlgebraElement& y) const;
    AlgebraElement bracket(Generator a, Generator b) const;
    /// ad(X) as a matrix on coefficient vectors: ad(X)·coeffs(Y) = coeffs([X, Y]).
    AdMatrix ad_matrix(const AlgebraElement& x) const;

private:
    std::array<Complex, kDim * kDim * kDim> table_{};
};

AlgebraElement bracket(const AlgebraElement& x, const AlgebraElement& y);
AdMatrix ad_matrix(const AlgebraElement& x);

/// Independent derivation from the quadratic forms: for Weyl-symmetric quadratics
/// the commutator is i times the Poisson bracket, which closes on the ten forms.
StructureConstants derive_structure_constants();

/// A documented commutation relation [a, b] = result.
struct Relation {
    Generator a;
    Generator b;
    AlgebraElement result;
};

/// The six K1..K4 relations.
std::span<const Relation> k_subalgebra_relations();
/// The non-vanishing relations of the full ten-generator algebra; pairs absent here commute.
std::span<const Relation> extended_relations();

struct BracketMismatch {
    Generator a;
    Generator b;
    double deviation;
};

struct AlgebraReport {
    int brackets_checked = 0;
    double antisymmetry_error = 0.0;
    double jacobi_error = 0.0;
    double derivation_error = 0.0;  ///< max |table - derived|
    double relation_error = 0.0;    ///< max deviation from documented relations
    std::optional<BracketMismatch> first_failure;
    bool passed() const { return !first_failure && antisymmetry_error == 0.0 && jacobi_error <= 1e-14; }
};

/// Compares a table against the derivation and the documented relations, pair by pair
/// (a < b, 45 pairs), and evaluates antisymmetry and Jacobi over all index triples.
AlgebraReport verify_structure_constants(const StructureConstants& table, double tol = 1e-14);

/// "[K+x,I+]" or "[K+x,I+] (alias [K1,K3])".
std::string bracket_name(Generator a, Generator b);

}  // namespace dysonforge::liealg

#pragma once

// Iteration of two seed Dyson maps through A = η̃η⁻¹: gated series η⁽ⁿ⁾ = Aⁿη and η̃⁽ⁿ⁾ = Aⁿη̃,
// their Hermitian Hamiltonians, symmetry operators and combination arithmetic.

#include "dysonforge/fock.hpp"
#include "dysonforge/seeds.hpp"

#include "json.hpp"

#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace dysonforge::forge {

using liealg::AlgebraElement;
using liealg::AlgebraPath;
using liealg::Coefficients;
using liealg::GroupElement;

inline constexpr double kDefaultGateTolerance = 1e-6;
inline constexpr int kDefaultNmax = 5;

enum class Kind { Eta, EtaTilde };
std::string_view kind_name(Kind kind);  ///< "eta", "eta_tilde"

/// Shared constants applied to both seeds before building.
struct Bindings {
    std::optional<double> k;
    std::optional<double> x0;
};

struct ForgePair {
    seeds::Seed eta;
    seeds::Seed eta_tilde;
    GroupElement a;        ///< η̃η⁻¹, simplified
    GroupElement a_tilde;  ///< η⁻¹η̃, simplified
    auxode::Grid grid;

    /// Exponent p with map(kind, n) = Aᵖη: n for η, n + 1 for η̃.
    static int a_power(Kind kind, int n) { return kind == Kind::Eta ? n : n + 1; }
    /// Aⁿη or Aⁿη̃, as repetitions of A's factors.
    GroupElement map(Kind kind, int n) const;
    std::string label() const;
};

ForgePair make_pair(seeds::SeedFactory& factory, seeds::SeedSpec eta, seeds::SeedSpec eta_tilde,
                    const Bindings& bindings = {});
/// Throws DomainError when the seeds were built on different grids.
ForgePair make_pair(const seeds::Seed& eta, const seeds::Seed& eta_tilde, const auxode::Grid& eta_grid,
                    const auxode::Grid& eta_tilde_grid);

/// Anti-Hermitian size of X relative to max(1, ‖X‖).
double anti_hermitian_measure(const AlgebraElement& x);

struct GateResult {
    bool pass = false;
    double residual = 0.0;
    std::vector<double> residual_path;
    AlgebraElement worst_anti_hermitian;
    double worst_t = 0.0;
};
/// (S1): Hermiticity of A I_h̃ A⁻¹ over the grid.
GateResult gate_s1(const GroupElement& a, const AlgebraPath& i_h_tilde, const auxode::Grid& grid,
                   double tol = kDefaultGateTolerance);
/// (S2): Hermiticity of A⁻¹ I_h A.
GateResult gate_s2(const GroupElement& a, const AlgebraPath& i_h, const auxode::Grid& grid,
                   double tol = kDefaultGateTolerance);

/// sup_t ‖G X G⁻¹ − X‖ / max(1, ‖X‖).
double fixed_point_residual(const GroupElement& g, const AlgebraPath& x, const auxode::Grid& grid);

/// Real axis (c, s) in the K₃–K₄ plane with Ad(A)(cK₃ − sK₄) = cK₃ − sK₄ at t, returned as the
/// phase c₄ = atan2(s, c).
struct AxisAlignment {
    double c4 = 0.0;
    double residual = 0.0;     ///< smallest singular value of the fixed-axis system
    bool degenerate = false;   ///< Ad(A) fixes the whole plane; c₄ left as configured
    bool found = false;        ///< a fixed axis exists
};
AxisAlignment align_shared_invariant(const GroupElement& a, double t, double c4_configured);

struct PairInvariants {
    std::string family;  ///< "inv1" or "inv3"
    seeds::InvariantConstants eta_constants{};
    seeds::InvariantConstants eta_tilde_constants{};
    AxisAlignment alignment;
    AlgebraPath i_h;
    AlgebraPath i_h_tilde;
};
/// inv3 for both seeds when η₁ is involved, otherwise inv1 with c₄ aligned to the fixed axis of A.
PairInvariants select_invariants(seeds::SeedFactory& factory, const ForgePair& pair,
                                 const seeds::InvariantConstants& c = seeds::kDefaultConstants,
                                 double rho0 = seeds::kDefaultRho0);

struct LedgerEntry {
    Kind kind = Kind::Eta;
    int n = 0;
    bool refused = false;
    double gate_residual = 0.0;      ///< carried invariant at this step; 0 for n = 0
    double h_anti_hermitian = 0.0;   ///< sup_t max |Im h⁽ⁿ⁾ coefficient|
    std::vector<Coefficients> h;     ///< h⁽ⁿ⁾ on the grid; empty when refused
    std::vector<Coefficients> breakdown;  ///< anti-Hermitian part of the carried invariant, refused only
    double breakdown_t = 0.0;
    std::vector<double> fingerprint;  ///< filled by attach_fingerprints
};

struct IterationLedger {
    std::string pair;
    std::string invariant_family;
    int n_max = kDefaultNmax;
    double tol_gate = kDefaultGateTolerance;
    auxode::Grid grid;
    std::vector<LedgerEntry> entries;  ///< per kind, ascending n, truncated after a refusal

    const LedgerEntry* find(Kind kind, int n) const;
    bool any_refused() const;
    int admitted_count() const;
};

/// Builds both series for n ∈ [−n_max, n_max]. Gates are sequential: the carried invariant
/// X_n = Ad(A)X_{n−1} (Ad(A⁻¹) downwards) starts from I_h for η and I_h̃ for η̃, and the first
/// non-Hermitian step in each direction is recorded as REFUSED and ends that direction.
IterationLedger iterate(const ForgePair& pair, const PairInvariants& invariants,
                        const auxode::DrivingProfile& profile, int n_max = kDefaultNmax,
                        double tol_gate = kDefaultGateTolerance);

/// Metric fingerprints of every admitted entry at time t.
void attach_fingerprints(IterationLedger& ledger, const ForgePair& pair, const fock::FockRep& rep, double t);

/// Direct tdde_rhs(Aⁿη, H) against the gauge recurrence ĥ ↦ AĥA⁻¹ + i(∂tA)A⁻¹, over |n| ≤ n_max.
double series_consistency(const ForgePair& pair, Kind kind, int n_max, const auxode::DrivingProfile& profile,
                          const auxode::Grid& grid);

struct SymmetryOps {
    GroupElement s;        ///< A†A
    GroupElement s_tilde;  ///< AA†
    std::vector<double> s_residual;        ///< ‖S I_h S⁻¹ − I_h‖ per grid time
    std::vector<double> s_tilde_residual;  ///< ‖S̃ I_h̃ S̃⁻¹ − I_h̃‖ per grid time
    double max_residual() const;
};
SymmetryOps symmetry_ops(const ForgePair& pair, const AlgebraPath& i_h, const AlgebraPath& i_h_tilde);

struct ATildeCheck {
    double fixed_point_residual = 0.0;  ///< Ã I_H Ã⁻¹ against I_H
    double picture_residual = 0.0;      ///< η I_H η⁻¹ against η̃ I_H η̃⁻¹
    bool fixed = false;
    bool same_picture = false;
    bool holds() const { return fixed && same_picture; }
    bool consistent() const { return fixed == same_picture; }
};
ATildeCheck a_tilde_symmetry_check(const ForgePair& pair, const AlgebraPath& i_H, double tol = 1e-8);

struct Indexed {
    Kind kind = Kind::Eta;
    int n = 0;
    friend bool operator==(const Indexed&, const Indexed&) = default;
};
/// The four rule tables for (first, second) = (P, Q): results are Q P⁻¹ Q and P Q⁻¹ P.
std::pair<Indexed, Indexed> combine(Indexed first, Indexed second);

struct CombinationCheck {
    std::pair<Indexed, Indexed> predicted;
    double error_first = 0.0;   ///< realize(Q P⁻¹ Q) against realize(predicted.first)
    double error_second = 0.0;  ///< realize(P Q⁻¹ P) against realize(predicted.second)
};
CombinationCheck verify_combination(const ForgePair& pair, Indexed first, Indexed second, const fock::FockRep& rep,
                                    double t);

/// Printed closed form h(m, t) of one series.
struct PrintedFamily {
    std::string name;
    std::function<AlgebraElement(int, double)> h;
};
/// The η- and η̃-series displays of the unitary pair (shared k and x(t)): "unitary_h", "unitary_h_tilde".
std::vector<PrintedFamily> printed_families_unitary(const auxode::DrivingProfile& profile, double k,
                                                    auxode::PathPtr x);
/// The two h⁽ⁿ⁾ displays of the nonunitary pair: "nonunitary_first", "nonunitary_second".
std::vector<PrintedFamily> printed_families_nonunitary(const auxode::DrivingProfile& profile, double k,
                                                       auxode::PathPtr x);

struct FamilyMatch {
    std::string family;
    Kind kind = Kind::Eta;
    int sign = 1;   ///< printed index m = sign·n + shift
    int shift = 0;
    double error = 0.0;  ///< sup relative error over admitted entries and grid
    bool matched = false;
    std::string index_map() const;
};
/// Best series and index map m = ±n + d (d ∈ {−1, 0, 1}) for a printed family.
FamilyMatch match_family(const IterationLedger& ledger, const PrintedFamily& family, double tol = 1e-6);

/// Ledger serialisation; grid-sampled coefficients are written as real parts, the imaginary
/// parts being summarised by h_anti_hermitian.
nlohmann::json ledger_to_json(const IterationLedger& ledger);
/// Columns t and the K coefficients of each admitted kind at index n, 17 significant digits.
void write_h_series_csv(std::ostream& os, const IterationLedger& ledger, int n);

}  // namespace dysonforge::forge

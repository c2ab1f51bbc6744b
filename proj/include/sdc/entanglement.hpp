#pragma once

// Marginals, entropies and the dense-coding capacity of a shared state.

#include <cstddef>
#include <span>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "sdc/statevec.hpp"

namespace sdc {

/// Hermitian, unit-trace, positive semidefinite operator on a set of qubits.
class DensityOperator {
public:
    /// Checks Hermiticity, trace and eigenvalue sign within `tol`.
    explicit DensityOperator(Eigen::MatrixXcd matrix, double tol = kDefaultTol);

    /// |psi><psi|.
    static DensityOperator pure(const StateVector& state);
    /// I / 2^n.
    static DensityOperator maximally_mixed(std::size_t n);
    /// Symmetrizes and skips validation; for results that are valid by construction.
    static DensityOperator from_trusted(Eigen::MatrixXcd matrix);

    std::size_t n_qubits() const noexcept { return n_qubits_; }
    const Eigen::MatrixXcd& matrix() const noexcept { return matrix_; }

    /// Eigenvalues in ascending order.
    Eigen::VectorXd eigenvalues() const;
    /// Tr(rho^2).
    double purity() const;
    /// max |rho_ij - delta_ij / 2^n|.
    double distance_from_maximally_mixed() const;

private:
    DensityOperator() = default;

    std::size_t n_qubits_ = 0;
    Eigen::MatrixXcd matrix_;
};

/// Alice's and Bob's qubit sets; disjoint and together cover the register.
class Bipartition {
public:
    /// Bob holds the complement of `alice`.
    Bipartition(std::size_t n_qubits, std::vector<std::size_t> alice);

    std::size_t n_qubits() const noexcept { return n_qubits_; }
    const std::vector<std::size_t>& alice() const noexcept { return alice_; }
    const std::vector<std::size_t>& bob() const noexcept { return bob_; }
    /// The side with fewer qubits (Bob on ties).
    const std::vector<std::size_t>& smaller_side() const noexcept;

private:
    std::size_t n_qubits_;
    std::vector<std::size_t> alice_;
    std::vector<std::size_t> bob_;
};

/// Partial trace onto `keep`; the first kept qubit becomes the reduced operator's qubit 0.
DensityOperator reduced_density(const StateVector& state, std::span<const std::size_t> keep);
DensityOperator reduced_density(const DensityOperator& rho, std::span<const std::size_t> keep);

/// -sum lambda log2 lambda, eigenvalues at or below 1e-12 contribute nothing.
double von_neumann_entropy(const DensityOperator& rho);

/// Schmidt coefficients squared, descending; from the smaller side's marginal.
std::vector<double> schmidt_spectrum(const StateVector& state, const Bipartition& bp);

struct CutEntropy {
    std::vector<std::size_t> subset;   // smaller side of the cut
    double entropy = 0.0;              // bits
    double mixedness_residual = 0.0;   // max entrywise distance from I/2^m
};

struct AmeVerdict {
    bool is_ame = false;
    std::vector<CutEntropy> cuts;
};

/// Absolutely-maximally-entangled test over every cut with |B| <= n/2. Caps n at 12.
AmeVerdict is_ame(const StateVector& state, double tol = kDefaultTol);

struct GmeVerdict {
    bool is_gme = false;
    double min_entropy = 0.0;
    std::vector<std::size_t> weakest_cut;
};

/// Genuine multipartite entanglement of a pure state: every cut has entropy > tol. Caps n at 12.
GmeVerdict is_gme_pure(const StateVector& state, double tol = kDefaultTol);
/// Accepts only rank-one operators; mixed-state GME is not decidable from spectra and throws
/// Unsupported.
GmeVerdict is_gme_pure(const DensityOperator& rho, double tol = kDefaultTol);

struct CapacityTerms {
    double log2_alice_dim = 0.0;
    double bob_entropy = 0.0;
    double joint_entropy = 0.0;
    double capacity = 0.0;
};

/// X = log2 d_A + S(rho_B) - S(rho_AB).
CapacityTerms capacity_terms(const StateVector& state, std::span<const std::size_t> alice);
CapacityTerms capacity_terms(const DensityOperator& rho, std::span<const std::size_t> alice);

using SharedState = std::variant<StateVector, DensityOperator>;
double capacity(const SharedState& shared, std::span<const std::size_t> alice);

/// log2 of the channel dimension, i.e. `n` bits for `n` qubits.
double holevo_bound(std::size_t n);

struct OptimalityReport {
    CapacityTerms terms;
    double holevo_bound = 0.0;
    std::size_t alice_qubits = 0;
    std::size_t bob_qubits = 0;
    bool enough_alice_qubits = false;    // 4^|A| >= 2^n
    double bob_mixedness_residual = 0.0;
    bool bob_maximally_mixed = false;
    bool optimal = false;                // capacity equals the bound within tol
};

OptimalityReport optimality_report(const StateVector& state, std::span<const std::size_t> alice,
                                   double tol = kDefaultTol);

}  // namespace sdc

#pragma once

// Two-basis eavesdropping check on GHZ resource states and the single-ancilla attack model.
//
// Register convention for every function here: qubits [0, protocol_qubits) are the protocol
// register (Alice's qubits, then Bob's qubit at protocol_qubits - 1); anything after that
// belongs to Eve and is never measured.

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "sdc/statevec.hpp"

namespace sdc {

// ---------------------------------------------------------------------------
// Parity structure in the {|+>, |->} basis

struct PmTerm {
    std::uint64_t mask = 0;  // bit set = |->, qubit 0 is the MSB
    Complex amplitude;
};

/// Hadamard-basis amplitudes with magnitude above 1e-10.
std::vector<PmTerm> pm_support(const StateVector& state);

enum class ParityClass { even_ghz, odd_ghz, neither };

std::string to_string(ParityClass c);

/// even_ghz: support is exactly the even-weight masks, every magnitude 1/sqrt(2^(n-1)).
/// odd_ghz: the same for odd-weight masks. Phases are free.
ParityClass parity_class(const StateVector& state, double tol = kDefaultTol);

// ---------------------------------------------------------------------------
// Attack model

/// max |(U^dagger U - I)_ij|.
double unitarity_residual(const Matrix4& u);

/// Unitary on (Bob qubit, Eve ancilla) with basis order {00, 01, 10, 11}; the ancilla starts in
/// |0>, so U|b 0> = |0>|xi_b0> + |1>|xi_b1>.
class EveAttack {
public:
    /// Throws NonUnitary when U^dagger U deviates from I by more than `tol`.
    explicit EveAttack(const Matrix4& u, double tol = kDefaultTol);

    static EveAttack identity();
    /// Bob's qubit controls a flip of the ancilla.
    static EveAttack cnot();
    /// Swaps Bob's qubit into the ancilla, leaving Bob with |0>.
    static EveAttack swap_with_ancilla();
    /// Z on Bob's qubit; flips the GHZ branch phase.
    static EveAttack phase_flip();
    /// Haar-distributed 4x4 unitary.
    static EveAttack haar_random(Rng& rng);
    /// Random member of the family that acts as |b>|0> -> |b>|v> on the protocol subspace, with
    /// an arbitrary completion on the rest.
    static EveAttack random_undetectable(Rng& rng);

    /// Named preset: "identity", "cnot", "swap0" or "phase".
    static std::optional<EveAttack> preset(const std::string& name);

    const Matrix4& unitary() const noexcept { return u_; }
    /// The ancilla ket that accompanies Bob |j> when Bob started in |i>.
    std::array<Complex, 2> xi(int i, int j) const;

private:
    Matrix4 u_;
};

/// Appends Eve's ancilla in |0> after the last qubit and applies U to (last qubit, ancilla).
StateVector apply_eve(const StateVector& state, const EveAttack& attack);

// ---------------------------------------------------------------------------
// Eavesdropping check

enum class Basis : std::uint8_t { computational, hadamard };  // BMB1, BMB2

std::string to_string(Basis b);

struct RoundRecord {
    Basis basis = Basis::computational;
    std::uint8_t bob_outcome = 0;     // 0 / 1, or + / - in the Hadamard basis
    std::uint64_t alice_outcome = 0;  // Alice's qubits, qubit 0 is the MSB
    bool consistent = true;
};

/// Computational: Alice must read all zeros with Bob 0, all ones with Bob 1.
/// Hadamard: Alice's count of |-> must be even with Bob +, odd with Bob -.
bool outcomes_consistent(Basis basis, std::uint64_t alice_outcome, std::size_t alice_qubits,
                         std::uint8_t bob_outcome);

/// Precomputes the joint outcome distribution of the protocol register in both bases.
class RoundSampler {
public:
    RoundSampler(const StateVector& state, std::size_t protocol_qubits);

    RoundRecord sample(Basis basis, Rng& rng) const;
    /// Chooses the basis uniformly, then samples.
    RoundRecord sample(Rng& rng) const;

    /// Exact probability that a round in `basis` comes out inconsistent.
    double inconsistency(Basis basis) const;

private:
    std::size_t protocol_qubits_;
    std::array<std::vector<double>, 2> cumulative_;
    std::array<double, 2> inconsistency_{};
};

RoundRecord security_round(const StateVector& state, Basis basis, Rng& rng,
                           std::size_t protocol_qubits);

struct DetectionProbability {
    double computational = 0.0;  // P(inconsistent | BMB1)
    double hadamard = 0.0;       // P(inconsistent | BMB2)
    double total = 0.0;          // basis chosen uniformly
};

/// Exact, by enumerating every joint outcome of the protocol register in both bases.
DetectionProbability detection_probability(const StateVector& state,
                                           std::size_t protocol_qubits);

struct UndetectableCertificate {
    double xi01_norm = 0.0;
    double xi10_norm = 0.0;
    double xi00_minus_xi11 = 0.0;
    /// min over theta of ||xi00 - e^{i theta} xi11||; informational, the relative phase is
    /// physical and is not minimized in the verdict.
    double xi00_minus_xi11_up_to_phase = 0.0;
    /// max over b of || U|b,0> - |b> (x) xi00 ||.
    double product_form_residual = 0.0;
    bool undetectable = false;
};

UndetectableCertificate undetectable_certificate(const EveAttack& attack, double tol = 1e-6);

struct SimulationConfig {
    std::size_t n_qubits = 3;
    std::optional<EveAttack> attack;
    std::size_t rounds = 1000;
    std::uint64_t seed = 0;
    /// Abort when the inconsistent fraction exceeds this. 0 aborts on any inconsistency.
    double abort_threshold = 0.0;
    unsigned threads = 1;
};

struct BasisStats {
    std::size_t rounds = 0;
    std::size_t consistent = 0;

    double consistency_rate() const noexcept {
        return rounds == 0 ? 1.0 : static_cast<double>(consistent) / static_cast<double>(rounds);
    }
};

struct SimulationReport {
    std::size_t rounds = 0;
    std::size_t inconsistent = 0;
    BasisStats computational;
    BasisStats hadamard;
    double detection_rate = 0.0;
    DetectionProbability exact;
    /// Binomial standard error of the detection rate at the exact probability.
    double standard_error = 0.0;
    bool aborted = false;
};

/// Each round r draws from its own generator seeded with derive_seed(seed, r), so results do
/// not depend on `threads`.
SimulationReport security_simulation(const SimulationConfig& config);

}  // namespace sdc

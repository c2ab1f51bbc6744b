#pragma once

// Dense pure-state registers and the small gate set the coding protocols use.
//
// Bit convention: qubit 0 is the most significant bit of the amplitude index,
// so |q0 q1 ... q_{n-1}> reads left to right like ordinary tensor notation.

#include <array>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "sdc/random.hpp"

namespace sdc {

using Complex = std::complex<double>;

inline constexpr std::size_t kMaxQubits = 20;
inline constexpr double kDefaultTol = 1e-9;

/// Position of qubit `q` inside an amplitude index of an `n`-qubit register.
constexpr std::size_t bit_position(std::size_t q, std::size_t n) noexcept { return n - 1 - q; }

constexpr bool qubit_bit(std::uint64_t index, std::size_t q, std::size_t n) noexcept {
    return ((index >> bit_position(q, n)) & 1U) != 0;
}

class StateVector {
public:
    /// Validates length (a power of two, at most 2^kMaxQubits) and unit norm within `tol`.
    explicit StateVector(std::vector<Complex> amplitudes, double tol = kDefaultTol);

    std::size_t n_qubits() const noexcept { return n_qubits_; }
    std::size_t dimension() const noexcept { return amplitudes_.size(); }
    std::span<const Complex> amplitudes() const noexcept { return amplitudes_; }
    const Complex& operator[](std::size_t i) const { return amplitudes_[i]; }

    double norm_squared() const noexcept;

    /// Skips the norm check. Used by operations whose output is normalized by construction.
    static StateVector from_normalized(std::vector<Complex> amplitudes);

private:
    StateVector() = default;

    std::size_t n_qubits_ = 0;
    std::vector<Complex> amplitudes_;
};

enum class PauliLabel : std::uint8_t { I, X, Z, iY };

/// Single-qubit label as a character: 'I', 'X', 'Z' or 'Y' (the latter meaning iY).
char to_char(PauliLabel label) noexcept;
PauliLabel pauli_from_char(char c);
std::string to_string(PauliLabel label);

/// Labels applied to an ordered list of distinct target qubits.
class PauliString {
public:
    PauliString() = default;
    PauliString(std::vector<PauliLabel> ops, std::vector<std::size_t> targets);

    /// Labels on qubits 0..ops.size()-1.
    static PauliString on_leading(std::vector<PauliLabel> ops);
    /// Parses "ZXXI" (or "Z X X I", "ZxX") onto qubits 0..len-1; 'Y' denotes iY.
    static PauliString parse(const std::string& text);

    const std::vector<PauliLabel>& ops() const noexcept { return ops_; }
    const std::vector<std::size_t>& targets() const noexcept { return targets_; }
    std::size_t size() const noexcept { return ops_.size(); }

    /// Label on qubit `q`, I if untouched.
    PauliLabel label_on(std::size_t q) const noexcept;

    /// "Z⊗X⊗X⊗I" in target order.
    std::string tensor_notation() const;
    /// "ZXXI" in target order.
    std::string compact() const;

    friend bool operator==(const PauliString&, const PauliString&) = default;

private:
    std::vector<PauliLabel> ops_;
    std::vector<std::size_t> targets_;
};

StateVector basis_ket(std::size_t n, std::uint64_t index);
StateVector ghz_state(std::size_t n);
/// (|00> + |11>)/sqrt(2).
StateVector bell_state();

/// `a` occupies the high (leading) qubits of the result.
StateVector tensor_product(const StateVector& a, const StateVector& b);

StateVector apply_pauli_string(const StateVector& state, const PauliString& ps);

/// <a|b>, conjugate-linear in `a`.
Complex inner_product(const StateVector& a, const StateVector& b);

StateVector apply_hadamard(const StateVector& state, std::size_t qubit);
StateVector apply_cnot(const StateVector& state, std::size_t control, std::size_t target);
/// Hadamard on every qubit: computational bit 0 -> |+>, 1 -> |->.
StateVector hadamard_all(const StateVector& state);

/// Row-major 4x4 matrix acting on the ordered pair (high, low), basis {00, 01, 10, 11}.
using Matrix4 = std::array<std::array<Complex, 4>, 4>;
StateVector apply_two_qubit(const StateVector& state, std::size_t high, std::size_t low,
                            const Matrix4& u);

/// Exact outcome distribution over `qubits`; the first listed qubit is the outcome's MSB.
std::vector<double> marginal_probabilities(const StateVector& state,
                                           std::span<const std::size_t> qubits);

struct Measurement {
    std::uint64_t outcome = 0;  // bits in the order of the measured qubit list, first = MSB
    double probability = 0.0;
    StateVector collapsed;
};

/// Projective computational-basis measurement of `qubits`; the register keeps all its qubits.
Measurement measure_qubits(const StateVector& state, std::span<const std::size_t> qubits,
                           Rng& rng);

/// perm[q] is the new position of old qubit q.
StateVector permute_qubits(const StateVector& state, std::span<const std::size_t> perm);

bool approx_equal(const StateVector& a, const StateVector& b, double tol = kDefaultTol);
/// True iff b = e^{i phi} a entrywise within `tol` for some phase phi.
bool equal_up_to_global_phase(const StateVector& a, const StateVector& b,
                              double tol = kDefaultTol);

struct Amplitude {
    std::uint64_t index = 0;
    Complex value;
};
/// Non-negligible amplitudes in index order.
std::vector<Amplitude> support(const StateVector& state, double threshold = 1e-10);

/// "|010>" style label of a basis index.
std::string ket_label(std::uint64_t index, std::size_t n);

}  // namespace sdc

#pragma once

// Dense-coding encoders and decoders.
//
// Three schemes share one Pauli alphabet {I, X, Z, iY}:
//  * Bell-pair coding: 2 bits per pair, pair p on qubits (2p, 2p+1), Alice holds 2p.
//  * GHZ coding: N bits on an N-qubit GHZ state, Alice holds qubits 0..N-2, Bob holds N-1.
//  * Distributed D(N,k) coding: one GHZ block followed by Bell pairs, the sender-side qubits
//    split among k parties.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "sdc/statevec.hpp"

namespace sdc {

/// Classical bit string, most significant (first transmitted) bit first.
class Message {
public:
    /// Requires at least two bits.
    explicit Message(std::vector<std::uint8_t> bits);

    /// Parses a string over {0, 1}.
    static Message parse(const std::string& text);
    /// The `n`-bit message whose bits spell `value` in binary.
    static Message from_value(std::uint64_t value, std::size_t n);

    std::size_t size() const noexcept { return bits_.size(); }
    std::uint8_t operator[](std::size_t i) const { return bits_[i]; }
    const std::vector<std::uint8_t>& bits() const noexcept { return bits_; }

    std::uint64_t value() const noexcept;
    std::string to_string() const;

    friend bool operator==(const Message&, const Message&) = default;

private:
    std::vector<std::uint8_t> bits_;
};

/// Label for a two-bit symbol: 00 -> I, 01 -> X, 10 -> Z, 11 -> iY.
PauliLabel label_for_bits(std::uint8_t high, std::uint8_t low);

// ---------------------------------------------------------------------------
// GHZ coding

/// Canonical encoder on qubits 0..N-2 of an N-qubit GHZ state.
PauliString encode_ghz(const Message& msg);
/// encode_ghz applied to ghz_state(N).
StateVector encoded_state(const Message& msg);

/// Whether two Alice-side strings give the same encoded GHZ state up to global phase: their
/// product must reduce to a tensor of I and Z with an even number of Z factors. Both strings
/// must target only qubits 0..n-2.
bool pauli_equivalent(const PauliString& a, const PauliString& b, std::size_t n);

enum class DecodeMethod {
    circuit,      // CNOT fan-out + Hadamard, then read the basis state
    brute_force,  // overlap against every code word
};

/// Threshold on the best overlap magnitude below which decoding reports NoMatch.
inline constexpr double kDecodeOverlapFloor = 1.0 - 1e-6;

Message decode_ghz(const StateVector& state, DecodeMethod method = DecodeMethod::circuit);

/// Every encoder and encoded state for N-bit messages, indexed by message value.
struct CodeBasis {
    std::size_t n = 0;
    std::vector<PauliString> operators;
    std::vector<StateVector> states;
};

/// Caps n at 10 (dense storage is 2^n x 2^n amplitudes).
CodeBasis build_code_basis(std::size_t n);

struct GramReport {
    std::size_t n = 0;
    std::size_t dimension = 0;
    double max_off_diagonal = 0.0;
    double max_diagonal_deviation = 0.0;
};

/// Full Gram matrix of the 2^n encoded GHZ states, 2 <= n <= 10.
GramReport verify_code_orthonormality(std::size_t n);

/// Brute-force decoder: overlap magnitudes against a fixed list of code words, where code word
/// i encodes the message whose value is i.
class OverlapDecoder {
public:
    explicit OverlapDecoder(std::vector<StateVector> code_words);

    static OverlapDecoder ghz(std::size_t n_bits);
    static OverlapDecoder bell(std::size_t n_bits);

    std::size_t message_bits() const noexcept { return bits_; }
    Message decode(const StateVector& state) const;

private:
    std::vector<StateVector> words_;
    std::size_t bits_ = 0;
};

// ---------------------------------------------------------------------------
// Bell-pair coding

/// |phi+> on each of n_pairs pairs.
StateVector bell_product_state(std::size_t n_pairs);
/// One single-label string per pair, targeting the pair's Alice half (qubit 2p).
std::vector<PauliString> encode_bell(const Message& msg);
StateVector bell_encoded_state(const Message& msg);
Message decode_bell(const StateVector& state, DecodeMethod method = DecodeMethod::circuit);

// ---------------------------------------------------------------------------
// Distributed D(N,k) coding

enum class Block : std::uint8_t { ghz, bell };

/// Role of one register qubit in a D(N,k) layout.
struct QubitRole {
    Block block = Block::ghz;
    std::size_t pair = 0;              // Bell pair number when block == bell
    bool bob = false;                  // held by the receiver
    std::optional<std::size_t> party;  // sender (1-based) when !bob
    std::size_t bit_begin = 0;         // bit segment carried (empty for Bob's qubits)
    std::size_t bit_end = 0;
};

struct PartyAllocation {
    std::size_t party = 0;  // 1-based
    std::vector<std::size_t> qubits;
    std::size_t bit_begin = 0;
    std::size_t bit_end = 0;
};

/// Register order: GHZ sender qubits, GHZ Bob qubit, then (sender half, Bob half) per Bell pair.
struct DnkSpec {
    std::size_t n_bits = 0;
    std::size_t senders = 0;
    std::size_t ghz_size = 0;
    std::size_t bell_pairs = 0;
    std::vector<QubitRole> layout;          // indexed by register qubit
    std::vector<PartyAllocation> parties;   // parties 1..k in order
    std::vector<std::size_t> bob_qubits;

    std::size_t n_qubits() const noexcept { return layout.size(); }
    std::vector<std::size_t> sender_qubits() const;
    /// Permutation (old position -> new) that lists party 1's qubits first, ..., then Bob's.
    std::vector<std::size_t> party_order() const;
};

/// GHZ block size: max(2, 2(k+1)-N) for even N, max(3, 2(k+1)-N) for odd N.
std::size_t dnk_ghz_size(std::size_t n_bits, std::size_t senders);
DnkSpec dnk_spec(std::size_t n_bits, std::size_t senders);

StateVector dnk_state(const DnkSpec& spec);
/// The same state with qubits listed party by party, Bob last.
StateVector dnk_state_party_order(const DnkSpec& spec);

struct PartyOperation {
    std::size_t party = 0;
    PauliString ops;  // only this party's qubits, register indices
};

std::vector<PartyOperation> dnk_encode(const Message& msg, const DnkSpec& spec);
/// Applies every party's operation to the layout-ordered resource state.
StateVector dnk_encoded_state(const Message& msg, const DnkSpec& spec);
/// NoMatch names the failing block ("ghz" or "bell[p]").
Message dnk_decode(const StateVector& state, const DnkSpec& spec,
                   DecodeMethod method = DecodeMethod::circuit);
OverlapDecoder dnk_overlap_decoder(const DnkSpec& spec);

}  // namespace sdc

#include "sdc/coding.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Dense>

#include "sdc/errors.hpp"

namespace sdc {

namespace {

constexpr std::size_t kMaxBasisBits = 10;

bool is_x_type(PauliLabel l) { return l == PauliLabel::X || l == PauliLabel::iY; }
bool is_z_type(PauliLabel l) { return l == PauliLabel::Z || l == PauliLabel::iY; }

/// Reads the most likely outcome of `qubits`; NoMatch if it is not (close to) certain.
std::uint64_t read_block(const StateVector& state, const std::vector<std::size_t>& qubits,
                         const std::string& block) {
    const auto probs = marginal_probabilities(state, qubits);
    const auto best = std::max_element(probs.begin(), probs.end());
    const double overlap = std::sqrt(*best);
    if (overlap < kDecodeOverlapFloor) {
        throw NoMatch("block " + block + " is not a code word (best overlap " +
                          std::to_string(overlap) + ")",
                      block, overlap);
    }
    return static_cast<std::uint64_t>(best - probs.begin());
}

/// Decodes a register laid out as a GHZ block on qubits [0, ghz_size) followed by `pairs`
/// Bell pairs. ghz_size == 0 means no GHZ block.
std::vector<std::uint8_t> decode_blocks(StateVector state, std::size_t ghz_size,
                                        std::size_t pairs) {
    if (state.n_qubits() != ghz_size + 2 * pairs) {
        throw InvalidArgument("register of " + std::to_string(state.n_qubits()) +
                              " qubits does not match the code layout");
    }
    // Disentangling circuits map every code word to a computational basis state.
    if (ghz_size > 0) {
        for (std::size_t q = 1; q < ghz_size; ++q) {
            state = apply_cnot(state, 0, q);
        }
        state = apply_hadamard(state, 0);
    }
    for (std::size_t p = 0; p < pairs; ++p) {
        const std::size_t a = ghz_size + 2 * p;
        state = apply_cnot(state, a, a + 1);
        state = apply_hadamard(state, a);
    }

    std::vector<std::uint8_t> bits;
    if (ghz_size > 0) {
        std::vector<std::size_t> qubits(ghz_size);
        for (std::size_t q = 0; q < ghz_size; ++q) {
            qubits[q] = q;
        }
        const auto outcome = read_block(state, qubits, "ghz");
        auto bit = [&](std::size_t q) {
            return static_cast<std::uint8_t>((outcome >> (ghz_size - 1 - q)) & 1U);
        };
        // Phase bit lands on qubit 0, the first-qubit flip bit on the last (Bob's) qubit, and
        // every tail qubit carries its own bit XOR that flip bit.
        const std::uint8_t flip = bit(ghz_size - 1);
        bits.push_back(bit(0));
        bits.push_back(flip);
        for (std::size_t q = 1; q + 1 < ghz_size; ++q) {
            bits.push_back(bit(q) ^ flip);
        }
    }
    for (std::size_t p = 0; p < pairs; ++p) {
        const std::size_t a = ghz_size + 2 * p;
        const auto outcome = read_block(state, {a, a + 1}, "bell[" + std::to_string(p) + "]");
        bits.push_back(static_cast<std::uint8_t>((outcome >> 1) & 1U));
        bits.push_back(static_cast<std::uint8_t>(outcome & 1U));
    }
    return bits;
}

}  // namespace

Message::Message(std::vector<std::uint8_t> bits) : bits_(std::move(bits)) {
    if (bits_.size() < 2) {
        throw InvalidArgument("message needs at least 2 bits, got " +
                              std::to_string(bits_.size()));
    }
    for (auto b : bits_) {
        if (b > 1) {
            throw InvalidArgument("message bits must be 0 or 1");
        }
    }
}

Message Message::parse(const std::string& text) {
    std::vector<std::uint8_t> bits;
    bits.reserve(text.size());
    for (char c : text) {
        if (c != '0' && c != '1') {
            throw InvalidArgument("message '" + text + "' contains a character other than 0/1");
        }
        bits.push_back(static_cast<std::uint8_t>(c - '0'));
    }
    return Message(std::move(bits));
}

Message Message::from_value(std::uint64_t value, std::size_t n) {
    if (n < 2 || n > 63) {
        throw InvalidArgument("message length " + std::to_string(n) + " out of range");
    }
    if (value >> n) {
        throw InvalidArgument("value does not fit in " + std::to_string(n) + " bits");
    }
    std::vector<std::uint8_t> bits(n);
    for (std::size_t i = 0; i < n; ++i) {
        bits[i] = static_cast<std::uint8_t>((value >> (n - 1 - i)) & 1U);
    }
    return Message(std::move(bits));
}

std::uint64_t Message::value() const noexcept {
    std::uint64_t v = 0;
    for (auto b : bits_) {
        v = (v << 1) | b;
    }
    return v;
}

std::string Message::to_string() const {
    std::string s;
    for (auto b : bits_) {
        s += static_cast<char>('0' + b);
    }
    return s;
}

PauliLabel label_for_bits(std::uint8_t high, std::uint8_t low) {
    static constexpr PauliLabel table[4] = {PauliLabel::I, PauliLabel::X, PauliLabel::Z,
                                            PauliLabel::iY};
    return table[((high & 1U) << 1) | (low & 1U)];
}

PauliString encode_ghz(const Message& msg) {
    const std::size_t n = msg.size();
    std::vector<PauliLabel> ops;
    ops.reserve(n - 1);
    ops.push_back(label_for_bits(msg[0], msg[1]));
    for (std::size_t q = 1; q + 1 < n; ++q) {
        ops.push_back(msg[q + 1] ? PauliLabel::X : PauliLabel::I);
    }
    return PauliString::on_leading(std::move(ops));
}

StateVector encoded_state(const Message& msg) {
    return apply_pauli_string(ghz_state(msg.size()), encode_ghz(msg));
}

bool pauli_equivalent(const PauliString& a, const PauliString& b, std::size_t n) {
    if (n < 2) {
        throw InvalidArgument("GHZ register needs at least 2 qubits");
    }
    for (const auto* ps : {&a, &b}) {
        for (auto t : ps->targets()) {
            if (t + 1 >= n) {
                throw InvalidArgument("encoder targets qubit " + std::to_string(t) +
                                      ", outside Alice's qubits 0.." + std::to_string(n - 2));
            }
        }
    }
    // Product up to sign via symplectic (x, z) bits; iY = ZX carries both.
    std::size_t z_count = 0;
    for (std::size_t q = 0; q + 1 < n; ++q) {
        const auto la = a.label_on(q);
        const auto lb = b.label_on(q);
        if (is_x_type(la) != is_x_type(lb)) {
            return false;
        }
        if (is_z_type(la) != is_z_type(lb)) {
            ++z_count;
        }
    }
    return z_count % 2 == 0;
}

Message decode_ghz(const StateVector& state, DecodeMethod method) {
    if (method == DecodeMethod::brute_force) {
        return OverlapDecoder::ghz(state.n_qubits()).decode(state);
    }
    return Message(decode_blocks(state, state.n_qubits(), 0));
}

CodeBasis build_code_basis(std::size_t n) {
    if (n < 2 || n > kMaxBasisBits) {
        throw InvalidArgument("code basis size must be 2.." + std::to_string(kMaxBasisBits) +
                              ", got " + std::to_string(n));
    }
    CodeBasis basis;
    basis.n = n;
    const std::uint64_t count = std::uint64_t{1} << n;
    basis.operators.reserve(count);
    basis.states.reserve(count);
    const auto ghz = ghz_state(n);
    for (std::uint64_t v = 0; v < count; ++v) {
        auto op = encode_ghz(Message::from_value(v, n));
        basis.states.push_back(apply_pauli_string(ghz, op));
        basis.operators.push_back(std::move(op));
    }
    return basis;
}

GramReport verify_code_orthonormality(std::size_t n) {
    const auto basis = build_code_basis(n);
    const auto dim = static_cast<Eigen::Index>(basis.states.size());
    Eigen::MatrixXcd e(dim, dim);
    for (Eigen::Index c = 0; c < dim; ++c) {
        const auto amps = basis.states[static_cast<std::size_t>(c)].amplitudes();
        for (Eigen::Index r = 0; r < dim; ++r) {
            e(r, c) = amps[static_cast<std::size_t>(r)];
        }
    }
    const Eigen::MatrixXcd gram = e.adjoint() * e;

    GramReport report;
    report.n = n;
    report.dimension = static_cast<std::size_t>(dim);
    for (Eigen::Index r = 0; r < dim; ++r) {
        for (Eigen::Index c = 0; c < dim; ++c) {
            if (r == c) {
                report.max_diagonal_deviation =
                    std::max(report.max_diagonal_deviation, std::abs(gram(r, c) - 1.0));
            } else {
                report.max_off_diagonal = std::max(report.max_off_diagonal, std::abs(gram(r, c)));
            }
        }
    }
    return report;
}

OverlapDecoder::OverlapDecoder(std::vector<StateVector> code_words)
    : words_(std::move(code_words)) {
    const auto count = words_.size();
    if (count < 4 || (count & (count - 1)) != 0) {
        throw InvalidArgument("code word count must be a power of two >= 4");
    }
    while ((std::size_t{1} << bits_) < count) {
        ++bits_;
    }
    for (const auto& w : words_) {
        if (w.n_qubits() != words_.front().n_qubits()) {
            throw InvalidArgument("code words have different register sizes");
        }
    }
}

OverlapDecoder OverlapDecoder::ghz(std::size_t n_bits) {
    return OverlapDecoder(build_code_basis(n_bits).states);
}

OverlapDecoder OverlapDecoder::bell(std::size_t n_bits) {
    if (n_bits < 2 || n_bits % 2 != 0 || n_bits > kMaxBasisBits) {
        throw InvalidArgument("Bell code needs an even bit count 2.." +
                              std::to_string(kMaxBasisBits));
    }
    std::vector<StateVector> words;
    const std::uint64_t count = std::uint64_t{1} << n_bits;
    words.reserve(count);
    for (std::uint64_t v = 0; v < count; ++v) {
        words.push_back(bell_encoded_state(Message::from_value(v, n_bits)));
    }
    return OverlapDecoder(std::move(words));
}

Message OverlapDecoder::decode(const StateVector& state) const {
    if (state.n_qubits() != words_.front().n_qubits()) {
        throw InvalidArgument("state has " + std::to_string(state.n_qubits()) +
                              " qubits, code words have " +
                              std::to_string(words_.front().n_qubits()));
    }
    std::size_t best = 0;
    double best_overlap = -1.0;
    for (std::size_t i = 0; i < words_.size(); ++i) {
        const double o = std::abs(inner_product(words_[i], state));
        if (o > best_overlap) {
            best_overlap = o;
            best = i;
        }
    }
    if (best_overlap < kDecodeOverlapFloor) {
        throw NoMatch("state is not a code word (best overlap " + std::to_string(best_overlap) +
                          ")",
                      "register", best_overlap);
    }
    return Message::from_value(best, bits_);
}

StateVector bell_product_state(std::size_t n_pairs) {
    if (n_pairs == 0 || 2 * n_pairs > kMaxQubits) {
        throw InvalidArgument("Bell pair count " + std::to_string(n_pairs) + " out of range");
    }
    auto state = bell_state();
    for (std::size_t p = 1; p < n_pairs; ++p) {
        state = tensor_product(state, bell_state());
    }
    return state;
}

std::vector<PauliString> encode_bell(const Message& msg) {
    if (msg.size() % 2 != 0) {
        throw InvalidArgument("Bell-pair coding needs an even number of bits, got " +
                              std::to_string(msg.size()));
    }
    std::vector<PauliString> out;
    for (std::size_t p = 0; p < msg.size() / 2; ++p) {
        out.emplace_back(std::vector<PauliLabel>{label_for_bits(msg[2 * p], msg[2 * p + 1])},
                         std::vector<std::size_t>{2 * p});
    }
    return out;
}

StateVector bell_encoded_state(const Message& msg) {
    const auto ops = encode_bell(msg);
    auto state = bell_product_state(ops.size());
    for (const auto& ps : ops) {
        state = apply_pauli_string(state, ps);
    }
    return state;
}

Message decode_bell(const StateVector& state, DecodeMethod method) {
    if (state.n_qubits() % 2 != 0) {
        throw InvalidArgument("Bell-pair register needs an even qubit count");
    }
    if (method == DecodeMethod::brute_force) {
        return OverlapDecoder::bell(state.n_qubits()).decode(state);
    }
    return Message(decode_blocks(state, 0, state.n_qubits() / 2));
}

// ---------------------------------------------------------------------------
// D(N,k)

std::size_t dnk_ghz_size(std::size_t n_bits, std::size_t senders) {
    if (n_bits < 2 || n_bits > kMaxQubits) {
        throw InvalidArgument("D(N,k) needs 2 <= N <= " + std::to_string(kMaxQubits) + ", got " +
                              std::to_string(n_bits));
    }
    if (senders < 1 || senders > n_bits - 1) {
        throw InvalidArgument("D(N,k) needs 1 <= k <= N-1, got k=" + std::to_string(senders) +
                              " for N=" + std::to_string(n_bits));
    }
    const std::size_t floor_size = (n_bits % 2 == 0) ? 2 : 3;
    const std::size_t demand = 2 * (senders + 1);
    return demand > n_bits ? std::max(floor_size, demand - n_bits) : floor_size;
}

DnkSpec dnk_spec(std::size_t n_bits, std::size_t senders) {
    DnkSpec spec;
    spec.n_bits = n_bits;
    spec.senders = senders;
    spec.ghz_size = dnk_ghz_size(n_bits, senders);
    spec.bell_pairs = (n_bits - spec.ghz_size) / 2;

    const std::size_t g = spec.ghz_size;
    spec.layout.resize(n_bits);
    for (std::size_t q = 0; q + 1 < g; ++q) {
        auto& role = spec.layout[q];
        role.block = Block::ghz;
        role.bit_begin = q == 0 ? 0 : q + 1;
        role.bit_end = q + 2;
    }
    spec.layout[g - 1] = QubitRole{Block::ghz, 0, true, std::nullopt, 0, 0};
    spec.bob_qubits.push_back(g - 1);
    for (std::size_t p = 0; p < spec.bell_pairs; ++p) {
        const std::size_t a = g + 2 * p;
        spec.layout[a] = QubitRole{Block::bell, p, false, std::nullopt, a, a + 2};
        spec.layout[a + 1] = QubitRole{Block::bell, p, true, std::nullopt, 0, 0};
        spec.bob_qubits.push_back(a + 1);
    }

    // Contiguous runs of sender qubits, as even in count as possible, earlier parties first.
    const auto senders_side = spec.sender_qubits();
    const std::size_t base = senders_side.size() / senders;
    const std::size_t extra = senders_side.size() % senders;
    std::size_t next = 0;
    for (std::size_t j = 0; j < senders; ++j) {
        PartyAllocation alloc;
        alloc.party = j + 1;
        const std::size_t take = base + (j < extra ? 1 : 0);
        for (std::size_t t = 0; t < take; ++t) {
            const std::size_t q = senders_side[next++];
            spec.layout[q].party = alloc.party;
            alloc.qubits.push_back(q);
        }
        alloc.bit_begin = spec.layout[alloc.qubits.front()].bit_begin;
        alloc.bit_end = spec.layout[alloc.qubits.back()].bit_end;
        spec.parties.push_back(std::move(alloc));
    }
    return spec;
}

std::vector<std::size_t> DnkSpec::sender_qubits() const {
    std::vector<std::size_t> out;
    for (std::size_t q = 0; q < layout.size(); ++q) {
        if (!layout[q].bob) {
            out.push_back(q);
        }
    }
    return out;
}

std::vector<std::size_t> DnkSpec::party_order() const {
    std::vector<std::size_t> perm(layout.size());
    std::size_t pos = 0;
    for (const auto& alloc : parties) {
        for (auto q : alloc.qubits) {
            perm[q] = pos++;
        }
    }
    for (auto q : bob_qubits) {
        perm[q] = pos++;
    }
    return perm;
}

StateVector dnk_state(const DnkSpec& spec) {
    auto state = ghz_state(spec.ghz_size);
    for (std::size_t p = 0; p < spec.bell_pairs; ++p) {
        state = tensor_product(state, bell_state());
    }
    return state;
}

StateVector dnk_state_party_order(const DnkSpec& spec) {
    const auto perm = spec.party_order();
    return permute_qubits(dnk_state(spec), perm);
}

std::vector<PartyOperation> dnk_encode(const Message& msg, const DnkSpec& spec) {
    if (msg.size() != spec.n_bits) {
        throw InvalidArgument("message has " + std::to_string(msg.size()) +
                              " bits, D(N,k) layout expects " + std::to_string(spec.n_bits));
    }
    const std::size_t g = spec.ghz_size;
    std::vector<PauliLabel> labels(spec.n_qubits(), PauliLabel::I);

    const std::vector<std::uint8_t> ghz_bits(msg.bits().begin(),
                                             msg.bits().begin() + static_cast<std::ptrdiff_t>(g));
    const auto ghz_ops = encode_ghz(Message(ghz_bits));
    for (std::size_t i = 0; i < ghz_ops.size(); ++i) {
        labels[ghz_ops.targets()[i]] = ghz_ops.ops()[i];
    }
    for (std::size_t p = 0; p < spec.bell_pairs; ++p) {
        const std::size_t a = g + 2 * p;
        labels[a] = label_for_bits(msg[a], msg[a + 1]);
    }

    std::vector<PartyOperation> out;
    for (const auto& alloc : spec.parties) {
        std::vector<PauliLabel> ops;
        for (auto q : alloc.qubits) {
            ops.push_back(labels[q]);
        }
        out.push_back({alloc.party, PauliString(std::move(ops), alloc.qubits)});
    }
    return out;
}

StateVector dnk_encoded_state(const Message& msg, const DnkSpec& spec) {
    auto state = dnk_state(spec);
    for (const auto& op : dnk_encode(msg, spec)) {
        state = apply_pauli_string(state, op.ops);
    }
    return state;
}

OverlapDecoder dnk_overlap_decoder(const DnkSpec& spec) {
    if (spec.n_bits > kMaxBasisBits) {
        throw InvalidArgument("brute-force D(N,k) decoding is capped at N=" +
                              std::to_string(kMaxBasisBits));
    }
    std::vector<StateVector> words;
    const std::uint64_t count = std::uint64_t{1} << spec.n_bits;
    words.reserve(count);
    const auto resource = dnk_state(spec);
    for (std::uint64_t v = 0; v < count; ++v) {
        auto state = resource;
        for (const auto& op : dnk_encode(Message::from_value(v, spec.n_bits), spec)) {
            state = apply_pauli_string(state, op.ops);
        }
        words.push_back(std::move(state));
    }
    return OverlapDecoder(std::move(words));
}

Message dnk_decode(const StateVector& state, const DnkSpec& spec, DecodeMethod method) {
    if (state.n_qubits() != spec.n_qubits()) {
        throw InvalidArgument("state has " + std::to_string(state.n_qubits()) +
                              " qubits, D(N,k) layout has " + std::to_string(spec.n_qubits()));
    }
    if (method == DecodeMethod::brute_force) {
        return dnk_overlap_decoder(spec).decode(state);
    }
    return Message(decode_blocks(state, spec.ghz_size, spec.bell_pairs));
}

}  // namespace sdc

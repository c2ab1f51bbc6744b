#include "sdc/statevec.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numbers>
#include <sstream>

#include "sdc/errors.hpp"

namespace sdc {

namespace {

std::size_t qubits_for_length(std::size_t len) {
    if (len < 2 || (len & (len - 1)) != 0) {
        throw InvalidArgument("amplitude vector length " + std::to_string(len) +
                              " is not a power of two >= 2");
    }
    std::size_t n = 0;
    while ((std::size_t{1} << n) < len) {
        ++n;
    }
    if (n > kMaxQubits) {
        throw InvalidArgument("register of " + std::to_string(n) + " qubits exceeds the cap of " +
                              std::to_string(kMaxQubits));
    }
    return n;
}

void check_qubit(std::size_t q, std::size_t n) {
    if (q >= n) {
        throw InvalidArgument("qubit index " + std::to_string(q) + " out of range for a " +
                              std::to_string(n) + "-qubit register");
    }
}

void check_distinct(std::span<const std::size_t> qubits, std::size_t n) {
    std::vector<bool> seen(n, false);
    for (auto q : qubits) {
        check_qubit(q, n);
        if (seen[q]) {
            throw InvalidArgument("qubit index " + std::to_string(q) + " listed twice");
        }
        seen[q] = true;
    }
}

}  // namespace

StateVector::StateVector(std::vector<Complex> amplitudes, double tol)
    : n_qubits_(qubits_for_length(amplitudes.size())), amplitudes_(std::move(amplitudes)) {
    const double norm2 = norm_squared();
    if (!(std::abs(norm2 - 1.0) <= tol)) {
        std::ostringstream os;
        os << "state is not normalized: squared norm " << norm2;
        throw InvalidArgument(os.str());
    }
}

StateVector StateVector::from_normalized(std::vector<Complex> amplitudes) {
    StateVector s;
    s.n_qubits_ = qubits_for_length(amplitudes.size());
    s.amplitudes_ = std::move(amplitudes);
    return s;
}

double StateVector::norm_squared() const noexcept {
    double acc = 0.0;
    for (const auto& a : amplitudes_) {
        acc += std::norm(a);
    }
    return acc;
}

char to_char(PauliLabel label) noexcept {
    switch (label) {
        case PauliLabel::I: return 'I';
        case PauliLabel::X: return 'X';
        case PauliLabel::Z: return 'Z';
        case PauliLabel::iY: return 'Y';
    }
    return '?';
}

std::string to_string(PauliLabel label) {
    return label == PauliLabel::iY ? std::string("iY") : std::string(1, to_char(label));
}

PauliLabel pauli_from_char(char c) {
    switch (c) {
        case 'I': case 'i': return PauliLabel::I;
        case 'X': case 'x': return PauliLabel::X;
        case 'Z': case 'z': return PauliLabel::Z;
        case 'Y': case 'y': return PauliLabel::iY;
        default: break;
    }
    throw InvalidArgument(std::string("unknown Pauli label '") + c + "'");
}

PauliString::PauliString(std::vector<PauliLabel> ops, std::vector<std::size_t> targets)
    : ops_(std::move(ops)), targets_(std::move(targets)) {
    if (ops_.size() != targets_.size()) {
        throw InvalidArgument("Pauli string has " + std::to_string(ops_.size()) + " labels but " +
                              std::to_string(targets_.size()) + " targets");
    }
    auto sorted = targets_;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
        throw InvalidArgument("Pauli string targets must be distinct");
    }
}

PauliString PauliString::on_leading(std::vector<PauliLabel> ops) {
    std::vector<std::size_t> targets(ops.size());
    for (std::size_t i = 0; i < targets.size(); ++i) {
        targets[i] = i;
    }
    return PauliString(std::move(ops), std::move(targets));
}

PauliString PauliString::parse(const std::string& text) {
    std::vector<PauliLabel> ops;
    for (char c : text) {
        if (c == ' ' || c == ',') {
            continue;
        }
        ops.push_back(pauli_from_char(c));
    }
    if (ops.empty()) {
        throw InvalidArgument("empty Pauli string");
    }
    return on_leading(std::move(ops));
}

PauliLabel PauliString::label_on(std::size_t q) const noexcept {
    for (std::size_t i = 0; i < targets_.size(); ++i) {
        if (targets_[i] == q) {
            return ops_[i];
        }
    }
    return PauliLabel::I;
}

std::string PauliString::tensor_notation() const {
    std::string out;
    for (std::size_t i = 0; i < ops_.size(); ++i) {
        if (i != 0) {
            out += "⊗";
        }
        out += to_string(ops_[i]);
    }
    return out;
}

std::string PauliString::compact() const {
    std::string out;
    for (auto op : ops_) {
        out += to_char(op);
    }
    return out;
}

StateVector basis_ket(std::size_t n, std::uint64_t index) {
    if (n == 0 || n > kMaxQubits) {
        throw InvalidArgument("qubit count " + std::to_string(n) + " out of range");
    }
    const std::uint64_t dim = std::uint64_t{1} << n;
    if (index >= dim) {
        throw InvalidArgument("basis index " + std::to_string(index) + " out of range for " +
                              std::to_string(n) + " qubits");
    }
    std::vector<Complex> amps(dim);
    amps[index] = 1.0;
    return StateVector::from_normalized(std::move(amps));
}

StateVector ghz_state(std::size_t n) {
    if (n < 2 || n > kMaxQubits) {
        throw InvalidArgument("GHZ state needs 2.." + std::to_string(kMaxQubits) +
                              " qubits, got " + std::to_string(n));
    }
    std::vector<Complex> amps(std::size_t{1} << n);
    amps.front() = std::numbers::sqrt2 / 2.0;
    amps.back() = std::numbers::sqrt2 / 2.0;
    return StateVector::from_normalized(std::move(amps));
}

StateVector bell_state() { return ghz_state(2); }

StateVector tensor_product(const StateVector& a, const StateVector& b) {
    if (a.n_qubits() + b.n_qubits() > kMaxQubits) {
        throw InvalidArgument("tensor product exceeds the " + std::to_string(kMaxQubits) +
                              "-qubit cap");
    }
    std::vector<Complex> amps(a.dimension() * b.dimension());
    for (std::size_t x = 0; x < a.dimension(); ++x) {
        if (a[x] == Complex{}) {
            continue;
        }
        for (std::size_t y = 0; y < b.dimension(); ++y) {
            amps[x * b.dimension() + y] = a[x] * b[y];
        }
    }
    return StateVector::from_normalized(std::move(amps));
}

StateVector apply_pauli_string(const StateVector& state, const PauliString& ps) {
    const std::size_t n = state.n_qubits();
    check_distinct(ps.targets(), n);

    std::uint64_t flip = 0;
    std::uint64_t z_mask = 0;   // negate when the source bit is 1
    std::uint64_t y_mask = 0;   // negate when the source bit is 0
    for (std::size_t i = 0; i < ps.size(); ++i) {
        const std::uint64_t bit = std::uint64_t{1} << bit_position(ps.targets()[i], n);
        switch (ps.ops()[i]) {
            case PauliLabel::I: break;
            case PauliLabel::X: flip |= bit; break;
            case PauliLabel::Z: z_mask |= bit; break;
            case PauliLabel::iY: flip |= bit; y_mask |= bit; break;
        }
    }

    std::vector<Complex> out(state.dimension());
    for (std::uint64_t idx = 0; idx < state.dimension(); ++idx) {
        const int negations = std::popcount(idx & z_mask) + std::popcount(~idx & y_mask);
        const Complex amp = (negations & 1) ? -state[idx] : state[idx];
        out[idx ^ flip] = amp;
    }
    return StateVector::from_normalized(std::move(out));
}

Complex inner_product(const StateVector& a, const StateVector& b) {
    if (a.n_qubits() != b.n_qubits()) {
        throw InvalidArgument("inner product of a " + std::to_string(a.n_qubits()) +
                              "-qubit and a " + std::to_string(b.n_qubits()) + "-qubit state");
    }
    Complex acc{};
    for (std::size_t i = 0; i < a.dimension(); ++i) {
        acc += std::conj(a[i]) * b[i];
    }
    return acc;
}

StateVector apply_hadamard(const StateVector& state, std::size_t qubit) {
    check_qubit(qubit, state.n_qubits());
    const std::uint64_t bit = std::uint64_t{1} << bit_position(qubit, state.n_qubits());
    const double h = std::numbers::sqrt2 / 2.0;
    std::vector<Complex> out(state.amplitudes().begin(), state.amplitudes().end());
    for (std::uint64_t idx = 0; idx < out.size(); ++idx) {
        if (idx & bit) {
            continue;
        }
        const Complex a0 = out[idx];
        const Complex a1 = out[idx | bit];
        out[idx] = h * (a0 + a1);
        out[idx | bit] = h * (a0 - a1);
    }
    return StateVector::from_normalized(std::move(out));
}

StateVector apply_cnot(const StateVector& state, std::size_t control, std::size_t target) {
    const std::size_t n = state.n_qubits();
    check_qubit(control, n);
    check_qubit(target, n);
    if (control == target) {
        throw InvalidArgument("CNOT control and target coincide");
    }
    const std::uint64_t cbit = std::uint64_t{1} << bit_position(control, n);
    const std::uint64_t tbit = std::uint64_t{1} << bit_position(target, n);
    std::vector<Complex> out(state.dimension());
    for (std::uint64_t idx = 0; idx < out.size(); ++idx) {
        out[(idx & cbit) ? (idx ^ tbit) : idx] = state[idx];
    }
    return StateVector::from_normalized(std::move(out));
}

StateVector hadamard_all(const StateVector& state) {
    // In-place Walsh-Hadamard transform with 1/sqrt(2) per stage.
    std::vector<Complex> out(state.amplitudes().begin(), state.amplitudes().end());
    const double h = std::numbers::sqrt2 / 2.0;
    for (std::size_t half = 1; half < out.size(); half <<= 1) {
        for (std::size_t block = 0; block < out.size(); block += 2 * half) {
            for (std::size_t i = block; i < block + half; ++i) {
                const Complex a0 = out[i];
                const Complex a1 = out[i + half];
                out[i] = h * (a0 + a1);
                out[i + half] = h * (a0 - a1);
            }
        }
    }
    return StateVector::from_normalized(std::move(out));
}

StateVector apply_two_qubit(const StateVector& state, std::size_t high, std::size_t low,
                            const Matrix4& u) {
    const std::size_t n = state.n_qubits();
    check_qubit(high, n);
    check_qubit(low, n);
    if (high == low) {
        throw InvalidArgument("two-qubit gate needs distinct qubits");
    }
    const std::uint64_t hb = std::uint64_t{1} << bit_position(high, n);
    const std::uint64_t lb = std::uint64_t{1} << bit_position(low, n);
    std::vector<Complex> out(state.dimension());
    for (std::uint64_t base = 0; base < out.size(); ++base) {
        if (base & (hb | lb)) {
            continue;
        }
        const std::array<std::uint64_t, 4> idx{base, base | lb, base | hb, base | hb | lb};
        for (std::size_t r = 0; r < 4; ++r) {
            Complex acc{};
            for (std::size_t c = 0; c < 4; ++c) {
                acc += u[r][c] * state[idx[c]];
            }
            out[idx[r]] = acc;
        }
    }
    // Only unitary inputs keep the norm; callers validate unitarity.
    return StateVector::from_normalized(std::move(out));
}

std::vector<double> marginal_probabilities(const StateVector& state,
                                           std::span<const std::size_t> qubits) {
    const std::size_t n = state.n_qubits();
    if (qubits.empty()) {
        throw InvalidArgument("no qubits to measure");
    }
    check_distinct(qubits, n);
    std::vector<double> probs(std::size_t{1} << qubits.size(), 0.0);
    for (std::uint64_t idx = 0; idx < state.dimension(); ++idx) {
        const double p = std::norm(state[idx]);
        if (p == 0.0) {
            continue;
        }
        std::uint64_t outcome = 0;
        for (auto q : qubits) {
            outcome = (outcome << 1) | (qubit_bit(idx, q, n) ? 1U : 0U);
        }
        probs[outcome] += p;
    }
    return probs;
}

Measurement measure_qubits(const StateVector& state, std::span<const std::size_t> qubits,
                           Rng& rng) {
    const auto probs = marginal_probabilities(state, qubits);
    const double r = uniform01(rng);
    std::uint64_t outcome = 0;
    double acc = 0.0;
    std::uint64_t last_nonzero = 0;
    for (; outcome < probs.size(); ++outcome) {
        if (probs[outcome] > 0.0) {
            last_nonzero = outcome;
        }
        acc += probs[outcome];
        if (r < acc) {
            break;
        }
    }
    if (outcome == probs.size()) {
        outcome = last_nonzero;  // r landed in the round-off gap above the cumulative sum
    }
    const double p = probs[outcome];
    if (!(p > 0.0)) {
        throw InternalError("measurement selected a zero-probability outcome");
    }

    const std::size_t n = state.n_qubits();
    const double scale = 1.0 / std::sqrt(p);
    std::vector<Complex> out(state.dimension());
    for (std::uint64_t idx = 0; idx < state.dimension(); ++idx) {
        std::uint64_t o = 0;
        for (auto q : qubits) {
            o = (o << 1) | (qubit_bit(idx, q, n) ? 1U : 0U);
        }
        if (o == outcome) {
            out[idx] = state[idx] * scale;
        }
    }
    return Measurement{outcome, p, StateVector::from_normalized(std::move(out))};
}

StateVector permute_qubits(const StateVector& state, std::span<const std::size_t> perm) {
    const std::size_t n = state.n_qubits();
    if (perm.size() != n) {
        throw InvalidArgument("permutation has " + std::to_string(perm.size()) +
                              " entries for a " + std::to_string(n) + "-qubit register");
    }
    std::vector<bool> hit(n, false);
    for (auto p : perm) {
        if (p >= n || hit[p]) {
            throw InvalidArgument("qubit map is not a permutation");
        }
        hit[p] = true;
    }
    std::vector<Complex> out(state.dimension());
    for (std::uint64_t idx = 0; idx < state.dimension(); ++idx) {
        std::uint64_t moved = 0;
        for (std::size_t q = 0; q < n; ++q) {
            if (qubit_bit(idx, q, n)) {
                moved |= std::uint64_t{1} << bit_position(perm[q], n);
            }
        }
        out[moved] = state[idx];
    }
    return StateVector::from_normalized(std::move(out));
}

bool approx_equal(const StateVector& a, const StateVector& b, double tol) {
    if (a.n_qubits() != b.n_qubits()) {
        return false;
    }
    for (std::size_t i = 0; i < a.dimension(); ++i) {
        if (std::abs(a[i] - b[i]) > tol) {
            return false;
        }
    }
    return true;
}

bool equal_up_to_global_phase(const StateVector& a, const StateVector& b, double tol) {
    if (a.n_qubits() != b.n_qubits()) {
        return false;
    }
    const Complex overlap = inner_product(a, b);
    const double mag = std::abs(overlap);
    if (mag == 0.0) {
        return false;
    }
    const Complex phase = overlap / mag;
    for (std::size_t i = 0; i < a.dimension(); ++i) {
        if (std::abs(b[i] - phase * a[i]) > tol) {
            return false;
        }
    }
    return true;
}

std::vector<Amplitude> support(const StateVector& state, double threshold) {
    std::vector<Amplitude> out;
    for (std::uint64_t idx = 0; idx < state.dimension(); ++idx) {
        if (std::abs(state[idx]) > threshold) {
            out.push_back({idx, state[idx]});
        }
    }
    return out;
}

std::string ket_label(std::uint64_t index, std::size_t n) {
    std::string s = "|";
    for (std::size_t q = 0; q < n; ++q) {
        s += qubit_bit(index, q, n) ? '1' : '0';
    }
    return s + ">";
}

}  // namespace sdc

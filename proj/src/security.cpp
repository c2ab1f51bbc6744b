#include "sdc/security.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numbers>
#include <thread>

#include <Eigen/Dense>

#include "sdc/errors.hpp"

namespace sdc {

namespace {

using Ket2 = std::array<Complex, 2>;

double norm2(const Ket2& v) { return std::sqrt(std::norm(v[0]) + std::norm(v[1])); }

Ket2 minus(const Ket2& a, const Ket2& b) { return {a[0] - b[0], a[1] - b[1]}; }

Eigen::Matrix4cd to_eigen(const Matrix4& u) {
    Eigen::Matrix4cd m;
    for (int r = 0; r < 4; ++r) {
        for (int c = 0; c < 4; ++c) {
            m(r, c) = u[r][c];
        }
    }
    return m;
}

Matrix4 from_eigen(const Eigen::Matrix4cd& m) {
    Matrix4 u{};
    for (int r = 0; r < 4; ++r) {
        for (int c = 0; c < 4; ++c) {
            u[r][c] = m(r, c);
        }
    }
    return u;
}

double standard_normal(Rng& rng) {
    // Box-Muller on the platform-independent uniform draw.
    double u1 = uniform01(rng);
    while (u1 <= 0.0) {
        u1 = uniform01(rng);
    }
    const double u2 = uniform01(rng);
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

template <int N>
Eigen::Matrix<Complex, N, N> haar_unitary(Rng& rng) {
    Eigen::Matrix<Complex, N, N> g;
    for (int r = 0; r < N; ++r) {
        for (int c = 0; c < N; ++c) {
            g(r, c) = Complex(standard_normal(rng), standard_normal(rng)) / std::numbers::sqrt2;
        }
    }
    Eigen::HouseholderQR<Eigen::Matrix<Complex, N, N>> qr(g);
    Eigen::Matrix<Complex, N, N> q = qr.householderQ();
    const Eigen::Matrix<Complex, N, N> r = qr.matrixQR().template triangularView<Eigen::Upper>();
    for (int i = 0; i < N; ++i) {
        const Complex d = r(i, i);
        q.col(i) *= std::abs(d) > 0.0 ? d / std::abs(d) : Complex(1.0);
    }
    return q;
}

void check_protocol(const StateVector& state, std::size_t protocol_qubits) {
    if (protocol_qubits < 2 || protocol_qubits > state.n_qubits()) {
        throw InvalidArgument("protocol register of " + std::to_string(protocol_qubits) +
                              " qubits does not fit a " + std::to_string(state.n_qubits()) +
                              "-qubit state (need at least Alice + Bob)");
    }
}

/// Joint outcome distribution of the protocol register in `basis`; Bob is the LSB.
std::vector<double> outcome_distribution(const StateVector& state, Basis basis,
                                         std::size_t protocol_qubits) {
    std::vector<std::size_t> qubits(protocol_qubits);
    for (std::size_t q = 0; q < protocol_qubits; ++q) {
        qubits[q] = q;
    }
    if (basis == Basis::computational) {
        return marginal_probabilities(state, qubits);
    }
    auto rotated = state;
    for (auto q : qubits) {
        rotated = apply_hadamard(rotated, q);
    }
    return marginal_probabilities(rotated, qubits);
}

double inconsistent_mass(const std::vector<double>& probs, Basis basis,
                         std::size_t protocol_qubits) {
    double mass = 0.0;
    for (std::uint64_t o = 0; o < probs.size(); ++o) {
        if (!outcomes_consistent(basis, o >> 1, protocol_qubits - 1,
                                 static_cast<std::uint8_t>(o & 1U))) {
            mass += probs[o];
        }
    }
    return mass;
}

}  // namespace

std::vector<PmTerm> pm_support(const StateVector& state) {
    std::vector<PmTerm> out;
    for (const auto& a : support(hadamard_all(state), 1e-10)) {
        out.push_back({a.index, a.value});
    }
    return out;
}

std::string to_string(ParityClass c) {
    switch (c) {
        case ParityClass::even_ghz: return "even";
        case ParityClass::odd_ghz: return "odd";
        case ParityClass::neither: return "neither";
    }
    return "neither";
}

ParityClass parity_class(const StateVector& state, double tol) {
    const auto terms = pm_support(state);
    const std::size_t n = state.n_qubits();
    const std::size_t expected_terms = std::size_t{1} << (n - 1);
    if (terms.size() != expected_terms) {
        return ParityClass::neither;
    }
    const int parity = std::popcount(terms.front().mask) & 1;
    const double magnitude = 1.0 / std::sqrt(static_cast<double>(expected_terms));
    for (const auto& t : terms) {
        if ((std::popcount(t.mask) & 1) != parity ||
            std::abs(std::abs(t.amplitude) - magnitude) > tol) {
            return ParityClass::neither;
        }
    }
    return parity == 0 ? ParityClass::even_ghz : ParityClass::odd_ghz;
}

double unitarity_residual(const Matrix4& u) {
    const auto m = to_eigen(u);
    return (m.adjoint() * m - Eigen::Matrix4cd::Identity()).cwiseAbs().maxCoeff();
}

EveAttack::EveAttack(const Matrix4& u, double tol) : u_(u) {
    const double residual = unitarity_residual(u);
    if (!(residual <= tol)) {
        throw NonUnitary("attack matrix is not unitary: max |U^dagger U - I| = " +
                             std::to_string(residual),
                         residual);
    }
}

EveAttack EveAttack::identity() {
    return EveAttack(from_eigen(Eigen::Matrix4cd::Identity()));
}

EveAttack EveAttack::cnot() {
    Matrix4 u{};
    u[0][0] = 1.0;
    u[1][1] = 1.0;
    u[3][2] = 1.0;
    u[2][3] = 1.0;
    return EveAttack(u);
}

EveAttack EveAttack::swap_with_ancilla() {
    Matrix4 u{};
    u[0][0] = 1.0;
    u[2][1] = 1.0;
    u[1][2] = 1.0;
    u[3][3] = 1.0;
    return EveAttack(u);
}

EveAttack EveAttack::phase_flip() {
    Matrix4 u{};
    u[0][0] = 1.0;
    u[1][1] = 1.0;
    u[2][2] = -1.0;
    u[3][3] = -1.0;
    return EveAttack(u);
}

EveAttack EveAttack::haar_random(Rng& rng) { return EveAttack(from_eigen(haar_unitary<4>(rng))); }

EveAttack EveAttack::random_undetectable(Rng& rng) {
    // |0><0| (x) V + |1><1| (x) V W with W|0> = |0>, times a global phase.
    const Eigen::Matrix2cd v = haar_unitary<2>(rng);
    Eigen::Matrix2cd w = Eigen::Matrix2cd::Identity();
    w(1, 1) = std::polar(1.0, 2.0 * std::numbers::pi * uniform01(rng));
    const Complex phase = std::polar(1.0, 2.0 * std::numbers::pi * uniform01(rng));
    Eigen::Matrix4cd u = Eigen::Matrix4cd::Zero();
    u.block<2, 2>(0, 0) = phase * v;
    u.block<2, 2>(2, 2) = phase * v * w;
    return EveAttack(from_eigen(u));
}

std::optional<EveAttack> EveAttack::preset(const std::string& name) {
    if (name == "identity") return identity();
    if (name == "cnot") return cnot();
    if (name == "swap0") return swap_with_ancilla();
    if (name == "phase") return phase_flip();
    return std::nullopt;
}

std::array<Complex, 2> EveAttack::xi(int i, int j) const {
    if (i < 0 || i > 1 || j < 0 || j > 1) {
        throw InvalidArgument("xi indices must be 0 or 1");
    }
    // Column |i 0> of U; rows |j 0>, |j 1>.
    const int col = 2 * i;
    return {u_[2 * j][col], u_[2 * j + 1][col]};
}

StateVector apply_eve(const StateVector& state, const EveAttack& attack) {
    const auto extended = tensor_product(state, basis_ket(1, 0));
    const std::size_t bob = state.n_qubits() - 1;
    return apply_two_qubit(extended, bob, bob + 1, attack.unitary());
}

std::string to_string(Basis b) { return b == Basis::computational ? "BMB1" : "BMB2"; }

bool outcomes_consistent(Basis basis, std::uint64_t alice_outcome, std::size_t alice_qubits,
                         std::uint8_t bob_outcome) {
    if (basis == Basis::computational) {
        const std::uint64_t all_ones = (std::uint64_t{1} << alice_qubits) - 1;
        return alice_outcome == (bob_outcome ? all_ones : 0);
    }
    return (std::popcount(alice_outcome) & 1) == (bob_outcome & 1);
}

RoundSampler::RoundSampler(const StateVector& state, std::size_t protocol_qubits)
    : protocol_qubits_(protocol_qubits) {
    check_protocol(state, protocol_qubits);
    for (auto basis : {Basis::computational, Basis::hadamard}) {
        const auto probs = outcome_distribution(state, basis, protocol_qubits);
        const auto b = static_cast<std::size_t>(basis);
        inconsistency_[b] = inconsistent_mass(probs, basis, protocol_qubits);
        auto& cum = cumulative_[b];
        cum.resize(probs.size());
        double acc = 0.0;
        for (std::size_t o = 0; o < probs.size(); ++o) {
            acc += probs[o];
            cum[o] = acc;
        }
    }
}

RoundRecord RoundSampler::sample(Basis basis, Rng& rng) const {
    const auto& cum = cumulative_[static_cast<std::size_t>(basis)];
    const double r = uniform01(rng) * cum.back();
    auto it = std::upper_bound(cum.begin(), cum.end(), r);
    if (it == cum.end()) {
        --it;
    }
    // Skip zero-width bins that upper_bound can land on only through round-off.
    while (it != cum.begin() && *it == *(it - 1)) {
        --it;
    }
    const auto outcome = static_cast<std::uint64_t>(it - cum.begin());

    RoundRecord rec;
    rec.basis = basis;
    rec.bob_outcome = static_cast<std::uint8_t>(outcome & 1U);
    rec.alice_outcome = outcome >> 1;
    rec.consistent =
        outcomes_consistent(basis, rec.alice_outcome, protocol_qubits_ - 1, rec.bob_outcome);
    return rec;
}

RoundRecord RoundSampler::sample(Rng& rng) const {
    const Basis basis = (rng() >> 63) ? Basis::hadamard : Basis::computational;
    return sample(basis, rng);
}

double RoundSampler::inconsistency(Basis basis) const {
    return inconsistency_[static_cast<std::size_t>(basis)];
}

RoundRecord security_round(const StateVector& state, Basis basis, Rng& rng,
                           std::size_t protocol_qubits) {
    return RoundSampler(state, protocol_qubits).sample(basis, rng);
}

DetectionProbability detection_probability(const StateVector& state,
                                           std::size_t protocol_qubits) {
    check_protocol(state, protocol_qubits);
    DetectionProbability p;
    p.computational = inconsistent_mass(
        outcome_distribution(state, Basis::computational, protocol_qubits), Basis::computational,
        protocol_qubits);
    p.hadamard = inconsistent_mass(outcome_distribution(state, Basis::hadamard, protocol_qubits),
                                   Basis::hadamard, protocol_qubits);
    p.total = 0.5 * (p.computational + p.hadamard);
    return p;
}

UndetectableCertificate undetectable_certificate(const EveAttack& attack, double tol) {
    const auto xi00 = attack.xi(0, 0);
    const auto xi01 = attack.xi(0, 1);
    const auto xi10 = attack.xi(1, 0);
    const auto xi11 = attack.xi(1, 1);

    UndetectableCertificate cert;
    cert.xi01_norm = norm2(xi01);
    cert.xi10_norm = norm2(xi10);
    cert.xi00_minus_xi11 = norm2(minus(xi00, xi11));

    const Complex overlap = std::conj(xi11[0]) * xi00[0] + std::conj(xi11[1]) * xi00[1];
    const Complex phase = std::abs(overlap) > 0.0 ? overlap / std::abs(overlap) : Complex(1.0);
    cert.xi00_minus_xi11_up_to_phase =
        norm2(minus(xi00, {phase * xi11[0], phase * xi11[1]}));

    // Action on |b>|0> against the product form |b> (x) xi00.
    const auto& u = attack.unitary();
    for (int b = 0; b < 2; ++b) {
        double acc = 0.0;
        for (int row = 0; row < 4; ++row) {
            const int bob = row >> 1;
            const Complex target = bob == b ? xi00[static_cast<std::size_t>(row & 1)] : Complex{};
            acc += std::norm(u[static_cast<std::size_t>(row)][static_cast<std::size_t>(2 * b)] -
                             target);
        }
        cert.product_form_residual = std::max(cert.product_form_residual, std::sqrt(acc));
    }

    cert.undetectable = cert.xi01_norm <= tol && cert.xi10_norm <= tol &&
                        cert.xi00_minus_xi11 <= tol && cert.product_form_residual <= 2.0 * tol;
    return cert;
}

SimulationReport security_simulation(const SimulationConfig& config) {
    if (config.rounds == 0) {
        throw InvalidArgument("security simulation needs at least one round");
    }
    if (config.n_qubits < 2) {
        throw InvalidArgument("security simulation needs a GHZ state of at least 2 qubits");
    }
    auto state = ghz_state(config.n_qubits);
    if (config.attack) {
        state = apply_eve(state, *config.attack);
    }
    const RoundSampler sampler(state, config.n_qubits);

    struct Tally {
        BasisStats comp;
        BasisStats had;
    };
    const unsigned threads =
        std::max(1U, std::min<unsigned>(config.threads, static_cast<unsigned>(config.rounds)));
    std::vector<Tally> tallies(threads);
    auto run = [&](unsigned t) {
        const std::size_t begin = config.rounds * t / threads;
        const std::size_t end = config.rounds * (t + 1) / threads;
        auto& tally = tallies[t];
        for (std::size_t r = begin; r < end; ++r) {
            Rng rng(derive_seed(config.seed, r));
            const auto rec = sampler.sample(rng);
            auto& stats = rec.basis == Basis::computational ? tally.comp : tally.had;
            ++stats.rounds;
            stats.consistent += rec.consistent ? 1 : 0;
        }
    };
    if (threads == 1) {
        run(0);
    } else {
        std::vector<std::jthread> pool;
        for (unsigned t = 0; t < threads; ++t) {
            pool.emplace_back(run, t);
        }
    }

    SimulationReport report;
    report.rounds = config.rounds;
    for (const auto& t : tallies) {
        report.computational.rounds += t.comp.rounds;
        report.computational.consistent += t.comp.consistent;
        report.hadamard.rounds += t.had.rounds;
        report.hadamard.consistent += t.had.consistent;
    }
    report.inconsistent = (report.computational.rounds - report.computational.consistent) +
                          (report.hadamard.rounds - report.hadamard.consistent);
    report.detection_rate =
        static_cast<double>(report.inconsistent) / static_cast<double>(report.rounds);
    report.exact.computational = sampler.inconsistency(Basis::computational);
    report.exact.hadamard = sampler.inconsistency(Basis::hadamard);
    report.exact.total = 0.5 * (report.exact.computational + report.exact.hadamard);
    report.standard_error = std::sqrt(report.exact.total * (1.0 - report.exact.total) /
                                      static_cast<double>(report.rounds));
    report.aborted = report.detection_rate > config.abort_threshold;
    return report;
}

}  // namespace sdc

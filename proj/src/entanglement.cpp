#include "sdc/entanglement.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <sstream>

#include "sdc/errors.hpp"

namespace sdc {

namespace {

constexpr double kEigenCutoff = 1e-12;
constexpr std::size_t kMaxCutQubits = 12;

std::size_t qubits_for_dim(Eigen::Index dim) {
    if (dim < 2 || (dim & (dim - 1)) != 0) {
        throw InvalidArgument("density matrix dimension " + std::to_string(dim) +
                              " is not a power of two >= 2");
    }
    std::size_t n = 0;
    while ((Eigen::Index{1} << n) < dim) {
        ++n;
    }
    return n;
}

Eigen::MatrixXcd symmetrized(const Eigen::MatrixXcd& m) { return (m + m.adjoint()) / 2.0; }

/// Splits register indices into (kept, traced) coordinates.
struct IndexSplit {
    std::vector<std::uint64_t> kept;    // per full index
    std::vector<std::uint64_t> traced;  // per full index
    std::size_t kept_qubits = 0;
    std::size_t traced_qubits = 0;
};

IndexSplit split_indices(std::size_t n, std::span<const std::size_t> keep) {
    if (keep.empty() || keep.size() >= n) {
        throw InvalidArgument("kept qubit set must be a non-empty proper subset of the " +
                              std::to_string(n) + "-qubit register");
    }
    std::vector<bool> is_kept(n, false);
    for (auto q : keep) {
        if (q >= n || is_kept[q]) {
            throw InvalidArgument("kept qubit set has an invalid or repeated index");
        }
        is_kept[q] = true;
    }
    std::vector<std::size_t> traced;
    for (std::size_t q = 0; q < n; ++q) {
        if (!is_kept[q]) {
            traced.push_back(q);
        }
    }

    IndexSplit split;
    split.kept_qubits = keep.size();
    split.traced_qubits = traced.size();
    const std::uint64_t dim = std::uint64_t{1} << n;
    split.kept.resize(dim);
    split.traced.resize(dim);
    for (std::uint64_t idx = 0; idx < dim; ++idx) {
        std::uint64_t k = 0;
        for (auto q : keep) {
            k = (k << 1) | (qubit_bit(idx, q, n) ? 1U : 0U);
        }
        std::uint64_t t = 0;
        for (auto q : traced) {
            t = (t << 1) | (qubit_bit(idx, q, n) ? 1U : 0U);
        }
        split.kept[idx] = k;
        split.traced[idx] = t;
    }
    return split;
}

double entropy_of(const Eigen::VectorXd& eigenvalues) {
    double s = 0.0;
    for (Eigen::Index i = 0; i < eigenvalues.size(); ++i) {
        const double l = eigenvalues[i];
        if (l > kEigenCutoff) {
            s -= l * std::log2(l);
        }
    }
    return s;
}

/// Calls `visit` with every subset of {0..n-1} of size `m`, in lexicographic order.
void for_each_subset(std::size_t n, std::size_t m,
                     const std::function<void(const std::vector<std::size_t>&)>& visit) {
    std::vector<std::size_t> subset(m);
    for (std::size_t i = 0; i < m; ++i) {
        subset[i] = i;
    }
    while (true) {
        visit(subset);
        std::size_t i = m;
        while (i > 0 && subset[i - 1] == n - m + (i - 1)) {
            --i;
        }
        if (i == 0) {
            return;
        }
        ++subset[i - 1];
        for (std::size_t j = i; j < m; ++j) {
            subset[j] = subset[j - 1] + 1;
        }
    }
}

void check_cut_size(std::size_t n, const char* what) {
    if (n < 2) {
        throw InvalidArgument(std::string(what) + " needs at least 2 qubits");
    }
    if (n > kMaxCutQubits) {
        throw InvalidArgument(std::string(what) + " enumerates every cut and is capped at " +
                              std::to_string(kMaxCutQubits) + " qubits");
    }
}

std::vector<std::size_t> complement(std::size_t n, std::span<const std::size_t> subset) {
    std::vector<bool> in(n, false);
    for (auto q : subset) {
        if (q >= n || in[q]) {
            throw InvalidArgument("qubit subset has an invalid or repeated index");
        }
        in[q] = true;
    }
    std::vector<std::size_t> out;
    for (std::size_t q = 0; q < n; ++q) {
        if (!in[q]) {
            out.push_back(q);
        }
    }
    return out;
}

}  // namespace

DensityOperator::DensityOperator(Eigen::MatrixXcd matrix, double tol) {
    if (matrix.rows() != matrix.cols()) {
        throw InvalidArgument("density matrix is not square");
    }
    n_qubits_ = qubits_for_dim(matrix.rows());
    const double herm = (matrix - matrix.adjoint()).cwiseAbs().maxCoeff();
    if (herm > tol) {
        throw InvalidArgument("density matrix is not Hermitian (residual " +
                              std::to_string(herm) + ")");
    }
    const Complex tr = matrix.trace();
    if (std::abs(tr - 1.0) > tol) {
        throw InvalidArgument("density matrix trace is not 1");
    }
    matrix_ = symmetrized(matrix);
    if (eigenvalues().minCoeff() < -tol) {
        throw InvalidArgument("density matrix has a negative eigenvalue");
    }
}

DensityOperator DensityOperator::pure(const StateVector& state) {
    Eigen::VectorXcd v(static_cast<Eigen::Index>(state.dimension()));
    for (std::size_t i = 0; i < state.dimension(); ++i) {
        v[static_cast<Eigen::Index>(i)] = state[i];
    }
    return from_trusted(v * v.adjoint());
}

DensityOperator DensityOperator::maximally_mixed(std::size_t n) {
    if (n == 0 || n > kMaxCutQubits) {
        throw InvalidArgument("maximally mixed operator size out of range");
    }
    const auto dim = Eigen::Index{1} << n;
    return from_trusted(Eigen::MatrixXcd::Identity(dim, dim) / static_cast<double>(dim));
}

DensityOperator DensityOperator::from_trusted(Eigen::MatrixXcd matrix) {
    DensityOperator rho;
    rho.n_qubits_ = qubits_for_dim(matrix.rows());
    rho.matrix_ = symmetrized(matrix);
    return rho;
}

Eigen::VectorXd DensityOperator::eigenvalues() const {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(matrix_, Eigen::EigenvaluesOnly);
    return solver.eigenvalues();
}

double DensityOperator::purity() const { return (matrix_ * matrix_).trace().real(); }

double DensityOperator::distance_from_maximally_mixed() const {
    const auto dim = matrix_.rows();
    const Eigen::MatrixXcd target =
        Eigen::MatrixXcd::Identity(dim, dim) / static_cast<double>(dim);
    return (matrix_ - target).cwiseAbs().maxCoeff();
}

Bipartition::Bipartition(std::size_t n_qubits, std::vector<std::size_t> alice)
    : n_qubits_(n_qubits), alice_(std::move(alice)), bob_(complement(n_qubits, alice_)) {
    if (alice_.empty() || bob_.empty()) {
        throw InvalidArgument("both sides of a bipartition must be non-empty");
    }
}

const std::vector<std::size_t>& Bipartition::smaller_side() const noexcept {
    return alice_.size() < bob_.size() ? alice_ : bob_;
}

DensityOperator reduced_density(const StateVector& state, std::span<const std::size_t> keep) {
    const auto split = split_indices(state.n_qubits(), keep);
    // rho_keep = M M^dagger with M(kept, traced) = psi.
    const auto rows = Eigen::Index{1} << split.kept_qubits;
    const auto cols = Eigen::Index{1} << split.traced_qubits;
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(rows, cols);
    for (std::uint64_t idx = 0; idx < state.dimension(); ++idx) {
        m(static_cast<Eigen::Index>(split.kept[idx]), static_cast<Eigen::Index>(split.traced[idx])) =
            state[idx];
    }
    return DensityOperator::from_trusted(m * m.adjoint());
}

DensityOperator reduced_density(const DensityOperator& rho, std::span<const std::size_t> keep) {
    const auto split = split_indices(rho.n_qubits(), keep);
    const auto rows = Eigen::Index{1} << split.kept_qubits;
    Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(rows, rows);
    const auto& m = rho.matrix();
    const auto dim = static_cast<std::uint64_t>(m.rows());
    for (std::uint64_t i = 0; i < dim; ++i) {
        for (std::uint64_t j = 0; j < dim; ++j) {
            if (split.traced[i] != split.traced[j]) {
                continue;
            }
            out(static_cast<Eigen::Index>(split.kept[i]), static_cast<Eigen::Index>(split.kept[j])) +=
                m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
        }
    }
    return DensityOperator::from_trusted(out);
}

double von_neumann_entropy(const DensityOperator& rho) { return entropy_of(rho.eigenvalues()); }

std::vector<double> schmidt_spectrum(const StateVector& state, const Bipartition& bp) {
    if (bp.n_qubits() != state.n_qubits()) {
        throw InvalidArgument("bipartition does not match the register size");
    }
    const auto ev = reduced_density(state, bp.smaller_side()).eigenvalues();
    std::vector<double> out(ev.data(), ev.data() + ev.size());
    for (auto& l : out) {
        l = std::max(l, 0.0);
    }
    std::sort(out.begin(), out.end(), std::greater<>());
    return out;
}

AmeVerdict is_ame(const StateVector& state, double tol) {
    const std::size_t n = state.n_qubits();
    check_cut_size(n, "AME test");
    AmeVerdict verdict;
    verdict.is_ame = true;
    for (std::size_t m = 1; m <= n / 2; ++m) {
        for_each_subset(n, m, [&](const std::vector<std::size_t>& subset) {
            const auto rho = reduced_density(state, subset);
            CutEntropy cut{subset, von_neumann_entropy(rho), rho.distance_from_maximally_mixed()};
            if (cut.mixedness_residual > tol) {
                verdict.is_ame = false;
            }
            verdict.cuts.push_back(std::move(cut));
        });
    }
    return verdict;
}

GmeVerdict is_gme_pure(const StateVector& state, double tol) {
    const std::size_t n = state.n_qubits();
    check_cut_size(n, "GME test");
    GmeVerdict verdict;
    verdict.min_entropy = std::numeric_limits<double>::infinity();
    for (std::size_t m = 1; m <= n / 2; ++m) {
        for_each_subset(n, m, [&](const std::vector<std::size_t>& subset) {
            const double s = von_neumann_entropy(reduced_density(state, subset));
            if (s < verdict.min_entropy) {
                verdict.min_entropy = s;
                verdict.weakest_cut = subset;
            }
        });
    }
    verdict.is_gme = verdict.min_entropy > tol;
    return verdict;
}

GmeVerdict is_gme_pure(const DensityOperator& rho, double tol) {
    if (std::abs(rho.purity() - 1.0) > tol) {
        throw Unsupported("GME of a mixed state needs a separable-decomposition search; only "
                          "pure global states are supported");
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(rho.matrix());
    const Eigen::VectorXcd v = solver.eigenvectors().col(solver.eigenvectors().cols() - 1);
    std::vector<Complex> amps(v.data(), v.data() + v.size());
    return is_gme_pure(StateVector(std::move(amps), 1e-6), tol);
}

CapacityTerms capacity_terms(const StateVector& state, std::span<const std::size_t> alice) {
    const auto bob = complement(state.n_qubits(), alice);
    if (alice.empty() || bob.empty()) {
        throw InvalidArgument("Alice's qubits must be a non-empty proper subset");
    }
    CapacityTerms t;
    t.log2_alice_dim = static_cast<double>(alice.size());
    t.bob_entropy = von_neumann_entropy(reduced_density(state, bob));
    t.joint_entropy = 0.0;  // pure
    t.capacity = t.log2_alice_dim + t.bob_entropy - t.joint_entropy;
    return t;
}

CapacityTerms capacity_terms(const DensityOperator& rho, std::span<const std::size_t> alice) {
    const auto bob = complement(rho.n_qubits(), alice);
    if (alice.empty() || bob.empty()) {
        throw InvalidArgument("Alice's qubits must be a non-empty proper subset");
    }
    CapacityTerms t;
    t.log2_alice_dim = static_cast<double>(alice.size());
    t.bob_entropy = von_neumann_entropy(reduced_density(rho, bob));
    t.joint_entropy = von_neumann_entropy(rho);
    t.capacity = t.log2_alice_dim + t.bob_entropy - t.joint_entropy;
    return t;
}

double capacity(const SharedState& shared, std::span<const std::size_t> alice) {
    return std::visit([&](const auto& s) { return capacity_terms(s, alice).capacity; }, shared);
}

double holevo_bound(std::size_t n) {
    if (n == 0) {
        throw InvalidArgument("Holevo bound needs at least one qubit");
    }
    return static_cast<double>(n);
}

OptimalityReport optimality_report(const StateVector& state, std::span<const std::size_t> alice,
                                   double tol) {
    const std::size_t n = state.n_qubits();
    OptimalityReport r;
    r.terms = capacity_terms(state, alice);
    r.holevo_bound = holevo_bound(n);
    r.alice_qubits = alice.size();
    r.bob_qubits = n - alice.size();
    r.enough_alice_qubits = 2 * r.alice_qubits >= n;
    const auto bob = complement(n, alice);
    r.bob_mixedness_residual = reduced_density(state, bob).distance_from_maximally_mixed();
    r.bob_maximally_mixed = r.bob_mixedness_residual <= tol;
    r.optimal = std::abs(r.terms.capacity - r.holevo_bound) <= tol;
    return r;
}

}  // namespace sdc

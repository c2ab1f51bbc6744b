#include <pybind11/complex.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "sdc/coding.hpp"
#include "sdc/entanglement.hpp"
#include "sdc/errors.hpp"
#include "sdc/security.hpp"
#include "sdc/statevec.hpp"

namespace py = pybind11;

namespace {

sdc::StateVector state_from_array(py::array_t<sdc::Complex, py::array::c_style | py::array::forcecast> a) {
    if (a.ndim() != 1) {
        throw sdc::InvalidArgument("amplitudes must be a 1-d array");
    }
    return sdc::StateVector(std::vector<sdc::Complex>(a.data(), a.data() + a.size()));
}

py::array_t<sdc::Complex> state_to_array(const sdc::StateVector& s) {
    const auto amps = s.amplitudes();
    return py::array_t<sdc::Complex>(static_cast<py::ssize_t>(amps.size()), amps.data());
}

sdc::Matrix4 matrix_from_array(py::array_t<sdc::Complex, py::array::c_style | py::array::forcecast> a) {
    if (a.ndim() != 2 || a.shape(0) != 4 || a.shape(1) != 4) {
        throw sdc::InvalidArgument("attack matrix must have shape (4, 4)");
    }
    sdc::Matrix4 u{};
    auto view = a.unchecked<2>();
    for (py::ssize_t r = 0; r < 4; ++r) {
        for (py::ssize_t c = 0; c < 4; ++c) {
            u[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)] = view(r, c);
        }
    }
    return u;
}

py::array_t<sdc::Complex> matrix_to_array(const sdc::Matrix4& u) {
    py::array_t<sdc::Complex> out({4, 4});
    auto view = out.mutable_unchecked<2>();
    for (py::ssize_t r = 0; r < 4; ++r) {
        for (py::ssize_t c = 0; c < 4; ++c) {
            view(r, c) = u[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)];
        }
    }
    return out;
}

sdc::DecodeMethod method_from(const std::string& name) {
    if (name == "circuit") return sdc::DecodeMethod::circuit;
    if (name == "brute" || name == "brute_force") return sdc::DecodeMethod::brute_force;
    throw sdc::InvalidArgument("method must be 'circuit' or 'brute'");
}

sdc::Basis basis_from(const std::string& name) {
    if (name == "BMB1" || name == "computational") return sdc::Basis::computational;
    if (name == "BMB2" || name == "hadamard") return sdc::Basis::hadamard;
    throw sdc::InvalidArgument("basis must be 'BMB1' or 'BMB2'");
}

py::dict detection_dict(const sdc::DetectionProbability& p) {
    py::dict d;
    d["BMB1"] = p.computational;
    d["BMB2"] = p.hadamard;
    d["total"] = p.total;
    return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Dense-coding simulation core";

    auto base = py::register_exception<sdc::Error>(m, "Error");
    py::register_exception<sdc::InvalidArgument>(m, "InvalidArgument", PyExc_ValueError);
    py::register_exception<sdc::NoMatch>(m, "NoMatch", base.ptr());
    py::register_exception<sdc::Unsupported>(m, "Unsupported", base.ptr());

    py::class_<sdc::StateVector>(m, "StateVector")
        .def(py::init(&state_from_array), py::arg("amplitudes"))
        .def_property_readonly("n_qubits", &sdc::StateVector::n_qubits)
        .def_property_readonly("amplitudes", &state_to_array)
        .def("__len__", &sdc::StateVector::dimension)
        .def("__repr__", [](const sdc::StateVector& s) {
            return "<StateVector n_qubits=" + std::to_string(s.n_qubits()) + ">";
        });

    m.def("ghz_state", &sdc::ghz_state, py::arg("n"));
    m.def("bell_state", &sdc::bell_state);
    m.def("basis_ket", &sdc::basis_ket, py::arg("n"), py::arg("index"));
    m.def("apply_pauli", [](const sdc::StateVector& s, const std::string& labels) {
        return sdc::apply_pauli_string(s, sdc::PauliString::parse(labels));
    }, py::arg("state"), py::arg("labels"), "Apply a compact string such as 'ZXXI' to leading qubits.");
    m.def("hadamard_all", &sdc::hadamard_all);
    m.def("equal_up_to_global_phase", &sdc::equal_up_to_global_phase, py::arg("a"), py::arg("b"),
          py::arg("tol") = sdc::kDefaultTol);

    m.def("encode_ghz", [](const std::string& msg) {
        return sdc::encode_ghz(sdc::Message::parse(msg)).tensor_notation();
    }, py::arg("message"));
    m.def("encoded_state", [](const std::string& msg) {
        return sdc::encoded_state(sdc::Message::parse(msg));
    }, py::arg("message"));
    m.def("decode_ghz", [](const sdc::StateVector& s, const std::string& method) {
        return sdc::decode_ghz(s, method_from(method)).to_string();
    }, py::arg("state"), py::arg("method") = "circuit");
    m.def("bell_encoded_state", [](const std::string& msg) {
        return sdc::bell_encoded_state(sdc::Message::parse(msg));
    }, py::arg("message"));
    m.def("decode_bell", [](const sdc::StateVector& s, const std::string& method) {
        return sdc::decode_bell(s, method_from(method)).to_string();
    }, py::arg("state"), py::arg("method") = "circuit");
    m.def("gram_residuals", [](std::size_t n) {
        const auto g = sdc::verify_code_orthonormality(n);
        return py::make_tuple(g.max_off_diagonal, g.max_diagonal_deviation);
    }, py::arg("n"), "(max off-diagonal, max diagonal deviation) of the code Gram matrix.");

    m.def("dnk_encode", [](const std::string& msg, std::size_t senders) {
        const auto spec = sdc::dnk_spec(msg.size(), senders);
        py::dict parties;
        for (const auto& op : sdc::dnk_encode(sdc::Message::parse(msg), spec)) {
            parties[py::int_(op.party)] = op.ops.tensor_notation();
        }
        return parties;
    }, py::arg("message"), py::arg("senders"));
    m.def("dnk_encoded_state", [](const std::string& msg, std::size_t senders) {
        return sdc::dnk_encoded_state(sdc::Message::parse(msg), sdc::dnk_spec(msg.size(), senders));
    }, py::arg("message"), py::arg("senders"));
    m.def("dnk_decode", [](const sdc::StateVector& s, std::size_t senders, const std::string& method) {
        return sdc::dnk_decode(s, sdc::dnk_spec(s.n_qubits(), senders), method_from(method)).to_string();
    }, py::arg("state"), py::arg("senders"), py::arg("method") = "circuit");
    m.def("dnk_bob_qubits", [](std::size_t n, std::size_t k) { return sdc::dnk_spec(n, k).bob_qubits; });
    m.def("dnk_state", [](std::size_t n, std::size_t k) { return sdc::dnk_state(sdc::dnk_spec(n, k)); });

    m.def("entropy", [](const sdc::StateVector& s, const std::vector<std::size_t>& keep) {
        return sdc::von_neumann_entropy(sdc::reduced_density(s, keep));
    }, py::arg("state"), py::arg("keep"), "Entropy in bits of the marginal on `keep`.");
    m.def("mixedness_residual", [](const sdc::StateVector& s, const std::vector<std::size_t>& keep) {
        return sdc::reduced_density(s, keep).distance_from_maximally_mixed();
    }, py::arg("state"), py::arg("keep"));
    m.def("capacity", [](const sdc::StateVector& s, const std::vector<std::size_t>& alice) {
        return sdc::capacity(sdc::SharedState{s}, alice);
    }, py::arg("state"), py::arg("alice"));
    m.def("holevo_bound", &sdc::holevo_bound);
    m.def("is_ame", [](const sdc::StateVector& s) { return sdc::is_ame(s).is_ame; });
    m.def("is_gme", [](const sdc::StateVector& s) { return sdc::is_gme_pure(s).is_gme; });

    m.def("parity_class", [](const sdc::StateVector& s) { return sdc::to_string(sdc::parity_class(s)); });

    py::class_<sdc::EveAttack>(m, "EveAttack")
        .def(py::init([](py::array_t<sdc::Complex, py::array::c_style | py::array::forcecast> u) {
            return sdc::EveAttack(matrix_from_array(u));
        }), py::arg("unitary"))
        .def_static("preset", [](const std::string& name) {
            auto a = sdc::EveAttack::preset(name);
            if (!a) {
                throw sdc::InvalidArgument("unknown preset '" + name + "'");
            }
            return *a;
        })
        .def_static("haar_random", [](std::uint64_t seed) {
            sdc::Rng rng(seed);
            return sdc::EveAttack::haar_random(rng);
        }, py::arg("seed"))
        .def_property_readonly("unitary", [](const sdc::EveAttack& a) { return matrix_to_array(a.unitary()); })
        .def("xi", &sdc::EveAttack::xi);

    m.def("apply_eve", &sdc::apply_eve, py::arg("state"), py::arg("attack"));
    m.def("detection_probability", [](const sdc::StateVector& s, std::size_t protocol_qubits) {
        return detection_dict(sdc::detection_probability(s, protocol_qubits));
    }, py::arg("state"), py::arg("protocol_qubits"));
    m.def("security_round", [](const sdc::StateVector& s, const std::string& basis, std::uint64_t seed,
                               std::size_t protocol_qubits) {
        sdc::Rng rng(seed);
        const auto r = sdc::security_round(s, basis_from(basis), rng, protocol_qubits);
        py::dict d;
        d["basis"] = sdc::to_string(r.basis);
        d["bob"] = r.bob_outcome;
        d["alice"] = r.alice_outcome;
        d["consistent"] = r.consistent;
        return d;
    }, py::arg("state"), py::arg("basis"), py::arg("seed"), py::arg("protocol_qubits"));
    m.def("undetectable_certificate", [](const sdc::EveAttack& a, double tol) {
        const auto c = sdc::undetectable_certificate(a, tol);
        py::dict d;
        d["xi01_norm"] = c.xi01_norm;
        d["xi10_norm"] = c.xi10_norm;
        d["xi00_minus_xi11"] = c.xi00_minus_xi11;
        d["xi00_minus_xi11_up_to_phase"] = c.xi00_minus_xi11_up_to_phase;
        d["product_form"] = c.product_form_residual;
        d["undetectable"] = c.undetectable;
        return d;
    }, py::arg("attack"), py::arg("tol") = 1e-6);
    m.def("security_simulation", [](std::size_t n, std::optional<sdc::EveAttack> attack, std::size_t rounds,
                                    std::uint64_t seed, double threshold, unsigned threads) {
        sdc::SimulationConfig cfg;
        cfg.n_qubits = n;
        cfg.attack = std::move(attack);
        cfg.rounds = rounds;
        cfg.seed = seed;
        cfg.abort_threshold = threshold;
        cfg.threads = threads;
        sdc::SimulationReport r;
        {
            py::gil_scoped_release release;
            r = sdc::security_simulation(cfg);
        }
        py::dict d;
        d["rounds"] = r.rounds;
        d["inconsistent"] = r.inconsistent;
        d["detection_rate"] = r.detection_rate;
        d["exact"] = detection_dict(r.exact);
        d["standard_error"] = r.standard_error;
        d["aborted"] = r.aborted;
        return d;
    }, py::arg("n"), py::arg("attack") = py::none(), py::arg("rounds") = 1000, py::arg("seed") = 0,
       py::arg("threshold") = 0.0, py::arg("threads") = 1);
}

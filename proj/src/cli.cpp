#include "sdc/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "sdc/coding.hpp"
#include "sdc/entanglement.hpp"
#include "sdc/errors.hpp"
#include "sdc/security.hpp"
#include "sdc/statevec.hpp"

namespace sdc::cli {

namespace {

using json = nlohmann::ordered_json;

constexpr std::size_t kAuditMaxQubits = 12;
constexpr std::size_t kRoundtripMaxBits = 10;

struct Options {
    std::string format = "json";
    std::string output;
    std::string seed_text;
    double tol = kDefaultTol;

    std::string message;
    std::size_t senders = 0;

    std::string state_file;
    std::string scheme;
    std::string method = "circuit";

    std::size_t ghz = 0;
    std::vector<std::size_t> dnk;
    std::size_t bell = 0;

    std::size_t n = 3;
    std::string attack = "none";
    std::size_t rounds = 1000;
    double threshold = 0.0;
    unsigned threads = 1;
    double certificate_tol = 1e-6;
};

struct Report {
    std::string command;
    json params = json::object();
    json results = json::object();
    json residuals = json::object();
    json verdict = json::object();
    std::uint64_t seed = 0;
    int exit_code = kSuccess;

    json to_json() const {
        json j;
        j["command"] = command;
        j["params"] = params;
        j["results"] = results;
        j["residuals"] = residuals;
        j["verdict"] = verdict;
        j["seed"] = seed;
        return j;
    }
};

json complex_json(const Complex& z) { return json::array({z.real(), z.imag()}); }

json amplitude_list(const StateVector& state) {
    json list = json::array();
    for (const auto& a : support(state)) {
        list.push_back({{"index", a.index},
                        {"ket", ket_label(a.index, state.n_qubits())},
                        {"re", a.value.real()},
                        {"im", a.value.imag()}});
    }
    return list;
}

std::string segment(std::size_t begin, std::size_t end) {
    return "[" + std::to_string(begin) + "," + std::to_string(end) + ")";
}

json layout_json(const DnkSpec& spec) {
    json layout = json::array();
    for (std::size_t q = 0; q < spec.n_qubits(); ++q) {
        const auto& role = spec.layout[q];
        json entry = {{"qubit", q},
                      {"block", role.block == Block::ghz ? "ghz" : "bell"},
                      {"holder", role.bob ? std::string("bob")
                                          : "party " + std::to_string(role.party.value_or(0))}};
        if (role.block == Block::bell) {
            entry["pair"] = role.pair;
        }
        if (!role.bob) {
            entry["bits"] = segment(role.bit_begin, role.bit_end);
        }
        layout.push_back(std::move(entry));
    }
    return layout;
}

std::uint64_t resolve_seed(const std::string& flag) {
    std::string text = flag;
    if (text.empty()) {
        if (const char* env = std::getenv("SDC_SEED"); env != nullptr) {
            text = env;
        }
    }
    if (text.empty()) {
        return 0;
    }
    try {
        std::size_t used = 0;
        const auto value = std::stoull(text, &used, 0);
        if (used != text.size()) {
            throw std::invalid_argument(text);
        }
        return value;
    } catch (const std::exception&) {
        throw InvalidArgument("seed '" + text + "' is not a 64-bit unsigned integer");
    }
}

DecodeMethod parse_method(const std::string& name) {
    if (name == "circuit") return DecodeMethod::circuit;
    if (name == "brute" || name == "brute_force") return DecodeMethod::brute_force;
    throw InvalidArgument("unknown decode method '" + name + "' (circuit | brute)");
}

json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw InvalidArgument("cannot open '" + path + "'");
    }
    try {
        return json::parse(in);
    } catch (const json::exception& e) {
        throw InvalidArgument("'" + path + "' is not valid JSON: " + e.what());
    }
}

double json_number(const json& v, const std::string& what) {
    if (!v.is_number()) {
        throw InvalidArgument(what + " must be a number");
    }
    return v.get<double>();
}

Complex json_complex(const json& v, const std::string& what) {
    if (!v.is_array() || v.size() != 2) {
        throw InvalidArgument(what + " must be a [re, im] pair");
    }
    return {json_number(v[0], what), json_number(v[1], what)};
}

/// Accepts a dense [[re, im], ...] array, or an object with n_qubits and a sparse amplitude
/// list as written by `encode` (directly or under "results").
StateVector read_state(const json& doc) {
    if (doc.is_array()) {
        std::vector<Complex> amps;
        for (std::size_t i = 0; i < doc.size(); ++i) {
            amps.push_back(json_complex(doc[i], "amplitude " + std::to_string(i)));
        }
        return StateVector(std::move(amps), 1e-6);
    }
    const json& body = doc.contains("results") ? doc["results"] : doc;
    if (!body.is_object() || !body.contains("n_qubits") || !body.contains("amplitudes")) {
        throw InvalidArgument("state file needs a dense amplitude array or n_qubits + amplitudes");
    }
    const auto n = body["n_qubits"].get<std::size_t>();
    if (n == 0 || n > kMaxQubits) {
        throw InvalidArgument("state file declares " + std::to_string(n) + " qubits");
    }
    const auto& list = body["amplitudes"];
    if (!list.is_array()) {
        throw InvalidArgument("amplitudes must be an array");
    }
    std::vector<Complex> amps(std::size_t{1} << n);
    for (const auto& a : list) {
        if (a.is_array()) {
            throw InvalidArgument("sparse amplitudes need index, re and im fields");
        }
        const auto index = a.at("index").get<std::uint64_t>();
        if (index >= amps.size()) {
            throw InvalidArgument("amplitude index " + std::to_string(index) + " out of range");
        }
        amps[index] = {json_number(a.at("re"), "re"), json_number(a.at("im"), "im")};
    }
    return StateVector(std::move(amps), 1e-6);
}

EveAttack read_attack_file(const std::string& path) {
    const json doc = read_json_file(path);
    if (!doc.is_array() || doc.size() != 4) {
        throw InvalidArgument("attack matrix must be an array of 4 rows");
    }
    Matrix4 u{};
    for (std::size_t r = 0; r < 4; ++r) {
        if (!doc[r].is_array() || doc[r].size() != 4) {
            throw InvalidArgument("attack matrix row " + std::to_string(r) +
                                  " must hold 4 [re, im] entries");
        }
        for (std::size_t c = 0; c < 4; ++c) {
            u[r][c] = json_complex(doc[r][c], "attack matrix entry (" + std::to_string(r) + "," +
                                                  std::to_string(c) + ")");
        }
    }
    return EveAttack(u);
}

std::optional<EveAttack> resolve_attack(const std::string& spec) {
    if (spec == "none") {
        return std::nullopt;
    }
    if (spec.rfind("file:", 0) == 0) {
        return read_attack_file(spec.substr(5));
    }
    if (auto preset = EveAttack::preset(spec)) {
        return preset;
    }
    throw InvalidArgument("unknown attack '" + spec +
                          "' (none | identity | cnot | swap0 | phase | file:PATH)");
}

// ---------------------------------------------------------------------------
// Subcommands

Report cmd_encode(const Options& opt) {
    Report rep;
    rep.command = "encode";
    const auto msg = Message::parse(opt.message);
    rep.params = {{"message", msg.to_string()}, {"senders", opt.senders}, {"tolerance", opt.tol}};

    if (opt.senders == 0) {
        if (msg.size() > kMaxQubits) {
            throw InvalidArgument("GHZ coding is capped at " + std::to_string(kMaxQubits) +
                                  " bits");
        }
        const auto ops = encode_ghz(msg);
        const auto state = encoded_state(msg);
        const bool roundtrip = decode_ghz(state) == msg;
        rep.results = {{"scheme", "ghz"},
                       {"n_qubits", state.n_qubits()},
                       {"operator", ops.tensor_notation()},
                       {"compact", ops.compact()},
                       {"amplitudes", amplitude_list(state)}};
        rep.residuals = {{"norm", std::abs(state.norm_squared() - 1.0)}};
        rep.verdict = {{"roundtrip", roundtrip}};
        return rep;
    }

    const auto spec = dnk_spec(msg.size(), opt.senders);
    const auto party_ops = dnk_encode(msg, spec);
    const auto state = dnk_encoded_state(msg, spec);
    const bool roundtrip = dnk_decode(state, spec) == msg;

    json parties = json::array();
    for (std::size_t i = 0; i < party_ops.size(); ++i) {
        const auto& alloc = spec.parties[i];
        const auto& bits = msg.to_string();
        parties.push_back({{"party", party_ops[i].party},
                           {"qubits", alloc.qubits},
                           {"bits", bits.substr(alloc.bit_begin, alloc.bit_end - alloc.bit_begin)},
                           {"operator", party_ops[i].ops.tensor_notation()}});
    }
    rep.results = {{"scheme", "dnk"},
                   {"n_qubits", state.n_qubits()},
                   {"ghz_size", spec.ghz_size},
                   {"bell_pairs", spec.bell_pairs},
                   {"bob_qubits", spec.bob_qubits},
                   {"layout", layout_json(spec)},
                   {"parties", parties},
                   {"amplitudes", amplitude_list(state)}};
    rep.residuals = {{"norm", std::abs(state.norm_squared() - 1.0)}};
    rep.verdict = {{"roundtrip", roundtrip}};
    return rep;
}

Report cmd_decode(const Options& opt) {
    Report rep;
    rep.command = "decode";
    const json doc = read_json_file(opt.state_file);
    const auto state = read_state(doc);
    const auto method = parse_method(opt.method);

    std::string scheme = opt.scheme;
    std::size_t senders = opt.senders;
    if (scheme.empty()) {
        const json& body = doc.is_object() && doc.contains("results") ? doc["results"] : doc;
        scheme = body.is_object() && body.contains("scheme") ? body["scheme"].get<std::string>()
                                                             : "ghz";
        if (scheme == "dnk" && senders == 0 && doc.is_object() && doc.contains("params")) {
            senders = doc["params"].value("senders", std::size_t{0});
        }
    }
    rep.params = {{"state", opt.state_file},
                  {"scheme", scheme},
                  {"senders", senders},
                  {"method", opt.method}};

    Message msg = Message::from_value(0, 2);
    if (scheme == "ghz") {
        msg = decode_ghz(state, method);
    } else if (scheme == "bell") {
        msg = decode_bell(state, method);
    } else if (scheme == "dnk") {
        if (senders == 0) {
            throw InvalidArgument("dnk decoding needs --senders");
        }
        msg = dnk_decode(state, dnk_spec(state.n_qubits(), senders), method);
    } else {
        throw InvalidArgument("unknown scheme '" + scheme + "' (ghz | bell | dnk)");
    }
    rep.results = {{"message", msg.to_string()}, {"n_qubits", state.n_qubits()}};
    rep.residuals = {{"norm", std::abs(state.norm_squared() - 1.0)}};
    rep.verdict = {{"decoded", true}};
    return rep;
}

json cuts_json(const AmeVerdict& ame) {
    json cuts = json::array();
    for (const auto& c : ame.cuts) {
        cuts.push_back({{"subset", c.subset},
                        {"entropy", c.entropy},
                        {"mixedness_residual", c.mixedness_residual}});
    }
    return cuts;
}

void check_audit_size(std::size_t n, const std::string& what) {
    if (n < 2 || n > kAuditMaxQubits) {
        throw InvalidArgument(what + " audit needs 2 <= qubits <= " +
                              std::to_string(kAuditMaxQubits) + ", got " + std::to_string(n));
    }
}

void audit_ghz(std::size_t n, double tol, Report& rep) {
    check_audit_size(n, "GHZ");
    rep.params = {{"family", "ghz"}, {"n", n}, {"tolerance", tol}};
    const auto state = ghz_state(n);

    std::vector<std::size_t> alice(n - 1);
    for (std::size_t q = 0; q + 1 < n; ++q) {
        alice[q] = q;
    }
    const auto opt = optimality_report(state, alice, tol);
    const auto ame = is_ame(state, tol);
    const auto gme = is_gme_pure(state, tol);

    double single_max = 0.0;
    for (std::size_t q = 0; q < n; ++q) {
        const std::array<std::size_t, 1> keep{q};
        single_max = std::max(single_max,
                              reduced_density(state, keep).distance_from_maximally_mixed());
    }
    const auto parity = parity_class(state, tol);

    rep.results["capacity"] = {{"value", opt.terms.capacity},
                               {"holevo_bound", opt.holevo_bound},
                               {"log2_alice_dim", opt.terms.log2_alice_dim},
                               {"bob_entropy", opt.terms.bob_entropy},
                               {"joint_entropy", opt.terms.joint_entropy}};
    rep.results["ame"] = {{"is_ame", ame.is_ame}, {"cuts", cuts_json(ame)}};
    rep.results["gme"] = {{"is_gme", gme.is_gme},
                          {"min_entropy", gme.min_entropy},
                          {"weakest_cut", gme.weakest_cut}};
    rep.results["parity_class"] = to_string(parity);
    rep.residuals["capacity_gap"] = std::abs(opt.terms.capacity - opt.holevo_bound);
    rep.residuals["bob_marginal"] = opt.bob_mixedness_residual;
    rep.residuals["single_qubit_marginal_max"] = single_max;

    bool orthonormal = true;
    if (n <= kRoundtripMaxBits) {
        const auto gram = verify_code_orthonormality(n);
        rep.results["gram"] = {{"dimension", gram.dimension}};
        rep.residuals["gram_off_diagonal"] = gram.max_off_diagonal;
        rep.residuals["gram_diagonal"] = gram.max_diagonal_deviation;
        orthonormal = gram.max_off_diagonal < tol && gram.max_diagonal_deviation < tol;
        rep.verdict["orthonormal"] = orthonormal;
    }
    rep.verdict["optimal"] = opt.optimal;
    rep.verdict["bob_maximally_mixed"] = opt.bob_maximally_mixed;
    rep.verdict["is_ame"] = ame.is_ame;
    rep.verdict["is_gme"] = gme.is_gme;
    rep.verdict["even_parity"] = parity == ParityClass::even_ghz;
}

void audit_bell(std::size_t pairs, double tol, Report& rep) {
    check_audit_size(2 * pairs, "Bell-product");
    rep.params = {{"family", "bell"}, {"pairs", pairs}, {"tolerance", tol}};
    const auto state = bell_product_state(pairs);

    std::vector<std::size_t> alice;
    for (std::size_t p = 0; p < pairs; ++p) {
        alice.push_back(2 * p);
    }
    const auto opt = optimality_report(state, alice, tol);
    const double alice_residual = reduced_density(state, alice).distance_from_maximally_mixed();
    const auto ame = is_ame(state, tol);
    const auto gme = is_gme_pure(state, tol);

    rep.results["capacity"] = {{"value", opt.terms.capacity},
                               {"holevo_bound", opt.holevo_bound},
                               {"log2_alice_dim", opt.terms.log2_alice_dim},
                               {"bob_entropy", opt.terms.bob_entropy},
                               {"joint_entropy", opt.terms.joint_entropy}};
    rep.results["ame"] = {{"is_ame", ame.is_ame}, {"cuts", cuts_json(ame)}};
    rep.results["gme"] = {{"is_gme", gme.is_gme},
                          {"min_entropy", gme.min_entropy},
                          {"weakest_cut", gme.weakest_cut}};
    rep.residuals["capacity_gap"] = std::abs(opt.terms.capacity - opt.holevo_bound);
    rep.residuals["alice_marginal"] = alice_residual;
    rep.residuals["bob_marginal"] = opt.bob_mixedness_residual;
    rep.verdict["optimal"] = opt.optimal;
    rep.verdict["alice_maximally_mixed"] = alice_residual < tol;
    rep.verdict["is_ame"] = ame.is_ame;
    rep.verdict["is_gme"] = gme.is_gme;
}

void audit_dnk(std::size_t n, std::size_t k, double tol, Report& rep) {
    check_audit_size(n, "D(N,k)");
    rep.params = {{"family", "dnk"}, {"n", n}, {"k", k}, {"tolerance", tol}};
    const auto spec = dnk_spec(n, k);
    const auto state = dnk_state(spec);
    const auto senders = spec.sender_qubits();

    const double bob_residual =
        reduced_density(state, spec.bob_qubits).distance_from_maximally_mixed();
    const auto terms = capacity_terms(state, senders);
    const double bound = holevo_bound(spec.n_qubits());

    std::size_t failures = 0;
    if (n <= kRoundtripMaxBits) {
        for (std::uint64_t v = 0; v < (std::uint64_t{1} << n); ++v) {
            const auto msg = Message::from_value(v, n);
            try {
                failures += dnk_decode(dnk_encoded_state(msg, spec), spec) == msg ? 0 : 1;
            } catch (const NoMatch&) {
                ++failures;
            }
        }
        rep.results["roundtrip_messages"] = std::uint64_t{1} << n;
        rep.residuals["roundtrip_failures"] = failures;
    }

    rep.results["ghz_size"] = spec.ghz_size;
    rep.results["bell_pairs"] = spec.bell_pairs;
    rep.results["bob_qubits"] = spec.bob_qubits;
    rep.results["layout"] = layout_json(spec);
    rep.results["capacity"] = {{"value", terms.capacity},
                               {"holevo_bound", bound},
                               {"log2_alice_dim", terms.log2_alice_dim},
                               {"bob_entropy", terms.bob_entropy},
                               {"joint_entropy", terms.joint_entropy}};
    rep.residuals["bob_marginal"] = bob_residual;
    rep.residuals["capacity_gap"] = std::abs(terms.capacity - bound);
    rep.verdict["bob_maximally_mixed"] = bob_residual < tol;
    rep.verdict["optimal"] = std::abs(terms.capacity - bound) < tol;
    if (n <= kRoundtripMaxBits) {
        rep.verdict["roundtrip"] = failures == 0;
    }
}

Report cmd_audit(const Options& opt) {
    Report rep;
    rep.command = "audit";
    const int chosen = (opt.ghz != 0 ? 1 : 0) + (!opt.dnk.empty() ? 1 : 0) + (opt.bell != 0 ? 1 : 0);
    if (chosen != 1) {
        throw InvalidArgument("audit needs exactly one of --ghz N, --dnk N K, --bell PAIRS");
    }
    if (opt.ghz != 0) {
        audit_ghz(opt.ghz, opt.tol, rep);
    } else if (opt.bell != 0) {
        audit_bell(opt.bell, opt.tol, rep);
    } else {
        audit_dnk(opt.dnk.at(0), opt.dnk.at(1), opt.tol, rep);
    }
    return rep;
}

Report cmd_security(const Options& opt, std::uint64_t seed) {
    Report rep;
    rep.command = "security";
    if (opt.n < 2 || opt.n >= kMaxQubits) {
        throw InvalidArgument("security needs 2 <= n <= " + std::to_string(kMaxQubits - 1) +
                              ", got " + std::to_string(opt.n));
    }
    if (opt.rounds == 0) {
        throw InvalidArgument("--rounds must be at least 1");
    }
    if (!(opt.threshold >= 0.0 && opt.threshold <= 1.0)) {
        throw InvalidArgument("--threshold must lie in [0, 1]");
    }

    SimulationConfig config;
    config.n_qubits = opt.n;
    config.attack = resolve_attack(opt.attack);
    config.rounds = opt.rounds;
    config.seed = seed;
    config.abort_threshold = opt.threshold;
    config.threads = opt.threads == 0 ? std::max(1U, std::thread::hardware_concurrency())
                                      : opt.threads;

    rep.params = {{"n", opt.n},
                  {"attack", opt.attack},
                  {"rounds", opt.rounds},
                  {"threshold", opt.threshold},
                  {"tolerance", opt.tol},
                  {"certificate_tolerance", opt.certificate_tol}};

    const auto report = security_simulation(config);
    auto basis_json = [](const BasisStats& s) {
        return json{{"rounds", s.rounds},
                    {"consistent", s.consistent},
                    {"consistency_rate", s.consistency_rate()}};
    };
    const double deviation = report.detection_rate - report.exact.total;
    rep.results["basis"] = {{"BMB1", basis_json(report.computational)},
                            {"BMB2", basis_json(report.hadamard)}};
    rep.results["detection"] = {
        {"inconsistent_rounds", report.inconsistent},
        {"empirical", report.detection_rate},
        {"exact", {{"BMB1", report.exact.computational},
                   {"BMB2", report.exact.hadamard},
                   {"total", report.exact.total}}},
        {"standard_error", report.standard_error}};
    rep.residuals["empirical_minus_exact"] = deviation;
    rep.residuals["deviation_sigma"] =
        report.standard_error > 0.0 ? std::abs(deviation) / report.standard_error : 0.0;

    rep.verdict["aborted"] = report.aborted;
    rep.verdict["exact_detectable"] = report.exact.total > opt.tol;

    if (config.attack) {
        const auto cert = undetectable_certificate(*config.attack, opt.certificate_tol);
        json unitary = json::array();
        for (const auto& row : config.attack->unitary()) {
            json r = json::array();
            for (const auto& z : row) {
                r.push_back(complex_json(z));
            }
            unitary.push_back(std::move(r));
        }
        json xi = json::object();
        for (int i = 0; i < 2; ++i) {
            for (int j = 0; j < 2; ++j) {
                const auto v = config.attack->xi(i, j);
                xi["xi" + std::to_string(i) + std::to_string(j)] =
                    json::array({complex_json(v[0]), complex_json(v[1])});
            }
        }
        rep.results["attack"] = {{"unitary", unitary}, {"xi", xi}};
        rep.residuals["unitarity"] = unitarity_residual(config.attack->unitary());
        rep.residuals["certificate"] = {
            {"xi01_norm", cert.xi01_norm},
            {"xi10_norm", cert.xi10_norm},
            {"xi00_minus_xi11", cert.xi00_minus_xi11},
            {"xi00_minus_xi11_up_to_phase", cert.xi00_minus_xi11_up_to_phase},
            {"product_form", cert.product_form_residual}};
        rep.verdict["undetectable"] = cert.undetectable;
    }
    rep.exit_code = report.aborted ? kSecurityAbort : kSuccess;
    return rep;
}

// ---------------------------------------------------------------------------
// Rendering

void flatten(const json& node, const std::string& prefix,
             std::vector<std::pair<std::string, std::string>>& rows) {
    if (node.is_object()) {
        for (const auto& [key, value] : node.items()) {
            flatten(value, prefix.empty() ? key : prefix + "." + key, rows);
        }
    } else if (node.is_array()) {
        for (std::size_t i = 0; i < node.size(); ++i) {
            flatten(node[i], prefix + "." + std::to_string(i), rows);
        }
    } else if (node.is_string()) {
        rows.emplace_back(prefix, node.get<std::string>());
    } else {
        rows.emplace_back(prefix, node.dump());
    }
}

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) {
        return s;
    }
    std::string quoted = "\"";
    for (char c : s) {
        quoted += c;
        if (c == '"') {
            quoted += '"';
        }
    }
    return quoted + "\"";
}

std::string render(const Report& rep, const std::string& format) {
    const json doc = rep.to_json();
    if (format == "json") {
        return doc.dump(2) + "\n";
    }
    std::vector<std::pair<std::string, std::string>> rows;
    flatten(doc, "", rows);
    std::ostringstream os;
    if (format == "csv") {
        os << "key,value\n";
        for (const auto& [k, v] : rows) {
            os << csv_field(k) << ',' << csv_field(v) << '\n';
        }
    } else {
        std::size_t width = 0;
        for (const auto& row : rows) {
            width = std::max(width, row.first.size());
        }
        for (const auto& [k, v] : rows) {
            os << k << std::string(width - k.size() + 1, ' ') << v << '\n';
        }
    }
    return os.str();
}

void write_atomically(const std::string& path, const std::string& text) {
    namespace fs = std::filesystem;
    const fs::path target(path);
    fs::path tmp = target;
    tmp += ".tmp";
    {
        std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
        if (!f) {
            throw InvalidArgument("cannot write '" + tmp.string() + "'");
        }
        f << text;
        if (!f.flush()) {
            throw InvalidArgument("failed writing '" + tmp.string() + "'");
        }
    }
    std::error_code ec;
    fs::rename(tmp, target, ec);
    if (ec) {
        fs::remove(tmp);
        throw InvalidArgument("cannot move report into '" + path + "': " + ec.message());
    }
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    Options opt;
    CLI::App app{"Dense-coding simulator and auditor", "sdc"};
    app.require_subcommand(1);

    auto add_common = [&opt](CLI::App* sub) {
        sub->add_option("--format", opt.format, "Report format")
            ->check(CLI::IsMember({"json", "csv", "text"}));
        sub->add_option("--output,-o", opt.output, "Write the report here instead of stdout");
        sub->add_option("--seed", opt.seed_text, "Master seed (falls back to $SDC_SEED, then 0)");
        sub->add_option("--tol", opt.tol, "Numerical tolerance for verdicts")
            ->check(CLI::PositiveNumber);
    };

    auto* encode = app.add_subcommand("encode", "Encode a message onto a GHZ or D(N,k) state");
    encode->add_option("--message,-m", opt.message, "Bit string, e.g. 10110")->required();
    encode->add_option("--senders,-k", opt.senders, "Distribute over k senders (D(N,k))");
    add_common(encode);

    auto* decode = app.add_subcommand("decode", "Decode a state file back into bits");
    decode->add_option("--state", opt.state_file, "State JSON (dense array or encode report)")
        ->required();
    decode->add_option("--scheme", opt.scheme, "ghz | bell | dnk (default: from the file)");
    decode->add_option("--senders,-k", opt.senders, "Sender count for dnk");
    decode->add_option("--method", opt.method, "circuit | brute");
    add_common(decode);

    auto* audit = app.add_subcommand("audit", "Check orthonormality, capacity and entanglement");
    auto* ghz_opt = audit->add_option("--ghz", opt.ghz, "GHZ state on N qubits");
    auto* dnk_opt = audit->add_option("--dnk", opt.dnk, "D(N,k) resource state")->expected(2);
    auto* bell_opt = audit->add_option("--bell", opt.bell, "Product of PAIRS Bell pairs");
    ghz_opt->excludes(dnk_opt)->excludes(bell_opt);
    dnk_opt->excludes(bell_opt);
    add_common(audit);

    auto* security = app.add_subcommand("security", "Simulate the two-basis eavesdropping check");
    security->add_option("--n", opt.n, "GHZ size");
    security->add_option("--attack", opt.attack,
                         "none | identity | cnot | swap0 | phase | file:PATH");
    security->add_option("--rounds", opt.rounds, "Number of check rounds");
    security->add_option("--threshold", opt.threshold, "Abort above this inconsistent fraction");
    security->add_option("--threads", opt.threads, "Worker threads (0 = all cores)");
    security->add_option("--certificate-tol", opt.certificate_tol,
                         "Tolerance of the undetectability certificate")
        ->check(CLI::PositiveNumber);
    add_common(security);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kSuccess : kValidation;
    }

    try {
        const std::uint64_t seed = resolve_seed(opt.seed_text);
        Report rep;
        if (*encode) {
            rep = cmd_encode(opt);
        } else if (*decode) {
            rep = cmd_decode(opt);
        } else if (*audit) {
            rep = cmd_audit(opt);
        } else {
            rep = cmd_security(opt, seed);
        }
        rep.seed = seed;
        const std::string text = render(rep, opt.format);
        if (opt.output.empty()) {
            out << text;
            out.flush();
        } else {
            write_atomically(opt.output, text);
        }
        if (rep.exit_code == kSecurityAbort) {
            err << "security check aborted: inconsistent rounds exceed the threshold\n";
        }
        return rep.exit_code;
    } catch (const NoMatch& e) {
        err << "decode failed in block " << e.block() << ": " << e.what() << '\n';
        return kDecodeFailure;
    } catch (const NonUnitary& e) {
        err << "error: " << e.what() << '\n';
        return kValidation;
    } catch (const InvalidArgument& e) {
        err << "error: " << e.what() << '\n';
        return kValidation;
    } catch (const Unsupported& e) {
        err << "error: " << e.what() << '\n';
        return kValidation;
    } catch (const json::exception& e) {
        err << "error: malformed input: " << e.what() << '\n';
        return kValidation;
    } catch (const std::exception& e) {
        err << "internal error: " << e.what() << '\n';
        return kFailure;
    }
}

}  // namespace sdc::cli

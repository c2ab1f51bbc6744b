#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "sdc/cli.hpp"
#include "sdc/coding.hpp"
#include "sdc/statevec.hpp"

namespace fs = std::filesystem;
using json = nlohmann::json;

namespace {

struct Result {
    int code = 0;
    std::string out;
    std::string err;

    json doc() const { return json::parse(out); }
};

Result run(std::initializer_list<std::string> args) {
    std::vector<std::string> storage{"sdc"};
    storage.insert(storage.end(), args.begin(), args.end());
    std::vector<const char*> argv;
    for (const auto& s : storage) argv.push_back(s.c_str());
    std::ostringstream out;
    std::ostringstream err;
    const int code = sdc::cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

fs::path scratch_dir() {
    const auto dir = fs::temp_directory_path() / "sdc_cli_test";
    fs::create_directories(dir);
    return dir;
}

void write_file(const fs::path& p, const std::string& text) {
    std::ofstream f(p);
    f << text;
}

}  // namespace

TEST_CASE("report layout") {
    const auto r = run({"encode", "--message", "10110"});
    REQUIRE(r.code == 0);
    const auto doc = r.doc();
    for (const char* key : {"command", "params", "results", "residuals", "verdict", "seed"}) {
        CHECK(doc.contains(key));
    }
    CHECK(doc["command"] == "encode");
}

TEST_CASE("encode") {
    const auto ref = run({"encode", "--message", "10110"}).doc();
    CHECK(ref["results"]["operator"] == "Z⊗X⊗X⊗I");
    CHECK(ref["results"]["amplitudes"].size() == 2);
    CHECK(ref["verdict"]["roundtrip"] == true);

    const auto zero = run({"encode", "--message", "000"}).doc();
    CHECK(zero["results"]["operator"] == "I⊗I");
    const auto& amps = zero["results"]["amplitudes"];
    REQUIRE(amps.size() == 2);
    CHECK(amps[0]["index"] == 0);
    CHECK(amps[1]["index"] == 7);
    CHECK(amps[0]["re"].get<double>() == doctest::Approx(1.0 / std::sqrt(2.0)));

    const auto dist = run({"encode", "--message", "110100", "--senders", "4"}).doc();
    const auto spec = sdc::dnk_spec(6, 4);
    const auto ops = sdc::dnk_encode(sdc::Message::parse("110100"), spec);
    const auto& parties = dist["results"]["parties"];
    REQUIRE(parties.size() == ops.size());
    for (std::size_t i = 0; i < ops.size(); ++i) {
        CHECK(parties[i]["party"] == ops[i].party);
        CHECK(parties[i]["operator"] == ops[i].ops.tensor_notation());
    }
    CHECK(dist["results"]["ghz_size"] == 4);
    CHECK(dist["verdict"]["roundtrip"] == true);
}

TEST_CASE("encode rejects bad input") {
    const auto alpha = run({"encode", "--message", "10a1"});
    CHECK(alpha.code == sdc::cli::kValidation);
    CHECK(alpha.err.find("0/1") != std::string::npos);
    CHECK(alpha.out.empty());

    CHECK(run({"encode", "--message", "1"}).code == sdc::cli::kValidation);
    CHECK(run({"encode", "--message", "110100", "--senders", "6"}).code == sdc::cli::kValidation);
    CHECK(run({"encode"}).code == sdc::cli::kValidation);
    CHECK(run({"bogus"}).code == sdc::cli::kValidation);
    CHECK(run({"encode", "--message", "101", "--format", "xml"}).code == sdc::cli::kValidation);
    CHECK(run({"--help"}).code == 0);
}

TEST_CASE("audit") {
    const auto g3 = run({"audit", "--ghz", "3"});
    REQUIRE(g3.code == 0);
    const auto d3 = g3.doc();
    CHECK(d3["results"]["capacity"]["value"].get<double>() == doctest::Approx(3.0).epsilon(1e-12));
    CHECK(d3["results"]["capacity"]["holevo_bound"] == 3.0);
    CHECK(d3["verdict"]["optimal"] == true);
    CHECK(d3["verdict"]["orthonormal"] == true);
    CHECK(d3["residuals"]["gram_off_diagonal"].get<double>() < 1e-12);

    const auto d4 = run({"audit", "--ghz", "4"}).doc();
    CHECK(d4["verdict"]["is_ame"] == false);
    CHECK(d4["verdict"]["is_gme"] == true);

    const auto dnk = run({"audit", "--dnk", "6", "4"}).doc();
    CHECK(dnk["residuals"]["bob_marginal"].get<double>() < 1e-9);
    CHECK(dnk["verdict"]["bob_maximally_mixed"] == true);
    CHECK(dnk["residuals"]["roundtrip_failures"] == 0);
    CHECK(dnk["results"]["bob_qubits"].size() == 2);

    const auto bell = run({"audit", "--bell", "1"}).doc();
    CHECK(bell["verdict"]["is_ame"] == true);
    CHECK(bell["results"]["capacity"]["value"].get<double>() == doctest::Approx(2.0));

    CHECK(run({"audit", "--ghz", "13"}).code == sdc::cli::kValidation);
    CHECK(run({"audit"}).code == sdc::cli::kValidation);
    CHECK(run({"audit", "--ghz", "3", "--bell", "2"}).code == sdc::cli::kValidation);
}

TEST_CASE("security") {
    const auto clean = run({"security", "--n", "5", "--attack", "none", "--rounds", "10000",
                            "--seed", "7"});
    REQUIRE(clean.code == 0);
    const auto dc = clean.doc();
    CHECK(dc["results"]["detection"]["empirical"] == 0.0);
    CHECK(dc["results"]["detection"]["exact"]["total"] == 0.0);
    CHECK(dc["verdict"]["aborted"] == false);
    CHECK(dc["seed"] == 7);

    const auto attacked = run({"security", "--n", "5", "--attack", "cnot", "--rounds", "10000",
                               "--seed", "7"});
    CHECK(attacked.code == sdc::cli::kSecurityAbort);
    const auto da = attacked.doc();
    CHECK(da["results"]["detection"]["exact"]["total"].get<double>() == doctest::Approx(0.25));
    CHECK(da["residuals"]["deviation_sigma"].get<double>() <= 3.0);
    CHECK(da["verdict"]["undetectable"] == false);

    CHECK(run({"security", "--rounds", "0"}).code == sdc::cli::kValidation);
    CHECK(run({"security", "--attack", "bogus"}).code == sdc::cli::kValidation);
}

TEST_CASE("security with an attack file") {
    const auto dir = scratch_dir();
    const auto good = dir / "atk.json";
    write_file(good, R"([[[1,0],[0,0],[0,0],[0,0]],
                         [[0,0],[1,0],[0,0],[0,0]],
                         [[0,0],[0,0],[0,0],[1,0]],
                         [[0,0],[0,0],[1,0],[0,0]]])");
    const auto r = run({"security", "--n", "3", "--attack", "file:" + good.string(),
                        "--rounds", "200", "--threshold", "1"});
    REQUIRE(r.code == 0);
    const auto doc = r.doc();
    const auto& cert = doc["residuals"]["certificate"];
    CHECK(cert["xi01_norm"] == 0.0);
    CHECK(cert["xi10_norm"] == 0.0);
    CHECK(cert["xi00_minus_xi11"].get<double>() == doctest::Approx(std::sqrt(2.0)));
    CHECK(doc["residuals"]["unitarity"] == 0.0);

    const auto nonunitary = dir / "bad.json";
    write_file(nonunitary, R"([[[1,0],[0,0],[0,0],[0,0]],
                               [[0,0],[1,0],[0,0],[0,0]],
                               [[0,0],[0,0],[1,0],[0,0]],
                               [[0,0],[0,0],[0,0],[2,0]]])");
    const auto nu = run({"security", "--attack", "file:" + nonunitary.string()});
    CHECK(nu.code == sdc::cli::kValidation);
    CHECK(nu.err.find("U^dagger U") != std::string::npos);

    const auto malformed = dir / "malformed.json";
    write_file(malformed, R"([[1,0,0,0]])");
    CHECK(run({"security", "--attack", "file:" + malformed.string()}).code ==
          sdc::cli::kValidation);
    write_file(malformed, "not json");
    CHECK(run({"security", "--attack", "file:" + malformed.string()}).code ==
          sdc::cli::kValidation);
    CHECK(run({"security", "--attack", "file:" + (dir / "missing.json").string()}).code ==
          sdc::cli::kValidation);
}

TEST_CASE("identical configuration gives byte-identical output") {
    const auto a = run({"security", "--n", "4", "--attack", "swap0", "--rounds", "3000",
                        "--seed", "11", "--threshold", "1"});
    const auto b = run({"security", "--n", "4", "--attack", "swap0", "--rounds", "3000",
                        "--seed", "11", "--threshold", "1", "--threads", "4"});
    CHECK(a.code == 0);
    CHECK(a.out == b.out);
    const auto c = run({"security", "--n", "4", "--attack", "swap0", "--rounds", "3000",
                        "--seed", "12", "--threshold", "1"});
    CHECK(a.out != c.out);
    CHECK(run({"audit", "--ghz", "5"}).out == run({"audit", "--ghz", "5"}).out);
}

TEST_CASE("seed from the environment") {
    ::setenv("SDC_SEED", "42", 1);
    const auto env = run({"security", "--n", "3", "--rounds", "10"}).doc();
    CHECK(env["seed"] == 42);
    const auto flag = run({"security", "--n", "3", "--rounds", "10", "--seed", "5"}).doc();
    CHECK(flag["seed"] == 5);
    ::setenv("SDC_SEED", "nope", 1);
    CHECK(run({"security", "--n", "3", "--rounds", "10"}).code == sdc::cli::kValidation);
    ::unsetenv("SDC_SEED");
    CHECK(run({"security", "--n", "3", "--rounds", "10"}).doc()["seed"] == 0);
}

TEST_CASE("csv and text formats flatten the report") {
    const auto csv = run({"audit", "--ghz", "3", "--format", "csv"});
    REQUIRE(csv.code == 0);
    CHECK(csv.out.rfind("key,value\n", 0) == 0);
    CHECK(csv.out.find("verdict.optimal,true") != std::string::npos);

    const auto text = run({"encode", "--message", "10110", "--format", "text"});
    CHECK(text.out.find("results.operator") != std::string::npos);
    CHECK(text.out.find("Z⊗X⊗X⊗I") != std::string::npos);
}

TEST_CASE("reports written to a file, then decoded") {
    const auto dir = scratch_dir();
    const auto report = dir / "enc.json";
    fs::remove(report);
    const auto r = run({"encode", "--message", "1011001", "--output", report.string()});
    REQUIRE(r.code == 0);
    CHECK(r.out.empty());
    CHECK(fs::exists(report));
    CHECK_FALSE(fs::exists(dir / "enc.json.tmp"));

    const auto d = run({"decode", "--state", report.string()});
    REQUIRE(d.code == 0);
    CHECK(d.doc()["results"]["message"] == "1011001");
    CHECK(run({"decode", "--state", report.string(), "--method", "brute"}).doc()["results"]
              ["message"] == "1011001");

    const auto dnk = dir / "dnk.json";
    run({"encode", "--message", "110100", "--senders", "4", "--output", dnk.string()});
    CHECK(run({"decode", "--state", dnk.string()}).doc()["results"]["message"] == "110100");

    // Dense amplitude array of H on Bob's qubit of ghz(3): not a code word.
    const auto h = sdc::apply_hadamard(sdc::ghz_state(3), 2);
    json dense = json::array();
    for (const auto& a : h.amplitudes()) dense.push_back({a.real(), a.imag()});
    const auto corrupt = dir / "corrupt.json";
    write_file(corrupt, dense.dump());
    const auto bad = run({"decode", "--state", corrupt.string()});
    CHECK(bad.code == sdc::cli::kDecodeFailure);
    CHECK(bad.err.find("ghz") != std::string::npos);

    const auto bell_state = sdc::bell_encoded_state(sdc::Message::parse("0111"));
    json bell = json::array();
    for (const auto& a : bell_state.amplitudes()) {
        bell.push_back({a.real(), a.imag()});
    }
    const auto bell_file = dir / "bell.json";
    write_file(bell_file, bell.dump());
    CHECK(run({"decode", "--state", bell_file.string(), "--scheme", "bell"}).doc()["results"]
              ["message"] == "0111");
}

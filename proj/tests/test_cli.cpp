#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

// End-to-end checks of the installed CLI binary.

namespace {

namespace fs = std::filesystem;

struct RunResult {
    int status = -1;
    std::string stdout_text;
};

RunResult run_cli(const std::string& args) {
    const fs::path out = fs::temp_directory_path() / "nilab_cli_stdout.txt";
    const std::string cmd = std::string(NILAB_CLI_PATH) + " " + args + " > " + out.string() + " 2>&1";
    const int raw = std::system(cmd.c_str());
    std::ifstream is(out);
    std::stringstream ss;
    ss << is.rdbuf();
    fs::remove(out);
    return {WEXITSTATUS(raw), ss.str()};
}

}  // namespace

TEST_CASE("sieve writes the documented binary header") {
    const fs::path bin = fs::temp_directory_path() / "nilab_cli_mu.bin";
    const auto r = run_cli("sieve --N 4096 --out " + bin.string());
    REQUIRE(r.status == 0);
    std::ifstream is(bin, std::ios::binary);
    REQUIRE(is.good());
    char header[16];
    is.read(header, 16);
    CHECK(std::string(header, 4) == "MOBI");
    CHECK(header[4] == 1);
    const long long n = 4096;
    CHECK(header[8] == static_cast<char>(n & 0xFF));
    CHECK(header[9] == static_cast<char>((n >> 8) & 0xFF));
    is.seekg(0, std::ios::end);
    CHECK(is.tellg() == 16 + n);
    fs::remove(bin);
}

TEST_CASE("identical config and seed give byte-identical output") {
    const std::string args =
        "correlate --spec '{\"kind\":\"T\",\"alpha\":\"1/2\",\"k\":2,\"phi\":\"cos\",\"psi\":\"sin\"}'"
        " --N 2000 --checkpoints 100,2000 --seed 42 --format csv";
    const auto r1 = run_cli(args);
    const auto r2 = run_cli(args);
    REQUIRE(r1.status == 0);
    CHECK(r1.stdout_text == r2.stdout_text);
    CHECK(r1.stdout_text.find("N,sum_re") == 0);
}

TEST_CASE("checkpoint consistency across run lengths") {
    const std::string spec =
        "'{\"kind\":\"T\",\"alpha\":\"golden\",\"k\":2,\"phi\":\"cos\",\"psi\":\"sin\"}'";
    const auto full =
        run_cli("correlate --spec " + spec + " --N 3000 --checkpoints 500,3000 --seed 7 --format csv");
    const auto fresh =
        run_cli("correlate --spec " + spec + " --N 500 --checkpoints 500 --seed 7 --format csv");
    REQUIRE(full.status == 0);
    REQUIRE(fresh.status == 0);
    // the N=500 row must match byte for byte (same formatting, same values)
    const auto full_row = full.stdout_text.substr(full.stdout_text.find("\n") + 1);
    const auto fresh_row = fresh.stdout_text.substr(fresh.stdout_text.find("\n") + 1);
    CHECK(full_row.substr(0, full_row.find("\n")) == fresh_row.substr(0, fresh_row.find("\n")));
}

TEST_CASE("failures leave no partial outputs") {
    const fs::path target = fs::temp_directory_path() / "nilab_cli_should_not_exist.json";
    fs::remove(target);
    const auto r = run_cli("cf --alpha not_a_number --out " + target.string());
    CHECK(r.status != 0);
    CHECK_FALSE(fs::exists(target));
    CHECK_FALSE(fs::exists(target.string() + ".tmp"));
}

TEST_CASE("unknown subcommand fails loudly") {
    const auto r = run_cli("frobnicate");
    CHECK(r.status != 0);
}

TEST_CASE("svg emission") {
    const fs::path svg = fs::temp_directory_path() / "nilab_cli_chart.svg";
    const auto r = run_cli(
        "complexity-scan --spec '{\"kind\":\"T1~\",\"alpha\":\"golden\",\"c\":0.37}'"
        " --ns 1,10 --count 50 --epsilon 0.3 --seed 5 --svg " + svg.string() + " --format csv");
    REQUIRE(r.status == 0);
    REQUIRE(fs::exists(svg));
    std::ifstream is(svg);
    std::string first;
    std::getline(is, first);
    CHECK(first.find("<svg") == 0);
    fs::remove(svg);
    CHECK(r.stdout_text.find("n,epsilon,s_n,covered_mass,seconds") == 0);
}

TEST_CASE("conj-check exits by tolerance") {
    const auto good = run_cli("conj-check --alpha golden --k 2 --B 3 --samples 20 --seed 3");
    CHECK(good.status == 0);
    const auto bad = run_cli("conj-check --alpha golden --k 2 --B 3 --samples 20 --seed 3 --tol 1e-30");
    CHECK(bad.status == 1);
}

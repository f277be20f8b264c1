#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>

#include "rabi/io.hpp"

namespace {

const std::string tmp = "rabi_cli_test";

struct Run {
    int code;
    std::string out, err;
};

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

Run run(const std::string& args) {
    const std::string o = tmp + ".out", e = tmp + ".err";
    const std::string cmd = std::string(RABI_CLI_PATH) + " " + args + " > " + o + " 2> " + e;
    const int status = std::system(cmd.c_str());
    Run r{WIFEXITED(status) ? WEXITSTATUS(status) : -1, slurp(o), slurp(e)};
    std::remove(o.c_str());
    std::remove(e.c_str());
    return r;
}

}  // namespace

TEST_CASE("every subcommand runs with seeded defaults") {
    for (const char* sub : {"quasienergy", "trajectory", "resonance", "zero_curve", "work"}) {
        const Run r = run(std::string(sub) + " --seeded-defaults --threads 2");
        CHECK_MESSAGE(r.code == 0, sub);
        CHECK(r.out.rfind("# tool=", 0) == 0);
        CHECK(r.out.find('\r') == std::string::npos);
        const auto t = rabi::io::parse_csv(r.out);
        CHECK(!t.rows.empty());
    }
    for (const char* kind : {"adiabatic", "ft", "bessel", "near_linear", "near_circular"}) {
        const Run r = run(std::string("limits --seeded-defaults --kind ") + kind);
        CHECK_MESSAGE(r.code == 0, kind);
    }
}

TEST_CASE("output does not depend on the thread count") {
    const Run a = run("work --seeded-defaults --omega 0.5:1.5:41 --threads 1");
    const Run b = run("work --seeded-defaults --omega 0.5:1.5:41 --threads 8");
    REQUIRE(a.code == 0);
    CHECK(a.out == b.out);
    const Run c = run("quasienergy --seeded-defaults --format json --threads 1");
    const Run d = run("quasienergy --seeded-defaults --format json --threads 5");
    CHECK(c.out == d.out);
    CHECK(nlohmann::json::parse(c.out)["meta"]["subcommand"] == "quasienergy");
}

TEST_CASE("header records the parameters") {
    const Run r = run("quasienergy --omega0 1 --F 1 --G 0.5 --omega 1");
    REQUIRE(r.code == 0);
    const auto t = rabi::io::parse_csv(r.out);
    auto meta = [&](const std::string& k) {
        for (const auto& [key, v] : t.meta)
            if (key == k) return v;
        return std::string("<missing>");
    };
    CHECK(meta("omega0") == "1");
    CHECK(meta("G") == "0.5");
    CHECK(meta("seeded_defaults") == "false");
    REQUIRE(t.rows.size() == 1);
}

TEST_CASE("--output writes the same table") {
    const std::string path = tmp + ".csv";
    const Run r = run("resonance --seeded-defaults --output " + path);
    CHECK(r.code == 0);
    CHECK(r.out.empty());
    CHECK(slurp(path) == run("resonance --seeded-defaults").out);
    std::remove(path.c_str());
}

TEST_CASE("validation failures exit 2 with one error line") {
    for (const char* args : {"quasienergy --omega0 1 --F 1 --G 0.5", "quasienergy --seeded-defaults --F -1",
                             "quasienergy --seeded-defaults --omega 1:0:5", "work --seeded-defaults --beta -2",
                             "quasienergy --seeded-defaults --format xml", "nosuchcommand", "limits --seeded-defaults --kind nope"}) {
        const Run r = run(args);
        CHECK_MESSAGE(r.code == 2, args);
        if (std::string(args) != "nosuchcommand" && std::string(args).find("xml") == std::string::npos) {
            CHECK_MESSAGE(r.err.rfind("error=validation message=", 0) == 0, args);
            CHECK(r.err.find('\n') == r.err.size() - 1);
        }
    }
}

TEST_CASE("numerical failures exit 3") {
    // drive far too strong for the perturbative Fourier-Taylor series
    const Run r = run("limits --kind ft --omega0 0.3 --F 5 --G 1 --omega 1");
    CHECK(r.code == 3);
    CHECK(r.err.rfind("error=numerical message=", 0) == 0);
}

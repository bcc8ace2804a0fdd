#include <catch2/catch_amalgamated.hpp>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include <sys/wait.h>

#include <json.hpp>

namespace {

struct RunResult {
    int exit_code = -1;
    std::string out;
};

std::string cli_binary() {
    if (const char* env = std::getenv("PERICLASS_BIN")) return env;
    return "./periclass";
}

RunResult run_cli(const std::string& args) {
    const std::string cmd = cli_binary() + " " + args + " 2>/dev/null";
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    RunResult r;
    char buf[4096];
    std::size_t got = 0;
    while ((got = fread(buf, 1, sizeof buf, pipe)) > 0) r.out.append(buf, got);
    const int status = pclose(pipe);
    r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return r;
}

nlohmann::json run_json(const std::string& args, int expect_exit) {
    RunResult r = run_cli(args + " --format json");
    INFO(r.out);
    REQUIRE(r.exit_code == expect_exit);
    return nlohmann::json::parse(r.out);
}

std::vector<std::string> coeffs_of(const nlohmann::json& poly) {
    return poly.at("coeffs").get<std::vector<std::string>>();
}

} // namespace

TEST_CASE("binary is present") {
    REQUIRE(std::filesystem::exists(cli_binary()));
}

TEST_CASE("usage errors exit with code 2") {
    REQUIRE(run_cli("").exit_code == 2);
    REQUIRE(run_cli("no-such-command").exit_code == 2);
    REQUIRE(run_cli("pn").exit_code == 2);
    REQUIRE(run_cli("pn --n 0").exit_code == 2);
    REQUIRE(run_cli("pn --n 9").exit_code == 2);
    REQUIRE(run_cli("pn --n 7").exit_code == 2);
    REQUIRE(run_cli("deuring --max-n 11").exit_code == 2);
    REQUIRE(run_cli("padic-verify --d 8 --prec 64").exit_code == 2);
    REQUIRE(run_cli("padic-verify --d 23 --prec 4").exit_code == 2);
    REQUIRE(run_cli("preperiodic --d 7 --r 0").exit_code == 2);
    REQUIRE(run_cli("preperiodic --d 6 --r 1").exit_code == 2);
    REQUIRE(run_cli("classpoly --d 20").exit_code == 2);
    REQUIRE(run_cli("classpoly --d 23 --via nonsense").exit_code == 2);
    REQUIRE(run_cli("lambda-identity --terms 4").exit_code == 2);
    REQUIRE(run_cli("factor --in /nonexistent/poly.json").exit_code == 2);
}

TEST_CASE("help exits cleanly") {
    REQUIRE(run_cli("--help").exit_code == 0);
    REQUIRE(run_cli("pn --help").exit_code == 0);
}

TEST_CASE("pn emits the labeled factor table") {
    SECTION("n = 2") {
        auto j = run_json("pn --n 2", 0);
        REQUIRE(j.at("command") == "pn");
        REQUIRE(j.at("degree") == 4);
        REQUIRE(j.at("ok").get<bool>());
        REQUIRE(coeffs_of(j.at("p_n")) ==
                std::vector<std::string>{"4", "-2", "5", "-4", "1"});
        REQUIRE(j.at("factors").size() == 1);
        const auto& row = j.at("factors").at(0);
        REQUIRE(row.at("d") == 15);
        REQUIRE(row.at("h") == 2);
        REQUIRE(coeffs_of(row.at("class_poly")) ==
                std::vector<std::string>{"-121287375", "191025", "1"});
    }

    SECTION("n = 1 labels only the quadratic factor") {
        auto j = run_json("pn --n 1", 0);
        REQUIRE(j.at("ok").get<bool>());
        const auto& rows = j.at("factors");
        REQUIRE(rows.size() == 3);
        REQUIRE(rows.at(0).at("d").is_null());
        REQUIRE(rows.at(1).at("d").is_null());
        REQUIRE(rows.at(2).at("d") == 7);
        REQUIRE(coeffs_of(rows.at(2).at("factor")) ==
                std::vector<std::string>{"2", "-1", "1"});
        REQUIRE(coeffs_of(rows.at(2).at("class_poly")) ==
                std::vector<std::string>{"3375", "1"});
    }

    SECTION("n = 3 factor labels") {
        auto j = run_json("pn --n 3", 0);
        REQUIRE(j.at("ok").get<bool>());
        REQUIRE(j.at("degree") == 12);
        const auto& rows = j.at("factors");
        REQUIRE(rows.size() == 2);
        REQUIRE(rows.at(0).at("d") == 23);
        REQUIRE(rows.at(1).at("d") == 31);
        REQUIRE(j.at("sum_2h") == 12);
    }
}

TEST_CASE("deuring verifies the per-period class number sums") {
    auto j = run_json("deuring --max-n 6", 0);
    REQUIRE(j.at("ok").get<bool>());
    const auto& rows = j.at("rows");
    REQUIRE(rows.size() == 6);
    REQUIRE(rows.at(0).at("target").is_null());
    for (std::size_t i = 1; i < rows.size(); ++i) {
        REQUIRE(rows.at(i).at("ok").get<bool>());
        REQUIRE(rows.at(i).at("sum_h") == rows.at(i).at("target"));
    }
    REQUIRE(rows.at(5).at("n") == 6);
    REQUIRE(rows.at(5).at("target") == 54);
    REQUIRE(rows.at(5).at("members").size() == 7);
}

TEST_CASE("padic-verify lifts orbits and matches the factor") {
    auto j = run_json("padic-verify --d 15 --prec 64", 0);
    REQUIRE(j.at("n") == 2);
    REQUIRE(j.at("frobenius_ok").get<bool>());
    REQUIRE(j.at("valuations_ok").get<bool>());
    REQUIRE(j.at("minpoly_ok").get<bool>());
    REQUIRE(j.at("factor_match").get<bool>());
    REQUIRE(j.at("ok").get<bool>());
    REQUIRE(coeffs_of(j.at("b_d")) ==
            std::vector<std::string>{"4", "-2", "5", "-4", "1"});
}

TEST_CASE("padic-verify reports reconstruction failure at starved precision") {
    auto j = run_json("padic-verify --d 231 --prec 16", 1);
    REQUIRE_FALSE(j.at("ok").get<bool>());
}

TEST_CASE("preperiodic emits the tower polynomial") {
    auto j = run_json("preperiodic --d 7 --r 2", 0);
    REQUIRE(j.at("ok").get<bool>());
    REQUIRE(j.at("degree_ok").get<bool>());
    REQUIRE(j.at("invariant_ok").get<bool>());
    REQUIRE(coeffs_of(j.at("s")) == std::vector<std::string>{"256", "-256", "1"});
    REQUIRE(coeffs_of(j.at("p_d")) == std::vector<std::string>{"16", "-1", "1"});

    auto j3 = run_json("preperiodic --d 15 --r 3", 0);
    REQUIRE(j3.at("ok").get<bool>());
    REQUIRE(j3.at("degree") == 8);
}

TEST_CASE("classpoly agrees across routes") {
    auto j = run_json("classpoly --d 31", 0);
    REQUIRE(j.at("h") == 3);
    REQUIRE(j.at("match").get<bool>());
    REQUIRE(j.at("ok").get<bool>());
    REQUIRE(coeffs_of(j.at("cm").at("class_poly")) ==
            coeffs_of(j.at("bd").at("class_poly")));

    auto jcm = run_json("classpoly --d 11 --via cm", 0);
    REQUIRE(coeffs_of(jcm.at("cm").at("class_poly")) ==
            std::vector<std::string>{"32768", "1"});
    REQUIRE_FALSE(jcm.contains("bd"));
}

TEST_CASE("lambda-identity delegates to the series checks") {
    auto j = run_json("lambda-identity --terms 16", 0);
    REQUIRE(j.at("ok").get<bool>());
    REQUIRE(j.at("functional_equation").at("ok").get<bool>());
    REQUIRE(j.at("functional_equation").at("f_opening_ok").get<bool>());
    REQUIRE(j.at("rearranged_form").at("ok").get<bool>());
    REQUIRE(j.at("j_expressions").at("trials") == 24);
}

TEST_CASE("factor command round-trips a file") {
    const std::filesystem::path tmp =
        std::filesystem::temp_directory_path() / "periclass_cli_factor.json";
    {
        std::ofstream os(tmp);
        os << R"({"var":"x","coeffs":["12","22","18","10","2"]})";
    }
    auto j = run_json("factor --in " + tmp.string(), 0);
    REQUIRE(j.at("ok").get<bool>());
    const auto& fz = j.at("factorization");
    REQUIRE(fz.at("content") == "2");
    REQUIRE(fz.at("factors").size() == 3);
    std::filesystem::remove(tmp);
}

TEST_CASE("json output is byte-identical across runs") {
    RunResult a = run_cli("pn --n 3 --seed 42 --format json");
    RunResult b = run_cli("pn --n 3 --seed 42 --format json");
    REQUIRE(a.exit_code == 0);
    REQUIRE(b.exit_code == 0);
    REQUIRE_FALSE(a.out.empty());
    REQUIRE(a.out == b.out);
    auto j = nlohmann::json::parse(a.out);
    REQUIRE(j.at("config").at("seed") == "42");
}

TEST_CASE("chain cache persists and reruns identically") {
    const std::filesystem::path dir =
        std::filesystem::temp_directory_path() / "periclass_cli_cache";
    std::filesystem::remove_all(dir);
    RunResult a = run_cli("pn --n 4 --cache-dir " + dir.string() + " --format json");
    REQUIRE(a.exit_code == 0);
    REQUIRE(std::filesystem::exists(dir));
    bool has_file = false;
    for (const auto& e : std::filesystem::directory_iterator(dir))
        has_file = has_file || e.is_regular_file();
    REQUIRE(has_file);
    RunResult b = run_cli("pn --n 4 --cache-dir " + dir.string() + " --format json");
    REQUIRE(b.exit_code == 0);
    REQUIRE(a.out == b.out);
    std::filesystem::remove_all(dir);
}

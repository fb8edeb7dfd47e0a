#include <catch2/catch_amalgamated.hpp>

#include "trec/cache.hpp"

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

namespace {

struct RunResult {
    int exit_code;
    std::string out;
};

RunResult run(const std::string& args) {
    std::string cmd = std::string(TREC_CLI_PATH) + " " + args + " 2>&1";
    std::array<char, 4096> buf{};
    RunResult r{-1, {}};
    FILE* p = popen(cmd.c_str(), "r");
    REQUIRE(p != nullptr);
    while (fgets(buf.data(), buf.size(), p)) r.out += buf.data();
    int status = pclose(p);
    r.exit_code = WEXITSTATUS(status);
    return r;
}

std::string curve(const char* name) {
    return std::string(TREC_CURVES_DIR) + "/" + name;
}

} // namespace

TEST_CASE("branchpoints listing") {
    RunResult r = run("--curve " + curve("airy.json") + " branchpoints");
    CHECK(r.exit_code == 0);
    CHECK(r.out == "a = 0 (simple, regular)\n");

    RunResult g = run("--curve " + curve("gaussian.json") + " branchpoints");
    CHECK(g.out == "a = -1 (simple, regular)\na = 1 (simple, regular)\n");
}

TEST_CASE("curve validation failures exit with code 2") {
    std::filesystem::path bad = std::filesystem::temp_directory_path() / "trec_bad_curve.json";
    {
        std::ofstream f(bad);
        f << R"({"label":"bad","y":{"num":[0,1]},"dx":{"num":[-2,0,1]}})";
    }
    RunResult r = run("--curve " + bad.string() + " branchpoints");
    CHECK(r.exit_code == 2);
    CHECK(r.out.find("nonrational") != std::string::npos);

    RunResult missing = run("--curve /nonexistent.json branchpoints");
    CHECK(missing.exit_code == 2);
}

TEST_CASE("omega output and the unstable guard") {
    RunResult r = run("--curve " + curve("airy.json") + " omega --g 1 --n 1");
    CHECK(r.exit_code == 0);
    CHECK(r.out == "poles [(0,4)], coeff \"1/16\"\n");

    RunResult r03 = run("--curve " + curve("airy.json") + " omega --g 0 --n 3");
    CHECK(r03.out == "poles [(0,2), (0,2), (0,2)], coeff \"1/2\"\n");

    RunResult un = run("--curve " + curve("airy.json") + " omega --g 0 --n 2");
    CHECK(un.exit_code == 3);
    CHECK(un.out.find("Bergman") != std::string::npos);
}

TEST_CASE("fg command") {
    RunResult r = run("--curve " + curve("gaussian.json") + " fg --g 2");
    CHECK(r.exit_code == 0);
    CHECK(r.out == "1/240\n");

    RunResult low = run("--curve " + curve("gaussian.json") + " fg --g 1");
    CHECK(low.exit_code == 3);
}

TEST_CASE("expand command with windows and bad weights") {
    RunResult cat = run("--curve " + curve("gaussian.json") +
                        " expand --target disc --weight infinity --window 0..8");
    CHECK(cat.exit_code == 0);
    CHECK(cat.out.find("k = (0), value \"1\"") != std::string::npos);
    CHECK(cat.out.find("k = (4), value \"2\"") != std::string::npos);
    CHECK(cat.out.find("k = (6), value \"5\"") != std::string::npos);

    RunResult hur = run("--curve " + curve("lambert.json") +
                        " expand --target disc --weight log-point --window -6..-1");
    CHECK(hur.exit_code == 0);
    CHECK(hur.out.find("k = (-5), value \"125/24\"") != std::string::npos);

    RunResult nope = run("--curve " + curve("gaussian.json") +
                         " expand --target disc --weight missing --window 0..4");
    CHECK(nope.exit_code == 5);
}

TEST_CASE("determinism: repeated runs are byte-identical") {
    std::string args = "--curve " + curve("gaussian.json") + " --format json omega --g 2 --n 1";
    RunResult a = run(args), b = run(args);
    CHECK(a.exit_code == 0);
    CHECK(a.out == b.out);
}

TEST_CASE("cache: cold and warm runs identical, corruption is a miss") {
    std::filesystem::path dir =
        std::filesystem::temp_directory_path() / "trec_cache_test";
    std::filesystem::remove_all(dir);
    std::string args = "--curve " + curve("gaussian.json") + " --cache " + dir.string() +
                       " --format json omega --g 1 --n 2";
    RunResult cold = run(args);
    CHECK(cold.exit_code == 0);
    REQUIRE(std::filesystem::exists(dir));
    REQUIRE_FALSE(std::filesystem::is_empty(dir));
    RunResult warm = run(args);
    CHECK(warm.exit_code == 0);
    CHECK(cold.out == warm.out);

    // corrupt every record: the command still succeeds with the same bytes
    for (const auto& e : std::filesystem::directory_iterator(dir)) {
        std::ofstream f(e.path(), std::ios::app);
        f << "garbage";
    }
    RunResult rebuilt = run(args);
    CHECK(rebuilt.exit_code == 0);
    CHECK(rebuilt.out == cold.out);
    std::filesystem::remove_all(dir);
}

TEST_CASE("cache round trip is bit-identical at the library level") {
    std::filesystem::path dir =
        std::filesystem::temp_directory_path() / "trec_cache_unit";
    std::filesystem::remove_all(dir);
    trec::ResultCache cache(dir.string());
    std::string key = trec::ResultCache::make_key("content", "descriptor", 12);
    CHECK_FALSE(cache.get(key));
    trec::ordered_json payload{{"value", "22/7"}};
    cache.put(key, payload);
    auto hit = cache.get(key);
    REQUIRE(hit);
    CHECK(hit->dump() == payload.dump());
    CHECK_FALSE(cache.get(trec::ResultCache::make_key("content", "descriptor", 13)));
    std::filesystem::remove_all(dir);
}

TEST_CASE("verify subcommand passes on the shipped curves") {
    RunResult r = run("--curves-dir " + std::string(TREC_CURVES_DIR) + " verify airy --max-chi 3");
    CHECK(r.exit_code == 0);
    CHECK(r.out.find("FAIL") == std::string::npos);
    CHECK(r.out.find("PASS symmetry and pole bounds") != std::string::npos);
}

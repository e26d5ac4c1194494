#include <doctest.h>
#include <json.hpp>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace {
namespace fs = std::filesystem;

auto data(const std::string & name) -> std::string { return std::string(CGR_DATA_DIR) + "/" + name + ".kb"; }

auto scratch() -> fs::path
{
    auto dir = fs::temp_directory_path() / "cgr_cli_test";
    fs::create_directories(dir);
    return dir;
}

auto slurp(const fs::path & p) -> std::string
{
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

struct Run {
    int code;
    std::string out;
};

auto run(const std::string & args) -> Run
{
    auto out = scratch() / "stdout.txt";
    auto cmd = std::string("\"") + CGR_CLI + "\" " + args + " > \"" + out.string() + "\" 2> \"" + (scratch() / "stderr.txt").string() + "\"";
    int status = std::system(cmd.c_str());
    return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, slurp(out)};
}

auto write(const std::string & name, const std::string & text) -> std::string
{
    auto p = scratch() / name;
    std::ofstream(p) << text;
    return p.string();
}
}

TEST_CASE("verdict exit codes")
{
    auto proved = run("ask --kb " + data("office_graph") + " --model sg");
    CHECK(proved.code == 0);
    CHECK(nlohmann::json::parse(proved.out)["outcome"] == "Proved");

    CHECK(run("ask --kb " + data("office_graph") + " --model sgc").code == 1);
    CHECK(run("ask --kb " + data("corridor") + " --model sr").code == 0);
    CHECK(run("ask --kb " + data("corridor") + " --model sec").code == 1);
    CHECK(run("ask --kb " + data("successor") + " --model src --budget 50").code == 2);
    CHECK(run("check --kb " + data("office_graph")).code == 1);
}

TEST_CASE("verify flag")
{
    auto r = run("ask --kb " + data("corridor") + " --model sr --verify");
    CHECK(r.code == 0);
    CHECK(r.out.find("certificate verified") != std::string::npos);
}

TEST_CASE("unbounded budget over non range-restricted rules")
{
    auto r = run("ask --kb " + data("successor") + " --model src --budget 0");
    CHECK(r.code == 4);
    CHECK(slurp(scratch() / "stderr.txt").find("'K'") != std::string::npos);
    CHECK(run("ask --kb " + data("corridor") + " --model sr --budget 0").code == 0);
}

TEST_CASE("input errors")
{
    CHECK(run("ask --kb " + (scratch() / "missing.kb").string()).code == 3);
    CHECK(run("ask --kb " + write("bad.kb", "[support]\nrelation r/\n")).code == 3);
    CHECK(run("ask --kb " + write("invalid.kb", "[support]\nconcept A\n[fact F]\nx : B\n")).code == 3);
    CHECK(run("ask --kb " + data("corridor") + " --model bogus").code == 3);
    CHECK(run("").code == 3);
}

TEST_CASE("graph commands")
{
    auto closure = run("closure --kb " + data("corridor"));
    CHECK(closure.code == 0);
    CHECK(closure.out.find("near(o1, o3)") != std::string::npos);

    auto fol = run("export-fol --kb " + data("corridor"));
    CHECK(fol.code == 0);
    CHECK(fol.out.find("rule R1: forall x1 x2 (Office(x1) & Office(x2) & near(x1,x2) -> near(x2,x1))") != std::string::npos);

    CHECK(run("normalize --kb " + data("office_graph")).code == 0);
    auto core = run("core --kb " + data("office_graph"));
    CHECK(core.code == 0);
    CHECK(core.out.find("spare") == std::string::npos);
}

TEST_CASE("generated instances answer as their oracle says")
{
    for (std::string kind : {"sat3", "sat3-2c", "sat3-3", "word", "csp", "mixed"}) {
        for (int seed = 1; seed <= 3; ++seed) {
            auto kb = (scratch() / (kind + ".kb")).string();
            auto side = (scratch() / (kind + ".json")).string();
            REQUIRE(run("gen " + kind + " --seed " + std::to_string(seed) + " --vars 3 --clauses 3 --out " + kb + " --oracle " + side).code == 0);
            auto expected = nlohmann::json::parse(slurp(side));
            auto got = run("ask --kb " + kb + " --model " + expected["model"].get<std::string>());
            if (expected["expected"].is_null())
                continue;
            auto outcome = nlohmann::json::parse(got.out)["outcome"].get<std::string>();
            if (kind == "word" && outcome == "Unknown")
                continue;
            CHECK_MESSAGE(outcome == expected["expected"].get<std::string>(), kind << " seed " << seed);
        }
    }
}

TEST_CASE("generator needs a constraint source")
{
    CHECK(run("gen sgc2sec").code == 4);
    auto kb = (scratch() / "sec.kb").string();
    CHECK(run("gen sgc2sec --kb " + data("office_assignment") + " --out " + kb).code == 0);
    CHECK(run("ask --kb " + kb + " --model sec").code <= 1);
}

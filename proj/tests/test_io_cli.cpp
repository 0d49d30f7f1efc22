#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <json.hpp>
#include <stdexcept>
#include <string>
#include <vector>

#include "stepfit/cli.hpp"
#include "stepfit/io.hpp"

using namespace stepfit;
namespace fs = std::filesystem;

namespace {

int run(std::vector<std::string> args) {
    std::vector<const char*> argv{"stepfit"};
    for (const std::string& a : args) argv.push_back(a.c_str());
    return run_cli(static_cast<int>(argv.size()), argv.data());
}

// Scratch file that cleans up after itself.
struct Tmp {
    fs::path path;
    explicit Tmp(const std::string& stem) {
        path = fs::temp_directory_path() / ("stepfit_test_" + stem);
    }
    ~Tmp() {
        std::error_code ec;
        fs::remove(path, ec);
    }
    std::string str() const { return path.string(); }
};

const std::string kStairsCsv = "x,y,w\n1,0,1\n2,1,1\n3,9,1\n4,10,1\n";

std::size_t count_of(const std::string& hay, const std::string& needle) {
    std::size_t n = 0;
    for (std::size_t at = hay.find(needle); at != std::string::npos;
         at = hay.find(needle, at + 1))
        ++n;
    return n;
}

}  // namespace

TEST_CASE("parse_csv: happy path, defaults, comments") {
    Instance i = parse_csv("1,0,1\n2,10,1\n");
    REQUIRE(i.points.size() == 2);
    CHECK(i.points[0].x == 1.0);
    CHECK(i.points[1].y == 10.0);
    CHECK(i.points[0].id == 0);
    CHECK(i.points[1].id == 1);

    Instance h = parse_csv(kStairsCsv);  // header row skipped
    CHECK(h.points.size() == 4);

    Instance d = parse_csv("# comment\n\n5,7\r\n");  // CRLF + default weight
    REQUIRE(d.points.size() == 1);
    CHECK(d.points[0].w == 1.0);
    CHECK(d.points[0].y == 7.0);
}

TEST_CASE("parse_csv: errors name the line") {
    CHECK_THROWS_WITH_AS((void)parse_csv("1,0,-3\n", "bad.csv"),
                         doctest::Contains("bad.csv:1"), std::runtime_error);
    CHECK_THROWS_WITH_AS((void)parse_csv("1,2,3\nx=oops\n", "f.csv"),
                         doctest::Contains("f.csv:2"), std::runtime_error);
    CHECK_THROWS_AS((void)parse_csv("1\n"), std::runtime_error);
    CHECK_THROWS_AS((void)parse_csv(""), std::runtime_error);
    CHECK_THROWS_AS((void)parse_csv("# only comments\n"), std::runtime_error);
}

TEST_CASE("parse_json and round-trips preserve the instance") {
    Instance i = parse_json(
        R"({"points":[{"x":1,"y":2},{"x":3,"y":4,"w":2.5}],"k":3,"model":"squared"})");
    REQUIRE(i.points.size() == 2);
    CHECK(i.points[0].w == 1.0);
    CHECK(i.points[1].w == 2.5);
    CHECK(i.k == 3);
    CHECK(i.model == CostModel::Squared);

    Instance back = parse_json(instance_to_json(i));
    REQUIRE(back.points.size() == i.points.size());
    for (std::size_t t = 0; t < i.points.size(); ++t) {
        CHECK(back.points[t].x == i.points[t].x);
        CHECK(back.points[t].y == i.points[t].y);
        CHECK(back.points[t].w == i.points[t].w);
    }
    CHECK(back.k == i.k);
    CHECK(back.model == i.model);

    Instance csv = parse_csv(instance_to_csv(i));
    REQUIRE(csv.points.size() == 2);
    CHECK(csv.points[1].w == 2.5);

    CHECK_THROWS_AS((void)parse_json("{\"points\":[]}"), std::runtime_error);
    CHECK_THROWS_AS((void)parse_json("not json"), std::runtime_error);
    CHECK_THROWS_AS(
        (void)parse_json(R"({"points":[{"x":1,"y":2,"w":-1}]})"),
        std::runtime_error);
}

TEST_CASE("cli: exit codes") {
    CHECK(run({"--help"}) == 0);
    CHECK(run({"nonsense"}) == 2);
    CHECK(run({}) == 2);
    CHECK(run({"fit", "--no-such-flag"}) == 2);
    CHECK(run({"fit", "/nonexistent/input.csv"}) == 1);
    CHECK(run({"gen", "--n", "10"}) == 2);  // --seed required
}

TEST_CASE("cli gen: deterministic per seed") {
    Tmp a("gen_a.csv"), b("gen_b.csv"), c("gen_c.csv");
    CHECK(run({"gen", "--n", "50", "--seed", "7", "--out", a.str()}) == 0);
    CHECK(run({"gen", "--n", "50", "--seed", "7", "--out", b.str()}) == 0);
    CHECK(run({"gen", "--n", "50", "--seed", "8", "--out", c.str()}) == 0);
    std::string sa = read_file(a.str()), sb = read_file(b.str());
    CHECK(sa == sb);
    CHECK(sa != read_file(c.str()));
    CHECK(parse_csv(sa).points.size() == 50);
}

TEST_CASE("cli fit: staircase instance end to end") {
    Tmp in("stairs.csv"), out("fit.json");
    write_file(in.str(), kStairsCsv);
    CHECK(run({"fit", in.str(), "--k", "2", "--out", out.str()}) == 0);
    nlohmann::json j = nlohmann::json::parse(read_file(out.str()));
    CHECK(j["cost"].get<double>() == doctest::Approx(0.5));
    CHECK(j["engine"] == "prune");
    REQUIRE(j["segments"].size() == 2);
    CHECK(j["segments"][0]["y"].get<double>() == doctest::Approx(0.5));
    CHECK(j["segments"][1]["y"].get<double>() == doctest::Approx(9.5));
    REQUIRE(j["boundaries"].size() == 1);
    CHECK(j["boundaries"][0].get<int>() == 2);

    Tmp out2("fit_oracle.json");
    CHECK(run({"fit", in.str(), "--k", "2", "--engine", "oracle", "--out",
               out2.str()}) == 0);
    nlohmann::json j2 = nlohmann::json::parse(read_file(out2.str()));
    CHECK(j2["cost"].get<double>() == doctest::Approx(0.5));
    CHECK(j2["engine"] == "oracle");
}

TEST_CASE("cli fit: tsv and svg formats") {
    Tmp in("stairs2.csv"), tsv("fit.tsv"), svg1("fit1.svg"), svg2("fit2.svg");
    write_file(in.str(), kStairsCsv);

    CHECK(run({"fit", in.str(), "--k", "2", "--format", "tsv", "--out",
               tsv.str()}) == 0);
    std::string t = read_file(tsv.str());
    CHECK(t.rfind("# cost=0.5", 0) == 0);
    CHECK(count_of(t, "\n") == 3);  // header + two segment rows
    CHECK(count_of(t, "\t") == 4);  // two tabs per segment row

    CHECK(run({"fit", in.str(), "--k", "2", "--format", "svg", "--out",
               svg1.str()}) == 0);
    CHECK(run({"fit", in.str(), "--k", "2", "--format", "svg", "--out",
               svg2.str()}) == 0);
    std::string s = read_file(svg1.str());
    CHECK(s == read_file(svg2.str()));  // byte deterministic
    CHECK(s.rfind("<svg", 0) != std::string::npos);
    CHECK(count_of(s, "<line") == 2);    // one horizontal bar per segment
    CHECK(count_of(s, "<circle") == 4);  // one dot per point
    CHECK(count_of(s, "#d62728") == 4);  // every point is critical here
}

TEST_CASE("cli verify: engines agree on a generated instance") {
    Tmp in("verify.csv");
    CHECK(run({"gen", "--n", "60", "--seed", "3", "--profile", "staircase",
               "--out", in.str()}) == 0);
    CHECK(run({"verify", in.str(), "--k", "3"}) == 0);
    CHECK(run({"verify", in.str(), "--k", "5", "--model", "squared"}) == 0);
}

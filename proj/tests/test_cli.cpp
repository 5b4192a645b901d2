#include <catch2/catch_amalgamated.hpp>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "monorep/specfile.hpp"

using namespace monorep;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

fs::path fresh_dir(const std::string& tag) {
    fs::path d = fs::temp_directory_path() / ("monorep_test_" + tag);
    fs::remove_all(d);
    fs::create_directories(d);
    return d;
}

// Drop timing lines so two runs can be compared bit for bit.
std::string strip_wall(const std::string& text) {
    std::istringstream in(text);
    std::ostringstream out;
    std::string line;
    while (std::getline(in, line))
        if (line.find("wall_ms") == std::string::npos) out << line << "\n";
    return out.str();
}

const char* kGoodSpec = R"(# a small batch
operator G finite-graph
  point 0 ; 0
  point 1 ; 1
end
operator I affine
  matrix 1
end
probe P
  dim 1
  radius 2
  resolution 0.25
end
task monotone G
task monotone I probe P
task ni I probe P
task maximal I probe P
)";

}  // namespace

TEST_CASE("parse errors carry line and column information") {
    try {
        parse_problem_spec("operator A finite-graph\n  point zero ; 0\nend\n");
        FAIL("expected a parse error");
    } catch (const SpecParseError& e) {
        CHECK(e.line == 2);
        CHECK(e.col >= 1);
        CHECK(std::string(e.what()).find("line 2") != std::string::npos);
    }

    CHECK_THROWS_AS(parse_problem_spec("task frobnicate A\n"), SpecParseError);
    CHECK_THROWS_AS(parse_problem_spec("operator A finite-graph\n  point 0 ; 0\n"),
                    SpecParseError);  // missing end
    CHECK_THROWS_AS(parse_problem_spec("blargh\n"), SpecParseError);
    CHECK_THROWS_AS(parse_problem_spec("operator A affine\n  matrix 1 2 ; 3\nend\n"),
                    SpecParseError);  // ragged matrix
}

TEST_CASE("unresolved names raise a dedicated error") {
    CHECK_THROWS_AS(parse_problem_spec("operator S sum\n  of A B\nend\n"), SpecNameError);
    // names referenced only by tasks surface at run time
    ProblemSpec spec = parse_problem_spec("probe P\n  dim 1\nend\ntask monotone MISSING probe P\n");
    fs::path d = fresh_dir("names");
    CHECK_THROWS_AS(run_spec(spec, d.string()), SpecNameError);
}

TEST_CASE("a passing batch exits zero and reports verdicts") {
    ProblemSpec spec = parse_problem_spec(kGoodSpec);
    fs::path d = fresh_dir("pass");
    CHECK(run_spec(spec, d.string()) == 0);
    std::string text = slurp(d / "report.txt");
    RunReport rep = parse_report(text);
    REQUIRE(rep.entries.size() == 4);
    CHECK(rep.entries[0].header == "task 1 monotone G");
    bool saw_holds = false;
    for (const auto& [k, v] : rep.entries[0].fields)
        if (k == "verdict" && v == "HOLDS") saw_holds = true;
    CHECK(saw_holds);
}

TEST_CASE("a failing task exits one") {
    ProblemSpec spec = parse_problem_spec(R"(
operator BAD finite-graph
  point 0 ; 1
  point 1 ; 0
end
task monotone BAD
)");
    fs::path d = fresh_dir("fail");
    CHECK(run_spec(spec, d.string()) == 1);
    std::string text = slurp(d / "report.txt");
    CHECK(text.find("FAILS") != std::string::npos);
    CHECK(text.find("witness") != std::string::npos);
}

TEST_CASE("a possible failure on sampled data exits two") {
    // the two-point graph is not NI; behind a sum node only the sampled
    // check applies, so the verdict is POSSIBLE_FAIL
    ProblemSpec spec = parse_problem_spec(R"(
operator G finite-graph
  point 0 ; 0
  point 1 ; 1
end
operator Z affine
  matrix 0
end
operator S sum
  of G Z
end
probe P
  box 0 0 ; 1 1
  resolution 0.25
end
task ni S probe P
)");
    fs::path d = fresh_dir("possible");
    CHECK(run_spec(spec, d.string()) == 2);
    CHECK(slurp(d / "report.txt").find("POSSIBLE_FAIL") != std::string::npos);
}

TEST_CASE("task errors are reported without aborting the batch") {
    ProblemSpec spec = parse_problem_spec(R"(
operator I affine
  matrix 1
end
probe P
  dim 1
end
task extension I probe P
task monotone I probe P
)");
    fs::path d = fresh_dir("errors");
    CHECK(run_spec(spec, d.string()) == 1);  // the error marks the run failed
    RunReport rep = parse_report(slurp(d / "report.txt"));
    REQUIRE(rep.entries.size() == 2);
    bool saw_error = false;
    for (const auto& [k, v] : rep.entries[0].fields)
        if (k == "verdict" && v == "ERROR") saw_error = true;
    CHECK(saw_error);
}

TEST_CASE("reports round-trip through serialize and parse") {
    ProblemSpec spec = parse_problem_spec(kGoodSpec);
    fs::path d = fresh_dir("roundtrip");
    run_spec(spec, d.string());
    std::string text = slurp(d / "report.txt");
    RunReport rep = parse_report(text);
    CHECK(serialize_report(rep) == text);
}

TEST_CASE("identical runs produce identical reports modulo timing") {
    ProblemSpec spec = parse_problem_spec(kGoodSpec);
    fs::path d1 = fresh_dir("det1"), d2 = fresh_dir("det2");
    CHECK(run_spec(spec, d1.string()) == run_spec(spec, d2.string()));
    CHECK(strip_wall(slurp(d1 / "report.txt")) == strip_wall(slurp(d2 / "report.txt")));
}

TEST_CASE("surface sampling writes a CSV with the expected columns") {
    ProblemSpec spec = parse_problem_spec(R"(
operator G finite-graph
  point 0 ; 0
  point 1 ; 1
end
probe P
  box -1 -1 ; 1 1
  resolution 0.5
end
task sample-surface G probe P out surf.csv
)");
    fs::path d = fresh_dir("surface");
    CHECK(run_spec(spec, d.string()) == 0);
    std::string csv = slurp(d / "surf.csv");
    std::istringstream in(csv);
    std::string header;
    REQUIRE(std::getline(in, header));
    CHECK(header == "z,z2,p,h,phi,h_minus_p");
    std::size_t rows = 0;
    std::string line, first;
    while (std::getline(in, line))
        if (!line.empty()) {
            if (rows == 0) first = line;
            ++rows;
        }
    CHECK(rows == 25);  // 5 x 5 grid
    // lexicographic order puts the lower corner first
    CHECK(first.rfind("-1,-1,", 0) == 0);
}

TEST_CASE("a degenerate probe box yields a header-only CSV") {
    ProblemSpec spec = parse_problem_spec(R"(
operator I affine
  matrix 1
end
probe P
  box 0 0 ; 0 0
end
task sample-surface I probe P out empty.csv
)");
    fs::path d = fresh_dir("degenerate");
    CHECK(run_spec(spec, d.string()) == 0);
    std::string csv = slurp(d / "empty.csv");
    CHECK(csv == "z,z2,p,h,h_minus_p\n");
}

TEST_CASE("probe overrides from run options apply") {
    ProblemSpec spec = parse_problem_spec(R"(
operator I affine
  matrix 1
end
probe P
  dim 1
  resolution 0.25
end
task ni I probe P
)");
    RunOptions opts;
    opts.resolution = 0.5;
    fs::path d = fresh_dir("override");
    CHECK(run_spec(spec, d.string(), opts) == 0);
    std::string text = slurp(d / "report.txt");
    CHECK(text.find("resolution 0.5") != std::string::npos);
}

#include <doctest.h>

#include <json.hpp>

#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "clusterkit/cli.hpp"

using nlohmann::json;

namespace {

struct RunResult {
    int code;
    std::string out;
    std::string err;
};

RunResult run(std::vector<std::string> args) {
    std::ostringstream out, err;
    int code = clusterkit::cli_run(std::move(args), out, err);
    return {code, out.str(), err.str()};
}

json first_line_json(const std::string& text) {
    auto nl = text.find('\n');
    return json::parse(text.substr(0, nl == std::string::npos ? text.size() : nl));
}

} // namespace

TEST_SUITE("cli") {

TEST_CASE("ccvar prints cluster variables in cleared form") {
    auto shift = run({"ccvar", "shift(3)", "--quiver", "D4tilde"});
    CHECK(shift.code == 0);
    CHECK(shift.out == "x3\n");

    auto proj = run({"ccvar", "tau^-1 P(2)", "--quiver", "kronecker"});
    CHECK(proj.code == 0);
    CHECK(proj.out ==
          "(x1^6 + 3*x1^4 + 2*x1^2*x2^2 + 3*x1^2 + x2^4 + 2*x2^2 + 1) / (x1^2*x2^3)\n");

    auto j = run({"ccvar", "delta[1]", "--quiver", "kronecker", "--format", "json"});
    CHECK(j.code == 0);
    json v = first_line_json(j.out);
    CHECK(v["object"] == "delta[1]");
    CHECK(v["dim"] == json::array({1, 1}));
    CHECK(v["value"].size() == 3); // (1,1), (-1,1)-free: exps (1,-1),(-1,-1),(-1,1)
}

TEST_CASE("expand emits the basis expansion as JSON") {
    auto r = run({"expand", "delta[1] * delta[1]", "--quiver", "kronecker"});
    CHECK(r.code == 0);
    CHECK(r.out == "[{\"coef\":1,\"dim\":[2,2]},{\"coef\":1,\"dim\":[0,0]}]\n");

    // same product passed as separate words
    auto w = run({"expand", "delta[1]", "*", "delta[1]", "--quiver", "kronecker"});
    CHECK(w.out == r.out);

    // a key outside the catalog box is a verification failure, not a crash
    auto far = run({"expand", "delta[3]", "--quiver", "kronecker"});
    CHECK(far.code == 1);
    CHECK(first_line_json(far.out)["error"] == "NotInSpan");
}

TEST_CASE("quiver subcommands expose roots and tubes") {
    auto roots = run({"quiver", "roots", "--quiver", "kronecker", "--format", "json"});
    CHECK(roots.code == 0);
    json rj = first_line_json(roots.out);
    REQUIRE(rj.size() == 3);
    CHECK(rj[0] == json({{"defect", 1}, {"dim", {1, 0}}}));
    CHECK(rj[1] == json({{"defect", -1}, {"dim", {0, 1}}}));
    CHECK(rj[2] == json({{"defect", 0}, {"dim", {1, 1}}, {"imaginary", true}}));

    auto tubes = run({"quiver", "tubes", "--quiver", "D4tilde", "--format", "json"});
    json tj = first_line_json(tubes.out);
    REQUIRE(tj.size() == 3);
    for (const auto& t : tj) CHECK(t["rank"] == 2);

    // no non-homogeneous tubes on the Kronecker quiver
    auto none = run({"quiver", "tubes", "--quiver", "kronecker", "--format", "json"});
    CHECK(first_line_json(none.out) == json::array());

    auto show = run({"quiver", "show", "--quiver", "A32tilde", "--format", "json"});
    json sj = first_line_json(show.out);
    CHECK(sj["quiver"]["vertices"] == 5);
    CHECK(sj["delta"] == json::array({1, 1, 1, 1, 1}));
}

TEST_CASE("oracle reports subobject counts and chi") {
    auto r = run({"oracle", "1,1", "0,1", "--quiver", "kronecker", "--format", "json"});
    CHECK(r.code == 0);
    json j = first_line_json(r.out);
    CHECK(j["chi"] == 1);
    CHECK(j["coeffs"] == json::array({1}));
    CHECK(j["primes"].size() >= 2);

    // full subobject lattice of the generic delta module: 0, one point, all
    auto total = run({"oracle", "2,1,1,1,1", "0,0,0,0,0", "--quiver", "D4tilde",
                      "--format", "json"});
    CHECK(first_line_json(total.out)["chi"] == 1);
}

TEST_CASE("verify suites pass on the builtin quivers") {
    auto d4 = run({"verify", "d4", "--format", "json"});
    CHECK(d4.code == 0);
    json dj = first_line_json(d4.out);
    CHECK(dj["pass"] == true);
    CHECK(dj["suite"] == "d4");
    REQUIRE(dj["reports"].size() == 5);
    for (const auto& rep : dj["reports"]) CHECK(rep["pass"] == true);

    auto kron = run({"verify", "kronecker", "--format", "json"});
    CHECK(kron.code == 0);
    CHECK(first_line_json(kron.out)["pass"] == true);

    auto all = run({"verify", "all", "--quiver", "kronecker", "--format", "json"});
    CHECK(all.code == 0);
    json aj = first_line_json(all.out);
    CHECK(aj["pass"] == true);
    CHECK(aj["reports"].size() >= 40);

    // human format renders one line per check plus a summary
    auto human = run({"verify", "d4"});
    CHECK(human.code == 0);
    CHECK(human.out.find("PASS d4_golden_recursion") != std::string::npos);
    CHECK(human.out.find("OK d4: 5 checks") != std::string::npos);
}

TEST_CASE("verify output is byte-identical across runs") {
    auto a = run({"verify", "all", "--quiver", "A22tilde", "--format", "json"});
    auto b = run({"verify", "all", "--quiver", "A22tilde", "--format", "json"});
    CHECK(a.code == 0);
    CHECK(a.out == b.out);
}

TEST_CASE("usage errors exit with code 2") {
    auto suite = run({"verify", "nope"});
    CHECK(suite.code == 2);
    CHECK(first_line_json(suite.out)["error"] == "Usage");

    auto quiver = run({"ccvar", "P(1)", "--quiver", "bogus"});
    CHECK(quiver.code == 2);
    CHECK(first_line_json(quiver.out)["error"] == "BadParameters");

    auto none = run({});
    CHECK(none.code == 2);

    auto dims = run({"oracle", "1,1,1", "0,0", "--quiver", "kronecker"});
    CHECK(dims.code == 2);

    auto atom = run({"ccvar", "preproj(2,1)", "--quiver", "kronecker"});
    CHECK(atom.code == 2);
    CHECK(first_line_json(atom.out)["error"] == "ParseError");

    auto help = run({"--help"});
    CHECK(help.code == 0);
    CHECK(help.out.find("Subcommands") != std::string::npos);
}

TEST_CASE("quivers load from inline JSON and from files") {
    const std::string kron = R"({"vertices":2,"arrows":[[1,2],[1,2]]})";
    auto inline_q = run({"ccvar", "P(1)", "--quiver-json", kron});
    auto builtin = run({"ccvar", "P(1)", "--quiver", "kronecker"});
    CHECK(inline_q.code == 0);
    CHECK(inline_q.out == builtin.out);

    const std::string path = "cli_test_quiver.json";
    {
        std::ofstream f(path);
        f << kron << "\n";
    }
    auto from_file = run({"ccvar", "P(1)", "--quiver-file", path});
    CHECK(from_file.out == builtin.out);
    std::remove(path.c_str());
}

TEST_CASE("CLUSTERKIT_SEED overrides the seed option") {
    auto flagged = run({"verify", "basis", "--quiver", "kronecker", "--seed", "7",
                        "--format", "json"});
    setenv("CLUSTERKIT_SEED", "7", 1);
    auto env = run({"verify", "basis", "--quiver", "kronecker", "--format", "json"});
    unsetenv("CLUSTERKIT_SEED");
    CHECK(flagged.code == 0);
    CHECK(env.out == flagged.out);
}

} // TEST_SUITE

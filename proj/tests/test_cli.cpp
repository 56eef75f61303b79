#include "cli_helpers.hpp"

#include "ks/cli.hpp"
#include "ks/errors.hpp"

#include <doctest.h>

#include <cmath>
#include <sstream>

using namespace ks;

namespace {

const char* kXdx = R"({"line":{"interval":[0,1]},"G":{"poly":[0,1]},"f":{"poly":[0,1],"continuous":true}})";
const char* kTwoPoint =
    R"({"line":{"finite":[0,1]},"G":{"const":1,"regularity":"nondecreasing"},"f":{"table":[[0,2],[1,3]]},"F":{"table":[[0,2],[1,3]]}})";
const char* kAbsHarmonic = R"({"line":{"ordinal":"w"},"series":{"a":{"kind":"alt-harmonic"}},"absolute":true})";

const Row* find(const Report& r, const std::string& name) {
    for (const auto& row : r.rows)
        if (row.name == name) return &row;
    return nullptr;
}

} // namespace

TEST_CASE("integrate x dx as csv") {
    CliRun r = run_cli_binary("integrate \"" + write_problem("xdx.json", kXdx) + "\" --tol 1e-9 --format csv");
    CHECK(r.code == 0);
    Report rep = parse_report(r.out, Format::Csv);
    const Row* row = find(rep, "integral");
    REQUIRE(row);
    CHECK(row->value == 0.5);
    CHECK(row->status == "Exact");
}

TEST_CASE("ftc on the two-point line reports the violated precondition") {
    CliRun r = run_cli_binary("ftc \"" + write_problem("twopoint.json", kTwoPoint) + "\"");
    CHECK(r.code == 0);
    Report rep = parse_report(r.out, Format::Table);
    CHECK(find(rep, "lhs")->value == 2);
    CHECK(find(rep, "rhs")->value == 3);
    const Row* v = find(rep, "violation");
    REQUIRE(v);
    CHECK(v->status == "PreconditionViolated");
    CHECK(v->note.find("at 1") != std::string::npos);
}

TEST_CASE("absolute integral of the alternating harmonic problem diverges") {
    CliRun r = run_cli_binary("integrate \"" + write_problem("abs.json", kAbsHarmonic) + "\" --format json");
    CHECK(r.code == 2);
    Report rep = parse_report(r.out, Format::Json);
    CHECK(find(rep, "absolute")->status == "Divergent");
}

TEST_CASE("invalid input exits 3 with a location") {
    CliRun unknown = run_cli_binary("integrate \"" + write_problem("bad.json", R"({"line":{"interval":[0,1]},"g":1})") + "\"");
    CHECK(unknown.code == 3);
    CHECK(unknown.err.find("\"g\"") != std::string::npos);
    CliRun syntax = run_cli_binary("integrate \"" + write_problem("syntax.json", R"({"line": )") + "\"");
    CHECK(syntax.code == 3);
    CHECK(syntax.err.find("line 1") != std::string::npos);
    CliRun outside = run_cli_binary(
        "integrate \"" + write_problem("outside.json", R"({"line":{"finite":[0,1]},"G":{"const":1},"f":{"const":1},"points":[2]})") + "\"");
    CHECK(outside.code == 3);
    CHECK(run_cli_binary("integrate").code == 3);
    CHECK(run_cli_binary("frobnicate x.json").code == 3);
    CHECK(run_cli_binary("integrate missing.json").code == 3);
}

TEST_CASE("check is byte-stable") {
    CliRun a = run_cli_binary("check --seed 42"), b = run_cli_binary("check --seed 42");
    CHECK(a.code == 0);
    CHECK(a.out == b.out);
    CHECK(a.out.rfind("# check", 0) == 0);
}

TEST_CASE("the refinement budget comes from the environment when set") {
    std::string path = write_problem("xdx2.json", kXdx);
    CliRun r = run_cli_binary("integrate \"" + path + "\" --max-refine 12", "KS_MAX_REFINE=5");
    Report rep = parse_report(r.out, Format::Table);
    bool stamped = false;
    for (const auto& [k, v] : rep.env) stamped = stamped || (k == "max_refine" && v == "5");
    CHECK(stamped);
}

TEST_CASE("other subcommands run on small problems") {
    std::string ts = write_problem("ts.json", R"({"line":{"timescale":[[0,1],[2,2]]},"G":{"poly":[2,1],"regularity":"nondecreasing"},
        "f":{"poly":[1,1],"continuous":true},"points":[2,"1/2"],"gauge":{"uniform":0.25}})");
    for (const char* cmd : {"classify", "partition", "variation", "derivative", "nabla"}) {
        CliRun r = run_cli_binary(std::string(cmd) + " \"" + ts + "\"");
        CHECK_MESSAGE(r.code == 0, cmd, r.err);
    }
    Report nab = parse_report(run_cli_binary("nabla \"" + ts + "\" --format csv").out, Format::Csv);
    CHECK(find(nab, "ks")->value == doctest::Approx(6.5));

    std::string conv = write_problem("mct.json", R"({"line":{"interval":[0,1]},"G":{"poly":[0,1],"regularity":"nondecreasing"},
        "converge":{"mode":"MCT","family":"one_minus_power","limit":{"pieces":[{"on":[0,1],"poly":[1]}]}}})");
    CliRun c = run_cli_binary("converge \"" + conv + "\"");
    CHECK_MESSAGE(c.code == 0, c.out, c.err);

    std::string vit = write_problem("vitali.json", R"({"line":{"interval":[0,1]},"G":{"poly":[0,1],"regularity":"nondecreasing"},
        "vitali":{"family":[["1/4","1/2"],["1/3","1/3"],[0,1]],"points":["1/3"],"eps":0.1}})");
    CliRun v = run_cli_binary("vitali \"" + vit + "\" --format csv");
    CHECK_MESSAGE(v.code == 0, v.out, v.err);

    std::string series = write_problem("ln2.json", R"({"line":{"ordinal":"w"},"series":{"a":{"kind":"alt-harmonic"}}})");
    Report s = parse_report(run_cli_binary("integrate \"" + series + "\"").out, Format::Table);
    CHECK(std::abs(find(s, "integral")->value - std::log(2.0)) <= 1e-6);
}

TEST_CASE("run_cli in process") {
    std::ostringstream out, err;
    CHECK(run_cli({"integrate", write_problem("xdx3.json", kXdx), "--format", "json"}, out, err) == 0);
    CHECK(out.str().rfind("{\"command\":\"integrate\"", 0) == 0);
    std::ostringstream o2, e2;
    CHECK(run_cli({"integrate", write_problem("xdx3.json", kXdx), "--format", "xml"}, o2, e2) == 3);
}

TEST_CASE("reports round trip in every format") {
    Report r;
    r.command = "demo";
    r.env = {{"tol", "1e-09"}, {"seed", "7"}};
    r.add("plain", 0.1, 1e-300, "Exact", "");
    r.add("tricky, \"quoted\"", -2.5e17, INFINITY, "Certified", "a | b, c");
    r.add("nan", std::nan(""), -INFINITY, "-", "note");
    r.note("only note", "PASS", "  padded  ");
    r.note("a|b \\ c", "FAIL", "two\nlines, \"q\"\n");
    for (Format f : {Format::Table, Format::Csv, Format::Json}) {
        std::string text = render(r, f);
        Report back = parse_report(text, f);
        CHECK(same_report(back, r));
        CHECK(render(back, f) == text);
    }
}

TEST_CASE("numbers print in shortest round-trip form") {
    for (double x : {0.1, 1.0 / 3, 1e-9, 6.02214076e23, -0.0, 5e-324}) CHECK(parse_number(format_number(x)) == x);
    CHECK(format_number(0.5) == "0.5");
    CHECK(format_number(INFINITY) == "inf");
    CHECK(std::isnan(parse_number("nan")));
}

TEST_CASE("exit codes follow the row statuses") {
    Report r;
    r.add("a", 1, 0, "Exact");
    CHECK(exit_code(r) == 0);
    r.add("b", 1, 0, "NoCertificate");
    CHECK(exit_code(r) == 2);
}

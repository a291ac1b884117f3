#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>

#include <json.hpp>

#include "odospec/expr.hpp"
#include "odospec/job.hpp"

using namespace odospec;
using nlohmann::json;

namespace {

json normalized(const std::string& report_json) {
    json j = json::parse(report_json);
    j.erase("wall_time_ms");
    return j;
}

/// Byte-level normalization: drop the wall-time line only.
std::string strip_wall_time(const std::string& report_json) {
    std::string out;
    std::istringstream in(report_json);
    std::string line;
    while (std::getline(in, line))
        if (line.find("\"wall_time_ms\"") == std::string::npos) out += line + "\n";
    return out;
}

}  // namespace

TEST_CASE("toml subset parsing") {
    std::string text = R"(
# a comment
family = "generic"
K10 = 0
K11 = "1/2"
flag = true
f = ["1", "0", 2]
prec = 32

[series]
u = ["0", "1"]

[[job]]
family = "dixmier"
kappa = -1
)";
    TomlTable t = parse_toml(text);
    CHECK(t.get_string("family") == "generic");
    CHECK(t.get_integer("K10") == 0);
    CHECK(t.get_string("K11") == "1/2");
    CHECK(t.at("flag").boolean);
    CHECK(t.at("f").items.size() == 3);
    CHECK(t.get_integer("prec") == 32);
    CHECK(t.tables.at("series").at("u").items.size() == 2);
    REQUIRE(t.table_arrays.at("job").size() == 1);
    CHECK(t.table_arrays.at("job")[0].get_string("kappa") == "-1");
}

TEST_CASE("toml errors carry line and column") {
    try {
        parse_toml("family = \"generic\"\nbad line here\n");
        FAIL("expected a parse error");
    } catch (const ParseError& e) {
        CHECK(e.line == 2);
        CHECK(e.column > 0);
    }
    CHECK_THROWS_AS(parse_toml("k = [1, 2\n"), ParseError);
    CHECK_THROWS_AS(parse_toml("k = \"unterminated\n"), ParseError);
    CHECK_THROWS_AS(parse_toml("k = 1\nk = 2\n"), ParseError);
}

TEST_CASE("operator expression grammar") {
    std::map<std::string, Laurent> env;
    env["u"] = Laurent::poly({Scalar(0), Scalar(0), Scalar(1)});  // z^2
    DiffOp op = parse_operator("d^2 - 2*u", env);
    CHECK(op.order() == 2);
    CHECK(op.coeff(0).agrees_with(Laurent::monomial(Scalar(-2), 2)));

    DiffOp prod = parse_operator("(d + z) * (d - z)");
    // (d + z)(d - z) = d^2 + (z d - z d) - z^2 + [d, -z] ... expanded exactly:
    DiffOp direct = mul(parse_operator("d + z"), parse_operator("d - z"));
    CHECK(prod.order() == direct.order());
    for (long i = 0; i <= prod.order(); ++i)
        CHECK(prod.coeff(static_cast<size_t>(i)).agrees_with(direct.coeff(static_cast<size_t>(i))));

    CHECK(parse_operator("1/2 * d^3").coeff(3).agrees_with(Laurent::constant(Scalar(Rat(1, 2)))));
    CHECK_THROWS_AS(parse_operator("d^"), ParseError);
    CHECK_THROWS_AS(parse_operator("w + 1"), ParseError);
    CHECK_THROWS_AS(parse_operator("(d"), ParseError);
    CHECK_THROWS_AS(parse_operator("d z"), ParseError);  // products need '*'
}

TEST_CASE("the funny example report") {
    JobConfig job = example_config("funny", Settings{48, 12, 16});
    Report report = run_job(job);
    json j = json::parse(report.json);
    CHECK(j["class"]["tag"] == "u_cuspidal");
    CHECK(j["curve"]["kind"] == "cuspidal");
    CHECK(j["gcd"]["order"] == 3);
    // spot-check serialized gcd coefficients: the d^2 series is -z^2/2
    auto c2 = j["gcd"]["coeffs"][2];
    CHECK(c2["val"] == 2);
    CHECK(c2["coeffs"][0] == "-1/2");
    // the order-six generator is present with exact coefficients
    CHECK(j["M"]["order"] == 6);
    CHECK(j["M"]["coeffs"][6]["coeffs"][0] == "2");
    CHECK(j["certificates"]["consistency"] == "ok");
}

TEST_CASE("malformed rationals are parse errors") {
    CHECK_THROWS_AS(parse_jobs("family = \"dixmier\"\nkappa = \"1/0\"\n", JobConfig::Kind::Verify, {}),
                    ParseError);
}

TEST_CASE("job configs validate required fields") {
    CHECK_THROWS_AS(parse_jobs("family = \"generic\"\n", JobConfig::Kind::Classify, {}), ValidationError);
    CHECK_THROWS_AS(parse_jobs("family = \"nope\"\nf = [\"1\"]\n", JobConfig::Kind::Classify, {}),
                    ValidationError);
    auto jobs = parse_jobs("family = \"wallenberg\"\ng2 = 0\ng3 = 0\nx0 = 1\ny0 = 2\nprec = 24\n",
                           JobConfig::Kind::Verify, {});
    REQUIRE(jobs.size() == 1);
    CHECK(jobs[0].settings.prec == 24);
}

TEST_CASE("a batch of ten classify jobs gives deterministic reports") {
    std::ostringstream cfg;
    cfg << "prec = 32\n";
    cfg << "[[job]]\nfamily = \"generic\"\nK10 = 0\nK11 = 1\nK12 = 1\nK14 = 0\nf = [\"1\"]\n";
    cfg << "[[job]]\nfamily = \"dixmier\"\nkappa = 0\n";
    cfg << "[[job]]\nfamily = \"not-locally-free\"\nrho = 0\nf = [\"1\"]\n";
    cfg << "[[job]]\nfamily = \"not-locally-free\"\nrho = 6\nf = [\"1\"]\n";
    cfg << "[[job]]\nfamily = \"not-locally-free\"\nrho = -6\nf = [\"1\"]\n";
    cfg << "[[job]]\nfamily = \"degenerate-self-adjoint\"\nc2 = [\"0\", \"1\"]\ngamma = 2\n";
    cfg << "[[job]]\nfamily = \"self-adjoint\"\nK2 = 1\nK3 = 1\nf = [\"1\"]\n";
    cfg << "[[job]]\nfamily = \"generic\"\nK10 = 0\nK11 = 0\nK12 = 0\nK14 = -1\nf = [\"1\"]\n";
    cfg << "[[job]]\nfamily = \"fourier-dixmier\"\nkappa = 0\n";
    cfg << "[[job]]\nfamily = \"generic\"\nK10 = 2\nK11 = 1\nK12 = 0\nK14 = -4\nf = [\"1\"]\n";
    auto jobs = parse_jobs(cfg.str(), JobConfig::Kind::Classify, Settings{48, 12, 16});
    REQUIRE(jobs.size() == 10);
    CHECK(jobs[0].settings.prec == 32);  // file-level default applies
    std::vector<Report> first, second;
    for (const auto& job : jobs) first.push_back(run_job(job));
    for (const auto& job : jobs) second.push_back(run_job(job));
    for (size_t i = 0; i < jobs.size(); ++i) {
        CHECK(normalized(first[i].json) == normalized(second[i].json));
        // byte-identical after normalizing the wall time
        CHECK(strip_wall_time(first[i].json) == strip_wall_time(second[i].json));
    }
    CHECK(json::parse(join_reports(first)).size() == 10);
    // spot-check the batch verdicts
    CHECK(normalized(first[0].json)["class"]["tag"] == "b_bundle");
    CHECK(normalized(first[1].json)["class"]["tag"] == "b_bundle");
    CHECK(normalized(first[1].json)["class"]["at_infinity"] == true);
    CHECK(normalized(first[2].json)["class"]["tag"] == "u_cuspidal");
    std::string u3 = normalized(first[3].json)["class"]["tag"];
    std::string u4 = normalized(first[4].json)["class"]["tag"];
    CHECK(((u3 == "u_plus" && u4 == "u_minus") || (u3 == "u_minus" && u4 == "u_plus")));
    CHECK(normalized(first[5].json)["class"]["tag"] == "s_plus_s");
    CHECK(normalized(first[6].json)["class"]["tag"] == "line_sum");
    CHECK(normalized(first[7].json)["class"]["tag"] == "line_sum");
    CHECK(normalized(first[8].json)["class"]["tag"] == "rank3_e_p");
}

TEST_CASE("curve jobs accept explicit Weierstrass parameters") {
    auto jobs = parse_jobs("g2 = 3\ng3 = -1\n", JobConfig::Kind::Curve, {});
    REQUIRE(jobs.size() == 1);
    Report report = run_job(jobs[0]);
    json j = json::parse(report.json);
    CHECK(j["curve"]["kind"] == "nodal");
    CHECK(j["curve"]["singular_point"][0] == "1/2");
}

TEST_CASE("pseudo-differential operators serialize with top, depth, coeffs") {
    PsdOp op(1, {Laurent::constant(Scalar(1)), Laurent::zero(), Laurent::poly({Scalar(0), Scalar(1)})});
    json j = json::parse(psd_to_json(op));
    CHECK(j["top"] == 1);
    CHECK(j["depth"] == 2);
    CHECK(j["coeffs"].size() == 3);
    CHECK(j["coeffs"][0]["coeffs"][0] == "1");
}

TEST_CASE("gcd jobs accept raw operator expressions") {
    std::string cfg = R"(
A = "d^2 - 2*u"
B = "d^3 - 3*u*d"
[series]
u = ["0", "0", "1"]
)";
    auto jobs = parse_jobs(cfg, JobConfig::Kind::Gcd, {});
    REQUIRE(jobs.size() == 1);
    Report report = run_job(jobs[0]);
    json j = json::parse(report.json);
    CHECK(j.contains("gcd"));
}

TEST_CASE("torsion pair JSON round trip") {
    std::string text = R"({
      "n": 3,
      "U": [["0","1","0"],["0","0","1"],["0","0","0"]],
      "V": [["0","0","-5"],["0","0","0"],["0","0","0"]]
    })";
    MatPair pair = parse_matrix_pair_json(text);
    JobConfig job;
    job.kind = JobConfig::Kind::Torsion;
    job.torsion_pair = pair;
    Report report = run_job(job);
    json j = json::parse(report.json);
    CHECK(j["normal_form"] == "M_theta(theta = 5)");
    CHECK(j["matlis_dual"] == "M_theta(theta = 5)");
    CHECK_THROWS_AS(parse_matrix_pair_json("{\"n\": 2}"), ValidationError);
    CHECK_THROWS_AS(parse_matrix_pair_json("not json"), ParseError);
}

TEST_CASE("exit codes map the error taxonomy") {
    CHECK(exit_code_for(ValidationError("x")) == 2);
    CHECK(exit_code_for(ParseError("x")) == 2);
    CHECK(exit_code_for(IrregularC2("x")) == 2);
    CHECK(exit_code_for(IrrationalSupport("x")) == 2);
    CHECK(exit_code_for(InconclusivePrecision("x", 3)) == 3);
    CHECK(exit_code_for(ConsistencyError("x")) == 4);
}

#ifdef ODOSPEC_CLI
TEST_CASE("the command line leaves no partial output on errors") {
    namespace fs = std::filesystem;
    fs::path dir = fs::temp_directory_path() / "odospec_cli_test";
    fs::create_directories(dir);
    fs::path bad_cfg = dir / "bad.toml";
    fs::path out = dir / "report.json";
    std::error_code ec;
    fs::remove(out, ec);
    {
        std::ofstream f(bad_cfg);
        f << "family = \"dixmier\"\nkappa = \"1/0\"\n";
    }
    std::string cmd = std::string(ODOSPEC_CLI) + " verify " + bad_cfg.string() + " --json " +
                      out.string() + " 2>/dev/null";
    int rc = std::system(cmd.c_str());
    CHECK(WEXITSTATUS(rc) == 2);
    CHECK(!fs::exists(out));

    // a good run writes the report and exits zero
    fs::path good_cfg = dir / "good.toml";
    {
        std::ofstream f(good_cfg);
        f << "family = \"dixmier\"\nkappa = 0\n";
    }
    std::string cmd2 =
        std::string(ODOSPEC_CLI) + " verify " + good_cfg.string() + " --json " + out.string();
    int rc2 = std::system(cmd2.c_str());
    CHECK(WEXITSTATUS(rc2) == 0);
    CHECK(fs::exists(out));

    // the example subcommand classifies the funny pair
    std::string cmd3 = std::string(ODOSPEC_CLI) + " example funny --json " + out.string();
    CHECK(WEXITSTATUS(std::system(cmd3.c_str())) == 0);
    std::ifstream in(out);
    json j = json::parse(in);
    CHECK(j["class"]["tag"] == "u_cuspidal");
}
#endif

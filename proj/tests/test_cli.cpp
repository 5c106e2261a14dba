#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "bcx/driver.hpp"
#include "bcx/error.hpp"
#include "bcx/specfile.hpp"

#include <array>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <sys/wait.h>

using namespace bcx;

namespace {

std::string fixture_path(const std::string& name)
{
    return std::string(BCX_FIXTURE_DIR) + "/" + name;
}

std::string read_file(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    REQUIRE_MESSAGE(in.good(), "cannot open " << path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

const std::vector<std::string>& fixture_names()
{
    static const std::vector<std::string> names = {
        "ex_monoid_nn.bcx",      "ex_monoid_units.bcx",
        "ex_square_relation.bcx", "ex_cross_relation.bcx",
        "standard_structure.bcx", "twisted_structure.bcx",
        "nn_seed.bcx",            "nn_seed_square.bcx",
        "nn_seed_gauge.bcx",
    };
    return names;
}

JobSpec job(const std::string& command, const std::string& path)
{
    JobSpec j;
    j.command = command;
    j.input_path = path;
    return j;
}

// Run the real binary with stderr suppressed; returns the exit code and
// fills `out` with stdout bytes.
int run_binary(const std::string& args, std::string& out)
{
    std::string cmd = std::string(BCX_CLI_PATH) + " " + args + " 2>/dev/null";
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    out.clear();
    std::array<char, 4096> buf{};
    std::size_t got = 0;
    while ((got = fread(buf.data(), 1, buf.size(), pipe)) > 0)
        out.append(buf.data(), got);
    int status = pclose(pipe);
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::vector<long long> as_i64s(const Json& arr)
{
    std::vector<long long> v;
    for (const auto& x : arr)
        v.push_back(x.get<long long>());
    return v;
}

} // namespace

TEST_CASE("every fixture parses and the serializer is canonical")
{
    for (const auto& name : fixture_names()) {
        CAPTURE(name);
        std::string text = read_file(fixture_path(name));
        SpecFile parsed = parse_spec(text);
        std::string canon = serialize_spec(parsed);
        // Canonical form is a fixed point of parse-then-serialize.
        CHECK(serialize_spec(parse_spec(canon)) == canon);
    }
}

TEST_CASE("square-relation monoid section round-trips exactly")
{
    SpecFile a = parse_spec(read_file(fixture_path("ex_square_relation.bcx")));
    REQUIRE(a.monoid.has_value());
    SpecFile b = parse_spec(serialize_spec(a));
    REQUIRE(b.monoid.has_value());
    CHECK(b.monoid->pres.ambient_rank == a.monoid->pres.ambient_rank);
    CHECK(b.monoid->pres.generators == a.monoid->pres.generators);
    CHECK(b.monoid->pres.relations == a.monoid->pres.relations);
    CHECK(b.monoid->free == a.monoid->free);
    CHECK(a.monoid->pres.ambient_rank == 2);
    CHECK(a.monoid->pres.generators.size() == 3);
    CHECK(a.monoid->pres.relations.size() == 1);
    CHECK(a.monoid->free == 1);
    REQUIRE(a.points.has_value());
    CHECK(a.points->size() == 3);
}

TEST_CASE("parse errors carry line, column and an expectation")
{
    auto witness = [](const std::string& text) -> std::string {
        try {
            parse_spec(text);
        } catch (const Error& e) {
            REQUIRE(e.code() == Errc::ParseError);
            return e.witness();
        }
        FAIL("expected a parse error");
        return {};
    };

    SUBCASE("empty input")
    {
        CHECK(witness("").find("no sections") != std::string::npos);
        CHECK(witness("# only a comment\n").find("no sections") !=
              std::string::npos);
    }
    SUBCASE("unknown section names the valid ones")
    {
        std::string w = witness("[bogus]\nx = 1\n");
        CHECK(w.find("unknown section [bogus]") != std::string::npos);
        CHECK(w.find("[seed-chart]") != std::string::npos);
    }
    SUBCASE("unknown key in a section")
    {
        std::string w = witness("[monoid]\nambient_rank = 1\nrank = 1\n");
        CHECK(w.find("unknown key 'rank' in [monoid]") != std::string::npos);
    }
    SUBCASE("malformed relation row is named")
    {
        std::string w = witness("[monoid]\nambient_rank = 2\n"
                                "generator = 1 0\ngenerator = 1 2\n"
                                "generator = 1 1\n"
                                "relation = 1 1 -> 0 0 2\n");
        CHECK(w.find("relation row 1") != std::string::npos);
        CHECK(w.find("line 6") != std::string::npos);
    }
    SUBCASE("duplicate scalar keys")
    {
        std::string w =
            witness("[monoid]\nambient_rank = 1\nambient_rank = 2\n"
                    "generator = 1\n");
        CHECK(w.find("duplicate ambient_rank") != std::string::npos);
    }
    SUBCASE("content before any section")
    {
        CHECK(witness("ambient_rank = 1\n").find("before any section") !=
              std::string::npos);
    }
    SUBCASE("bad numerics")
    {
        std::string w = witness("[monoid]\nambient_rank = x\n");
        CHECK(w.find("not an integer") != std::string::npos);
        w = witness("[monoid]\nambient_rank = 1\ngenerator = 1\n"
                    "[points]\nexact = 1/0\n");
        CHECK(w.find("not a rational") != std::string::npos);
    }
    SUBCASE("bacs term needs six segments")
    {
        std::string w = witness("[monoid]\nambient_rank = 1\ngenerator = 1\n"
                                "[bacs]\nterm = 1 0 | 1 | 0\n");
        CHECK(w.find("term has 3 segments") != std::string::npos);
    }
}

TEST_CASE("driver: monoid-analyze matches the worked square example")
{
    Report r = run(job("monoid-analyze",
                       fixture_path("ex_square_relation.bcx")));
    CHECK(r.results["face_count"].get<int>() == 4);
    CHECK(r.results["toric"].get<bool>() == true);
    CHECK(r.results["weakly_toric"].get<bool>() == true);
    CHECK(r.results["gp_rank"].get<int>() == 2);
    CHECK(r.results["unit_rank"].get<int>() == 0);
    Json cm = r.results["codim_multiset"];
    CHECK(cm["0"].get<int>() == 1);
    CHECK(cm["1"].get<int>() == 2);
    CHECK(cm["2"].get<int>() == 1);
    REQUIRE(r.results["canonical_relations"].size() == 1);
    CHECK(r.results["canonical_relations"][0]["text"].get<std::string>() ==
          "x1 x2 = x3^2");
}

TEST_CASE("driver: embed reproduces the cross-relation binomial")
{
    Report r = run(job("embed", fixture_path("ex_cross_relation.bcx")));
    CHECK(r.results["ambient_dim"].get<int>() == 4);
    REQUIRE(r.results["equations"].size() == 1);
    auto lhs = as_i64s(r.results["equations"][0]["lhs"]);
    auto rhs = as_i64s(r.results["equations"][0]["rhs"]);
    std::vector<long long> L = {1, 1, 0, 0}, R = {0, 0, 1, 1};
    bool direct = (lhs == L && rhs == R);
    bool swapped = (lhs == R && rhs == L);
    CHECK((direct || swapped));
}

TEST_CASE("driver: strata classifies interior, wall and vertex points")
{
    Report r = run(job("strata", fixture_path("ex_square_relation.bcx")));
    REQUIRE(r.results["points"].size() == 3);
    const Json& pts = r.results["points"];
    CHECK(pts[0]["depth"].get<int>() == 0);
    CHECK(pts[0]["stratum_dim"].get<int>() == 2);
    CHECK(pts[1]["depth"].get<int>() == 2);
    CHECK(pts[1]["stratum_dim"].get<int>() == 0);
    CHECK(pts[2]["kind"].get<std::string>() == "float");
    CHECK(pts[2]["depth"].get<int>() == 0);
}

TEST_CASE("driver: nn-correct recovers the seeded automorphism")
{
    JobSpec j = job("nn-correct", fixture_path("nn_seed.bcx"));
    j.order = 4;
    Report r = run(j);
    CHECK(r.results["order_reached"].get<int>() == 4);
    CHECK(r.results["all_residuals_ok"].get<bool>() == true);
    for (const auto& m : r.results["monomials"]) {
        CAPTURE(m.dump());
        CHECK((m["residual_order"].is_null() ||
               m["residual_order"].get<int>() >= 4));
        CHECK(m["ok"].get<bool>() == true);
    }
    for (const auto& z : r.results["z_coordinates"])
        CHECK(z["residual_order"].is_null());
    const Json& h = r.results["corrections"]["h"];
    REQUIRE(h.size() == 2);
    CHECK(h[0]["q"] == Json::array({1}));
    CHECK(h[0]["element"]["text"].get<std::string>() ==
          "-1*[q=(0) m=(-1) a=(0) b=(0)]");
    CHECK(h[1]["q"] == Json::array({2}));
    CHECK(h[1]["element"]["text"].get<std::string>() ==
          "(-1/3,-1/3)*[q=(0) m=(-1) a=(0) b=(0)]");
    CHECK(r.results["corrections"]["g"].empty());
}

TEST_CASE("driver: gauge constants are accepted and echoed")
{
    JobSpec j = job("nn-correct", fixture_path("nn_seed_gauge.bcx"));
    j.order = 3;
    Report r = run(j);
    REQUIRE(r.results["gauge"].size() == 1);
    CHECK(r.results["gauge"][0].get<std::string>() == "3/5+4/5i");
    CHECK(r.results["all_residuals_ok"].get<bool>() == true);
}

TEST_CASE("driver: the twisted structure is rejected with a witness")
{
    Report nij = run(job("nijenhuis", fixture_path("twisted_structure.bcx")));
    CHECK(nij.results["integrable"].get<bool>() == false);
    CHECK(nij.results["nonzero_component_count"].get<int>() > 0);

    JobSpec j = job("nn-correct", fixture_path("twisted_structure.bcx"));
    j.order = 3;
    try {
        run(j);
        FAIL("expected NotIntegrable");
    } catch (const Error& e) {
        CHECK(e.code() == Errc::NotIntegrable);
        CHECK(e.witness().find("order 2") != std::string::npos);
    }
}

TEST_CASE("driver: sampling options are echoed in the report")
{
    JobSpec j = job("bracket", fixture_path("standard_structure.bcx"));
    j.samples = 3;
    j.seed = 42;
    Report r = run(j);
    CHECK(r.options["samples"].get<int>() == 3);
    CHECK(r.options["seed"].get<std::uint64_t>() == 42);
    CHECK(r.results["frame_pairs_commute"].get<bool>() == true);
}

TEST_CASE("reports are byte-identical across repeated runs")
{
    JobSpec j = job("nn-correct", fixture_path("nn_seed_square.bcx"));
    j.order = 4;
    j.json = true;
    std::string a = report_to_json(run(j));
    std::string b = report_to_json(run(j));
    CHECK(a == b);
    CHECK(!a.empty());

    std::ostringstream out1, err1, out2, err2;
    CHECK(run_cli(j, out1, err1) == 0);
    CHECK(run_cli(j, out2, err2) == 0);
    CHECK(out1.str() == out2.str());
    CHECK(err1.str().empty());
    CHECK(out1.str() == a);
}

TEST_CASE("run_cli maps outcomes to the exit-code contract")
{
    SUBCASE("success is 0")
    {
        std::ostringstream out, err;
        CHECK(run_cli(job("monoid-analyze",
                          fixture_path("ex_monoid_nn.bcx")),
                      out, err) == 0);
        CHECK(out.str().find("face_count") != std::string::npos);
        CHECK(err.str().empty());
    }
    SUBCASE("domain errors are 2 and name the error")
    {
        JobSpec j = job("nn-correct", fixture_path("twisted_structure.bcx"));
        j.order = 3;
        std::ostringstream out, err;
        CHECK(run_cli(j, out, err) == 2);
        CHECK(out.str().find("NotIntegrable") != std::string::npos);
        CHECK(out.str().find("order 2") != std::string::npos);
    }
    SUBCASE("missing input is 1")
    {
        std::ostringstream out, err;
        CHECK(run_cli(job("monoid-analyze", "no_such_file.bcx"), out, err) ==
              1);
        CHECK(err.str().find("cannot open") != std::string::npos);
    }
    SUBCASE("parse failures are 1")
    {
        auto tmp = std::filesystem::temp_directory_path() / "bcx_bad.bcx";
        std::ofstream(tmp) << "[monoid]\nambient_rank = oops\n";
        std::ostringstream out, err;
        CHECK(run_cli(job("monoid-analyze", tmp.string()), out, err) == 1);
        CHECK(err.str().find("parse error") != std::string::npos);
        std::filesystem::remove(tmp);
    }
}

TEST_CASE("the binary repeats byte-identical JSON and honours exit codes")
{
    std::string a, b;
    std::string args = "nn-correct --order 4 --json \"" +
                       fixture_path("nn_seed.bcx") + "\"";
    CHECK(run_binary(args, a) == 0);
    CHECK(run_binary(args, b) == 0);
    CHECK(a == b);
    CHECK(a.find("\"schema_version\": 1") != std::string::npos);

    std::string out;
    CHECK(run_binary("monoid-analyze \"" +
                         fixture_path("ex_square_relation.bcx") + "\"",
                     out) == 0);
    CHECK(out.find("face_count: 4") != std::string::npos);
    CHECK(out.find("toric: true") != std::string::npos);

    CHECK(run_binary("nn-correct --order 3 \"" +
                         fixture_path("twisted_structure.bcx") + "\"",
                     out) == 2);
    CHECK(out.find("NotIntegrable") != std::string::npos);

    CHECK(run_binary("monoid-analyze no_such_file.bcx", out) == 1);
    CHECK(run_binary("", out) == 1);
    // --order belongs to nn-correct only; --samples needs a structure command.
    CHECK(run_binary("monoid-analyze --order 4 \"" +
                         fixture_path("ex_monoid_nn.bcx") + "\"",
                     out) == 1);
    CHECK(run_binary("embed --samples 3 \"" +
                         fixture_path("ex_cross_relation.bcx") + "\"",
                     out) == 1);
    CHECK(run_binary("--help", out) == 0);
    CHECK(out.find("nn-correct") != std::string::npos);
}

TEST_CASE("ten thousand fuzzed mutations never escape the error contract")
{
    std::vector<std::string> corpus;
    for (const auto& name : fixture_names())
        corpus.push_back(read_file(fixture_path(name)));

    std::mt19937_64 rng(20260814);
    auto pick = [&](std::size_t n) {
        return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng);
    };
    static const char alphabet[] =
        " \t\n#[]=|/->.0123456789abcdefghijklmnopqrstuvwxyz_";
    auto mutate = [&](std::string s) {
        int edits = 1 + static_cast<int>(pick(4));
        for (int e = 0; e < edits && !s.empty(); ++e) {
            switch (pick(6)) {
            case 0: // replace a byte
                s[pick(s.size())] = alphabet[pick(sizeof(alphabet) - 1)];
                break;
            case 1: // delete a byte
                s.erase(pick(s.size()), 1);
                break;
            case 2: // insert a byte
                s.insert(s.begin() + static_cast<long>(pick(s.size() + 1)),
                         alphabet[pick(sizeof(alphabet) - 1)]);
                break;
            case 3: { // duplicate a line
                std::size_t at = pick(s.size());
                std::size_t lo = s.rfind('\n', at);
                lo = (lo == std::string::npos) ? 0 : lo + 1;
                std::size_t hi = s.find('\n', at);
                hi = (hi == std::string::npos) ? s.size() : hi + 1;
                s.insert(lo, s.substr(lo, hi - lo));
                break;
            }
            case 4: // truncate the tail
                s.resize(pick(s.size() + 1));
                break;
            default: { // swap two bytes
                std::size_t i = pick(s.size()), k = pick(s.size());
                std::swap(s[i], s[k]);
                break;
            }
            }
        }
        return s;
    };

    static const char* commands[] = {"monoid-analyze", "embed",
                                     "strata",         "bracket",
                                     "nijenhuis",      "dbar",
                                     "normal-form",    "nn-correct"};
    auto tmp = std::filesystem::temp_directory_path() /
               ("bcx_fuzz_" + std::to_string(::getpid()) + ".bcx");

    int parsed_ok = 0, parse_rejected = 0, ran = 0;
    for (int i = 0; i < 10000; ++i) {
        std::string text = mutate(corpus[pick(corpus.size())]);
        try {
            SpecFile s = parse_spec(text);
            // Whatever parses must serialize to a canonical fixed point.
            std::string canon = serialize_spec(s);
            CHECK(serialize_spec(parse_spec(canon)) == canon);
            ++parsed_ok;
        } catch (const Error& e) {
            CHECK(e.code() == Errc::ParseError);
            ++parse_rejected;
        }
        if (i % 20 == 0) {
            std::ofstream(tmp, std::ios::binary) << text;
            JobSpec j = job(commands[pick(8)], tmp.string());
            j.order = 2;
            j.samples = 2;
            j.seed = 7;
            j.degree_cap = 8;
            j.json = (i % 40 == 0);
            std::ostringstream out, err;
            int code = run_cli(j, out, err);
            CAPTURE(text);
            CHECK((code == 0 || code == 1 || code == 2));
            ++ran;
        }
    }
    std::filesystem::remove(tmp);
    MESSAGE("fuzz: " << parsed_ok << " parsed, " << parse_rejected
                     << " rejected, " << ran << " full runs");
    // The mutator must exercise both sides of the parser.
    CHECK(parsed_ok > 100);
    CHECK(parse_rejected > 1000);
}

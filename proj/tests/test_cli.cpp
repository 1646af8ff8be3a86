#include "arczeros/cli_io.hpp"

#include <doctest.h>
#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <sys/wait.h>

using namespace arczeros;
namespace fs = std::filesystem;

namespace {

const std::string bin = ARCZEROS_BIN;
const std::string configs = ARCZEROS_CONFIGS;

std::string slurp(const fs::path& p)
{
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

struct Run {
    int status = -1;
    std::string out, err;
};

fs::path scratch(const std::string& name)
{
    fs::path d = fs::temp_directory_path() / ("arczeros_cli_test_" + std::to_string(::getpid())) / name;
    fs::remove_all(d);
    fs::create_directories(d);
    return d;
}

Run run(const std::string& args, const fs::path& dir)
{
    std::string cmd = bin + " " + args + " >" + (dir / "stdout.txt").string() + " 2>" + (dir / "stderr.txt").string();
    int s = std::system(cmd.c_str());
    Run r;
    r.status = WIFEXITED(s) ? WEXITSTATUS(s) : -1;
    r.out = slurp(dir / "stdout.txt");
    r.err = slurp(dir / "stderr.txt");
    return r;
}

fs::path write_config(const fs::path& dir, const std::string& text)
{
    fs::path p = dir / "cfg.json";
    std::ofstream(p) << text;
    return p;
}

std::string base_config()
{
    return R"({"schema_version": 1, "angle_unit": "degrees", "arcs": [45, 135, 225, 315],
              "weight": {"factors": [{"xi": 180}, {"xi": 360}]}, "n": 6})";
}

std::string error_of(const std::string& text)
{
    try {
        parse_config(text, "t.json");
    } catch (const ConfigError& e) {
        return e.what();
    }
    return "";
}

size_t count(const std::string& s, const std::string& needle)
{
    size_t n = 0;
    for (size_t p = s.find(needle); p != std::string::npos; p = s.find(needle, p + 1)) ++n;
    return n;
}

} // namespace

TEST_CASE("config parsing")
{
    auto c = parse_config(base_config());
    CHECK(c.angle_unit == "degrees");
    CHECK(c.arcs[0] == doctest::Approx(std::numbers::pi / 4));
    CHECK(c.factors.size() == 2);
    CHECK(c.n_lo == 6);
    CHECK(c.n_hi == 6);
    CHECK(c.w_endpoints.empty());
    CHECK(c.nodes == 512);

    auto nl = nlohmann::json::parse(base_config());
    nl.erase("n");
    nl["n_range"] = "3:9";
    nl["split"] = "mixed";
    c = parse_config(nl.dump());
    CHECK(c.n_lo == 3);
    CHECK(c.n_hi == 9);
    CHECK(c.w_endpoints == std::vector<int>{0, 1});
    nl["split"] = nlohmann::json{{"kind", "custom"}, {"w_endpoints", {1, 2}}};
    CHECK(parse_config(nl.dump()).w_endpoints == std::vector<int>{1, 2});
    nl["split"] = "W=R";
    CHECK(parse_config(nl.dump()).w_endpoints.size() == 4);

    // resolved configuration survives a round trip
    auto again = parse_config(config_to_json(c).dump());
    CHECK(again.arcs == c.arcs);
    CHECK(again.n_hi == c.n_hi);
}

TEST_CASE("config errors name the field")
{
    CHECK(error_of(R"({"schema_version": 1, "angle_unit": "degrees", "arcs": [1,2,3,4], "colour": 3})").find("colour") !=
          std::string::npos);
    auto e = error_of("{\n  \"schema_version\": 1,\n  \"arcs\": [1, 2,, 3]\n}");
    CHECK(e.find("line 3") != std::string::npos);
    CHECK(e.find("column") != std::string::npos);
    CHECK(error_of(R"({"schema_version": 1, "arcs": [1,2,3,4]})").find("angle_unit") != std::string::npos);
    CHECK(error_of(R"({"schema_version": 1, "angle_unit": "grad", "arcs": [1,2,3,4]})").find("angle_unit") !=
          std::string::npos);
    CHECK(error_of(R"({"schema_version": 2, "angle_unit": "degrees", "arcs": [1,2,3,4]})").find("schema_version") !=
          std::string::npos);
    CHECK(error_of(R"({"schema_version": 1, "angle_unit": "degrees", "arcs": [1,3,2,4]})").find("arcs[2]") !=
          std::string::npos);
    CHECK(error_of(R"({"schema_version": 1, "angle_unit": "degrees", "arcs": [1,2,3,4], "n": 3, "n_range": "1:4"})")
              .find("n_range") != std::string::npos);
    CHECK(error_of(R"({"schema_version": 1, "angle_unit": "degrees", "arcs": [1,2,3,4], "n_range": "5:4"})")
              .find("n_range") != std::string::npos);
    CHECK(error_of(R"({"schema_version": 1, "angle_unit": "degrees", "arcs": [1,2,3,4], "weight": {"factors": [{"xi": 1, "lambda": 0}]}})")
              .find("lambda") != std::string::npos);
    CHECK(error_of(R"({"schema_version": 1, "angle_unit": "degrees", "arcs": [1,2,3,4], "split": "X"})").find("split") !=
          std::string::npos);
    CHECK(error_of(R"({"schema_version": 1, "angle_unit": "degrees", "arcs": [1,2,3,4], "quadrature_nodes": 4})")
              .find("quadrature_nodes") != std::string::npos);
    CHECK_THROWS_AS(parse_n_range("7"), ConfigError);
    CHECK_THROWS_AS(parse_formats("csv,pdf"), ConfigError);
    CHECK(parse_formats("svg,csv").size() == 2);
}

TEST_CASE("module names")
{
    CHECK(module_of(ConfigError("x")) == "cli_io");
    CHECK(module_of(GeometryError("x")) == "arc_geometry");
    CHECK(module_of(WeightError("x")) == "weight_model");
    CHECK(module_of(OrthoError("x", 1)) == "orthopoly_engine");
    CHECK(module_of(ThetaRepError("x")) == "theta_representation");
    CHECK(module_of(TruncationError("x")) == "elliptic_core");
    CHECK(format_double(0.1) == "0.10000000000000001");
    CHECK(format_double(2.0) == "2");
}

TEST_CASE("describe")
{
    auto d = scratch("describe");
    auto cfg = write_config(d, base_config());
    auto r = run("describe --config " + cfg.string() + " --out " + d.string(), d);
    REQUIRE(r.status == 0);
    auto j = nlohmann::json::parse(slurp(d / "describe.json"));
    CHECK(j["frame"]["omega2"].get<double>() == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(j["omega2_rational"]["rational"].get<bool>());
    CHECK(j["omega2_rational"]["den"].get<int>() == 2);
    // tau in the report is the library value to the last bit
    Session s(parse_config(slurp(cfg)));
    CHECK(j["frame"]["tau"].get<double>() == capacity(s.frame));
    CHECK(j["frame"]["tau"].get<double>() == doctest::Approx(std::sqrt(std::cos(std::numbers::pi / 4))).epsilon(1e-10));
}

TEST_CASE("zeros outputs are deterministic and complete")
{
    // the resolved config records the output directory, so both runs write to the same place
    auto a = scratch("zeros_a"), b = scratch("zeros_b");
    auto cfg = write_config(a, base_config());
    std::string args = "zeros --config " + cfg.string() + " --n-range 5:8 --format csv,json,svg --out " + a.string();
    REQUIRE(run(args, a).status == 0);
    for (const auto& e : fs::directory_iterator(a)) fs::copy(e.path(), b / e.path().filename());
    REQUIRE(run(args, a).status == 0);
    for (int n = 5; n <= 8; ++n) {
        char name[32];
        for (const char* ext : {"csv", "json", "svg"}) {
            std::snprintf(name, sizeof name, "zeros_n%03d.%s", n, ext);
            REQUIRE(fs::exists(a / name));
            CHECK(slurp(a / name) == slurp(b / name));
        }
        std::snprintf(name, sizeof name, "zeros_n%03d.csv", n);
        auto csv = slurp(a / name);
        CHECK(count(csv, "\n") == size_t(n + 1));
        CHECK(csv.rfind("n,index,re,im,abs,strip,dist_to_S,nearest_mass_dist\n", 0) == 0);
        std::snprintf(name, sizeof name, "zeros_n%03d.svg", n);
        auto svg = slurp(a / name);
        CHECK(count(svg, "class=\"zero\"") == size_t(n));
        CHECK(count(svg, "<polyline") == 1);
        CHECK(count(svg, "class=\"arc\"") == 2);
    }
    CHECK(slurp(a / "zeros_summary.json") == slurp(b / "zeros_summary.json"));
}

TEST_CASE("moments, orthopoly, curve and tpoly write their files")
{
    auto d = scratch("misc");
    auto cfg = write_config(d, base_config());
    REQUIRE(run("moments --config " + cfg.string() + " --out " + d.string(), d).status == 0);
    CHECK(count(slurp(d / "moments.csv"), "\n") == 8);
    REQUIRE(run("orthopoly --config " + cfg.string() + " --out " + d.string(), d).status == 0);
    CHECK(count(slurp(d / "orthopoly.csv"), "\n") == 8);
    REQUIRE(run("curve --config " + cfg.string() + " --format csv,svg --out " + d.string(), d).status == 0);
    CHECK(fs::exists(d / "curve.svg"));
    CHECK(count(slurp(d / "curve.csv"), "\n") == 513);

    auto flat = write_config(d, R"({"schema_version": 1, "angle_unit": "degrees", "arcs": [45, 135, 225, 315], "split": "mixed"})");
    REQUIRE(run("tpoly --config " + flat.string() + " --n-range 1:4 --out " + d.string(), d).status == 0);
    auto t = nlohmann::json::parse(slurp(d / "tpoly.json"));
    REQUIRE(t["polynomials"].size() == 4);
    CHECK(t["polynomials"][1]["exists"].get<bool>());
    CHECK(t["polynomials"][1]["l"].get<int>() == 2);
}

TEST_CASE("verify")
{
    auto d = scratch("verify");
    auto cfg = write_config(d, base_config());
    auto ok = run("verify --config " + cfg.string() + " --out " + d.string(), d);
    CHECK(ok.status == 0);
    CHECK(ok.out.find("FAIL") == std::string::npos);
    CHECK(ok.out.find("PASS theta_agreement n=6") != std::string::npos);
    CHECK(nlohmann::json::parse(slurp(d / "verify.json"))["pass"].get<bool>());

    auto bad = run("verify --config " + cfg.string() + " --perturb-moment 3:0.1 --out " + d.string(), d);
    CHECK(bad.status == 1);
    CHECK(bad.out.find("FAIL theta_agreement n=6") != std::string::npos);
    CHECK_FALSE(nlohmann::json::parse(slurp(d / "verify.json"))["pass"].get<bool>());

    // a larger corruption breaks definiteness and stops before the solve
    auto indef = run("verify --config " + cfg.string() + " --perturb-moment 3:0.5 --out " + d.string(), d);
    CHECK(indef.status == 1);
    CHECK(indef.out.find("FAIL positive_definite") != std::string::npos);
    CHECK(indef.out.find("Toeplitz minor of order 7 is not positive") != std::string::npos);
    CHECK(indef.out.find("theta_agreement") == std::string::npos);
}

TEST_CASE("errors carry the module name and exit 2")
{
    auto d = scratch("errors");
    auto cfg = write_config(d, R"({"schema_version": 1, "angle_unit": "degrees", "arcs": [45, 135, 225, 315], "nope": 1})");
    auto r = run("describe --config " + cfg.string(), d);
    CHECK(r.status == 2);
    CHECK(r.err.rfind("arczeros: cli_io:", 0) == 0);

    // a denominator zero on the arcs
    cfg = write_config(d, R"({"schema_version": 1, "angle_unit": "degrees", "arcs": [45, 135, 225, 315],
                              "weight": {"factors": [{"xi": 90}, {"xi": 360}]}})");
    r = run("moments --config " + cfg.string() + " --out " + d.string(), d);
    CHECK(r.status == 2);
    CHECK(r.err.find("weight_model") != std::string::npos);

    cfg = write_config(d, base_config());
    CHECK(run("zeros --config " + cfg.string() + " --n 0", d).status == 2);
    CHECK(run("zeros --config " + cfg.string() + " --n 3 --n-range 1:2", d).status != 0);
    CHECK(run("zeros", d).status != 0);
}

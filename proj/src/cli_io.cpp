#include "arczeros/cli_io.hpp"

#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <ostream>
#include <set>
#include <sstream>

namespace arczeros {

using ojson = nlohmann::ordered_json;
namespace fs = std::filesystem;

namespace {

[[noreturn]] void fail(const std::string& source, const std::string& field, const std::string& what)
{
    throw ConfigError("cli_io: " + source + ": field '" + field + "': " + what);
}

double get_number(const nlohmann::json& j, const std::string& source, const std::string& field)
{
    if (!j.is_number()) fail(source, field, "must be a number");
    double x = j.get<double>();
    if (!std::isfinite(x)) fail(source, field, "must be finite");
    return x;
}

int get_int(const nlohmann::json& j, const std::string& source, const std::string& field)
{
    if (!j.is_number_integer()) fail(source, field, "must be an integer");
    return j.get<int>();
}

void reject_unknown(const nlohmann::json& obj, const std::set<std::string>& known, const std::string& source,
                    const std::string& prefix)
{
    for (auto it = obj.begin(); it != obj.end(); ++it)
        if (!known.count(it.key())) fail(source, prefix + it.key(), "unknown field");
}

std::vector<int> split_endpoints(const std::string& kind)
{
    if (kind == "V=R") return {};
    if (kind == "W=R") return {0, 1, 2, 3};
    if (kind == "mixed") return {0, 1}; // W takes the endpoints of the first arc
    return {};
}

ojson cjson(cplx z)
{
    return ojson{{"re", z.real()}, {"im", z.imag()}};
}

std::string padded(int n)
{
    char buf[16];
    std::snprintf(buf, sizeof buf, "%03d", n);
    return buf;
}

std::string fixed6(double x)
{
    char buf[64];
    auto r = std::to_chars(buf, buf + sizeof buf, x, std::chars_format::fixed, 6);
    return std::string(buf, r.ptr);
}

std::string shortest(double x)
{
    char buf[64];
    auto r = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, r.ptr);
}

bool wants(const RunConfig& c, const std::string& f)
{
    return std::find(c.formats.begin(), c.formats.end(), f) != c.formats.end();
}

void write_file(const RunConfig& c, const std::string& name, const std::string& content)
{
    fs::create_directories(c.out_dir);
    std::ofstream f(fs::path(c.out_dir) / name, std::ios::binary);
    if (!f) throw ConfigError("cli_io: cannot write " + (fs::path(c.out_dir) / name).string());
    f << content;
}

ojson report_header(const Session& s, const std::string& command)
{
    ojson j;
    j["schema_version"] = kSchemaVersion;
    j["command"] = command;
    j["config"] = config_to_json(s.cfg);
    return j;
}

void require_n(const RunConfig& c)
{
    if (!c.has_n) throw ConfigError("cli_io: no degree given; set n or n_range in the config or pass --n/--n-range");
}

ojson phase_json(const PhaseSolution& p)
{
    return ojson{{"n", p.n},           {"b", cjson(p.b)},   {"delta", p.delta},
                 {"m", p.m},           {"l", p.l},          {"k", p.k},
                 {"p", p.p},           {"mu", p.mu},        {"residual_re", p.residual_re},
                 {"residual_im", p.residual_im}, {"on_boundary", p.on_boundary}};
}

} // namespace

std::string format_double(double x)
{
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    char buf[64];
    auto r = std::to_chars(buf, buf + sizeof buf, x, std::chars_format::general, 17);
    return std::string(buf, r.ptr);
}

std::pair<int, int> parse_n_range(const std::string& s)
{
    auto colon = s.find(':');
    if (colon == std::string::npos) throw ConfigError("cli_io: n range '" + s + "' must look like a:b");
    int a = 0, b = 0;
    auto r1 = std::from_chars(s.data(), s.data() + colon, a);
    auto r2 = std::from_chars(s.data() + colon + 1, s.data() + s.size(), b);
    if (r1.ec != std::errc() || r1.ptr != s.data() + colon || r2.ec != std::errc() || r2.ptr != s.data() + s.size())
        throw ConfigError("cli_io: n range '" + s + "' must look like a:b with integers");
    if (a < 1 || b < a) throw ConfigError("cli_io: n range '" + s + "' needs 1 <= a <= b");
    return {a, b};
}

std::vector<std::string> parse_formats(const std::string& s)
{
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item != "csv" && item != "json" && item != "svg")
            throw ConfigError("cli_io: unknown output format '" + item + "' (use csv, json, svg)");
        if (std::find(out.begin(), out.end(), item) == out.end()) out.push_back(item);
    }
    return out;
}

RunConfig parse_config(const std::string& text, const std::string& source)
{
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        size_t line = 1, col = 1;
        for (size_t i = 0; i + 1 < e.byte && i < text.size(); ++i) {
            if (text[i] == '\n') {
                ++line;
                col = 1;
            } else {
                ++col;
            }
        }
        throw ConfigError("cli_io: " + source + ": malformed JSON at line " + std::to_string(line) + ", column " +
                          std::to_string(col) + ": " + e.what());
    }
    if (!j.is_object()) throw ConfigError("cli_io: " + source + ": top level must be an object");
    reject_unknown(j,
                   {"schema_version", "angle_unit", "arcs", "weight", "split", "n", "n_range", "quadrature_nodes",
                    "tolerances", "allow_indefinite", "output"},
                   source, "");

    RunConfig c;
    if (!j.contains("schema_version")) fail(source, "schema_version", "missing");
    if (get_int(j["schema_version"], source, "schema_version") != kSchemaVersion)
        fail(source, "schema_version", "unsupported version, expected " + std::to_string(kSchemaVersion));

    if (!j.contains("angle_unit")) fail(source, "angle_unit", "missing; say \"degrees\" or \"radians\"");
    if (!j["angle_unit"].is_string()) fail(source, "angle_unit", "must be \"degrees\" or \"radians\"");
    c.angle_unit = j["angle_unit"].get<std::string>();
    if (c.angle_unit != "degrees" && c.angle_unit != "radians")
        fail(source, "angle_unit", "must be \"degrees\" or \"radians\"");
    const double unit = c.angle_unit == "degrees" ? std::numbers::pi / 180.0 : 1.0;

    if (!j.contains("arcs")) fail(source, "arcs", "missing");
    if (!j["arcs"].is_array() || j["arcs"].size() != 4) fail(source, "arcs", "must be an array of four angles");
    for (size_t i = 0; i < 4; ++i)
        c.arcs[i] = unit * get_number(j["arcs"][i], source, "arcs[" + std::to_string(i) + "]");
    for (size_t i = 1; i < 4; ++i)
        if (!(c.arcs[i] > c.arcs[i - 1]))
            fail(source, "arcs[" + std::to_string(i) + "]", "angles must increase strictly");
    if (!(c.arcs[3] < c.arcs[0] + 2 * std::numbers::pi)) fail(source, "arcs[3]", "must stay below arcs[0] + 2 pi");

    if (j.contains("weight")) {
        const auto& w = j["weight"];
        if (!w.is_object()) fail(source, "weight", "must be an object");
        reject_unknown(w, {"c_A", "factors"}, source, "weight.");
        if (w.contains("c_A")) c.c_A = get_number(w["c_A"], source, "weight.c_A");
        if (w.contains("factors")) {
            if (!w["factors"].is_array()) fail(source, "weight.factors", "must be an array");
            for (size_t i = 0; i < w["factors"].size(); ++i) {
                const auto& f = w["factors"][i];
                std::string p = "weight.factors[" + std::to_string(i) + "]";
                if (!f.is_object()) fail(source, p, "must be an object");
                reject_unknown(f, {"xi", "m", "lambda"}, source, p + ".");
                FactorConfig fc;
                if (!f.contains("xi")) fail(source, p + ".xi", "missing");
                if (f["xi"].is_object()) {
                    reject_unknown(f["xi"], {"re", "im"}, source, p + ".xi.");
                    double re = f["xi"].contains("re") ? get_number(f["xi"]["re"], source, p + ".xi.re") : 0.0;
                    double im = f["xi"].contains("im") ? get_number(f["xi"]["im"], source, p + ".xi.im") : 0.0;
                    fc.xi = unit * cplx(re, im);
                } else {
                    fc.xi = unit * get_number(f["xi"], source, p + ".xi");
                }
                if (f.contains("m")) fc.m = get_int(f["m"], source, p + ".m");
                if (fc.m < 1) fail(source, p + ".m", "must be a positive integer");
                if (f.contains("lambda")) fc.lambda = get_int(f["lambda"], source, p + ".lambda");
                if (fc.lambda != 1 && fc.lambda != -1) fail(source, p + ".lambda", "must be +1 or -1");
                c.factors.push_back(fc);
            }
        }
    }

    if (j.contains("split")) {
        const auto& s = j["split"];
        if (s.is_string()) {
            c.split = s.get<std::string>();
            if (c.split == "custom") fail(source, "split", "custom needs {\"kind\": \"custom\", \"w_endpoints\": [...]}");
        } else if (s.is_object()) {
            reject_unknown(s, {"kind", "w_endpoints"}, source, "split.");
            if (!s.contains("kind") || !s["kind"].is_string()) fail(source, "split.kind", "missing");
            c.split = s["kind"].get<std::string>();
            if (c.split == "custom" && !s.contains("w_endpoints"))
                fail(source, "split.w_endpoints", "custom split needs an array of endpoint indices 0..3");
            if (s.contains("w_endpoints")) {
                if (!s["w_endpoints"].is_array()) fail(source, "split.w_endpoints", "must be an array of indices 0..3");
                for (size_t i = 0; i < s["w_endpoints"].size(); ++i) {
                    std::string p = "split.w_endpoints[" + std::to_string(i) + "]";
                    int k = get_int(s["w_endpoints"][i], source, p);
                    if (k < 0 || k > 3) fail(source, p, "endpoint index must be 0..3");
                    c.w_endpoints.push_back(k);
                }
                // the resolved copy of a named split lists its endpoints; they have to agree
                if (c.split != "custom" && (c.split == "V=R" || c.split == "W=R" || c.split == "mixed") &&
                    c.w_endpoints != split_endpoints(c.split))
                    fail(source, "split.w_endpoints", "does not match the named split " + c.split);
            }
        } else {
            fail(source, "split", "must be a string or an object");
        }
        if (c.split != "V=R" && c.split != "W=R" && c.split != "mixed" && c.split != "custom")
            fail(source, "split", "must be one of V=R, W=R, mixed, custom");
    }
    if (c.split != "custom") c.w_endpoints = split_endpoints(c.split);

    if (j.contains("n") && j.contains("n_range")) fail(source, "n_range", "give either n or n_range, not both");
    if (j.contains("n")) {
        c.n_lo = c.n_hi = get_int(j["n"], source, "n");
        if (c.n_lo < 1) fail(source, "n", "must be at least 1");
        c.has_n = true;
    }
    if (j.contains("n_range")) {
        const auto& r = j["n_range"];
        if (r.is_string()) {
            try {
                std::tie(c.n_lo, c.n_hi) = parse_n_range(r.get<std::string>());
            } catch (const ConfigError& e) {
                fail(source, "n_range", e.what());
            }
        } else if (r.is_array() && r.size() == 2) {
            c.n_lo = get_int(r[0], source, "n_range[0]");
            c.n_hi = get_int(r[1], source, "n_range[1]");
            if (c.n_lo < 1 || c.n_hi < c.n_lo) fail(source, "n_range", "needs 1 <= a <= b");
        } else {
            fail(source, "n_range", "must be \"a:b\" or [a, b]");
        }
        c.has_n = true;
    }

    if (j.contains("quadrature_nodes")) {
        c.nodes = get_int(j["quadrature_nodes"], source, "quadrature_nodes");
        if (c.nodes < 16) fail(source, "quadrature_nodes", "must be at least 16");
    }
    if (j.contains("tolerances")) {
        const auto& t = j["tolerances"];
        if (!t.is_object()) fail(source, "tolerances", "must be an object");
        reject_unknown(t, {"moment_doubling", "theta_agreement", "quadratic_identity"}, source, "tolerances.");
        auto pos = [&](const char* key, double& dst) {
            if (!t.contains(key)) return;
            dst = get_number(t[key], source, std::string("tolerances.") + key);
            if (!(dst > 0)) fail(source, std::string("tolerances.") + key, "must be positive");
        };
        pos("moment_doubling", c.tol.moment_doubling);
        pos("theta_agreement", c.tol.theta_agreement);
        pos("quadratic_identity", c.tol.quadratic_identity);
    }
    if (j.contains("allow_indefinite")) {
        if (!j["allow_indefinite"].is_boolean()) fail(source, "allow_indefinite", "must be true or false");
        c.allow_indefinite = j["allow_indefinite"].get<bool>();
    }
    if (j.contains("output")) {
        const auto& o = j["output"];
        if (!o.is_object()) fail(source, "output", "must be an object");
        reject_unknown(o, {"dir", "formats"}, source, "output.");
        if (o.contains("dir")) {
            if (!o["dir"].is_string()) fail(source, "output.dir", "must be a string");
            c.out_dir = o["dir"].get<std::string>();
        }
        if (o.contains("formats")) {
            if (!o["formats"].is_array()) fail(source, "output.formats", "must be an array");
            std::string joined;
            for (size_t i = 0; i < o["formats"].size(); ++i) {
                if (!o["formats"][i].is_string())
                    fail(source, "output.formats[" + std::to_string(i) + "]", "must be a string");
                joined += (i ? "," : "") + o["formats"][i].get<std::string>();
            }
            try {
                c.formats = parse_formats(joined);
            } catch (const ConfigError& e) {
                fail(source, "output.formats", e.what());
            }
        }
    }
    return c;
}

RunConfig load_config(const std::string& path)
{
    std::ifstream f(path, std::ios::binary);
    if (!f) throw ConfigError("cli_io: cannot open config file " + path);
    std::stringstream ss;
    ss << f.rdbuf();
    return parse_config(ss.str(), path);
}

ojson config_to_json(const RunConfig& c)
{
    ojson j;
    j["schema_version"] = kSchemaVersion;
    j["angle_unit"] = "radians"; // the resolved copy is always in radians
    j["arcs"] = c.arcs;
    ojson fs = ojson::array();
    for (const auto& f : c.factors) fs.push_back(ojson{{"xi", cjson(f.xi)}, {"m", f.m}, {"lambda", f.lambda}});
    j["weight"] = ojson{{"c_A", c.c_A}, {"factors", fs}};
    j["split"] = ojson{{"kind", c.split}, {"w_endpoints", c.w_endpoints}};
    if (c.has_n) j["n_range"] = {c.n_lo, c.n_hi};
    j["quadrature_nodes"] = c.nodes;
    j["tolerances"] = ojson{{"moment_doubling", c.tol.moment_doubling},
                            {"theta_agreement", c.tol.theta_agreement},
                            {"quadratic_identity", c.tol.quadratic_identity}};
    j["allow_indefinite"] = c.allow_indefinite;
    j["output"] = ojson{{"dir", c.out_dir}, {"formats", c.formats}};
    return j;
}

WeightSpec to_weight_spec(const RunConfig& c)
{
    WeightSpec s;
    s.arcs = normalize_arcs(c.arcs);
    s.c_A = c.c_A;
    for (const auto& f : c.factors) s.factors.push_back({f.xi - s.arcs.psi, f.m, f.lambda});
    s.w_endpoints = c.w_endpoints;
    validate(s);
    return s;
}

std::string module_of(const std::exception& e)
{
    if (dynamic_cast<const ConfigError*>(&e)) return "cli_io";
    if (dynamic_cast<const TruncationError*>(&e)) return "elliptic_core";
    if (dynamic_cast<const GeometryError*>(&e)) return "arc_geometry";
    if (dynamic_cast<const WeightError*>(&e)) return "weight_model";
    if (dynamic_cast<const OrthoError*>(&e)) return "orthopoly_engine";
    if (dynamic_cast<const ThetaRepError*>(&e)) return "theta_representation";
    std::string w = e.what();
    static const std::vector<std::pair<std::string, std::string>> prefixes{
        {"complete_elliptic_K", "elliptic_core"}, {"make_modulus", "elliptic_core"},
        {"polynomial_zeros", "orthopoly_engine"}, {"zero_analysis", "zero_analysis"},
        {"tpoly", "theta_representation"}};
    for (const auto& [p, m] : prefixes)
        if (w.rfind(p, 0) == 0) return m;
    return "arczeros";
}

Session::Session(RunConfig c)
    : cfg(std::move(c)), spec(to_weight_spec(cfg)), frame(make_frame(spec.arcs)), cw(point_masses(spec, frame)),
      rotation(std::polar(1.0, spec.arcs.psi))
{
}

MomentTable Session::moments(int N) const
{
    MomentTable mt = compute_moments(spec, cw, N, cfg.nodes);
    if (mt.doubling_change > cfg.tol.moment_doubling)
        throw WeightError("weight: moments changed by " + format_double(mt.doubling_change) +
                          " under node doubling, above the tolerance; raise quadrature_nodes");
    return mt;
}

ojson describe_report(const Session& s)
{
    const auto& fr = s.frame;
    const auto& md = fr.modulus;
    ojson j = report_header(s, "describe");
    double w2 = harmonic_measure_omega2(fr);
    auto S = curve_s(fr);
    j["frame"] = ojson{{"k", md.k},
                       {"k_prime", md.k_prime},
                       {"K", md.K},
                       {"K_prime", md.K_prime},
                       {"q", md.q},
                       {"zeta", cjson(fr.zeta)},
                       {"omega1", 1.0 - w2},
                       {"omega2", w2},
                       {"tau", capacity(fr)},
                       {"rotation_psi", s.spec.arcs.psi},
                       {"working_arcs", s.spec.arcs.phi},
                       {"alpha", fr.alpha},
                       {"beta", fr.beta}};
    auto rt = detect_rational(w2);
    j["omega2_rational"] = ojson{{"rational", rt.rational}, {"num", rt.num}, {"den", rt.den}, {"error", rt.error}};
    j["curve_S"] = ojson{{"level", S.level},
                         {"start", cjson(s.rotation * S.samples.front())},
                         {"end", cjson(s.rotation * S.samples.back())}};
    ojson masses = ojson::array();
    for (size_t i = 0; i < s.cw.mass_factor.size(); ++i)
        masses.push_back(ojson{{"z", cjson(s.rotation * s.cw.z_points[size_t(s.cw.mass_factor[i])])},
                               {"value", cjson(s.cw.mass_values[i])}});
    ojson vs = ojson::array();
    for (cplx v : s.cw.v_points) vs.push_back(cjson(v));
    j["weight"] = ojson{{"a", s.spec.a()},   {"w", s.spec.w()},   {"v", s.spec.v()}, {"w1", s.spec.w1()},
                        {"w2", s.spec.w2()}, {"v_points", vs}, {"masses", masses}};
    if (!fr.warnings.empty()) j["warnings"] = fr.warnings;
    return j;
}

int cmd_describe(const Session& s, std::ostream& out)
{
    auto j = describe_report(s);
    std::string text = j.dump(2) + "\n";
    if (wants(s.cfg, "json")) write_file(s.cfg, "describe.json", text);
    out << text;
    return 0;
}

int cmd_moments(const Session& s, std::ostream& out)
{
    require_n(s.cfg);
    const int N = s.cfg.n_hi;
    MomentTable mt = s.moments(N);
    auto def = is_positive_definite(mt, N);
    std::ostringstream csv;
    csv << "j,re,im\n";
    ojson list = ojson::array();
    for (int j = 0; j <= N; ++j) {
        // moments of the rotated functional: c_j picks up exp(-i j psi)
        cplx c = std::polar(1.0, -j * s.spec.arcs.psi) * mt.at_double(j);
        csv << j << ',' << format_double(c.real()) << ',' << format_double(c.imag()) << '\n';
        list.push_back(cjson(c));
    }
    ojson j = report_header(s, "moments");
    j["moments"] = list;
    j["sign"] = mt.sign;
    j["nodes"] = mt.nodes;
    j["doubling_change"] = mt.doubling_change;
    j["positive_definite"] = def.positive;
    j["failing_minor_order"] = def.positive ? -1 : def.failing_index + 1;
    j["smallest_eigenvalue"] = def.smallest_eigenvalue;
    if (wants(s.cfg, "csv")) write_file(s.cfg, "moments.csv", csv.str());
    if (wants(s.cfg, "json")) write_file(s.cfg, "moments.json", j.dump(2) + "\n");
    out << "moments c_0..c_" << N << ", sign " << mt.sign << ", doubling change " << format_double(mt.doubling_change)
        << ", positive definite " << (def.positive ? "yes" : "no");
    if (!def.positive) out << " (Toeplitz minor of order " << def.failing_index + 1 << " is not positive)";
    out << '\n';
    return 0;
}

int cmd_orthopoly(const Session& s, std::ostream& out)
{
    require_n(s.cfg);
    MomentTable mt = s.moments(s.cfg.n_hi);
    auto seq = orthogonal_sequence(mt, s.cfg.n_hi);
    std::ostringstream csv;
    csv << "n,index,re,im\n";
    ojson list = ojson::array();
    for (int n = s.cfg.n_lo; n <= s.cfg.n_hi; ++n) {
        const auto& P = seq.P[size_t(n)];
        auto c = P.coeffs();
        ojson coeffs = ojson::array();
        for (int k = 0; k <= n; ++k) {
            // P_raw(z) = rot^n P(z / rot)
            cplx ck = std::polar(1.0, (n - k) * s.spec.arcs.psi) * c[size_t(k)];
            csv << n << ',' << k << ',' << format_double(ck.real()) << ',' << format_double(ck.imag()) << '\n';
            coeffs.push_back(cjson(ck));
        }
        double res = orthogonality_residual(mt, P);
        list.push_back(ojson{{"n", n},
                             {"coefficients", coeffs},
                             {"reflection", cjson(to_double(seq.reflection[size_t(n - 1)]))},
                             {"orthogonality_residual", res},
                             {"dense_step", std::find(seq.dense_steps.begin(), seq.dense_steps.end(), n) !=
                                                seq.dense_steps.end()}});
        out << "P_" << n << ": orthogonality residual " << format_double(res) << '\n';
    }
    ojson j = report_header(s, "orthopoly");
    j["polynomials"] = list;
    if (wants(s.cfg, "csv")) write_file(s.cfg, "orthopoly.csv", csv.str());
    if (wants(s.cfg, "json")) write_file(s.cfg, "orthopoly.json", j.dump(2) + "\n");
    return 0;
}

std::string zeros_svg(const Session& s, const std::vector<cplx>& zeros_raw)
{
    auto pt = [](cplx z) { return fixed6(z.real()) + "," + fixed6(-z.imag()); };
    std::ostringstream o;
    o << "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"-1.3 -1.3 2.6 2.6\" width=\"600\" height=\"600\">\n";
    o << "<circle class=\"unit-circle\" cx=\"0\" cy=\"0\" r=\"1\" fill=\"none\" stroke=\"#999\" stroke-width=\"0.004\"/>\n";
    const auto& raw = s.cfg.arcs;
    for (int a = 0; a < 2; ++a) {
        double t0 = raw[size_t(2 * a)], t1 = raw[size_t(2 * a + 1)];
        int large = t1 - t0 > std::numbers::pi ? 1 : 0;
        o << "<path class=\"arc\" d=\"M " << pt(std::polar(1.0, t0)) << " A 1 1 0 " << large << " 0 "
          << pt(std::polar(1.0, t1)) << "\" fill=\"none\" stroke=\"#000\" stroke-width=\"0.02\"/>\n";
    }
    auto S = curve_s(s.frame);
    o << "<polyline class=\"curve-s\" fill=\"none\" stroke=\"#36c\" stroke-width=\"0.006\" stroke-dasharray=\"0.03 0.02\" points=\"";
    for (size_t i = 0; i < S.samples.size(); ++i) o << (i ? " " : "") << pt(s.rotation * S.samples[i]);
    o << "\"/>\n";
    const double h = 0.03;
    for (int j : s.cw.mass_factor) {
        cplx z = s.rotation * s.cw.z_points[size_t(j)];
        o << "<path class=\"mass\" d=\"M " << pt(z + cplx(-h, -h)) << " L " << pt(z + cplx(h, h)) << " M "
          << pt(z + cplx(-h, h)) << " L " << pt(z + cplx(h, -h)) << "\" stroke=\"#c00\" stroke-width=\"0.008\"/>\n";
    }
    for (cplx z : zeros_raw)
        o << "<circle class=\"zero\" cx=\"" << fixed6(z.real()) << "\" cy=\"" << fixed6(-z.imag())
          << "\" r=\"0.012\" fill=\"#000\"/>\n";
    o << "</svg>\n";
    return o.str();
}

int cmd_zeros(const Session& s, std::ostream& out)
{
    require_n(s.cfg);
    MomentTable mt = s.moments(s.cfg.n_hi);
    PipelineInput in{s.spec, s.frame, s.cw, mt};
    auto recs = zero_pipeline(in, s.cfg.n_lo, s.cfg.n_hi);
    for (const auto& r : recs) {
        std::vector<cplx> zr;
        for (cplx z : r.zeros.zeros) zr.push_back(s.rotation * z);
        if (wants(s.cfg, "csv")) {
            std::ostringstream csv;
            csv << "n,index,re,im,abs,strip,dist_to_S,nearest_mass_dist\n";
            for (size_t i = 0; i < zr.size(); ++i) {
                Strip st = r.observed.strip[i];
                csv << r.n << ',' << i << ',' << format_double(zr[i].real()) << ',' << format_double(zr[i].imag())
                    << ',' << format_double(std::abs(zr[i])) << ','
                    << (st == Strip::one ? "1" : st == Strip::two ? "2" : "stray") << ','
                    << format_double(r.dist_S[i]) << ','
                    << (r.dist_mass[i] ? format_double(*r.dist_mass[i]) : std::string()) << '\n';
            }
            write_file(s.cfg, "zeros_n" + padded(r.n) + ".csv", csv.str());
        }
        if (wants(s.cfg, "json")) {
            ojson j = report_header(s, "zeros");
            j["n"] = r.n;
            j["phase"] = phase_json(r.phase);
            j["strips"] = ojson{{"epsilon", r.strips.epsilon}, {"shrunk", r.strips.shrunk}};
            j["predicted"] = ojson{{"k1", r.predicted.k1},
                                   {"k2", r.predicted.k2},
                                   {"beta", r.predicted.beta},
                                   {"gamma", r.predicted.gamma},
                                   {"strays", r.predicted.strays()}};
            j["observed"] = ojson{{"in_strip1", r.observed.in1}, {"in_strip2", r.observed.in2}, {"strays", r.observed.strays}};
            j["residual_bound"] = r.zeros.residual_bound;
            j["ill_conditioned"] = r.zeros.ill_conditioned;
            write_file(s.cfg, "zeros_n" + padded(r.n) + ".json", j.dump(2) + "\n");
        }
        if (wants(s.cfg, "svg")) write_file(s.cfg, "zeros_n" + padded(r.n) + ".svg", zeros_svg(s, zr));
        out << "n " << r.n << ": strip1 " << r.observed.in1 << ", strip2 " << r.observed.in2 << ", strays "
            << r.observed.strays << " (predicted " << r.predicted.k1 << ", " << r.predicted.k2 << ")\n";
    }
    if (recs.size() > 1 && wants(s.cfg, "json")) {
        auto acc = accumulation_analysis(recs, in);
        auto n0 = scan_n0(recs);
        ojson j = report_header(s, "zeros");
        j["n0"] = n0 ? ojson(*n0) : ojson(nullptr);
        j["omega2"] = acc.omega2;
        j["omega2_rational"] = ojson{{"rational", acc.rationality.rational},
                                     {"num", acc.rationality.num},
                                     {"den", acc.rationality.den}};
        ojson strays = ojson::array();
        for (const auto& t : acc.strays)
            strays.push_back(ojson{{"n", t.n},
                                   {"z", cjson(s.rotation * t.z)},
                                   {"u", cjson(t.u)},
                                   {"dist_to_S", t.dist_S},
                                   {"near_mass", t.near_mass}});
        j["strays"] = strays;
        ojson lattice = ojson::array();
        for (cplx z : acc.lattice) lattice.push_back(cjson(s.rotation * z));
        j["lattice"] = lattice;
        j["mass_hits"] = acc.mass_hits;
        write_file(s.cfg, "zeros_summary.json", j.dump(2) + "\n");
        out << "counts agree from n0 = " << (n0 ? std::to_string(*n0) : std::string("none")) << '\n';
    }
    return 0;
}

int cmd_verify(const Session& s, std::ostream& out, const CommandOptions& opt)
{
    require_n(s.cfg);
    const auto& tol = s.cfg.tol;
    ojson checks = ojson::array();
    bool all = true;
    auto record = [&](const std::string& name, int n, double value, double limit, bool pass, const std::string& note = {}) {
        ojson c{{"name", name}, {"n", n}, {"value", value}, {"tolerance", limit}, {"pass", pass}};
        if (!note.empty()) c["note"] = note;
        checks.push_back(c);
        all = all && pass;
        out << (pass ? "PASS " : "FAIL ") << name << " n=" << n << " value=" << shortest(value)
            << " tol=" << shortest(limit) << (note.empty() ? "" : " (" + note + ")") << '\n';
    };
    auto finish = [&]() {
        ojson j = report_header(s, "verify");
        j["checks"] = checks;
        j["pass"] = all;
        if (wants(s.cfg, "json")) write_file(s.cfg, "verify.json", j.dump(2) + "\n");
        out << (all ? "verify: all checks passed\n" : "verify: some checks failed\n");
        return all ? 0 : 1;
    };

    MomentTable mt = compute_moments(s.spec, s.cw, s.cfg.n_hi + 1, s.cfg.nodes);
    record("moment_doubling", 0, mt.doubling_change, tol.moment_doubling, mt.doubling_change <= tol.moment_doubling);
    if (opt.perturb_index >= 0) {
        if (opt.perturb_index > mt.max_index()) throw ConfigError("cli_io: perturbed moment index out of range");
        mt.c[size_t(opt.perturb_index)] += mpcomplex(opt.perturb_delta);
    }
    auto def = is_positive_definite(mt, s.cfg.n_hi + 1);
    if (!def.positive) {
        std::string note = "weight_model: Toeplitz minor of order " + std::to_string(def.failing_index + 1) +
                           " is not positive";
        if (!s.cfg.allow_indefinite) {
            record("positive_definite", def.failing_index + 1, def.smallest_eigenvalue, 0.0, false, note);
            return finish();
        }
        out << "note: " << note << "; continuing because allow_indefinite is set\n";
    }

    OrthoSequence seq;
    try {
        seq = orthogonal_sequence(mt, s.cfg.n_hi);
    } catch (const std::exception& e) {
        record("levinson", s.cfg.n_hi, 0.0, 0.0, false, module_of(e) + ": " + e.what());
        return finish();
    }
    auto cs = make_circle_samples(s.frame);
    for (int n = s.cfg.n_lo; n <= s.cfg.n_hi; ++n) {
        try {
            auto rep = make_theta_rep(n, s.frame, s.spec, s.cw, cs);
            auto pc = pn_theta_coefficients(rep, cs);
            auto P = seq.P[size_t(n)].coeffs();
            double d = 0.0, m = 0.0;
            for (int i = 0; i <= n; ++i) {
                d = std::max(d, std::abs(pc[size_t(i)] - P[size_t(i)]));
                m = std::max(m, std::abs(P[size_t(i)]));
            }
            record("theta_agreement", n, d / m, tol.theta_agreement, d / m <= tol.theta_agreement);
            auto q = q_theta_coefficients(rep, cs);
            auto qr = verify_quadratic_identity(seq.P[size_t(n)], q, s.spec, s.frame, s.cw);
            record("quadratic_identity", n, qr.residual, tol.quadratic_identity, qr.residual <= tol.quadratic_identity);
            double side = qr.side_origin;
            for (double x : qr.side_mass) side = std::max(side, x);
            record("side_conditions", n, side, tol.quadratic_identity, side <= tol.quadratic_identity);
        } catch (const std::exception& e) {
            record("theta_agreement", n, 0.0, tol.theta_agreement, false, module_of(e) + ": " + e.what());
        }
    }
    try {
        PipelineInput in{s.spec, s.frame, s.cw, mt};
        for (const auto& r : zero_pipeline(in, s.cfg.n_lo, s.cfg.n_hi)) {
            bool ok = r.observed.in1 == r.predicted.k1 && r.observed.in2 == r.predicted.k2;
            double off = std::abs(r.observed.in1 - r.predicted.k1) + std::abs(r.observed.in2 - r.predicted.k2);
            record("zero_counts", r.n, off, 0.0, ok,
                   "observed " + std::to_string(r.observed.in1) + "," + std::to_string(r.observed.in2) + " predicted " +
                       std::to_string(r.predicted.k1) + "," + std::to_string(r.predicted.k2));
        }
    } catch (const std::exception& e) {
        record("zero_counts", s.cfg.n_hi, 0.0, 0.0, false, module_of(e) + ": " + e.what());
    }
    return finish();
}

int cmd_curve(const Session& s, std::ostream& out)
{
    auto S = curve_s(s.frame);
    std::ostringstream csv;
    csv << "index,t,re,im\n";
    for (size_t i = 0; i < S.samples.size(); ++i) {
        cplx z = s.rotation * S.samples[i];
        csv << i << ',' << format_double(S.t[i]) << ',' << format_double(z.real()) << ',' << format_double(z.imag())
            << '\n';
    }
    if (wants(s.cfg, "csv")) write_file(s.cfg, "curve.csv", csv.str());
    if (wants(s.cfg, "json")) {
        ojson j = report_header(s, "curve");
        j["level"] = S.level;
        ojson pts = ojson::array();
        for (size_t i = 0; i < S.samples.size(); ++i) pts.push_back(cjson(s.rotation * S.samples[i]));
        j["samples"] = pts;
        write_file(s.cfg, "curve.json", j.dump(2) + "\n");
    }
    if (wants(s.cfg, "svg")) write_file(s.cfg, "curve.svg", zeros_svg(s, {}));
    out << "curve S: " << S.samples.size() << " samples at Im u = " << format_double(S.level) << '\n';
    return 0;
}

int cmd_tpoly(const Session& s, std::ostream& out)
{
    require_n(s.cfg);
    std::ostringstream csv;
    csv << "two_nu,exists,l,mismatch,M,pell_residual\n";
    ojson list = ojson::array();
    for (int tn = s.cfg.n_lo; tn <= s.cfg.n_hi; ++tn) {
        ojson e{{"two_nu", tn}};
        TExistence ex;
        try {
            ex = t_polynomial_existence(tn, s.frame, s.spec);
        } catch (const std::exception& err) {
            e["error"] = module_of(err) + ": " + err.what();
            list.push_back(e);
            out << "2nu " << tn << ": " << module_of(err) << ": " << err.what() << '\n';
            continue;
        }
        e["exists"] = ex.exists;
        e["l"] = ex.l;
        e["mismatch"] = ex.mismatch;
        std::string M = "", pell = "";
        if (ex.exists) {
            try {
                auto t = minimal_tau(tn, s.frame, s.spec);
                e["M"] = t.M;
                e["eps"] = cjson(t.eps);
                e["sigma_c"] = t.sigma_c;
                e["pell_residual"] = t.pell_residual;
                e["imag_residual"] = t.imag_residual;
                e["endpoint_values"] = t.endpoint_values;
                ojson alt = ojson::array();
                for (double a : t.alternation) alt.push_back(a + s.spec.arcs.psi);
                e["alternation"] = alt;
                M = format_double(t.M);
                pell = format_double(t.pell_residual);
            } catch (const std::exception& err) {
                e["error"] = module_of(err) + ": " + err.what();
            }
        }
        csv << tn << ',' << (ex.exists ? 1 : 0) << ',' << ex.l << ',' << format_double(ex.mismatch) << ',' << M << ','
            << pell << '\n';
        out << "2nu " << tn << ": " << (ex.exists ? "exists" : "none") << ", l " << ex.l;
        if (!M.empty()) out << ", max |tau/sqrt(A)| " << M << ", Pell residual " << pell;
        if (e.contains("error")) out << ", " << e["error"].get<std::string>();
        out << '\n';
        list.push_back(e);
    }
    if (wants(s.cfg, "csv")) write_file(s.cfg, "tpoly.csv", csv.str());
    if (wants(s.cfg, "json")) {
        ojson j = report_header(s, "tpoly");
        j["polynomials"] = list;
        write_file(s.cfg, "tpoly.json", j.dump(2) + "\n");
    }
    return 0;
}

} // namespace arczeros

#pragma once

#include "arczeros/zeros.hpp"

#include <json.hpp>

#include <array>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace arczeros {

inline constexpr int kSchemaVersion = 1;

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct FactorConfig {
    cplx xi; // radians, raw coordinates
    int m = 1;
    int lambda = 1;
};

struct Tolerances {
    double moment_doubling = 1e-12;
    double theta_agreement = 1e-6;
    double quadratic_identity = 1e-7;
};

struct RunConfig {
    std::string angle_unit = "radians";
    std::array<double, 4> arcs{}; // radians, raw coordinates
    double c_A = 1.0;
    std::vector<FactorConfig> factors;
    std::string split = "V=R";
    std::vector<int> w_endpoints; // resolved from split
    int n_lo = 1, n_hi = 1;
    bool has_n = false;
    int nodes = 512;
    Tolerances tol;
    bool allow_indefinite = false;
    std::string out_dir = ".";
    std::vector<std::string> formats{"csv", "json"};
};

// text is the file content, source names it in diagnostics
RunConfig parse_config(const std::string& text, const std::string& source = "config");
RunConfig load_config(const std::string& path);

// the resolved configuration as written into every report
nlohmann::ordered_json config_to_json(const RunConfig& cfg);

WeightSpec to_weight_spec(const RunConfig& cfg);

// "a:b" -> [a, b]
std::pair<int, int> parse_n_range(const std::string& s);
std::vector<std::string> parse_formats(const std::string& s);

// 17 significant digits, no locale
std::string format_double(double x);

// module that raised e, used as the prefix of CLI error messages
std::string module_of(const std::exception& e);

// everything a command needs, built once from the configuration
struct Session {
    RunConfig cfg;
    WeightSpec spec;
    EllipticFrame frame;
    ConformalWeightFrame cw;
    cplx rotation; // z_raw = rotation * z_working

    explicit Session(RunConfig c);
    MomentTable moments(int N) const;
};

struct CommandOptions {
    // adds perturb_delta to c_j before anything is solved; a deliberate corruption for testing
    int perturb_index = -1;
    double perturb_delta = 0.0;
};

// each command writes its files into cfg.out_dir and a short summary to out;
// the return value is the process exit status
int cmd_describe(const Session& s, std::ostream& out);
int cmd_moments(const Session& s, std::ostream& out);
int cmd_orthopoly(const Session& s, std::ostream& out);
int cmd_zeros(const Session& s, std::ostream& out);
int cmd_verify(const Session& s, std::ostream& out, const CommandOptions& opt = {});
int cmd_curve(const Session& s, std::ostream& out);
int cmd_tpoly(const Session& s, std::ostream& out);

nlohmann::ordered_json describe_report(const Session& s);

std::string zeros_svg(const Session& s, const std::vector<cplx>& zeros_raw);

} // namespace arczeros

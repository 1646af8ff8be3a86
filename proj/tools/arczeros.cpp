#include "arczeros/cli_io.hpp"

#include <CLI11.hpp>

#include <iostream>

using namespace arczeros;

int main(int argc, char** argv)
{
    CLI::App app{"Orthogonal polynomials on two arcs of the unit circle"};
    app.require_subcommand(1);

    std::string config_path, range, out_dir, formats, perturb;
    int n = 0;

    const std::vector<std::pair<std::string, std::string>> commands{
        {"describe", "elliptic frame, harmonic measure, capacity and curve S"},
        {"moments", "moments c_0..c_n of the functional"},
        {"orthopoly", "monic orthogonal polynomials from the moments"},
        {"zeros", "zeros, strip counts and distances to S"},
        {"verify", "theta formula against the moment solve, quadratic identity, zero counts"},
        {"curve", "samples of the curve S"},
        {"tpoly", "T-polynomials for 2nu in the given range"}};
    std::vector<CLI::App*> subs;
    std::vector<CLI::Option*> n_opts;
    for (const auto& [name, help] : commands) {
        auto* sub = app.add_subcommand(name, help);
        sub->add_option("--config", config_path, "JSON configuration")->required()->check(CLI::ExistingFile);
        auto* on = sub->add_option("--n", n, "single degree (for tpoly: 2nu)");
        n_opts.push_back(on);
        sub->add_option("--n-range", range, "degree range a:b")->excludes(on);
        sub->add_option("--out", out_dir, "output directory");
        sub->add_option("--format", formats, "comma separated list of csv, json, svg");
        if (name == "verify") sub->add_option("--perturb-moment", perturb, "j:delta, adds delta to c_j (testing)");
        subs.push_back(sub);
    }

    CLI11_PARSE(app, argc, argv);

    try {
        RunConfig cfg = load_config(config_path);
        bool n_given = false;
        for (auto* o : n_opts) n_given = n_given || o->count() > 0;
        if (n_given) {
            if (n < 1) throw ConfigError("cli_io: --n must be at least 1");
            cfg.n_lo = cfg.n_hi = n;
            cfg.has_n = true;
        }
        if (!range.empty()) {
            std::tie(cfg.n_lo, cfg.n_hi) = parse_n_range(range);
            cfg.has_n = true;
        }
        if (!out_dir.empty()) cfg.out_dir = out_dir;
        if (!formats.empty()) cfg.formats = parse_formats(formats);
        CommandOptions opt;
        if (!perturb.empty()) {
            auto colon = perturb.find(':');
            if (colon == std::string::npos) throw ConfigError("cli_io: --perturb-moment must look like j:delta");
            try {
                opt.perturb_index = std::stoi(perturb.substr(0, colon));
                opt.perturb_delta = std::stod(perturb.substr(colon + 1));
            } catch (const std::exception&) {
                throw ConfigError("cli_io: --perturb-moment must look like j:delta");
            }
        }

        Session s(cfg);
        auto* sub = app.get_subcommands().front();
        const std::string cmd = sub->get_name();
        if (cmd == "describe") return cmd_describe(s, std::cout);
        if (cmd == "moments") return cmd_moments(s, std::cout);
        if (cmd == "orthopoly") return cmd_orthopoly(s, std::cout);
        if (cmd == "zeros") return cmd_zeros(s, std::cout);
        if (cmd == "verify") return cmd_verify(s, std::cout, opt);
        if (cmd == "curve") return cmd_curve(s, std::cout);
        if (cmd == "tpoly") return cmd_tpoly(s, std::cout);
    } catch (const std::exception& e) {
        std::string m = module_of(e), w = e.what();
        // most messages already carry their module or operation name
        if (w.rfind(m + ":", 0) == 0)
            std::cerr << "arczeros: " << w << '\n';
        else
            std::cerr << "arczeros: " << m << ": " << w << '\n';
        return 2;
    }
    return 0;
}

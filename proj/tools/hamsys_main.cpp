// Command-line front end.  Subcommand grammar:
//
//   hamsys <subcommand> [flags]
//
// with one subcommand per pipeline (ground-state, check-lemmas, sobolev,
// mp-level, rayleigh, solve-ball, sweep, classify) and a shared flag set.
// A config file supplies defaults under the flags: precedence is
// flags > file > built-ins, which falls out of loading the file before the
// parse writes flag values over it.

#include <cstdio>

#include <CLI11.hpp>

#include "hamsys/cli/run.hpp"

namespace {

struct SubSpec {
    const char* name;
    const char* help;
};

constexpr SubSpec kSubs[] = {
    {"ground-state", "entire Lane-Emden profile by shooting, with decay classification"},
    {"check-lemmas", "sampled verification of the inversion/energy bounds"},
    {"sobolev", "best constant from the ground-state profile"},
    {"mp-level", "mountain-pass level vs. compactness threshold for rescaled test functions"},
    {"rayleigh", "Rayleigh-type constant by projected descent (multi-start)"},
    {"solve-ball", "positive radial solution on a ball by two-parameter shooting"},
    {"sweep", "existence verdicts over a parameter grid, beside the region map"},
    {"classify", "N=3 critical/noncritical region verdict for (p, r, s)"},
};

void add_flags(CLI::App* sc, hamsys::RunConfig& cfg) {
    sc->add_option("--N", cfg.N, "space dimension (>= 3)");
    sc->add_option("--p", cfg.p, "leading exponent p");
    sc->add_option("--q", cfg.q, "partner exponent; derived from the critical hyperbola if absent");
    sc->add_option("--r", cfg.r, "lower-order exponent r");
    sc->add_option("--s", cfg.s, "lower-order exponent s");
    sc->add_option("--lambda", cfg.lambda, "lower-order coefficient lambda");
    sc->add_option("--mu", cfg.mu, "lower-order coefficient mu");
    sc->add_option("--R", cfg.R, "ball radius");
    sc->add_option("--rho", cfg.rho, "test-function support radius; R/2 if absent");
    sc->add_option("--deltas", cfg.deltas, "concentration scales, comma-separated fractions of rho");
    sc->add_option("--tol", cfg.tol, "solver tolerance");
    sc->add_option("--samples", cfg.samples, "sample count for the lemma checks");
    sc->add_option("--grid", cfg.grid, "sweep axes, e.g. \"p=3,3.5,4;lambda=0.5\"");
    sc->add_option("--out", cfg.out, "output directory");
    sc->add_option("--seed", cfg.seed, "seed for randomized starts");
    sc->add_flag("--no-cache", cfg.no_cache, "compute fresh and skip the result cache");
    sc->add_option("--config", cfg.config_file, "flat key=value config file");
}

} // namespace

int main(int argc, char** argv) {
    hamsys::RunConfig cfg;

    // The config file must land before the flag parse so flags override it;
    // pull --config out of argv by hand.
    for (int i = 1; i < argc; ++i) {
        const std::string arg = argv[i];
        if (arg == "--config" && i + 1 < argc) cfg.config_file = argv[i + 1];
        else if (arg.rfind("--config=", 0) == 0) cfg.config_file = arg.substr(9);
    }
    if (!cfg.config_file.empty()) {
        try {
            hamsys::load_config_file(cfg, cfg.config_file);
        } catch (const std::exception& e) {
            std::fprintf(stderr, "error: %s\n", e.what());
            return 1;
        }
    }

    CLI::App app{"perturbed Hamiltonian elliptic systems on the critical hyperbola"};
    app.require_subcommand(1);
    for (const auto& sub : kSubs) add_flags(app.add_subcommand(sub.name, sub.help), cfg);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::fprintf(stderr, "%s\n\n%s", e.what(), app.help().c_str());
        return 1;
    }

    cfg.subcommand = app.get_subcommands().front()->get_name();
    return hamsys::execute(cfg);
}

#pragma once

// Subcommand execution: each runner turns a resolved RunConfig into a summary
// JSON plus data files, execute() handles the cache and the writes.
//
// Every successful run writes <out>/summary.json; bulk data goes beside it
// (profile.csv, margin.dat, ...).  Cache hits replay the stored bytes into
// the output directory, so downstream tooling cannot tell a replay from a
// fresh run.  Exit codes: 0 success, 1 bad configuration or parameters,
// 2 numerical failure (integration, bracketing, or convergence gave up).

#include <cstdio>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "hamsys/cli/cache.hpp"
#include "hamsys/cli/config.hpp"
#include "hamsys/functional.hpp"
#include "hamsys/ground_state.hpp"
#include "hamsys/inequalities.hpp"
#include "hamsys/mesh.hpp"
#include "hamsys/params.hpp"
#include "hamsys/perturbed_power.hpp"
#include "hamsys/rayleigh.hpp"
#include "hamsys/serialize.hpp"
#include "hamsys/shooting.hpp"
#include "hamsys/sweep.hpp"

namespace hamsys {

struct RunOutput {
    nlohmann::json summary;
    std::map<std::string, std::string> files;  // summary.json added by execute()
};

namespace detail {

inline nlohmann::json summary_head(const RunConfig& cfg) {
    return {{"subcommand", cfg.subcommand}, {"params", params_of(cfg)}};
}

inline std::string rendered(void (*w)(std::ostream&, const RadialProfile&),
                            const RadialProfile& gs) {
    std::ostringstream os;
    w(os, gs);
    return os.str();
}

// ----------------------------------------------------------------------------
// Runners
// ----------------------------------------------------------------------------

inline RunOutput run_ground_state(const RunConfig& cfg) {
    GroundStateOptions opt;
    opt.rel_tol = cfg.tol;
    opt.abs_tol = cfg.tol * 1e-4;
    const RadialProfile gs = solve_ground_state(cfg.N, cfg.p, cfg.q, opt);
    const DecayReport decay = fit_decay(gs);
    const auto [res_phi, res_psi] = gs.integral_residuals();

    RunOutput out;
    out.summary = summary_head(cfg);
    out.summary["profile"] = gs;
    out.summary["decay"] = decay;
    out.summary["residual_phi"] = res_phi;
    out.summary["residual_psi"] = res_psi;
    out.files["profile.csv"] = rendered(&write_profile_csv, gs);
    return out;
}

inline RunOutput run_check_lemmas(const RunConfig& cfg) {
    const PerturbedPower F(cfg.lambda, cfg.r, cfg.p);
    SampleSpec spec;
    spec.n = cfg.samples;
    const auto reports = check_inequalities(F, cfg.s, spec);

    bool all_pass = true;
    for (const auto& rep : reports) all_pass = all_pass && rep.pass;

    RunOutput out;
    out.summary = summary_head(cfg);
    out.summary["n_samples"] = cfg.samples;
    out.summary["all_pass"] = all_pass;
    out.summary["reports"] = reports;
    return out;
}

inline RunOutput run_sobolev(const RunConfig& cfg) {
    GroundStateOptions opt;
    opt.rel_tol = cfg.tol;
    opt.abs_tol = cfg.tol * 1e-4;
    const RadialProfile gs = solve_ground_state(cfg.N, cfg.p, cfg.q, opt);
    const SobolevReport rep = sobolev_constant(gs);

    RunOutput out;
    out.summary = summary_head(cfg);
    out.summary["profile"] = gs;
    out.summary["sobolev"] = rep;
    out.files["profile.csv"] = rendered(&write_profile_csv, gs);
    return out;
}

inline RunOutput run_mp_level(const RunConfig& cfg) {
    const SystemParams P = params_of(cfg);
    validate_or_throw(P, true);
    if (!(cfg.rho > 0.0) || cfg.rho > cfg.R)
        throw ConfigError("mp-level: requires 0 < rho <= R");

    const RadialProfile gs = solve_ground_state(cfg.N, cfg.p, cfg.q);
    const double S_norm = sobolev_constant(gs).S;
    const RadialMesh mesh = make_mesh(cfg.N, cfg.R);

    std::vector<MPLevelReport> reports;
    std::vector<std::pair<double, double>> margins;
    for (double frac : parse_number_list(cfg.deltas, "deltas")) {
        const auto rep = mp_level(mesh, gs, P, S_norm, frac * cfg.rho, cfg.rho);
        margins.emplace_back(rep.delta, rep.margin);
        reports.push_back(rep);
    }

    bool all_below = true, increasing = true;
    for (std::size_t i = 0; i < reports.size(); ++i) {
        all_below = all_below && reports[i].below_threshold;
        if (i > 0 && reports[i].delta < reports[i - 1].delta)
            increasing = increasing && reports[i].margin > reports[i - 1].margin;
    }

    RunOutput out;
    out.summary = summary_head(cfg);
    out.summary["rho"] = cfg.rho;
    out.summary["S_norm"] = S_norm;
    out.summary["reports"] = reports;
    out.summary["all_below_threshold"] = all_below;
    out.summary["margins_increasing"] = increasing;
    std::ostringstream os;
    write_plot(os, margins);
    out.files["margin.dat"] = os.str();
    return out;
}

inline RunOutput run_rayleigh(const RunConfig& cfg) {
    const RadialMesh mesh = make_mesh(cfg.N, cfg.R);
    RayleighOptions opt;
    opt.seed = cfg.seed;
    const RayleighReport rep = rayleigh_constant_report(mesh, cfg.r, cfg.p, opt);

    RunOutput out;
    out.summary = summary_head(cfg);
    out.summary["R"] = cfg.R;
    out.summary["seed"] = cfg.seed;
    out.summary["rayleigh"] = rep;
    return out;
}

inline RunOutput run_solve_ball(const RunConfig& cfg) {
    const SolveResult res = solve_ball(params_of(cfg), cfg.R, SearchBox{}, cfg.tol);

    RunOutput out;
    out.summary = summary_head(cfg);
    out.summary["result"] = res;
    if (res.verdict == Verdict::Found) {
        std::ostringstream os;
        write_shoot_csv(os, res.prof);
        out.files["solution.csv"] = os.str();
    }
    return out;
}

inline RunOutput run_sweep(const RunConfig& cfg) {
    const SweepGrid grid = parse_grid_spec(cfg.grid);
    const SweepResult res = existence_sweep(params_of(cfg), grid, SearchBox{}, cfg.tol);

    RunOutput out;
    out.summary = summary_head(cfg);
    out.summary["result"] = res;
    std::ostringstream os;
    write_sweep_csv(os, res);
    out.files["sweep.csv"] = os.str();
    return out;
}

inline RunOutput run_classify(const RunConfig& cfg) {
    const RegionVerdict v = region_verdict(cfg.N, cfg.p, cfg.r, cfg.s);

    RunOutput out;
    out.summary = summary_head(cfg);
    out.summary["region"] = v;
    return out;
}

inline RunOutput run_subcommand(const RunConfig& cfg) {
    if (cfg.subcommand == "ground-state") return run_ground_state(cfg);
    if (cfg.subcommand == "check-lemmas") return run_check_lemmas(cfg);
    if (cfg.subcommand == "sobolev") return run_sobolev(cfg);
    if (cfg.subcommand == "mp-level") return run_mp_level(cfg);
    if (cfg.subcommand == "rayleigh") return run_rayleigh(cfg);
    if (cfg.subcommand == "solve-ball") return run_solve_ball(cfg);
    if (cfg.subcommand == "sweep") return run_sweep(cfg);
    if (cfg.subcommand == "classify") return run_classify(cfg);
    throw ConfigError("unknown subcommand '" + cfg.subcommand + "'");
}

} // namespace detail

// ============================================================================
// Orchestration
// ============================================================================

/// Run one subcommand end to end: resolve, consult the cache, compute on a
/// miss, write the artifacts, store the manifest.  Returns the exit code.
inline int execute(const RunConfig& raw) {
    namespace fs = std::filesystem;
    try {
        const RunConfig cfg = resolved(raw);
        const std::string canonical = canonical_text(cfg);
        const std::string key = sha256_hex(canonical);

        std::map<std::string, std::string> files;
        bool hit = false;
        if (!cfg.no_cache) {
            if (auto entry = cache_lookup(key, canonical)) {
                files = std::move(entry->files);
                hit = true;
            }
        }
        if (!hit) {
            RunOutput out = detail::run_subcommand(cfg);
            files = std::move(out.files);
            files["summary.json"] = json_text(out.summary);
            if (!cfg.no_cache) cache_store(key, CacheEntry{canonical, files});
        }

        const fs::path dir = cfg.out;
        for (const auto& [name, content] : files)
            write_text_atomic(dir / name, content);

        std::printf("%s%s: wrote %zu file(s) to %s\n", cfg.subcommand.c_str(),
                    hit ? " (cached)" : "", files.size(), dir.string().c_str());
        return 0;
    } catch (const ConfigError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    } catch (const ValidationError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    } catch (const DomainError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "numerical failure: %s\n", e.what());
        return 2;
    }
}

} // namespace hamsys

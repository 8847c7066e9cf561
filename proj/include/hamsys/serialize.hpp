#pragma once

// JSON / CSV / plot-data emission for the report types.
//
// JSON goes through nlohmann::json object values, whose keys are stored
// sorted; together with the library's shortest-round-trip double formatting
// the serialized bytes are a pure function of the value, so identical runs
// produce identical files (the determinism the cache relies on).  Enums are
// written as their to_string names.  Sample arrays never go into JSON: bulk
// data is CSV, scalar summaries are JSON.
//
// Non-finite doubles become JSON null (nlohmann's convention); CSV keeps
// them as inf/nan literals since the column format is for numeric tools.
//
// Writes are atomic: text lands in a sibling temp file which is renamed
// over the target, so readers never observe a half-written artifact.

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <ostream>
#include <sstream>
#include <string>
#include <unistd.h>
#include <utility>
#include <vector>

#include <json.hpp>

#include "hamsys/errors.hpp"
#include "hamsys/functional.hpp"
#include "hamsys/ground_state.hpp"
#include "hamsys/inequalities.hpp"
#include "hamsys/params.hpp"
#include "hamsys/radial_profile.hpp"
#include "hamsys/rayleigh.hpp"
#include "hamsys/shooting.hpp"
#include "hamsys/sweep.hpp"

namespace hamsys {

// ============================================================================
// JSON conversions (picked up by nlohmann via ADL)
// ============================================================================

namespace detail {

/// Sentinel infinities (unset residuals) become explicit JSON null instead of
/// relying on the dump-time coercion, so the in-memory value matches the text.
inline nlohmann::json num_or_null(double x) {
    if (std::isfinite(x)) return x;
    return nullptr;
}

} // namespace detail

inline void to_json(nlohmann::json& j, const SystemParams& P) {
    j = {{"N", P.N},      {"p", P.p},           {"q", P.q}, {"r", P.r},
         {"s", P.s},      {"lambda", P.lambda}, {"mu", P.mu}};
}

inline void to_json(nlohmann::json& j, const SmallnessReport& rep) {
    j = {{"constrained", rep.constrained},
         {"lhs_r", rep.lhs_r},
         {"bound_r", rep.bound_r},
         {"lhs_s", rep.lhs_s},
         {"bound_s", rep.bound_s},
         {"ok", rep.ok}};
}

inline void to_json(nlohmann::json& j, const RegionVerdict& v) {
    j = {{"kind", to_string(v.kind)}, {"witness", v.witness}, {"q", v.q}};
}

inline void to_json(nlohmann::json& j, const InequalityReport& rep) {
    j = {{"lemma", rep.lemma},
         {"n_samples", rep.n_samples},
         {"worst_slack", rep.worst_slack},
         {"worst_at", rep.worst_at},
         {"strict", rep.strict},
         {"skipped", rep.skipped},
         {"note", rep.note},
         {"pass", rep.pass}};
}

inline void to_json(nlohmann::json& j, const FittedRate& f) {
    j = {{"rate_theory", f.rate_theory},
         {"log_factor", f.log_factor},
         {"rate_fit", f.rate_fit},
         {"half_width", f.half_width},
         {"amplitude", f.amplitude},
         {"sub_corrected", f.sub_corrected},
         {"within", f.within()}};
}

inline void to_json(nlohmann::json& j, const DecayReport& rep) {
    j = {{"kind", to_string(rep.kind)},
         {"phi", rep.phi},
         {"psi", rep.psi},
         {"window_lo", rep.window_lo},
         {"window_hi", rep.window_hi}};
}

inline void to_json(nlohmann::json& j, const SobolevReport& rep) {
    j = {{"S", rep.S},
         {"psi_mass", rep.psi_mass},
         {"phi_mass", rep.phi_mass},
         {"psi_tail_frac", rep.psi_tail_frac},
         {"phi_tail_frac", rep.phi_tail_frac},
         {"decay", rep.decay}};
}

/// Scalar metadata of a profile; the samples themselves go to CSV.
inline void to_json(nlohmann::json& j, const RadialProfile& gs) {
    j = {{"N", gs.N},         {"p", gs.p},
         {"q", gs.q},         {"beta", gs.beta},
         {"R_max", gs.R_max}, {"n_samples", gs.r.size()}};
}

inline void to_json(nlohmann::json& j, const MPLevelReport& rep) {
    j = {{"delta", rep.delta},
         {"rho", rep.rho},
         {"t_star", rep.t_star},
         {"level", rep.level},
         {"level_identity", rep.level_identity},
         {"S_norm", rep.S_norm},
         {"S_integral", rep.S_integral},
         {"threshold", rep.threshold},
         {"margin", rep.margin},
         {"t_bound", rep.t_bound},
         {"Ms", rep.Ms},
         {"Kp", rep.Kp},
         {"Kp_principal", rep.Kp_principal},
         {"n_roots", rep.n_roots},
         {"below_threshold", rep.below_threshold},
         {"t_within_bound", rep.t_within_bound}};
}

inline void to_json(nlohmann::json& j, const RayleighReport& rep) {
    j = {{"value", rep.value},
         {"spread", rep.spread},
         {"best_start", rep.best_start},
         {"total_iters", rep.total_iters}};
}

inline void to_json(nlohmann::json& j, const SearchBox& box) {
    j = {{"alpha_lo", box.alpha_lo}, {"alpha_hi", box.alpha_hi},
         {"beta_lo", box.beta_lo},   {"beta_hi", box.beta_hi},
         {"n_alpha", box.n_alpha},   {"n_beta", box.n_beta}};
}

inline void to_json(nlohmann::json& j, const SolveTrace& t) {
    j = {{"n_scan", t.n_scan},
         {"n_scan_failed", t.n_scan_failed},
         {"n_candidates", t.n_candidates},
         {"n_polished", t.n_polished},
         {"n_newton_iters", t.n_newton_iters},
         {"n_refine_scans", t.n_refine_scans},
         {"n_nonpositive", t.n_nonpositive},
         {"n_aborted", t.n_aborted},
         {"n_curve_steps", t.n_curve_steps},
         {"n_curve_shots", t.n_curve_shots}};
}

inline void to_json(nlohmann::json& j, const SolveResult& res) {
    j = {{"verdict", to_string(res.verdict)},
         {"positive", res.positive},
         {"alpha", res.alpha},
         {"beta", res.beta},
         {"residual_u", detail::num_or_null(res.residual_u)},
         {"residual_v", detail::num_or_null(res.residual_v)},
         {"R", res.R},
         {"n_samples", res.prof.size()},
         {"trace", res.trace}};
}

inline void to_json(nlohmann::json& j, const SweepGrid& g) {
    j = {{"p", g.p}, {"r", g.r},          {"s", g.s},
         {"lambda", g.lambda},            {"mu", g.mu},
         {"R", g.R}, {"q_factor", g.q_factor}};
}

inline void to_json(nlohmann::json& j, const SweepPoint& pt) {
    j = {{"params", pt.params},
         {"R", pt.R},
         {"verdict", to_string(pt.verdict)},
         {"alpha", pt.alpha},
         {"beta", pt.beta},
         {"residual_u", pt.residual_u},
         {"residual_v", pt.residual_v},
         {"region", pt.region},
         {"note", pt.note},
         {"trace", pt.trace}};
}

inline void to_json(nlohmann::json& j, const SweepResult& res) {
    j = {{"grid", res.grid},
         {"box", res.box},
         {"tol", res.tol},
         {"points", res.points}};
}

// ============================================================================
// File helpers
// ============================================================================

/// Serialized form used for files and for cache hashing (two-space indent,
/// trailing newline).
inline std::string json_text(const nlohmann::json& j) { return j.dump(2) + "\n"; }

/// Write-then-rename so the target path flips from old to new content in one
/// step.  The temp file sits beside the target (rename must not cross
/// filesystems) and carries the pid to keep concurrent writers apart.
inline void write_text_atomic(const std::filesystem::path& path, const std::string& text) {
    namespace fs = std::filesystem;
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    fs::path tmp = path;
    tmp += ".tmp." + std::to_string(static_cast<long long>(::getpid()));
    {
        std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
        if (!os) throw ConfigError("cannot open for writing: " + tmp.string());
        os << text;
        os.flush();
        if (!os) throw ConfigError("short write: " + tmp.string());
    }
    std::error_code ec;
    fs::rename(tmp, path, ec);
    if (ec) {
        fs::remove(tmp);
        throw ConfigError("rename failed for " + path.string() + ": " + ec.message());
    }
}

inline void write_json(const std::filesystem::path& path, const nlohmann::json& j) {
    write_text_atomic(path, json_text(j));
}

// ============================================================================
// CSV / plot data
// ============================================================================

namespace detail {

/// %.17g: shortest fixed-precision form that still round-trips a double.
inline void put_g17(std::ostream& os, double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    os << buf;
}

inline void put_row(std::ostream& os, std::initializer_list<double> xs) {
    bool first = true;
    for (double x : xs) {
        if (!first) os << ',';
        first = false;
        put_g17(os, x);
    }
    os << '\n';
}

} // namespace detail

inline void write_profile_csv(std::ostream& os, const RadialProfile& gs) {
    os << "r,phi,dphi,psi,dpsi\n";
    for (std::size_t i = 0; i < gs.r.size(); ++i)
        detail::put_row(os, {gs.r[i], gs.phi[i], gs.dphi[i], gs.psi[i], gs.dpsi[i]});
}

inline void write_shoot_csv(std::ostream& os, const ShootProfiles& prof) {
    os << "r,u,du,v,dv\n";
    for (std::size_t i = 0; i < prof.r.size(); ++i)
        detail::put_row(os, {prof.r[i], prof.u[i], prof.du[i], prof.v[i], prof.dv[i]});
}

inline void write_sweep_csv(std::ostream& os, const SweepResult& res) {
    os << "p,q,r,s,lambda,mu,R,verdict,region,alpha,beta,residual_u,residual_v\n";
    for (const auto& pt : res.points) {
        const auto& P = pt.params;
        detail::put_g17(os, P.p); os << ',';
        detail::put_g17(os, P.q); os << ',';
        detail::put_g17(os, P.r); os << ',';
        detail::put_g17(os, P.s); os << ',';
        detail::put_g17(os, P.lambda); os << ',';
        detail::put_g17(os, P.mu); os << ',';
        detail::put_g17(os, pt.R); os << ',';
        os << to_string(pt.verdict) << ',' << to_string(pt.region.kind) << ',';
        detail::put_g17(os, pt.alpha); os << ',';
        detail::put_g17(os, pt.beta); os << ',';
        detail::put_g17(os, pt.residual_u); os << ',';
        detail::put_g17(os, pt.residual_v); os << '\n';
    }
}

/// Two columns, whitespace-delimited: `plot "file" with lines` works as-is.
inline void write_plot(std::ostream& os, const std::vector<std::pair<double, double>>& xy) {
    for (const auto& [x, y] : xy) {
        detail::put_g17(os, x);
        os << ' ';
        detail::put_g17(os, y);
        os << '\n';
    }
}

template <class Writer>
void write_file(const std::filesystem::path& path, Writer&& w) {
    std::ostringstream os;
    w(os);
    write_text_atomic(path, os.str());
}

} // namespace hamsys

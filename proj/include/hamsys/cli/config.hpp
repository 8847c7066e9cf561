#pragma once

// Run configuration for the command-line front end.
//
// Precedence: built-in defaults, overridden by a flat key=value config file,
// overridden by command-line flags.  The file format is one `key = value`
// per line, `#` comments, keys named exactly like the long flags.
//
// canonical_text() renders the semantic fields (everything that changes the
// computation) in a fixed order with full-precision numbers; its hash keys
// the result cache.  Derived fields are resolved first, so `--p 5` and an
// explicit `--q 5` at the critical partner hash identically.  Bookkeeping
// fields (output directory, cache toggle, config path) stay out: they do not
// affect the numbers.

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "hamsys/errors.hpp"
#include "hamsys/params.hpp"
#include "hamsys/rayleigh.hpp"
#include "hamsys/sweep.hpp"

namespace hamsys {

struct RunConfig {
    std::string subcommand;

    int N = 3;
    double p = 5.0;
    double q = 0.0;  // <= 0: derived as the critical partner of p
    double r = 1.0, s = 1.0;
    double lambda = 1.0, mu = 1.0;
    double R = 1.0;
    double rho = 0.0;  // <= 0: R/2
    std::string deltas = "0.1,0.05,0.02";  // concentration scales, as fractions of rho
    double tol = 1e-9;
    std::size_t samples = 10000;
    std::string grid;  // sweep axes: "p=3,3.5,4;lambda=0.5" (absent axes hold base values)
    std::uint64_t seed = RayleighOptions{}.seed;

    std::string out = "runs/latest";
    bool no_cache = false;
    std::string config_file;
};

// ============================================================================
// Value parsing
// ============================================================================

namespace detail {

inline double parse_double(const std::string& text, const std::string& what) {
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(text, &used);
    } catch (const std::exception&) {
        throw ConfigError("bad number for " + what + ": '" + text + "'");
    }
    if (used != text.size())
        throw ConfigError("bad number for " + what + ": '" + text + "'");
    return v;
}

inline std::string trim(const std::string& s) {
    std::size_t a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    std::size_t b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

inline std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::istringstream is(s);
    std::string item;
    while (std::getline(is, item, sep)) out.push_back(trim(item));
    if (!s.empty() && s.back() == sep) out.push_back("");
    return out;
}

inline std::string format_g17(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

} // namespace detail

inline std::vector<double> parse_number_list(const std::string& text, const std::string& what) {
    std::vector<double> out;
    for (const auto& tok : detail::split(text, ',')) {
        if (tok.empty()) throw ConfigError("empty entry in " + what + ": '" + text + "'");
        out.push_back(detail::parse_double(tok, what));
    }
    return out;
}

/// Sweep axes as "name=v1,v2,...;name=..."; recognized names are the grid
/// fields p, r, s, lambda, mu, R plus the scalar q_factor.
inline SweepGrid parse_grid_spec(const std::string& text) {
    SweepGrid g;
    if (detail::trim(text).empty()) return g;
    for (const auto& axis : detail::split(text, ';')) {
        if (axis.empty()) continue;
        const auto eq = axis.find('=');
        if (eq == std::string::npos)
            throw ConfigError("grid axis needs name=values: '" + axis + "'");
        const std::string name = detail::trim(axis.substr(0, eq));
        const std::string vals = detail::trim(axis.substr(eq + 1));
        if (name == "p") g.p = parse_number_list(vals, "grid.p");
        else if (name == "r") g.r = parse_number_list(vals, "grid.r");
        else if (name == "s") g.s = parse_number_list(vals, "grid.s");
        else if (name == "lambda") g.lambda = parse_number_list(vals, "grid.lambda");
        else if (name == "mu") g.mu = parse_number_list(vals, "grid.mu");
        else if (name == "R") g.R = parse_number_list(vals, "grid.R");
        else if (name == "q_factor") g.q_factor = detail::parse_double(vals, "grid.q_factor");
        else throw ConfigError("unknown grid axis '" + name + "'");
    }
    return g;
}

// ============================================================================
// Config file
// ============================================================================

/// Apply one key=value pair; throws on unknown keys or unparsable values.
inline void apply_kv(RunConfig& cfg, const std::string& key, const std::string& value) {
    const auto num = [&] { return detail::parse_double(value, key); };
    if (key == "N") {
        const double v = num();
        if (v != static_cast<int>(v)) throw ConfigError("N must be an integer");
        cfg.N = static_cast<int>(v);
    } else if (key == "p") cfg.p = num();
    else if (key == "q") cfg.q = num();
    else if (key == "r") cfg.r = num();
    else if (key == "s") cfg.s = num();
    else if (key == "lambda") cfg.lambda = num();
    else if (key == "mu") cfg.mu = num();
    else if (key == "R") cfg.R = num();
    else if (key == "rho") cfg.rho = num();
    else if (key == "deltas") cfg.deltas = value;
    else if (key == "tol") cfg.tol = num();
    else if (key == "samples") {
        const double v = num();
        if (v < 8 || v != static_cast<std::size_t>(v))
            throw ConfigError("samples must be an integer >= 8");
        cfg.samples = static_cast<std::size_t>(v);
    } else if (key == "grid") cfg.grid = value;
    else if (key == "seed") {
        try {
            cfg.seed = std::stoull(value);
        } catch (const std::exception&) {
            throw ConfigError("bad seed: '" + value + "'");
        }
    } else if (key == "out") cfg.out = value;
    else if (key == "no_cache") cfg.no_cache = value == "1" || value == "true";
    else if (key == "subcommand") cfg.subcommand = value;
    else throw ConfigError("unknown config key '" + key + "'");
}

inline void load_config_file(RunConfig& cfg, const std::string& path) {
    std::ifstream is(path);
    if (!is) throw ConfigError("cannot read config file: " + path);
    std::string line;
    int lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = detail::trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError(path + ":" + std::to_string(lineno) +
                              ": expected key=value, got '" + line + "'");
        apply_kv(cfg, detail::trim(line.substr(0, eq)), detail::trim(line.substr(eq + 1)));
    }
}

// ============================================================================
// Resolution & canonical form
// ============================================================================

/// Fill the derived fields: q from the critical hyperbola when not given,
/// rho from the ball radius.  Normalizes the list-valued strings so that
/// equivalent spellings canonicalize identically.
inline RunConfig resolved(RunConfig cfg) {
    if (cfg.q <= 0.0) cfg.q = q_from_p(cfg.N, cfg.p);
    if (cfg.rho <= 0.0) cfg.rho = 0.5 * cfg.R;
    {
        std::string norm;
        for (double d : parse_number_list(cfg.deltas, "deltas")) {
            if (!(d > 0.0)) throw ConfigError("deltas must be positive");
            if (!norm.empty()) norm += ',';
            norm += detail::format_g17(d);
        }
        cfg.deltas = norm;
    }
    {
        const SweepGrid g = parse_grid_spec(cfg.grid);
        std::string norm;
        const auto axis = [&](const char* name, const std::vector<double>& v) {
            if (v.empty()) return;
            if (!norm.empty()) norm += ';';
            norm += std::string(name) + "=";
            for (std::size_t i = 0; i < v.size(); ++i)
                norm += (i ? "," : "") + detail::format_g17(v[i]);
        };
        axis("p", g.p);
        axis("r", g.r);
        axis("s", g.s);
        axis("lambda", g.lambda);
        axis("mu", g.mu);
        axis("R", g.R);
        if (g.q_factor != 1.0) {
            if (!norm.empty()) norm += ';';
            norm += "q_factor=" + detail::format_g17(g.q_factor);
        }
        cfg.grid = norm;
    }
    return cfg;
}

inline SystemParams params_of(const RunConfig& cfg) {
    SystemParams P;
    P.N = cfg.N;
    P.p = cfg.p;
    P.q = cfg.q;
    P.r = cfg.r;
    P.s = cfg.s;
    P.lambda = cfg.lambda;
    P.mu = cfg.mu;
    return P;
}

/// Semantic fields in fixed order, one per line.  Input for the cache key;
/// also parseable as a config file (round-trips onto an equal config).
inline std::string canonical_text(const RunConfig& cfg) {
    const RunConfig c = resolved(cfg);
    std::ostringstream os;
    os << "subcommand=" << c.subcommand << '\n'
       << "N=" << c.N << '\n'
       << "p=" << detail::format_g17(c.p) << '\n'
       << "q=" << detail::format_g17(c.q) << '\n'
       << "r=" << detail::format_g17(c.r) << '\n'
       << "s=" << detail::format_g17(c.s) << '\n'
       << "lambda=" << detail::format_g17(c.lambda) << '\n'
       << "mu=" << detail::format_g17(c.mu) << '\n'
       << "R=" << detail::format_g17(c.R) << '\n'
       << "rho=" << detail::format_g17(c.rho) << '\n'
       << "deltas=" << c.deltas << '\n'
       << "tol=" << detail::format_g17(c.tol) << '\n'
       << "samples=" << c.samples << '\n'
       << "grid=" << c.grid << '\n'
       << "seed=" << c.seed << '\n';
    return os.str();
}

} // namespace hamsys

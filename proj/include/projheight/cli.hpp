#pragma once

// Command implementations behind the projheight executable. Each command
// returns an OutputRecord plus an exit code; run_command() maps library
// exceptions onto the exit-code contract.

#include <cstdint>
#include <cstdlib>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "projheight/cayley.hpp"
#include "projheight/heights.hpp"
#include "projheight/modular.hpp"
#include "projheight/report.hpp"

namespace projheight::cli {

enum ExitCode : int {
    kSuccess = 0,
    kInputError = 2,
    kBudgetExceeded = 3,
    kAssertionFailed = 4,
};

struct CommandResult {
    OutputRecord record;
    int exit_code = kSuccess;
};

/// Primes of the published height table.
inline const std::vector<std::int64_t>& paper_range_primes() {
    static const std::vector<std::int64_t> primes{11, 13, 17, 19, 23, 29};
    return primes;
}

inline std::string join(std::span<const std::int64_t> xs, char sep = ';') {
    std::string out;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        if (i) out += sep;
        out += std::to_string(xs[i]);
    }
    return out;
}

inline std::string join(const std::vector<std::string>& xs, char sep = ';') {
    std::string out;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        if (i) out += sep;
        out += xs[i];
    }
    return out;
}

inline std::string rational_text(const Rational& r) {
    if (r.denominator() == 1) return std::to_string(r.numerator());
    return std::to_string(r.numerator()) + "/" + std::to_string(r.denominator());
}

/// "3", "-2", "1/2"; rejects zero denominators and junk.
inline Rational parse_rational(const std::string& s) {
    const auto slash = s.find('/');
    auto parse_int = [&](const std::string& t) {
        std::size_t used = 0;
        std::int64_t v = 0;
        try {
            v = std::stoll(t, &used);
        } catch (const std::exception&) {
            throw InputError("not a rational number: '" + s + "'");
        }
        if (used != t.size()) throw InputError("not a rational number: '" + s + "'");
        return v;
    };
    if (slash == std::string::npos) return Rational(parse_int(s));
    const auto den = parse_int(s.substr(slash + 1));
    if (den == 0) throw InputError("zero denominator in '" + s + "'");
    return Rational(parse_int(s.substr(0, slash)), den);
}

/// PROJHEIGHT_EXACT_CAP if set to a positive integer, otherwise the default.
inline std::size_t exact_cap_from_env() {
    const char* raw = std::getenv("PROJHEIGHT_EXACT_CAP");
    if (raw == nullptr || *raw == '\0') return kDefaultExactCap;
    char* end = nullptr;
    const unsigned long long v = std::strtoull(raw, &end, 10);
    if (*end != '\0' || v == 0) throw InputError(std::string("PROJHEIGHT_EXACT_CAP is not a positive integer: ") + raw);
    return static_cast<std::size_t>(v);
}

// ---------------------------------------------------------------------------

inline CommandResult cmd_height(std::int64_t p_value, const std::vector<std::int64_t>& coords) {
    const PrimeModulus p(p_value);
    require_odd(p);
    const auto point = canonicalize(coords, p);
    CommandResult res;
    auto& rec = res.record;
    rec.command = "height";
    rec.parameters["p"] = p_value;
    rec.parameters["a"] = join(coords);

    const auto c = point.coords();
    const bool on_line = c.size() == 2 && c[0] == 1 && c[1] != 0;
    const HeightRecord h = on_line ? line_height_fast(point.coord(1), p) : height(point);

    Json row = Json::object();
    row["p"] = p_value;
    row["point"] = join(c);
    row["d"] = c.size();
    row["d_star"] = d_star(point);
    row["height"] = h.height;
    row["argmin_k"] = h.argmin_k;
    row["method"] = std::string(to_string(h.method));
    row["rule"] = std::string(to_string(h.rule));
    row["upper_bound"] = height_upper_bound(point);
    row["bound_i"] = "";
    row["bound_vi"] = "";
    if (on_line) {
        for (const auto& cert : line_bound_certificates(point.coord(1), p)) {
            if (cert.label == "(i)") row["bound_i"] = cert.bound;
            if (cert.label == "(vi)") row["bound_vi"] = cert.bound;
        }
    }
    rec.rows.push_back(std::move(row));
    rec.summary["height"] = h.height;
    return res;
}

inline CommandResult table_for(const std::vector<std::int64_t>& primes, Json parameters) {
    CommandResult res;
    auto& rec = res.record;
    rec.command = "table";
    rec.parameters = std::move(parameters);
    std::uint64_t formula = 0;
    for (auto prime : primes) {
        const PrimeModulus p(prime);
        if (!p.is_odd()) continue;
        for (std::int64_t a = 2; a <= prime - 2; ++a) {
            const auto h = line_height_fast(Residue(a, p), p);
            formula += h.method == Method::formula;
            Json row = Json::object();
            row["p"] = prime;
            row["a"] = a;
            row["height"] = h.height;
            row["argmin_k"] = h.argmin_k;
            row["method"] = std::string(to_string(h.method));
            rec.rows.push_back(std::move(row));
        }
    }
    rec.summary["primes"] = primes.size();
    rec.summary["rows"] = rec.rows.size();
    rec.summary["formula_rows"] = formula;
    return res;
}

/// One row per prime p in [p_min, p_max] and a in [2, p-2].
inline CommandResult cmd_table(std::int64_t p_min, std::int64_t p_max) {
    if (p_min > p_max) throw InputError("table: pmin must not exceed pmax");
    if (p_max > kMaxModulus) throw InputError("table: pmax too large");
    Json params = Json::object();
    params["pmin"] = p_min;
    params["pmax"] = p_max;
    return table_for(primes_between(p_min, p_max), std::move(params));
}

inline CommandResult cmd_table_paper_range() {
    Json params = Json::object();
    params["preset"] = "paper-range";
    return table_for(paper_range_primes(), std::move(params));
}

inline CommandResult cmd_spectrum(std::int64_t p_value, std::size_t d, bool check_bounds,
                                  std::uint64_t budget = kDefaultSpectrumBudget) {
    const PrimeModulus p(p_value);
    const auto s = spectrum(p, d, budget);
    CommandResult res;
    auto& rec = res.record;
    rec.command = "spectrum";
    rec.parameters["p"] = p_value;
    rec.parameters["d"] = d;
    rec.parameters["check_bounds"] = check_bounds;
    for (const auto& [h, n] : s.count_per_value) {
        Json row = Json::object();
        row["height"] = h;
        row["count"] = n;
        rec.rows.push_back(std::move(row));
    }
    std::vector<std::string> gaps;
    for (const auto& [lo, hi] : s.gaps) gaps.push_back("(" + std::to_string(lo) + "," + std::to_string(hi) + ")");
    rec.summary["points"] = s.point_count;
    rec.summary["values"] = join(s.values);
    rec.summary["max"] = s.max_height;
    rec.summary["gaps"] = join(gaps);
    if (check_bounds) {
        const auto b = spectrum_bounds_check(s);
        rec.summary["lower_bound"] = b.lower;
        rec.summary["upper_bound"] = b.upper;
        rec.summary["bounds_pass"] = b.pass;
        if (!b.pass) res.exit_code = kAssertionFailed;
    }
    return res;
}

/// gap_scan for every odd prime in [p_min, p_max].
inline CommandResult cmd_gaps(std::int64_t p_min, std::int64_t p_max, std::int64_t r, const Rational& c,
                              std::uint64_t budget = kDefaultSpectrumBudget) {
    if (p_max > kMaxModulus) throw InputError("gaps: pmax too large");
    if (r < 1) throw InputError("gaps: r must be >= 1");
    if (c < 0) throw InputError("gaps: c must be nonnegative");
    CommandResult res;
    auto& rec = res.record;
    rec.command = "gaps";
    rec.parameters["pmin"] = p_min;
    rec.parameters["pmax"] = p_max;
    rec.parameters["r"] = r;
    rec.parameters["c"] = rational_text(c);
    std::uint64_t primes = 0, nonempty = 0;
    for (auto prime : primes_between(std::max<std::int64_t>(p_min, 3), p_max)) {
        const auto g = gap_scan(PrimeModulus(prime), r, c, budget);
        ++primes;
        nonempty += !g.empty();
        Json row = Json::object();
        row["p"] = prime;
        row["window_lo"] = rational_text(g.window_lo);
        row["window_hi"] = rational_text(g.window_hi);
        row["empty"] = g.empty();
        row["hits"] = join(g.hits);
        rec.rows.push_back(std::move(row));
    }
    rec.summary["primes"] = primes;
    rec.summary["empty_windows"] = primes - nonempty;
    rec.summary["nonempty_windows"] = nonempty;
    rec.summary["all_empty"] = nonempty == 0;
    return res;
}

inline Json beta_row(const BetaReport& r) {
    Json row = Json::object();
    row["p"] = r.graph.p();
    row["A"] = join(r.graph.connection_set());
    row["d"] = r.graph.degree();
    row["gamma"] = r.gamma;
    row["height"] = r.height;
    row["beta_upper"] = r.beta_upper;
    row["witness_k"] = r.witness_k;
    row["beta_exact"] = r.beta_exact ? Json(*r.beta_exact) : Json("");
    row["triangle_free"] = r.triangle_free;
    row["triangle_witness"] = r.triangle_witness ? join(r.triangle_witness->terms) : std::string{};
    row["girth"] = r.girth ? Json(*r.girth) : Json("");
    row["css_margin"] = rational_text(r.css_margin);
    row["final_chain_checked"] = r.final_chain_checked;
    row["violations"] = join(r.violations);
    return row;
}

struct CayleyFlags {
    bool exact = false;
    bool css = false;
    bool girth = false;
    std::size_t exact_cap = kDefaultExactCap;
};

inline CommandResult cmd_cayley(std::int64_t p_value, const std::vector<std::int64_t>& a, const CayleyFlags& flags) {
    const PrimeModulus p(p_value);
    const CayleyGraph g(p, a);
    const auto r = css_check(g, CssOptions{flags.exact, flags.exact_cap, flags.girth || flags.css});
    CommandResult res;
    auto& rec = res.record;
    rec.command = "cayley";
    rec.parameters["p"] = p_value;
    rec.parameters["A"] = join(a);
    rec.parameters["exact"] = flags.exact;
    rec.parameters["css"] = flags.css;
    rec.parameters["girth"] = flags.girth;
    rec.rows.push_back(beta_row(r));
    rec.summary["triangle_free"] = r.triangle_free;
    rec.summary["violations"] = r.violations.size();
    rec.summary["status"] = !flags.css ? "informational" : (r.ok() ? "pass" : "fail");
    if (flags.css && !r.ok()) res.exit_code = kAssertionFailed;
    return res;
}

struct ScanFlags {
    bool exact = false;
    std::size_t exact_cap = kDefaultExactCap;
    std::uint64_t budget = kDefaultSpectrumBudget;
};

inline CommandResult cmd_scan(std::int64_t p_max, std::size_t d, const ScanFlags& flags) {
    const auto scan = scan_css(p_max, d, ScanOptions{flags.exact, flags.exact_cap, flags.budget});
    CommandResult res;
    auto& rec = res.record;
    rec.command = "scan";
    rec.parameters["pmax"] = p_max;
    rec.parameters["d"] = d;
    rec.parameters["exact"] = flags.exact;
    for (const auto& item : scan.records) {
        Json row = beta_row(item.report);
        row["orbit_size"] = item.orbit_size;
        const auto prime = item.report.graph.p();
        const auto dd = static_cast<std::int64_t>(d);
        row["css_window"] = 4 * dd > prime && 3 * dd < prime;
        rec.rows.push_back(std::move(row));
    }
    const auto& s = scan.summary;
    rec.summary["primes"] = s.primes;
    rec.summary["instances"] = s.instances;
    rec.summary["triangle_free"] = s.triangle_free;
    rec.summary["tournaments"] = s.tournaments;
    rec.summary["triangle_free_tournaments"] = s.triangle_free_tournaments;
    rec.summary["in_css_window"] = s.in_css_window;
    rec.summary["triangle_free_in_css_window"] = s.triangle_free_in_css_window;
    rec.summary["d_at_least_p_over_3"] = s.d_at_least_p_over_3;
    rec.summary["triangle_free_d_at_least_p_over_3"] = s.triangle_free_d_at_least_p_over_3;
    rec.summary["final_chain_checked"] = s.final_chain_checked;
    rec.summary["exact_computed"] = s.exact_computed;
    rec.summary["exact_equals_upper"] = s.exact_equals_upper;
    rec.summary["violations"] = s.violations;
    rec.summary["empty"] = s.instances == 0;
    if (s.violations != 0) res.exit_code = kAssertionFailed;
    return res;
}

inline CommandResult cmd_kfree(std::int64_t p_value, std::size_t d, std::size_t k,
                               std::uint64_t budget = kDefaultSpectrumBudget) {
    const PrimeModulus p(p_value);
    const auto r = max_height_k_free(p, d, k, budget);
    CommandResult res;
    auto& rec = res.record;
    rec.command = "kfree";
    rec.parameters["p"] = p_value;
    rec.parameters["d"] = d;
    rec.parameters["k"] = k;
    rec.summary["classes"] = r.classes_examined;
    rec.summary["qualifying"] = r.qualifying;
    rec.summary["max_height"] = r.max_height ? Json(*r.max_height) : Json("none");
    rec.summary["witness"] = join(r.witness_set);
    return res;
}

/// Runs a command, mapping InputError to 2 and BudgetExceeded to 3. The
/// error message is returned in `error`.
inline int run_command(const std::function<CommandResult()>& fn, CommandResult& out, std::string& error) {
    try {
        out = fn();
        return out.exit_code;
    } catch (const BudgetExceeded& e) {
        error = e.what();
        return kBudgetExceeded;
    } catch (const InputError& e) {
        error = e.what();
        return kInputError;
    }
}

} // namespace projheight::cli

#pragma once

/**
 * @file heights.hpp
 * @brief The height function on P^(d-1)(F_p) and its closed-form values.
 *
 * h_p(<a_1..a_d>) = min over k = 1..p-1 of sum_i (k a_i mod p).
 *
 * The brute-force kernel is the reference; every fast path and bound in
 * this header is checked against it by the test suites.
 */

#include <algorithm>
#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <boost/rational.hpp>

#include "projheight/errors.hpp"
#include "projheight/modular.hpp"

namespace projheight {

using Rational = boost::rational<std::int64_t>;

enum class Method { brute, formula };

/// Which closed form produced a projective-line height.
enum class LineRule {
    none,         // brute force
    unit,         // a = 1               -> 2
    two_or_half,  // a = 2 or (p+1)/2    -> 3
    small,        // a^2 < p             -> 1 + a
    minus_one,    // a = p - 1           -> p
    near_half,    // a = (p-1)/2 or p-2  -> (p+1)/2
};

inline std::string_view to_string(Method m) { return m == Method::brute ? "brute" : "formula"; }

inline std::string_view to_string(LineRule r) {
    switch (r) {
    case LineRule::none: return "none";
    case LineRule::unit: return "unit";
    case LineRule::two_or_half: return "two-or-half";
    case LineRule::small: return "small";
    case LineRule::minus_one: return "minus-one";
    case LineRule::near_half: return "near-half";
    }
    return "?";
}

struct HeightRecord {
    ProjectivePoint point;
    std::int64_t height;
    std::int64_t argmin_k;  // smallest minimizing multiplier
    Method method = Method::brute;
    LineRule rule = LineRule::none;
};

namespace detail {

struct MinSum {
    std::int64_t value;
    std::int64_t argmin;
};

// Walks k = 1..p-1 keeping k*a_i mod p incrementally; strict '<' keeps the
// smallest minimizer.
inline MinSum min_weighted_sum(std::span<const std::int64_t> coords, std::int64_t p,
                               std::vector<std::int64_t>& scratch) {
    scratch.assign(coords.size(), 0);
    MinSum best{std::numeric_limits<std::int64_t>::max(), 0};
    for (std::int64_t k = 1; k < p; ++k) {
        std::int64_t sum = 0;
        for (std::size_t i = 0; i < coords.size(); ++i) {
            std::int64_t r = scratch[i] + coords[i];
            if (r >= p) r -= p;
            scratch[i] = r;
            sum += r;
        }
        if (sum < best.value) best = {sum, k};
    }
    return best;
}

inline MinSum min_weighted_sum(std::span<const std::int64_t> coords, std::int64_t p) {
    std::vector<std::int64_t> scratch;
    return min_weighted_sum(coords, p, scratch);
}

} // namespace detail

/// Brute-force height: scans every multiplier.
inline HeightRecord height(const ProjectivePoint& a) {
    require_odd(a.modulus());
    const auto best = detail::min_weighted_sum(a.coords(), a.modulus().value());
    return HeightRecord{a, best.value, best.argmin, Method::brute, LineRule::none};
}

/// floor(d*(a) p / 2): the minimum never exceeds the average over k.
inline std::int64_t height_upper_bound(const ProjectivePoint& a) {
    return static_cast<std::int64_t>(d_star(a)) * a.modulus().value() / 2;
}

/// Exact height of <1, a>, using a closed form when one applies.
inline HeightRecord line_height_fast(const Residue& a, const PrimeModulus& p) {
    require_odd(p);
    if (a.modulus() != p.value()) throw InputError("line_height_fast: residue belongs to another modulus");
    if (a.is_zero()) throw InputError("line_height_fast: a must be nonzero");
    const std::int64_t m = p.value();
    const std::int64_t x = a.value();
    auto point = canonicalize({1, x}, p);
    auto formula = [&](std::int64_t h, std::int64_t k, LineRule rule) {
        return HeightRecord{std::move(point), h, k, Method::formula, rule};
    };
    if (x == 1) return formula(2, 1, LineRule::unit);
    if (x == 2) return formula(3, 1, LineRule::two_or_half);
    if (x == (m + 1) / 2) return formula(3, 2, LineRule::two_or_half);
    if (x * x < m) return formula(1 + x, 1, LineRule::small);
    if (x == m - 1) return formula(m, 1, LineRule::minus_one);
    if (x == (m - 1) / 2) return formula((m + 1) / 2, 1, LineRule::near_half);
    // k + (k(p-2) mod p) = p - k for k <= (p-1)/2, so the first minimizer is (p-1)/2.
    if (x == m - 2) return formula((m + 1) / 2, (m - 1) / 2, LineRule::near_half);
    return height(point);
}

struct BoundCertificate {
    std::string label;
    std::int64_t bound;
};

/// Upper bounds on h(<1, a>): "(i)" = 1 + a, and "(vi)" = floor((p + (b-1)^2) / b)
/// with b = p - a.
inline std::vector<BoundCertificate> line_bound_certificates(const Residue& a, const PrimeModulus& p) {
    if (a.modulus() != p.value()) throw InputError("line_bound_certificates: residue belongs to another modulus");
    if (a.is_zero()) throw InputError("line_bound_certificates: a must be nonzero");
    const std::int64_t m = p.value();
    const std::int64_t b = m - a.value();
    std::vector<BoundCertificate> out;
    out.push_back({"(i)", 1 + a.value()});
    if (b >= 1 && b <= m - 1) out.push_back({"(vi)", (m + (b - 1) * (b - 1)) / b});
    return out;
}

// ---------------------------------------------------------------------------
// Spectra

inline constexpr std::uint64_t kDefaultSpectrumBudget = 5'000'000;

/// (p^d - 1) / (p - 1), saturating at uint64 max.
inline std::uint64_t projective_point_count(std::int64_t p, std::size_t d) {
    constexpr auto cap = std::numeric_limits<std::uint64_t>::max();
    std::uint64_t total = 0, power = 1;
    const auto up = static_cast<std::uint64_t>(p);
    for (std::size_t i = 0; i < d; ++i) {
        if (total > cap - power) return cap;
        total += power;
        if (i + 1 < d && power > cap / up) return cap;
        power *= up;
    }
    return total;
}

/// Calls fn(coords) for every canonical point of P^(d-1)(F_p) in
/// lexicographic order of (position of leading 1, tail).
template <class Fn>
void for_each_point(std::int64_t p, std::size_t d, Fn&& fn) {
    std::vector<std::int64_t> coords(d, 0);
    for (std::size_t lead = 0; lead < d; ++lead) {
        std::fill(coords.begin(), coords.end(), 0);
        coords[lead] = 1;
        bool more = true;
        while (more) {
            fn(std::span<const std::int64_t>(coords));
            more = false;
            for (std::size_t i = d; i > lead + 1; --i) {
                if (++coords[i - 1] < p) {
                    more = true;
                    break;
                }
                coords[i - 1] = 0;
            }
        }
    }
}

struct HeightSpectrum {
    std::int64_t p = 0;
    std::size_t d = 0;
    std::uint64_t point_count = 0;
    std::vector<std::int64_t> values;                     // ascending
    std::int64_t max_height = 0;
    std::map<std::int64_t, std::uint64_t> count_per_value;
    std::vector<std::pair<std::int64_t, std::int64_t>> gaps;  // open intervals (lo, hi)
};

inline HeightSpectrum spectrum(const PrimeModulus& p, std::size_t d,
                               std::uint64_t budget = kDefaultSpectrumBudget) {
    require_odd(p);
    if (d < 2) throw InputError("spectrum: dimension d must be >= 2");
    const std::uint64_t count = projective_point_count(p.value(), d);
    if (count > budget) throw BudgetExceeded("spectrum: too many projective points", count, budget);

    HeightSpectrum s;
    s.p = p.value();
    s.d = d;
    s.point_count = count;
    std::vector<std::int64_t> scratch;
    for_each_point(p.value(), d, [&](std::span<const std::int64_t> c) {
        ++s.count_per_value[detail::min_weighted_sum(c, p.value(), scratch).value];
    });
    for (const auto& [h, n] : s.count_per_value) s.values.push_back(h);
    s.max_height = s.values.back();
    for (std::size_t i = 1; i < s.values.size(); ++i)
        if (s.values[i] - s.values[i - 1] >= 2) s.gaps.emplace_back(s.values[i - 1], s.values[i]);
    if (s.values.front() > 1) s.gaps.insert(s.gaps.begin(), {0, s.values.front()});
    return s;
}

struct SpectrumBoundsReport {
    std::int64_t p = 0;
    std::size_t d = 0;
    std::int64_t max_height = 0;
    std::int64_t lower = 0;
    std::int64_t upper = 0;
    bool pass = false;
};

/// Even d: max = dp/2. Odd d: (d-1)p/2 + 1 <= max <= (dp-1)/2.
inline SpectrumBoundsReport spectrum_bounds_check(const HeightSpectrum& s) {
    const auto d = static_cast<std::int64_t>(s.d);
    SpectrumBoundsReport r{s.p, s.d, s.max_height, 0, 0, false};
    if (d % 2 == 0) {
        r.lower = r.upper = d * s.p / 2;
    } else {
        r.lower = (d - 1) * s.p / 2 + 1;
        r.upper = (d * s.p - 1) / 2;
    }
    r.pass = r.lower <= s.max_height && s.max_height <= r.upper;
    return r;
}

inline SpectrumBoundsReport spectrum_bounds_check(const PrimeModulus& p, std::size_t d,
                                                  std::uint64_t budget = kDefaultSpectrumBudget) {
    return spectrum_bounds_check(spectrum(p, d, budget));
}

struct GapScanReport {
    std::int64_t p = 0;
    std::int64_t r = 0;
    Rational c;
    Rational window_lo;  // p/(r+1) + c
    Rational window_hi;  // p/r - c
    std::vector<std::int64_t> hits;  // achieved line heights strictly inside the window

    bool empty() const noexcept { return hits.empty(); }
};

/// Reports the achieved heights on P^1(F_p) lying in (p/(r+1) + c, p/r - c).
inline GapScanReport gap_scan(const PrimeModulus& p, std::int64_t r, Rational c,
                              std::uint64_t budget = kDefaultSpectrumBudget) {
    if (r < 1) throw InputError("gap_scan: r must be >= 1");
    if (c < 0) throw InputError("gap_scan: c must be nonnegative");
    const auto s = spectrum(p, 2, budget);
    GapScanReport rep;
    rep.p = p.value();
    rep.r = r;
    rep.c = c;
    rep.window_lo = Rational(p.value(), r + 1) + c;
    rep.window_hi = Rational(p.value(), r) - c;
    for (auto h : s.values)
        if (rep.window_lo < h && h < rep.window_hi) rep.hits.push_back(h);
    return rep;
}

// ---------------------------------------------------------------------------
// Sum-free conditions

struct SumFreeWitness {
    std::size_t length;
    std::vector<std::int64_t> terms;  // nondecreasing positions in the input set
};

struct SumFreeCertificate {
    std::vector<Residue> set;
    std::size_t k = 0;
    bool ok = true;
    std::optional<SumFreeWitness> witness;
};

namespace detail {

// Depth-first over nondecreasing index sequences of the given length.
inline bool find_zero_multiset(std::span<const std::int64_t> a, std::int64_t p, std::size_t length,
                               std::size_t start, std::int64_t partial, std::vector<std::size_t>& picks) {
    if (picks.size() == length) return partial == 0;
    for (std::size_t i = start; i < a.size(); ++i) {
        picks.push_back(i);
        if (find_zero_multiset(a, p, length, i, (partial + a[i]) % p, picks)) return true;
        picks.pop_back();
    }
    return false;
}

} // namespace detail

/// Checks that no multiset of 1..k elements of A (repetition allowed) sums
/// to 0. The witness is the first hit in order of length, then index order.
inline SumFreeCertificate is_k_sum_free(std::span<const Residue> set, std::size_t k) {
    if (set.empty()) throw InputError("is_k_sum_free: set must be nonempty");
    if (k < 1) throw InputError("is_k_sum_free: k must be >= 1");
    const std::int64_t p = set.front().modulus();
    std::vector<std::int64_t> values;
    for (const auto& r : set) {
        if (r.modulus() != p) throw InputError("is_k_sum_free: mixed moduli");
        if (r.is_zero()) throw InputError("is_k_sum_free: elements must be nonzero");
        values.push_back(r.value());
    }
    auto sorted = values;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
        throw InputError("is_k_sum_free: elements must be distinct");

    SumFreeCertificate cert{std::vector<Residue>(set.begin(), set.end()), k, true, std::nullopt};
    std::vector<std::size_t> picks;
    for (std::size_t len = 1; len <= k; ++len) {
        picks.clear();
        if (detail::find_zero_multiset(values, p, len, 0, 0, picks)) {
            SumFreeWitness w{len, {}};
            for (auto i : picks) w.terms.push_back(values[i]);
            cert.ok = false;
            cert.witness = std::move(w);
            break;
        }
    }
    return cert;
}

// ---------------------------------------------------------------------------
// Connection sets up to scalar multiplication

struct ScalarClass {
    std::vector<std::int64_t> elements;  // lexicographically least member of {cA}, ascending
    std::int64_t orbit_size = 0;         // number of distinct sets cA
};

inline std::uint64_t binomial_saturating(std::uint64_t n, std::uint64_t k) {
    if (k > n) return 0;
    k = std::min(k, n - k);
    unsigned __int128 r = 1;
    for (std::uint64_t i = 1; i <= k; ++i) {
        r = r * (n - k + i) / i;
        if (r > std::numeric_limits<std::uint64_t>::max()) return std::numeric_limits<std::uint64_t>::max();
    }
    return static_cast<std::uint64_t>(r);
}

/// Every d-subset of F_p* up to A ~ cA, one representative per class, in
/// ascending lexicographic order. Each class has a member containing 1, so
/// only those subsets are enumerated; the budget bounds their count.
inline std::vector<ScalarClass> scalar_classes(const PrimeModulus& p, std::size_t d,
                                               std::uint64_t budget = kDefaultSpectrumBudget) {
    const std::int64_t m = p.value();
    std::vector<ScalarClass> out;
    if (d == 0 || static_cast<std::int64_t>(d) > m - 1) return out;
    const std::uint64_t count = binomial_saturating(static_cast<std::uint64_t>(m - 2), d - 1);
    if (count > budget) throw BudgetExceeded("scalar_classes: too many connection sets", count, budget);

    std::vector<std::int64_t> tail(d - 1);
    for (std::size_t i = 0; i + 1 < d; ++i) tail[i] = 2 + static_cast<std::int64_t>(i);
    std::vector<std::int64_t> set(d), scaled(d);
    while (true) {
        set[0] = 1;
        std::copy(tail.begin(), tail.end(), set.begin() + 1);
        bool is_least = true;
        std::vector<std::vector<std::int64_t>> orbit;
        for (std::int64_t c = 1; c < m && is_least; ++c) {
            for (std::size_t i = 0; i < d; ++i) scaled[i] = set[i] * c % m;
            std::sort(scaled.begin(), scaled.end());
            if (scaled < set) is_least = false;
            else orbit.push_back(scaled);
        }
        if (is_least) {
            std::sort(orbit.begin(), orbit.end());
            orbit.erase(std::unique(orbit.begin(), orbit.end()), orbit.end());
            out.push_back({set, static_cast<std::int64_t>(orbit.size())});
        }
        // next (d-1)-combination of {2..m-1}
        std::size_t i = tail.size();
        while (i > 0 && tail[i - 1] == m - 1 - static_cast<std::int64_t>(tail.size() - i)) --i;
        if (i == 0) break;
        ++tail[i - 1];
        for (std::size_t j = i; j < tail.size(); ++j) tail[j] = tail[j - 1] + 1;
    }
    return out;
}

struct KFreeReport {
    std::int64_t p = 0;
    std::size_t d = 0;
    std::size_t k = 0;
    std::uint64_t classes_examined = 0;
    std::uint64_t qualifying = 0;
    std::optional<std::int64_t> max_height;  // empty: no qualifying set
    std::vector<std::int64_t> witness_set;   // first class attaining the max
};

/// Largest height of <a_1..a_d> over d-sets of distinct nonzero residues
/// that are k-sum-free, scanning one representative per scalar class.
inline KFreeReport max_height_k_free(const PrimeModulus& p, std::size_t d, std::size_t k,
                                     std::uint64_t budget = kDefaultSpectrumBudget) {
    require_odd(p);
    KFreeReport rep;
    rep.p = p.value();
    rep.d = d;
    rep.k = k;
    for (const auto& cls : scalar_classes(p, d, budget)) {
        ++rep.classes_examined;
        std::vector<Residue> rs;
        for (auto x : cls.elements) rs.emplace_back(x, p);
        if (!is_k_sum_free(rs, k).ok) continue;
        ++rep.qualifying;
        const auto h = detail::min_weighted_sum(cls.elements, p.value()).value;
        if (!rep.max_height || h > *rep.max_height) {
            rep.max_height = h;
            rep.witness_set = cls.elements;
        }
    }
    return rep;
}

} // namespace projheight

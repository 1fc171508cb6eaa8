#pragma once

/**
 * @file cayley.hpp
 * @brief Cayley digraphs on F_p, feedback arc sets and the CSS audit.
 *
 * G = (F_p, E_A) with E_A = {(x, x + a) : x in F_p, a in A}.
 *
 * For each multiplier k the vertex order sigma_k(i) = k i mod p gives a
 * deletion set B_k of backward edges whose size is sum_j (k^-1 a_j mod p);
 * minimizing over k gives beta(G) <= h_p(<A>). beta_exact() computes the
 * true minimum feedback arc set for small vertex counts.
 */

#include <algorithm>
#include <bit>
#include <compare>
#include <cstdint>
#include <limits>
#include <optional>
#include <queue>
#include <span>
#include <string>
#include <vector>

#include "projheight/errors.hpp"
#include "projheight/heights.hpp"
#include "projheight/modular.hpp"

namespace projheight {

struct Edge {
    std::int64_t source;
    std::int64_t target;

    friend bool operator==(const Edge&, const Edge&) = default;
    friend auto operator<=>(const Edge&, const Edge&) = default;
};

class CayleyGraph {
public:
    /// Elements of A are reduced mod p and sorted; A must be a nonempty set
    /// of distinct nonzero residues.
    CayleyGraph(const PrimeModulus& p, std::span<const std::int64_t> connection_set) : p_(p) {
        if (connection_set.empty()) throw InputError("connection set must be nonempty");
        for (auto a : connection_set) set_.push_back(reduce(a, p.value()));
        std::sort(set_.begin(), set_.end());
        if (set_.front() == 0) throw InputError("connection set must not contain 0");
        if (std::adjacent_find(set_.begin(), set_.end()) != set_.end())
            throw InputError("connection set elements must be distinct mod p");
    }

    CayleyGraph(const PrimeModulus& p, std::initializer_list<std::int64_t> connection_set)
        : CayleyGraph(p, std::span<const std::int64_t>(connection_set.begin(), connection_set.size())) {}

    const PrimeModulus& modulus() const noexcept { return p_; }
    std::int64_t p() const noexcept { return p_.value(); }
    std::span<const std::int64_t> connection_set() const noexcept { return set_; }
    std::size_t degree() const noexcept { return set_.size(); }

    bool contains(std::int64_t residue) const {
        return std::binary_search(set_.begin(), set_.end(), reduce(residue, p_.value()));
    }

    /// Some a in A with -a in A as well.
    bool has_digon() const {
        return std::any_of(set_.begin(), set_.end(), [&](std::int64_t a) { return contains(-a); });
    }

    bool is_tournament() const { return 2 * static_cast<std::int64_t>(degree()) == p() - 1 && !has_digon(); }

    friend bool operator==(const CayleyGraph&, const CayleyGraph&) = default;

private:
    PrimeModulus p_;
    std::vector<std::int64_t> set_;
};

/// All d*p edges, ordered by source then by connection element.
inline std::vector<Edge> edges(const CayleyGraph& g) {
    std::vector<Edge> out;
    out.reserve(g.degree() * static_cast<std::size_t>(g.p()));
    for (std::int64_t x = 0; x < g.p(); ++x)
        for (auto a : g.connection_set()) out.push_back({x, (x + a) % g.p()});
    return out;
}

/// Edges of `all` not present in `removed`.
inline std::vector<Edge> without_edges(std::span<const Edge> all, std::span<const Edge> removed) {
    std::vector<Edge> gone(removed.begin(), removed.end());
    std::sort(gone.begin(), gone.end());
    std::vector<Edge> out;
    for (const auto& e : all)
        if (!std::binary_search(gone.begin(), gone.end(), e)) out.push_back(e);
    return out;
}

namespace detail {

inline void check_vertices(std::size_t vertex_count, std::span<const Edge> edge_list) {
    for (const auto& e : edge_list) {
        if (e.source < 0 || e.target < 0 || e.source >= static_cast<std::int64_t>(vertex_count) ||
            e.target >= static_cast<std::int64_t>(vertex_count))
            throw InputError("edge endpoint outside [0, vertex_count)");
    }
}

} // namespace detail

/// Peels vertices of outdegree 0 until none remain; the digraph is acyclic
/// iff every vertex gets peeled.
inline bool is_acyclic(std::size_t vertex_count, std::span<const Edge> edge_list) {
    detail::check_vertices(vertex_count, edge_list);
    std::vector<std::size_t> out_degree(vertex_count, 0);
    std::vector<std::vector<std::size_t>> predecessors(vertex_count);
    for (const auto& e : edge_list) {
        ++out_degree[static_cast<std::size_t>(e.source)];
        predecessors[static_cast<std::size_t>(e.target)].push_back(static_cast<std::size_t>(e.source));
    }
    std::vector<std::size_t> sinks;
    for (std::size_t v = 0; v < vertex_count; ++v)
        if (out_degree[v] == 0) sinks.push_back(v);
    std::size_t peeled = 0;
    while (!sinks.empty()) {
        const auto v = sinks.back();
        sinks.pop_back();
        ++peeled;
        for (auto u : predecessors[v])
            if (--out_degree[u] == 0) sinks.push_back(u);
    }
    return peeled == vertex_count;
}

struct TriangleReport {
    bool triangle_free = true;
    std::optional<SumFreeWitness> witness;  // a multiset of A summing to 0
};

/// No loop, digon or triangle: equivalent to A being 3-sum-free.
inline TriangleReport is_triangle_free(const CayleyGraph& g) {
    std::vector<Residue> rs;
    for (auto a : g.connection_set()) rs.emplace_back(a, g.modulus());
    auto cert = is_k_sum_free(rs, 3);
    return {cert.ok, std::move(cert.witness)};
}

/// Unordered pairs {u, v} with neither (u, v) nor (v, u) an edge.
inline std::int64_t gamma_by_pair_count(const CayleyGraph& g) {
    const std::int64_t p = g.p();
    std::vector<bool> adjacent_difference(static_cast<std::size_t>(p), false);
    for (auto a : g.connection_set()) {
        adjacent_difference[static_cast<std::size_t>(a)] = true;
        adjacent_difference[static_cast<std::size_t>(p - a)] = true;
    }
    std::int64_t count = 0;
    for (std::int64_t u = 0; u < p; ++u)
        for (std::int64_t v = u + 1; v < p; ++v)
            if (!adjacent_difference[static_cast<std::size_t>(v - u)]) ++count;
    return count;
}

/// p(p - 1 - 2d)/2 when G has no digon, otherwise a direct pair count.
inline std::int64_t gamma(const CayleyGraph& g) {
    if (g.has_digon()) return gamma_by_pair_count(g);
    const std::int64_t p = g.p(), d = static_cast<std::int64_t>(g.degree());
    return p * (p - 1 - 2 * d) / 2;
}

struct DeletionSet {
    std::int64_t k = 0;
    std::int64_t k_inverse = 0;
    std::vector<std::int64_t> offsets;  // r_j = k^-1 a_j mod p
    std::vector<Edge> edges;

    std::size_t size() const noexcept { return edges.size(); }
};

/// Backward edges of the vertex order sigma_k(0), ..., sigma_k(p-1) with
/// sigma_k(i) = k i mod p: edge (sigma_k(i), sigma_k(i) + a_j) is backward
/// exactly when i >= p - r_j.
inline DeletionSet deletion_set(const CayleyGraph& g, std::int64_t k) {
    const std::int64_t p = g.p();
    if (k < 1 || k > p - 1) throw InputError("deletion_set: k must lie in [1, p-1]");
    DeletionSet ds;
    ds.k = k;
    ds.k_inverse = mod_inverse(Residue(k, g.modulus()), g.modulus()).value();
    for (auto a : g.connection_set()) {
        const std::int64_t r = ds.k_inverse * a % p;
        ds.offsets.push_back(r);
        for (std::int64_t i = p - r; i <= p - 1; ++i) {
            const std::int64_t from = k * i % p;
            ds.edges.push_back({from, (from + a) % p});
        }
    }
    std::sort(ds.edges.begin(), ds.edges.end());
    return ds;
}

struct BetaUpper {
    std::int64_t value = 0;
    std::int64_t witness_k = 0;  // smallest k attaining the minimum
};

/// min over k of |B_k|, built edge by edge.
inline BetaUpper beta_upper(const CayleyGraph& g) {
    BetaUpper best{std::numeric_limits<std::int64_t>::max(), 0};
    for (std::int64_t k = 1; k < g.p(); ++k) {
        const auto size = static_cast<std::int64_t>(deletion_set(g, k).size());
        if (size < best.value) best = {size, k};
    }
    return best;
}

inline constexpr std::size_t kDefaultExactCap = 24;
inline constexpr std::size_t kMaxExactVertices = 28;

/// Minimum feedback arc set size by subset DP over linear orders:
/// fwd(S) = max over v in S of fwd(S - v) + |edges from S - v into v|,
/// beta = |E| - fwd(V). Self-loops are never forward and always count.
/// Parallel edges are rejected.
inline std::int64_t beta_exact(std::size_t vertex_count, std::span<const Edge> edge_list,
                               std::size_t cap = kDefaultExactCap) {
    if (vertex_count > cap || vertex_count > kMaxExactVertices)
        throw BudgetExceeded("beta_exact: vertex count above cap", vertex_count,
                             std::min(cap, kMaxExactVertices));
    detail::check_vertices(vertex_count, edge_list);
    std::vector<Edge> sorted(edge_list.begin(), edge_list.end());
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
        throw InputError("beta_exact: parallel edges are not supported");
    if (vertex_count == 0) return 0;

    std::vector<std::uint32_t> in_mask(vertex_count, 0);
    for (const auto& e : sorted)
        if (e.source != e.target)
            in_mask[static_cast<std::size_t>(e.target)] |= std::uint32_t{1} << e.source;

    const std::uint32_t full = (std::uint32_t{1} << vertex_count) - 1;
    std::vector<std::uint16_t> forward(static_cast<std::size_t>(full) + 1, 0);
    for (std::uint32_t s = 1; s <= full; ++s) {
        std::uint16_t best = 0;
        for (std::uint32_t rest = s; rest != 0; rest &= rest - 1) {
            const int v = std::countr_zero(rest);
            const std::uint32_t without = s & ~(std::uint32_t{1} << v);
            const auto candidate =
                static_cast<std::uint16_t>(forward[without] + std::popcount(in_mask[static_cast<std::size_t>(v)] & without));
            if (candidate > best) best = candidate;
        }
        forward[s] = best;
    }
    return static_cast<std::int64_t>(sorted.size()) - forward[full];
}

inline std::int64_t beta_exact(const CayleyGraph& g, std::size_t cap = kDefaultExactCap) {
    const auto e = edges(g);
    return beta_exact(static_cast<std::size_t>(g.p()), e, cap);
}

/// Girth of the digraph: fewest elements of A (with repetition, ordered)
/// summing to 0. BFS from vertex 0 suffices by vertex-transitivity.
inline std::int64_t shortest_cycle(const CayleyGraph& g) {
    const std::int64_t p = g.p();
    std::vector<std::int64_t> dist(static_cast<std::size_t>(p), -1);
    std::queue<std::int64_t> frontier;
    for (auto a : g.connection_set()) {
        if (dist[static_cast<std::size_t>(a)] < 0) {
            dist[static_cast<std::size_t>(a)] = 1;
            frontier.push(a);
        }
    }
    while (!frontier.empty()) {
        const auto x = frontier.front();
        frontier.pop();
        for (auto a : g.connection_set()) {
            const std::int64_t y = (x + a) % p;
            if (y == 0) return dist[static_cast<std::size_t>(x)] + 1;
            if (dist[static_cast<std::size_t>(y)] < 0) {
                dist[static_cast<std::size_t>(y)] = dist[static_cast<std::size_t>(x)] + 1;
                frontier.push(y);
            }
        }
    }
    return p;  // unreachable: p * a = 0
}

// ---------------------------------------------------------------------------
// CSS audit

struct CssOptions {
    bool exact = false;
    std::size_t exact_cap = kDefaultExactCap;
    bool girth = true;
};

struct BetaReport {
    CayleyGraph graph;
    std::int64_t gamma = 0;
    std::int64_t height = 0;  // h_p(<A>)
    std::int64_t beta_upper = 0;
    std::int64_t witness_k = 0;
    std::optional<std::int64_t> beta_exact;
    bool triangle_free = false;
    std::optional<SumFreeWitness> triangle_witness;
    std::optional<std::int64_t> girth;
    Rational css_margin;              // gamma/2 - best known bound on beta
    bool final_chain_checked = false; // d = 2, triangle-free, p >= 7
    std::vector<std::string> violations;

    bool ok() const noexcept { return violations.empty(); }
};

/// Populates a BetaReport and records every violated assertion:
/// beta_upper = h_p(<A>); beta_exact <= beta_upper; for triangle-free G,
/// beta_exact <= gamma/2 and, when d = 2 and p >= 7,
/// beta_upper <= (p-1)/2 <= gamma/2; girth <= r whenever r d >= p.
inline BetaReport css_check(const CayleyGraph& g, const CssOptions& options = {}) {
    const std::int64_t p = g.p();
    const auto d = static_cast<std::int64_t>(g.degree());
    BetaReport rep{g};
    rep.gamma = gamma(g);
    auto tri = is_triangle_free(g);
    rep.triangle_free = tri.triangle_free;
    rep.triangle_witness = std::move(tri.witness);

    if (p == 2) {
        // F_2* = {1}: a single digon, h_2 is not defined.
        rep.height = 1;
    } else {
        rep.height = height(canonicalize(g.connection_set(), g.modulus())).height;
    }
    const auto upper = beta_upper(g);
    rep.beta_upper = upper.value;
    rep.witness_k = upper.witness_k;
    if (p != 2 && rep.beta_upper != rep.height)
        rep.violations.push_back("beta_upper != height");

    if (options.exact) {
        rep.beta_exact = beta_exact(g, options.exact_cap);
        if (*rep.beta_exact > rep.beta_upper) rep.violations.push_back("beta_exact > beta_upper");
    }

    const Rational half_gamma(rep.gamma, 2);
    std::int64_t best = rep.beta_upper;
    if (rep.beta_exact) best = std::min(best, *rep.beta_exact);
    rep.css_margin = half_gamma - best;

    if (rep.triangle_free) {
        if (rep.beta_exact && Rational(*rep.beta_exact) > half_gamma)
            rep.violations.push_back("beta_exact > gamma/2");
        if (d == 2 && p >= 7) {
            rep.final_chain_checked = true;
            if (2 * rep.beta_upper > p - 1) rep.violations.push_back("beta_upper > (p-1)/2");
            if (Rational(p - 1, 2) > half_gamma) rep.violations.push_back("(p-1)/2 > gamma/2");
        }
        if (rep.gamma == 0 && rep.beta_exact && *rep.beta_exact != 0)
            rep.violations.push_back("triangle-free tournament with beta_exact != 0");
    }

    if (options.girth) {
        rep.girth = shortest_cycle(g);
        for (std::int64_t r = 2; r <= 4; ++r)
            if (r * d >= p && *rep.girth > r)
                rep.violations.push_back("girth > " + std::to_string(r) + " although d >= p/" + std::to_string(r));
    }
    return rep;
}

struct ScanOptions {
    bool exact = false;
    std::size_t exact_cap = kDefaultExactCap;
    std::uint64_t budget = kDefaultSpectrumBudget;  // connection sets enumerated per prime
};

struct ScanRecord {
    BetaReport report;
    std::int64_t orbit_size = 0;
};

struct ScanSummary {
    std::uint64_t primes = 0;
    std::uint64_t instances = 0;
    std::uint64_t triangle_free = 0;
    std::uint64_t tournaments = 0;
    std::uint64_t triangle_free_tournaments = 0;
    std::uint64_t in_css_window = 0;                // p/4 < d < p/3
    std::uint64_t triangle_free_in_css_window = 0;
    std::uint64_t d_at_least_p_over_3 = 0;
    std::uint64_t triangle_free_d_at_least_p_over_3 = 0;  // zero whenever girth <= 3 holds
    std::uint64_t final_chain_checked = 0;
    std::uint64_t exact_computed = 0;
    std::uint64_t exact_equals_upper = 0;
    std::uint64_t violations = 0;
};

struct ScanReport {
    std::int64_t p_max = 0;
    std::size_t d = 0;
    ScanOptions options;
    std::vector<ScanRecord> records;  // ascending by (p, A)
    ScanSummary summary;
};

/// Runs css_check on one connection set per scalar class for every odd
/// prime p <= p_max with p - 1 >= d. cA gives a digraph isomorphic to A
/// via x -> c x, so the classes cover every instance.
inline ScanReport scan_css(std::int64_t p_max, std::size_t d, const ScanOptions& options = {}) {
    if (d < 1) throw InputError("scan_css: d must be >= 1");
    if (p_max > kMaxModulus) throw InputError("scan_css: p_max too large");
    ScanReport rep;
    rep.p_max = p_max;
    rep.d = d;
    rep.options = options;
    auto primes = primes_between(3, p_max);
    if (options.exact && !primes.empty() && static_cast<std::uint64_t>(primes.back()) > options.exact_cap)
        throw BudgetExceeded("scan_css: exact beta requested above the vertex cap",
                             static_cast<std::uint64_t>(primes.back()), options.exact_cap);
    auto& s = rep.summary;
    for (auto prime : primes) {
        if (prime - 1 < static_cast<std::int64_t>(d)) continue;
        const PrimeModulus p(prime);
        ++s.primes;
        for (const auto& cls : scalar_classes(p, d, options.budget)) {
            const CayleyGraph g(p, cls.elements);
            auto r = css_check(g, CssOptions{options.exact, options.exact_cap, true});
            const auto dd = static_cast<std::int64_t>(d);
            ++s.instances;
            const bool window = 4 * dd > prime && 3 * dd < prime;
            const bool dense = 3 * dd >= prime;
            s.in_css_window += window;
            s.d_at_least_p_over_3 += dense;
            s.tournaments += r.gamma == 0;
            if (r.triangle_free) {
                ++s.triangle_free;
                s.triangle_free_in_css_window += window;
                s.triangle_free_d_at_least_p_over_3 += dense;
                s.triangle_free_tournaments += r.gamma == 0;
            }
            s.final_chain_checked += r.final_chain_checked;
            if (r.beta_exact) {
                ++s.exact_computed;
                s.exact_equals_upper += *r.beta_exact == r.beta_upper;
            }
            s.violations += r.violations.size();
            rep.records.push_back({std::move(r), cls.orbit_size});
        }
    }
    return rep;
}

} // namespace projheight

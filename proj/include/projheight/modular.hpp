#pragma once

/**
 * @file modular.hpp
 * @brief Exact arithmetic in F_p and canonical points of projective space.
 *
 * Residues are stored as int64 values in [0, p). The modulus is capped at
 * 2^31 - 1 so that any product of two residues, and any sum of up to 2^31
 * such residues, fits in a signed 64-bit integer.
 */

#include <algorithm>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

#include "projheight/errors.hpp"

namespace projheight {

inline constexpr std::int64_t kMaxModulus = (std::int64_t{1} << 31) - 1;

namespace detail {

inline std::uint64_t mul_mod_u64(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
    return static_cast<std::uint64_t>((static_cast<unsigned __int128>(a) * b) % m);
}

inline std::uint64_t pow_mod_u64(std::uint64_t base, std::uint64_t exp, std::uint64_t m) {
    std::uint64_t result = 1 % m;
    base %= m;
    while (exp > 0) {
        if (exp & 1) result = mul_mod_u64(result, base, m);
        base = mul_mod_u64(base, base, m);
        exp >>= 1;
    }
    return result;
}

} // namespace detail

/// Deterministic primality test (Miller-Rabin with the first twelve prime
/// bases, which is exact for every 64-bit input). Rejects n < 2.
inline bool is_prime(std::int64_t n) {
    if (n < 2) throw InputError("is_prime: argument must be >= 2, got " + std::to_string(n));
    constexpr std::uint64_t bases[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37};
    const auto un = static_cast<std::uint64_t>(n);
    for (auto b : bases) {
        if (un == b) return true;
        if (un % b == 0) return false;
    }
    std::uint64_t d = un - 1;
    int s = 0;
    while ((d & 1) == 0) {
        d >>= 1;
        ++s;
    }
    for (auto b : bases) {
        std::uint64_t x = detail::pow_mod_u64(b, d, un);
        if (x == 1 || x == un - 1) continue;
        bool composite = true;
        for (int r = 1; r < s; ++r) {
            x = detail::mul_mod_u64(x, x, un);
            if (x == un - 1) {
                composite = false;
                break;
            }
        }
        if (composite) return false;
    }
    return true;
}

/// All primes in [lo, hi], ascending.
inline std::vector<std::int64_t> primes_between(std::int64_t lo, std::int64_t hi) {
    std::vector<std::int64_t> out;
    if (hi < 2 || hi < lo) return out;
    lo = std::max<std::int64_t>(lo, 2);
    std::vector<bool> composite(static_cast<std::size_t>(hi + 1), false);
    for (std::int64_t i = 2; i * i <= hi; ++i) {
        if (composite[static_cast<std::size_t>(i)]) continue;
        for (std::int64_t j = i * i; j <= hi; j += i) composite[static_cast<std::size_t>(j)] = true;
    }
    for (std::int64_t i = lo; i <= hi; ++i)
        if (!composite[static_cast<std::size_t>(i)]) out.push_back(i);
    return out;
}

class PrimeModulus {
public:
    explicit PrimeModulus(std::int64_t p) : p_(p) {
        if (p < 2 || p > kMaxModulus)
            throw InputError("modulus " + std::to_string(p) + " outside [2, 2^31 - 1]");
        if (!is_prime(p)) throw InputError("p is not prime: " + std::to_string(p));
    }

    std::int64_t value() const noexcept { return p_; }
    bool is_odd() const noexcept { return p_ != 2; }

    friend bool operator==(const PrimeModulus&, const PrimeModulus&) = default;

private:
    std::int64_t p_;
};

/// Height contexts need an odd prime; p = 2 is rejected here.
inline void require_odd(const PrimeModulus& p) {
    if (!p.is_odd()) throw InputError("heights require an odd prime, got p = 2");
}

/// Least nonnegative representative of x modulo p.
inline std::int64_t reduce(std::int64_t x, std::int64_t p) noexcept {
    const std::int64_t r = x % p;
    return r < 0 ? r + p : r;
}

class Residue {
public:
    Residue(std::int64_t x, const PrimeModulus& p) : value_(reduce(x, p.value())), p_(p.value()) {}

    std::int64_t value() const noexcept { return value_; }
    std::int64_t modulus() const noexcept { return p_; }
    bool is_zero() const noexcept { return value_ == 0; }

    friend bool operator==(const Residue&, const Residue&) = default;

    friend Residue operator+(Residue a, Residue b) { return a.with(a.value_ + b.checked(a).value_); }
    friend Residue operator-(Residue a, Residue b) { return a.with(a.value_ - b.checked(a).value_); }
    friend Residue operator*(Residue a, Residue b) { return a.with(a.value_ * b.checked(a).value_); }
    Residue operator-() const { return with(-value_); }

private:
    Residue(std::int64_t reduced, std::int64_t p, int) : value_(reduced), p_(p) {}

    Residue with(std::int64_t x) const { return Residue(reduce(x, p_), p_, 0); }
    const Residue& checked(const Residue& other) const {
        if (p_ != other.p_) throw InputError("residues from different moduli");
        return *this;
    }

    std::int64_t value_;
    std::int64_t p_;
};

inline Residue mod_reduce(std::int64_t x, const PrimeModulus& p) { return Residue(x, p); }

/// Multiplicative inverse via the extended Euclidean algorithm.
inline Residue mod_inverse(const Residue& a, const PrimeModulus& p) {
    if (a.modulus() != p.value()) throw InputError("mod_inverse: residue belongs to another modulus");
    if (a.is_zero()) throw InputError("mod_inverse: 0 has no inverse");
    std::int64_t r0 = p.value(), r1 = a.value();
    std::int64_t s0 = 0, s1 = 1;
    while (r1 != 0) {
        const std::int64_t q = r0 / r1;
        std::int64_t t = r0 - q * r1;
        r0 = r1;
        r1 = t;
        t = s0 - q * s1;
        s0 = s1;
        s1 = t;
    }
    return Residue(s0, p);
}

/// A class <a_1, ..., a_d> of P^(d-1)(F_p), stored with its first nonzero
/// coordinate equal to 1. Only canonicalize() creates these.
class ProjectivePoint {
public:
    const PrimeModulus& modulus() const noexcept { return p_; }
    std::size_t dimension() const noexcept { return coords_.size(); }
    std::span<const std::int64_t> coords() const noexcept { return coords_; }
    Residue coord(std::size_t i) const { return Residue(coords_.at(i), p_); }

    friend bool operator==(const ProjectivePoint&, const ProjectivePoint&) = default;

private:
    ProjectivePoint(std::vector<std::int64_t> coords, PrimeModulus p)
        : coords_(std::move(coords)), p_(p) {}

    friend ProjectivePoint canonicalize(std::span<const std::int64_t>, const PrimeModulus&);

    std::vector<std::int64_t> coords_;
    PrimeModulus p_;
};

/// Reduces every coordinate mod p and scales by the inverse of the first
/// nonzero one. Throws InputError on the empty or all-zero tuple.
inline ProjectivePoint canonicalize(std::span<const std::int64_t> raw, const PrimeModulus& p) {
    if (raw.empty()) throw InputError("canonicalize: empty coordinate list");
    std::vector<std::int64_t> coords(raw.size());
    std::transform(raw.begin(), raw.end(), coords.begin(),
                   [&](std::int64_t x) { return reduce(x, p.value()); });
    const auto lead = std::find_if(coords.begin(), coords.end(), [](std::int64_t x) { return x != 0; });
    if (lead == coords.end()) throw InputError("canonicalize: the zero vector is not a projective point");
    const std::int64_t scale = mod_inverse(Residue(*lead, p), p).value();
    for (auto& x : coords) x = x * scale % p.value();
    return ProjectivePoint(std::move(coords), p);
}

inline ProjectivePoint canonicalize(std::initializer_list<std::int64_t> raw, const PrimeModulus& p) {
    return canonicalize(std::span<const std::int64_t>(raw.begin(), raw.size()), p);
}

/// Number of nonzero coordinates.
inline std::size_t d_star(const ProjectivePoint& a) {
    const auto c = a.coords();
    return static_cast<std::size_t>(std::count_if(c.begin(), c.end(), [](std::int64_t x) { return x != 0; }));
}

} // namespace projheight

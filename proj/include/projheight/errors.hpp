#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace projheight {

// Malformed input: non-prime modulus, zero vector, bad connection set.
class InputError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// An enumeration or exact solver would exceed its configured size limit.
class BudgetExceeded : public std::runtime_error {
public:
    BudgetExceeded(const std::string& what, std::uint64_t requested, std::uint64_t limit)
        : std::runtime_error(what + " (requested " + std::to_string(requested) + ", limit " +
                             std::to_string(limit) + ")"),
          requested_(requested),
          limit_(limit) {}

    std::uint64_t requested() const noexcept { return requested_; }
    std::uint64_t limit() const noexcept { return limit_; }

private:
    std::uint64_t requested_;
    std::uint64_t limit_;
};

} // namespace projheight

#pragma once

#include <bit>
#include <cstddef>
#include <span>

#include "beliefaudit/errors.hpp"

// In-place transforms over the subset lattice of an n-element set. A table of
// length 2^n is indexed by subset bitmask. Both transforms run in O(n 2^n).

namespace beliefaudit::lattice {

inline std::size_t dimension_of(std::span<const double> table) {
    const std::size_t len = table.size();
    if (len == 0 || !std::has_single_bit(len)) {
        throw InvalidArgument("subset table length must be a power of two");
    }
    return static_cast<std::size_t>(std::countr_zero(len));
}

/// table[A] <- sum over B subset of A of table[B].
inline void zeta(std::span<double> table) {
    const std::size_t n = dimension_of(table);
    const std::size_t len = table.size();
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t bit = std::size_t{1} << i;
        for (std::size_t a = 0; a < len; ++a) {
            if (a & bit) table[a] += table[a ^ bit];
        }
    }
}

/// Inverse of zeta: table[A] <- sum over B subset of A of (-1)^{|A \ B|} table[B].
inline void mobius(std::span<double> table) {
    const std::size_t n = dimension_of(table);
    const std::size_t len = table.size();
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t bit = std::size_t{1} << i;
        for (std::size_t a = 0; a < len; ++a) {
            if (a & bit) table[a] -= table[a ^ bit];
        }
    }
}

} // namespace beliefaudit::lattice

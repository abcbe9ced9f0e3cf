#pragma once

namespace beliefaudit {

/// Numeric tolerances used by validation and audit routines.
///
/// `noise` separates floating point residue from structural failure (a
/// Moebius value in [-noise, 0) is treated as zero). `exact` is used where
/// the arithmetic is expected to cancel exactly.
struct Tolerances {
    double noise = 1e-9;
    double exact = 1e-12;
};

inline constexpr Tolerances default_tolerances{};

} // namespace beliefaudit

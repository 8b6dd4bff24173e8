#pragma once

#include "jlt/errors.hpp"

namespace jlt {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitNumeric = 3;
inline constexpr int kExitContour = 4;

/// Process exit status for a library error: usage 2, contour 4, everything numeric 3.
inline int exit_code(const Error& e) {
    if (dynamic_cast<const UsageError*>(&e)) return kExitUsage;
    if (dynamic_cast<const ContourError*>(&e)) return kExitContour;
    return kExitNumeric;
}

}  // namespace jlt

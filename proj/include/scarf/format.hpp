#pragma once

#include <cmath>
#include <cstdio>
#include <string>

namespace scarf {

/// Locale-independent rendering with 9 significant digits; every number
/// written to a report goes through here so outputs are byte-stable.
[[nodiscard]] inline std::string format_number(double v) {
    if (std::isinf(v)) {
        return v > 0 ? "inf" : "-inf";
    }
    if (v == 0.0) {
        return "0"; // folds -0
    }
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.9g", v);
    return buf;
}

} // namespace scarf

#include "dppost/format.hpp"

#include <cmath>
#include <cstdio>

namespace dppost {

std::string format_number(double v) {
    if (!std::isfinite(v)) {
        return "NA";
    }
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.10g", v);
    return buf;
}

std::string format_number(const std::optional<double>& v) { return v ? format_number(*v) : "NA"; }

std::string format_exact(double v) {
    if (!std::isfinite(v)) {
        return "NA";
    }
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

}  // namespace dppost

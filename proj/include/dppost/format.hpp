#pragma once

#include <optional>
#include <string>

namespace dppost {

// Fixed "%.10g" rendering for reports; non-finite values become "NA".
std::string format_number(double v);
std::string format_number(const std::optional<double>& v);

// "%.17g": round-trips every finite double; used for data files.
std::string format_exact(double v);

}  // namespace dppost

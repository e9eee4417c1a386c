#pragma once

#include <string>

namespace qkd::csv {

/// Fixed 9-significant-digit scientific formatting, locale independent.
std::string num(double v);

inline std::string flag(bool b) { return b ? "1" : "0"; }

}  // namespace qkd::csv

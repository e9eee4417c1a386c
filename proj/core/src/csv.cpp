#include "qkdrates/csv.hpp"

#include <charconv>

namespace qkd::csv {

std::string num(double v) {
  char buf[40];
  const auto res =
      std::to_chars(buf, buf + sizeof buf, v, std::chars_format::scientific, 8);
  return std::string(buf, res.ptr);
}

}  // namespace qkd::csv

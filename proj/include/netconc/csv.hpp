#pragma once

#include <charconv>
#include <string>

namespace netconc {

/// Shortest round-trip decimal representation; locale-independent and
/// byte-stable, so CSV outputs compare equal across reruns.
inline std::string format_double(double value) {
  char buf[32];
  auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  (void)ec;
  return std::string(buf, end);
}

}  // namespace netconc

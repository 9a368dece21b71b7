#pragma once

#include <set>
#include <string>

namespace softpi {

// Channel names are opaque tokens with a total order.
using Name = std::string;
using NameSet = std::set<Name>;

// Smallest name of the form base, base', base'', ... absent from avoid.
inline Name fresh_name(const Name& base, const NameSet& avoid) {
  Name candidate = base;
  while (avoid.count(candidate) != 0) candidate += '\'';
  return candidate;
}

}  // namespace softpi

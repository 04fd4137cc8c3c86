#pragma once

#include <stdexcept>
#include <string>

#include "fsi/geometry.hpp"

namespace fsi {

// Malformed or inconsistent configuration input.
struct ConfigError : std::runtime_error {
  explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

// A structure point left the fluid domain; the coupling terms are undefined there.
struct StructureEscapeError : std::runtime_error {
  StructureEscapeError(const Vec2& p, int node)
      : std::runtime_error("structure node " + std::to_string(node) +
                           " escaped the fluid domain at (" + std::to_string(p.x) +
                           ", " + std::to_string(p.y) + ")"),
        point(p),
        node_index(node) {}
  Vec2 point;
  int node_index = -1;
};

// The linear solver failed to reach its residual tolerance.
struct SolverError : std::runtime_error {
  explicit SolverError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace fsi

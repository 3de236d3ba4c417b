#pragma once

#include <stdexcept>
#include <string>

namespace certlab {

// Malformed textual input (graph/model/formula/certificate files).
// Messages carry a line or column position where one is known.
struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Structurally invalid data passed across a module boundary
// (disconnected graph where a connected one is required, malformed
// model maps, out-of-range identifiers, infeasible generator request).
struct ValidationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// The prover gave up: the property is false on the instance, no model
// of the requested height is available, or the sentence is outside the
// fragment the scheme handles.
struct CannotCertifyError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A search exceeded its configured budget. The result is unknown, never
// silently wrong.
struct BudgetExceededError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace certlab

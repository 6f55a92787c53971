#ifndef PATMINE_ERRORS_HH
#define PATMINE_ERRORS_HH

#include <stdexcept>
#include <string>

namespace patmine
{
  // Pattern edits that would violate structural invariants (duplicate edge,
  // true edge over an anti-edge, self loop, ...).
  struct ConstraintConflictError : std::invalid_argument
  {
    using std::invalid_argument::invalid_argument;
  };

  // Pattern rejected at plan time (disconnected regular subgraph, isolated
  // vertices, unmatchable anti-vertex arrangements).
  struct ValidationError : std::invalid_argument
  {
    using std::invalid_argument::invalid_argument;
  };

  // Generator size outside the supported caps.
  struct UnsupportedSizeError : std::invalid_argument
  {
    using std::invalid_argument::invalid_argument;
  };

  // Bad input data (unreadable file, malformed line, unknown vertex).
  struct IngestionError : std::runtime_error
  {
    IngestionError(const std::string &what, size_t line = 0)
      : std::runtime_error(line > 0 ? what + " (line " + std::to_string(line) + ")" : what),
        line_number(line)
    {
    }

    size_t line_number;
  };

  // Application invoked with an incompatible input (e.g. FSM on an
  // unlabelled graph).
  struct ConfigError : std::invalid_argument
  {
    using std::invalid_argument::invalid_argument;
  };
} // namespace patmine

#endif

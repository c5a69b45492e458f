#pragma once

#include <stdexcept>
#include <string>

namespace gridmaze {

// Base for every error raised by the library. Callers that only care about
// "something in gridmaze failed" can catch this one type.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

#define GRIDMAZE_DECLARE_ERROR(Name)      \
  class Name : public Error {              \
   public:                                 \
    using Error::Error;                    \
  }

// grid
GRIDMAZE_DECLARE_ERROR(OutOfBounds);
GRIDMAZE_DECLARE_ERROR(MalformedGrid);
GRIDMAZE_DECLARE_ERROR(InvalidGrid);

// pathfinder
GRIDMAZE_DECLARE_ERROR(TooLarge);

// generator
GRIDMAZE_DECLARE_ERROR(InvalidSpec);
GRIDMAZE_DECLARE_ERROR(PlacementImpossible);
GRIDMAZE_DECLARE_ERROR(GenerationFailed);
GRIDMAZE_DECLARE_ERROR(CannotSeal);

// renderer
GRIDMAZE_DECLARE_ERROR(ImageError);

// dataset
GRIDMAZE_DECLARE_ERROR(AssemblyFailed);
GRIDMAZE_DECLARE_ERROR(ManifestCorrupt);

// grader
GRIDMAZE_DECLARE_ERROR(ParseFailure);

// harness
GRIDMAZE_DECLARE_ERROR(ConfigError);
GRIDMAZE_DECLARE_ERROR(UnsupportedCombination);
GRIDMAZE_DECLARE_ERROR(TransportError);
GRIDMAZE_DECLARE_ERROR(AuthError);

// reporter
GRIDMAZE_DECLARE_ERROR(InconsistentReport);

#undef GRIDMAZE_DECLARE_ERROR

}  // namespace gridmaze

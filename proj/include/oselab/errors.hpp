#pragma once

#include <stdexcept>
#include <string>

namespace oselab {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct NotMarkov : Error {
  using Error::Error;
};
struct NotExpanding : Error {
  using Error::Error;
};
struct IndexOutOfRange : Error {
  using Error::Error;
};
struct AnchorMismatch : Error {
  using Error::Error;
};
struct NondeterministicLift : Error {
  using Error::Error;
};
struct ConstantSlopeRequired : Error {
  using Error::Error;
};
struct NotSymmetric : Error {
  using Error::Error;
};
struct RankCollapse : Error {
  using Error::Error;
};
struct DimensionMismatch : Error {
  using Error::Error;
};
struct GroupMismatch : Error {
  using Error::Error;
};
struct NotInF : Error {
  using Error::Error;
};
struct RefinementTooCoarse : Error {
  using Error::Error;
};
struct NotRefinement : Error {
  using Error::Error;
};
struct NoPositivePart : Error {
  using Error::Error;
};
struct ConfigError : Error {
  using Error::Error;
};

}  // namespace oselab

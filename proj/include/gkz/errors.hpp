#pragma once

#include <stdexcept>
#include <string>

namespace gkz {

// Every error carries a stable kind name; the CLI reports it verbatim.
class Error : public std::runtime_error {
 public:
  Error(std::string kind, const std::string& what)
      : std::runtime_error(what), kind_(std::move(kind)) {}
  const std::string& kind() const noexcept { return kind_; }

 private:
  std::string kind_;
};

#define GKZ_DEFINE_ERROR(Name)                                      \
  class Name : public Error {                                       \
   public:                                                          \
    explicit Name(const std::string& what) : Error(#Name, what) {}  \
  };

GKZ_DEFINE_ERROR(ShapeMismatch)
GKZ_DEFINE_ERROR(NotInCone)
GKZ_DEFINE_ERROR(FaceContainsOrigin)
GKZ_DEFINE_ERROR(NotAFacePair)
GKZ_DEFINE_ERROR(TruncationTooSmall)
GKZ_DEFINE_ERROR(DegenerateFiber)
GKZ_DEFINE_ERROR(NotARelation)
GKZ_DEFINE_ERROR(UnknownSubcommand)
GKZ_DEFINE_ERROR(ParseError)

#undef GKZ_DEFINE_ERROR

class RankDeficient : public Error {
 public:
  RankDeficient(int rank, int expected)
      : Error("RankDeficient", "matrix has rank " + std::to_string(rank) + ", expected " +
                                   std::to_string(expected)),
        rank_(rank) {}
  int rank() const noexcept { return rank_; }

 private:
  int rank_;
};

}  // namespace gkz

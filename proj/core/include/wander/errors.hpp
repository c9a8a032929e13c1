#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace wander {

// Library errors carry a stable name so the CLI can echo it on exit 1.
class Error : public std::runtime_error {
 public:
  Error(std::string name, const std::string& what)
      : std::runtime_error(name + ": " + what), name_(std::move(name)) {}
  const std::string& name() const { return name_; }

 private:
  std::string name_;
};

#define WANDER_DEFINE_ERROR(NAME)                                       \
  struct NAME : Error {                                                 \
    explicit NAME(const std::string& what = "") : Error(#NAME, what) {} \
  }

WANDER_DEFINE_ERROR(InvalidParameter);
WANDER_DEFINE_ERROR(LevelOutOfRange);
WANDER_DEFINE_ERROR(NoBracket);
WANDER_DEFINE_ERROR(CatastrophicCancellation);
WANDER_DEFINE_ERROR(BeyondMaxLevel);
WANDER_DEFINE_ERROR(OutsideBand);
WANDER_DEFINE_ERROR(DegenerateJacobian);
WANDER_DEFINE_ERROR(SampleOutsideBand);
WANDER_DEFINE_ERROR(RefinementExhausted);
WANDER_DEFINE_ERROR(NotClosed);
WANDER_DEFINE_ERROR(OutsideAnnulus);
WANDER_DEFINE_ERROR(InvertedBounds);
WANDER_DEFINE_ERROR(IoError);

#undef WANDER_DEFINE_ERROR

struct HypothesisViolated : Error {
  explicit HypothesisViolated(std::vector<std::string> predicates)
      : Error("HypothesisViolated", join(predicates)),
        failed(std::move(predicates)) {}
  std::vector<std::string> failed;

 private:
  static std::string join(const std::vector<std::string>& v) {
    std::string out;
    for (const auto& s : v) {
      if (!out.empty()) out += ", ";
      out += s;
    }
    return out;
  }
};

}  // namespace wander

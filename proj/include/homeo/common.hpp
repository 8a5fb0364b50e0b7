#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace homeo {

using SiteId = int;  // 1-based

class Error : public std::runtime_error {
 public:
  Error(std::string kind, const std::string& msg)
      : std::runtime_error(kind + ": " + msg), kind_(std::move(kind)) {}
  const std::string& kind() const { return kind_; }

 private:
  std::string kind_;
};

#define HOMEO_ERROR(Name)                                                  \
  class Name : public Error {                                              \
   public:                                                                 \
    explicit Name(const std::string& msg) : Error(#Name, msg) {}           \
  };

HOMEO_ERROR(SyntaxError)
HOMEO_ERROR(UnboundTemp)
HOMEO_ERROR(ArityMismatch)
HOMEO_ERROR(OverflowError)
HOMEO_ERROR(UnknownArray)
HOMEO_ERROR(BoundExceeded)
HOMEO_ERROR(NoMatch)
HOMEO_ERROR(MultiMatch)
HOMEO_ERROR(NotHome)
HOMEO_ERROR(PsiViolated)
HOMEO_ERROR(UnplacedObject)
HOMEO_ERROR(ConfigError)
HOMEO_ERROR(IncompleteRound)
HOMEO_ERROR(InputError)

#undef HOMEO_ERROR

inline std::int64_t checked_add(std::int64_t a, std::int64_t b) {
  std::int64_t r;
  if (__builtin_add_overflow(a, b, &r)) throw OverflowError("integer overflow in addition");
  return r;
}

inline std::int64_t checked_mul(std::int64_t a, std::int64_t b) {
  std::int64_t r;
  if (__builtin_mul_overflow(a, b, &r)) throw OverflowError("integer overflow in multiplication");
  return r;
}

inline std::int64_t checked_neg(std::int64_t a) {
  std::int64_t r;
  if (__builtin_sub_overflow(std::int64_t{0}, a, &r)) throw OverflowError("integer overflow in negation");
  return r;
}

inline std::int64_t checked_sub(std::int64_t a, std::int64_t b) {
  std::int64_t r;
  if (__builtin_sub_overflow(a, b, &r)) throw OverflowError("integer overflow in subtraction");
  return r;
}

}  // namespace homeo

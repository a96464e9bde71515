#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace nullflow {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// The argument of a formal anti-derivative is not in the image of D on P0.
struct NotExact : Error {
  using Error::Error;
};

/// Anti-derivative requested for an element with a nonzero constant term.
struct NonZeroConstantTerm : NotExact {
  using NotExact::NotExact;
};

/// Division by a coefficient that is not a unit of the parameter ring.
struct NotInvertible : Error {
  using Error::Error;
};

struct UnboundParameter : Error {
  using Error::Error;
};

/// A non-finite sample appeared during time stepping.
struct BlowUp : Error {
  BlowUp(const std::string& what, double t_last_good)
      : Error(what), t_last_good(t_last_good) {}
  double t_last_good;
};

struct SyntaxError : Error {
  SyntaxError(const std::string& what, std::size_t offset)
      : Error(what + " at byte " + std::to_string(offset)), message(what), offset(offset) {}
  std::string message;
  std::size_t offset;
};

struct UnknownSymbol : Error {
  UnknownSymbol(const std::string& name, std::size_t offset)
      : Error("unknown symbol '" + name + "' at byte " + std::to_string(offset)),
        name(name),
        offset(offset) {}
  std::string name;
  std::size_t offset;
};

}  // namespace nullflow

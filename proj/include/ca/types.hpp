#pragma once

#include <compare>
#include <cstdint>
#include <functional>
#include <ostream>
#include <stdexcept>
#include <string>

namespace ca {

/// Integer identifier tagged by the kind of entity it names, so a carrier id
/// can never be passed where a user id is expected.
template <typename Tag>
struct StrongId {
  std::int64_t value = 0;

  constexpr StrongId() = default;
  constexpr explicit StrongId(std::int64_t v) : value(v) {}

  friend constexpr auto operator<=>(const StrongId&, const StrongId&) = default;
  friend std::ostream& operator<<(std::ostream& os, const StrongId& id) {
    return os << id.value;
  }
};

struct CarrierTag {};
struct UserTag {};

using CarrierId = StrongId<CarrierTag>;
using UserId = StrongId<UserTag>;

// Error hierarchy. The CLI maps each kind to a distinct exit status.

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Argument outside the mathematical domain of an operation.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Scenario or parameter set that violates a model invariant.
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// Malformed scenario document.
class ParseError : public Error {
 public:
  using Error::Error;
};

/// Message received out of order, or a phase-2 deadlock.
class ProtocolError : public Error {
 public:
  using Error::Error;
};

/// File could not be read or written.
class IoError : public Error {
 public:
  using Error::Error;
};

/// An iterative solver hit its iteration cap.
class ConvergenceError : public Error {
 public:
  using Error::Error;
};

}  // namespace ca

template <typename Tag>
struct std::hash<ca::StrongId<Tag>> {
  std::size_t operator()(const ca::StrongId<Tag>& id) const noexcept {
    return std::hash<std::int64_t>{}(id.value);
  }
};

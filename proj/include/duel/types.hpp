#pragma once

#include <compare>
#include <cstdint>
#include <functional>
#include <ostream>
#include <stdexcept>
#include <string>

namespace duel {

using Time = double;
using Probability = double;

// Player identifiers are positive integers taken from the game spec; they are
// not required to be contiguous.
struct PlayerId {
  int value = 0;

  friend constexpr auto operator<=>(PlayerId, PlayerId) = default;
  friend std::ostream& operator<<(std::ostream& os, PlayerId id) {
    return os << id.value;
  }
};

// Unordered pair stored with first < second.
struct PlayerPair {
  PlayerId first;
  PlayerId second;

  static constexpr PlayerPair of(PlayerId a, PlayerId b) {
    return a < b ? PlayerPair{a, b} : PlayerPair{b, a};
  }
  constexpr bool contains(PlayerId p) const { return p == first || p == second; }
  constexpr PlayerId other(PlayerId p) const { return p == first ? second : first; }

  friend constexpr auto operator<=>(const PlayerPair&, const PlayerPair&) = default;
};

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Precondition violated by a caller-supplied value.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

// A numeric procedure has no solution for otherwise valid input.
class NumericError : public Error {
 public:
  using Error::Error;
};

}  // namespace duel

template <>
struct std::hash<duel::PlayerId> {
  std::size_t operator()(duel::PlayerId id) const noexcept {
    return std::hash<int>{}(id.value);
  }
};

#pragma once

/** \file
 * \brief Refutation witnesses. Every certificate names point and value
 * indices of the mapping it was produced from and can be re-checked against
 * that mapping with verify_certificate() (see mapping.hpp).
 */

#include <array>
#include <cstddef>
#include <string>
#include <variant>
#include <vector>

namespace ultrasim {

using Triple = std::array<std::size_t, 3>;

/// table[x][y] != table[y][x].
struct Asymmetry {
  std::size_t x, y;
  friend bool operator==(const Asymmetry&, const Asymmetry&) = default;
};

/// table[x][x] != table[y][y].
struct NonConstantDiagonal {
  std::size_t x, y;
  friend bool operator==(const NonConstantDiagonal&, const NonConstantDiagonal&) = default;
};

/// table[x][x] != fiber_value, so the fiber is not reflexive.
struct DiagonalOutsideFiber {
  std::size_t x;
  std::size_t fiber_value;
  friend bool operator==(const DiagonalOutsideFiber&, const DiagonalOutsideFiber&) = default;
};

/// <x1,x2> and <x3,x4> lie in the fiber of fiber_value, yet
/// table[x1][x3] = left_value != right_value = table[x2][x4].
struct NonCoherentQuadruple {
  std::size_t x1, x2, x3, x4;
  std::size_t fiber_value;
  std::size_t left_value, right_value;
  friend bool operator==(const NonCoherentQuadruple&, const NonCoherentQuadruple&) = default;
};

/// x != y but table[x][y] equals the (constant) diagonal value.
struct FiberNotDiagonal {
  std::size_t x, y;
  friend bool operator==(const FiberNotDiagonal&, const FiberNotDiagonal&) = default;
};

/// x1 < x2 < x3 with three pairwise distinct side values.
struct ScaleneTriple {
  std::size_t x1, x2, x3;
  friend bool operator==(const ScaleneTriple&, const ScaleneTriple&) = default;
};

/// Distinct values v_0, ..., v_{m-1} (m >= 2) with <v_i, v_{i+1 mod m}> in
/// the base-precedes-legs relation. witnesses[i] = (x1, x2, x3) with
/// table[x1][x3] = v_i and table[x1][x2] = table[x2][x3] = v_{i+1}.
struct UCycle {
  std::vector<std::size_t> values;
  std::vector<Triple> witnesses;
  friend bool operator==(const UCycle&, const UCycle&) = default;
};

using Certificate = std::variant<Asymmetry, NonConstantDiagonal, DiagonalOutsideFiber,
                                 NonCoherentQuadruple, FiberNotDiagonal, ScaleneTriple, UCycle>;

inline std::string certificate_tag(const Certificate& c) {
  struct Visitor {
    std::string operator()(const Asymmetry&) const { return "Asymmetry"; }
    std::string operator()(const NonConstantDiagonal&) const { return "NonConstantDiagonal"; }
    std::string operator()(const DiagonalOutsideFiber&) const { return "DiagonalOutsideFiber"; }
    std::string operator()(const NonCoherentQuadruple&) const { return "NonCoherentQuadruple"; }
    std::string operator()(const FiberNotDiagonal&) const { return "FiberNotDiagonal"; }
    std::string operator()(const ScaleneTriple&) const { return "ScaleneTriple"; }
    std::string operator()(const UCycle&) const { return "UCycle"; }
  };
  return std::visit(Visitor{}, c);
}

}  // namespace ultrasim

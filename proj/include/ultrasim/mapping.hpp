#pragma once

/** \file
 * \brief Finite mappings X^2 -> labels, their fibers, and the structural
 * checks the decision procedures are built from.
 *
 * A FiniteMapping stores value labels as opaque strings; the table holds
 * value indices. The value list is always exactly the range of the table.
 */

#include <algorithm>
#include <cstddef>
#include <deque>
#include <limits>
#include <optional>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <variant>
#include <vector>

#include "ultrasim/certificate.hpp"
#include "ultrasim/error.hpp"
#include "ultrasim/relation.hpp"

namespace ultrasim {

class FiniteMapping {
 public:
  FiniteMapping() = default;

  /// Checks well-formedness and throws InputError at the first violation:
  /// empty point set, duplicate names, ragged table, index out of range,
  /// or a value label that never occurs in the table.
  static FiniteMapping validate(std::vector<std::string> points, std::vector<std::string> values,
                                const std::vector<std::vector<std::size_t>>& table) {
    const std::size_t n = points.size();
    if (n == 0) throw InputError("mapping needs at least one point");
    check_distinct(points, "point name");
    check_distinct(values, "value label");
    if (table.size() != n)
      throw InputError("table has " + std::to_string(table.size()) + " rows, expected " +
                       std::to_string(n));
    FiniteMapping m;
    m.points_ = std::move(points);
    m.values_ = std::move(values);
    m.table_.reserve(n * n);
    std::vector<bool> used(m.values_.size(), false);
    for (std::size_t x = 0; x < n; ++x) {
      if (table[x].size() != n)
        throw InputError("table row " + std::to_string(x) + " has " +
                         std::to_string(table[x].size()) + " entries, expected " +
                         std::to_string(n));
      for (std::size_t y = 0; y < n; ++y) {
        const std::size_t v = table[x][y];
        if (v >= m.values_.size())
          throw InputError("table entry (" + std::to_string(x) + ", " + std::to_string(y) +
                           ") has value index " + std::to_string(v) + " out of range");
        used[v] = true;
        m.table_.push_back(v);
      }
    }
    for (std::size_t v = 0; v < used.size(); ++v)
      if (!used[v]) throw InputError("value label '" + m.values_[v] + "' does not occur in table");
    return m;
  }

  /// Builds from a table of labels. Without an explicit value list, values
  /// are numbered in order of first occurrence (row-major).
  static FiniteMapping from_labels(std::vector<std::string> points,
                                   const std::vector<std::vector<std::string>>& table,
                                   std::optional<std::vector<std::string>> values = std::nullopt) {
    std::vector<std::string> vals;
    std::unordered_map<std::string, std::size_t> index;
    if (values) {
      vals = *values;
      for (std::size_t i = 0; i < vals.size(); ++i) index.emplace(vals[i], i);
    }
    std::vector<std::vector<std::size_t>> idx(table.size());
    for (std::size_t x = 0; x < table.size(); ++x) {
      for (const auto& label : table[x]) {
        auto it = index.find(label);
        if (it == index.end()) {
          if (values) throw InputError("table label '" + label + "' is not in the value list");
          it = index.emplace(label, vals.size()).first;
          vals.push_back(label);
        }
        idx[x].push_back(it->second);
      }
    }
    return validate(std::move(points), std::move(vals), idx);
  }

  std::size_t size() const { return points_.size(); }
  std::size_t value_count() const { return values_.size(); }
  const std::vector<std::string>& points() const { return points_; }
  const std::vector<std::string>& values() const { return values_; }

  std::size_t at(std::size_t x, std::size_t y) const { return table_[x * points_.size() + y]; }
  const std::string& label_at(std::size_t x, std::size_t y) const { return values_[at(x, y)]; }

  std::optional<std::size_t> value_index(const std::string& label) const {
    auto it = std::find(values_.begin(), values_.end(), label);
    if (it == values_.end()) return std::nullopt;
    return static_cast<std::size_t>(it - values_.begin());
  }

  std::vector<std::vector<std::size_t>> index_table() const {
    const std::size_t n = size();
    std::vector<std::vector<std::size_t>> t(n, std::vector<std::size_t>(n));
    for (std::size_t x = 0; x < n; ++x)
      for (std::size_t y = 0; y < n; ++y) t[x][y] = at(x, y);
    return t;
  }

  friend bool operator==(const FiniteMapping&, const FiniteMapping&) = default;

 private:
  static void check_distinct(const std::vector<std::string>& names, const char* what) {
    std::unordered_set<std::string> seen;
    for (const auto& s : names)
      if (!seen.insert(s).second) throw InputError(std::string("duplicate ") + what + " '" + s + "'");
  }

  std::vector<std::string> points_;
  std::vector<std::string> values_;
  std::vector<std::size_t> table_;
};

// ---------------------------------------------------------------------------
// Symmetry, fibers, diagonal

inline std::optional<Asymmetry> find_asymmetry(const FiniteMapping& m) {
  for (std::size_t x = 0; x < m.size(); ++x)
    for (std::size_t y = x + 1; y < m.size(); ++y)
      if (m.at(x, y) != m.at(y, x)) return Asymmetry{x, y};
  return std::nullopt;
}

inline bool is_symmetric(const FiniteMapping& m) { return !find_asymmetry(m).has_value(); }

/// The fiber of value b: <x, y> belongs to it iff table[x][y] == b.
inline Relation fiber(const FiniteMapping& m, std::size_t b) {
  if (b >= m.value_count()) throw InputError("fiber: value index out of range");
  Relation r(m.size());
  for (std::size_t x = 0; x < m.size(); ++x)
    for (std::size_t y = 0; y < m.size(); ++y)
      if (m.at(x, y) == b) r.insert(x, y);
  return r;
}

/// Partition of the ordered pairs into the fibers of the mapping.
inline PairPartition fiber_partition(const FiniteMapping& m) {
  const std::size_t n = m.size();
  std::vector<std::size_t> label(n * n);
  for (std::size_t x = 0; x < n; ++x)
    for (std::size_t y = 0; y < n; ++y) label[x * n + y] = m.at(x, y);
  return PairPartition{n, Partition::from_labels(label)};
}

/// The common diagonal value, or the first point whose diagonal entry
/// differs from point 0's.
inline std::variant<std::size_t, NonConstantDiagonal> diagonal_value(const FiniteMapping& m) {
  const std::size_t d = m.at(0, 0);
  for (std::size_t x = 1; x < m.size(); ++x)
    if (m.at(x, x) != d) return NonConstantDiagonal{0, x};
  return d;
}

// ---------------------------------------------------------------------------
// Coherence: three formulations that must agree.

/// Direct check of strong consistency with the fiber of a0. Returns the
/// lexicographically least violating quadruple, or a reflexivity/symmetry
/// failure of the fiber; nullopt when the mapping is a0-coherent.
inline std::optional<Certificate> find_coherence_violation(const FiniteMapping& m, std::size_t a0) {
  if (a0 >= m.value_count()) throw InputError("coherence: value index out of range");
  const std::size_t n = m.size();
  for (std::size_t x = 0; x < n; ++x)
    if (m.at(x, x) != a0) return DiagonalOutsideFiber{x, a0};
  for (std::size_t x = 0; x < n; ++x)
    for (std::size_t y = 0; y < n; ++y)
      if (m.at(x, y) == a0 && m.at(y, x) != a0) return Asymmetry{x, y};

  // A reflexive, symmetric fiber that is not transitive also shows up here:
  // x~y, y~z, x!~z gives the quadruple (x, x, y, z).
  std::vector<std::vector<std::size_t>> related(n);
  for (std::size_t x = 0; x < n; ++x)
    for (std::size_t y = 0; y < n; ++y)
      if (m.at(x, y) == a0) related[x].push_back(y);
  for (std::size_t x1 = 0; x1 < n; ++x1)
    for (std::size_t x2 : related[x1])
      for (std::size_t x3 = 0; x3 < n; ++x3)
        for (std::size_t x4 : related[x3])
          if (m.at(x1, x3) != m.at(x2, x4))
            return NonCoherentQuadruple{x1, x2, x3, x4, a0, m.at(x1, x3), m.at(x2, x4)};
  return std::nullopt;
}

inline bool is_coherent_direct(const FiniteMapping& m, std::size_t a0) {
  return !find_coherence_violation(m, a0).has_value();
}

/// Which fiber identity to test: R o F o R = F, R o F = F, F o R = F, or
/// at least one of the one-sided identities per value.
enum class CompositionVariant { TwoSided, Left, Right, Either };

/// Coherence via relation algebra on fibers, R being the fiber of a0.
/// False whenever R is not an equivalence relation.
inline bool is_coherent_composition(const FiniteMapping& m, std::size_t a0,
                                    CompositionVariant variant) {
  const Relation r = fiber(m, a0);
  if (!classify(r).is_equivalence()) return false;
  for (std::size_t b = 0; b < m.value_count(); ++b) {
    const Relation fb = fiber(m, b);
    bool ok = false;
    switch (variant) {
      case CompositionVariant::TwoSided:
        ok = compose(compose(r, fb), r) == fb;
        break;
      case CompositionVariant::Left:
        ok = compose(r, fb) == fb;
        break;
      case CompositionVariant::Right:
        ok = compose(fb, r) == fb;
        break;
      case CompositionVariant::Either:
        ok = compose(r, fb) == fb || compose(fb, r) == fb;
        break;
    }
    if (!ok) return false;
  }
  return true;
}

/// Coherence via partitions: the pair partition induced by the classes of
/// the a0-fiber must refine the partition of pairs into fibers.
inline bool is_coherent_refinement(const FiniteMapping& m, std::size_t a0) {
  const Relation r = fiber(m, a0);
  if (!classify(r).is_equivalence()) return false;
  const PairPartition induced = tensor_partition(partition_from_equivalence(r));
  return refines(induced.pairs, fiber_partition(m).pairs);
}

// ---------------------------------------------------------------------------
// Triangles

/// Lexicographically least x1 < x2 < x3 whose three sides carry pairwise
/// distinct values. For a symmetric mapping, none exists iff every triangle
/// is isosceles.
inline std::optional<ScaleneTriple> scalene_triple(const FiniteMapping& m) {
  const std::size_t n = m.size();
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = a + 1; b < n; ++b) {
      const std::size_t ab = m.at(a, b);
      for (std::size_t c = b + 1; c < n; ++c) {
        const std::size_t bc = m.at(b, c), ac = m.at(a, c);
        if (ab != bc && bc != ac && ab != ac) return ScaleneTriple{a, b, c};
      }
    }
  return std::nullopt;
}

/// All scalene triples in lexicographic order.
inline std::vector<ScaleneTriple> all_scalene_triples(const FiniteMapping& m) {
  std::vector<ScaleneTriple> out;
  const std::size_t n = m.size();
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = a + 1; b < n; ++b)
      for (std::size_t c = b + 1; c < n; ++c) {
        const std::size_t ab = m.at(a, b), bc = m.at(b, c), ac = m.at(a, c);
        if (ab != bc && bc != ac && ab != ac) out.push_back(ScaleneTriple{a, b, c});
      }
  return out;
}

/// The base-precedes-legs relation on values: <v1, v2> is present iff some
/// triple (x1, x2, x3) has table[x1][x3] = v1 and
/// table[x1][x2] = table[x2][x3] = v2.
///
/// Triples may repeat points. The degenerate triple (y, x, y) contributes
/// <diag, table[x][y]>, which is what puts the diagonal value below every
/// other value.
inline Relation u_relation(const FiniteMapping& m) {
  if (auto a = find_asymmetry(m))
    throw InputError("u_relation requires a symmetric mapping (asymmetric at " +
                     std::to_string(a->x) + ", " + std::to_string(a->y) + ")");
  const std::size_t n = m.size();
  Relation u(m.value_count());
  for (std::size_t x1 = 0; x1 < n; ++x1)
    for (std::size_t x2 = 0; x2 < n; ++x2) {
      const std::size_t leg = m.at(x1, x2);
      for (std::size_t x3 = 0; x3 < n; ++x3)
        if (m.at(x2, x3) == leg) u.insert(m.at(x1, x3), leg);
    }
  return u;
}

/// Lexicographically least triple witnessing <base, leg> in u_relation.
inline std::optional<Triple> find_u_witness(const FiniteMapping& m, std::size_t base,
                                            std::size_t leg) {
  const std::size_t n = m.size();
  for (std::size_t x1 = 0; x1 < n; ++x1)
    for (std::size_t x2 = 0; x2 < n; ++x2) {
      if (m.at(x1, x2) != leg) continue;
      for (std::size_t x3 = 0; x3 < n; ++x3)
        if (m.at(x2, x3) == leg && m.at(x1, x3) == base) return Triple{x1, x2, x3};
    }
  return std::nullopt;
}

/// Shortest cycle of length >= 2 through distinct vertices of u (self loops
/// ignored). Ties go to the smallest starting vertex; the cycle is reported
/// starting there. nullopt iff the transitive closure of u is antisymmetric.
inline std::optional<std::vector<std::size_t>> shortest_cycle(const Relation& u) {
  const std::size_t k = u.size();
  std::optional<std::vector<std::size_t>> best;
  for (std::size_t s = 0; s < k; ++s) {
    std::vector<std::size_t> parent(k, SIZE_MAX), dist(k, SIZE_MAX);
    std::deque<std::size_t> queue{s};
    dist[s] = 0;
    std::optional<std::size_t> closing;
    while (!queue.empty() && !closing) {
      const std::size_t v = queue.front();
      queue.pop_front();
      for (std::size_t w = 0; w < k; ++w) {
        if (w == v || !u.contains(v, w)) continue;
        if (w == s) {
          closing = v;
          break;
        }
        if (dist[w] == SIZE_MAX) {
          dist[w] = dist[v] + 1;
          parent[w] = v;
          queue.push_back(w);
        }
      }
    }
    if (!closing) continue;
    std::vector<std::size_t> cycle;
    for (std::size_t v = *closing; v != SIZE_MAX; v = parent[v]) cycle.push_back(v);
    std::reverse(cycle.begin(), cycle.end());
    if (!best || cycle.size() < best->size()) best = std::move(cycle);
    if (best->size() == 2) break;
  }
  return best;
}

/// Builds the UCycle certificate for a cycle of values in u_relation(m).
inline UCycle make_u_cycle(const FiniteMapping& m, std::vector<std::size_t> cycle) {
  UCycle c;
  for (std::size_t i = 0; i < cycle.size(); ++i) {
    const std::size_t base = cycle[i], leg = cycle[(i + 1) % cycle.size()];
    auto w = find_u_witness(m, base, leg);
    if (!w) throw InputError("make_u_cycle: pair is not in the u relation");
    c.witnesses.push_back(*w);
  }
  c.values = std::move(cycle);
  return c;
}

// ---------------------------------------------------------------------------
// Certificate verification, independent of the code that produced them.

inline bool verify_certificate(const Certificate& cert, const FiniteMapping& m) {
  const std::size_t n = m.size();
  const std::size_t k = m.value_count();
  auto pt = [n](std::size_t x) { return x < n; };
  struct Visitor {
    const FiniteMapping& m;
    decltype(pt) in;
    std::size_t k;
    bool operator()(const Asymmetry& c) const {
      return in(c.x) && in(c.y) && m.at(c.x, c.y) != m.at(c.y, c.x);
    }
    bool operator()(const NonConstantDiagonal& c) const {
      return in(c.x) && in(c.y) && m.at(c.x, c.x) != m.at(c.y, c.y);
    }
    bool operator()(const DiagonalOutsideFiber& c) const {
      return in(c.x) && c.fiber_value < k && m.at(c.x, c.x) != c.fiber_value;
    }
    bool operator()(const NonCoherentQuadruple& c) const {
      if (!(in(c.x1) && in(c.x2) && in(c.x3) && in(c.x4))) return false;
      return m.at(c.x1, c.x2) == c.fiber_value && m.at(c.x3, c.x4) == c.fiber_value &&
             m.at(c.x1, c.x3) == c.left_value && m.at(c.x2, c.x4) == c.right_value &&
             c.left_value != c.right_value;
    }
    bool operator()(const FiberNotDiagonal& c) const {
      return in(c.x) && in(c.y) && c.x != c.y && m.at(c.x, c.y) == m.at(c.x, c.x) &&
             m.at(c.x, c.x) == m.at(c.y, c.y);
    }
    bool operator()(const ScaleneTriple& c) const {
      if (!(in(c.x1) && in(c.x2) && in(c.x3))) return false;
      const std::size_t ab = m.at(c.x1, c.x2), bc = m.at(c.x2, c.x3), ac = m.at(c.x1, c.x3);
      return ab != bc && bc != ac && ab != ac;
    }
    bool operator()(const UCycle& c) const {
      const std::size_t len = c.values.size();
      if (len < 2 || c.witnesses.size() != len) return false;
      std::vector<std::size_t> sorted = c.values;
      std::sort(sorted.begin(), sorted.end());
      if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) return false;
      for (std::size_t i = 0; i < len; ++i) {
        const auto& [x1, x2, x3] = c.witnesses[i];
        if (!(in(x1) && in(x2) && in(x3))) return false;
        const std::size_t base = c.values[i], leg = c.values[(i + 1) % len];
        if (m.at(x1, x3) != base || m.at(x1, x2) != leg || m.at(x2, x3) != leg) return false;
      }
      return true;
    }
  };
  return std::visit(Visitor{m, pt, k}, cert);
}

}  // namespace ultrasim

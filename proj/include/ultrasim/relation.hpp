#pragma once

/** \file
 * \brief Binary relations on {0, ..., n-1}, partitions, and the pair
 * partition built from a partition of the point set.
 */

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "ultrasim/error.hpp"

namespace ultrasim {

using Pair = std::pair<std::size_t, std::size_t>;

/// A binary relation on an indexed finite set, stored as a dense n x n table.
class Relation {
 public:
  Relation() = default;
  explicit Relation(std::size_t n) : n_(n), bits_(n * n, 0) {}

  static Relation identity(std::size_t n) {
    Relation r(n);
    for (std::size_t i = 0; i < n; ++i) r.insert(i, i);
    return r;
  }

  static Relation full(std::size_t n) {
    Relation r(n);
    std::fill(r.bits_.begin(), r.bits_.end(), std::uint8_t{1});
    return r;
  }

  template <typename Range>
  static Relation from_pairs(std::size_t n, const Range& pairs) {
    Relation r(n);
    for (const auto& [a, b] : pairs) {
      if (a >= n || b >= n) throw InputError("relation pair out of range");
      r.insert(a, b);
    }
    return r;
  }

  std::size_t size() const { return n_; }

  bool contains(std::size_t a, std::size_t b) const { return bits_[a * n_ + b] != 0; }
  void insert(std::size_t a, std::size_t b) { bits_[a * n_ + b] = 1; }
  void erase(std::size_t a, std::size_t b) { bits_[a * n_ + b] = 0; }

  std::size_t count() const {
    return static_cast<std::size_t>(std::count(bits_.begin(), bits_.end(), std::uint8_t{1}));
  }

  /// Pairs in row-major (lexicographic) order.
  std::vector<Pair> pairs() const {
    std::vector<Pair> out;
    for (std::size_t a = 0; a < n_; ++a)
      for (std::size_t b = 0; b < n_; ++b)
        if (contains(a, b)) out.emplace_back(a, b);
    return out;
  }

  bool is_subset_of(const Relation& other) const {
    if (n_ != other.n_) return false;
    for (std::size_t i = 0; i < bits_.size(); ++i)
      if (bits_[i] && !other.bits_[i]) return false;
    return true;
  }

  Relation& operator|=(const Relation& other) {
    if (n_ != other.n_) throw InputError("relation size mismatch in union");
    for (std::size_t i = 0; i < bits_.size(); ++i) bits_[i] |= other.bits_[i];
    return *this;
  }

  friend Relation operator|(Relation lhs, const Relation& rhs) { return lhs |= rhs; }

  Relation transposed() const {
    Relation t(n_);
    for (std::size_t a = 0; a < n_; ++a)
      for (std::size_t b = 0; b < n_; ++b)
        if (contains(a, b)) t.insert(b, a);
    return t;
  }

  friend bool operator==(const Relation&, const Relation&) = default;

 private:
  std::size_t n_ = 0;
  std::vector<std::uint8_t> bits_;
};

/// <x, y> is in the result iff some z has <x, z> in r and <z, y> in s.
inline Relation compose(const Relation& r, const Relation& s) {
  if (r.size() != s.size())
    throw InputError("compose: relation sizes differ (" + std::to_string(r.size()) + " vs " +
                     std::to_string(s.size()) + ")");
  const std::size_t n = r.size();
  Relation out(n);
  for (std::size_t x = 0; x < n; ++x)
    for (std::size_t z = 0; z < n; ++z) {
      if (!r.contains(x, z)) continue;
      for (std::size_t y = 0; y < n; ++y)
        if (s.contains(z, y)) out.insert(x, y);
    }
  return out;
}

/// Smallest transitive superset of r (Warshall).
inline Relation transitive_closure(const Relation& r) {
  Relation c = r;
  const std::size_t n = c.size();
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t i = 0; i < n; ++i) {
      if (!c.contains(i, k)) continue;
      for (std::size_t j = 0; j < n; ++j)
        if (c.contains(k, j)) c.insert(i, j);
    }
  return c;
}

/// Property flags of a relation. Each failing property carries the
/// lexicographically least witness pair.
struct RelationReport {
  bool reflexive = true;
  bool symmetric = true;
  bool transitive = true;
  bool antisymmetric = true;
  std::optional<Pair> reflexive_witness;      // <x, x> missing
  std::optional<Pair> symmetric_witness;      // <x, y> present, <y, x> missing
  std::optional<Pair> transitive_witness;     // <x, z> missing although x r y r z
  std::optional<Pair> antisymmetric_witness;  // x != y with both directions present

  bool is_equivalence() const { return reflexive && symmetric && transitive; }
  bool is_partial_order() const { return reflexive && antisymmetric && transitive; }
};

inline RelationReport classify(const Relation& r) {
  RelationReport rep;
  const std::size_t n = r.size();
  for (std::size_t x = 0; x < n && rep.reflexive; ++x)
    if (!r.contains(x, x)) {
      rep.reflexive = false;
      rep.reflexive_witness = Pair{x, x};
    }
  for (std::size_t x = 0; x < n; ++x) {
    for (std::size_t y = 0; y < n; ++y) {
      if (!r.contains(x, y)) continue;
      if (rep.symmetric && !r.contains(y, x)) {
        rep.symmetric = false;
        rep.symmetric_witness = Pair{x, y};
      }
      if (rep.antisymmetric && x != y && r.contains(y, x)) {
        rep.antisymmetric = false;
        rep.antisymmetric_witness = Pair{x, y};
      }
    }
  }
  // The least failing <x, z> is found by scanning pairs in order, so the
  // composed relation is computed once up front.
  const Relation two_step = compose(r, r);
  for (std::size_t x = 0; x < n && rep.transitive; ++x)
    for (std::size_t z = 0; z < n; ++z)
      if (two_step.contains(x, z) && !r.contains(x, z)) {
        rep.transitive = false;
        rep.transitive_witness = Pair{x, z};
        break;
      }
  return rep;
}

/// A partition of {0, ..., n-1}. Block ids are dense and numbered by the
/// least member of each block.
class Partition {
 public:
  Partition() = default;

  /// Builds from arbitrary block labels; the labels are renumbered so that
  /// block 0 holds point 0 and ids increase with least member.
  static Partition from_labels(const std::vector<std::size_t>& labels) {
    Partition p;
    p.block_of_.resize(labels.size());
    std::unordered_map<std::size_t, std::size_t> id_of;
    for (std::size_t x = 0; x < labels.size(); ++x) {
      const std::size_t next = id_of.size();
      p.block_of_[x] = id_of.try_emplace(labels[x], next).first->second;
    }
    p.blocks_ = id_of.size();
    return p;
  }

  static Partition singletons(std::size_t n) {
    std::vector<std::size_t> ids(n);
    for (std::size_t i = 0; i < n; ++i) ids[i] = i;
    return from_labels(ids);
  }

  std::size_t size() const { return block_of_.size(); }
  std::size_t block_count() const { return blocks_; }
  std::size_t block_of(std::size_t x) const { return block_of_[x]; }
  const std::vector<std::size_t>& block_ids() const { return block_of_; }

  std::vector<std::vector<std::size_t>> blocks() const {
    std::vector<std::vector<std::size_t>> out(blocks_);
    for (std::size_t x = 0; x < block_of_.size(); ++x) out[block_of_[x]].push_back(x);
    return out;
  }

  friend bool operator==(const Partition&, const Partition&) = default;

 private:
  std::vector<std::size_t> block_of_;
  std::size_t blocks_ = 0;
};

/// Equivalence classes of r. Throws InputError naming the first failed
/// property when r is not an equivalence relation.
inline Partition partition_from_equivalence(const Relation& r) {
  const RelationReport rep = classify(r);
  auto fail = [](const char* prop, const Pair& w) {
    throw InputError(std::string("not an equivalence relation: ") + prop + " fails at <" +
                     std::to_string(w.first) + ", " + std::to_string(w.second) + ">");
  };
  if (!rep.reflexive) fail("reflexivity", *rep.reflexive_witness);
  if (!rep.symmetric) fail("symmetry", *rep.symmetric_witness);
  if (!rep.transitive) fail("transitivity", *rep.transitive_witness);

  const std::size_t n = r.size();
  std::vector<std::size_t> label(n);
  for (std::size_t x = 0; x < n; ++x) {
    std::size_t least = x;
    for (std::size_t a = 0; a < x; ++a)
      if (r.contains(x, a)) {
        least = a;
        break;
      }
    label[x] = least;
  }
  return Partition::from_labels(label);
}

inline Relation equivalence_from_partition(const Partition& p) {
  Relation r(p.size());
  for (const auto& block : p.blocks())
    for (std::size_t a : block)
      for (std::size_t b : block) r.insert(a, b);
  return r;
}

/// True iff every block of fine lies inside a block of coarse.
inline bool refines(const Partition& fine, const Partition& coarse) {
  if (fine.size() != coarse.size()) throw InputError("refines: partition sizes differ");
  std::vector<std::size_t> target(fine.block_count(), SIZE_MAX);
  for (std::size_t x = 0; x < fine.size(); ++x) {
    std::size_t& t = target[fine.block_of(x)];
    if (t == SIZE_MAX)
      t = coarse.block_of(x);
    else if (t != coarse.block_of(x))
      return false;
  }
  return true;
}

/// A partition of the n^2 ordered pairs of an n-point set. Pair <x, y> is
/// element x * n + y of the underlying partition.
struct PairPartition {
  std::size_t points = 0;
  Partition pairs;

  std::size_t block_count() const { return pairs.block_count(); }
  std::size_t block_of(std::size_t x, std::size_t y) const { return pairs.block_of(x * points + y); }

  std::vector<std::vector<Pair>> blocks() const {
    std::vector<std::vector<Pair>> out(pairs.block_count());
    for (std::size_t x = 0; x < points; ++x)
      for (std::size_t y = 0; y < points; ++y) out[block_of(x, y)].emplace_back(x, y);
    return out;
  }
};

/// The pair partition with one block for the union of all squares X_j^2 and
/// one block X_i x X_j for each ordered pair of distinct blocks i != j.
/// Block 0 is the diagonal union; the others follow in (i, j) order.
inline PairPartition tensor_partition(const Partition& p) {
  const std::size_t n = p.size();
  const std::size_t b = p.block_count();
  std::vector<std::size_t> label(n * n);
  for (std::size_t x = 0; x < n; ++x)
    for (std::size_t y = 0; y < n; ++y) {
      const std::size_t i = p.block_of(x), j = p.block_of(y);
      label[x * n + y] = (i == j) ? 0 : 1 + i * b + j;
    }
  // Least-member renumbering matches (i, j) order because block ids of p
  // already increase with least member.
  return PairPartition{n, Partition::from_labels(label)};
}

}  // namespace ultrasim

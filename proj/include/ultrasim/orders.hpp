#pragma once

/** \file
 * \brief Finite posets: validation, linear extensions, rank embeddings,
 * isotone maps, and the minimal order a mapping induces on its values.
 */

#include <algorithm>
#include <cstddef>
#include <optional>
#include <string>
#include <unordered_map>
#include <utility>
#include <variant>
#include <vector>

#include "ultrasim/error.hpp"
#include "ultrasim/mapping.hpp"
#include "ultrasim/rational.hpp"
#include "ultrasim/relation.hpp"

namespace ultrasim {

/// Element labels plus a reflexive, antisymmetric, transitive order table.
class FinitePoset {
 public:
  FinitePoset() = default;

  static FinitePoset validate(std::vector<std::string> elements, Relation leq) {
    if (leq.size() != elements.size())
      throw InputError("poset: order table size does not match element count");
    std::unordered_map<std::string, std::size_t> index;
    for (std::size_t i = 0; i < elements.size(); ++i)
      if (!index.emplace(elements[i], i).second)
        throw InputError("poset: duplicate element '" + elements[i] + "'");
    const RelationReport rep = classify(leq);
    auto fail = [&](const char* what, const Pair& w) {
      throw InputError(std::string("poset: order is not ") + what + " at <" + elements[w.first] +
                       ", " + elements[w.second] + ">");
    };
    if (!rep.reflexive) fail("reflexive", *rep.reflexive_witness);
    if (!rep.antisymmetric) fail("antisymmetric", *rep.antisymmetric_witness);
    if (!rep.transitive) fail("transitive", *rep.transitive_witness);
    FinitePoset p;
    p.elements_ = std::move(elements);
    p.leq_ = std::move(leq);
    p.index_ = std::move(index);
    return p;
  }

  /// Accepts any generating set of pairs (covers suffice): reflexive pairs
  /// are added and the result is closed transitively before validation.
  static FinitePoset from_pairs(std::vector<std::string> elements,
                                const std::vector<std::pair<std::string, std::string>>& pairs) {
    std::unordered_map<std::string, std::size_t> index;
    for (std::size_t i = 0; i < elements.size(); ++i) index.emplace(elements[i], i);
    Relation r = Relation::identity(elements.size());
    for (const auto& [a, b] : pairs) {
      auto ia = index.find(a), ib = index.find(b);
      if (ia == index.end() || ib == index.end())
        throw InputError("poset: pair <" + a + ", " + b + "> names an unknown element");
      r.insert(ia->second, ib->second);
    }
    return validate(std::move(elements), transitive_closure(r));
  }

  /// Total order in the given sequence.
  static FinitePoset chain(std::vector<std::string> elements) {
    Relation r(elements.size());
    for (std::size_t i = 0; i < elements.size(); ++i)
      for (std::size_t j = i; j < elements.size(); ++j) r.insert(i, j);
    return validate(std::move(elements), std::move(r));
  }

  std::size_t size() const { return elements_.size(); }
  const std::vector<std::string>& elements() const { return elements_; }
  const std::string& label(std::size_t i) const { return elements_[i]; }
  const Relation& relation() const { return leq_; }
  bool leq(std::size_t a, std::size_t b) const { return leq_.contains(a, b); }
  bool less(std::size_t a, std::size_t b) const { return a != b && leq_.contains(a, b); }

  std::optional<std::size_t> index_of(const std::string& label) const {
    auto it = index_.find(label);
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }

  /// Strict pairs a < b in lexicographic index order.
  std::vector<Pair> strict_pairs() const {
    std::vector<Pair> out;
    for (const auto& pr : leq_.pairs())
      if (pr.first != pr.second) out.push_back(pr);
    return out;
  }

  friend bool operator==(const FinitePoset& a, const FinitePoset& b) {
    return a.elements_ == b.elements_ && a.leq_ == b.leq_;
  }

 private:
  std::vector<std::string> elements_;
  Relation leq_;
  std::unordered_map<std::string, std::size_t> index_;
};

/// A total function between index sets: image[i] is the target of source i.
using ValueMap = std::vector<std::size_t>;

/// The element below all others, if there is one.
inline std::optional<std::size_t> smallest_element(const FinitePoset& p) {
  for (std::size_t a = 0; a < p.size(); ++a) {
    bool below_all = true;
    for (std::size_t b = 0; b < p.size() && below_all; ++b) below_all = p.leq(a, b);
    if (below_all) return a;
  }
  return std::nullopt;
}

/// A linear order containing p, as a sequence of element indices. Among the
/// currently minimal elements the one with the least label goes next.
inline std::vector<std::size_t> linear_extension(const FinitePoset& p) {
  const std::size_t k = p.size();
  std::vector<std::size_t> below(k, 0);
  for (const auto& [a, b] : p.strict_pairs()) ++below[b];
  std::vector<bool> placed(k, false);
  std::vector<std::size_t> out;
  out.reserve(k);
  while (out.size() < k) {
    std::optional<std::size_t> next;
    for (std::size_t a = 0; a < k; ++a)
      if (!placed[a] && below[a] == 0 && (!next || p.label(a) < p.label(*next))) next = a;
    placed[*next] = true;
    out.push_back(*next);
    for (std::size_t b = 0; b < k; ++b)
      if (p.less(*next, b)) --below[b];
  }
  return out;
}

/// Integer ranks along a total order: total[i] gets rank i. The bottom
/// element must come first so that it maps to 0.
inline std::vector<Rational> embed_ranks(const std::vector<std::size_t>& total, std::size_t bottom) {
  if (total.empty() || total.front() != bottom)
    throw InputError("embed_ranks: the bottom element must be first in the order");
  std::vector<Rational> rank(total.size());
  std::vector<bool> seen(total.size(), false);
  for (std::size_t i = 0; i < total.size(); ++i) {
    if (total[i] >= total.size() || seen[total[i]])
      throw InputError("embed_ranks: order is not a permutation of the elements");
    seen[total[i]] = true;
    rank[total[i]] = Rational(static_cast<long long>(i));
  }
  return rank;
}

/// Lexicographically least <a, b> with a <= b in p but f(a) !<= f(b) in l.
inline std::optional<Pair> isotone_violation(const ValueMap& f, const FinitePoset& p,
                                             const FinitePoset& l) {
  if (f.size() != p.size()) throw InputError("isotone check: map is not total on the source");
  for (std::size_t t : f)
    if (t >= l.size()) throw InputError("isotone check: map leaves the target poset");
  for (const auto& [a, b] : p.relation().pairs())
    if (!l.leq(f[a], f[b])) return Pair{a, b};
  return std::nullopt;
}

inline bool is_isotone(const ValueMap& f, const FinitePoset& p, const FinitePoset& l) {
  return !isotone_violation(f, p, l).has_value();
}

struct IsomorphismFailure {
  enum class Reason { SizeMismatch, NotInjective, NotIsotone, InverseNotIsotone } reason;
  std::size_t a = 0, b = 0;  // source elements involved (unused for SizeMismatch)
};

/// nullopt iff f is a bijection, isotone, with isotone inverse.
inline std::optional<IsomorphismFailure> order_isomorphism_failure(const ValueMap& f,
                                                                   const FinitePoset& p,
                                                                   const FinitePoset& l) {
  using R = IsomorphismFailure::Reason;
  if (f.size() != p.size() || p.size() != l.size()) return IsomorphismFailure{R::SizeMismatch};
  for (std::size_t t : f)
    if (t >= l.size()) return IsomorphismFailure{R::SizeMismatch};
  for (std::size_t a = 0; a < f.size(); ++a)
    for (std::size_t b = a + 1; b < f.size(); ++b)
      if (f[a] == f[b]) return IsomorphismFailure{R::NotInjective, a, b};
  if (auto v = isotone_violation(f, p, l)) return IsomorphismFailure{R::NotIsotone, v->first, v->second};
  for (std::size_t a = 0; a < f.size(); ++a)
    for (std::size_t b = 0; b < f.size(); ++b)
      if (l.leq(f[a], f[b]) && !p.leq(a, b)) return IsomorphismFailure{R::InverseNotIsotone, a, b};
  return std::nullopt;
}

inline bool is_order_isomorphism(const ValueMap& f, const FinitePoset& p, const FinitePoset& l) {
  return !order_isomorphism_failure(f, p, l).has_value();
}

/// Every linear extension of p, in lexicographic order of index sequences.
/// Exhaustive, so refused above `cap` elements.
inline std::vector<std::vector<std::size_t>> order_extensions_oracle(const FinitePoset& p,
                                                                     std::size_t cap = 8) {
  if (p.size() > cap)
    throw InputError("order_extensions_oracle: " + std::to_string(p.size()) +
                     " elements exceeds the cap of " + std::to_string(cap));
  const std::size_t k = p.size();
  std::vector<std::vector<std::size_t>> out;
  std::vector<std::size_t> prefix;
  std::vector<bool> placed(k, false);
  auto extend = [&](auto&& self) -> void {
    if (prefix.size() == k) {
      out.push_back(prefix);
      return;
    }
    for (std::size_t a = 0; a < k; ++a) {
      if (placed[a]) continue;
      bool minimal = true;
      for (std::size_t b = 0; b < k && minimal; ++b)
        if (!placed[b] && p.less(b, a)) minimal = false;
      if (!minimal) continue;
      placed[a] = true;
      prefix.push_back(a);
      self(self);
      prefix.pop_back();
      placed[a] = false;
    }
  };
  extend(extend);
  return out;
}

/// The weakest order on the values of m for which m is poset-valued
/// pseudoultrametric: the transitive closure of u_relation plus the
/// diagonal. When the closure is not antisymmetric, the shortest value
/// cycle in u_relation is returned instead.
inline std::variant<FinitePoset, UCycle> minimal_order(const FiniteMapping& m) {
  const Relation u = u_relation(m);
  Relation order = transitive_closure(u) | Relation::identity(m.value_count());
  if (!classify(order).antisymmetric) {
    auto cycle = shortest_cycle(u);
    if (!cycle) throw InputError("minimal_order: closure not antisymmetric but no cycle found");
    return make_u_cycle(m, std::move(*cycle));
  }
  return FinitePoset::validate(m.values(), std::move(order));
}

}  // namespace ultrasim

#pragma once

/** \file
 * \brief Realizing mappings as rational (pseudo)ultrametrics, poset-valued
 * validators, isotone transfer, the canonical chain ultrametric, and balls.
 */

#include <algorithm>
#include <array>
#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "ultrasim/certificate.hpp"
#include "ultrasim/error.hpp"
#include "ultrasim/mapping.hpp"
#include "ultrasim/orders.hpp"
#include "ultrasim/rational.hpp"
#include "ultrasim/relation.hpp"

namespace ultrasim {

enum class RealizedKind { Pseudoultrametric, Ultrametric };

inline std::string kind_name(RealizedKind k) {
  return k == RealizedKind::Ultrametric ? "ultrametric" : "pseudoultrametric";
}

using RationalMatrix = std::vector<std::vector<Rational>>;

/// A rational distance table obtained from a mapping by an injective value
/// assignment: matrix[x][y] == assignment[table[x][y]].
struct Realization {
  std::vector<std::string> points;
  std::vector<std::string> value_labels;  // labels of the source mapping
  std::vector<Rational> assignment;       // per source value index
  RationalMatrix matrix;
  RealizedKind kind = RealizedKind::Pseudoultrametric;

  /// Distinct entries of the matrix, ascending.
  std::vector<Rational> distances() const {
    std::vector<Rational> d;
    for (const auto& row : matrix) d.insert(d.end(), row.begin(), row.end());
    std::sort(d.begin(), d.end());
    d.erase(std::unique(d.begin(), d.end()), d.end());
    return d;
  }

  /// The matrix as a mapping whose values are the rendered distances in
  /// ascending order, so value index i is distances()[i].
  FiniteMapping as_mapping() const {
    const std::vector<Rational> d = distances();
    std::vector<std::string> labels;
    for (const auto& q : d) labels.push_back(to_string(q));
    std::vector<std::vector<std::size_t>> idx(matrix.size());
    for (std::size_t x = 0; x < matrix.size(); ++x)
      for (const auto& q : matrix[x])
        idx[x].push_back(static_cast<std::size_t>(std::lower_bound(d.begin(), d.end(), q) - d.begin()));
    return FiniteMapping::validate(points, std::move(labels), idx);
  }

  friend bool operator==(const Realization&, const Realization&) = default;
};

/// Wraps an arbitrary square rational matrix. Value labels are the rendered
/// distances and the assignment is the identity on them.
inline Realization realization_from_matrix(std::vector<std::string> points, RationalMatrix matrix,
                                           RealizedKind kind) {
  if (matrix.size() != points.size()) throw InputError("matrix size does not match point count");
  for (const auto& row : matrix)
    if (row.size() != points.size()) throw InputError("matrix is not square");
  Realization r;
  r.points = std::move(points);
  r.matrix = std::move(matrix);
  r.kind = kind;
  r.assignment = r.distances();
  for (const auto& q : r.assignment) r.value_labels.push_back(to_string(q));
  return r;
}

/// First (x, y, z) in lexicographic order with d(x,y) > max(d(x,z), d(z,y)),
/// scanning all n^3 instances.
inline std::optional<Triple> strong_triangle_violation(const RationalMatrix& d) {
  const std::size_t n = d.size();
  for (std::size_t x = 0; x < n; ++x)
    for (std::size_t y = 0; y < n; ++y)
      for (std::size_t z = 0; z < n; ++z)
        if (d[x][y] > std::max(d[x][z], d[z][y])) return Triple{x, y, z};
  return std::nullopt;
}

inline std::size_t count_strong_triangle_violations(const RationalMatrix& d) {
  const std::size_t n = d.size();
  std::size_t bad = 0;
  for (std::size_t x = 0; x < n; ++x)
    for (std::size_t y = 0; y < n; ++y)
      for (std::size_t z = 0; z < n; ++z)
        if (d[x][y] > std::max(d[x][z], d[z][y])) ++bad;
  return bad;
}

/// Re-checks every invariant of r against its source mapping without using
/// any of the decision code. Returns a description of the first problem.
inline std::optional<std::string> realization_problem(const Realization& r, const FiniteMapping& m) {
  const std::size_t n = m.size();
  if (r.matrix.size() != n) return "matrix has wrong size";
  if (r.assignment.size() != m.value_count()) return "assignment does not cover the values";
  for (std::size_t v = 0; v < r.assignment.size(); ++v) {
    if (r.assignment[v] < 0) return "negative distance for value " + m.values()[v];
    for (std::size_t w = v + 1; w < r.assignment.size(); ++w)
      if (r.assignment[v] == r.assignment[w]) return "assignment is not injective";
  }
  for (std::size_t x = 0; x < n; ++x) {
    if (r.matrix[x].size() != n) return "matrix is not square";
    for (std::size_t y = 0; y < n; ++y) {
      if (r.matrix[x][y] != r.assignment[m.at(x, y)]) return "matrix disagrees with assignment";
      if (r.matrix[x][y] != r.matrix[y][x]) return "matrix is not symmetric";
    }
    if (r.matrix[x][x] != 0) return "nonzero diagonal";
  }
  if (r.kind == RealizedKind::Ultrametric)
    for (std::size_t x = 0; x < n; ++x)
      for (std::size_t y = 0; y < n; ++y)
        if (x != y && r.matrix[x][y] == 0) return "zero distance between distinct points";
  if (strong_triangle_violation(r.matrix)) return "strong triangle inequality fails";
  return std::nullopt;
}

using RealizeResult = std::variant<Realization, Certificate>;

namespace detail {

inline std::optional<FiberNotDiagonal> fiber_not_diagonal(const FiniteMapping& m, std::size_t a0) {
  for (std::size_t x = 0; x < m.size(); ++x)
    for (std::size_t y = 0; y < m.size(); ++y)
      if (x != y && m.at(x, y) == a0) return FiberNotDiagonal{x, y};
  return std::nullopt;
}

inline RealizeResult realize(const FiniteMapping& m, RealizedKind kind) {
  if (auto a = find_asymmetry(m)) return Certificate{*a};
  const auto diag = diagonal_value(m);
  if (auto bad = std::get_if<NonConstantDiagonal>(&diag)) return Certificate{*bad};
  const std::size_t a0 = std::get<std::size_t>(diag);
  if (auto c = find_coherence_violation(m, a0)) return *c;
  if (kind == RealizedKind::Ultrametric)
    if (auto f = fiber_not_diagonal(m, a0)) return Certificate{*f};
  if (auto s = scalene_triple(m)) return Certificate{*s};
  auto order = minimal_order(m);
  if (auto cycle = std::get_if<UCycle>(&order)) return Certificate{std::move(*cycle)};
  const auto& poset = std::get<FinitePoset>(order);

  Realization r;
  r.points = m.points();
  r.value_labels = m.values();
  r.assignment = embed_ranks(linear_extension(poset), a0);
  r.kind = kind;
  r.matrix.assign(m.size(), std::vector<Rational>(m.size()));
  for (std::size_t x = 0; x < m.size(); ++x)
    for (std::size_t y = 0; y < m.size(); ++y) r.matrix[x][y] = r.assignment[m.at(x, y)];
  return r;
}

}  // namespace detail

/// Either a rational pseudoultrametric combinatorially similar to m (with
/// the identity on points) or the first failing certificate, checked in
/// the order: symmetry, constant diagonal, coherence, scalene triple,
/// antisymmetry of the closed u relation.
inline RealizeResult realize_pseudoultrametric(const FiniteMapping& m) {
  return detail::realize(m, RealizedKind::Pseudoultrametric);
}

/// As realize_pseudoultrametric, additionally refusing any off-diagonal
/// pair carrying the diagonal value (checked right after coherence).
inline RealizeResult realize_ultrametric(const FiniteMapping& m) {
  return detail::realize(m, RealizedKind::Ultrametric);
}

// ---------------------------------------------------------------------------
// Poset-valued validators

/// Why a mapping fails a poset-valued check. `points` holds the pair or
/// triple involved; `gamma` the poset element for the ultrametric-distance
/// implication.
struct QViolation {
  enum class Clause {
    Asymmetry,           // points = {x, y}
    DiagonalNotBottom,   // points = {x}
    BottomOffDiagonal,   // points = {x, y}, x != y
    NoIsoscelesOrder,    // points = {x1, x2, x3}
    StrongTriangle,      // points = {x, y, z}, gamma
  } clause;
  std::vector<std::size_t> points;
  std::optional<std::size_t> gamma;
  friend bool operator==(const QViolation&, const QViolation&) = default;
};

inline std::string clause_name(QViolation::Clause c) {
  switch (c) {
    case QViolation::Clause::Asymmetry: return "Asymmetry";
    case QViolation::Clause::DiagonalNotBottom: return "DiagonalNotBottom";
    case QViolation::Clause::BottomOffDiagonal: return "BottomOffDiagonal";
    case QViolation::Clause::NoIsoscelesOrder: return "NoIsoscelesOrder";
    case QViolation::Clause::StrongTriangle: return "StrongTriangle";
  }
  return "";
}

namespace detail {

inline std::size_t require_bottom(const FinitePoset& q) {
  auto b = smallest_element(q);
  if (!b) throw InputError("poset has no smallest element");
  return *b;
}

inline void check_embed(const FiniteMapping& m, const FinitePoset& q, const ValueMap& embed) {
  if (embed.size() != m.value_count()) throw InputError("value embedding does not cover the values");
  for (std::size_t e : embed)
    if (e >= q.size()) throw InputError("value embedding leaves the poset");
}

inline std::optional<QViolation> symmetric_bottom_diagonal(const FiniteMapping& m,
                                                           const ValueMap& embed, std::size_t q0) {
  const std::size_t n = m.size();
  for (std::size_t x = 0; x < n; ++x)
    for (std::size_t y = x + 1; y < n; ++y)
      if (embed[m.at(x, y)] != embed[m.at(y, x)])
        return QViolation{QViolation::Clause::Asymmetry, {x, y}, std::nullopt};
  for (std::size_t x = 0; x < n; ++x)
    if (embed[m.at(x, x)] != q0)
      return QViolation{QViolation::Clause::DiagonalNotBottom, {x}, std::nullopt};
  return std::nullopt;
}

inline std::optional<QViolation> bottom_off_diagonal(const FiniteMapping& m, const ValueMap& embed,
                                                     std::size_t q0) {
  for (std::size_t x = 0; x < m.size(); ++x)
    for (std::size_t y = 0; y < m.size(); ++y)
      if (x != y && embed[m.at(x, y)] == q0)
        return QViolation{QViolation::Clause::BottomOffDiagonal, {x, y}, std::nullopt};
  return std::nullopt;
}

}  // namespace detail

/// First violation of the poset-valued pseudoultrametric conditions, with m's
/// values sent into q by embed. Triples are scanned as x1 <= x2 <= x3 (the
/// condition is permutation invariant) and all six orderings are tried.
inline std::optional<QViolation> q_pseudoultrametric_violation(const FiniteMapping& m,
                                                               const FinitePoset& q,
                                                               const ValueMap& embed) {
  detail::check_embed(m, q, embed);
  const std::size_t q0 = detail::require_bottom(q);
  if (auto v = detail::symmetric_bottom_diagonal(m, embed, q0)) return v;
  const std::size_t n = m.size();
  auto d = [&](std::size_t x, std::size_t y) { return embed[m.at(x, y)]; };
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = a; b < n; ++b)
      for (std::size_t c = b; c < n; ++c) {
        std::array<std::size_t, 3> p{a, b, c};
        bool found = false;
        do {
          const auto [i1, i2, i3] = p;
          found = q.leq(d(i1, i3), d(i1, i2)) && d(i1, i2) == d(i2, i3);
        } while (!found && std::next_permutation(p.begin(), p.end()));
        if (!found) return QViolation{QViolation::Clause::NoIsoscelesOrder, {a, b, c}, std::nullopt};
      }
  return std::nullopt;
}

inline bool is_q_pseudoultrametric(const FiniteMapping& m, const FinitePoset& q, const ValueMap& embed) {
  return !q_pseudoultrametric_violation(m, q, embed).has_value();
}

inline std::optional<QViolation> q_ultrametric_violation(const FiniteMapping& m, const FinitePoset& q,
                                                         const ValueMap& embed) {
  if (auto v = q_pseudoultrametric_violation(m, q, embed)) return v;
  return detail::bottom_off_diagonal(m, embed, *smallest_element(q));
}

inline bool is_q_ultrametric(const FiniteMapping& m, const FinitePoset& q, const ValueMap& embed) {
  return !q_ultrametric_violation(m, q, embed).has_value();
}

/// First violation of the ultrametric-distance axioms: bottom exactly on
/// the diagonal, symmetry, and d(x,y) <= g, d(y,z) <= g implying d(x,z) <= g
/// for every element g of q.
inline std::optional<QViolation> ultrametric_distance_violation(const FiniteMapping& m,
                                                                const FinitePoset& q,
                                                                const ValueMap& embed) {
  detail::check_embed(m, q, embed);
  const std::size_t q0 = detail::require_bottom(q);
  if (auto v = detail::symmetric_bottom_diagonal(m, embed, q0)) return v;
  if (auto v = detail::bottom_off_diagonal(m, embed, q0)) return v;
  const std::size_t n = m.size();
  for (std::size_t x = 0; x < n; ++x)
    for (std::size_t y = 0; y < n; ++y)
      for (std::size_t z = 0; z < n; ++z) {
        const std::size_t xy = embed[m.at(x, y)], yz = embed[m.at(y, z)], xz = embed[m.at(x, z)];
        for (std::size_t g = 0; g < q.size(); ++g)
          if (q.leq(xy, g) && q.leq(yz, g) && !q.leq(xz, g))
            return QViolation{QViolation::Clause::StrongTriangle, {x, y, z}, g};
      }
  return std::nullopt;
}

inline bool is_ultrametric_distance(const FiniteMapping& m, const FinitePoset& q, const ValueMap& embed) {
  return !ultrametric_distance_violation(m, q, embed).has_value();
}

/// Embedding of m's values into q by label; throws if a label is missing.
inline ValueMap embed_by_label(const FiniteMapping& m, const FinitePoset& q) {
  ValueMap e;
  for (const auto& v : m.values()) {
    auto i = q.index_of(v);
    if (!i) throw InputError("value '" + v + "' is not an element of the poset");
    e.push_back(*i);
  }
  return e;
}

// ---------------------------------------------------------------------------
// Isotone transfer

/// Why f: q -> l fails to preserve (pseudo)ultrametrics.
struct PreservationFailure {
  enum class Reason { NotIsotone, BottomNotPreserved, NontrivialKernel } reason;
  std::size_t a = 0, b = 0;  // NotIsotone: a <= b in q; NontrivialKernel: a != q0 with f(a) = l0
  friend bool operator==(const PreservationFailure&, const PreservationFailure&) = default;
};

/// Checks isotony and f(q0) = l0; with `ultra` also that only q0 goes to l0.
inline std::optional<PreservationFailure> preservation_failure(const ValueMap& f, const FinitePoset& q,
                                                               const FinitePoset& l, bool ultra) {
  using R = PreservationFailure::Reason;
  const std::size_t q0 = detail::require_bottom(q), l0 = detail::require_bottom(l);
  if (auto v = isotone_violation(f, q, l)) return PreservationFailure{R::NotIsotone, v->first, v->second};
  if (f[q0] != l0) return PreservationFailure{R::BottomNotPreserved, q0, 0};
  if (ultra)
    for (std::size_t a = 0; a < q.size(); ++a)
      if (a != q0 && f[a] == l0) return PreservationFailure{R::NontrivialKernel, a, 0};
  return std::nullopt;
}

inline bool check_ultrametric_preserving(const ValueMap& f, const FinitePoset& q, const FinitePoset& l) {
  return !preservation_failure(f, q, l, true).has_value();
}

/// f o m, where m's value labels are elements of q. Throws unless f is
/// isotone and sends the bottom of q to the bottom of l.
inline FiniteMapping compose_isotone(const ValueMap& f, const FiniteMapping& m, const FinitePoset& q,
                                     const FinitePoset& l) {
  if (auto fail = preservation_failure(f, q, l, false)) {
    if (fail->reason == PreservationFailure::Reason::NotIsotone)
      throw InputError("compose_isotone: f is not isotone at <" + q.label(fail->a) + ", " +
                       q.label(fail->b) + ">");
    throw InputError("compose_isotone: f does not send the bottom of Q to the bottom of L");
  }
  const ValueMap embed = embed_by_label(m, q);
  std::vector<std::vector<std::string>> table(m.size());
  for (std::size_t x = 0; x < m.size(); ++x)
    for (std::size_t y = 0; y < m.size(); ++y) table[x].push_back(l.label(f[embed[m.at(x, y)]]));
  return FiniteMapping::from_labels(m.points(), table);
}

/// Two points at distance q1 (q1 must not be the bottom of q): a
/// Q-ultrametric whose image under f fails to be an L-ultrametric whenever
/// f(q1) is the bottom of l.
inline FiniteMapping two_point_ultrametric(const FinitePoset& q, std::size_t q1) {
  const std::size_t q0 = detail::require_bottom(q);
  if (q1 == q0 || q1 >= q.size()) throw InputError("two_point_ultrametric: q1 must be a non-bottom element");
  const std::string& b = q.label(q0);
  const std::string& t = q.label(q1);
  return FiniteMapping::from_labels({"x", "y"}, {{b, t}, {t, b}});
}

// ---------------------------------------------------------------------------
// Canonical chain ultrametric

struct ChainUltrametric {
  FiniteMapping mapping;
  FinitePoset order;
};

/// Points are the chain elements; d(p, p) = q0 and d(p, q) = max(p, q)
/// otherwise. Its range is the whole chain.
inline ChainUltrametric canonical_chain_ultrametric(const std::vector<std::string>& chain) {
  if (chain.empty()) throw InputError("chain must be nonempty");
  FinitePoset order = FinitePoset::chain(chain);
  const std::size_t k = chain.size();
  std::vector<std::vector<std::size_t>> table(k, std::vector<std::size_t>(k));
  for (std::size_t p = 0; p < k; ++p)
    for (std::size_t q = 0; q < k; ++q) table[p][q] = p == q ? 0 : std::max(p, q);
  return {FiniteMapping::validate(chain, chain, table), std::move(order)};
}

// ---------------------------------------------------------------------------
// Balls

struct Ball {
  std::vector<std::size_t> members;  // ascending
  Rational diameter;
  friend bool operator==(const Ball&, const Ball&) = default;
};

/// Every distinct closed ball {x : d(x, c) <= r} for c a point and r an
/// occurring distance, ordered by member list.
inline std::vector<Ball> closed_balls(const Realization& r) {
  const std::size_t n = r.matrix.size();
  std::set<std::vector<std::size_t>> seen;
  for (const auto& radius : r.distances())
    for (std::size_t c = 0; c < n; ++c) {
      std::vector<std::size_t> members;
      for (std::size_t x = 0; x < n; ++x)
        if (r.matrix[x][c] <= radius) members.push_back(x);
      seen.insert(std::move(members));
    }
  std::vector<Ball> balls;
  for (const auto& members : seen) {
    Rational diam = 0;
    for (std::size_t a : members)
      for (std::size_t b : members) diam = std::max(diam, r.matrix[a][b]);
    balls.push_back(Ball{members, diam});
  }
  return balls;
}

/// <i, j> (indices into r.distances()) is present iff some ball of diameter
/// distances()[i] is contained in some ball of diameter distances()[j].
inline Relation u_via_balls(const Realization& r) {
  const std::vector<Rational> d = r.distances();
  auto index = [&](const Rational& q) {
    return static_cast<std::size_t>(std::lower_bound(d.begin(), d.end(), q) - d.begin());
  };
  const std::vector<Ball> balls = closed_balls(r);
  Relation u(d.size());
  for (const auto& b1 : balls)
    for (const auto& b2 : balls)
      if (std::includes(b2.members.begin(), b2.members.end(), b1.members.begin(), b1.members.end()))
        u.insert(index(b1.diameter), index(b2.diameter));
  return u;
}

// ---------------------------------------------------------------------------
// Aggregate analysis

struct AnalysisOptions {
  bool full = false;
  std::size_t max_u_values = 4096;  // u relation is skipped above this many values
};

/// Stage results of the realization pipeline. Unset optionals mean the
/// stage was not reached (or, in full mode, is undefined for this input).
struct AnalysisReport {
  bool full = false;
  std::optional<Asymmetry> asymmetry;
  std::optional<std::variant<std::size_t, NonConstantDiagonal>> diagonal;
  bool coherence_checked = false;
  std::optional<Certificate> coherence_violation;
  bool scalene_checked = false;
  std::optional<ScaleneTriple> scalene;
  std::vector<ScaleneTriple> all_scalene;  // full mode only
  std::optional<Relation> u;
  std::optional<std::variant<FinitePoset, UCycle>> minimal;
  RealizeResult pseudo;
  RealizeResult ultra;

  bool pseudo_yes() const { return std::holds_alternative<Realization>(pseudo); }
  bool ultra_yes() const { return std::holds_alternative<Realization>(ultra); }
};

inline AnalysisReport analyze(const FiniteMapping& m, const AnalysisOptions& opt = {}) {
  AnalysisReport rep;
  rep.full = opt.full;
  rep.pseudo = realize_pseudoultrametric(m);
  rep.ultra = realize_ultrametric(m);

  rep.asymmetry = find_asymmetry(m);
  bool reached = !rep.asymmetry;
  if (reached || opt.full) {
    rep.diagonal = diagonal_value(m);
    const std::size_t* a0 = std::get_if<std::size_t>(&*rep.diagonal);
    reached = reached && a0;
    if (a0 && (reached || opt.full)) {
      rep.coherence_checked = true;
      rep.coherence_violation = find_coherence_violation(m, *a0);
      reached = reached && !rep.coherence_violation;
    }
  }
  if (reached || opt.full) {
    rep.scalene_checked = true;
    rep.scalene = scalene_triple(m);
    if (opt.full) rep.all_scalene = all_scalene_triples(m);
    reached = reached && !rep.scalene;
  }
  if ((reached || opt.full) && !rep.asymmetry && m.value_count() <= opt.max_u_values) {
    rep.u = u_relation(m);
    rep.minimal = minimal_order(m);
  }
  return rep;
}

}  // namespace ultrasim

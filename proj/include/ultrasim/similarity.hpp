#pragma once

/** \file
 * \brief Combinatorial and weak similarity between two finite mappings.
 *
 * A witness for a ~ b is a point bijection g from b's points to a's points
 * and a value bijection f from a's values to b's values with
 * b(x, y) == f(a(g(x), g(y))) for all x, y. The search assigns g(0), g(1),
 * ... in increasing candidate order, so the first witness found is the
 * lexicographically least one.
 */

#include <algorithm>
#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ultrasim/decision.hpp"
#include "ultrasim/error.hpp"
#include "ultrasim/mapping.hpp"
#include "ultrasim/orders.hpp"

namespace ultrasim {

enum class SimilarityKind { Combinatorial, Weak };

inline std::string kind_name(SimilarityKind k) {
  return k == SimilarityKind::Weak ? "weak" : "combinatorial";
}

struct SimilarityWitness {
  ValueMap g;  // b-point -> a-point
  ValueMap f;  // a-value -> b-value
  SimilarityKind kind = SimilarityKind::Combinatorial;
  friend bool operator==(const SimilarityWitness&, const SimilarityWitness&) = default;
};

enum class SearchStatus { Similar, NotSimilar, BudgetExceeded };

struct SimilarityResult {
  SearchStatus status = SearchStatus::NotSimilar;
  std::optional<SimilarityWitness> witness;
  std::size_t nodes = 0;  // search nodes visited
};

inline constexpr std::size_t kDefaultSearchBudget = 10'000'000;

/// Checks the defining equation pointwise, bijectivity of g and f, and for
/// weak witnesses that f is an order isomorphism between the given posets.
inline bool witness_is_valid(const SimilarityWitness& w, const FiniteMapping& a, const FiniteMapping& b,
                             const FinitePoset* pa = nullptr, const FinitePoset* pb = nullptr) {
  const std::size_t n = a.size();
  if (b.size() != n || w.g.size() != n || w.f.size() != a.value_count() ||
      a.value_count() != b.value_count())
    return false;
  std::vector<bool> hit_point(n, false), hit_value(b.value_count(), false);
  for (std::size_t x : w.g) {
    if (x >= n || hit_point[x]) return false;
    hit_point[x] = true;
  }
  for (std::size_t v : w.f) {
    if (v >= b.value_count() || hit_value[v]) return false;
    hit_value[v] = true;
  }
  for (std::size_t x = 0; x < n; ++x)
    for (std::size_t y = 0; y < n; ++y)
      if (b.at(x, y) != w.f[a.at(w.g[x], w.g[y])]) return false;
  if (w.kind == SimilarityKind::Weak) {
    if (!pa || !pb) return false;
    const ValueMap ea = embed_by_label(a, *pa), eb = embed_by_label(b, *pb);
    for (std::size_t u = 0; u < w.f.size(); ++u)
      for (std::size_t v = 0; v < w.f.size(); ++v)
        if (pa->leq(ea[u], ea[v]) != pb->leq(eb[w.f[u]], eb[w.f[v]])) return false;
  }
  return true;
}

namespace detail {

/// Point colors that any similarity must preserve, computed jointly for both
/// mappings so equal ids mean equal invariants. Starts from the size of the
/// fiber of each entry (invariant under any value bijection) and refines by
/// neighbour colors until the class count stops growing.
inline std::pair<std::vector<std::size_t>, std::vector<std::size_t>> joint_colors(
    const FiniteMapping& a, const FiniteMapping& b) {
  auto fiber_sizes = [](const FiniteMapping& m) {
    std::vector<std::size_t> s(m.value_count(), 0);
    for (std::size_t x = 0; x < m.size(); ++x)
      for (std::size_t y = 0; y < m.size(); ++y) ++s[m.at(x, y)];
    return s;
  };
  const auto sa = fiber_sizes(a), sb = fiber_sizes(b);
  const std::size_t n = a.size();
  std::vector<std::size_t> ca(n, 0), cb(n, 0);
  std::size_t classes = 1;
  for (;;) {
    std::map<std::vector<std::size_t>, std::size_t> ids;
    auto signature = [&](const FiniteMapping& m, const std::vector<std::size_t>& sz,
                         const std::vector<std::size_t>& c, std::size_t x) {
      std::vector<std::array<std::size_t, 3>> nb;
      for (std::size_t y = 0; y < n; ++y)
        if (y != x) nb.push_back({sz[m.at(x, y)], sz[m.at(y, x)], c[y]});
      std::sort(nb.begin(), nb.end());
      std::vector<std::size_t> sig{c[x], sz[m.at(x, x)]};
      for (const auto& t : nb) sig.insert(sig.end(), t.begin(), t.end());
      return sig;
    };
    std::vector<std::size_t> na(n), nbc(n);
    for (std::size_t x = 0; x < n; ++x)
      na[x] = ids.try_emplace(signature(a, sa, ca, x), ids.size()).first->second;
    for (std::size_t x = 0; x < n; ++x)
      nbc[x] = ids.try_emplace(signature(b, sb, cb, x), ids.size()).first->second;
    ca = std::move(na);
    cb = std::move(nbc);
    if (ids.size() == classes) break;
    classes = ids.size();
  }
  return {std::move(ca), std::move(cb)};
}

class SimilaritySearch {
 public:
  SimilaritySearch(const FiniteMapping& a, const FiniteMapping& b, std::size_t budget,
                   const FinitePoset* pa, const FinitePoset* pb)
      : a_(a), b_(b), budget_(budget), pa_(pa), pb_(pb) {}

  SimilarityResult run() {
    SimilarityResult res;
    const std::size_t n = a_.size();
    if (b_.size() != n || a_.value_count() != b_.value_count()) return res;
    if (!same_fiber_profile()) return res;
    if (pa_) {
      ea_ = embed_by_label(a_, *pa_);
      eb_ = embed_by_label(b_, *pb_);
    }
    auto [ca, cb] = joint_colors(a_, b_);
    std::vector<std::size_t> ha = ca, hb = cb;
    std::sort(ha.begin(), ha.end());
    std::sort(hb.begin(), hb.end());
    if (ha != hb) return res;
    ca_ = std::move(ca);
    cb_ = std::move(cb);

    g_.assign(n, kUnset);
    used_.assign(n, false);
    f_.assign(a_.value_count(), kUnset);
    finv_.assign(b_.value_count(), kUnset);
    const bool found = extend(0);
    res.nodes = nodes_;
    if (found) {
      res.status = SearchStatus::Similar;
      res.witness = SimilarityWitness{g_, f_, pa_ ? SimilarityKind::Weak : SimilarityKind::Combinatorial};
    } else if (exhausted_) {
      res.status = SearchStatus::BudgetExceeded;
    }
    return res;
  }

 private:
  static constexpr std::size_t kUnset = static_cast<std::size_t>(-1);

  bool same_fiber_profile() const {
    auto profile = [](const FiniteMapping& m) {
      std::vector<std::size_t> s(m.value_count(), 0);
      for (std::size_t x = 0; x < m.size(); ++x)
        for (std::size_t y = 0; y < m.size(); ++y) ++s[m.at(x, y)];
      std::sort(s.begin(), s.end());
      return s;
    };
    return profile(a_) == profile(b_);
  }

  // Binds f(u) = v, recording the binding in trail. False on conflict with an
  // earlier binding or, for weak search, with the orders.
  bool bind(std::size_t u, std::size_t v, std::vector<std::size_t>& trail) {
    if (f_[u] != kUnset) return f_[u] == v;
    if (finv_[v] != kUnset) return false;
    if (pa_) {
      for (std::size_t u2 = 0; u2 < f_.size(); ++u2) {
        if (f_[u2] == kUnset) continue;
        const std::size_t v2 = f_[u2];
        if (pa_->leq(ea_[u], ea_[u2]) != pb_->leq(eb_[v], eb_[v2])) return false;
        if (pa_->leq(ea_[u2], ea_[u]) != pb_->leq(eb_[v2], eb_[v])) return false;
      }
    }
    f_[u] = v;
    finv_[v] = u;
    trail.push_back(u);
    return true;
  }

  void unbind(const std::vector<std::size_t>& trail) {
    for (std::size_t u : trail) {
      finv_[f_[u]] = kUnset;
      f_[u] = kUnset;
    }
  }

  bool extend(std::size_t y) {
    if (y == g_.size()) return true;
    for (std::size_t x = 0; x < g_.size(); ++x) {
      if (used_[x] || ca_[x] != cb_[y]) continue;
      if (++nodes_ > budget_) {
        exhausted_ = true;
        return false;
      }
      g_[y] = x;
      std::vector<std::size_t> trail;
      bool ok = true;
      for (std::size_t y2 = 0; y2 <= y && ok; ++y2)
        ok = bind(a_.at(x, g_[y2]), b_.at(y, y2), trail) && bind(a_.at(g_[y2], x), b_.at(y2, y), trail);
      if (ok) {
        used_[x] = true;
        if (extend(y + 1)) return true;
        used_[x] = false;
      }
      unbind(trail);
      g_[y] = kUnset;
      if (exhausted_) return false;
    }
    return false;
  }

  const FiniteMapping& a_;
  const FiniteMapping& b_;
  std::size_t budget_;
  const FinitePoset* pa_;
  const FinitePoset* pb_;
  ValueMap ea_, eb_;
  std::vector<std::size_t> ca_, cb_;
  std::vector<std::size_t> g_, f_, finv_;
  std::vector<bool> used_;
  std::size_t nodes_ = 0;
  bool exhausted_ = false;
};

}  // namespace detail

/// Decides whether a and b are combinatorially similar. BudgetExceeded means
/// the node cap was hit before the search could conclude either way.
inline SimilarityResult combinatorially_similar(const FiniteMapping& a, const FiniteMapping& b,
                                                std::size_t budget = kDefaultSearchBudget) {
  return detail::SimilaritySearch(a, b, budget, nullptr, nullptr).run();
}

/// As combinatorially_similar, with f also an order isomorphism from pa to
/// pb. Each poset must contain every value label of its mapping.
inline SimilarityResult weakly_similar(const FiniteMapping& a, const FinitePoset& pa,
                                       const FiniteMapping& b, const FinitePoset& pb,
                                       std::size_t budget = kDefaultSearchBudget) {
  embed_by_label(a, pa);
  embed_by_label(b, pb);
  return detail::SimilaritySearch(a, b, budget, &pa, &pb).run();
}

struct CoincidenceReport {
  FinitePoset order_a, order_b;
  SimilarityResult combinatorial, weak;
  bool agree() const {
    return combinatorial.status != SearchStatus::BudgetExceeded &&
           weak.status != SearchStatus::BudgetExceeded && combinatorial.status == weak.status;
  }
};

/// Runs both deciders with each mapping's minimal order attached. Throws if
/// either mapping has no minimal order or is not pseudoultrametric for it.
inline CoincidenceReport similarity_coincidence_check(const FiniteMapping& a, const FiniteMapping& b,
                                                      std::size_t budget = kDefaultSearchBudget) {
  auto order_of = [](const FiniteMapping& m, const char* which) {
    auto mo = minimal_order(m);
    if (!std::holds_alternative<FinitePoset>(mo))
      throw InputError(std::string("mapping ") + which + " has no minimal order");
    FinitePoset p = std::get<FinitePoset>(std::move(mo));
    if (!is_q_pseudoultrametric(m, p, embed_by_label(m, p)))
      throw InputError(std::string("mapping ") + which + " is not pseudoultrametric for its minimal order");
    return p;
  };
  CoincidenceReport rep{order_of(a, "A"), order_of(b, "B"), {}, {}};
  rep.combinatorial = combinatorially_similar(a, b, budget);
  rep.weak = weakly_similar(a, rep.order_a, b, rep.order_b, budget);
  return rep;
}

}  // namespace ultrasim

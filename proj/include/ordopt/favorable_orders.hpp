#pragma once

// Orders an expression can deliver more cheaply than by sorting its
// unordered result, approximated bottom-up (afm) or computed exactly by
// exhaustive costing on small inputs.

#include <cstddef>
#include <unordered_map>
#include <vector>

#include "ordopt/catalog.hpp"
#include "ordopt/logical_expr.hpp"
#include "ordopt/oracle.hpp"

namespace ordopt {

/// Insertion-ordered set of non-empty orders. Equality ignores insertion order.
class FavorableOrderSet {
 public:
  using const_iterator = std::vector<SortOrder>::const_iterator;

  FavorableOrderSet() = default;
  FavorableOrderSet(std::initializer_list<SortOrder> orders);

  /// Ignores the empty order and exact duplicates; returns whether it was added.
  bool insert(SortOrder o);
  bool contains(const SortOrder& o) const;

  std::size_t size() const { return orders_.size(); }
  bool empty() const { return orders_.empty(); }
  const_iterator begin() const { return orders_.begin(); }
  const_iterator end() const { return orders_.end(); }
  const std::vector<SortOrder>& orders() const { return orders_; }

  /// Members in lexicographic order.
  std::vector<SortOrder> sorted() const;

  friend bool operator==(const FavorableOrderSet& a, const FavorableOrderSet& b) { return a.sorted() == b.sorted(); }

 private:
  std::vector<SortOrder> orders_;
};

/// Sets larger than this are reported by explain-afm.
inline constexpr std::size_t kLargeFavorableSet = 64;

/// afm(e) for every node under a query, cached per node.
class FavorableOrders {
 public:
  FavorableOrders(const Catalog& catalog, AttrSet query_attrs)
      : catalog_(&catalog), query_attrs_(std::move(query_attrs)) {}

  const FavorableOrderSet& afm(const LogicalExpr& e);

 private:
  FavorableOrderSet compute(const LogicalExpr& e);

  const Catalog* catalog_;
  AttrSet query_attrs_;
  std::unordered_map<const LogicalExpr*, FavorableOrderSet> cache_;
};

/// {o ∧ s : o in set} without the empty order.
FavorableOrderSet afm_wrt(const FavorableOrderSet& set, const AttrSet& s);

/// Minimal favorable orders from exhaustive costing. Enumerates every order
/// over every subset of schema(e); throws TooLarge past guard.max_attrs.
FavorableOrderSet exact_ford_min(const LogicalExpr& e, BruteForcePlanner& planner);

}  // namespace ordopt

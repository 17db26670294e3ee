#pragma once

// Binary trees (or forests) whose nodes carry attribute sets, and the
// prefix-sharing benefit of an order assignment over them.

#include <cstddef>
#include <vector>

#include "ordopt/order.hpp"

namespace ordopt {

struct LabeledTree {
  std::vector<AttrSet> sets;
  /// parent[i] < 0 marks a root.
  std::vector<int> parent;

  std::size_t size() const { return sets.size(); }
  std::vector<std::vector<int>> children() const;

  /// Throws std::invalid_argument on a cycle, a bad parent index or a node
  /// with more than two children.
  void validate() const;

  /// A path v_0 - v_1 - ... - v_{n-1}.
  static LabeledTree path(std::vector<AttrSet> sets);
};

/// One permutation per node.
using OrderAssignment = std::vector<SortOrder>;

/// Sum over edges of |lcp(p_child, p_parent)|.
int benefit(const LabeledTree& t, const OrderAssignment& a);

}  // namespace ordopt

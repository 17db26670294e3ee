#pragma once

// Second-phase reworking of merge-join orders so that adjacent joins share
// longer prefixes.

#include <optional>
#include <vector>

#include "ordopt/labeled_tree.hpp"
#include "ordopt/optimizer.hpp"
#include "ordopt/physical_plan.hpp"

namespace ordopt {

/// Exact optimum on a path v_0 - ... - v_{n-1}.
OrderAssignment path_order(const std::vector<AttrSet>& sets);

/// Exact on chains. Otherwise an odd/even edge-level split with path_order on
/// each class, which keeps at least half the optimum.
OrderAssignment tree_approx(const LabeledTree& t);

/// Merge-join nodes of a plan and the tree they form. Two joins are adjacent
/// when only filters, projections, sorts and sort group-bys lie between them.
struct JoinTree {
  std::vector<const PlanNode*> joins;
  LabeledTree tree;  ///< sets hold each join's merge order attributes
};
JoinTree join_tree(const PlanNode& plan);

/// Sum of |lcp| between the merge orders of adjacent joins.
int join_order_benefit(const PlanNode& plan);

struct RefineResult {
  PlanPtr plan;
  bool accepted = false;
  int benefit_before = 0;
  int benefit_after = 0;
  double cost_before = 0.0;
  double cost_after = 0.0;
};

/// Reworks the free attributes of every merge join, re-plans with those orders
/// imposed and keeps the result only if it is no more expensive.
RefineResult refine_plan(const PlanPtr& plan, const LogicalExpr& root, const SortOrder& required,
                         Optimizer& optimizer);

struct QueryPlan {
  PlanPtr plan;
  std::optional<RefineResult> refine;
};

/// Phase-1 search under `heuristic`, followed by refine_plan when `refine`.
QueryPlan plan_query(const Catalog& catalog, const CostParams& params, const QuerySpec& query, Heuristic heuristic,
                     bool refine);

}  // namespace ordopt

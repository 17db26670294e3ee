#pragma once

// Memoizing top-down search over (expression, required order) goals.

#include <functional>
#include <map>
#include <string_view>
#include <utility>
#include <vector>

#include "ordopt/catalog.hpp"
#include "ordopt/cost_model.hpp"
#include "ordopt/favorable_orders.hpp"
#include "ordopt/logical_expr.hpp"
#include "ordopt/oracle.hpp"
#include "ordopt/physical_plan.hpp"
#include "ordopt/stats.hpp"

namespace ordopt {

/// How a merge join or sort group-by picks the permutations it tries.
enum class Heuristic { arbitrary, postgres, favorable, exhaustive };

std::string_view heuristic_name(Heuristic h);
/// Throws ConfigError for an unknown name.
Heuristic parse_heuristic(std::string_view name);

/// I(e, o) from the inputs' favorable orders. For a group-by pass an empty
/// `right`.
std::vector<SortOrder> interesting_orders(const FavorableOrderSet& left, const FavorableOrderSet& right,
                                          const AttrSet& s, const SortOrder& o);

using FavorableSource = std::function<FavorableOrderSet(const LogicalExpr&)>;

class Optimizer {
 public:
  Optimizer(const Catalog& catalog, CostParams params, AttrSet query_attrs, Heuristic heuristic = Heuristic::favorable,
            OracleGuard guard = OracleGuard::from_env());

  /// Replaces afm() as the source of input favorable orders.
  void set_favorable_source(FavorableSource source);
  /// Restricts a join or group-by to one input order.
  void force_order(const LogicalExpr& node, SortOrder order);
  const std::map<const LogicalExpr*, SortOrder>& forced_orders() const { return forced_; }

  /// Best plan for (e, o). Throws Unsatisfiable when o is not over schema(e).
  PlanPtr optimize(const LogicalExpr& e, const SortOrder& o);
  PlanPtr optimize(const QuerySpec& q) { return optimize(*q.root, q.required_output_order); }

  /// Input orders tried for a join or group-by node under goal order `o`.
  std::vector<SortOrder> candidate_orders(const LogicalExpr& e, const SortOrder& o);

  Heuristic heuristic() const { return heuristic_; }
  const CostParams& params() const { return params_; }
  const Catalog& catalog() const { return *catalog_; }
  const AttrSet& query_attrs() const { return query_attrs_; }
  Statistics& stats() { return stats_; }
  FavorableOrders& favorable() { return favorable_; }
  std::size_t memo_size() const { return memo_.size(); }

 private:
  std::vector<PlanPtr> natives(const LogicalExpr& e, const SortOrder& o);
  PlanPtr enforce(const LogicalExpr& e, PlanPtr plan, const SortOrder& o);
  std::shared_ptr<PlanNode> make_node(PhysOp op, const LogicalExpr& e, SortOrder produced, double node_cost,
                    std::vector<PlanPtr> children);

  const Catalog* catalog_;
  CostParams params_;
  AttrSet query_attrs_;
  Heuristic heuristic_;
  OracleGuard guard_;
  Statistics stats_;
  FavorableOrders favorable_;
  FavorableSource source_;
  std::map<const LogicalExpr*, SortOrder> forced_;
  std::map<std::pair<const LogicalExpr*, SortOrder>, PlanPtr> memo_;
};

/// True if `a` should replace `b` as a goal's best plan: cheaper beyond a
/// relative 1e-9, else smaller produced order, else fewer nodes.
bool better_plan(const PlanNode& a, const PlanNode& b);

}  // namespace ordopt

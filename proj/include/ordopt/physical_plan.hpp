#pragma once

// Physical operator trees produced by the optimizer.

#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "ordopt/catalog.hpp"
#include "ordopt/logical_expr.hpp"

namespace ordopt {

enum class PhysOp {
  table_scan,
  covering_index_scan,
  filter,
  project,
  full_sort,
  partial_sort,
  merge_join,
  sort_group_by,
  hash_join,
  hash_group_by,
};

std::string_view phys_op_name(PhysOp op);
/// Throws ValidationError for an unknown name.
PhysOp parse_phys_op(std::string_view name, const std::string& path = "$");

struct PlanNode;
using PlanPtr = std::shared_ptr<const PlanNode>;

struct PlanNode {
  PhysOp op = PhysOp::table_scan;
  /// Logical node this operator evaluates; enforcers share their child's.
  const LogicalExpr* expr = nullptr;
  SortOrder produced_order;
  /// Sorts: the known prefix of the input. Merge joins and sort group-bys:
  /// the order requested from the inputs.
  SortOrder input_order;
  std::optional<IndexDef> index;
  double node_cost = 0.0;
  double total_cost = 0.0;
  double est_rows = 0.0;
  double est_blocks = 0.0;
  std::vector<PlanPtr> children;

  bool is_sort() const { return op == PhysOp::full_sort || op == PhysOp::partial_sort; }
};

std::size_t node_count(const PlanNode& p);

/// All nodes in pre-order.
std::vector<const PlanNode*> plan_nodes(const PlanNode& p);

/// Indented tree, one operator per line.
std::string to_text(const PlanNode& p);

/// `expr_ids` maps logical nodes to their pre-order position.
nlohmann::json to_json(const PlanNode& p, const std::vector<const LogicalExpr*>& expr_ids);
/// Inverse of to_json; node ids are resolved against `expr_ids`.
PlanPtr plan_from_json(const nlohmann::json& j, const std::vector<const LogicalExpr*>& expr_ids,
                       const std::string& path = "$");

}  // namespace ordopt

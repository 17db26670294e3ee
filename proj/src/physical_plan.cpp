#include "ordopt/physical_plan.hpp"

#include <algorithm>
#include <functional>

#include <fmt/format.h>

#include "ordopt/error.hpp"
#include "ordopt/json_util.hpp"

namespace ordopt {

std::string_view phys_op_name(PhysOp op) {
  switch (op) {
    case PhysOp::table_scan: return "TableScan";
    case PhysOp::covering_index_scan: return "CoveringIndexScan";
    case PhysOp::filter: return "Filter";
    case PhysOp::project: return "Project";
    case PhysOp::full_sort: return "FullSort";
    case PhysOp::partial_sort: return "PartialSort";
    case PhysOp::merge_join: return "MergeJoin";
    case PhysOp::sort_group_by: return "SortGroupBy";
    case PhysOp::hash_join: return "HashJoin";
    case PhysOp::hash_group_by: return "HashGroupBy";
  }
  return "?";
}

PhysOp parse_phys_op(std::string_view name, const std::string& path) {
  for (int i = 0; i <= static_cast<int>(PhysOp::hash_group_by); ++i) {
    if (phys_op_name(static_cast<PhysOp>(i)) == name) return static_cast<PhysOp>(i);
  }
  throw ValidationError(path, "unknown operator '" + std::string(name) + "'");
}

std::size_t node_count(const PlanNode& p) {
  std::size_t n = 1;
  for (const auto& c : p.children) n += node_count(*c);
  return n;
}

std::vector<const PlanNode*> plan_nodes(const PlanNode& p) {
  std::vector<const PlanNode*> out;
  std::function<void(const PlanNode&)> walk = [&](const PlanNode& n) {
    out.push_back(&n);
    for (const auto& c : n.children) walk(*c);
  };
  walk(p);
  return out;
}

namespace {

std::string detail(const PlanNode& p) {
  switch (p.op) {
    case PhysOp::table_scan:
      return p.expr ? p.expr->as<ScanOp>().alias : "";
    case PhysOp::covering_index_scan:
      return fmt::format("{} key={}", p.expr ? p.expr->as<ScanOp>().alias : "",
                         p.index ? to_string(p.index->key_order) : "");
    case PhysOp::partial_sort:
      return fmt::format("{} -> {}", to_string(p.input_order), to_string(p.produced_order));
    case PhysOp::merge_join:
    case PhysOp::sort_group_by:
      return fmt::format("on {}", to_string(p.input_order));
    default:
      return "";
  }
}

void render(const PlanNode& p, int depth, std::string& out) {
  const std::string d = detail(p);
  out += fmt::format("{:{}}{}{}{} order={} cost={:.6g} total={:.6g} rows={:.6g} blocks={:.6g}\n", "", depth * 2,
                     phys_op_name(p.op), d.empty() ? "" : " ", d, to_string(p.produced_order), p.node_cost,
                     p.total_cost, p.est_rows, p.est_blocks);
  for (const auto& c : p.children) render(*c, depth + 1, out);
}

}  // namespace

std::string to_text(const PlanNode& p) {
  std::string out;
  render(p, 0, out);
  return out;
}

nlohmann::json to_json(const PlanNode& p, const std::vector<const LogicalExpr*>& expr_ids) {
  nlohmann::json j = {{"op", phys_op_name(p.op)},
                      {"produced_order", p.produced_order.attributes()},
                      {"input_order", p.input_order.attributes()},
                      {"node_cost", p.node_cost},
                      {"total_cost", p.total_cost},
                      {"est_rows", p.est_rows},
                      {"est_blocks", p.est_blocks}};
  auto it = std::find(expr_ids.begin(), expr_ids.end(), p.expr);
  j["expr_id"] = it == expr_ids.end() ? -1 : static_cast<int>(it - expr_ids.begin());
  if (p.index) {
    j["index"] = {{"relation", p.index->relation},
                  {"key_order", p.index->key_order.attributes()},
                  {"included_columns",
                   std::vector<Attribute>(p.index->included_columns.begin(), p.index->included_columns.end())}};
  }
  j["children"] = nlohmann::json::array();
  for (const auto& c : p.children) j["children"].push_back(to_json(*c, expr_ids));
  return j;
}

PlanPtr plan_from_json(const nlohmann::json& j, const std::vector<const LogicalExpr*>& expr_ids,
                       const std::string& path) {
  json_util::require_object(j, path);
  json_util::reject_unknown(j, path,
                            {"op", "produced_order", "input_order", "node_cost", "total_cost", "est_rows",
                             "est_blocks", "expr_id", "index", "children"});
  auto n = std::make_shared<PlanNode>();
  n->op = parse_phys_op(json_util::get_string(j, path, "op"), path + ".op");
  const auto id = json_util::get_int(j, path, "expr_id");
  if (id < 0 || id >= static_cast<std::int64_t>(expr_ids.size())) {
    throw ValidationError(path + ".expr_id", "does not name a node of the query");
  }
  n->expr = expr_ids[static_cast<std::size_t>(id)];
  n->produced_order = json_util::get_order(j, path, "produced_order");
  n->input_order = json_util::get_order(j, path, "input_order");
  n->node_cost = json_util::get_number(j, path, "node_cost");
  n->total_cost = json_util::get_number(j, path, "total_cost");
  n->est_rows = json_util::get_number(j, path, "est_rows");
  n->est_blocks = json_util::get_number(j, path, "est_blocks");
  if (j.contains("index")) {
    const auto& x = j.at("index");
    const std::string ip = path + ".index";
    json_util::require_object(x, ip);
    IndexDef idx;
    idx.relation = json_util::get_string(x, ip, "relation");
    idx.key_order = json_util::get_order(x, ip, "key_order");
    idx.included_columns = json_util::get_attr_set(x, ip, "included_columns");
    n->index = idx;
  }
  const auto& kids = json_util::required(j, path, "children");
  if (!kids.is_array()) throw ValidationError(path + ".children", "expected an array");
  for (std::size_t i = 0; i < kids.size(); ++i) {
    n->children.push_back(plan_from_json(kids[i], expr_ids, path + ".children[" + std::to_string(i) + "]"));
  }
  return n;
}

}  // namespace ordopt

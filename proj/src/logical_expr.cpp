#include "ordopt/logical_expr.hpp"

#include <functional>

#include "ordopt/error.hpp"
#include "ordopt/json_util.hpp"

namespace ordopt {

using nlohmann::json;

bool operator==(const LogicalExpr& a, const LogicalExpr& b) {
  if (a.op_ != b.op_ || a.inputs_.size() != b.inputs_.size()) return false;
  for (std::size_t i = 0; i < a.inputs_.size(); ++i) {
    if (!(*a.inputs_[i] == *b.inputs_[i])) return false;
  }
  return true;
}

std::string_view kind_name(ExprKind kind) {
  switch (kind) {
    case ExprKind::scan: return "scan";
    case ExprKind::select: return "select";
    case ExprKind::project: return "project";
    case ExprKind::join: return "join";
    case ExprKind::group_by: return "groupby";
  }
  return "?";
}

ExprPtr make_scan(const CatalogRelation& rel, std::string alias, std::map<Attribute, Attribute> renames,
                  const std::string& path) {
  if (alias.empty()) alias = rel.name;
  ScanOp op{rel.name, alias, {}};
  AttrSet schema;
  for (const auto& [bare, name] : renames) {
    if (!rel.columns.contains(bare)) throw ValidationError(path, "rename of unknown column '" + bare + "'");
  }
  for (const auto& col : rel.columns) {
    auto it = renames.find(col);
    Attribute name = it != renames.end() ? it->second : alias + "." + col;
    if (!schema.insert(name)) throw ValidationError(path, "scan exposes '" + name + "' twice");
    op.exposed.emplace(col, std::move(name));
  }
  return std::make_shared<const LogicalExpr>(std::move(op), std::vector<ExprPtr>{}, std::move(schema));
}

ExprPtr make_select(ExprPtr input, double selectivity, AttrSet touched, const std::string& path) {
  if (!(selectivity > 0.0 && selectivity <= 1.0)) throw ValidationError(path, "selectivity must lie in (0, 1]");
  if (!touched.is_subset_of(input->schema())) {
    throw ValidationError(path, "select touches attributes outside its input: " + to_string(touched - input->schema()));
  }
  AttrSet schema = input->schema();
  return std::make_shared<const LogicalExpr>(SelectOp{selectivity, std::move(touched)},
                                             std::vector<ExprPtr>{std::move(input)}, std::move(schema));
}

ExprPtr make_project(ExprPtr input, AttrSet cols, const std::string& path) {
  if (cols.empty()) throw ValidationError(path, "project needs at least one column");
  if (!cols.is_subset_of(input->schema())) {
    throw ValidationError(path, "project columns outside its input: " + to_string(cols - input->schema()));
  }
  AttrSet schema = cols;
  return std::make_shared<const LogicalExpr>(ProjectOp{std::move(cols)}, std::vector<ExprPtr>{std::move(input)},
                                             std::move(schema));
}

ExprPtr make_join(ExprPtr left, ExprPtr right, AttrSet join_attrs, bool full_outer, const std::string& path) {
  if (join_attrs.empty()) throw ValidationError(path, "join needs at least one equated attribute pair");
  const AttrSet common = left->schema() & right->schema();
  if (!join_attrs.is_subset_of(common)) {
    throw ValidationError(path, "join attributes missing from an input: " + to_string(join_attrs - common));
  }
  if (common != join_attrs) {
    throw ValidationError(path, "inputs share attributes that are not equated: " + to_string(common - join_attrs));
  }
  AttrSet schema = left->schema() | right->schema();
  return std::make_shared<const LogicalExpr>(JoinOp{std::move(join_attrs), full_outer},
                                             std::vector<ExprPtr>{std::move(left), std::move(right)},
                                             std::move(schema));
}

ExprPtr make_group_by(ExprPtr input, AttrSet keys, std::vector<Attribute> aggregates, double agg_width_bytes,
                      const std::string& path) {
  if (keys.empty()) throw ValidationError(path, "group-by needs at least one key");
  if (!keys.is_subset_of(input->schema())) {
    throw ValidationError(path, "group-by keys outside its input: " + to_string(keys - input->schema()));
  }
  if (agg_width_bytes < 0) throw ValidationError(path, "agg_width_bytes must be non-negative");
  AttrSet schema = keys;
  for (const auto& a : aggregates) {
    if (a.empty() || !schema.insert(a)) throw ValidationError(path, "aggregate name '" + a + "' is empty or taken");
  }
  return std::make_shared<const LogicalExpr>(GroupByOp{std::move(keys), std::move(aggregates), agg_width_bytes},
                                             std::vector<ExprPtr>{std::move(input)}, std::move(schema));
}

SortOrder qualify(const ScanOp& scan, const SortOrder& bare) {
  std::vector<Attribute> names;
  names.reserve(bare.size());
  for (const auto& a : bare) names.push_back(scan.exposed.at(a));
  return SortOrder(std::move(names));
}

std::vector<IndexDef> scan_covering_indices(const Catalog& catalog, const ScanOp& scan, const AttrSet& query_attrs) {
  AttrSet needed;
  for (const auto& [bare, name] : scan.exposed) {
    if (query_attrs.contains(name)) needed.insert(bare);
  }
  return covering_indices(catalog, scan.relation, needed);
}

QuerySpec make_query(ExprPtr root, SortOrder required_output_order) {
  if (!required_output_order.attrs().is_subset_of(root->schema())) {
    throw ValidationError("$.order_by", "order-by references attributes not in the output: " +
                                            to_string(required_output_order.attrs() - root->schema()));
  }
  return QuerySpec{std::move(root), std::move(required_output_order)};
}

namespace {

// Union-find over attribute names; the representative of a class is the
// name that appeared on the left input of the join that equated it.
class AliasMap {
 public:
  Attribute find(const Attribute& a) const {
    auto it = parent_.find(a);
    return it == parent_.end() ? a : find(it->second);
  }
  void attach(const Attribute& child, const Attribute& rep) {
    const Attribute c = find(child);
    const Attribute r = find(rep);
    if (c != r) parent_[c] = r;
  }

 private:
  std::map<Attribute, Attribute> parent_;
};

std::string child_path(const std::string& path, const char* key) { return path + "." + key; }

// First pass: raw (pre-rename) names visible below each node, and the
// alias classes induced by the join predicates.
AttrSet collect_aliases(const json& node, const std::string& path, const Catalog& catalog, AliasMap& aliases) {
  json_util::require_object(node, path);
  const std::string op = json_util::get_string(node, path, "op");
  if (op == "scan") {
    const std::string rel_name = json_util::get_string(node, path, "relation");
    if (!catalog.has_relation(rel_name)) throw ValidationError(path, "unknown relation '" + rel_name + "'");
    const auto& rel = catalog.relation(rel_name);
    const std::string alias = node.contains("alias") ? json_util::get_string(node, path, "alias") : rel_name;
    std::map<std::string, std::string> renames;
    if (node.contains("rename")) {
      if (!node.at("rename").is_object()) throw ValidationError(path + ".rename", "expected an object");
      for (const auto& [k, v] : node.at("rename").items()) {
        if (!v.is_string()) throw ValidationError(path + ".rename." + k, "expected a string");
        renames[k] = v.get<std::string>();
      }
    }
    AttrSet names;
    for (const auto& col : rel.columns) {
      auto it = renames.find(col);
      names.insert(it != renames.end() ? it->second : alias + "." + col);
    }
    return names;
  }
  if (op == "select" || op == "project") {
    return collect_aliases(json_util::required(node, path, "input"), child_path(path, "input"), catalog, aliases);
  }
  if (op == "groupby") {
    AttrSet names =
        collect_aliases(json_util::required(node, path, "input"), child_path(path, "input"), catalog, aliases);
    if (node.contains("aggregates")) {
      for (auto& a : json_util::get_strings(node, path, "aggregates")) names.insert(a);
    }
    return names;
  }
  if (op == "join") {
    const AttrSet left =
        collect_aliases(json_util::required(node, path, "left"), child_path(path, "left"), catalog, aliases);
    const AttrSet right =
        collect_aliases(json_util::required(node, path, "right"), child_path(path, "right"), catalog, aliases);
    const auto& on = json_util::required(node, path, "on");
    if (!on.is_array()) throw ValidationError(path + ".on", "expected an array");
    for (std::size_t i = 0; i < on.size(); ++i) {
      const std::string p = path + ".on[" + std::to_string(i) + "]";
      if (on[i].is_string()) continue;  // already a shared name
      if (!on[i].is_array() || on[i].size() != 2 || !on[i][0].is_string() || !on[i][1].is_string()) {
        throw ValidationError(p, "expected a shared attribute name or a pair of names");
      }
      Attribute x = on[i][0].get<std::string>();
      Attribute y = on[i][1].get<std::string>();
      if (left.contains(y) && right.contains(x)) std::swap(x, y);
      if (!left.contains(x) || !right.contains(y)) {
        throw ValidationError(p, "pair must equate a left-input attribute with a right-input attribute");
      }
      aliases.attach(y, x);
    }
    return left | right;
  }
  throw ValidationError(path + ".op", "unknown operator '" + op + "'");
}

AttrSet resolved_set(const json& node, const std::string& path, const std::string& key, const AliasMap& aliases) {
  AttrSet out;
  for (const auto& n : json_util::get_strings(node, path, key)) out.insert(aliases.find(n));
  return out;
}

ExprPtr build(const json& node, const std::string& path, const Catalog& catalog, const AliasMap& aliases) {
  const std::string op = json_util::get_string(node, path, "op");
  if (op == "scan") {
    json_util::reject_unknown(node, path, {"op", "relation", "alias", "rename"});
    const auto& rel = catalog.relation(json_util::get_string(node, path, "relation"));
    const std::string alias = node.contains("alias") ? json_util::get_string(node, path, "alias") : rel.name;
    std::map<Attribute, Attribute> renames;
    for (const auto& col : rel.columns) {
      Attribute raw = alias + "." + col;
      if (node.contains("rename") && node.at("rename").contains(col)) raw = node.at("rename").at(col).get<std::string>();
      const Attribute resolved = aliases.find(raw);
      if (resolved != alias + "." + col) renames.emplace(col, resolved);
    }
    return make_scan(rel, alias, std::move(renames), path);
  }
  if (op == "select") {
    json_util::reject_unknown(node, path, {"op", "input", "selectivity", "touched"});
    auto input = build(node.at("input"), child_path(path, "input"), catalog, aliases);
    const double sel = node.contains("selectivity") ? json_util::get_number(node, path, "selectivity") : 1.0;
    AttrSet touched = node.contains("touched") ? resolved_set(node, path, "touched", aliases) : AttrSet{};
    return make_select(std::move(input), sel, std::move(touched), path);
  }
  if (op == "project") {
    json_util::reject_unknown(node, path, {"op", "input", "cols"});
    auto input = build(node.at("input"), child_path(path, "input"), catalog, aliases);
    return make_project(std::move(input), resolved_set(node, path, "cols", aliases), path);
  }
  if (op == "groupby") {
    // "having" is accepted and ignored for costing (a post-filter of selectivity 1).
    json_util::reject_unknown(node, path, {"op", "input", "keys", "aggregates", "agg_width_bytes", "having"});
    auto input = build(node.at("input"), child_path(path, "input"), catalog, aliases);
    std::vector<Attribute> aggs =
        node.contains("aggregates") ? json_util::get_strings(node, path, "aggregates") : std::vector<Attribute>{};
    const double width = node.contains("agg_width_bytes") ? json_util::get_number(node, path, "agg_width_bytes") : 8.0;
    return make_group_by(std::move(input), resolved_set(node, path, "keys", aliases), std::move(aggs), width, path);
  }
  // join
  json_util::reject_unknown(node, path, {"op", "left", "right", "on", "full_outer"});
  auto left = build(node.at("left"), child_path(path, "left"), catalog, aliases);
  auto right = build(node.at("right"), child_path(path, "right"), catalog, aliases);
  AttrSet attrs;
  for (const auto& item : node.at("on")) {
    attrs.insert(aliases.find(item.is_string() ? item.get<std::string>() : item[0].get<std::string>()));
  }
  const bool full_outer = node.contains("full_outer") && json_util::get_bool(node, path, "full_outer");
  return make_join(std::move(left), std::move(right), std::move(attrs), full_outer, path);
}

json serialize_expr(const LogicalExpr& e) {
  return std::visit(
      [&](const auto& op) -> json {
        using T = std::decay_t<decltype(op)>;
        if constexpr (std::is_same_v<T, ScanOp>) {
          json renames = json::object();
          for (const auto& [bare, name] : op.exposed) {
            if (name != op.alias + "." + bare) renames[bare] = name;
          }
          json out = {{"op", "scan"}, {"relation", op.relation}, {"alias", op.alias}};
          if (!renames.empty()) out["rename"] = renames;
          return out;
        } else if constexpr (std::is_same_v<T, SelectOp>) {
          return {{"op", "select"},
                  {"selectivity", op.selectivity},
                  {"touched", std::vector<Attribute>(op.touched.begin(), op.touched.end())},
                  {"input", serialize_expr(e.input())}};
        } else if constexpr (std::is_same_v<T, ProjectOp>) {
          return {{"op", "project"},
                  {"cols", std::vector<Attribute>(op.cols.begin(), op.cols.end())},
                  {"input", serialize_expr(e.input())}};
        } else if constexpr (std::is_same_v<T, JoinOp>) {
          return {{"op", "join"},
                  {"on", std::vector<Attribute>(op.join_attrs.begin(), op.join_attrs.end())},
                  {"full_outer", op.full_outer},
                  {"left", serialize_expr(e.input(0))},
                  {"right", serialize_expr(e.input(1))}};
        } else {
          return {{"op", "groupby"},
                  {"keys", std::vector<Attribute>(op.keys.begin(), op.keys.end())},
                  {"aggregates", op.aggregates},
                  {"agg_width_bytes", op.agg_width_bytes},
                  {"input", serialize_expr(e.input())}};
        }
      },
      e.op());
}

}  // namespace

QuerySpec parse_query(const json& doc, const Catalog& catalog) {
  json_util::require_object(doc, "$");
  json_util::reject_unknown(doc, "$", {"expr", "order_by", "name", "description"});
  AliasMap aliases;
  const auto& expr = json_util::required(doc, "$", "expr");
  collect_aliases(expr, "$.expr", catalog, aliases);
  ExprPtr root = build(expr, "$.expr", catalog, aliases);
  SortOrder order;
  if (doc.contains("order_by")) {
    std::vector<Attribute> names;
    for (const auto& n : json_util::get_strings(doc, "$", "order_by")) names.push_back(aliases.find(n));
    try {
      order = SortOrder(std::move(names));
    } catch (const DuplicateAttribute& e) {
      throw ValidationError("$.order_by", e.what());
    }
  }
  return make_query(std::move(root), std::move(order));
}

QuerySpec parse_query(std::string_view text, const Catalog& catalog) {
  return parse_query(json_util::parse_text(text), catalog);
}

QuerySpec load_query(const std::filesystem::path& path, const Catalog& catalog) {
  return parse_query(json_util::read_file(path), catalog);
}

json serialize_query(const QuerySpec& query) {
  return {{"expr", serialize_expr(*query.root)}, {"order_by", query.required_output_order.attributes()}};
}

std::vector<const LogicalExpr*> preorder(const LogicalExpr& root) {
  std::vector<const LogicalExpr*> out;
  std::function<void(const LogicalExpr&)> walk = [&](const LogicalExpr& e) {
    out.push_back(&e);
    for (const auto& in : e.inputs()) walk(*in);
  };
  walk(root);
  return out;
}

AttrSet referenced_attributes(const QuerySpec& query) {
  AttrSet out = query.root->schema() | query.required_output_order.attrs();
  for (const LogicalExpr* e : preorder(*query.root)) {
    if (const auto* s = e->get_if<SelectOp>()) out = out | s->touched;
    if (const auto* p = e->get_if<ProjectOp>()) out = out | p->cols;
    if (const auto* j = e->get_if<JoinOp>()) out = out | j->join_attrs;
    if (const auto* g = e->get_if<GroupByOp>()) out = out | g->keys;
  }
  return out;
}

}  // namespace ordopt

#pragma once

// SPJG expression trees and the query file that carries them.

#include <filesystem>
#include <map>
#include <memory>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <json.hpp>

#include "ordopt/catalog.hpp"
#include "ordopt/order.hpp"

namespace ordopt {

enum class ExprKind { scan, select, project, join, group_by };

struct ScanOp {
  std::string relation;
  std::string alias;
  /// Bare catalog column -> attribute name exposed to the query.
  std::map<Attribute, Attribute> exposed;
  friend bool operator==(const ScanOp&, const ScanOp&) = default;
};

struct SelectOp {
  double selectivity = 1.0;
  AttrSet touched;
  friend bool operator==(const SelectOp&, const SelectOp&) = default;
};

struct ProjectOp {
  AttrSet cols;
  friend bool operator==(const ProjectOp&, const ProjectOp&) = default;
};

/// Conjunctive equi-join. Each equated pair shares one attribute name.
struct JoinOp {
  AttrSet join_attrs;
  bool full_outer = false;
  friend bool operator==(const JoinOp&, const JoinOp&) = default;
};

struct GroupByOp {
  AttrSet keys;
  std::vector<Attribute> aggregates;
  double agg_width_bytes = 8.0;
  friend bool operator==(const GroupByOp&, const GroupByOp&) = default;
};

class LogicalExpr;
using ExprPtr = std::shared_ptr<const LogicalExpr>;

/// Immutable expression node. Node identity (address) keys optimizer memos.
class LogicalExpr {
 public:
  using Op = std::variant<ScanOp, SelectOp, ProjectOp, JoinOp, GroupByOp>;

  LogicalExpr(Op op, std::vector<ExprPtr> inputs, AttrSet schema)
      : op_(std::move(op)), inputs_(std::move(inputs)), schema_(std::move(schema)) {}

  ExprKind kind() const { return static_cast<ExprKind>(op_.index()); }
  const Op& op() const { return op_; }
  template <typename T>
  const T& as() const {
    return std::get<T>(op_);
  }
  template <typename T>
  const T* get_if() const {
    return std::get_if<T>(&op_);
  }

  const std::vector<ExprPtr>& inputs() const { return inputs_; }
  const LogicalExpr& input(std::size_t i = 0) const { return *inputs_.at(i); }

  /// Output attributes; computed once at construction.
  const AttrSet& schema() const { return schema_; }

  /// Structural equality.
  friend bool operator==(const LogicalExpr& a, const LogicalExpr& b);

 private:
  Op op_;
  std::vector<ExprPtr> inputs_;
  AttrSet schema_;
};

std::string_view kind_name(ExprKind kind);

/// Builders. Each checks its node's invariants and throws ValidationError
/// (reported at `path`).
ExprPtr make_scan(const CatalogRelation& rel, std::string alias = {},
                  std::map<Attribute, Attribute> renames = {}, const std::string& path = "$");
ExprPtr make_select(ExprPtr input, double selectivity, AttrSet touched, const std::string& path = "$");
ExprPtr make_project(ExprPtr input, AttrSet cols, const std::string& path = "$");
ExprPtr make_join(ExprPtr left, ExprPtr right, AttrSet join_attrs, bool full_outer = false,
                  const std::string& path = "$");
ExprPtr make_group_by(ExprPtr input, AttrSet keys, std::vector<Attribute> aggregates = {},
                      double agg_width_bytes = 8.0, const std::string& path = "$");

inline const AttrSet& schema(const LogicalExpr& e) { return e.schema(); }

/// Catalog (bare) order translated to the names a scan exposes.
SortOrder qualify(const ScanOp& scan, const SortOrder& bare);

/// Secondary indices of the scanned relation that cover every column of it
/// the query references.
std::vector<IndexDef> scan_covering_indices(const Catalog& catalog, const ScanOp& scan, const AttrSet& query_attrs);

struct QuerySpec {
  ExprPtr root;
  SortOrder required_output_order;

  friend bool operator==(const QuerySpec& a, const QuerySpec& b) {
    return *a.root == *b.root && a.required_output_order == b.required_output_order;
  }
};

/// Throws ValidationError if the order references attributes outside the root schema.
QuerySpec make_query(ExprPtr root, SortOrder required_output_order);

/// Parses a query document against `catalog`. Equated join columns are renamed
/// to the left-hand name throughout the tree.
QuerySpec parse_query(std::string_view text, const Catalog& catalog);
QuerySpec parse_query(const nlohmann::json& doc, const Catalog& catalog);
inline QuerySpec parse_query(const std::string& text, const Catalog& catalog) {
  return parse_query(std::string_view(text), catalog);
}
inline QuerySpec parse_query(const char* text, const Catalog& catalog) {
  return parse_query(std::string_view(text), catalog);
}
QuerySpec load_query(const std::filesystem::path& path, const Catalog& catalog);
nlohmann::json serialize_query(const QuerySpec& query);

/// Nodes in pre-order; position is the node id used in plan output.
std::vector<const LogicalExpr*> preorder(const LogicalExpr& root);

/// Every attribute the query touches anywhere, plus the root's output.
AttrSet referenced_attributes(const QuerySpec& query);

}  // namespace ordopt

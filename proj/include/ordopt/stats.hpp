#pragma once

// Cardinality, width and distinct-value estimates for expression nodes.

#include <map>
#include <unordered_map>

#include "ordopt/catalog.hpp"
#include "ordopt/logical_expr.hpp"

namespace ordopt {

struct AttrStats {
  double width_bytes = 0.0;
  /// Negative when the catalog carries no distinct count for the column.
  double distinct = -1.0;
};

struct ExprStats {
  double rows = 0.0;
  double width_bytes = 0.0;
  double blocks = 0.0;
  std::map<Attribute, AttrStats> attrs;
};

/// Lazily computed, cached per expression node (keyed by address).
class Statistics {
 public:
  Statistics(const Catalog& catalog, BlockConfig cfg) : catalog_(&catalog), cfg_(cfg) {}

  const ExprStats& of(const LogicalExpr& e);

  double rows(const LogicalExpr& e) { return of(e).rows; }
  double blocks(const LogicalExpr& e) { return of(e).blocks; }

  /// D(e, s): product of per-attribute distinct counts, capped at N(e).
  /// D(e, {}) = 1. Throws UnknownAttribute / UnknownStatistic.
  double distinct_count(const LogicalExpr& e, const AttrSet& s);

  const Catalog& catalog() const { return *catalog_; }
  const BlockConfig& block_config() const { return cfg_; }

 private:
  ExprStats compute(const LogicalExpr& e);

  const Catalog* catalog_;
  BlockConfig cfg_;
  std::unordered_map<const LogicalExpr*, ExprStats> cache_;
};

/// ceil(rows * width / block_bytes) on real-valued inputs.
double blocks_for(double rows, double width_bytes, const BlockConfig& cfg);

}  // namespace ordopt

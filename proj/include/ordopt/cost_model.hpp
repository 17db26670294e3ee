#pragma once

// Costs in I/O-block units. CPU work is converted through
// cpu_per_comparison_io_equiv.

#include <filesystem>

#include <json.hpp>

#include "ordopt/catalog.hpp"
#include "ordopt/logical_expr.hpp"
#include "ordopt/stats.hpp"

namespace ordopt {

struct CostParams {
  BlockConfig cfg;
  double cpu_per_comparison_io_equiv = 1e-6;
  double mergejoin_per_tuple_io_equiv = 1e-7;
  bool hashjoin_enabled = false;
  double hashjoin_per_block_io_equiv = 2.0;
  double hashagg_per_block_io_equiv = 2.0;

  /// Throws ConfigError on negative coefficients or M < 2.
  void validate() const;

  /// Reads `{"cost_params": {...}}`; absent fields keep their defaults.
  static CostParams from_json(const nlohmann::json& doc);
  static CostParams load(const std::filesystem::path& path);
  nlohmann::json to_json() const;
};

double cpu_sort_cost(double rows, std::size_t key_len, const CostParams& params);

/// Sort of an unordered input on `key_len` attributes.
double coe_full(double rows, double blocks, std::size_t key_len, const CostParams& params);

/// Cost of obtaining o2 from an input known to be sorted on o1.
double coe_partial(Statistics& stats, const LogicalExpr& e, const SortOrder& o1, const SortOrder& o2,
                   const CostParams& params);

double table_scan_cost(const CatalogRelation& rel, const BlockConfig& cfg);
double index_scan_blocks(const CatalogRelation& rel, const IndexDef& index, const BlockConfig& cfg);
double merge_join_cost(double left_rows, double right_rows, const CostParams& params);
double hash_join_cost(double left_blocks, double right_blocks, const CostParams& params);
double hash_group_by_cost(double input_blocks, const CostParams& params);

}  // namespace ordopt

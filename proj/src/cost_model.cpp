#include "ordopt/cost_model.hpp"

#include <algorithm>
#include <cmath>

#include "ordopt/error.hpp"
#include "ordopt/json_util.hpp"

namespace ordopt {

using nlohmann::json;

void CostParams::validate() const {
  cfg.validate();
  if (cfg.memory_blocks < 2) throw ConfigError("memory_blocks must be >= 2");
  if (cpu_per_comparison_io_equiv < 0 || mergejoin_per_tuple_io_equiv < 0 || hashjoin_per_block_io_equiv < 0 ||
      hashagg_per_block_io_equiv < 0) {
    throw ConfigError("cost coefficients must be non-negative");
  }
}

CostParams CostParams::from_json(const json& doc) {
  json_util::require_object(doc, "$");
  json_util::reject_unknown(doc, "$", {"cost_params"});
  CostParams p;
  if (!doc.contains("cost_params")) return p;
  const auto& c = doc.at("cost_params");
  const std::string path = "$.cost_params";
  json_util::require_object(c, path);
  json_util::reject_unknown(c, path,
                            {"block_bytes", "memory_blocks", "cpu_per_comparison_io_equiv",
                             "mergejoin_per_tuple_io_equiv", "hashjoin_enabled", "hashjoin_per_block_io_equiv",
                             "hashagg_per_block_io_equiv"});
  if (c.contains("block_bytes")) p.cfg.block_bytes = json_util::get_int(c, path, "block_bytes");
  if (c.contains("memory_blocks")) p.cfg.memory_blocks = json_util::get_int(c, path, "memory_blocks");
  if (c.contains("cpu_per_comparison_io_equiv")) {
    p.cpu_per_comparison_io_equiv = json_util::get_number(c, path, "cpu_per_comparison_io_equiv");
  }
  if (c.contains("mergejoin_per_tuple_io_equiv")) {
    p.mergejoin_per_tuple_io_equiv = json_util::get_number(c, path, "mergejoin_per_tuple_io_equiv");
  }
  if (c.contains("hashjoin_enabled")) p.hashjoin_enabled = json_util::get_bool(c, path, "hashjoin_enabled");
  if (c.contains("hashjoin_per_block_io_equiv")) {
    p.hashjoin_per_block_io_equiv = json_util::get_number(c, path, "hashjoin_per_block_io_equiv");
  }
  if (c.contains("hashagg_per_block_io_equiv")) {
    p.hashagg_per_block_io_equiv = json_util::get_number(c, path, "hashagg_per_block_io_equiv");
  }
  p.validate();
  return p;
}

CostParams CostParams::load(const std::filesystem::path& path) { return from_json(json_util::read_file(path)); }

json CostParams::to_json() const {
  return {{"cost_params",
           {{"block_bytes", cfg.block_bytes},
            {"memory_blocks", cfg.memory_blocks},
            {"cpu_per_comparison_io_equiv", cpu_per_comparison_io_equiv},
            {"mergejoin_per_tuple_io_equiv", mergejoin_per_tuple_io_equiv},
            {"hashjoin_enabled", hashjoin_enabled},
            {"hashjoin_per_block_io_equiv", hashjoin_per_block_io_equiv},
            {"hashagg_per_block_io_equiv", hashagg_per_block_io_equiv}}}};
}

double cpu_sort_cost(double rows, std::size_t key_len, const CostParams& params) {
  if (rows <= 0.0 || key_len == 0) return 0.0;
  return params.cpu_per_comparison_io_equiv * rows * std::log2(std::max(rows, 2.0)) *
         static_cast<double>(key_len);
}

double coe_full(double rows, double blocks, std::size_t key_len, const CostParams& params) {
  const auto m = params.cfg.memory_blocks;
  if (m < 2) throw ConfigError("memory_blocks must be >= 2");
  const double cpu = cpu_sort_cost(rows, key_len, params);
  if (blocks <= static_cast<double>(m)) return cpu;
  if (m == 2) throw ConfigError("memory_blocks = 2 leaves a merge fan-in of 1");
  // smallest p with M * (M-1)^p >= B, i.e. ceil(log_{M-1}(B/M))
  int passes = 0;
  for (double reach = static_cast<double>(m); reach < blocks; reach *= static_cast<double>(m - 1)) ++passes;
  return blocks * (2.0 * passes + 1.0) + cpu;
}

double coe_partial(Statistics& stats, const LogicalExpr& e, const SortOrder& o1, const SortOrder& o2,
                   const CostParams& params) {
  const SortOrder os = lcp(o2, o1);
  const SortOrder orr = subtract(o2, os);
  if (orr.empty()) return 0.0;
  const ExprStats& st = stats.of(e);
  if (os.empty()) return coe_full(st.rows, st.blocks, orr.size(), params);
  const double d = stats.distinct_count(e, os.attrs());
  const double seg_rows = st.rows / d;
  if (seg_rows <= 1.0) return 0.0;
  return d * coe_full(seg_rows, st.blocks / d, orr.size(), params);
}

double table_scan_cost(const CatalogRelation& rel, const BlockConfig& cfg) {
  return static_cast<double>(blocks(rel.row_count, rel.tuple_bytes, cfg));
}

double index_scan_blocks(const CatalogRelation& rel, const IndexDef& index, const BlockConfig& cfg) {
  return blocks_for(static_cast<double>(rel.row_count), index_entry_bytes(rel, index), cfg);
}

double merge_join_cost(double left_rows, double right_rows, const CostParams& params) {
  return params.mergejoin_per_tuple_io_equiv * (left_rows + right_rows);
}

double hash_join_cost(double left_blocks, double right_blocks, const CostParams& params) {
  return params.hashjoin_per_block_io_equiv * (left_blocks + right_blocks);
}

double hash_group_by_cost(double input_blocks, const CostParams& params) {
  return params.hashagg_per_block_io_equiv * input_blocks;
}

}  // namespace ordopt

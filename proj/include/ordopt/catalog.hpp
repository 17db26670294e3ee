#pragma once

// Synthetic catalog: base relations, their access paths and the statistics
// (row counts, widths, per-column distinct counts) the cost model reads.

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "ordopt/order.hpp"

namespace ordopt {

struct BlockConfig {
  std::int64_t block_bytes = 4096;
  std::int64_t memory_blocks = 10000;

  /// Throws ConfigError unless both values are >= 1.
  void validate() const;
};

enum class IndexKind { clustering, secondary };

/// Column names inside the catalog are bare (relation-local); queries see
/// them qualified through the scan that exposes them.
struct IndexDef {
  std::string relation;
  SortOrder key_order;
  AttrSet included_columns;
  IndexKind kind = IndexKind::secondary;

  /// Key attributes plus included columns.
  AttrSet stored_columns() const { return key_order.attrs() | included_columns; }

  friend bool operator==(const IndexDef&, const IndexDef&) = default;
};

struct CatalogRelation {
  std::string name;
  std::int64_t row_count = 1;
  std::int64_t tuple_bytes = 1;
  AttrSet columns;
  SortOrder clustering_order;
  std::map<Attribute, std::int64_t> distincts;

  /// Width attributed to each column, assuming columns of equal width.
  double column_bytes() const {
    return static_cast<double>(tuple_bytes) / static_cast<double>(columns.size());
  }
};

class Catalog {
 public:
  /// Validates the relation's invariants; throws ValidationError.
  void add_relation(CatalogRelation rel);
  /// Validates against the already-registered relation; throws ValidationError.
  void add_index(IndexDef index);

  bool has_relation(std::string_view name) const;
  /// Throws UnknownRelation.
  const CatalogRelation& relation(std::string_view name) const;
  const std::map<std::string, CatalogRelation, std::less<>>& relations() const { return relations_; }

  std::vector<IndexDef> indices_of(std::string_view relation) const;
  const std::vector<IndexDef>& indices() const { return indices_; }

  /// Strict reader for the catalog document: `relations[]` and `indices[]`,
  /// unknown fields rejected. Throws ValidationError.
  static Catalog from_json(const nlohmann::json& doc);
  /// Reads and parses a file; throws ParseError for malformed JSON.
  static Catalog load(const std::filesystem::path& path);
  nlohmann::json to_json() const;

 private:
  std::map<std::string, CatalogRelation, std::less<>> relations_;
  std::vector<IndexDef> indices_;
};

/// ceil(rows * tuple_bytes / block_bytes); zero rows occupy zero blocks.
std::int64_t blocks(std::int64_t rows, std::int64_t tuple_bytes, const BlockConfig& cfg);

/// Secondary indices of `relation` whose key and included columns contain
/// every attribute in `needed` (bare column names).
std::vector<IndexDef> covering_indices(const Catalog& catalog, std::string_view relation,
                                       const AttrSet& needed);

/// Bytes per index entry under the equal-column-width model.
double index_entry_bytes(const CatalogRelation& rel, const IndexDef& index);

}  // namespace ordopt

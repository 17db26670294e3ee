#include "ordopt/catalog.hpp"

#include <cmath>
#include <fstream>
#include <set>

#include "ordopt/error.hpp"
#include "ordopt/json_util.hpp"

namespace ordopt {

using nlohmann::json;

void BlockConfig::validate() const {
  if (block_bytes < 1) throw ConfigError("block_bytes must be >= 1");
  if (memory_blocks < 1) throw ConfigError("memory_blocks must be >= 1");
}

void Catalog::add_relation(CatalogRelation rel) {
  const std::string path = "$.relations[" + rel.name + "]";
  if (rel.name.empty()) throw ValidationError(path, "relation name must be non-empty");
  if (relations_.count(rel.name)) throw ValidationError(path, "duplicate relation");
  if (rel.row_count < 1) throw ValidationError(path, "row_count must be positive");
  if (rel.tuple_bytes < 1) throw ValidationError(path, "tuple_bytes must be positive");
  if (rel.columns.empty()) throw ValidationError(path, "relation needs at least one column");
  if (!rel.clustering_order.attrs().is_subset_of(rel.columns)) {
    throw ValidationError(path, "clustering_order uses unknown columns");
  }
  for (const auto& [col, d] : rel.distincts) {
    if (!rel.columns.contains(col)) throw ValidationError(path, "distincts for unknown column '" + col + "'");
    if (d < 1 || d > rel.row_count) {
      throw ValidationError(path, "distincts['" + col + "'] must lie in [1, row_count]");
    }
  }
  std::string name = rel.name;
  relations_.emplace(std::move(name), std::move(rel));
}

void Catalog::add_index(IndexDef index) {
  const std::string path = "$.indices[" + index.relation + "]";
  auto it = relations_.find(index.relation);
  if (it == relations_.end()) throw ValidationError(path, "index on unknown relation");
  if (index.key_order.empty()) throw ValidationError(path, "index key_order must be non-empty");
  if (!index.stored_columns().is_subset_of(it->second.columns)) {
    throw ValidationError(path, "index references unknown columns");
  }
  if (index.kind == IndexKind::clustering && index.key_order != it->second.clustering_order) {
    throw ValidationError(path, "clustering index key must equal the relation's clustering_order");
  }
  indices_.push_back(std::move(index));
}

bool Catalog::has_relation(std::string_view name) const { return relations_.find(name) != relations_.end(); }

const CatalogRelation& Catalog::relation(std::string_view name) const {
  auto it = relations_.find(name);
  if (it == relations_.end()) throw UnknownRelation("unknown relation '" + std::string(name) + "'");
  return it->second;
}

std::vector<IndexDef> Catalog::indices_of(std::string_view relation) const {
  std::vector<IndexDef> out;
  for (const auto& idx : indices_) {
    if (idx.relation == relation) out.push_back(idx);
  }
  return out;
}

Catalog Catalog::from_json(const json& doc) {
  json_util::require_object(doc, "$");
  json_util::reject_unknown(doc, "$", {"relations", "indices"});
  Catalog cat;
  const auto& rels = json_util::required(doc, "$", "relations");
  if (!rels.is_array()) throw ValidationError("$.relations", "expected an array");
  for (std::size_t i = 0; i < rels.size(); ++i) {
    const std::string path = "$.relations[" + std::to_string(i) + "]";
    const auto& r = rels[i];
    json_util::require_object(r, path);
    json_util::reject_unknown(r, path,
                              {"name", "row_count", "tuple_bytes", "columns", "clustering_order", "distincts"});
    CatalogRelation rel;
    rel.name = json_util::get_string(r, path, "name");
    rel.row_count = json_util::get_int(r, path, "row_count");
    rel.tuple_bytes = json_util::get_int(r, path, "tuple_bytes");
    rel.columns = json_util::get_attr_set(r, path, "columns");
    if (r.contains("clustering_order")) rel.clustering_order = json_util::get_order(r, path, "clustering_order");
    if (r.contains("distincts")) {
      const auto& d = r.at("distincts");
      if (!d.is_object()) throw ValidationError(path + ".distincts", "expected an object");
      for (const auto& [k, v] : d.items()) {
        if (!v.is_number_integer()) throw ValidationError(path + ".distincts." + k, "expected an integer");
        rel.distincts[k] = v.get<std::int64_t>();
      }
    }
    cat.add_relation(std::move(rel));
  }
  if (doc.contains("indices")) {
    const auto& idxs = doc.at("indices");
    if (!idxs.is_array()) throw ValidationError("$.indices", "expected an array");
    for (std::size_t i = 0; i < idxs.size(); ++i) {
      const std::string path = "$.indices[" + std::to_string(i) + "]";
      const auto& x = idxs[i];
      json_util::require_object(x, path);
      json_util::reject_unknown(x, path, {"relation", "key_order", "included_columns", "kind"});
      IndexDef idx;
      idx.relation = json_util::get_string(x, path, "relation");
      idx.key_order = json_util::get_order(x, path, "key_order");
      if (x.contains("included_columns")) idx.included_columns = json_util::get_attr_set(x, path, "included_columns");
      const std::string kind = x.contains("kind") ? json_util::get_string(x, path, "kind") : "secondary";
      if (kind == "clustering") {
        idx.kind = IndexKind::clustering;
      } else if (kind == "secondary") {
        idx.kind = IndexKind::secondary;
      } else {
        throw ValidationError(path + ".kind", "expected 'clustering' or 'secondary'");
      }
      cat.add_index(std::move(idx));
    }
  }
  return cat;
}

Catalog Catalog::load(const std::filesystem::path& path) {
  return from_json(json_util::read_file(path));
}

json Catalog::to_json() const {
  json rels = json::array();
  for (const auto& [name, r] : relations_) {
    json d = json::object();
    for (const auto& [k, v] : r.distincts) d[k] = v;
    rels.push_back({{"name", r.name},
                    {"row_count", r.row_count},
                    {"tuple_bytes", r.tuple_bytes},
                    {"columns", std::vector<Attribute>(r.columns.begin(), r.columns.end())},
                    {"clustering_order", r.clustering_order.attributes()},
                    {"distincts", d}});
  }
  json idxs = json::array();
  for (const auto& i : indices_) {
    idxs.push_back({{"relation", i.relation},
                    {"key_order", i.key_order.attributes()},
                    {"included_columns", std::vector<Attribute>(i.included_columns.begin(), i.included_columns.end())},
                    {"kind", i.kind == IndexKind::clustering ? "clustering" : "secondary"}});
  }
  return {{"relations", rels}, {"indices", idxs}};
}

std::int64_t blocks(std::int64_t rows, std::int64_t tuple_bytes, const BlockConfig& cfg) {
  if (rows <= 0) return 0;
  const std::int64_t bytes = rows * tuple_bytes;
  return (bytes + cfg.block_bytes - 1) / cfg.block_bytes;
}

std::vector<IndexDef> covering_indices(const Catalog& catalog, std::string_view relation, const AttrSet& needed) {
  std::vector<IndexDef> out;
  for (const auto& idx : catalog.indices_of(relation)) {
    if (idx.kind == IndexKind::secondary && needed.is_subset_of(idx.stored_columns())) out.push_back(idx);
  }
  return out;
}

double index_entry_bytes(const CatalogRelation& rel, const IndexDef& index) {
  return rel.column_bytes() * static_cast<double>(index.stored_columns().size());
}

}  // namespace ordopt

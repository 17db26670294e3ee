#pragma once

#include <string>

#include "ordopt/catalog.hpp"
#include "ordopt/json_util.hpp"
#include "ordopt/logical_expr.hpp"

namespace ordopt::testing {

inline std::string fixture(const std::string& name) { return std::string(ORDOPT_FIXTURE_DIR) + "/" + name; }

struct Loaded {
  Catalog catalog;
  QuerySpec query;
};

/// `<stem>.json` catalog with `<stem>_query.json`.
inline Loaded load_fixture(const std::string& stem) {
  Loaded l;
  l.catalog = Catalog::load(fixture(stem + ".json"));
  l.query = parse_query(json_util::read_file(fixture(stem + "_query.json")), l.catalog);
  return l;
}

}  // namespace ordopt::testing

#pragma once

#include <algorithm>
#include <random>
#include <string>
#include <vector>

#include "ordopt/catalog.hpp"
#include "ordopt/logical_expr.hpp"

namespace ordopt::testing {

struct RandomCase {
  Catalog catalog;
  QuerySpec query;
  BlockConfig cfg;
};

/// Two or three relations joined left-deep over the shared names a..d, with
/// optional select, project and group-by, every schema kept to six attributes.
inline RandomCase random_case(std::mt19937_64& rng) {
  auto pick = [&](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); };
  const std::vector<Attribute> shared = {"a", "b", "c", "d"};
  RandomCase rc;
  rc.cfg.block_bytes = 4096;
  rc.cfg.memory_blocks = std::vector<std::int64_t>{20, 400, 10000}[static_cast<std::size_t>(pick(0, 2))];

  const int nrel = pick(2, 3);
  const int width0 = nrel == 3 ? 2 : pick(2, 4);
  ExprPtr tree;
  AttrSet visible;
  for (int k = 0; k < nrel; ++k) {
    CatalogRelation rel;
    rel.name = "R" + std::to_string(k + 1);
    const int ncols = k == 0 ? width0 : (nrel == 3 ? 2 : std::min(3, 6 - width0 + 1));
    std::vector<Attribute> cols;
    for (int j = 0; j < ncols; ++j) cols.push_back("x" + std::to_string(j));
    rel.columns = AttrSet(cols.begin(), cols.end());
    rel.row_count = std::vector<std::int64_t>{500, 20000, 300000, 2000000}[static_cast<std::size_t>(pick(0, 3))];
    rel.tuple_bytes = pick(16, 200);
    for (const auto& c : cols) rel.distincts[c] = std::min<std::int64_t>(rel.row_count, pick(1, 300));
    std::vector<Attribute> perm = cols;
    std::shuffle(perm.begin(), perm.end(), rng);
    perm.resize(static_cast<std::size_t>(pick(0, std::min(2, ncols))));
    rel.clustering_order = SortOrder(perm);
    rc.catalog.add_relation(rel);
    if (pick(0, 1) == 1) {
      std::vector<Attribute> key = cols;
      std::shuffle(key.begin(), key.end(), rng);
      key.resize(static_cast<std::size_t>(pick(1, 2)));
      AttrSet rest;
      if (pick(0, 2) > 0) {
        for (const auto& c : cols) {
          if (std::find(key.begin(), key.end(), c) == key.end()) rest.insert(c);
        }
      }
      rc.catalog.add_index({rel.name, SortOrder(key), rest, IndexKind::secondary});
    }

    std::map<Attribute, Attribute> renames;
    AttrSet on;
    if (k == 0) {
      for (int j = 0; j < ncols; ++j) renames[cols[static_cast<std::size_t>(j)]] = shared[static_cast<std::size_t>(j)];
    } else {
      std::vector<Attribute> pool(visible.begin(), visible.end());
      pool.erase(std::remove_if(pool.begin(), pool.end(),
                                [&](const Attribute& a) { return a.size() != 1; }),
                 pool.end());
      std::shuffle(pool.begin(), pool.end(), rng);
      const int nj = pick(1, std::min<int>(ncols, static_cast<int>(pool.size())));
      for (int j = 0; j < ncols; ++j) {
        renames[cols[static_cast<std::size_t>(j)]] =
            j < nj ? pool[static_cast<std::size_t>(j)] : rel.name + "." + cols[static_cast<std::size_t>(j)];
        if (j < nj) on.insert(pool[static_cast<std::size_t>(j)]);
      }
    }
    ExprPtr scan = make_scan(rc.catalog.relation(rel.name), rel.name, renames);
    if (pick(0, 3) == 0) scan = make_select(scan, 0.1 * pick(1, 9), {});
    tree = k == 0 ? scan : make_join(tree, scan, on, pick(0, 5) == 0);
    visible = tree->schema();
  }

  AttrSet out = tree->schema();
  if (pick(0, 2) == 0) {
    std::vector<Attribute> all(out.begin(), out.end());
    std::shuffle(all.begin(), all.end(), rng);
    all.resize(static_cast<std::size_t>(pick(1, std::min<int>(4, static_cast<int>(all.size())))));
    tree = make_group_by(tree, AttrSet(all.begin(), all.end()), {"agg"});
    out = AttrSet(all.begin(), all.end());
  } else if (pick(0, 3) == 0) {
    std::vector<Attribute> all(out.begin(), out.end());
    std::shuffle(all.begin(), all.end(), rng);
    all.resize(static_cast<std::size_t>(pick(1, static_cast<int>(all.size()))));
    tree = make_project(tree, AttrSet(all.begin(), all.end()));
    out = tree->schema();
  }
  std::vector<Attribute> req(out.begin(), out.end());
  std::shuffle(req.begin(), req.end(), rng);
  req.resize(static_cast<std::size_t>(pick(0, std::min<int>(3, static_cast<int>(req.size())))));
  rc.query = make_query(tree, SortOrder(req));
  return rc;
}

}  // namespace ordopt::testing

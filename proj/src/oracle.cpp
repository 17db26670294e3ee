#include "ordopt/oracle.hpp"

#include <algorithm>
#include <cstdlib>
#include <limits>
#include <string_view>

#include "ordopt/error.hpp"

namespace ordopt {

OracleGuard OracleGuard::from_env() {
  OracleGuard g;
  const char* v = std::getenv("ORDOPT_GUARD_OVERRIDE");
  g.disabled = v != nullptr && std::string_view(v) == "1";
  return g;
}

std::vector<SortOrder> all_permutations(const AttrSet& s) {
  std::vector<Attribute> attrs(s.begin(), s.end());
  std::vector<SortOrder> out;
  do {
    out.emplace_back(attrs);
  } while (std::next_permutation(attrs.begin(), attrs.end()));
  return out;
}

BruteForcePlanner::BruteForcePlanner(const Catalog& catalog, CostParams params, AttrSet query_attrs,
                                     OracleGuard guard)
    : catalog_(&catalog),
      params_(params),
      query_attrs_(std::move(query_attrs)),
      guard_(guard),
      stats_(catalog, params.cfg) {
  params_.validate();
}

const std::vector<SortOrder>& BruteForcePlanner::perms(const AttrSet& s) {
  if (!guard_.disabled && s.size() > guard_.max_attrs) {
    throw TooLarge("exhaustive search over " + std::to_string(s.size()) + " attributes exceeds the guard of " +
                   std::to_string(guard_.max_attrs));
  }
  auto it = perm_cache_.find(s);
  if (it == perm_cache_.end()) it = perm_cache_.emplace(s, all_permutations(s)).first;
  return it->second;
}

double BruteForcePlanner::cbp(const LogicalExpr& e, const SortOrder& o) {
  if (!o.attrs().is_subset_of(e.schema())) {
    throw Unsatisfiable("order " + to_string(o) + " is not over the expression's output");
  }
  const auto key = std::make_pair(&e, o);
  if (auto it = memo_.find(key); it != memo_.end()) return it->second;

  double best = std::numeric_limits<double>::infinity();
  // sorts apply to an operator's output only, for every prefix of o as its goal
  for (std::size_t len = 0; len <= o.size(); ++len) {
    const SortOrder goal = o.prefix(len);
    auto consider = [&](double cost, const SortOrder& produced) {
      best = std::min(best, cost + coe_partial(stats_, e, produced, o, params_));
    };
    switch (e.kind()) {
      case ExprKind::scan: {
        const auto& op = e.as<ScanOp>();
        const auto& rel = catalog_->relation(op.relation);
        consider(table_scan_cost(rel, params_.cfg), qualify(op, rel.clustering_order));
        for (const auto& idx : scan_covering_indices(*catalog_, op, query_attrs_)) {
          consider(index_scan_blocks(rel, idx, params_.cfg), qualify(op, idx.key_order));
        }
        break;
      }
      case ExprKind::select:
      case ExprKind::project:
        consider(cbp(e.input(), goal), goal);
        break;
      case ExprKind::join: {
        const auto& l = e.input(0);
        const auto& r = e.input(1);
        const double cm = merge_join_cost(stats_.rows(l), stats_.rows(r), params_);
        for (const auto& p : perms(e.as<JoinOp>().join_attrs)) consider(cbp(l, p) + cbp(r, p) + cm, p);
        if (params_.hashjoin_enabled) {
          consider(cbp(l, {}) + cbp(r, {}) + hash_join_cost(stats_.blocks(l), stats_.blocks(r), params_), {});
        }
        break;
      }
      case ExprKind::group_by: {
        const auto& in = e.input();
        for (const auto& p : perms(e.as<GroupByOp>().keys)) consider(cbp(in, p), p);
        if (params_.hashjoin_enabled) consider(cbp(in, {}) + hash_group_by_cost(stats_.blocks(in), params_), {});
        break;
      }
    }
  }
  memo_.emplace(key, best);
  return best;
}

double brute_best_plan(const Catalog& catalog, const CostParams& params, const QuerySpec& query,
                       OracleGuard guard) {
  BruteForcePlanner planner(catalog, params, referenced_attributes(query), guard);
  return planner.cbp(*query.root, query.required_output_order);
}

namespace {

double factorial(std::size_t n) {
  double f = 1.0;
  for (std::size_t i = 2; i <= n; ++i) f *= static_cast<double>(i);
  return f;
}

}  // namespace

int brute_tree_benefit(const LabeledTree& t, OracleGuard guard) {
  t.validate();
  double space = 1.0;
  for (const auto& s : t.sets) space *= factorial(s.size());
  if (!guard.disabled && (space > 1e7 || t.size() > guard.max_nodes)) {
    throw TooLarge("assignment space of " + std::to_string(space) + " over " + std::to_string(t.size()) +
                   " nodes exceeds the guard");
  }
  std::vector<std::vector<SortOrder>> choices;
  for (const auto& s : t.sets) choices.push_back(all_permutations(s));

  // odometer over the cross product
  std::vector<std::size_t> digit(t.size(), 0);
  OrderAssignment a(t.size());
  for (std::size_t i = 0; i < t.size(); ++i) a[i] = choices[i][0];
  int best = 0;
  while (true) {
    best = std::max(best, benefit(t, a));
    std::size_t i = 0;
    for (; i < t.size(); ++i) {
      if (++digit[i] < choices[i].size()) {
        a[i] = choices[i][digit[i]];
        break;
      }
      digit[i] = 0;
      a[i] = choices[i][0];
    }
    if (i == t.size()) break;
  }
  return best;
}

std::vector<Tuple> reference_sort(std::vector<Tuple> input, OracleGuard guard) {
  if (!guard.disabled && static_cast<std::int64_t>(input.size()) > guard.max_rows) {
    throw TooLarge("reference sort of " + std::to_string(input.size()) + " rows exceeds the guard");
  }
  std::sort(input.begin(), input.end(), [](const Tuple& a, const Tuple& b) { return a.keys < b.keys; });
  return input;
}

}  // namespace ordopt

#include "ordopt/favorable_orders.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include "ordopt/error.hpp"

namespace ordopt {

FavorableOrderSet::FavorableOrderSet(std::initializer_list<SortOrder> orders) {
  for (const auto& o : orders) insert(o);
}

bool FavorableOrderSet::insert(SortOrder o) {
  if (o.empty() || contains(o)) return false;
  orders_.push_back(std::move(o));
  return true;
}

bool FavorableOrderSet::contains(const SortOrder& o) const {
  return std::find(orders_.begin(), orders_.end(), o) != orders_.end();
}

std::vector<SortOrder> FavorableOrderSet::sorted() const {
  std::vector<SortOrder> out = orders_;
  std::sort(out.begin(), out.end());
  return out;
}

const FavorableOrderSet& FavorableOrders::afm(const LogicalExpr& e) {
  auto it = cache_.find(&e);
  if (it != cache_.end()) return it->second;
  FavorableOrderSet s = compute(e);
  return cache_.emplace(&e, std::move(s)).first->second;
}

namespace {

// (o ∧ s) + <s - attrs(o ∧ s)>
SortOrder extend_on(const SortOrder& o, const AttrSet& s) {
  const SortOrder head = lcp_with_set(o, s);
  return concat(head, canonical_permutation(s - head.attrs()));
}

}  // namespace

FavorableOrderSet FavorableOrders::compute(const LogicalExpr& e) {
  FavorableOrderSet out;
  switch (e.kind()) {
    case ExprKind::scan: {
      const auto& op = e.as<ScanOp>();
      const auto& rel = catalog_->relation(op.relation);
      out.insert(qualify(op, rel.clustering_order));
      for (const auto& idx : scan_covering_indices(*catalog_, op, query_attrs_)) out.insert(qualify(op, idx.key_order));
      break;
    }
    case ExprKind::select:
      out = afm(e.input());
      break;
    case ExprKind::project: {
      const auto& cols = e.as<ProjectOp>().cols;
      for (const auto& o : afm(e.input())) out.insert(lcp_with_set(o, cols));
      break;
    }
    case ExprKind::join: {
      const auto& s = e.as<JoinOp>().join_attrs;
      FavorableOrderSet t = afm(e.input(0));
      for (const auto& o : afm(e.input(1))) t.insert(o);
      out = t;
      out.insert(extend_on({}, s));
      for (const auto& o : t) out.insert(extend_on(o, s));
      break;
    }
    case ExprKind::group_by: {
      const auto& keys = e.as<GroupByOp>().keys;
      out.insert(extend_on({}, keys));
      for (const auto& o : afm(e.input())) out.insert(extend_on(o, keys));
      break;
    }
  }
  return out;
}

FavorableOrderSet afm_wrt(const FavorableOrderSet& set, const AttrSet& s) {
  FavorableOrderSet out;
  for (const auto& o : set) out.insert(lcp_with_set(o, s));
  return out;
}

namespace {

bool nearly_equal(double a, double b) {
  return std::abs(a - b) <= 1e-9 * std::max({1e-300, std::abs(a), std::abs(b)});
}

void orders_over(const std::vector<Attribute>& pool, std::vector<Attribute>& cur, std::vector<bool>& used,
                 std::vector<SortOrder>& out) {
  if (!cur.empty()) out.emplace_back(cur);
  for (std::size_t i = 0; i < pool.size(); ++i) {
    if (used[i]) continue;
    used[i] = true;
    cur.push_back(pool[i]);
    orders_over(pool, cur, used, out);
    cur.pop_back();
    used[i] = false;
  }
}

}  // namespace

FavorableOrderSet exact_ford_min(const LogicalExpr& e, BruteForcePlanner& planner) {
  const auto& guard = planner.guard();
  if (!guard.disabled && e.schema().size() > guard.max_attrs) {
    throw TooLarge("exact favorable orders over " + std::to_string(e.schema().size()) +
                   " attributes exceed the guard of " + std::to_string(guard.max_attrs));
  }
  std::vector<Attribute> pool(e.schema().begin(), e.schema().end());
  std::vector<Attribute> cur;
  std::vector<bool> used(pool.size(), false);
  std::vector<SortOrder> all;
  orders_over(pool, cur, used, all);

  auto& stats = planner.stats();
  const auto& params = planner.params();
  const double base = planner.cbp(e, {});
  std::vector<SortOrder> ford;
  std::vector<double> cost;
  for (const auto& o : all) {
    const double c = planner.cbp(e, o);
    const double unordered = base + coe_partial(stats, e, {}, o, params);
    if (unordered - c > 1e-9 * std::max(1e-300, unordered)) {
      ford.push_back(o);
      cost.push_back(c);
    }
  }

  // covers[i]: members of ford that would make ford[i] redundant if chosen
  const std::size_t n = ford.size();
  std::vector<std::vector<std::size_t>> covered_by(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      bool ok = i == j;
      if (!ok && is_prefix(ford[j], ford[i])) {
        ok = nearly_equal(cost[j] + coe_partial(stats, e, ford[j], ford[i], params), cost[i]);
      }
      if (!ok && is_prefix(ford[i], ford[j])) ok = nearly_equal(cost[j], cost[i]);
      if (ok) covered_by[i].push_back(j);
    }
  }
  std::vector<std::vector<std::size_t>> covers(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j : covered_by[i]) covers[j].push_back(i);
  }

  std::vector<bool> done(n, false);
  std::size_t remaining = n;
  FavorableOrderSet out;
  while (remaining > 0) {
    std::size_t pick = n;
    std::size_t gain = 0;
    for (std::size_t j = 0; j < n; ++j) {
      std::size_t g = 0;
      for (std::size_t i : covers[j]) g += done[i] ? 0 : 1;
      if (g > gain || (g == gain && g > 0 && pick < n && ford[j] < ford[pick])) {
        pick = j;
        gain = g;
      }
    }
    out.insert(ford[pick]);
    for (std::size_t i : covers[pick]) {
      if (!done[i]) {
        done[i] = true;
        --remaining;
      }
    }
  }
  return FavorableOrderSet(out);
}

}  // namespace ordopt

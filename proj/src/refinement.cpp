#include "ordopt/refinement.hpp"

#include <algorithm>
#include <functional>

namespace ordopt {

OrderAssignment path_order(const std::vector<AttrSet>& sets) {
  const std::size_t n = sets.size();
  OrderAssignment p(n);
  if (n == 0) return p;

  std::vector<std::vector<int>> ben(n, std::vector<int>(n, 0));
  std::vector<std::vector<std::size_t>> split(n, std::vector<std::size_t>(n, 0));
  std::vector<std::vector<AttrSet>> commons(n, std::vector<AttrSet>(n));
  for (std::size_t i = 0; i < n; ++i) commons[i][i] = sets[i];
  for (std::size_t len = 1; len < n; ++len) {
    for (std::size_t i = 0; i + len < n; ++i) {
      const std::size_t j = i + len;
      std::size_t best_k = i;
      for (std::size_t k = i + 1; k < j; ++k) {
        if (ben[i][k] + ben[k + 1][j] > ben[i][best_k] + ben[best_k + 1][j]) best_k = k;
      }
      commons[i][j] = commons[i][best_k] & commons[best_k + 1][j];
      ben[i][j] = ben[i][best_k] + ben[best_k + 1][j] + static_cast<int>(commons[i][j].size());
      split[i][j] = best_k;
    }
  }

  std::vector<std::vector<Attribute>> built(n);
  std::function<void(std::size_t, std::size_t)> make = [&](std::size_t i, std::size_t j) {
    const SortOrder layer = canonical_permutation(commons[i][j]);
    for (std::size_t k = i; k <= j; ++k) built[k].insert(built[k].end(), layer.begin(), layer.end());
    if (i == j) return;
    // only segments nested inside (i, j) lose the shared attributes
    for (std::size_t a = i; a <= j; ++a) {
      for (std::size_t b = a; b <= j; ++b) {
        if (a != i || b != j) commons[a][b] = commons[a][b] - commons[i][j];
      }
    }
    const std::size_t m = split[i][j];
    make(i, m);
    make(m + 1, j);
  };
  make(0, n - 1);
  for (std::size_t k = 0; k < n; ++k) p[k] = SortOrder(std::move(built[k]));
  return p;
}

OrderAssignment tree_approx(const LabeledTree& t) {
  t.validate();
  const std::size_t n = t.size();
  std::vector<int> depth(n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    for (int v = t.parent[i]; v >= 0; v = t.parent[static_cast<std::size_t>(v)]) ++depth[i];
  }
  const auto kids = t.children();

  if (std::all_of(kids.begin(), kids.end(), [](const auto& k) { return k.size() <= 1; })) {
    OrderAssignment a(n);
    for (std::size_t r = 0; r < n; ++r) {
      if (t.parent[r] >= 0) continue;
      std::vector<int> chain;
      for (int v = static_cast<int>(r);; v = kids[static_cast<std::size_t>(v)][0]) {
        chain.push_back(v);
        if (kids[static_cast<std::size_t>(v)].empty()) break;
      }
      std::vector<AttrSet> sets;
      for (int v : chain) sets.push_back(t.sets[static_cast<std::size_t>(v)]);
      const OrderAssignment sub = path_order(sets);
      for (std::size_t k = 0; k < chain.size(); ++k) a[static_cast<std::size_t>(chain[k])] = sub[k];
    }
    return a;
  }

  auto solve = [&](int parity) {
    OrderAssignment a(n);
    std::vector<bool> placed(n, false);
    for (std::size_t v = 0; v < n; ++v) {
      // edges from v to its children sit at level depth(v) + 1
      if (kids[v].empty() || (depth[v] + 1) % 2 != parity) continue;
      std::vector<int> path;
      path.push_back(kids[v][0]);
      path.push_back(static_cast<int>(v));
      if (kids[v].size() > 1) path.push_back(kids[v][1]);
      std::vector<AttrSet> sets;
      for (int x : path) sets.push_back(t.sets[static_cast<std::size_t>(x)]);
      const OrderAssignment sub = path_order(sets);
      for (std::size_t k = 0; k < path.size(); ++k) {
        a[static_cast<std::size_t>(path[k])] = sub[k];
        placed[static_cast<std::size_t>(path[k])] = true;
      }
    }
    for (std::size_t v = 0; v < n; ++v) {
      if (!placed[v]) a[v] = canonical_permutation(t.sets[v]);
    }
    return a;
  };

  OrderAssignment odd = solve(1);
  OrderAssignment even = solve(0);
  return benefit(t, even) > benefit(t, odd) ? even : odd;
}

JoinTree join_tree(const PlanNode& plan) {
  JoinTree jt;
  std::function<void(const PlanNode&, int)> walk = [&](const PlanNode& p, int above) {
    int next = above;
    switch (p.op) {
      case PhysOp::merge_join:
        jt.joins.push_back(&p);
        jt.tree.sets.push_back(p.input_order.attrs());
        jt.tree.parent.push_back(above);
        next = static_cast<int>(jt.joins.size()) - 1;
        break;
      case PhysOp::hash_join:
      case PhysOp::hash_group_by:
        next = -1;
        break;
      default:
        break;
    }
    for (const auto& c : p.children) walk(*c, next);
  };
  walk(plan, -1);
  return jt;
}

int join_order_benefit(const PlanNode& plan) {
  const JoinTree jt = join_tree(plan);
  OrderAssignment a;
  for (const PlanNode* j : jt.joins) a.push_back(j->input_order);
  return benefit(jt.tree, a);
}

RefineResult refine_plan(const PlanPtr& plan, const LogicalExpr& root, const SortOrder& required,
                         Optimizer& optimizer) {
  RefineResult res;
  res.plan = plan;
  res.cost_before = res.cost_after = plan->total_cost;
  res.benefit_before = res.benefit_after = join_order_benefit(*plan);

  JoinTree jt = join_tree(*plan);
  if (jt.joins.empty()) return res;

  std::vector<SortOrder> fixed(jt.joins.size());
  for (std::size_t i = 0; i < jt.joins.size(); ++i) {
    const PlanNode& j = *jt.joins[i];
    const SortOrder& p = j.input_order;
    SortOrder q;
    std::size_t q_len = 0;
    bool found = false;
    for (std::size_t side = 0; side < 2; ++side) {
      for (const auto& cand : optimizer.favorable().afm(j.expr->input(side))) {
        const std::size_t len = lcp(p, cand).size();
        if (!found || len > q_len || (len == q_len && cand < q)) {
          q = cand;
          q_len = len;
          found = true;
        }
      }
    }
    fixed[i] = lcp(p, q);
    jt.tree.sets[i] = subtract(p, fixed[i]).attrs();
  }

  const OrderAssignment free_orders = tree_approx(jt.tree);
  Optimizer forced = optimizer;
  bool changed = false;
  for (std::size_t i = 0; i < jt.joins.size(); ++i) {
    SortOrder reworked = concat(fixed[i], free_orders[i]);
    changed = changed || reworked != jt.joins[i]->input_order;
    forced.force_order(*jt.joins[i]->expr, std::move(reworked));
  }
  if (!changed) return res;

  PlanPtr candidate = forced.optimize(root, required);
  if (candidate->total_cost <= plan->total_cost) {
    res.plan = candidate;
    res.accepted = true;
    res.cost_after = candidate->total_cost;
    res.benefit_after = join_order_benefit(*candidate);
  }
  return res;
}

QueryPlan plan_query(const Catalog& catalog, const CostParams& params, const QuerySpec& query, Heuristic heuristic,
                     bool refine) {
  Optimizer opt(catalog, params, referenced_attributes(query), heuristic);
  QueryPlan out;
  out.plan = opt.optimize(query);
  if (refine) {
    out.refine = refine_plan(out.plan, *query.root, query.required_output_order, opt);
    out.plan = out.refine->plan;
  }
  return out;
}

}  // namespace ordopt

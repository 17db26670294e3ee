#include "ordopt/optimizer.hpp"

#include <algorithm>
#include <cmath>

#include "ordopt/error.hpp"

namespace ordopt {

std::string_view heuristic_name(Heuristic h) {
  switch (h) {
    case Heuristic::arbitrary: return "arbitrary";
    case Heuristic::postgres: return "postgres";
    case Heuristic::favorable: return "favorable";
    case Heuristic::exhaustive: return "exhaustive";
  }
  return "?";
}

Heuristic parse_heuristic(std::string_view name) {
  for (auto h : {Heuristic::arbitrary, Heuristic::postgres, Heuristic::favorable, Heuristic::exhaustive}) {
    if (heuristic_name(h) == name) return h;
  }
  throw ConfigError("unknown heuristic '" + std::string(name) + "'");
}

std::vector<SortOrder> interesting_orders(const FavorableOrderSet& left, const FavorableOrderSet& right,
                                          const AttrSet& s, const SortOrder& o) {
  FavorableOrderSet t = afm_wrt(left, s);
  for (const auto& x : afm_wrt(right, s)) t.insert(x);
  t.insert(lcp_with_set(o, s));

  std::vector<SortOrder> out;
  for (const auto& a : t) {
    const bool redundant = std::any_of(t.begin(), t.end(), [&](const SortOrder& b) { return is_strict_prefix(a, b); });
    if (!redundant) out.push_back(concat(a, canonical_permutation(s - a.attrs())));
  }
  if (out.empty()) out.push_back(canonical_permutation(s));
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

bool better_plan(const PlanNode& a, const PlanNode& b) {
  const double scale = std::max(std::abs(a.total_cost), std::abs(b.total_cost));
  if (std::abs(a.total_cost - b.total_cost) > 1e-9 * scale) return a.total_cost < b.total_cost;
  if (a.produced_order != b.produced_order) return a.produced_order < b.produced_order;
  return node_count(a) < node_count(b);
}

Optimizer::Optimizer(const Catalog& catalog, CostParams params, AttrSet query_attrs, Heuristic heuristic,
                     OracleGuard guard)
    : catalog_(&catalog),
      params_(params),
      query_attrs_(query_attrs),
      heuristic_(heuristic),
      guard_(guard),
      stats_(catalog, params.cfg),
      favorable_(catalog, std::move(query_attrs)) {
  params_.validate();
}

void Optimizer::set_favorable_source(FavorableSource source) {
  source_ = std::move(source);
  memo_.clear();
}

void Optimizer::force_order(const LogicalExpr& node, SortOrder order) {
  if (node.kind() != ExprKind::join && node.kind() != ExprKind::group_by) {
    throw Unsatisfiable("orders can only be forced on joins and group-bys");
  }
  const AttrSet& s = node.kind() == ExprKind::join ? node.as<JoinOp>().join_attrs : node.as<GroupByOp>().keys;
  if (order.attrs() != s || order.size() != s.size()) {
    throw Unsatisfiable("forced order " + to_string(order) + " is not a permutation of " + to_string(s));
  }
  forced_[&node] = std::move(order);
  memo_.clear();
}

std::vector<SortOrder> Optimizer::candidate_orders(const LogicalExpr& e, const SortOrder& o) {
  if (auto it = forced_.find(&e); it != forced_.end()) return {it->second};
  const bool is_join = e.kind() == ExprKind::join;
  const AttrSet& s = is_join ? e.as<JoinOp>().join_attrs : e.as<GroupByOp>().keys;
  switch (heuristic_) {
    case Heuristic::arbitrary:
      return {canonical_permutation(s)};
    case Heuristic::postgres: {
      std::vector<SortOrder> out;
      for (const auto& a : s) out.push_back(concat(SortOrder{a}, canonical_permutation(s - AttrSet{a})));
      return out;
    }
    case Heuristic::favorable: {
      auto fav = [&](const LogicalExpr& x) { return source_ ? source_(x) : favorable_.afm(x); };
      return interesting_orders(fav(e.input(0)), is_join ? fav(e.input(1)) : FavorableOrderSet{}, s, o);
    }
    case Heuristic::exhaustive:
      if (!guard_.disabled && s.size() > guard_.max_attrs) {
        throw TooLarge("exhaustive search over " + std::to_string(s.size()) + " attributes exceeds the guard of " +
                       std::to_string(guard_.max_attrs));
      }
      return all_permutations(s);
  }
  return {};
}

std::shared_ptr<PlanNode> Optimizer::make_node(PhysOp op, const LogicalExpr& e, SortOrder produced, double node_cost,
                             std::vector<PlanPtr> children) {
  auto n = std::make_shared<PlanNode>();
  n->op = op;
  n->expr = &e;
  n->produced_order = std::move(produced);
  n->node_cost = node_cost;
  n->total_cost = node_cost;
  for (const auto& c : children) n->total_cost += c->total_cost;
  n->children = std::move(children);
  const ExprStats& st = stats_.of(e);
  n->est_rows = st.rows;
  n->est_blocks = st.blocks;
  return n;
}

PlanPtr Optimizer::enforce(const LogicalExpr& e, PlanPtr plan, const SortOrder& o) {
  if (is_prefix(o, plan->produced_order)) return plan;
  const SortOrder known = lcp(o, plan->produced_order);
  const double cost = coe_partial(stats_, e, plan->produced_order, o, params_);
  auto n = make_node(known.empty() ? PhysOp::full_sort : PhysOp::partial_sort, e, o, cost, {std::move(plan)});
  n->input_order = known;
  return n;
}

std::vector<PlanPtr> Optimizer::natives(const LogicalExpr& e, const SortOrder& o) {
  std::vector<PlanPtr> out;
  switch (e.kind()) {
    case ExprKind::scan: {
      const auto& op = e.as<ScanOp>();
      const auto& rel = catalog_->relation(op.relation);
      out.push_back(make_node(PhysOp::table_scan, e, qualify(op, rel.clustering_order),
                              table_scan_cost(rel, params_.cfg), {}));
      for (const auto& idx : scan_covering_indices(*catalog_, op, query_attrs_)) {
        auto n = make_node(
            PhysOp::covering_index_scan, e, qualify(op, idx.key_order), index_scan_blocks(rel, idx, params_.cfg), {});
        n->est_blocks = n->node_cost;
        n->index = idx;
        out.push_back(n);
      }
      break;
    }
    case ExprKind::select: {
      auto child = optimize(e.input(), o);
      SortOrder produced = child->produced_order;
      out.push_back(make_node(PhysOp::filter, e, std::move(produced), 0.0, {child}));
      break;
    }
    case ExprKind::project: {
      auto child = optimize(e.input(), o);
      out.push_back(make_node(PhysOp::project, e, lcp_with_set(child->produced_order, e.as<ProjectOp>().cols), 0.0,
                              {child}));
      break;
    }
    case ExprKind::join: {
      const auto& l = e.input(0);
      const auto& r = e.input(1);
      const double cm = merge_join_cost(stats_.rows(l), stats_.rows(r), params_);
      for (const auto& p : candidate_orders(e, o)) {
        auto n = make_node(PhysOp::merge_join, e, p, cm, {optimize(l, p), optimize(r, p)});
        n->input_order = p;
        out.push_back(n);
      }
      if (params_.hashjoin_enabled) {
        out.push_back(make_node(PhysOp::hash_join, e, {}, hash_join_cost(stats_.blocks(l), stats_.blocks(r), params_),
                                {optimize(l, {}), optimize(r, {})}));
      }
      break;
    }
    case ExprKind::group_by: {
      const auto& in = e.input();
      for (const auto& p : candidate_orders(e, o)) {
        auto n = make_node(PhysOp::sort_group_by, e, p, 0.0, {optimize(in, p)});
        n->input_order = p;
        out.push_back(n);
      }
      if (params_.hashjoin_enabled) {
        out.push_back(
            make_node(PhysOp::hash_group_by, e, {}, hash_group_by_cost(stats_.blocks(in), params_), {optimize(in, {})}));
      }
      break;
    }
  }
  return out;
}

PlanPtr Optimizer::optimize(const LogicalExpr& e, const SortOrder& o) {
  if (!o.attrs().is_subset_of(e.schema())) {
    throw Unsatisfiable("order " + to_string(o) + " is not over the expression's output");
  }
  const auto key = std::make_pair(&e, o);
  if (auto it = memo_.find(key); it != memo_.end()) return it->second;

  PlanPtr best;
  auto consider = [&](PlanPtr cand) {
    if (!best || better_plan(*cand, *best)) best = std::move(cand);
  };
  // a sort always sits directly on an operator, never on another sort
  for (std::size_t len = o.size() + 1; len-- > 0;) {
    for (auto& n : natives(e, o.prefix(len))) consider(enforce(e, std::move(n), o));
  }
  if (!best) throw Unsatisfiable("no plan for goal " + to_string(o));
  memo_.emplace(key, best);
  return best;
}

}  // namespace ordopt

#include "ordopt/stats.hpp"

#include <algorithm>
#include <cmath>

#include "ordopt/error.hpp"

namespace ordopt {

double blocks_for(double rows, double width_bytes, const BlockConfig& cfg) {
  if (rows <= 0.0) return 0.0;
  const double x = rows * width_bytes / static_cast<double>(cfg.block_bytes);
  const double r = std::round(x);
  if (std::abs(x - r) <= 1e-9 * std::max(1.0, x)) return std::max(1.0, r);
  return std::max(1.0, std::ceil(x));
}

const ExprStats& Statistics::of(const LogicalExpr& e) {
  auto it = cache_.find(&e);
  if (it != cache_.end()) return it->second;
  ExprStats s = compute(e);
  return cache_.emplace(&e, std::move(s)).first->second;
}

namespace {

double capped(double d, double rows) { return d < 0 ? d : std::max(1.0, std::min(d, rows)); }

void finish(ExprStats& s, const BlockConfig& cfg) {
  s.width_bytes = 0.0;
  for (auto& [name, a] : s.attrs) {
    s.width_bytes += a.width_bytes;
    a.distinct = capped(a.distinct, s.rows);
  }
  s.blocks = blocks_for(s.rows, s.width_bytes, cfg);
}

}  // namespace

ExprStats Statistics::compute(const LogicalExpr& e) {
  ExprStats out;
  switch (e.kind()) {
    case ExprKind::scan: {
      const auto& op = e.as<ScanOp>();
      const auto& rel = catalog_->relation(op.relation);
      out.rows = static_cast<double>(rel.row_count);
      for (const auto& [bare, name] : op.exposed) {
        auto d = rel.distincts.find(bare);
        out.attrs[name] = {rel.column_bytes(), d == rel.distincts.end() ? -1.0 : static_cast<double>(d->second)};
      }
      break;
    }
    case ExprKind::select: {
      const auto& in = of(e.input());
      out.rows = std::max(1.0, in.rows * e.as<SelectOp>().selectivity);
      out.attrs = in.attrs;
      break;
    }
    case ExprKind::project: {
      const auto& in = of(e.input());
      out.rows = in.rows;
      for (const auto& a : e.as<ProjectOp>().cols) out.attrs[a] = in.attrs.at(a);
      break;
    }
    case ExprKind::join: {
      const auto& op = e.as<JoinOp>();
      const auto& l = of(e.input(0));
      const auto& r = of(e.input(1));
      if (op.full_outer) {
        out.rows = l.rows + r.rows;
      } else {
        double denom = 1.0;
        for (const auto& a : op.join_attrs) {
          const double dl = l.attrs.at(a).distinct;
          const double dr = r.attrs.at(a).distinct;
          if (dl < 0 || dr < 0) throw UnknownStatistic("no distinct count for join attribute '" + a + "'");
          denom *= std::max(dl, dr);
        }
        out.rows = std::max(1.0, l.rows * r.rows / denom);
      }
      out.attrs = l.attrs;
      for (const auto& [name, a] : r.attrs) {
        auto [it, fresh] = out.attrs.emplace(name, a);
        if (!fresh && it->second.distinct >= 0 && a.distinct >= 0) {
          it->second.distinct = op.full_outer ? std::max(it->second.distinct, a.distinct)
                                              : std::min(it->second.distinct, a.distinct);
        }
      }
      break;
    }
    case ExprKind::group_by: {
      const auto& op = e.as<GroupByOp>();
      const auto& in = of(e.input());
      out.rows = distinct_count(e.input(), op.keys);
      for (const auto& k : op.keys) out.attrs[k] = in.attrs.at(k);
      const double agg_width =
          op.aggregates.empty() ? 0.0 : op.agg_width_bytes / static_cast<double>(op.aggregates.size());
      for (const auto& a : op.aggregates) out.attrs[a] = {agg_width, out.rows};
      finish(out, cfg_);
      if (op.aggregates.empty()) {
        out.width_bytes += op.agg_width_bytes;
        out.blocks = blocks_for(out.rows, out.width_bytes, cfg_);
      }
      return out;
    }
  }
  finish(out, cfg_);
  return out;
}

double Statistics::distinct_count(const LogicalExpr& e, const AttrSet& s) {
  if (!s.is_subset_of(e.schema())) {
    throw UnknownAttribute("attributes " + to_string(s - e.schema()) + " are not in the expression's output");
  }
  const ExprStats& st = of(e);
  double d = 1.0;
  for (const auto& a : s) {
    const double da = st.attrs.at(a).distinct;
    if (da < 0) throw UnknownStatistic("no distinct count for attribute '" + a + "'");
    d *= da;
  }
  return std::max(1.0, std::min(d, st.rows));
}

}  // namespace ordopt

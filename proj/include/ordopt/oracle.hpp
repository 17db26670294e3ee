#pragma once

// Exhaustive reference implementations. Nothing here consults the
// favorable-order, optimizer or refinement code.

#include <cstdint>
#include <map>
#include <utility>
#include <vector>

#include "ordopt/catalog.hpp"
#include "ordopt/cost_model.hpp"
#include "ordopt/labeled_tree.hpp"
#include "ordopt/logical_expr.hpp"
#include "ordopt/stats.hpp"
#include "ordopt/tuple.hpp"

namespace ordopt {

struct OracleGuard {
  std::size_t max_attrs = 6;
  std::size_t max_nodes = 9;
  std::int64_t max_rows = 1'000'000;
  /// Skips every guard check.
  bool disabled = false;

  /// Defaults, with `disabled` set when ORDOPT_GUARD_OVERRIDE=1.
  static OracleGuard from_env();
};

/// All |s|! orders of `s`, lexicographic.
std::vector<SortOrder> all_permutations(const AttrSet& s);

/// Minimum-cost search over every permutation at every order-sensitive node,
/// over the same operators and costs the optimizer uses.
class BruteForcePlanner {
 public:
  BruteForcePlanner(const Catalog& catalog, CostParams params, AttrSet query_attrs, OracleGuard guard = {});

  /// cbp(e, o). Throws TooLarge if a join or group-by exceeds max_attrs.
  double cbp(const LogicalExpr& e, const SortOrder& o);

  Statistics& stats() { return stats_; }
  const CostParams& params() const { return params_; }
  const OracleGuard& guard() const { return guard_; }

 private:
  const std::vector<SortOrder>& perms(const AttrSet& s);

  const Catalog* catalog_;
  CostParams params_;
  AttrSet query_attrs_;
  OracleGuard guard_;
  Statistics stats_;
  std::map<std::pair<const LogicalExpr*, SortOrder>, double> memo_;
  std::map<AttrSet, std::vector<SortOrder>> perm_cache_;
};

double brute_best_plan(const Catalog& catalog, const CostParams& params, const QuerySpec& query,
                       OracleGuard guard = {});

/// Exact maximum of benefit() over all assignments. Throws TooLarge unless
/// the product of |s_i|! is at most 10^7 and the tree has at most max_nodes.
int brute_tree_benefit(const LabeledTree& t, OracleGuard guard = {});

/// Full-key ascending sort. Throws TooLarge beyond max_rows.
std::vector<Tuple> reference_sort(std::vector<Tuple> input, OracleGuard guard = {});

}  // namespace ordopt

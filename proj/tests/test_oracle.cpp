#include <doctest.h>

#include <cstdlib>

#include "fixtures.hpp"
#include "ordopt/error.hpp"
#include "ordopt/oracle.hpp"

using namespace ordopt;
using namespace ordopt::testing;

TEST_CASE("all permutations in lexicographic order") {
  const auto p = all_permutations({"c", "a", "b"});
  REQUIRE(p.size() == 6);
  CHECK(p.front() == SortOrder{"a", "b", "c"});
  CHECK(p[1] == SortOrder{"a", "c", "b"});
  CHECK(p.back() == SortOrder{"c", "b", "a"});
  CHECK(all_permutations({}) == std::vector<SortOrder>{SortOrder{}});
  CHECK(all_permutations({"a", "b", "c", "d", "e"}).size() == 120);
}

TEST_CASE("reference sort") {
  std::vector<Tuple> in = {{{2, 1}, 1}, {{1, 9}, 1}, {{2, 0}, 1}, {{1, 9}, 2}};
  const auto out = reference_sort(in);
  CHECK(out[0].keys == std::vector<std::int64_t>{1, 9});
  CHECK(out[1].keys == std::vector<std::int64_t>{1, 9});
  CHECK(out[1].payload_bytes == 2);
  CHECK(out[2].keys == std::vector<std::int64_t>{2, 0});
  OracleGuard tiny;
  tiny.max_rows = 3;
  CHECK_THROWS_AS(reference_sort(in, tiny), TooLarge);
  tiny.disabled = true;
  CHECK(reference_sort(in, tiny).size() == 4);
}

TEST_CASE("brute tree benefit") {
  const LabeledTree path = LabeledTree::path({{"a", "b"}, {"a", "b", "c"}, {"b", "c"}});
  CHECK(brute_tree_benefit(path) == 3);
  LabeledTree big;
  for (int i = 0; i < 10; ++i) {
    big.sets.push_back({"a"});
    big.parent.push_back(i - 1);
  }
  CHECK_THROWS_AS(brute_tree_benefit(big), TooLarge);
  OracleGuard off;
  off.disabled = true;
  CHECK(brute_tree_benefit(big, off) == 9);
}

TEST_CASE("brute-force planner") {
  const auto a1 = load_fixture("a1");
  CHECK(brute_best_plan(a1.catalog, {}, a1.query) == doctest::Approx(23493.372912).epsilon(1e-9));
  const auto q3 = load_fixture("q3");
  CHECK(brute_best_plan(q3.catalog, {}, q3.query) == doctest::Approx(63780.136273).epsilon(1e-9));

  const auto q5 = load_fixture("q5");
  OracleGuard small;
  small.max_attrs = 4;
  CHECK_THROWS_AS(brute_best_plan(q5.catalog, {}, q5.query, small), TooLarge);

  BruteForcePlanner planner(a1.catalog, {}, referenced_attributes(a1.query));
  CHECK_THROWS_AS(planner.cbp(*a1.query.root, SortOrder{"lineitem.l_comment"}), Unsatisfiable);
  // a longer goal never costs less than its prefix
  const LogicalExpr& scan = a1.query.root->input();
  CHECK(planner.cbp(scan, {"lineitem.l_suppkey"}) <= planner.cbp(scan, {"lineitem.l_suppkey", "lineitem.l_partkey"}));
  CHECK(planner.cbp(scan, {}) <= planner.cbp(scan, {"lineitem.l_suppkey"}));
}

TEST_CASE("guard override from the environment") {
  ::setenv("ORDOPT_GUARD_OVERRIDE", "1", 1);
  CHECK(OracleGuard::from_env().disabled);
  ::setenv("ORDOPT_GUARD_OVERRIDE", "0", 1);
  CHECK_FALSE(OracleGuard::from_env().disabled);
  ::unsetenv("ORDOPT_GUARD_OVERRIDE");
  CHECK_FALSE(OracleGuard::from_env().disabled);
}

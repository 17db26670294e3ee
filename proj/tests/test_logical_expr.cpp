#include <doctest.h>

#include "fixtures.hpp"
#include "ordopt/error.hpp"
#include "ordopt/json_util.hpp"
#include "ordopt/logical_expr.hpp"

using namespace ordopt;
using namespace ordopt::testing;

namespace {

QuerySpec parse_q3(const Catalog& cat, const char* expr_text) {
  return parse_query(std::string(R"({"expr": )") + expr_text + "}", cat);
}

}  // namespace

TEST_CASE("the Q3 analog parses into its tree") {
  const auto f = load_fixture("q3");
  const LogicalExpr& gb = *f.query.root;
  REQUIRE(gb.kind() == ExprKind::group_by);
  CHECK(gb.as<GroupByOp>().keys == AttrSet{"ps.ps_availqty", "ps.ps_partkey", "ps.ps_suppkey"});
  CHECK(gb.as<GroupByOp>().aggregates == std::vector<Attribute>{"sum_quantity"});
  const LogicalExpr& join = gb.input();
  REQUIRE(join.kind() == ExprKind::join);
  CHECK(join.as<JoinOp>().join_attrs == AttrSet{"ps.ps_partkey", "ps.ps_suppkey"});
  CHECK(join.input(0).kind() == ExprKind::scan);
  const LogicalExpr& sel = join.input(1);
  REQUIRE(sel.kind() == ExprKind::select);
  CHECK(sel.as<SelectOp>().selectivity == 0.5);
  const auto& lscan = sel.input().as<ScanOp>();
  CHECK(lscan.relation == "lineitem");
  CHECK(lscan.exposed.at("l_suppkey") == "ps.ps_suppkey");
  CHECK(lscan.exposed.at("l_quantity") == "l.l_quantity");
  CHECK(f.query.required_output_order == SortOrder{"ps.ps_partkey"});
  CHECK(gb.schema() == AttrSet{"ps.ps_availqty", "ps.ps_partkey", "ps.ps_suppkey", "sum_quantity"});
}

TEST_CASE("serialization round-trips") {
  for (const char* stem : {"example1", "a1", "q3", "q4", "q5", "postopt"}) {
    CAPTURE(stem);
    const auto f = load_fixture(stem);
    const QuerySpec again = parse_query(serialize_query(f.query), f.catalog);
    CHECK(again == f.query);
    CHECK(serialize_query(again) == serialize_query(f.query));
  }
}

TEST_CASE("equated names may be listed in either orientation") {
  const auto f = load_fixture("q3");
  const QuerySpec flipped = parse_q3(f.catalog, R"({"op": "join", "on": [["l.l_suppkey", "ps.ps_suppkey"]],
      "left": {"op": "scan", "relation": "partsupp", "alias": "ps"},
      "right": {"op": "scan", "relation": "lineitem", "alias": "l"}})");
  CHECK(flipped.root->as<JoinOp>().join_attrs == AttrSet{"ps.ps_suppkey"});
}

TEST_CASE("pre-order walk and referenced attributes") {
  const auto f = load_fixture("q3");
  const auto nodes = preorder(*f.query.root);
  REQUIRE(nodes.size() == 5);
  CHECK(nodes[0] == f.query.root.get());
  CHECK(nodes[2]->kind() == ExprKind::scan);
  CHECK(nodes[4]->kind() == ExprKind::scan);
  const AttrSet used = referenced_attributes(f.query);
  CHECK(used.contains("ps.ps_availqty"));
  CHECK(used.contains("l.l_linestatus"));
  CHECK_FALSE(used.contains("l.l_comment"));
}

TEST_CASE("malformed queries are rejected with a path") {
  const auto f = load_fixture("q3");
  CHECK_THROWS_AS(parse_q3(f.catalog, R"({"op": "scan", "relation": "nation"})"), ValidationError);
  CHECK_THROWS_AS(parse_q3(f.catalog, R"({"op": "scan", "relation": "partsupp", "bogus": 1})"), ValidationError);
  CHECK_THROWS_AS(parse_q3(f.catalog, R"({"op": "warp", "input": {}})"), ValidationError);
  CHECK_THROWS_AS(parse_q3(f.catalog, R"({"op": "project", "cols": ["ps.nothing"],
      "input": {"op": "scan", "relation": "partsupp", "alias": "ps"}})"),
                  ValidationError);
  CHECK_THROWS_AS(parse_q3(f.catalog, R"({"op": "join", "on": [["ps.ps_suppkey", "ps.ps_partkey"]],
      "left": {"op": "scan", "relation": "partsupp", "alias": "ps"},
      "right": {"op": "scan", "relation": "lineitem", "alias": "l"}})"),
                  ValidationError);
  CHECK_THROWS_AS(parse_query(R"({"expr": {"op": "scan", "relation": "partsupp"}, "order_by": ["partsupp.zz"]})",
                              f.catalog),
                  ValidationError);
  try {
    parse_q3(f.catalog, R"({"op": "select", "selectivity": 2, "input": {"op": "scan", "relation": "partsupp"}})");
    FAIL("expected a validation error");
  } catch (const ValidationError& e) {
    CHECK(e.path() == "$.expr");
  }
}

TEST_CASE("builders check their invariants") {
  const Catalog cat = Catalog::load(fixture("q4.json"));
  auto r1 = make_scan(cat.relation("R1"));
  auto r2 = make_scan(cat.relation("R2"));
  CHECK_THROWS_AS(make_join(r1, r2, {"R1.c1"}), ValidationError);
  CHECK_THROWS_AS(make_join(r1, r1, {}), ValidationError);
  CHECK_THROWS_AS(make_select(r1, -0.1, {}), ValidationError);
  CHECK_THROWS_AS(make_group_by(r1, {"R1.c9"}), ValidationError);
  CHECK_THROWS_AS(make_query(r1, SortOrder{"R2.c1"}), ValidationError);
  CHECK(kind_name(ExprKind::group_by) == "groupby");
}

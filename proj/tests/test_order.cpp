#include <doctest.h>

#include "ordopt/error.hpp"
#include "ordopt/order.hpp"

using namespace ordopt;

TEST_CASE("duplicate attributes are rejected") {
  CHECK_THROWS_AS(SortOrder({"a", "b", "a"}), DuplicateAttribute);
  CHECK_NOTHROW(SortOrder({"a", "b"}));
}

TEST_CASE("prefix relations") {
  const SortOrder ab{"a", "b"};
  const SortOrder abc{"a", "b", "c"};
  CHECK(is_prefix(SortOrder{}, ab));
  CHECK(is_prefix(ab, ab));
  CHECK(is_prefix(ab, abc));
  CHECK_FALSE(is_prefix(abc, ab));
  CHECK(is_strict_prefix(ab, abc));
  CHECK_FALSE(is_strict_prefix(ab, ab));
  CHECK_FALSE(is_prefix(SortOrder{"b"}, ab));
}

TEST_CASE("longest common prefix") {
  CHECK(lcp(SortOrder{"a", "b", "c"}, SortOrder{"a", "b", "d"}) == SortOrder{"a", "b"});
  CHECK(lcp(SortOrder{"a", "b"}, SortOrder{"b", "a"}).empty());
  CHECK(lcp(SortOrder{}, SortOrder{"a"}).empty());
  CHECK(lcp(SortOrder{"a"}, SortOrder{"a", "b"}) == SortOrder{"a"});
}

TEST_CASE("concat and subtract") {
  CHECK(concat(SortOrder{"a"}, SortOrder{"b", "c"}) == SortOrder{"a", "b", "c"});
  CHECK_THROWS_AS(concat(SortOrder{"a"}, SortOrder{"a"}), DuplicateAttribute);
  CHECK(subtract(SortOrder{"a", "b", "c"}, SortOrder{"a"}) == SortOrder{"b", "c"});
  CHECK(subtract(SortOrder{"a", "b"}, SortOrder{"a", "b"}).empty());
  CHECK_THROWS_AS(subtract(SortOrder{"a", "b"}, SortOrder{"b"}), NotAPrefix);
}

TEST_CASE("lcp with an attribute set stops at the first outsider") {
  const SortOrder o{"a", "b", "c", "d"};
  CHECK(lcp_with_set(o, AttrSet{"a", "b", "d"}) == SortOrder{"a", "b"});
  CHECK(lcp_with_set(o, AttrSet{"b"}).empty());
  CHECK(lcp_with_set(o, AttrSet{"a", "b", "c", "d", "e"}) == o);
}

TEST_CASE("canonical permutation is lexicographic") {
  CHECK(canonical_permutation(AttrSet{"y", "c", "m"}) == SortOrder{"c", "m", "y"});
  CHECK(canonical_permutation(AttrSet{}).empty());
}

TEST_CASE("set algebra") {
  const AttrSet s{"a", "b", "c"};
  const AttrSet t{"b", "c", "d"};
  CHECK((s | t) == AttrSet{"a", "b", "c", "d"});
  CHECK((s & t) == AttrSet{"b", "c"});
  CHECK((s - t) == AttrSet{"a"});
  CHECK(AttrSet{"b"}.is_subset_of(s));
  CHECK(SortOrder({"c", "a"}).attrs() == AttrSet{"a", "c"});
}

TEST_CASE("text form") {
  CHECK(to_string(SortOrder{"a", "b"}) == "(a,b)");
  CHECK(to_string(SortOrder{}) == "()");
}

#include <doctest.h>

#include <algorithm>
#include <vector>

#include "sfheap/forest.hpp"
#include "sfheap/instrument.hpp"

using namespace sfheap;

namespace {

std::vector<std::int64_t> child_keys(const IntForest& f, NodeRef x) {
  std::vector<std::int64_t> out;
  for (NodeRef c : f.children(x)) out.push_back(f.key(c));
  return out;
}

NodeRef put(IntForest& f, HeapRef h, std::int64_t key) {
  NodeRef x = f.make_item(static_cast<std::uint64_t>(key), key);
  f.insert(x, h);
  return x;
}

}  // namespace

TEST_CASE("make_heap starts empty and rejects delete-min") {
  IntForest f;
  HeapRef h = f.make_heap(Policy::simple);
  CHECK_FALSE(f.find_min(h).has_value());
  CHECK(f.empty(h));
  CHECK_THROWS_AS(f.delete_min(h), Error);
  put(f, h, 7);
  REQUIRE(f.find_min(h).has_value());
  CHECK(f.key(*f.find_min(h)) == 7);
}

TEST_CASE("make_item") {
  IntForest f;
  NodeRef x = f.make_item(99, 5);
  CHECK(f.key(x) == 5);
  CHECK(f.info(x) == 99);
  CHECK(f.rank(x) == 0);
  CHECK(f.state(x) == NodeState::unmarked);
  CHECK(f.children(x).empty());
  CHECK_FALSE(f.in_heap(x));
  CHECK_THROWS_AS(f.make_item(1, ItemKey<std::int64_t>::bottom()), Error);
  NodeRef y = f.make_item(99, 5);
  CHECK_FALSE(x == y);
}

TEST_CASE("link: larger key becomes first child, ties go to the first argument") {
  IntForest f;
  NodeRef x = f.make_item(0, 3);
  NodeRef y = f.make_item(0, 2);
  NodeRef w = f.link(x, y);
  CHECK(w == y);
  REQUIRE(f.children(y).size() == 1);
  CHECK(f.children(y)[0] == x);
  CHECK(f.rank(x) == 0);
  CHECK(f.rank(y) == 0);
  CHECK(f.counters().comparisons == 1);

  NodeRef a = f.make_item(0, 4);
  NodeRef b = f.make_item(0, 4);
  CHECK(f.link(a, b) == a);
  CHECK_THROWS_AS(f.link(a, a), Error);
}

TEST_CASE("cut repairs the child list") {
  IntForest f;
  NodeRef p = f.make_item(0, 0);
  NodeRef a = f.make_item(0, 1), b = f.make_item(0, 2), c = f.make_item(0, 3);
  // Prepending c, b, a yields the list [a, b, c].
  f.link(p, c);
  f.link(p, b);
  f.link(p, a);
  REQUIRE(child_keys(f, p) == std::vector<std::int64_t>{1, 2, 3});

  f.cut(b);
  CHECK(child_keys(f, p) == std::vector<std::int64_t>{1, 3});
  CHECK(f.is_root(b));
  CHECK(f.store()[f.index_of(a)].after == f.index_of(c));
  CHECK(f.store()[f.index_of(c)].before == f.index_of(a));

  f.cut(a);
  CHECK(child_keys(f, p) == std::vector<std::int64_t>{3});
  f.cut(c);
  CHECK(f.children(p).empty());
  CHECK_THROWS_AS(f.cut(c), Error);
}

TEST_CASE("insert links the new item with the root") {
  IntForest f;
  HeapRef h = f.make_heap(Policy::simple);
  NodeRef five = put(f, h, 5);
  CHECK(f.is_root(five));
  NodeRef three = put(f, h, 3);
  CHECK(*f.find_min(h) == three);
  CHECK(f.children(three) == std::vector<NodeRef>{five});

  IntForest g;
  HeapRef k = g.make_heap(Policy::simple);
  put(g, k, 5);
  NodeRef second = put(g, k, 5);
  CHECK(*g.find_min(k) == second);

  NodeRef z = f.make_item(0, 1);
  f.insert(z, h);
  CHECK_THROWS_AS(f.insert(z, h), Error);
}

TEST_CASE("meld") {
  IntForest f;
  HeapRef e = f.make_heap(Policy::simple);
  HeapRef h = f.make_heap(Policy::simple);
  put(f, h, 2);
  HeapRef m = f.meld(h, e);
  CHECK(f.size(m) == 1);
  CHECK(f.key(*f.find_min(m)) == 2);
  CHECK_FALSE(f.valid(e));

  HeapRef g = f.make_heap(Policy::simple);
  NodeRef nine = put(f, g, 9);
  std::int64_t before = compute_potential(f).phi;
  m = f.meld(m, g);
  CHECK(compute_potential(f).phi == before);
  NodeRef root = *f.find_min(m);
  CHECK(f.key(root) == 2);
  CHECK(f.children(root) == std::vector<NodeRef>{nine});

  CHECK_THROWS_AS(f.meld(m, m), Error);
  HeapRef other = f.make_heap(Policy::classic);
  CHECK_THROWS_AS(f.meld(m, other), Error);
}

TEST_CASE("delete_min hand trace") {
  // Root 0 with child list [a(3), b(2), c(5, rank 1, child d(7))].
  IntForest g;
  HeapRef k = g.make_heap(Policy::simple);
  put(g, k, -1);
  put(g, k, 7);
  put(g, k, 5);
  g.delete_min(k);  // children [5, 7] fair-link: 5 wins with rank 1
  NodeRef c = *g.find_min(k);
  REQUIRE(g.key(c) == 5);
  REQUIRE(g.rank(c) == 1);
  NodeRef root = g.make_item(0, 0);
  g.insert(root, k);  // root 0 with child c
  put(g, k, 2);
  put(g, k, 3);
  NodeRef r = *g.find_min(k);
  REQUIRE(child_keys(g, r) == std::vector<std::int64_t>{3, 2, 5});

  OpCounters before = g.counters();
  auto removed = g.delete_min(k);
  OpCounters d = g.counters() - before;
  CHECK(removed.key == 0);
  NodeRef nr = *g.find_min(k);
  CHECK(g.key(nr) == 2);
  CHECK(g.rank(nr) == 2);
  CHECK(d.fair_links == 2);
  CHECK(d.naive_links == 0);
  CHECK(g.store().registry.empty());
  CHECK(check_structure(g, k).ok());
}

TEST_CASE("delete_min of a single node empties the heap") {
  IntForest f;
  HeapRef h = f.make_heap(Policy::simple);
  NodeRef x = put(f, h, 5);
  auto r = f.delete_min(h);
  CHECK(r.key == 5);
  CHECK(f.empty(h));
  CHECK_FALSE(f.valid(x));
  CHECK_THROWS_AS(f.key(x), Error);
}

TEST_CASE("decrease_key") {
  IntForest f;
  HeapRef h = f.make_heap(Policy::simple);
  NodeRef four = put(f, h, 4);
  NodeRef eight = put(f, h, 8);
  (void)eight;
  OpCounters before = f.counters();
  f.decrease_key(four, 1, h);
  CHECK(*f.find_min(h) == four);
  CHECK(f.key(four) == 1);
  CHECK((f.counters() - before).links() == 0);
  CHECK_THROWS_AS(f.decrease_key(four, 2, h), Error);

  SUBCASE("leaf decreased below the root wins the relink") {
    NodeRef leaf = put(f, h, 9);
    put(f, h, 0);
    f.decrease_key(leaf, -5, h);
    CHECK(*f.find_min(h) == leaf);
  }
  SUBCASE("equal key still restructures") {
    NodeRef leaf = put(f, h, 9);
    REQUIRE_FALSE(f.is_root(leaf));
    OpCounters b = f.counters();
    f.decrease_key(leaf, 9, h);
    CHECK((f.counters() - b).naive_links == 1);
    CHECK((f.counters() - b).cuts == 1);
  }
}

TEST_CASE("delete") {
  IntForest f;
  HeapRef h = f.make_heap(Policy::simple);
  NodeRef x = put(f, h, 3);
  auto r = f.erase(x, h);
  CHECK(r.key == 3);
  CHECK(f.empty(h));

  NodeRef a = put(f, h, 1);
  put(f, h, 2);
  put(f, h, 6);
  auto min = f.erase(a, h);
  CHECK(min.ref == a);
  CHECK(min.key == 1);
  CHECK(f.key(*f.find_min(h)) == 2);
}

TEST_CASE("find_min after several inserts") {
  IntForest f;
  HeapRef h = f.make_heap(Policy::simple);
  for (int k : {5, 2, 8}) put(f, h, k);
  CHECK(f.key(*f.find_min(h)) == 2);
}

TEST_CASE("keys use the full integer range") {
  IntForest f;
  HeapRef h = f.make_heap(Policy::simple);
  NodeRef lo = put(f, h, std::numeric_limits<std::int64_t>::min());
  put(f, h, std::numeric_limits<std::int64_t>::max());
  NodeRef mid = put(f, h, 0);
  f.erase(mid, h);
  CHECK(*f.find_min(h) == lo);
  CHECK(f.delete_min(h).key == std::numeric_limits<std::int64_t>::min());
  CHECK(f.delete_min(h).key == std::numeric_limits<std::int64_t>::max());
}

TEST_CASE("every policy sorts") {
  for (Policy p : kAllPolicies) {
    CAPTURE(to_string(p));
    IntForest f;
    HeapRef h = f.make_heap(p, 42);
    std::vector<NodeRef> items;
    for (int i = 0; i < 200; ++i) items.push_back(put(f, h, (i * 7919) % 211));
    for (int i = 0; i < 60; ++i) f.delete_min(h);
    std::vector<std::int64_t> out;
    while (!f.empty(h)) {
      out.push_back(f.delete_min(h).key);
      CHECK(check_structure(f, h).ok());
    }
    CHECK(std::is_sorted(out.begin(), out.end()));
    CHECK(out.size() == 140);
  }
}

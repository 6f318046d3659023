#include <doctest.h>

#include <cmath>
#include <unordered_map>

#include "sfheap/adversary.hpp"

using namespace sfheap;

namespace {

NodeRef child_of_degree(const IntForest& f, NodeRef root, std::size_t d) {
  for (NodeRef c : f.children(root))
    if (f.children(c).size() == d) return c;
  FAIL("no child of degree " << d);
  return {};
}

// Independent replay of a single-heap trace onto a forest, so the shape can
// be inspected afterwards.
struct Rebuilt {
  IntForest f;
  HeapRef h;
};

void rebuild(Rebuilt& r, const OpTrace& t, Policy p) {
  std::unordered_map<std::string, NodeRef> items;
  std::uint64_t id = 0;
  for (const TraceOp& op : t) {
    switch (op.verb) {
      case Verb::newheap: r.h = r.f.make_heap(p); break;
      case Verb::insert:
        REQUIRE(op.has_key);
        items[op.b] = r.f.make_item(id++, op.key);
        r.f.insert(items[op.b], r.h);
        break;
      case Verb::deletemin: r.f.delete_min(r.h); break;
      case Verb::decreasekey: r.f.decrease_key(items.at(op.a), op.key, r.h); break;
      default: FAIL("unexpected verb " << to_string(op.verb));
    }
  }
}

}  // namespace

TEST_CASE("shape specs") {
  CHECK(ShapeSpec::S(0).size() == 1);
  CHECK(ShapeSpec::S(4).size() == 5);
  // Children S(0..k-1) hold 1 + 2 + ... + k nodes.
  CHECK(ShapeSpec::T(2, 2).size() == 4);
  CHECK(ShapeSpec::T(10, 10).size() == 56);
  CHECK(ShapeSpec::T(3, 0).size() == 10);
  CHECK(ShapeSpec::T(4, 1).name() == "T(4,1)");
  CHECK_THROWS_AS(ShapeSpec::T(3, 4), Error);
  CHECK_THROWS_AS(ShapeSpec::T(0, 0), Error);
  CHECK_THROWS_AS(ShapeSpec::S(-1), Error);
}

TEST_CASE("verify_shape") {
  IntForest f;
  HeapRef h = f.make_heap(Policy::non_cascading);
  NodeRef x = f.make_item(0, 1);
  f.insert(x, h);
  CHECK(verify_shape(f, x, ShapeSpec::S(0)).ok);
  CHECK_FALSE(verify_shape(f, x, ShapeSpec::S(1)).ok);

  Adversary a;
  a.build(3);
  const IntForest& g = a.forest();
  NodeRef s2 = child_of_degree(g, a.root(), 2);
  CHECK(verify_shape(g, s2, ShapeSpec::S(2)).ok);
  ShapeCheck wrong = verify_shape(g, s2, ShapeSpec::S(1));
  CHECK_FALSE(wrong.ok);
  CHECK_FALSE(wrong.diff.empty());
  CHECK(verify_shape(g, a.root(), ShapeSpec::T(3, 3)).ok);

  a.convert_step();
  CHECK(verify_shape(g, a.root(), ShapeSpec::T(3, 2)).ok);
  CHECK_FALSE(verify_shape(g, a.root(), ShapeSpec::T(3, 1)).ok);
  CHECK_FALSE(verify_shape(g, a.root(), ShapeSpec::T(3, 3)).ok);
}

TEST_CASE("build_T") {
  SUBCASE("k = 2") {
    Adversary a;
    a.build(2);
    CHECK(a.verify().ok);
    CHECK(a.forest().size(a.heap()) == ShapeSpec::T(2, 2).size());
    CHECK(a.forest().size(a.heap()) == 4);
  }
  SUBCASE("k = 10") {
    Adversary a;
    a.build(10);
    CHECK(a.verify().ok);
    CHECK(a.forest().size(a.heap()) == 56);
    CHECK(a.log().total() == build_cost(10));
    CHECK(a.operations() == build_cost(10));
  }
  SUBCASE("O(k^3) operations with a stable constant") {
    double lo = 1e9, hi = 0;
    for (int k = 10; k <= 40; k += 5) {
      Adversary a;
      a.build(k);
      CHECK(a.log().total() == build_cost(k));
      double c = static_cast<double>(a.log().total()) / (k * k * k);
      lo = std::min(lo, c);
      hi = std::max(hi, c);
    }
    CHECK(hi / lo <= 2.0);
  }
  SUBCASE("continues upward only") {
    Adversary a;
    a.build(3);
    a.build(5);
    CHECK(a.verify().ok);
    CHECK(a.operations() == build_cost(5));
    CHECK_THROWS_AS(a.build(4), Error);
  }
}

TEST_CASE("promote") {
  for (int k : {1, 3}) {
    Adversary a;
    a.build(k);
    while (a.i() > 0) a.convert_step();
    REQUIRE(a.verify().ok);
    std::uint64_t before = a.log().total();
    a.promote();
    CHECK(a.log().total() - before == 1);
    CHECK(a.k() == k + 1);
    CHECK(a.i() == k + 1);
    CHECK(a.verify().ok);
  }
  Adversary a;
  a.build(2);
  CHECK_THROWS_AS(a.promote(), Error);
}

TEST_CASE("convert_step") {
  SUBCASE("T(2,1) -> T(2,0)") {
    Adversary a;
    a.build(2);
    a.convert_step();
    REQUIRE(a.shape().name() == "T(2,1)");
    BuildLog before = a.log();
    a.convert_step();
    CHECK(a.log().inserts - before.inserts == 2);
    CHECK(a.log().delete_mins - before.delete_mins == 1);
    CHECK(a.log().decrease_keys - before.decrease_keys == 0);
    CHECK(a.verify().ok);
  }
  SUBCASE("T(3,2) -> T(3,1)") {
    Adversary a;
    a.build(3);
    a.convert_step();
    BuildLog before = a.log();
    a.convert_step();
    CHECK(a.log().decrease_keys - before.decrease_keys == 1);
    CHECK(a.shape().name() == "T(3,1)");
    CHECK(a.verify().ok);
  }
  SUBCASE("i + 2 operations per step") {
    Adversary a;
    a.build(12);
    while (a.i() > 0) {
      int i = a.i();
      std::uint64_t before = a.log().total();
      a.convert_step();
      CHECK(a.log().total() - before == static_cast<std::uint64_t>(i + 2));
    }
  }
}

TEST_CASE("steady cycle") {
  for (auto [k, rounds] : {std::pair{4, 10}, {50, 100}}) {
    Adversary a;
    a.build(k);
    std::uint64_t n = a.forest().size(a.heap());
    for (int r = 0; r < rounds; ++r) {
      RoundStats s = a.steady_round();
      CHECK(s.delta.fair_links == static_cast<std::uint64_t>(k));
      CHECK(s.n == n + 1);
      CHECK(a.verify().ok);
    }
    CHECK(a.forest().size(a.heap()) == n);
  }
}

TEST_CASE("the schedule on SIMPLE stays logarithmic") {
  Adversary a(true);
  a.build(40);
  for (int r = 0; r < 30; ++r) a.steady_round();
  ScheduleCost c = price_trace(a.trace(), Policy::simple);
  std::size_t seen = 0;
  for (std::size_t j = c.records.size() - 60; j < c.records.size(); ++j) {
    const CostRecord& r = c.records[j];
    if (r.kind != OpKind::delete_min) continue;
    ++seen;
    CHECK(static_cast<double>(r.delta.links()) <= 2 * std::log2(static_cast<double>(r.n)));
  }
  CHECK(seen == 30);
  // The non-cascading heap pays k per cycle.
  ScheduleCost nc = price_trace(a.trace(), Policy::non_cascading);
  CHECK(nc.records.back().delta.fair_links == 40);
  CHECK(nc.operations == a.operations());
}

TEST_CASE("adversary traces replay against the oracle") {
  Adversary a(true);
  a.build(12);
  for (int r = 0; r < 20; ++r) a.steady_round();
  for (Policy p : kAllPolicies) {
    ReplayOptions o;
    o.policy_override = p;
    o.check_structure = p == Policy::simple || p == Policy::classic;
    ReplayReport r = replay_differential(a.trace(), o);
    CHECK_MESSAGE(r.ok, to_string(p), ": ", r.message);
  }
}

TEST_CASE("k = 10 dump round-trips and rebuilds T(10,10)") {
  Adversary a(true);
  a.build(10);
  OpTrace t = parse_trace(format_trace(a.trace()));
  CHECK(t == a.trace());
  Rebuilt r;
  rebuild(r, t, Policy::non_cascading);
  CHECK(verify_shape(r.f, r.f.ref_of(r.f.min_index(r.h)), ShapeSpec::T(10, 10)).ok);
}

TEST_CASE("run_lower_bound") {
  CHECK_THROWS_AS(run_lower_bound(5), Error);
  LowerBoundReport r = run_lower_bound(10'000);
  CHECK(build_cost(r.k) <= 10'000 / 3);
  CHECK(build_cost(r.k + 1) > 10'000 / 3);
  CHECK(r.build_ops == build_cost(r.k));
  CHECK(r.operations <= 10'000);
  CHECK(r.operations + 1 >= 10'000);
  CHECK(r.rounds == (r.operations - r.build_ops) / 2);
  CHECK(r.n == ShapeSpec::T(r.k, r.k).size() + 1);
  // Every cycle delete-min links k times on top of 1 + log_phi n.
  CHECK(r.cycle_delete_min_cost == doctest::Approx(1 + log_phi(static_cast<double>(r.n)) + r.k));
  CHECK(r.trace.empty());
  CHECK(run_lower_bound(10'000, true).trace.size() == r.operations);
}

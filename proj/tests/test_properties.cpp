// Randomized property checks over generated traces, one campaign per policy.

#include <doctest.h>

#include "sfheap/oracle.hpp"

using namespace sfheap;

namespace {

TraceProfile profile(Policy p, std::uint64_t seed, std::size_t ops) {
  TraceProfile t;
  t.policy = p;
  t.seed = seed;
  t.ops = ops;
  // Alternate between a narrow key range (many ties) and a wide one.
  if (seed % 2 == 0) t.key_max = 50;
  if (seed % 3 == 0) {
    t.w_decreasekey = 6;
    t.max_heap_size = 600;
  }
  return t;
}

ReplayOptions all_checks() {
  ReplayOptions o;
  o.check_structure = true;
  o.check_rank_bounds = true;
  o.check_active_children = true;
  return o;
}

}  // namespace

TEST_CASE("every fuzz state satisfies the structural invariants and rank bounds") {
  for (Policy p : kAllPolicies) {
    for (std::uint64_t seed = 1; seed <= 12; ++seed) {
      ReplayOptions o = all_checks();
      o.audit = p == Policy::simple;
      ReplayReport r = replay_differential(gen_trace(profile(p, seed, 1500)), o);
      CHECK_MESSAGE(r.ok, to_string(p), " seed ", seed, ": ", r.message);
      CHECK(r.states_checked > 0);
    }
  }
}

TEST_CASE("literal loops drift ranks; the parent-charging variants do not") {
  std::size_t drift = 0;
  for (Policy p : {Policy::increasing_rank, Policy::naive_increasing, Policy::randomized}) {
    for (std::uint64_t seed = 1; seed <= 6; ++seed) {
      OpTrace t = gen_trace(profile(p, seed, 1500));
      ReplayOptions o = all_checks();
      ReplayReport literal = replay_differential(t, o);
      CHECK_MESSAGE(literal.ok, literal.message);
      for (const auto& v : literal.reported.violations) drift += v.check == "rank<=degree";

      o.cascade.always_decrement_parent = true;
      o.cascade.randomized_from_parent = true;
      ReplayReport fixed = replay_differential(t, o);
      CHECK_MESSAGE(fixed.ok, to_string(p), " seed ", seed, ": ", fixed.message);
    }
  }
  CHECK(drift > 0);
}

TEST_CASE("simple: comparisons equal links") {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    ReplayReport r = replay_differential(gen_trace(profile(Policy::simple, seed, 2000)));
    REQUIRE(r.ok);
    CHECK(r.counters.comparisons == r.counters.links());
  }
  ReplayReport h = replay_differential(gen_trace(profile(Policy::heap_order, 3, 2000)));
  REQUIRE(h.ok);
  CHECK(h.counters.comparisons >= h.counters.links());
}

TEST_CASE("simple: cascades unmark iterations - 1 nodes and mark one") {
  IntForest f;
  HeapRef h = f.make_heap(Policy::simple);
  std::vector<NodeRef> items;
  for (int k = 0; k < 500; ++k) {
    items.push_back(f.make_item(0, 1000 + k));
    f.insert(items.back(), h);
  }
  f.delete_min(h);
  std::uint64_t state = 12345;
  for (int round = 0; round < 2000; ++round) {
    state = state * 6364136223846793005ULL + 1442695040888963407ULL;
    NodeRef x = items[1 + (state >> 33) % (items.size() - 1)];
    if (!f.valid(x) || f.is_root(x)) continue;
    // The root starts unmarked or gets unmarked by the cascade first.
    bool root_marked = f.state(*f.find_min(h)) == NodeState::marked;
    OpCounters before = f.counters();
    f.decrease_key(x, f.key(x) - 1, h);
    OpCounters d = f.counters() - before;
    CHECK(d.markings == 1);
    CHECK(d.unmarkings == d.iterations - 1 + (root_marked ? 1 : 0));
  }
}

TEST_CASE("increasing-rank and naive increasing-rank: iterations bounded by max rank") {
  for (bool always : {false, true}) {
    for (Policy p : {Policy::increasing_rank, Policy::naive_increasing}) {
      CascadeOptions c;
      c.always_decrement_parent = always;
      IntForest f(ForestOptions{c, false});
      HeapRef h = f.make_heap(p);
      std::vector<NodeRef> items;
      for (int k = 0; k < 3000; ++k) {
        items.push_back(f.make_item(0, 100000 + k));
        f.insert(items.back(), h);
      }
      f.delete_min(h);
      std::uint64_t s = 7;
      std::size_t broken = 0;
      for (int round = 0; round < 3000; ++round) {
        s = s * 6364136223846793005ULL + 1442695040888963407ULL;
        NodeRef x = items[1 + (s >> 33) % (items.size() - 1)];
        if (!f.valid(x)) continue;
        std::uint32_t max_rank = 0;
        for (Index i : detail::heap_nodes(f, h)) max_rank = std::max(max_rank, f.store()[i].rank);
        OpCounters before = f.counters();
        f.decrease_key(x, f.key(x) - 1, h);
        CHECK((f.counters() - before).iterations <= 1 + max_rank);
        if (round % 10 == 0) {
          f.delete_min(h);
          Verdict v = check_rank_bounds(f, h);
          v.merge(check_structure(f, h));
          broken += !v.ok();
          if (always) CHECK_MESSAGE(v.ok(), to_string(p), ": ", v.summary());
        }
      }
      // The default loops leave ranks behind when the cut child
      // outranks its parent; the fuzz states show it routinely.
      if (!always) CHECK(broken > 0);
    }
  }
}

TEST_CASE("randomized: replay is deterministic per seed") {
  OpTrace t = gen_trace(profile(Policy::randomized, 11, 3000));
  ReplayReport a = replay_differential(t);
  ReplayReport b = replay_differential(t);
  REQUIRE(a.ok);
  CHECK(a.counters == b.counters);
  CHECK(a.removed_keys == b.removed_keys);
}

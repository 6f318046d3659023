#ifndef SFHEAP_CASCADE_HPP
#define SFHEAP_CASCADE_HPP

// Decrease-key restructuring strategies. Each cascade_* function performs
// everything a policy does between replacing the key of non-root x and
// cutting x: its guard, the state change of the root h, and the
// rank-decreasing loop. None of them compares keys. They return the number
// of loop iterations, which is also added to store.counters.iterations.

#include <cstdint>

#include "sfheap/node_store.hpp"
#include "sfheap/policy.hpp"

namespace sfheap {

struct CascadeOptions {
  // Randomized cascading starts decrementing at x itself unless this is set.
  bool randomized_from_parent = false;
  // Increasing-rank variants: always decrement the cut node's parent and use
  // the rank test only to stop the climb above it. By default the parent is
  // skipped entirely when x.rank >= x.parent.rank.
  bool always_decrement_parent = false;
#ifdef SFHEAP_ENABLE_FAULT_INJECTION
  // Test-only mutation: the simple loop leaves marked nodes marked.
  bool fault_skip_unmark = false;
#endif
};

std::uint64_t cascade_simple(NodeStore& s, Index x, Index h,
                             const CascadeOptions& opt = {});
std::uint64_t cascade_increasing_rank(NodeStore& s, Index x, Index h,
                                      bool always_decrement_parent = false);
std::uint64_t cascade_passive_child(NodeStore& s, Index x, Index h);
std::uint64_t cascade_eager(NodeStore& s, Index x, Index h);
std::uint64_t cascade_naive_increasing(NodeStore& s, Index x, Index h,
                                       bool always_decrement_parent = false);
std::uint64_t cascade_zero_rank(NodeStore& s, Index x, Index h);
std::uint64_t cascade_randomized(NodeStore& s, Index x, Index h, CoinSource& coin,
                                 bool from_parent = false);
// Decrements x's parent's rank if positive. No loop; returns 0.
std::uint64_t non_cascading_decrease(NodeStore& s, Index x);

// Classic cascading cuts, run after non-root x has been cut from `parent`
// (whose rank the caller already decremented). Every marked non-root
// ancestor is cut, unmarked and pushed on `roots`; the first unmarked
// non-root ancestor is marked. Returns the number of loop passes.
std::uint64_t classic_cascading_cuts(NodeStore& s, Index parent, RootList& roots);

// Whether the configured loop always charges a node for every child it
// loses, so that rank <= degree and the rank bounds can be asserted. The
// literal randomized and increasing-rank loops do not.
constexpr bool keeps_rank_invariants(Policy p, const CascadeOptions& opt) {
  switch (p) {
    case Policy::randomized: return opt.randomized_from_parent;
    case Policy::increasing_rank:
    case Policy::naive_increasing: return opt.always_decrement_parent;
    default: return true;
  }
}

// Dispatch for every tree-shaped policy except the heap-order key guard,
// which the caller evaluates first. Not valid for Policy::classic.
std::uint64_t decrease_ranks(Policy p, NodeStore& s, Index x, Index h, CoinSource& coin,
                             const CascadeOptions& opt);

}  // namespace sfheap

#endif  // SFHEAP_CASCADE_HPP

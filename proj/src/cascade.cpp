#include "sfheap/cascade.hpp"

namespace sfheap {

std::uint64_t cascade_simple(NodeStore& s, Index x, Index h, const CascadeOptions& opt) {
  (void)opt;
  s.change_state(h, NodeState::unmarked);
  std::uint64_t iterations = 0;
  Index y = x;
  for (;;) {
    y = s[y].parent;
    s.decrement_rank_if_positive(y);
    ++iterations;
    if (s[y].state == NodeState::marked) {
#ifdef SFHEAP_ENABLE_FAULT_INJECTION
      if (opt.fault_skip_unmark) continue;
#endif
      s.change_state(y, NodeState::unmarked);
    } else {
      s.change_state(y, NodeState::marked);
      break;
    }
  }
  s.counters.iterations += iterations;
  return iterations;
}

std::uint64_t cascade_increasing_rank(NodeStore& s, Index x, Index h, bool always_decrement_parent) {
  if (!always_decrement_parent && !(s[x].rank < s[s[x].parent].rank)) return 0;
  s.change_state(h, NodeState::unmarked);
  std::uint64_t iterations = 0;
  Index y = x;
  for (;;) {
    y = s[y].parent;
    s.change_state(y, s[y].state == NodeState::marked ? NodeState::unmarked
                                                      : NodeState::marked);
    std::uint32_t old_rank = s[y].rank;
    s.decrement_rank_clamped(y);
    ++iterations;
    if (s[y].state == NodeState::marked) break;
    if (old_rank >= s[s[y].parent].rank) break;
  }
  s.counters.iterations += iterations;
  return iterations;
}

std::uint64_t cascade_passive_child(NodeStore& s, Index x, Index h) {
  s.change_state(h, NodeState::passive);
  if (s[x].state == NodeState::passive) return 0;
  std::uint64_t iterations = 0;
  Index y = s[x].parent;
  while (s[y].state == NodeState::marked) {
    s.change_state(y, NodeState::passive);
    s.decrement_rank_clamped(y);
    y = s[y].parent;
    ++iterations;
  }
  s.decrement_rank_clamped(y);
  if (s[y].state == NodeState::unmarked) s.change_state(y, NodeState::marked);
  ++iterations;
  s.counters.iterations += iterations;
  return iterations;
}

std::uint64_t cascade_eager(NodeStore& s, Index x, Index h) {
  // Roots are implicitly unmarked; a root that was once a fair-linked child
  // may still carry its mark.
  s.change_state(h, NodeState::unmarked);
  std::uint64_t iterations = 0;
  Index y = x;
  while (s[y].state == NodeState::marked) {
    s.change_state(y, NodeState::unmarked);
    y = s[y].parent;
    s.decrement_rank_clamped(y);
    ++iterations;
  }
  s.counters.iterations += iterations;
  return iterations;
}

std::uint64_t cascade_naive_increasing(NodeStore& s, Index x, Index h, bool always_decrement_parent) {
  if (!always_decrement_parent && !(s[x].rank < s[s[x].parent].rank)) return 0;
  std::uint64_t iterations = 0;
  Index y = x;
  for (;;) {
    y = s[y].parent;
    std::uint32_t old_rank = s[y].rank;
    s.decrement_rank_clamped(y);
    ++iterations;
    if (y == h || old_rank >= s[s[y].parent].rank) break;
  }
  s.counters.iterations += iterations;
  return iterations;
}

std::uint64_t cascade_zero_rank(NodeStore& s, Index x, Index h) {
  if (!(s[s[x].parent].rank > 0)) return 0;
  std::uint64_t iterations = 0;
  Index y = x;
  for (;;) {
    y = s[y].parent;
    s.decrement_rank_clamped(y);
    ++iterations;
    if (y == h || s[s[y].parent].rank == 0) break;
  }
  s.counters.iterations += iterations;
  return iterations;
}

std::uint64_t cascade_randomized(NodeStore& s, Index x, Index h, CoinSource& coin,
                                 bool from_parent) {
  std::uint64_t iterations = 0;
  Index y = from_parent ? s[x].parent : x;
  for (;;) {
    s.decrement_rank_if_positive(y);
    y = s[y].parent;
    ++iterations;
    if (y == h || coin.heads()) break;
  }
  s.counters.iterations += iterations;
  return iterations;
}

std::uint64_t non_cascading_decrease(NodeStore& s, Index x) {
  s.decrement_rank_if_positive(s[x].parent);
  return 0;
}

std::uint64_t classic_cascading_cuts(NodeStore& s, Index parent, RootList& roots) {
  std::uint64_t iterations = 0;
  Index y = parent;
  while (!s.is_root(y)) {
    ++iterations;
    if (s[y].state != NodeState::marked) {
      s.change_state(y, NodeState::marked);
      break;
    }
    Index z = s[y].parent;
    s.cut(y);
    s.change_state(y, NodeState::unmarked);
    s.push_root(roots, y);
    s.decrement_rank_clamped(z);
    y = z;
  }
  s.counters.iterations += iterations;
  return iterations;
}

std::uint64_t decrease_ranks(Policy p, NodeStore& s, Index x, Index h, CoinSource& coin,
                             const CascadeOptions& opt) {
  switch (p) {
    case Policy::simple:
    case Policy::heap_order: return cascade_simple(s, x, h, opt);
    case Policy::increasing_rank: return cascade_increasing_rank(s, x, h, opt.always_decrement_parent);
    case Policy::passive_child: return cascade_passive_child(s, x, h);
    case Policy::eager: return cascade_eager(s, x, h);
    case Policy::naive_increasing: return cascade_naive_increasing(s, x, h, opt.always_decrement_parent);
    case Policy::zero_rank: return cascade_zero_rank(s, x, h);
    case Policy::randomized: return cascade_randomized(s, x, h, coin, opt.randomized_from_parent);
    case Policy::non_cascading: return non_cascading_decrease(s, x);
    case Policy::classic: break;
  }
  return 0;
}

}  // namespace sfheap

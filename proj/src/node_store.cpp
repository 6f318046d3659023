#include "sfheap/node_store.hpp"

#include "sfheap/error.hpp"

namespace sfheap {

Index NodeStore::allocate() {
  Index x;
  if (!free_.empty()) {
    x = free_.back();
    free_.pop_back();
  } else {
    if (nodes_.size() >= kNil) raise(Errc::out_of_range, "node arena exhausted");
    x = static_cast<Index>(nodes_.size());
    nodes_.emplace_back();
    if (track_activity_) active_.push_back(0);
  }
  Links& n = nodes_[x];
  std::uint32_t gen = n.generation;
  n = Links{};
  n.generation = gen;
  n.parent = x;
  n.live = true;
  if (track_activity_) active_[x] = 0;
  return x;
}

void NodeStore::release(Index x) {
  Links& n = nodes_[x];
  n.live = false;
  n.in_heap = false;
  ++n.generation;
  free_.push_back(x);
}

std::size_t NodeStore::degree(Index x) const {
  std::size_t d = 0;
  for (Index c = nodes_[x].child; c != kNil; c = nodes_[c].after) ++d;
  return d;
}

void NodeStore::add_child(Index x, Index y) {
  Links& nx = nodes_[x];
  Links& ny = nodes_[y];
  nx.parent = y;
  Index z = ny.child;
  nx.before = kNil;
  nx.after = z;
  if (z != kNil) nodes_[z].before = x;
  ny.child = x;
}

void NodeStore::cut(Index x) {
  Links& nx = nodes_[x];
  Index y = nx.parent;
  if (nodes_[y].child == x) nodes_[y].child = nx.after;
  if (nx.before != kNil) nodes_[nx.before].after = nx.after;
  if (nx.after != kNil) nodes_[nx.after].before = nx.before;
  nx.before = kNil;
  nx.after = kNil;
  nx.parent = x;
  ++counters.cuts;
}

void NodeStore::push_root(RootList& list, Index x) {
  Links& nx = nodes_[x];
  nx.parent = x;
  nx.before = kNil;
  nx.after = list.head;
  if (list.head != kNil) nodes_[list.head].before = x;
  if (list.tail == kNil) list.tail = x;
  list.head = x;
}

void NodeStore::remove_root(RootList& list, Index x) {
  Links& nx = nodes_[x];
  if (list.head == x) list.head = nx.after;
  if (list.tail == x) list.tail = nx.before;
  if (nx.before != kNil) nodes_[nx.before].after = nx.after;
  if (nx.after != kNil) nodes_[nx.after].before = nx.before;
  nx.before = kNil;
  nx.after = kNil;
}

void NodeStore::change_state(Index x, NodeState to) {
  NodeState from = nodes_[x].state;
  if (from == to) return;
  if (from == NodeState::marked) {
    ++counters.unmarkings;
    set_active(x, false);
  } else if (to == NodeState::marked) {
    ++counters.markings;
  }
  nodes_[x].state = to;
}

}  // namespace sfheap

#ifndef SFHEAP_NODE_STORE_HPP
#define SFHEAP_NODE_STORE_HPP

// Key-independent tree machinery shared by every heap of a Forest: node
// links, ranks and states, the rank-indexed consolidation table, and the
// operation counters. Nothing in here compares keys.

#include <cstddef>
#include <cstdint>
#include <limits>
#include <random>
#include <vector>

namespace sfheap {

using Index = std::uint32_t;
inline constexpr Index kNil = std::numeric_limits<Index>::max();

enum class NodeState : std::uint8_t { unmarked, marked, passive };

// Stable identity of one node. The generation detects use after removal.
struct NodeRef {
  Index index = kNil;
  std::uint32_t generation = 0;
  friend bool operator==(const NodeRef&, const NodeRef&) = default;
};

struct HeapRef {
  Index index = kNil;
  std::uint32_t generation = 0;
  friend bool operator==(const HeapRef&, const HeapRef&) = default;
};

struct OpCounters {
  std::uint64_t fair_links = 0;
  std::uint64_t naive_links = 0;
  std::uint64_t comparisons = 0;
  std::uint64_t iterations = 0;
  std::uint64_t cuts = 0;
  std::uint64_t markings = 0;
  std::uint64_t unmarkings = 0;
  std::uint64_t rank_clamps = 0;

  std::uint64_t links() const { return fair_links + naive_links; }

  OpCounters& operator+=(const OpCounters& o) {
    fair_links += o.fair_links;
    naive_links += o.naive_links;
    comparisons += o.comparisons;
    iterations += o.iterations;
    cuts += o.cuts;
    markings += o.markings;
    unmarkings += o.unmarkings;
    rank_clamps += o.rank_clamps;
    return *this;
  }
  friend OpCounters operator-(OpCounters a, const OpCounters& b) {
    a.fair_links -= b.fair_links;
    a.naive_links -= b.naive_links;
    a.comparisons -= b.comparisons;
    a.iterations -= b.iterations;
    a.cuts -= b.cuts;
    a.markings -= b.markings;
    a.unmarkings -= b.unmarkings;
    a.rank_clamps -= b.rank_clamps;
    return a;
  }
  friend bool operator==(const OpCounters&, const OpCounters&) = default;
};

struct Links {
  Index parent = kNil;  // == own index for roots
  Index child = kNil;   // first child
  Index before = kNil;
  Index after = kNil;
  std::uint32_t rank = 0;
  NodeState state = NodeState::unmarked;
  bool live = false;
  bool in_heap = false;
  std::uint32_t generation = 0;
};

// Rank-indexed table used by delete-min. Empty outside of delete-min.
class RankRegistry {
 public:
  Index& slot(std::uint32_t rank) {
    if (rank >= slots_.size()) slots_.resize(rank + 1, kNil);
    return slots_[rank];
  }
  std::size_t capacity() const { return slots_.size(); }
  bool empty() const {
    for (Index s : slots_)
      if (s != kNil) return false;
    return true;
  }

 private:
  std::vector<Index> slots_;
};

// Deterministic stream of fair coin flips, one bit at a time.
class CoinSource {
 public:
  CoinSource() { reseed(0); }
  explicit CoinSource(std::uint64_t seed) { reseed(seed); }

  void reseed(std::uint64_t seed) {
    seed_ = seed;
    engine_.seed(seed);
    position_ = 0;
    bits_left_ = 0;
  }
  bool heads() {
    if (bits_left_ == 0) {
      word_ = engine_();
      bits_left_ = 64;
    }
    bool bit = (word_ & 1u) != 0;
    word_ >>= 1;
    --bits_left_;
    ++position_;
    return bit;
  }
  std::uint64_t seed() const { return seed_; }
  std::uint64_t position() const { return position_; }

 private:
  std::mt19937_64 engine_;
  std::uint64_t seed_ = 0;
  std::uint64_t position_ = 0;
  std::uint64_t word_ = 0;
  int bits_left_ = 0;
};

// splitmix64 finalizer; used to derive the coin seed of a melded heap.
constexpr std::uint64_t mix_seeds(std::uint64_t a, std::uint64_t b) {
  std::uint64_t z = a ^ (b + 0x9e3779b97f4a7c15ULL + (a << 6) + (a >> 2));
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Head of a doubly linked list of roots threaded through before/after.
// Used only by the classic forest variant.
struct RootList {
  Index head = kNil;
  Index tail = kNil;
};

class NodeStore {
 public:
  Index allocate();
  void release(Index x);

  bool valid(NodeRef r) const {
    return r.index < nodes_.size() && nodes_[r.index].live &&
           nodes_[r.index].generation == r.generation;
  }
  NodeRef ref(Index x) const { return {x, nodes_[x].generation}; }

  Links& operator[](Index x) { return nodes_[x]; }
  const Links& operator[](Index x) const { return nodes_[x]; }
  std::size_t capacity() const { return nodes_.size(); }
  std::size_t live_count() const { return nodes_.size() - free_.size(); }

  bool is_root(Index x) const { return nodes_[x].parent == x; }
  std::size_t degree(Index x) const;

  // x becomes the first child of y.
  void add_child(Index x, Index y);
  // Detach non-root x from its parent's child list; x becomes a root.
  void cut(Index x);

  void push_root(RootList& list, Index x);
  void remove_root(RootList& list, Index x);

  void decrement_rank_if_positive(Index x) {
    if (nodes_[x].rank > 0) --nodes_[x].rank;
  }
  // Decrement with a floor at zero; a would-be negative rank is counted.
  void decrement_rank_clamped(Index x) {
    if (nodes_[x].rank > 0)
      --nodes_[x].rank;
    else
      ++counters.rank_clamps;
  }

  // State change performed by a cascade; counted, and tracked for the
  // active/passive analysis.
  void change_state(Index x, NodeState to);
  // State initialization done by link / delete-min; not counted.
  void init_state(Index x, NodeState to) { nodes_[x].state = to; }

  // Analysis-only active/passive flag of each child. Never read by the
  // algorithms.
  void enable_activity(bool on) {
    track_activity_ = on;
    if (on) active_.assign(nodes_.size(), 0);
  }
  bool activity_enabled() const { return track_activity_; }
  void set_active(Index x, bool active) {
    if (track_activity_) active_[x] = active ? 1 : 0;
  }
  bool is_active(Index x) const { return track_activity_ && active_[x] != 0; }

  OpCounters counters;
  RankRegistry registry;

 private:
  std::vector<Links> nodes_;
  std::vector<Index> free_;
  std::vector<std::uint8_t> active_;
  bool track_activity_ = false;
};

}  // namespace sfheap

#endif  // SFHEAP_NODE_STORE_HPP

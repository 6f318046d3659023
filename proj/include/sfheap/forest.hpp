#ifndef SFHEAP_FOREST_HPP
#define SFHEAP_FOREST_HPP

// Mergeable heaps built from heap-ordered trees.
//
// A Forest owns the nodes of any number of heaps; heaps of the same Forest
// can be melded. Every policy except Policy::classic keeps each heap as one
// tree. Ties in link go to the first argument; children are prepended;
// delete-min scans the old root's children first to last and sweeps the rank
// table in increasing rank. Adversarial constructions depend on these orders.

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "sfheap/cascade.hpp"
#include "sfheap/error.hpp"
#include "sfheap/node_store.hpp"
#include "sfheap/policy.hpp"

namespace sfheap {

// A key, or the distinguished bottom value below every key.
template <class Key>
class ItemKey {
 public:
  ItemKey(const Key& k) : value_(k) {}  // NOLINT(google-explicit-constructor)
  static ItemKey bottom() { return ItemKey(); }

  bool is_bottom() const { return !value_.has_value(); }
  const Key& value() const { return *value_; }

 private:
  ItemKey() = default;
  std::optional<Key> value_;
};

enum class OpKind : std::uint8_t {
  make_heap,
  make_item,
  insert,
  meld,
  find_min,
  delete_min,
  decrease_key,
};

const char* to_string(OpKind k) noexcept;

struct ForestOptions {
  CascadeOptions cascade;
  bool track_activity = false;
};

template <class Key, class Info = std::uint64_t, class Compare = std::less<Key>>
class Forest {
 public:
  using key_type = Key;
  using info_type = Info;

  struct Removed {
    NodeRef ref;  // no longer valid; identity token only
    Key key;
    Info info;
  };

  // Hooks run around every public heap operation. `other` is the second
  // heap of a meld (already consumed when after() runs).
  class Observer {
   public:
    virtual ~Observer() = default;
    virtual void before(const Forest&, OpKind, HeapRef, HeapRef /*other*/) {}
    virtual void after(const Forest&, OpKind, HeapRef, const OpCounters& /*delta*/) {}
  };

  explicit Forest(ForestOptions opt = {}, Compare cmp = Compare())
      : cmp_(std::move(cmp)), opt_(opt) {
    store_.enable_activity(opt_.track_activity);
  }

  Forest(const Forest&) = delete;
  Forest& operator=(const Forest&) = delete;
  Forest(Forest&&) noexcept = default;
  Forest& operator=(Forest&&) noexcept = default;

  HeapRef make_heap(Policy policy, std::uint64_t seed = 0) {
    Scope scope(*this, OpKind::make_heap, {}, {});
    Index i;
    if (!free_heaps_.empty()) {
      i = free_heaps_.back();
      free_heaps_.pop_back();
    } else {
      i = static_cast<Index>(heaps_.size());
      heaps_.emplace_back();
    }
    HeapRecord& h = heaps_[i];
    std::uint32_t gen = h.generation;
    h = HeapRecord{};
    h.generation = gen;
    h.live = true;
    h.policy = policy;
    h.coin.reseed(seed);
    HeapRef ref{i, gen};
    scope.heap = ref;
    return ref;
  }

  NodeRef make_item(Info info, ItemKey<Key> key) {
    if (key.is_bottom()) raise(Errc::bottom_key, "make_item: bottom is reserved");
    Scope scope(*this, OpKind::make_item, {}, {});
    Index x = store_.allocate();
    if (x >= payload_.size()) payload_.resize(x + 1, Payload{ItemKey<Key>::bottom(), Info{}});
    payload_[x] = Payload{std::move(key), std::move(info)};
    return store_.ref(x);
  }

  // Makes the root of larger key the first child of the other; ties go to x.
  // Ranks are not touched. Only for detached trees (items in no heap).
  NodeRef link(NodeRef x, NodeRef y) {
    Index a = require_node(x), b = require_node(y);
    if (a == b) raise(Errc::self_link, "link: x = y");
    if (store_[a].in_heap || store_[b].in_heap)
      raise(Errc::already_in_heap, "link: only detached trees may be linked directly");
    if (!store_.is_root(a) || !store_.is_root(b)) raise(Errc::not_a_root, "link: arguments must be roots");
    return store_.ref(naive_link(a, b, Policy::simple));
  }

  // Detaches x from its parent. Only for detached trees.
  void cut(NodeRef x) {
    Index a = require_node(x);
    if (store_[a].in_heap) raise(Errc::already_in_heap, "cut: only detached trees may be cut directly");
    if (store_.is_root(a)) raise(Errc::not_a_child, "cut: x is a root");
    store_.cut(a);
  }

  void insert(NodeRef item, HeapRef heap) {
    Index x = require_node(item);
    HeapRecord& h = require_heap(heap);
    const Links& n = store_[x];
    if (n.in_heap || !store_.is_root(x) || n.child != kNil)
      raise(Errc::already_in_heap, "insert: item must be a singleton in no heap");
    Scope scope(*this, OpKind::insert, heap, {});
    store_[x].in_heap = true;
    store_.init_state(x, h.policy == Policy::passive_child ? NodeState::passive : NodeState::unmarked);
    ++h.size;
    if (h.policy == Policy::classic) {
      store_.push_root(h.roots, x);
      if (h.root == kNil || key_less(x, h.root)) h.root = x;
      return;
    }
    h.root = h.root == kNil ? x : naive_link(x, h.root, h.policy);
  }

  // Melds `other` into `heap` and returns `heap`; `other` is consumed.
  HeapRef meld(HeapRef heap, HeapRef other) {
    HeapRecord& g = require_heap(heap);
    HeapRecord& h = require_heap(other);
    if (heap == other) raise(Errc::self_meld, "meld: a heap cannot be melded with itself");
    if (g.policy != h.policy) raise(Errc::policy_mismatch, "meld: heaps have different policies");
    Scope scope(*this, OpKind::meld, heap, other);
    if (g.policy == Policy::classic) {
      if (h.roots.head != kNil) {
        if (g.roots.head == kNil) {
          g.roots = h.roots;
        } else {
          store_[g.roots.tail].after = h.roots.head;
          store_[h.roots.head].before = g.roots.tail;
          g.roots.tail = h.roots.tail;
        }
      }
      if (g.root == kNil || (h.root != kNil && key_less(h.root, g.root))) g.root = h.root;
    } else if (g.root == kNil) {
      g.root = h.root;
    } else if (h.root != kNil) {
      g.root = naive_link(g.root, h.root, g.policy);
    }
    g.size += h.size;
    if (g.policy == Policy::randomized) g.coin.reseed(mix_seeds(g.coin.seed(), h.coin.seed()));
    retire_heap(other.index);
    return heap;
  }

  std::optional<NodeRef> find_min(HeapRef heap) {
    HeapRecord& h = require_heap(heap);
    Scope scope(*this, OpKind::find_min, heap, {});
    if (h.root == kNil) return std::nullopt;
    return store_.ref(h.root);
  }

  Removed delete_min(HeapRef heap) {
    Index old = pop_min(heap);
    Removed out{store_.ref(old), payload_[old].key.value(), std::move(payload_[old].info)};
    store_.release(old);
    return out;
  }

  void decrease_key(NodeRef item, ItemKey<Key> v, HeapRef heap) {
    if (v.is_bottom()) raise(Errc::bottom_key, "decrease_key: bottom is reserved for delete");
    Index x = require_node(item);
    HeapRecord& h = require_heap(heap);
    if (!store_[x].in_heap) raise(Errc::not_in_heap, "decrease_key: item is in no heap");
    if (!payload_[x].key.is_bottom() && cmp_(payload_[x].key.value(), v.value()))
      raise(Errc::key_increase, "decrease_key: new key exceeds current key");
    Scope scope(*this, OpKind::decrease_key, heap, {});
    payload_[x].key = std::move(v);
    restructure_after_decrease(x, h);
  }

  // decrease_key(x, bottom) followed by delete_min.
  Removed erase(NodeRef item, HeapRef heap) {
    Index x = require_node(item);
    HeapRecord& h = require_heap(heap);
    if (!store_[x].in_heap) raise(Errc::not_in_heap, "delete: item is in no heap");
    Key original = payload_[x].key.value();
    {
      Scope scope(*this, OpKind::decrease_key, heap, {});
      payload_[x].key = ItemKey<Key>::bottom();
      restructure_after_decrease(x, h);
    }
    Index old = pop_min(heap);
    Removed out{store_.ref(old), std::move(original), std::move(payload_[old].info)};
    store_.release(old);
    return out;
  }

  // ---- queries ---------------------------------------------------------

  bool valid(NodeRef r) const { return store_.valid(r); }
  bool valid(HeapRef r) const {
    return r.index < heaps_.size() && heaps_[r.index].live && heaps_[r.index].generation == r.generation;
  }
  const Key& key(NodeRef r) const { return payload_[require_node(r)].key.value(); }
  const Info& info(NodeRef r) const { return payload_[require_node(r)].info; }
  std::uint32_t rank(NodeRef r) const { return store_[require_node(r)].rank; }
  NodeState state(NodeRef r) const { return store_[require_node(r)].state; }
  bool in_heap(NodeRef r) const { return store_[require_node(r)].in_heap; }
  bool is_root(NodeRef r) const { return store_.is_root(require_node(r)); }
  std::optional<NodeRef> parent(NodeRef r) const {
    Index x = require_node(r);
    if (store_.is_root(x)) return std::nullopt;
    return store_.ref(store_[x].parent);
  }
  std::vector<NodeRef> children(NodeRef r) const {
    std::vector<NodeRef> out;
    for (Index c = store_[require_node(r)].child; c != kNil; c = store_[c].after) out.push_back(store_.ref(c));
    return out;
  }

  std::size_t size(HeapRef r) const { return require_heap(r).size; }
  bool empty(HeapRef r) const { return require_heap(r).root == kNil; }
  Policy policy(HeapRef r) const { return require_heap(r).policy; }
  const CoinSource& coin(HeapRef r) const { return require_heap(r).coin; }

  // Roots of the heap: the tree root, or every root of a classic forest.
  std::vector<Index> roots(HeapRef r) const {
    const HeapRecord& h = require_heap(r);
    std::vector<Index> out;
    if (h.policy == Policy::classic) {
      for (Index x = h.roots.head; x != kNil; x = store_[x].after) out.push_back(x);
    } else if (h.root != kNil) {
      out.push_back(h.root);
    }
    return out;
  }
  Index min_index(HeapRef r) const { return require_heap(r).root; }

  std::vector<HeapRef> heaps() const {
    std::vector<HeapRef> out;
    for (Index i = 0; i < heaps_.size(); ++i)
      if (heaps_[i].live) out.push_back({i, heaps_[i].generation});
    return out;
  }

  const OpCounters& counters() const { return store_.counters; }
  const NodeStore& store() const { return store_; }
  Index index_of(NodeRef r) const { return require_node(r); }
  NodeRef ref_of(Index x) const { return store_.ref(x); }
  const ItemKey<Key>& item_key(Index x) const { return payload_[x].key; }
  bool key_less_uncounted(Index a, Index b) const { return less_raw(a, b); }

  ForestOptions& options() { return opt_; }
  const ForestOptions& options() const { return opt_; }
  void set_observer(Observer* obs) { observer_ = obs; }

 private:
  struct Payload {
    ItemKey<Key> key;
    Info info;
  };

  struct HeapRecord {
    Index root = kNil;  // tree root, or minimum root for classic
    RootList roots;     // classic only
    Policy policy = Policy::simple;
    std::size_t size = 0;
    CoinSource coin;
    std::uint32_t generation = 0;
    bool live = false;
  };

  struct Scope {
    Scope(Forest& f, OpKind k, HeapRef h, HeapRef o) : forest(f), kind(k), heap(h) {
      if (forest.observer_ == nullptr) return;
      start = forest.store_.counters;
      forest.observer_->before(forest, kind, heap, o);
    }
    ~Scope() {
      if (forest.observer_ != nullptr) forest.observer_->after(forest, kind, heap, forest.store_.counters - start);
    }
    Scope(const Scope&) = delete;
    Scope& operator=(const Scope&) = delete;

    Forest& forest;
    OpKind kind;
    HeapRef heap;
    OpCounters start;
  };

  Index require_node(NodeRef r) const {
    if (!store_.valid(r)) raise(Errc::stale_node, "stale or invalid node reference");
    return r.index;
  }
  HeapRecord& require_heap(HeapRef r) {
    if (!valid(r)) raise(Errc::stale_heap, "stale or invalid heap reference");
    return heaps_[r.index];
  }
  const HeapRecord& require_heap(HeapRef r) const {
    if (!valid(r)) raise(Errc::stale_heap, "stale or invalid heap reference");
    return heaps_[r.index];
  }

  void retire_heap(Index i) {
    heaps_[i].live = false;
    ++heaps_[i].generation;
    free_heaps_.push_back(i);
  }

  bool less_raw(Index a, Index b) const {
    const ItemKey<Key>& ka = payload_[a].key;
    const ItemKey<Key>& kb = payload_[b].key;
    if (kb.is_bottom()) return false;
    if (ka.is_bottom()) return true;
    return cmp_(ka.value(), kb.value());
  }
  bool key_less(Index a, Index b) {
    ++store_.counters.comparisons;
    return less_raw(a, b);
  }

  // One comparison; the larger key becomes the first child.
  Index link_raw(Index x, Index y) {
    if (key_less(y, x)) {
      store_.add_child(x, y);
      return y;
    }
    store_.add_child(y, x);
    return x;
  }

  Index naive_link(Index x, Index y, Policy p) {
    Index w = link_raw(x, y);
    Index loser = w == x ? y : x;
    if (p == Policy::passive_child)
      store_.init_state(loser, NodeState::passive);
    else if (p == Policy::eager)
      store_.init_state(loser, NodeState::unmarked);
    store_.set_active(loser, false);
    ++store_.counters.naive_links;
    return w;
  }

  Index fair_link(Index x, Index y, Policy p) {
    Index w = link_raw(x, y);
    Index loser = w == x ? y : x;
    if (p == Policy::passive_child || p == Policy::classic)
      store_.init_state(loser, NodeState::unmarked);
    else if (p == Policy::eager)
      store_.init_state(loser, NodeState::marked);
    store_.set_active(loser, true);
    ++store_.counters.fair_links;
    return w;
  }

  // Removes root h and links its children into one tree.
  Index consolidate(Index h, Policy p) {
    RankRegistry& table = store_.registry;
    std::uint32_t max_rank = 0;
    Index x = store_[h].child;
    while (x != kNil) {
      Index y = x;
      x = store_[x].after;
      while (table.slot(store_[y].rank) != kNil) {
        Index& occupant = table.slot(store_[y].rank);
        Index other = occupant;
        occupant = kNil;
        y = fair_link(y, other, p);
        ++store_[y].rank;
      }
      table.slot(store_[y].rank) = y;
      if (store_[y].rank > max_rank) max_rank = store_[y].rank;
    }
    if (store_[h].child == kNil) return kNil;
    for (std::uint32_t i = 0; i <= max_rank; ++i) {
      Index& s = table.slot(i);
      if (s == kNil) continue;
      x = x == kNil ? s : naive_link(x, s, p);
      s = kNil;
    }
    store_[x].parent = x;
    store_[x].before = kNil;
    store_[x].after = kNil;
    return x;
  }

  void consolidate_classic(HeapRecord& h) {
    Index m = h.root;
    store_.remove_root(h.roots, m);
    for (Index c = store_[m].child; c != kNil;) {
      Index next = store_[c].after;
      store_.change_state(c, NodeState::unmarked);
      store_.push_root(h.roots, c);
      c = next;
    }
    RankRegistry& table = store_.registry;
    std::uint32_t max_rank = 0;
    Index x = h.roots.head;
    while (x != kNil) {
      Index y = x;
      x = store_[x].after;
      while (table.slot(store_[y].rank) != kNil) {
        Index& occupant = table.slot(store_[y].rank);
        Index other = occupant;
        occupant = kNil;
        y = fair_link(y, other, Policy::classic);
        ++store_[y].rank;
      }
      table.slot(store_[y].rank) = y;
      if (store_[y].rank > max_rank) max_rank = store_[y].rank;
    }
    h.roots = RootList{};
    h.root = kNil;
    for (std::uint32_t i = 0; i <= max_rank; ++i) {
      Index& s = table.slot(i);
      if (s == kNil) continue;
      store_.push_root(h.roots, s);
      if (h.root == kNil || key_less(s, h.root)) h.root = s;
      s = kNil;
    }
  }

  void restructure_after_decrease(Index x, HeapRecord& h) {
    if (h.policy == Policy::classic) {
      if (store_.is_root(x)) {
        if (key_less(x, h.root)) h.root = x;
        return;
      }
      Index p = store_[x].parent;
      if (!key_less(x, p)) return;
      store_.decrement_rank_clamped(p);
      store_.cut(x);
      store_.change_state(x, NodeState::unmarked);
      store_.push_root(h.roots, x);
      classic_cascading_cuts(store_, p, h.roots);
      if (key_less(x, h.root)) h.root = x;
      return;
    }
    Index root = h.root;
    if (h.policy == Policy::heap_order) {
      // Roots are their own parents, so this also rejects x = root.
      if (!key_less(x, store_[x].parent)) return;
    } else if (x == root) {
      return;
    }
    decrease_ranks(h.policy, store_, x, root, h.coin, opt_.cascade);
    store_.cut(x);
    h.root = naive_link(x, root, h.policy);
  }

  // Unlinks the minimum; the caller releases the returned node.
  Index pop_min(HeapRef heap) {
    HeapRecord& h = require_heap(heap);
    if (h.root == kNil) raise(Errc::empty_heap, "delete_min: heap is empty");
    Scope scope(*this, OpKind::delete_min, heap, {});
    Index old = h.root;
    if (h.policy == Policy::classic)
      consolidate_classic(h);
    else
      h.root = consolidate(old, h.policy);
    --h.size;
    store_[old].in_heap = false;
    return old;
  }

  NodeStore store_;
  std::vector<Payload> payload_;
  std::vector<HeapRecord> heaps_;
  std::vector<Index> free_heaps_;
  Compare cmp_;
  ForestOptions opt_;
  Observer* observer_ = nullptr;
};

extern template class Forest<std::int64_t, std::uint64_t>;
using IntForest = Forest<std::int64_t, std::uint64_t>;

}  // namespace sfheap

#endif  // SFHEAP_FOREST_HPP

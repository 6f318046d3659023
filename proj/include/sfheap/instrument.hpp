#ifndef SFHEAP_INSTRUMENT_HPP
#define SFHEAP_INSTRUMENT_HPP

// Analysis-side views of a Forest: the potential function, subtree sizes,
// structural and rank-bound checkers, the active-children ledger, and a
// per-operation amortized audit. Nothing here mutates the heaps or the
// operation counters.

#include <cmath>
#include <cstdint>
#include <sstream>
#include <string>
#include <vector>

#include "sfheap/forest.hpp"

namespace sfheap {

// ---- Fibonacci numbers and the golden ratio --------------------------------

inline constexpr int kFibMax = 90;
inline const double kPhi = (1.0 + std::sqrt(5.0)) / 2.0;

// Exact F_k for 0 <= k <= 90; throws Errc::out_of_range otherwise.
std::uint64_t fib(int k);
// Lucas number L_k for 0 <= k <= 90.
std::uint64_t lucas(int k);
// Decides F_{k+2} >= phi^k exactly (no floating point), 0 <= k <= 88.
bool fib_dominates_phi_power(int k);
double log_phi(double n);

// ---- verdicts --------------------------------------------------------------

struct Violation {
  std::string check;
  Index node = kNil;
  std::string detail;
};

struct Verdict {
  std::vector<Violation> violations;
  bool ok() const { return violations.empty(); }
  void add(std::string check, Index node, std::string detail) {
    violations.push_back({std::move(check), node, std::move(detail)});
  }
  void merge(const Verdict& o) { violations.insert(violations.end(), o.violations.begin(), o.violations.end()); }
  std::string summary(std::size_t limit = 5) const;
};

struct PotentialSnapshot {
  std::int64_t phi = 0;
  std::int64_t degree_minus_rank = 0;
  std::int64_t root_bonus = 0;
  std::int64_t mark_bonus = 0;

  PotentialSnapshot& operator+=(const PotentialSnapshot& o) {
    phi += o.phi;
    degree_minus_rank += o.degree_minus_rank;
    root_bonus += o.root_bonus;
    mark_bonus += o.mark_bonus;
    return *this;
  }
};

namespace detail {

// Nodes of the heap in preorder, roots first. Iterative: trees built by
// naive links can be as deep as the heap is large.
template <class F>
std::vector<Index> heap_nodes(const F& f, HeapRef h) {
  const NodeStore& s = f.store();
  std::vector<Index> out;
  std::vector<Index> stack;
  for (Index r : f.roots(h)) stack.push_back(r);
  while (!stack.empty()) {
    Index x = stack.back();
    stack.pop_back();
    out.push_back(x);
    for (Index c = s[x].child; c != kNil; c = s[c].after) stack.push_back(c);
  }
  return out;
}

// Subtree sizes indexed by node index for every node of the heap.
template <class F>
std::vector<std::uint64_t> subtree_sizes(const F& f, HeapRef h, const std::vector<Index>& order) {
  const NodeStore& s = f.store();
  std::vector<std::uint64_t> size(s.capacity(), 0);
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    Index x = *it;
    std::uint64_t n = 1;
    for (Index c = s[x].child; c != kNil; c = s[c].after) n += size[c];
    size[x] = n;
  }
  (void)h;
  return size;
}

}  // namespace detail

// ---- potential and sizes ---------------------------------------------------

template <class F>
PotentialSnapshot compute_potential(const F& f, HeapRef h) {
  const NodeStore& s = f.store();
  PotentialSnapshot p;
  for (Index x : detail::heap_nodes(f, h)) {
    p.degree_minus_rank += static_cast<std::int64_t>(s.degree(x)) - static_cast<std::int64_t>(s[x].rank);
    if (s.is_root(x)) ++p.root_bonus;
    if (s[x].state == NodeState::marked) p.mark_bonus += 2;
  }
  p.phi = p.degree_minus_rank + p.root_bonus + p.mark_bonus;
  return p;
}

// Potential summed over every live heap of the forest.
template <class F>
PotentialSnapshot compute_potential(const F& f) {
  PotentialSnapshot p;
  for (HeapRef h : f.heaps()) p += compute_potential(f, h);
  return p;
}

template <class F>
std::uint64_t subtree_size(const F& f, NodeRef r) {
  const NodeStore& s = f.store();
  std::uint64_t n = 0;
  std::vector<Index> stack{f.index_of(r)};
  while (!stack.empty()) {
    Index x = stack.back();
    stack.pop_back();
    ++n;
    for (Index c = s[x].child; c != kNil; c = s[c].after) stack.push_back(c);
  }
  return n;
}

// ---- checkers --------------------------------------------------------------

// Heap order, sibling/parent consistency, rank <= degree, empty rank table,
// size bookkeeping, and the single-tree / min-root shape of the heap.
template <class F>
Verdict check_structure(const F& f, HeapRef h) {
  const NodeStore& s = f.store();
  Verdict v;
  auto roots = f.roots(h);
  Policy p = f.policy(h);
  if (p != Policy::classic && roots.size() > 1) v.add("structure", kNil, "more than one tree");
  if (!s.registry.empty()) v.add("structure", kNil, "rank table not empty");
  for (Index r : roots) {
    if (!s.is_root(r)) v.add("structure", r, "root has a parent");
    if (p == Policy::classic && f.key_less_uncounted(r, f.min_index(h)))
      v.add("structure", r, "min reference is not a minimum root");
  }
  std::size_t count = 0;
  for (Index x : detail::heap_nodes(f, h)) {
    ++count;
    const Links& n = s[x];
    if (!n.live || !n.in_heap) v.add("structure", x, "dead or detached node reachable");
    std::size_t deg = 0;
    Index prev = kNil;
    for (Index c = n.child; c != kNil; c = s[c].after) {
      ++deg;
      if (s[c].parent != x) v.add("structure", c, "wrong parent pointer");
      if (s[c].before != prev) v.add("structure", c, "broken sibling list");
      if (f.key_less_uncounted(c, x)) v.add("heap-order", c, "child key below parent key");
      prev = c;
    }
    if (n.rank > deg) {
      std::ostringstream os;
      os << "rank " << n.rank << " exceeds degree " << deg;
      v.add("rank<=degree", x, os.str());
    }
  }
  if (count != f.size(h)) v.add("structure", kNil, "size field disagrees with node count");
  return v;
}

// size >= F(rank + 2) in exact integers, or size >= 2^rank, depending on the policy.
// Policies with neither bound get report-only entries under "report".
template <class F>
Verdict check_rank_bounds(const F& f, HeapRef h, bool report_unbounded = false) {
  const NodeStore& s = f.store();
  Verdict v;
  Policy p = f.policy(h);
  bool fibonacci = has_fibonacci_rank_bound(p);
  bool binary = has_binary_rank_bound(p);
  if (!fibonacci && !binary && !report_unbounded) return v;
  auto order = detail::heap_nodes(f, h);
  auto size = detail::subtree_sizes(f, h, order);
  for (Index x : order) {
    std::uint32_t k = s[x].rank;
    bool fib_ok = k + 2 <= static_cast<std::uint32_t>(kFibMax) && size[x] >= fib(static_cast<int>(k) + 2);
    bool bin_ok = k < 64 && size[x] >= (std::uint64_t{1} << k);
    const char* check = nullptr;
    if (fibonacci && !fib_ok)
      check = "size>=F(rank+2)";
    else if (binary && !bin_ok)
      check = "size>=2^rank";
    else if (!fibonacci && !binary && !fib_ok)
      check = "report";
    if (check == nullptr) continue;
    std::ostringstream os;
    os << "rank " << k << ", size " << size[x];
    v.add(check, x, os.str());
  }
  return v;
}

// Every node has at least rank(x) active children. Needs a forest
// built with activity tracking.
template <class F>
Verdict check_active_children(const F& f, HeapRef h) {
  const NodeStore& s = f.store();
  Verdict v;
  if (!s.activity_enabled()) {
    v.add("active-children", kNil, "activity tracking disabled");
    return v;
  }
  for (Index x : detail::heap_nodes(f, h)) {
    std::uint32_t active = 0;
    for (Index c = s[x].child; c != kNil; c = s[c].after)
      if (s.is_active(c)) ++active;
    if (active < s[x].rank) {
      std::ostringstream os;
      os << "rank " << s[x].rank << ", active children " << active;
      v.add("active-children", x, os.str());
    }
  }
  return v;
}

// ---- amortized audit -------------------------------------------------------

struct AuditRecord {
  std::uint64_t index = 0;  // operation number within the audited run
  OpKind kind = OpKind::make_heap;
  std::uint64_t n = 0;      // heap size before the operation
  std::int64_t delta_phi = 0;
  OpCounters delta;
  double estimated = 0;     // 1, 1 + #iterations, or 1 + log_phi n + #links
  double bound = 0;         // amortized bound
};

// Estimated time of one operation in the unit-cost model: 1, 1 + #iterations
// for decrease-key, 1 + log_phi n + #links for delete-min (n = size before).
inline double estimated_time(OpKind kind, std::uint64_t n, const OpCounters& delta) {
  switch (kind) {
    case OpKind::decrease_key: return 1.0 + static_cast<double>(delta.iterations);
    case OpKind::delete_min:
      return 1.0 + (n > 0 ? log_phi(static_cast<double>(n)) : 0.0) + static_cast<double>(delta.links());
    default: return 1.0;
  }
}

struct CostRecord {
  OpKind kind = OpKind::make_heap;
  std::uint64_t n = 0;  // heap size before the operation
  OpCounters delta;
  double estimated = 0;
};

// Observer that prices every operation without touching the potential, so it
// stays O(1) per operation. make_item is not counted: the trace format folds
// it into insert.
template <class F>
class CostMeter : public F::Observer {
 public:
  explicit CostMeter(bool keep_records = false) : keep_records_(keep_records) {}

  void before(const F& f, OpKind, HeapRef h, HeapRef) override { n_ = f.valid(h) ? f.size(h) : 0; }

  void after(const F&, OpKind kind, HeapRef, const OpCounters& delta) override {
    if (kind == OpKind::make_item) return;
    CostRecord r{kind, n_, delta, estimated_time(kind, n_, delta)};
    ++operations_;
    total_ += r.estimated;
    if (keep_records_) records_.push_back(r);
  }

  std::uint64_t operations() const { return operations_; }
  double total() const { return total_; }
  const std::vector<CostRecord>& records() const { return records_; }

 private:
  std::uint64_t n_ = 0;
  std::uint64_t operations_ = 0;
  double total_ = 0;
  bool keep_records_;
  std::vector<CostRecord> records_;
};

// Observer that checks the potential bounds on every operation: make/find/meld keep the
// potential, insert raises it by at most 1, a decrease-key by at most
// 4 - #iterations, a delete-min by at most 2 log_phi n - 1 - #links.
template <class F>
class AmortizedAudit : public F::Observer {
 public:
  static constexpr double kSlack = 1e-9;

  explicit AmortizedAudit(bool keep_records = false) : keep_records_(keep_records) {}

  void before(const F& f, OpKind, HeapRef h, HeapRef other) override {
    phi_before_ = 0;
    n_before_ = 0;
    if (f.valid(h)) {
      phi_before_ += compute_potential(f, h).phi;
      n_before_ = f.size(h);
    }
    if (f.valid(other)) phi_before_ += compute_potential(f, other).phi;
  }

  void after(const F& f, OpKind kind, HeapRef h, const OpCounters& delta) override {
    AuditRecord r;
    r.index = ops_++;
    r.kind = kind;
    r.n = n_before_;
    r.delta = delta;
    std::int64_t phi_after = f.valid(h) ? compute_potential(f, h).phi : 0;
    r.delta_phi = phi_after - phi_before_;
    double d = static_cast<double>(r.delta_phi);
    double it = static_cast<double>(delta.iterations);
    double links = static_cast<double>(delta.links());
    double lg = r.n > 0 ? log_phi(static_cast<double>(r.n)) : 0.0;
    r.estimated = estimated_time(kind, r.n, delta);
    bool ok = true;
    switch (kind) {
      case OpKind::make_heap:
      case OpKind::make_item:
      case OpKind::find_min:
      case OpKind::meld:
        r.bound = 1;
        ok = r.delta_phi == 0;
        break;
      case OpKind::insert:
        r.bound = 2;
        ok = r.delta_phi <= 1;
        break;
      case OpKind::decrease_key:
        r.bound = 5;
        ok = d <= 4 - it + kSlack && r.estimated + d <= r.bound + kSlack;
        break;
      case OpKind::delete_min:
        r.bound = 3 * lg;
        ok = d <= 2 * lg - 1 - links + kSlack && r.estimated + d <= r.bound + kSlack;
        break;
    }
    if (keep_records_) records_.push_back(r);
    total_estimated_ += r.estimated;
    total_bound_ += r.bound;
    if (!ok) {
      std::ostringstream os;
      os << "op " << r.index << " " << to_string(kind) << ": n=" << r.n << " dPhi=" << r.delta_phi
         << " iterations=" << delta.iterations << " links=" << delta.links();
      verdict_.add("amortized", kNil, os.str());
      failures_.push_back(r);
    }
  }

  const Verdict& verdict() const { return verdict_; }
  const std::vector<AuditRecord>& failures() const { return failures_; }
  const std::vector<AuditRecord>& records() const { return records_; }
  std::uint64_t operations() const { return ops_; }
  double total_estimated() const { return total_estimated_; }
  double total_bound() const { return total_bound_; }

 private:
  std::int64_t phi_before_ = 0;
  std::uint64_t n_before_ = 0;
  std::uint64_t ops_ = 0;
  double total_estimated_ = 0;
  double total_bound_ = 0;
  Verdict verdict_;
  std::vector<AuditRecord> failures_;
  std::vector<AuditRecord> records_;
  bool keep_records_ = false;
};

}  // namespace sfheap

#endif  // SFHEAP_INSTRUMENT_HPP

#ifndef SFHEAP_ADVERSARY_HPP
#define SFHEAP_ADVERSARY_HPP

// Lower-bound construction for non-cascading heaps. S(k) is a root of rank k
// with k leaf children; T(k, i) is a root whose children are the roots of
// S(0), ..., S(k) with S(i) missing. An insert followed by a delete-min turns
// T(k, k) into a fresh copy of itself after exactly k fair links, and T(k, k)
// can be built from nothing with O(k^3) ordinary heap operations.
//
// Keys: the roots of S(j), j >= 1, hold "high" keys, and the newest S(1) is
// the largest, so S-root keys decrease with j. The heap root and the root of
// S(0) hold "low" keys, issued in increasing order, all below every high key.

#include <cstdint>
#include <string>
#include <vector>

#include "sfheap/forest.hpp"
#include "sfheap/instrument.hpp"
#include "sfheap/oracle.hpp"

namespace sfheap {

struct ShapeSpec {
  enum class Kind : std::uint8_t { S, T };
  Kind kind = Kind::S;
  int k = 0;
  int i = 0;  // T only: index of the missing S

  static ShapeSpec S(int k);
  static ShapeSpec T(int k, int i);

  std::uint64_t size() const;
  std::string name() const;
};

struct ShapeCheck {
  bool ok = true;
  std::string diff;  // first mismatch, empty when ok
  explicit operator bool() const { return ok; }
};

// Structural match of the tree rooted at `root`; pure. S-roots must carry
// their rank, S-leaves rank 0. The rank of a T root is not constrained.
ShapeCheck verify_shape(const IntForest& f, NodeRef root, const ShapeSpec& spec);

struct BuildLog {
  std::uint64_t make_heaps = 0;
  std::uint64_t inserts = 0;
  std::uint64_t delete_mins = 0;
  std::uint64_t decrease_keys = 0;
  std::uint64_t keys_issued = 0;

  std::uint64_t total() const { return make_heaps + inserts + delete_mins + decrease_keys; }
};

// Heap operations build_T(k) performs from nothing, make_heap included.
std::uint64_t build_cost(int k);

struct RoundStats {
  std::uint64_t n = 0;  // heap size seen by the delete-min
  OpCounters delta;     // insert and delete-min together
  double estimated = 0;
};

class Adversary {
 public:
  // Records every operation in trace format when asked. The heap is
  // NON_CASCADING; the policy is fixed because the shapes depend on it.
  explicit Adversary(bool record_trace = false);

  // Builds T(k, k), from nothing or upward from the current T(j, j), j <= k.
  void build(int k);
  // T(k, 0) -> T(k+1, k+1) with one insert.
  void promote();
  // T(k, i) -> T(k, i-1), i >= 1: two inserts, a delete-min, i - 1
  // decrease-keys. Raises Errc::check_failed naming the broken ordering.
  void convert_step();
  // One insert and one delete-min on T(k, k); checks k fair links and the
  // regenerated shape.
  RoundStats steady_round();

  int k() const { return k_; }
  int i() const { return i_; }
  ShapeSpec shape() const { return ShapeSpec::T(k_, i_); }
  ShapeCheck verify() const;

  const BuildLog& log() const { return log_; }
  // Operations and estimated time over everything done so far.
  std::uint64_t operations() const { return meter_.operations(); }
  double estimated_time() const { return meter_.total(); }
  const OpTrace& trace() const { return trace_; }
  const IntForest& forest() const { return forest_; }
  HeapRef heap() const { return heap_; }
  NodeRef root() const { return root_; }

 private:
  std::int64_t next_low();
  std::int64_t next_high();
  NodeRef insert(std::int64_t key);
  void decrease(NodeRef x, std::int64_t v);
  IntForest::Removed delete_min();
  void require(bool cond, const std::string& what) const;
  void start();

  IntForest forest_;
  CostMeter<IntForest> meter_;
  HeapRef heap_;
  NodeRef root_;
  std::vector<NodeRef> sigma_;  // sigma_[j]: root of S(j); sigma_[i_] unused
  int k_ = 0;
  int i_ = 0;
  std::int64_t low_;
  std::int64_t high_ = 0;
  std::int64_t step_ = 0;
  std::uint64_t items_ = 0;
  bool record_;
  BuildLog log_;
  OpTrace trace_;
};

struct LowerBoundReport {
  std::uint64_t m = 0;
  int k = 0;
  std::uint64_t n = 0;           // heap size during the cycle
  std::uint64_t build_ops = 0;
  std::uint64_t rounds = 0;
  std::uint64_t operations = 0;  // m, or m - 1 when the cycle budget is odd
  std::uint64_t links = 0;
  double estimated = 0;          // whole schedule
  double cycle_delete_min_cost = 0;  // mean estimated time per cycle delete-min
  OpTrace trace;                 // filled when recorded
};

// Largest k with build_cost(k) <= m / 3, built, then insert/delete-min pairs
// for the remaining budget. m >= 6.
LowerBoundReport run_lower_bound(std::uint64_t m, bool record_trace = false);

// Replays a trace on a fresh forest under `policy` and prices each
// operation. Assumes a valid trace; raises on malformed ones.
struct ScheduleCost {
  std::uint64_t operations = 0;
  double estimated = 0;
  OpCounters counters;
  std::int64_t phi = 0;  // potential of all heaps at the end
  std::vector<CostRecord> records;
};
ScheduleCost price_trace(const OpTrace& trace, Policy policy);

// Means over the last `rounds` delete-mins of a priced schedule, which for
// adversary schedules are the cycle delete-mins.
struct CycleCost {
  std::uint64_t rounds = 0;
  std::uint64_t n = 0;  // size seen by the last of them
  double links = 0;
  double estimated = 0;
  double fair_links = 0;
  double naive_links = 0;
  double iterations = 0;
  double comparisons = 0;
};
CycleCost cycle_cost(const ScheduleCost& c, std::uint64_t rounds);

}  // namespace sfheap

#endif  // SFHEAP_ADVERSARY_HPP

#ifndef SFHEAP_ORACLE_HPP
#define SFHEAP_ORACLE_HPP

// Reference semantics and differential testing. OracleHeap is a brute-force
// model of any number of named heaps; traces are replayed against it and a
// Forest in lockstep.

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "sfheap/forest.hpp"
#include "sfheap/instrument.hpp"
#include "sfheap/policy.hpp"

namespace sfheap {

class OracleHeap {
 public:
  using Entry = std::pair<std::int64_t, std::uint64_t>;  // (key, item id)

  // Every member raises Errc on a violated precondition.
  void make_heap(const std::string& h, Policy p);
  std::uint64_t make_item(const std::string& x, std::int64_t key);
  void insert(const std::string& h, const std::string& x);
  Entry delete_min(const std::string& h);
  void decrease_key(const std::string& x, std::int64_t v);
  Entry erase(const std::string& x);
  void meld(const std::string& h1, const std::string& h2);
  std::optional<Entry> find_min(const std::string& h) const;

  bool has_heap(const std::string& h) const { return heaps_.count(h) != 0; }
  bool has_item(const std::string& x) const { return items_.count(x) != 0; }
  std::size_t size(const std::string& h) const;
  Policy policy(const std::string& h) const;
  // Heap currently holding x, or "" if none.
  const std::string& heap_of(const std::string& x) const;
  std::int64_t key_of(const std::string& x) const;
  const std::string& name_of(std::uint64_t id) const { return names_.at(id); }

 private:
  struct Item {
    std::uint64_t id;
    std::int64_t key;
    std::string heap;
  };
  struct Heap {
    Policy policy;
    std::set<Entry> entries;
  };
  Heap& heap(const std::string& h);
  const Heap& heap(const std::string& h) const;
  Item& item(const std::string& x);
  const Item& item(const std::string& x) const;

  std::map<std::string, Heap> heaps_;
  std::unordered_map<std::string, Item> items_;
  std::vector<std::string> names_;
};

// ---- traces ----------------------------------------------------------------

enum class Verb : std::uint8_t { newheap, item, insert, deletemin, decreasekey, del, meld, findmin };

const char* to_string(Verb v) noexcept;

struct TraceOp {
  Verb verb = Verb::findmin;
  std::string a;  // heap or item name
  std::string b;  // second name (insert: item, meld: consumed heap)
  std::int64_t key = 0;
  bool has_key = false;   // insert <h> <x> <key> shorthand
  Policy policy = Policy::simple;
  std::optional<std::uint64_t> seed;  // newheap only

  friend bool operator==(const TraceOp&, const TraceOp&) = default;
};

using OpTrace = std::vector<TraceOp>;

// One op per line:
//   newheap <h> <policy> [seed] | item <x> <key> | insert <h> <x> [key]
//   deletemin <h> | decreasekey <x> <key> | delete <x> | meld <h1> <h2>
//   findmin <h>
// '#' starts a comment. meld consumes <h2>. The keyed insert form stands for
// "item <x> <key>" followed by "insert <h> <x>".
OpTrace read_trace(std::istream& in);
OpTrace parse_trace(const std::string& text);
void write_trace(std::ostream& out, const OpTrace& trace);
std::string format_trace(const OpTrace& trace);
std::string format_op(const TraceOp& op);

struct TraceProfile {
  std::uint64_t seed = 1;
  std::size_t ops = 1000;         // heap operations, not counting newheap
  Policy policy = Policy::simple;
  std::size_t heaps = 3;          // target number of live heaps
  std::size_t max_heap_size = 256;
  // Relative operation weights.
  double w_insert = 4;
  double w_deletemin = 2;
  double w_decreasekey = 3;
  double w_delete = 1;
  double w_meld = 0.3;
  double w_findmin = 0.5;
  std::int64_t key_min = 0;
  std::int64_t key_max = 1'000'000;
  double equal_key_share = 0.1;   // decrease-keys that keep the current key
  bool unique_keys = false;       // strict mode: live keys globally distinct
};

// Precondition-respecting random trace. Deterministic per profile.
OpTrace gen_trace(const TraceProfile& profile);

// Runs the trace on the oracle alone; throws on the first violated
// precondition (message carries the op index).
void validate_trace(const OpTrace& trace);

struct ReplayOptions {
  std::optional<Policy> policy_override;
  bool strict_identity = false;   // compare removed item identity, not only keys
  bool check_structure = false;
  bool check_rank_bounds = false;
  bool check_active_children = false;
  bool audit = false;             // potential bounds per operation
  bool track_activity = false;
  CascadeOptions cascade;
};

struct ReplayReport {
  bool ok = true;
  std::size_t step = 0;           // index of first divergence when !ok
  std::string message;
  std::size_t ops = 0;
  std::size_t states_checked = 0;
  OpCounters counters;
  Verdict structure;              // asserted checks
  Verdict reported;               // report-only findings
  Verdict audit;
  double total_estimated = 0;
  std::vector<std::int64_t> removed_keys;
};

ReplayReport replay_differential(const OpTrace& trace, const ReplayOptions& options = {});

}  // namespace sfheap

#endif  // SFHEAP_ORACLE_HPP

#include "sfheap/oracle.hpp"

#include <charconv>
#include <istream>
#include <ostream>
#include <random>
#include <sstream>

namespace sfheap {

// ---- OracleHeap ------------------------------------------------------------

OracleHeap::Heap& OracleHeap::heap(const std::string& h) {
  auto it = heaps_.find(h);
  if (it == heaps_.end()) raise(Errc::stale_heap, "unknown heap '" + h + "'");
  return it->second;
}
const OracleHeap::Heap& OracleHeap::heap(const std::string& h) const {
  auto it = heaps_.find(h);
  if (it == heaps_.end()) raise(Errc::stale_heap, "unknown heap '" + h + "'");
  return it->second;
}
OracleHeap::Item& OracleHeap::item(const std::string& x) {
  auto it = items_.find(x);
  if (it == items_.end()) raise(Errc::stale_node, "unknown item '" + x + "'");
  return it->second;
}
const OracleHeap::Item& OracleHeap::item(const std::string& x) const {
  auto it = items_.find(x);
  if (it == items_.end()) raise(Errc::stale_node, "unknown item '" + x + "'");
  return it->second;
}

void OracleHeap::make_heap(const std::string& h, Policy p) {
  if (heaps_.count(h)) raise(Errc::parse, "heap '" + h + "' already exists");
  heaps_[h] = Heap{p, {}};
}

std::uint64_t OracleHeap::make_item(const std::string& x, std::int64_t key) {
  if (items_.count(x)) raise(Errc::parse, "item '" + x + "' already exists");
  std::uint64_t id = names_.size();
  names_.push_back(x);
  items_[x] = Item{id, key, ""};
  return id;
}

void OracleHeap::insert(const std::string& h, const std::string& x) {
  Heap& H = heap(h);
  Item& it = item(x);
  if (!it.heap.empty()) raise(Errc::already_in_heap, "item '" + x + "' is already in a heap");
  it.heap = h;
  H.entries.insert({it.key, it.id});
}

OracleHeap::Entry OracleHeap::delete_min(const std::string& h) {
  Heap& H = heap(h);
  if (H.entries.empty()) raise(Errc::empty_heap, "delete-min on empty heap '" + h + "'");
  Entry e = *H.entries.begin();
  H.entries.erase(H.entries.begin());
  items_.erase(names_[e.second]);
  return e;
}

void OracleHeap::decrease_key(const std::string& x, std::int64_t v) {
  Item& it = item(x);
  if (it.heap.empty()) raise(Errc::not_in_heap, "item '" + x + "' is in no heap");
  if (v > it.key) raise(Errc::key_increase, "decrease-key would increase '" + x + "'");
  Heap& H = heap(it.heap);
  H.entries.erase({it.key, it.id});
  it.key = v;
  H.entries.insert({it.key, it.id});
}

OracleHeap::Entry OracleHeap::erase(const std::string& x) {
  Item& it = item(x);
  if (it.heap.empty()) raise(Errc::not_in_heap, "item '" + x + "' is in no heap");
  Entry e{it.key, it.id};
  heap(it.heap).entries.erase(e);
  items_.erase(x);
  return e;
}

void OracleHeap::meld(const std::string& h1, const std::string& h2) {
  if (h1 == h2) raise(Errc::self_meld, "meld of heap '" + h1 + "' with itself");
  Heap& a = heap(h1);
  Heap& b = heap(h2);
  if (a.policy != b.policy) raise(Errc::policy_mismatch, "meld of heaps with different policies");
  for (const Entry& e : b.entries) {
    a.entries.insert(e);
    items_[names_[e.second]].heap = h1;
  }
  heaps_.erase(h2);
}

std::optional<OracleHeap::Entry> OracleHeap::find_min(const std::string& h) const {
  const Heap& H = heap(h);
  if (H.entries.empty()) return std::nullopt;
  return *H.entries.begin();
}

std::size_t OracleHeap::size(const std::string& h) const { return heap(h).entries.size(); }
Policy OracleHeap::policy(const std::string& h) const { return heap(h).policy; }
const std::string& OracleHeap::heap_of(const std::string& x) const { return item(x).heap; }
std::int64_t OracleHeap::key_of(const std::string& x) const { return item(x).key; }

// ---- trace text ------------------------------------------------------------

const char* to_string(Verb v) noexcept {
  switch (v) {
    case Verb::newheap: return "newheap";
    case Verb::item: return "item";
    case Verb::insert: return "insert";
    case Verb::deletemin: return "deletemin";
    case Verb::decreasekey: return "decreasekey";
    case Verb::del: return "delete";
    case Verb::meld: return "meld";
    case Verb::findmin: return "findmin";
  }
  return "?";
}

namespace {

[[noreturn]] void parse_error(std::size_t line, const std::string& what) {
  raise(Errc::parse, "line " + std::to_string(line) + ": " + what);
}

template <class Int>
Int parse_int(const std::string& tok, std::size_t line) {
  Int v{};
  const char* first = tok.data();
  const char* last = first + tok.size();
  if (!tok.empty() && tok[0] == '+') ++first;
  auto [p, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || p != last) parse_error(line, "bad integer '" + tok + "'");
  return v;
}

std::optional<Verb> parse_verb(const std::string& s) {
  static const std::pair<const char*, Verb> table[] = {
      {"newheap", Verb::newheap},   {"item", Verb::item},     {"insert", Verb::insert},
      {"deletemin", Verb::deletemin}, {"decreasekey", Verb::decreasekey},
      {"delete", Verb::del},        {"meld", Verb::meld},     {"findmin", Verb::findmin}};
  for (auto& [name, v] : table)
    if (s == name) return v;
  return std::nullopt;
}

}  // namespace

OpTrace read_trace(std::istream& in) {
  OpTrace out;
  std::string text;
  std::size_t line = 0;
  while (std::getline(in, text)) {
    ++line;
    if (auto hash = text.find('#'); hash != std::string::npos) text.erase(hash);
    std::istringstream ss(text);
    std::vector<std::string> tok;
    for (std::string t; ss >> t;) tok.push_back(t);
    if (tok.empty()) continue;
    auto verb = parse_verb(tok[0]);
    if (!verb) parse_error(line, "unknown verb '" + tok[0] + "'");
    TraceOp op;
    op.verb = *verb;
    auto arity = [&](std::size_t lo, std::size_t hi) {
      if (tok.size() - 1 < lo || tok.size() - 1 > hi)
        parse_error(line, std::string("wrong number of arguments for ") + to_string(op.verb));
    };
    switch (op.verb) {
      case Verb::newheap: {
        arity(2, 3);
        op.a = tok[1];
        auto p = parse_policy(tok[2]);
        if (!p) parse_error(line, "unknown policy '" + tok[2] + "'");
        op.policy = *p;
        if (tok.size() == 4) op.seed = parse_int<std::uint64_t>(tok[3], line);
        break;
      }
      case Verb::item:
      case Verb::decreasekey:
        arity(2, 2);
        op.a = tok[1];
        op.key = parse_int<std::int64_t>(tok[2], line);
        break;
      case Verb::insert:
        arity(2, 3);
        op.a = tok[1];
        op.b = tok[2];
        if (tok.size() == 4) {
          op.key = parse_int<std::int64_t>(tok[3], line);
          op.has_key = true;
        }
        break;
      case Verb::meld:
        arity(2, 2);
        op.a = tok[1];
        op.b = tok[2];
        break;
      case Verb::deletemin:
      case Verb::del:
      case Verb::findmin:
        arity(1, 1);
        op.a = tok[1];
        break;
    }
    out.push_back(std::move(op));
  }
  return out;
}

OpTrace parse_trace(const std::string& text) {
  std::istringstream in(text);
  return read_trace(in);
}

std::string format_op(const TraceOp& op) {
  std::ostringstream os;
  os << to_string(op.verb) << ' ' << op.a;
  switch (op.verb) {
    case Verb::newheap:
      os << ' ' << to_string(op.policy);
      if (op.seed) os << ' ' << *op.seed;
      break;
    case Verb::item:
    case Verb::decreasekey: os << ' ' << op.key; break;
    case Verb::insert:
      os << ' ' << op.b;
      if (op.has_key) os << ' ' << op.key;
      break;
    case Verb::meld: os << ' ' << op.b; break;
    default: break;
  }
  return os.str();
}

void write_trace(std::ostream& out, const OpTrace& trace) {
  for (const TraceOp& op : trace) out << format_op(op) << '\n';
}

std::string format_trace(const OpTrace& trace) {
  std::ostringstream os;
  write_trace(os, trace);
  return os.str();
}

// ---- generation ------------------------------------------------------------

namespace {

class Generator {
 public:
  explicit Generator(const TraceProfile& p) : p_(p), rng_(p.seed) {}

  OpTrace run() {
    if (p_.w_insert <= 0) raise(Errc::out_of_range, "trace profile needs a positive insert weight");
    for (double w : {p_.w_deletemin, p_.w_decreasekey, p_.w_delete, p_.w_meld, p_.w_findmin})
      if (w < 0) raise(Errc::out_of_range, "trace profile weights must be non-negative");
    if (p_.key_min > p_.key_max) raise(Errc::out_of_range, "trace profile key range is empty");
    if (p_.heaps == 0) raise(Errc::out_of_range, "trace profile needs at least one heap");
    while (heap_ops_ < p_.ops) step();
    return std::move(out_);
  }

 private:
  struct LiveHeap {
    std::string name;
    std::vector<std::string> items;
  };

  void step() {
    if (heaps_.size() < p_.heaps) {
      new_heap();
      return;
    }
    std::discrete_distribution<int> pick(
        {p_.w_insert, p_.w_deletemin, p_.w_decreasekey, p_.w_delete, p_.w_meld, p_.w_findmin});
    std::size_t hi = uniform(heaps_.size());
    LiveHeap& h = heaps_[hi];
    switch (pick(rng_)) {
      case 0:
        if (h.items.size() >= p_.max_heap_size) return delete_min(h);
        return insert(h);
      case 1:
        if (h.items.empty()) return insert(h);
        return delete_min(h);
      case 2:
        if (h.items.empty()) return insert(h);
        return decrease_key(h);
      case 3:
        if (h.items.empty()) return insert(h);
        return erase(h);
      case 4: return meld(hi);
      default: return emit({Verb::findmin, h.name});
    }
  }

  void emit(TraceOp op) {
    if (op.verb != Verb::newheap) ++heap_ops_;
    out_.push_back(std::move(op));
  }

  std::size_t uniform(std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng_); }

  std::int64_t fresh_key(std::int64_t lo, std::int64_t hi) {
    std::uniform_int_distribution<std::int64_t> d(lo, hi);
    std::int64_t k = d(rng_);
    if (!p_.unique_keys) return k;
    for (int tries = 0; tries < 64 && live_keys_.count(k); ++tries) k = d(rng_);
    if (live_keys_.count(k)) raise(Errc::out_of_range, "key range too small for unique keys");
    return k;
  }

  void new_heap() {
    TraceOp op{Verb::newheap, "h" + std::to_string(heap_serial_++)};
    op.policy = p_.policy;
    if (p_.policy == Policy::randomized) op.seed = rng_();
    heaps_.push_back({op.a, {}});
    emit(std::move(op));
  }

  void insert(LiveHeap& h) {
    std::string x = "x" + std::to_string(item_serial_++);
    std::int64_t k = fresh_key(p_.key_min, p_.key_max);
    keys_[x] = k;
    if (p_.unique_keys) live_keys_.insert(k);
    TraceOp op{Verb::insert, h.name, x};
    op.key = k;
    op.has_key = true;
    emit(std::move(op));
    h.items.push_back(x);
  }

  // The generator cannot know which item a delete-min removes without a
  // model, so it keeps a shadow oracle.
  void delete_min(LiveHeap& h) {
    std::int64_t best = 0;
    std::size_t at = 0;
    std::string best_name;
    for (std::size_t i = 0; i < h.items.size(); ++i) {
      auto& it = h.items[i];
      std::int64_t k = keys_[it];
      std::uint64_t id = serial_of(it);
      if (i == 0 || k < best || (k == best && id < serial_of(best_name))) {
        best = k;
        at = i;
        best_name = it;
      }
    }
    drop(h, at);
    emit({Verb::deletemin, h.name});
  }

  void decrease_key(LiveHeap& h) {
    const std::string& x = h.items[uniform(h.items.size())];
    std::int64_t cur = keys_[x];
    std::int64_t v = cur;
    if (std::bernoulli_distribution(1.0 - p_.equal_key_share)(rng_)) {
      std::int64_t lo = cur - (p_.key_max - p_.key_min) / 2;
      if (lo > cur) lo = cur;  // overflow guard for huge ranges
      if (p_.unique_keys) {
        std::uniform_int_distribution<std::int64_t> d(lo, cur);
        std::int64_t c = d(rng_);
        for (int tries = 0; tries < 64 && c != cur && live_keys_.count(c); ++tries) c = d(rng_);
        if (c == cur || !live_keys_.count(c)) v = c;
      } else {
        v = std::uniform_int_distribution<std::int64_t>(lo, cur)(rng_);
      }
    }
    if (p_.unique_keys) {
      live_keys_.erase(cur);
      live_keys_.insert(v);
    }
    keys_[x] = v;
    TraceOp op{Verb::decreasekey, x};
    op.key = v;
    emit(std::move(op));
  }

  void erase(LiveHeap& h) {
    std::size_t at = uniform(h.items.size());
    std::string x = h.items[at];
    drop(h, at);
    emit({Verb::del, x});
  }

  void meld(std::size_t hi) {
    if (heaps_.size() < 2) return;
    std::size_t hj = uniform(heaps_.size() - 1);
    if (hj >= hi) ++hj;
    LiveHeap& a = heaps_[hi];
    LiveHeap& b = heaps_[hj];
    if (a.items.size() + b.items.size() > p_.max_heap_size) return emit({Verb::findmin, a.name});
    emit({Verb::meld, a.name, b.name});
    a.items.insert(a.items.end(), b.items.begin(), b.items.end());
    heaps_.erase(heaps_.begin() + static_cast<std::ptrdiff_t>(hj));
  }

  void drop(LiveHeap& h, std::size_t at) {
    const std::string& x = h.items[at];
    if (p_.unique_keys) live_keys_.erase(keys_[x]);
    keys_.erase(x);
    h.items[at] = h.items.back();
    h.items.pop_back();
  }

  static std::uint64_t serial_of(const std::string& name) {
    return name.empty() ? 0 : std::stoull(name.substr(1));
  }

  TraceProfile p_;
  std::mt19937_64 rng_;
  OpTrace out_;
  std::vector<LiveHeap> heaps_;
  std::unordered_map<std::string, std::int64_t> keys_;
  std::set<std::int64_t> live_keys_;
  std::size_t heap_ops_ = 0;
  std::uint64_t heap_serial_ = 0;
  std::uint64_t item_serial_ = 0;
};

}  // namespace

OpTrace gen_trace(const TraceProfile& profile) { return Generator(profile).run(); }

// ---- validation and replay -------------------------------------------------

namespace {

void apply_oracle(OracleHeap& o, const TraceOp& op, std::optional<OracleHeap::Entry>* removed) {
  switch (op.verb) {
    case Verb::newheap: o.make_heap(op.a, op.policy); break;
    case Verb::item: o.make_item(op.a, op.key); break;
    case Verb::insert:
      if (op.has_key) o.make_item(op.b, op.key);
      o.insert(op.a, op.b);
      break;
    case Verb::deletemin: {
      auto e = o.delete_min(op.a);
      if (removed) *removed = e;
      break;
    }
    case Verb::decreasekey: o.decrease_key(op.a, op.key); break;
    case Verb::del: {
      auto e = o.erase(op.a);
      if (removed) *removed = e;
      break;
    }
    case Verb::meld: o.meld(op.a, op.b); break;
    case Verb::findmin: o.find_min(op.a); break;
  }
}

}  // namespace

void validate_trace(const OpTrace& trace) {
  OracleHeap o;
  for (std::size_t i = 0; i < trace.size(); ++i) {
    try {
      apply_oracle(o, trace[i], nullptr);
    } catch (const Error& e) {
      raise(e.code(), "op " + std::to_string(i) + " (" + format_op(trace[i]) + "): " + e.what());
    }
  }
}

namespace {

class Replayer {
 public:
  Replayer(const OpTrace& t, const ReplayOptions& opt)
      : trace_(t), opt_(opt), forest_(ForestOptions{opt.cascade, opt.track_activity || opt.check_active_children}) {
    if (opt_.audit) forest_.set_observer(&audit_);
  }

  ReplayReport run() {
    for (std::size_t i = 0; i < trace_.size() && report_.ok; ++i) {
      try {
        step(i, trace_[i]);
      } catch (const Error& e) {
        fail(i, std::string("error: ") + e.what());
      }
      ++report_.ops;
    }
    report_.counters = forest_.counters();
    if (opt_.audit) {
      for (const auto& v : audit_.verdict().violations) {
        if (audit_asserted_) report_.audit.violations.push_back(v);
        else report_.reported.violations.push_back(v);
      }
      report_.total_estimated = audit_.total_estimated();
      if (!report_.audit.ok() && report_.ok) {
        report_.ok = false;
        report_.message = "amortized audit: " + report_.audit.summary();
      }
    }
    return std::move(report_);
  }

 private:
  void fail(std::size_t i, std::string msg) {
    if (!report_.ok) return;
    report_.ok = false;
    report_.step = i;
    report_.message = "op " + std::to_string(i) + " (" + format_op(trace_[i]) + "): " + msg;
  }

  HeapRef heap(const std::string& h) { return heaps_.at(h); }

  void step(std::size_t i, const TraceOp& op) {
    std::optional<OracleHeap::Entry> expect;
    std::string touched;
    if (op.verb == Verb::decreasekey || op.verb == Verb::del) touched = oracle_.heap_of(op.a);
    apply_oracle(oracle_, op, &expect);
    switch (op.verb) {
      case Verb::newheap: {
        Policy p = opt_.policy_override.value_or(op.policy);
        std::uint64_t seed = op.seed.value_or(std::hash<std::string>{}(op.a));
        heaps_[op.a] = forest_.make_heap(p, seed);
        if (p != Policy::simple) audit_asserted_ = false;
        touched = op.a;
        break;
      }
      case Verb::item: make_item(op.a, op.key); break;
      case Verb::insert:
        if (op.has_key) make_item(op.b, op.key);
        forest_.insert(items_.at(op.b), heap(op.a));
        touched = op.a;
        break;
      case Verb::deletemin: {
        auto r = forest_.delete_min(heap(op.a));
        std::uint64_t id = oracle_id(r.info);
        check_removed(i, r.key, id, *expect);
        if (report_.ok && id != expect->second) adopt_tie(id, expect->second);
        touched = op.a;
        break;
      }
      case Verb::decreasekey:
        forest_.decrease_key(items_.at(op.a), op.key, heap(touched));
        break;
      case Verb::del: {
        auto r = forest_.erase(items_.at(op.a), heap(touched));
        check_removed(i, r.key, oracle_id(r.info), *expect);
        break;
      }
      case Verb::meld:
        forest_.meld(heap(op.a), heap(op.b));
        heaps_.erase(op.b);
        touched = op.a;
        break;
      case Verb::findmin: touched = op.a; break;
    }
    if (touched.empty() || !report_.ok) return;
    compare_min(i, touched);
    run_checks(i, touched);
  }

  void make_item(const std::string& x, std::int64_t key) {
    std::uint64_t id = next_id_++;
    items_[x] = forest_.make_item(id, key);
  }

  // Among equal keys the forest may remove another item than the oracle.
  // Both choices are legal; the oracle's pick is still in the forest under a
  // different node, so the surviving name is rebound to that node.
  void adopt_tie(std::uint64_t removed, std::uint64_t expected) {
    NodeRef node = items_.at(oracle_.name_of(expected));
    items_[oracle_.name_of(removed)] = node;
    alias_[forest_.info(node)] = removed;
  }

  std::uint64_t oracle_id(std::uint64_t info) const {
    auto it = alias_.find(info);
    return it == alias_.end() ? info : it->second;
  }

  void check_removed(std::size_t i, std::int64_t key, std::uint64_t id, const OracleHeap::Entry& expect) {
    report_.removed_keys.push_back(key);
    if (key != expect.first) {
      fail(i, "removed key " + std::to_string(key) + ", oracle expects " + std::to_string(expect.first));
    } else if (opt_.strict_identity && id != expect.second) {
      fail(i, "removed item " + oracle_.name_of(id) + ", oracle expects " + oracle_.name_of(expect.second));
    }
  }

  void compare_min(std::size_t i, const std::string& h) {
    auto want = oracle_.find_min(h);
    auto got = forest_.find_min(heap(h));
    if (want.has_value() != got.has_value()) {
      fail(i, "find-min emptiness disagrees with oracle");
    } else if (got && forest_.key(*got) != want->first) {
      fail(i, "find-min key " + std::to_string(forest_.key(*got)) + ", oracle expects " +
                  std::to_string(want->first));
    } else if (forest_.size(heap(h)) != oracle_.size(h)) {
      fail(i, "heap size disagrees with oracle");
    }
  }

  void run_checks(std::size_t i, const std::string& h) {
    HeapRef H = heap(h);
    Policy p = forest_.policy(H);
    bool any = false;
    auto absorb = [&](const Verdict& v, bool asserted) {
      if (v.ok()) return;
      if (asserted) {
        report_.structure.merge(v);
        fail(i, v.summary(3));
      } else if (report_.reported.violations.size() < 1000) {
        report_.reported.merge(v);
      }
    };
    bool ranks_asserted = keeps_rank_invariants(p, opt_.cascade);
    auto split = [&](const Verdict& v) {
      Verdict asserted, reported;
      for (auto& x : v.violations) {
        bool rank_check = x.check != "structure" && x.check != "heap-order";
        bool assert_it = x.check != "report" && (ranks_asserted || !rank_check);
        (assert_it ? asserted : reported).violations.push_back(x);
      }
      absorb(asserted, true);
      absorb(reported, false);
    };
    if (opt_.check_structure) {
      any = true;
      split(check_structure(forest_, H));
    }
    if (opt_.check_rank_bounds) {
      any = true;
      split(check_rank_bounds(forest_, H, true));
    }
    if (opt_.check_active_children) {
      any = true;
      absorb(check_active_children(forest_, H), p == Policy::simple || p == Policy::heap_order);
    }
    if (any) ++report_.states_checked;
  }

  const OpTrace& trace_;
  ReplayOptions opt_;
  IntForest forest_;
  AmortizedAudit<IntForest> audit_;
  bool audit_asserted_ = true;
  OracleHeap oracle_;
  std::unordered_map<std::string, HeapRef> heaps_;
  std::unordered_map<std::string, NodeRef> items_;
  std::unordered_map<std::uint64_t, std::uint64_t> alias_;  // forest item id -> oracle item id
  std::uint64_t next_id_ = 0;
  ReplayReport report_;
};

}  // namespace

ReplayReport replay_differential(const OpTrace& trace, const ReplayOptions& options) {
  return Replayer(trace, options).run();
}

}  // namespace sfheap

#include "sfheap/adversary.hpp"

#include <limits>
#include <sstream>
#include <unordered_map>

namespace sfheap {

namespace {

constexpr std::int64_t kStride = std::int64_t{1} << 32;
constexpr std::int64_t kLowStart = std::numeric_limits<std::int64_t>::min() / 2;

std::string item_name(std::uint64_t id) { return "x" + std::to_string(id); }

ShapeCheck mismatch(const std::string& where, const std::string& what) { return {false, where + ": " + what}; }

ShapeCheck check_s(const IntForest& f, NodeRef x, int k, const std::string& where) {
  auto kids = f.children(x);
  if (static_cast<int>(kids.size()) != k)
    return mismatch(where, std::to_string(kids.size()) + " children, want " + std::to_string(k));
  if (static_cast<int>(f.rank(x)) != k)
    return mismatch(where, "root rank " + std::to_string(f.rank(x)) + ", want " + std::to_string(k));
  for (NodeRef c : kids) {
    if (!f.children(c).empty()) return mismatch(where, "leaf with children");
    if (f.rank(c) != 0) return mismatch(where, "leaf of rank " + std::to_string(f.rank(c)));
  }
  return {};
}

}  // namespace

ShapeSpec ShapeSpec::S(int k) {
  if (k < 0) raise(Errc::out_of_range, "S(k) needs k >= 0");
  return {Kind::S, k, 0};
}

ShapeSpec ShapeSpec::T(int k, int i) {
  if (k < 1 || i < 0 || i > k) raise(Errc::out_of_range, "T(k, i) needs k >= 1 and 0 <= i <= k");
  return {Kind::T, k, i};
}

std::uint64_t ShapeSpec::size() const {
  if (kind == Kind::S) return static_cast<std::uint64_t>(k) + 1;
  auto kk = static_cast<std::uint64_t>(k);
  // 1 + sum over j in 0..k of (j + 1), less S(i).
  return 1 + (kk + 1) * (kk + 2) / 2 - (static_cast<std::uint64_t>(i) + 1);
}

std::string ShapeSpec::name() const {
  if (kind == Kind::S) return "S(" + std::to_string(k) + ")";
  return "T(" + std::to_string(k) + "," + std::to_string(i) + ")";
}

ShapeCheck verify_shape(const IntForest& f, NodeRef root, const ShapeSpec& spec) {
  if (!f.valid(root)) return mismatch(spec.name(), "stale root");
  if (spec.kind == ShapeSpec::Kind::S) return check_s(f, root, spec.k, spec.name());
  auto kids = f.children(root);
  if (static_cast<int>(kids.size()) != spec.k)
    return mismatch(spec.name(), "root has " + std::to_string(kids.size()) + " children, want " +
                                     std::to_string(spec.k));
  std::vector<bool> seen(static_cast<std::size_t>(spec.k) + 1, false);
  for (NodeRef c : kids) {
    auto d = static_cast<int>(f.children(c).size());
    std::string where = spec.name() + " child of degree " + std::to_string(d);
    if (d > spec.k || d == spec.i) return mismatch(where, "no such S in the spec");
    if (seen[d]) return mismatch(where, "S(" + std::to_string(d) + ") appears twice");
    seen[d] = true;
    if (ShapeCheck s = check_s(f, c, d, where); !s) return s;
  }
  return {};
}

std::uint64_t build_cost(int k) {
  if (k < 1) raise(Errc::out_of_range, "build_cost needs k >= 1");
  // make_heap and two inserts give T(1,1); each level j then converts down
  // with steps of i + 2 operations and promotes with one insert.
  std::uint64_t ops = 3;
  for (std::uint64_t j = 1; j < static_cast<std::uint64_t>(k); ++j) ops += 1 + j * (j + 1) / 2 + 2 * j;
  return ops;
}

// ---- Adversary -------------------------------------------------------------

Adversary::Adversary(bool record_trace) : low_(kLowStart), record_(record_trace) {
  forest_.set_observer(&meter_);
}

std::int64_t Adversary::next_low() {
  low_ += kStride;
  ++log_.keys_issued;
  return low_;
}

std::int64_t Adversary::next_high() {
  high_ += kStride;
  ++log_.keys_issued;
  return high_;
}

void Adversary::require(bool cond, const std::string& what) const {
  if (!cond) {
    std::ostringstream os;
    os << "adversary at T(" << k_ << "," << i_ << "): " << what;
    raise(Errc::check_failed, os.str());
  }
}

NodeRef Adversary::insert(std::int64_t key) {
  std::uint64_t id = items_++;
  NodeRef x = forest_.make_item(id, key);
  forest_.insert(x, heap_);
  ++log_.inserts;
  if (record_) {
    TraceOp op;
    op.verb = Verb::insert;
    op.a = "h";
    op.b = item_name(id);
    op.key = key;
    op.has_key = true;
    trace_.push_back(op);
  }
  return x;
}

void Adversary::decrease(NodeRef x, std::int64_t v) {
  std::uint64_t id = forest_.info(x);
  forest_.decrease_key(x, v, heap_);
  ++log_.decrease_keys;
  if (record_) {
    TraceOp op;
    op.verb = Verb::decreasekey;
    op.a = item_name(id);
    op.key = v;
    trace_.push_back(op);
  }
}

IntForest::Removed Adversary::delete_min() {
  ++log_.delete_mins;
  if (record_) {
    TraceOp op;
    op.verb = Verb::deletemin;
    op.a = "h";
    trace_.push_back(op);
  }
  return forest_.delete_min(heap_);
}

void Adversary::start() {
  heap_ = forest_.make_heap(Policy::non_cascading);
  ++log_.make_heaps;
  if (record_) {
    TraceOp op;
    op.verb = Verb::newheap;
    op.a = "h";
    op.policy = Policy::non_cascading;
    trace_.push_back(op);
  }
  root_ = insert(next_low());
  sigma_ = {insert(next_low()), NodeRef{}};
  k_ = 1;
  i_ = 1;
}

void Adversary::build(int k) {
  if (k < 1) raise(Errc::out_of_range, "build needs k >= 1");
  if (k_ == 0) start();
  if (k_ > k || (k_ == k && i_ != k)) raise(Errc::out_of_range, "build can only move upward from T(j,j)");
  while (!(k_ == k && i_ == k)) {
    if (i_ > 0)
      convert_step();
    else
      promote();
  }
}

void Adversary::promote() {
  require(k_ > 0 && i_ == 0, "promote needs T(k,0)");
  sigma_[0] = insert(next_low());
  sigma_.push_back(NodeRef{});
  ++k_;
  i_ = k_;
  require(verify().ok, "promote: " + verify().diff);
}

void Adversary::convert_step() {
  require(k_ > 0 && i_ > 0, "convert_step needs T(k,i) with i >= 1");
  const int i = i_;
  auto key = [&](NodeRef x) { return forest_.key(x); };
  NodeRef s0 = sigma_[0];

  // The two new items pair up first (the winner a, the loser b). For i >= 2,
  // a then absorbs S(1..i-2) and loses to S(i-1), so a must sit between
  // S(i-1)'s key and the keys of S(1..i-2).
  std::int64_t ka = i == 1 ? next_high() : key(sigma_[i - 1]) + 1 + 2 * ++step_;
  NodeRef a = insert(ka);
  NodeRef b = insert(ka + 1);

  require(key(root_) < key(s0), "root key must be below S(0)");
  for (int j = 1; j <= k_; ++j) {
    if (j == i) continue;
    require(key(s0) < key(sigma_[j]), "S(0) must beat every other root to end as the root");
  }
  if (i >= 2) require(key(sigma_[i - 1]) < ka, "S(i-1) must beat the new pair");
  for (int j = 1; j <= i - 2; ++j) require(ka < key(sigma_[j]), "the new pair must beat S(1..i-2)");

  OpCounters before = forest_.counters();
  auto removed = delete_min();
  OpCounters d = forest_.counters() - before;
  require(removed.ref == root_, "delete-min removed another item than the root");
  require(d.fair_links == static_cast<std::uint64_t>(i),
          "delete-min did " + std::to_string(d.fair_links) + " fair links, want " + std::to_string(i) +
              " (child prepend or first-to-last scan order violated)");
  NodeRef top = forest_.ref_of(forest_.min_index(heap_));
  require(top == s0, "S(0) did not end as the root (increasing-rank sweep order violated)");
  NodeRef new_si = i == 1 ? a : sigma_[i - 1];
  require(forest_.parent(new_si) == top, "rebuilt S(i) is not a child of the root");

  // Cut the pair's loser and S(1..i-2) out from under a.
  if (i >= 2) {
    decrease(b, next_low());
    for (int j = 1; j <= i - 2; ++j) decrease(sigma_[j], key(sigma_[j]));
  }

  root_ = s0;
  sigma_[i] = new_si;
  if (i >= 2) {
    sigma_[i - 1] = NodeRef{};
    sigma_[0] = b;
  } else {
    sigma_[0] = NodeRef{};
  }
  --i_;
  ShapeCheck c = verify();
  require(c.ok, "after convert_step: " + c.diff);
}

RoundStats Adversary::steady_round() {
  require(k_ > 0 && i_ == k_, "steady_round needs T(k,k)");
  RoundStats r;
  std::int64_t z = forest_.key(root_) + 1;
  require(z < forest_.key(sigma_[0]), "cycle key must stay below S(0)");
  OpCounters before = forest_.counters();
  double est = meter_.total();
  NodeRef x = insert(z);
  r.n = forest_.size(heap_);
  delete_min();
  r.delta = forest_.counters() - before;
  r.estimated = meter_.total() - est;
  require(r.delta.fair_links == static_cast<std::uint64_t>(k_),
          "cycle delete-min did " + std::to_string(r.delta.fair_links) + " fair links, want " +
              std::to_string(k_));
  require(forest_.ref_of(forest_.min_index(heap_)) == x, "inserted item did not become the root");
  root_ = x;
  ShapeCheck c = verify();
  require(c.ok, "after steady round: " + c.diff);
  return r;
}

ShapeCheck Adversary::verify() const {
  if (k_ == 0) return {false, "nothing built"};
  return verify_shape(forest_, root_, shape());
}

// ---- sequence-level bound ----------------------------------------------------

LowerBoundReport run_lower_bound(std::uint64_t m, bool record_trace) {
  if (m < 6) raise(Errc::out_of_range, "run_lower_bound needs m >= 6");
  LowerBoundReport rep;
  rep.m = m;
  int k = 1;
  while (build_cost(k + 1) <= m / 3) ++k;
  Adversary adv(record_trace);
  adv.build(k);
  rep.k = k;
  rep.build_ops = adv.operations();
  double cost = 0;
  while (adv.operations() + 2 <= m) {
    RoundStats r = adv.steady_round();
    rep.n = r.n;
    rep.links += r.delta.links();
    // The insert costs 1; the rest is the delete-min.
    cost += r.estimated - 1;
    ++rep.rounds;
  }
  rep.operations = adv.operations();
  rep.estimated = adv.estimated_time();
  rep.links = adv.forest().counters().links();
  rep.cycle_delete_min_cost = rep.rounds ? cost / static_cast<double>(rep.rounds) : 0;
  if (record_trace) rep.trace = adv.trace();
  return rep;
}

ScheduleCost price_trace(const OpTrace& trace, Policy policy) {
  IntForest f;
  CostMeter<IntForest> meter(true);
  f.set_observer(&meter);
  std::unordered_map<std::string, HeapRef> heaps;
  std::unordered_map<std::string, NodeRef> items;
  std::unordered_map<std::string, std::string> holder;  // item -> heap name
  std::uint64_t next = 0;
  auto item = [&](const std::string& x, std::int64_t key) { items[x] = f.make_item(next++, key); };
  for (const TraceOp& op : trace) {
    switch (op.verb) {
      case Verb::newheap: heaps[op.a] = f.make_heap(policy, op.seed.value_or(0)); break;
      case Verb::item: item(op.a, op.key); break;
      case Verb::insert:
        if (op.has_key) item(op.b, op.key);
        f.insert(items.at(op.b), heaps.at(op.a));
        holder[op.b] = op.a;
        break;
      case Verb::deletemin: {
        auto r = f.delete_min(heaps.at(op.a));
        holder.erase(item_name(r.info));
        break;
      }
      case Verb::decreasekey: f.decrease_key(items.at(op.a), op.key, heaps.at(holder.at(op.a))); break;
      case Verb::del:
        f.erase(items.at(op.a), heaps.at(holder.at(op.a)));
        holder.erase(op.a);
        break;
      case Verb::meld:
        f.meld(heaps.at(op.a), heaps.at(op.b));
        for (auto& [x, h] : holder)
          if (h == op.b) h = op.a;
        heaps.erase(op.b);
        break;
      case Verb::findmin: f.find_min(heaps.at(op.a)); break;
    }
  }
  ScheduleCost c;
  c.operations = meter.operations();
  c.estimated = meter.total();
  c.counters = f.counters();
  c.phi = compute_potential(f).phi;
  c.records = meter.records();
  return c;
}

CycleCost cycle_cost(const ScheduleCost& c, std::uint64_t rounds) {
  CycleCost out;
  OpCounters sum;
  double est = 0;
  for (auto it = c.records.rbegin(); it != c.records.rend() && out.rounds < rounds; ++it) {
    if (it->kind != OpKind::delete_min) continue;
    if (out.rounds == 0) out.n = it->n;
    sum += it->delta;
    est += it->estimated;
    ++out.rounds;
  }
  if (out.rounds == 0) return out;
  double d = static_cast<double>(out.rounds);
  out.links = static_cast<double>(sum.links()) / d;
  out.estimated = est / d;
  out.fair_links = static_cast<double>(sum.fair_links) / d;
  out.naive_links = static_cast<double>(sum.naive_links) / d;
  out.iterations = static_cast<double>(sum.iterations) / d;
  out.comparisons = static_cast<double>(sum.comparisons) / d;
  return out;
}

}  // namespace sfheap

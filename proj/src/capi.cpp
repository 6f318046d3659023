#include "sfheap/sfheap.h"

#include <new>
#include <string>

#include "sfheap/adversary.hpp"
#include "sfheap/bench.hpp"
#include "sfheap/instrument.hpp"
#include "sfheap/oracle.hpp"

struct sfheap_forest {
  sfheap::IntForest f;
};

namespace {

using namespace sfheap;

thread_local std::string g_error;

sfheap_status status_of(Errc e) {
  switch (e) {
    case Errc::stale_node:
    case Errc::stale_heap: return SFHEAP_E_STALE;
    case Errc::empty_heap: return SFHEAP_E_EMPTY;
    case Errc::bottom_key:
    case Errc::out_of_range: return SFHEAP_E_ARGUMENT;
    case Errc::parse: return SFHEAP_E_PARSE;
    case Errc::check_failed: return SFHEAP_E_CHECK;
    default: return SFHEAP_E_PRECONDITION;
  }
}

sfheap_status fail(sfheap_status s, std::string msg) {
  g_error = std::move(msg);
  return s;
}

template <class Fn>
sfheap_status guard(Fn&& fn) {
  try {
    return fn();
  } catch (const Error& e) {
    return fail(status_of(e.code()), e.what());
  } catch (const std::bad_alloc&) {
    return fail(SFHEAP_E_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(SFHEAP_E_INTERNAL, e.what());
  }
}

#define SFHEAP_REQUIRE(cond)                                                   \
  do {                                                                         \
    if (!(cond)) return fail(SFHEAP_E_ARGUMENT, "invalid argument: " #cond);   \
  } while (0)

bool policy_ok(sfheap_policy p) { return p >= 0 && p < SFHEAP_POLICY_COUNT; }
Policy to_policy(sfheap_policy p) { return kAllPolicies[static_cast<std::size_t>(p)]; }

CascadeOptions to_cascade(const sfheap_cascade_options* o) {
  CascadeOptions c;
  if (o) {
    c.randomized_from_parent = o->randomized_from_parent != 0;
    c.always_decrement_parent = o->always_decrement_parent != 0;
  }
#ifdef SFHEAP_ENABLE_FAULT_INJECTION
  c.fault_skip_unmark = true;
#endif
  return c;
}

HeapRef heap_ref(sfheap_heap h) { return {h.index, h.generation}; }
NodeRef node_ref(sfheap_item x) { return {x.index, x.generation}; }

sfheap_counters to_c(const OpCounters& c) {
  return {c.fair_links, c.naive_links, c.comparisons, c.iterations, c.cuts, c.markings, c.unmarkings};
}

void emit(sfheap_row_sink sink, void* user, const ResultRow& r) {
  if (!sink) return;
  sfheap_row row{r.policy.c_str(), r.workload.c_str(), r.n,           r.op_kind.c_str(), r.fair_links,
                 r.naive_links,    r.iterations,       r.comparisons, r.wall_time_ns,    r.phi};
  sink(&row, user);
}

ResultRow from_c(const sfheap_row& r) {
  ResultRow out;
  out.policy = r.policy ? r.policy : "";
  out.workload = r.workload ? r.workload : "";
  out.n = r.n;
  out.op_kind = r.op_kind ? r.op_kind : "";
  out.fair_links = r.fair_links;
  out.naive_links = r.naive_links;
  out.iterations = r.iterations;
  out.comparisons = r.comparisons;
  out.wall_time_ns = r.wall_time_ns;
  out.phi = r.phi;
  return out;
}

void send(sfheap_text_sink sink, void* user, const std::string& s) {
  if (sink) sink(s.data(), s.size(), user);
}

}  // namespace

extern "C" {

const char* sfheap_last_error(void) { return g_error.c_str(); }

const char* sfheap_status_name(sfheap_status s) {
  switch (s) {
    case SFHEAP_OK: return "ok";
    case SFHEAP_E_ARGUMENT: return "invalid argument";
    case SFHEAP_E_STALE: return "stale reference";
    case SFHEAP_E_EMPTY: return "empty heap";
    case SFHEAP_E_PRECONDITION: return "precondition violated";
    case SFHEAP_E_PARSE: return "parse error";
    case SFHEAP_E_CHECK: return "check failed";
    case SFHEAP_E_IO: return "i/o error";
    case SFHEAP_E_INTERNAL: return "internal error";
  }
  return "unknown status";
}

const char* sfheap_policy_name(sfheap_policy p) {
  if (!policy_ok(p)) return "?";
  return to_string(to_policy(p)).data();
}

sfheap_status sfheap_policy_parse(const char* name, sfheap_policy* out) {
  SFHEAP_REQUIRE(name && out);
  auto p = parse_policy(name);
  if (!p) return fail(SFHEAP_E_ARGUMENT, std::string("unknown policy '") + name + "'");
  *out = static_cast<sfheap_policy>(static_cast<int>(*p));
  return SFHEAP_OK;
}

// ---- heaps -------------------------------------------------------------------

sfheap_status sfheap_forest_new(const sfheap_cascade_options* opt, sfheap_forest** out) {
  SFHEAP_REQUIRE(out);
  return guard([&] {
    *out = new sfheap_forest{IntForest(ForestOptions{to_cascade(opt), false})};
    return SFHEAP_OK;
  });
}

void sfheap_forest_free(sfheap_forest* f) { delete f; }

sfheap_status sfheap_make_heap(sfheap_forest* f, sfheap_policy p, uint64_t seed, sfheap_heap* out) {
  SFHEAP_REQUIRE(f && out && policy_ok(p));
  return guard([&] {
    HeapRef h = f->f.make_heap(to_policy(p), seed);
    *out = {h.index, h.generation};
    return SFHEAP_OK;
  });
}

sfheap_status sfheap_make_item(sfheap_forest* f, int64_t key, uint64_t info, sfheap_item* out) {
  SFHEAP_REQUIRE(f && out);
  return guard([&] {
    NodeRef x = f->f.make_item(info, key);
    *out = {x.index, x.generation};
    return SFHEAP_OK;
  });
}

sfheap_status sfheap_insert(sfheap_forest* f, sfheap_item x, sfheap_heap h) {
  SFHEAP_REQUIRE(f);
  return guard([&] {
    f->f.insert(node_ref(x), heap_ref(h));
    return SFHEAP_OK;
  });
}

sfheap_status sfheap_meld(sfheap_forest* f, sfheap_heap h1, sfheap_heap h2) {
  SFHEAP_REQUIRE(f);
  return guard([&] {
    f->f.meld(heap_ref(h1), heap_ref(h2));
    return SFHEAP_OK;
  });
}

sfheap_status sfheap_find_min(sfheap_forest* f, sfheap_heap h, sfheap_item* out, int* found) {
  SFHEAP_REQUIRE(f && out && found);
  return guard([&] {
    auto x = f->f.find_min(heap_ref(h));
    *found = x.has_value();
    if (x) *out = {x->index, x->generation};
    return SFHEAP_OK;
  });
}

sfheap_status sfheap_delete_min(sfheap_forest* f, sfheap_heap h, int64_t* key, uint64_t* info) {
  SFHEAP_REQUIRE(f);
  return guard([&] {
    auto r = f->f.delete_min(heap_ref(h));
    if (key) *key = r.key;
    if (info) *info = r.info;
    return SFHEAP_OK;
  });
}

sfheap_status sfheap_decrease_key(sfheap_forest* f, sfheap_item x, int64_t key, sfheap_heap h) {
  SFHEAP_REQUIRE(f);
  return guard([&] {
    f->f.decrease_key(node_ref(x), key, heap_ref(h));
    return SFHEAP_OK;
  });
}

sfheap_status sfheap_delete(sfheap_forest* f, sfheap_item x, sfheap_heap h, int64_t* key, uint64_t* info) {
  SFHEAP_REQUIRE(f);
  return guard([&] {
    auto r = f->f.erase(node_ref(x), heap_ref(h));
    if (key) *key = r.key;
    if (info) *info = r.info;
    return SFHEAP_OK;
  });
}

sfheap_status sfheap_key(const sfheap_forest* f, sfheap_item x, int64_t* out) {
  SFHEAP_REQUIRE(f && out);
  return guard([&] {
    *out = f->f.key(node_ref(x));
    return SFHEAP_OK;
  });
}

sfheap_status sfheap_size(const sfheap_forest* f, sfheap_heap h, uint64_t* out) {
  SFHEAP_REQUIRE(f && out);
  return guard([&] {
    *out = f->f.size(heap_ref(h));
    return SFHEAP_OK;
  });
}

sfheap_status sfheap_counters_get(const sfheap_forest* f, sfheap_counters* out) {
  SFHEAP_REQUIRE(f && out);
  *out = to_c(f->f.counters());
  return SFHEAP_OK;
}

sfheap_status sfheap_potential(const sfheap_forest* f, sfheap_heap h, int64_t* out) {
  SFHEAP_REQUIRE(f && out);
  return guard([&] {
    if (!f->f.valid(heap_ref(h))) return fail(SFHEAP_E_STALE, "stale heap reference");
    *out = compute_potential(f->f, heap_ref(h)).phi;
    return SFHEAP_OK;
  });
}

sfheap_status sfheap_check_heap(const sfheap_forest* f, sfheap_heap h) {
  SFHEAP_REQUIRE(f);
  return guard([&] {
    HeapRef r = heap_ref(h);
    if (!f->f.valid(r)) return fail(SFHEAP_E_STALE, "stale heap reference");
    Verdict v = check_structure(f->f, r);
    v.merge(check_rank_bounds(f->f, r));
    if (!v.ok()) return fail(SFHEAP_E_CHECK, v.summary());
    return SFHEAP_OK;
  });
}

// ---- results -------------------------------------------------------------------

sfheap_status sfheap_row_csv(const sfheap_row* row, sfheap_text_sink sink, void* user) {
  SFHEAP_REQUIRE(sink);
  return guard([&] {
    send(sink, user, row ? to_csv(from_c(*row)) : csv_header());
    return SFHEAP_OK;
  });
}

sfheap_status sfheap_row_jsonl(const sfheap_row* row, sfheap_text_sink sink, void* user) {
  SFHEAP_REQUIRE(row && sink);
  return guard([&] {
    send(sink, user, to_jsonl(from_c(*row)));
    return SFHEAP_OK;
  });
}

sfheap_status sfheap_fit_exponent(const double* n, const double* cost, size_t count, double* slope) {
  SFHEAP_REQUIRE(n && cost && slope);
  return guard([&] {
    std::vector<std::pair<double, double>> pts;
    for (size_t i = 0; i < count; ++i) pts.push_back({n[i], cost[i]});
    *slope = fit_exponent(pts);
    return SFHEAP_OK;
  });
}

// ---- experiments ---------------------------------------------------------------

sfheap_status sfheap_verify(const sfheap_verify_config* cfg, sfheap_verify_result* out, sfheap_row_sink rows,
                            void* rows_user, sfheap_text_sink messages, void* messages_user) {
  SFHEAP_REQUIRE(cfg && out && (cfg->policies || cfg->policy_count == 0));
  for (size_t i = 0; i < cfg->policy_count; ++i) SFHEAP_REQUIRE(policy_ok(cfg->policies[i]));
  return guard([&] {
    CampaignConfig c;
    for (size_t i = 0; i < cfg->policy_count; ++i) c.policies.push_back(to_policy(cfg->policies[i]));
    c.traces = cfg->traces;
    c.ops = cfg->ops;
    c.seed = cfg->seed;
    c.check = cfg->check != 0;
    c.cascade = to_cascade(&cfg->cascade);
    CampaignResult r = run_campaign(c, [&](const ResultRow& row) { emit(rows, rows_user, row); });
    *out = {r.traces, r.failures, r.states_checked, r.reported};
    for (const auto& m : r.messages) send(messages, messages_user, m);
    return SFHEAP_OK;
  });
}

sfheap_status sfheap_bench_random(sfheap_policy p, uint64_t n, uint64_t seed, sfheap_row_sink rows, void* user) {
  SFHEAP_REQUIRE(policy_ok(p));
  return guard([&] {
    for (const ResultRow& r : bench_random(to_policy(p), n, seed)) emit(rows, user, r);
    return SFHEAP_OK;
  });
}

sfheap_status sfheap_adversary_k(int k, uint64_t rounds, sfheap_policy policy, sfheap_adversary_result* out,
                                 sfheap_row_sink rows, void* rows_user, sfheap_text_sink trace_sink,
                                 void* trace_user) {
  SFHEAP_REQUIRE(out && policy_ok(policy) && k >= 1 && rounds >= 1);
  *out = {};
  return guard([&] {
    Adversary adv(true);
    adv.build(k);
    out->k = k;
    out->build_ops = adv.operations();
    for (uint64_t r = 0; r < rounds; ++r) adv.steady_round();
    out->rounds = rounds;
    out->shape_ok = adv.verify().ok;
    ScheduleCost cost = price_trace(adv.trace(), to_policy(policy));
    CycleCost cyc = cycle_cost(cost, rounds);
    out->n = cyc.n;
    out->links_per_delete_min = cyc.links;
    out->cost_per_delete_min = cyc.estimated;
    ResultRow row;
    row.policy = std::string(to_string(to_policy(policy)));
    row.workload = "adversary-k" + std::to_string(k);
    row.n = cyc.n;
    row.op_kind = "delete_min";
    row.fair_links = cyc.fair_links;
    row.naive_links = cyc.naive_links;
    row.iterations = cyc.iterations;
    row.comparisons = cyc.comparisons;
    row.phi = static_cast<double>(cost.phi);
    emit(rows, rows_user, row);
    if (trace_sink) send(trace_sink, trace_user, format_trace(adv.trace()));
    return SFHEAP_OK;
  });
}

sfheap_status sfheap_adversary_m(uint64_t m, sfheap_policy policy, sfheap_lower_bound_result* out,
                                 sfheap_row_sink rows, void* rows_user, sfheap_text_sink trace_sink,
                                 void* trace_user) {
  SFHEAP_REQUIRE(out && policy_ok(policy));
  *out = {};
  return guard([&] {
    LowerBoundReport rep = run_lower_bound(m, true);
    ScheduleCost cost = price_trace(rep.trace, to_policy(policy));
    CycleCost cyc = cycle_cost(cost, rep.rounds);
    out->m = m;
    out->k = rep.k;
    out->n = rep.n;
    out->build_ops = rep.build_ops;
    out->operations = cost.operations;
    out->links = cost.counters.links();
    out->estimated = cost.estimated;
    out->cost_per_delete_min = cyc.estimated;
    out->links_per_delete_min = cyc.links;
    ResultRow row;
    row.policy = std::string(to_string(to_policy(policy)));
    row.workload = "adversary-m" + std::to_string(m);
    row.n = rep.n;
    row.op_kind = "delete_min";
    row.fair_links = cyc.fair_links;
    row.naive_links = cyc.naive_links;
    row.iterations = cyc.iterations;
    row.comparisons = cyc.comparisons;
    row.phi = static_cast<double>(cost.phi);
    emit(rows, rows_user, row);
    if (trace_sink) send(trace_sink, trace_user, format_trace(rep.trace));
    return SFHEAP_OK;
  });
}

sfheap_status sfheap_dijkstra(uint32_t n, uint64_t m, uint64_t seed, sfheap_policy p, sfheap_dijkstra_result* out,
                              sfheap_row_sink rows, void* user) {
  SFHEAP_REQUIRE(out && policy_ok(p) && n >= 1);
  *out = {};
  return guard([&] {
    Graph g = gen_graph(n, m, seed);
    DijkstraRun run = dijkstra(g, 0, to_policy(p));
    std::vector<std::uint64_t> want = dijkstra_reference(g, 0);
    out->inserts = run.inserts;
    out->decrease_keys = run.decrease_keys;
    out->delete_mins = run.delete_mins;
    for (auto d : run.dist) out->reachable += d != kUnreachable;
    out->distances_match = run.dist == want;
    out->counters = to_c(run.counters);
    ResultRow row;
    row.policy = std::string(to_string(to_policy(p)));
    row.workload = "dijkstra";
    row.n = n;
    row.op_kind = "all";
    double ops = static_cast<double>(run.inserts + run.decrease_keys + run.delete_mins);
    row.fair_links = static_cast<double>(run.counters.fair_links) / ops;
    row.naive_links = static_cast<double>(run.counters.naive_links) / ops;
    row.iterations = static_cast<double>(run.counters.iterations) / ops;
    row.comparisons = static_cast<double>(run.counters.comparisons) / ops;
    row.wall_time_ns = run.wall_time_ns;
    emit(rows, user, row);
    if (!out->distances_match) {
      for (std::size_t v = 0; v < want.size(); ++v)
        if (run.dist[v] != want[v])
          return fail(SFHEAP_E_CHECK, "distance mismatch at vertex " + std::to_string(v) + ": got " +
                                          std::to_string(run.dist[v]) + ", reference " + std::to_string(want[v]));
    }
    return SFHEAP_OK;
  });
}

sfheap_status sfheap_replay(const char* trace_text, const sfheap_replay_options* opt, sfheap_replay_result* out) {
  SFHEAP_REQUIRE(trace_text && out);
  if (opt && opt->has_policy_override) SFHEAP_REQUIRE(policy_ok(opt->policy_override));
  *out = {};
  return guard([&] {
    OpTrace t = parse_trace(trace_text);
    ReplayOptions o;
    o.cascade = to_cascade(opt ? &opt->cascade : nullptr);
    if (opt) {
      if (opt->has_policy_override) o.policy_override = to_policy(opt->policy_override);
      o.strict_identity = opt->strict_identity != 0;
      o.check_structure = o.check_rank_bounds = o.check_active_children = o.audit = opt->check != 0;
    }
    ReplayReport r = replay_differential(t, o);
    out->ok = r.ok;
    out->step = r.step;
    out->ops = r.ops;
    out->states_checked = r.states_checked;
    out->reported = r.reported.violations.size();
    out->counters = to_c(r.counters);
    if (!r.ok) return fail(SFHEAP_E_CHECK, r.message);
    return SFHEAP_OK;
  });
}

}  // extern "C"

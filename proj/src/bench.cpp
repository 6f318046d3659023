#include "sfheap/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <random>
#include <sstream>
#include <unordered_set>

#include <json.hpp>

#include "sfheap/instrument.hpp"

namespace sfheap {

namespace {

using Clock = std::chrono::steady_clock;

std::uint64_t elapsed_ns(Clock::time_point t0) {
  return static_cast<std::uint64_t>(
      std::chrono::duration_cast<std::chrono::nanoseconds>(Clock::now() - t0).count());
}

// Per-op-kind accumulator for result rows.
struct Tally {
  std::uint64_t ops = 0;
  OpCounters sum;
  std::uint64_t ns = 0;

  template <class Fn>
  void time(IntForest& f, Fn&& fn) {
    OpCounters before = f.counters();
    auto t0 = Clock::now();
    fn();
    ns += elapsed_ns(t0);
    sum += f.counters() - before;
    ++ops;
  }

  ResultRow row(Policy p, const std::string& workload, std::uint64_t n, const char* kind, double phi) const {
    ResultRow r;
    r.policy = std::string(to_string(p));
    r.workload = workload;
    r.n = n;
    r.op_kind = kind;
    double d = ops ? static_cast<double>(ops) : 1.0;
    r.fair_links = static_cast<double>(sum.fair_links) / d;
    r.naive_links = static_cast<double>(sum.naive_links) / d;
    r.iterations = static_cast<double>(sum.iterations) / d;
    r.comparisons = static_cast<double>(sum.comparisons) / d;
    r.wall_time_ns = ns;
    r.phi = phi;
    return r;
  }
};

nlohmann::json to_json(const ResultRow& r) {
  return {{"policy", r.policy},           {"workload", r.workload},   {"n", r.n},
          {"op_kind", r.op_kind},         {"fair_links", r.fair_links}, {"naive_links", r.naive_links},
          {"iterations", r.iterations},   {"comparisons", r.comparisons},
          {"wall_time_ns", r.wall_time_ns}, {"phi", r.phi}};
}

std::string num(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

}  // namespace

std::string csv_header() {
  return "policy,workload,n,op_kind,fair_links,naive_links,iterations,comparisons,wall_time_ns,phi";
}

std::string to_csv(const ResultRow& r) {
  std::ostringstream os;
  os << r.policy << ',' << r.workload << ',' << r.n << ',' << r.op_kind << ',' << num(r.fair_links) << ','
     << num(r.naive_links) << ',' << num(r.iterations) << ',' << num(r.comparisons) << ',' << r.wall_time_ns
     << ',' << num(r.phi);
  return os.str();
}

std::string to_jsonl(const ResultRow& r) { return to_json(r).dump(); }

ResultRow row_from_json(const std::string& line) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(line);
  } catch (const nlohmann::json::exception& e) {
    raise(Errc::parse, std::string("result row: ") + e.what());
  }
  ResultRow r;
  try {
    r.policy = j.at("policy").get<std::string>();
    r.workload = j.at("workload").get<std::string>();
    r.n = j.at("n").get<std::uint64_t>();
    r.op_kind = j.at("op_kind").get<std::string>();
    r.fair_links = j.at("fair_links").get<double>();
    r.naive_links = j.at("naive_links").get<double>();
    r.iterations = j.at("iterations").get<double>();
    r.comparisons = j.at("comparisons").get<double>();
    r.wall_time_ns = j.at("wall_time_ns").get<std::uint64_t>();
    r.phi = j.at("phi").get<double>();
  } catch (const nlohmann::json::exception& e) {
    raise(Errc::parse, std::string("result row: ") + e.what());
  }
  return r;
}

double fit_exponent(const std::vector<std::pair<double, double>>& points) {
  if (points.size() < 3) raise(Errc::out_of_range, "fit_exponent needs at least 3 points");
  double sx = 0, sy = 0;
  for (auto [x, y] : points) {
    if (!(x > 0) || !(y > 0) || !std::isfinite(x) || !std::isfinite(y))
      raise(Errc::out_of_range, "fit_exponent needs positive finite coordinates");
    sx += std::log(x);
    sy += std::log(y);
  }
  double k = static_cast<double>(points.size());
  double mx = sx / k, my = sy / k, sxx = 0, sxy = 0;
  for (auto [x, y] : points) {
    double dx = std::log(x) - mx;
    sxx += dx * dx;
    sxy += dx * (std::log(y) - my);
  }
  if (sxx <= 0) raise(Errc::out_of_range, "fit_exponent needs two distinct n");
  return sxy / sxx;
}

// ---- random workload -------------------------------------------------------

std::vector<ResultRow> bench_random(Policy p, std::uint64_t n, std::uint64_t seed) {
  if (n == 0) raise(Errc::out_of_range, "bench_random needs n >= 1");
  std::mt19937_64 rng(mix_seeds(seed, n));
  std::uniform_int_distribution<std::int64_t> key(0, std::int64_t{1} << 40);
  IntForest f;
  HeapRef h = f.make_heap(p, seed);
  std::vector<NodeRef> live;  // slot = item id
  std::vector<std::size_t> slot_of;
  live.reserve(n + 1);
  Tally ins, dec, del;
  auto add = [&] {
    NodeRef x = f.make_item(slot_of.size(), key(rng));
    slot_of.push_back(live.size());
    live.push_back(x);
    ins.time(f, [&] { f.insert(x, h); });
  };
  for (std::uint64_t i = 0; i < n; ++i) add();
  for (std::uint64_t round = 0; round < n; ++round) {
    NodeRef x = live[std::uniform_int_distribution<std::size_t>(0, live.size() - 1)(rng)];
    std::int64_t cur = f.key(x);
    std::int64_t v = cur - std::uniform_int_distribution<std::int64_t>(0, std::int64_t{1} << 36)(rng);
    dec.time(f, [&] { f.decrease_key(x, v, h); });
    add();
    IntForest::Removed r{};
    del.time(f, [&] { r = f.delete_min(h); });
    // Swap-remove the deleted item from the live list.
    std::size_t s = slot_of[r.info];
    if (s + 1 != live.size()) {
      live[s] = live.back();
      slot_of[f.info(live[s])] = s;
    }
    live.pop_back();
  }
  double phi = static_cast<double>(compute_potential(f, h).phi);
  return {ins.row(p, "random", n, "insert", phi), dec.row(p, "random", n, "decrease_key", phi),
          del.row(p, "random", n, "delete_min", phi)};
}

// ---- Dijkstra --------------------------------------------------------------

Graph gen_graph(std::uint32_t n, std::uint64_t m, std::uint64_t seed) {
  if (n == 0) raise(Errc::out_of_range, "gen_graph needs n >= 1");
  std::uint64_t cap = static_cast<std::uint64_t>(n) * (n - 1);
  if (m > cap) raise(Errc::out_of_range, "gen_graph: more edges than vertex pairs");
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::uint32_t> weight;
  std::vector<std::uint64_t> pairs;  // from * n + to
  pairs.reserve(m);
  if (m * 2 <= cap) {
    std::uniform_int_distribution<std::uint32_t> vertex(0, n - 1);
    std::unordered_set<std::uint64_t> seen;
    seen.reserve(m * 2);
    while (pairs.size() < m) {
      std::uint32_t u = vertex(rng), v = vertex(rng);
      if (u == v) continue;
      std::uint64_t key = static_cast<std::uint64_t>(u) * n + v;
      if (seen.insert(key).second) pairs.push_back(key);
    }
  } else {
    // Dense: choose m of all pairs by a partial shuffle.
    for (std::uint64_t u = 0; u < n; ++u)
      for (std::uint64_t v = 0; v < n; ++v)
        if (u != v) pairs.push_back(u * n + v);
    for (std::uint64_t i = 0; i < m; ++i) {
      std::uniform_int_distribution<std::uint64_t> pick(i, pairs.size() - 1);
      std::swap(pairs[i], pairs[pick(rng)]);
    }
    pairs.resize(m);
  }
  Graph g;
  g.n = n;
  g.seed = seed;
  g.edges.reserve(m);
  for (std::uint64_t key : pairs)
    g.edges.push_back({static_cast<std::uint32_t>(key / n), static_cast<std::uint32_t>(key % n), weight(rng)});
  std::stable_sort(g.edges.begin(), g.edges.end(), [](const Edge& a, const Edge& b) { return a.from < b.from; });
  g.first.assign(static_cast<std::size_t>(n) + 1, 0);
  for (const Edge& e : g.edges) ++g.first[e.from + 1];
  for (std::uint32_t v = 0; v < n; ++v) g.first[v + 1] += g.first[v];
  return g;
}

DijkstraRun dijkstra(const Graph& g, std::uint32_t source, Policy p) {
  if (source >= g.n) raise(Errc::out_of_range, "dijkstra: source out of range");
  DijkstraRun run;
  run.dist.assign(g.n, kUnreachable);
  IntForest f;
  HeapRef h = f.make_heap(p, g.seed);
  std::vector<NodeRef> item(g.n);
  std::vector<bool> queued(g.n, false), done(g.n, false);
  auto t0 = Clock::now();
  run.dist[source] = 0;
  item[source] = f.make_item(source, 0);
  f.insert(item[source], h);
  queued[source] = true;
  ++run.inserts;
  while (!f.empty(h)) {
    auto r = f.delete_min(h);
    ++run.delete_mins;
    auto u = static_cast<std::uint32_t>(r.info);
    done[u] = true;
    for (std::uint64_t e = g.first[u]; e < g.first[u + 1]; ++e) {
      const Edge& edge = g.edges[e];
      if (done[edge.to]) continue;
      std::uint64_t d = run.dist[u] + edge.weight;
      if (d >= run.dist[edge.to]) continue;
      run.dist[edge.to] = d;
      if (!queued[edge.to]) {
        item[edge.to] = f.make_item(edge.to, static_cast<std::int64_t>(d));
        f.insert(item[edge.to], h);
        queued[edge.to] = true;
        ++run.inserts;
      } else {
        f.decrease_key(item[edge.to], static_cast<std::int64_t>(d), h);
        ++run.decrease_keys;
      }
    }
  }
  run.wall_time_ns = elapsed_ns(t0);
  run.counters = f.counters();
  return run;
}

std::vector<std::uint64_t> dijkstra_reference(const Graph& g, std::uint32_t source) {
  if (source >= g.n) raise(Errc::out_of_range, "dijkstra: source out of range");
  std::vector<std::uint64_t> dist(g.n, kUnreachable);
  std::vector<bool> queued(g.n, false), done(g.n, false);
  std::vector<std::string> name(g.n);
  for (std::uint32_t v = 0; v < g.n; ++v) name[v] = std::to_string(v);
  OracleHeap o;
  o.make_heap("q", Policy::simple);
  // Oracle item ids follow creation order; map them back to vertices.
  std::vector<std::uint32_t> vertex_of;
  auto push = [&](std::uint32_t v, std::uint64_t d) {
    vertex_of.push_back(v);
    o.make_item(name[v], static_cast<std::int64_t>(d));
    o.insert("q", name[v]);
    queued[v] = true;
  };
  dist[source] = 0;
  push(source, 0);
  while (o.size("q") > 0) {
    auto [key, id] = o.delete_min("q");
    std::uint32_t u = vertex_of[id];
    done[u] = true;
    for (std::uint64_t e = g.first[u]; e < g.first[u + 1]; ++e) {
      const Edge& edge = g.edges[e];
      if (done[edge.to]) continue;
      std::uint64_t d = dist[u] + edge.weight;
      if (d >= dist[edge.to]) continue;
      dist[edge.to] = d;
      if (!queued[edge.to])
        push(edge.to, d);
      else
        o.decrease_key(name[edge.to], static_cast<std::int64_t>(d));
    }
  }
  return dist;
}

// ---- randomized cascades ---------------------------------------------------

ChainStats randomized_chains(std::uint64_t chains, std::uint32_t depth, std::uint32_t per_chain,
                             std::uint64_t seed, CascadeOptions cascade) {
  ChainStats s;
  s.min_depth = ~std::uint32_t{0};
  IntForest f(ForestOptions{cascade, false});
  const std::uint32_t nodes = depth + per_chain + 1;
  for (std::uint64_t c = 0; c < chains; ++c) {
    HeapRef h = f.make_heap(Policy::randomized, mix_seeds(seed, c));
    // Each insert with a smaller key becomes the root over the previous one.
    std::vector<NodeRef> path;
    for (std::uint32_t j = 0; j < nodes; ++j) {
      path.push_back(f.make_item(j, 4 * static_cast<std::int64_t>(nodes - j)));
      f.insert(path.back(), h);
    }
    std::int64_t root_key = f.key(path.back());
    for (std::uint32_t j = 0; j < per_chain; ++j) {
      // path[j] is the deepest node, at depth nodes - 1 - j.
      s.min_depth = std::min(s.min_depth, nodes - 1 - j);
      OpCounters before = f.counters();
      f.decrease_key(path[j], root_key + 1, h);
      s.iterations += (f.counters() - before).iterations;
      ++s.decrease_keys;
    }
    while (!f.empty(h)) f.delete_min(h);
  }
  return s;
}

// ---- fuzz campaigns ----------------------------------------------------------

TraceProfile campaign_profile(Policy p, std::uint64_t seed, std::uint64_t t, std::uint64_t ops) {
  TraceProfile prof;
  prof.policy = p;
  prof.seed = mix_seeds(seed, t);
  prof.ops = ops;
  switch (t % 4) {
    case 0: break;
    case 1: prof.key_max = 64; break;  // many ties
    case 2:
      prof.w_decreasekey = 6;
      prof.max_heap_size = 600;
      break;
    case 3:
      prof.heaps = 5;
      prof.w_meld = 1;
      break;
  }
  return prof;
}

CampaignResult run_campaign(const CampaignConfig& cfg, const RowSink& sink) {
  CampaignResult res;
  for (Policy p : cfg.policies) {
    OpCounters policy_counters;
    std::uint64_t policy_ops = 0;
    auto t0 = Clock::now();
    for (std::uint64_t t = 0; t < cfg.traces; ++t) {
      OpTrace trace = gen_trace(campaign_profile(p, cfg.seed, t, cfg.ops));
      ReplayOptions o;
      o.cascade = cfg.cascade;
      o.check_structure = cfg.check;
      o.check_rank_bounds = cfg.check;
      o.check_active_children = cfg.check;
      o.audit = cfg.check;
      ReplayReport r = replay_differential(trace, o);
      ++res.traces;
      res.states_checked += r.states_checked;
      res.reported += r.reported.violations.size();
      res.counters += r.counters;
      policy_counters += r.counters;
      policy_ops += r.ops;
      if (!r.ok) {
        ++res.failures;
        if (res.messages.size() < 10)
          res.messages.push_back(std::string(to_string(p)) + " trace " + std::to_string(t) + ": " + r.message);
      }
    }
    if (sink) {
      Tally all;
      all.ops = policy_ops;
      all.sum = policy_counters;
      all.ns = elapsed_ns(t0);
      sink(all.row(p, "verify", cfg.ops, "all", 0));
    }
  }
  return res;
}

}  // namespace sfheap

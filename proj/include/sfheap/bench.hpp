#ifndef SFHEAP_BENCH_HPP
#define SFHEAP_BENCH_HPP

// Workloads and measurements behind the command-line tool: result rows,
// log-log exponent fits, the random and Dijkstra workloads, the randomized
// chain experiment, and fuzz campaigns.

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "sfheap/forest.hpp"
#include "sfheap/oracle.hpp"

namespace sfheap {

// Counter columns are means per operation of kind op_kind; wall_time_ns is
// the total over those operations; phi is the heap potential at the
// measurement point.
struct ResultRow {
  std::string policy;
  std::string workload;
  std::uint64_t n = 0;
  std::string op_kind;
  double fair_links = 0;
  double naive_links = 0;
  double iterations = 0;
  double comparisons = 0;
  std::uint64_t wall_time_ns = 0;
  double phi = 0;
};

using RowSink = std::function<void(const ResultRow&)>;

// CSV header is exactly the field names above in order.
std::string csv_header();
std::string to_csv(const ResultRow& r);
std::string to_jsonl(const ResultRow& r);  // one JSON object, no newline
ResultRow row_from_json(const std::string& line);

// Least-squares slope of log(cost) against log(n). Needs >= 3 points, all
// coordinates positive, and at least two distinct n.
double fit_exponent(const std::vector<std::pair<double, double>>& points);

// ---- random workload -------------------------------------------------------

// Inserts n random keys, then runs n rounds of decrease-key, insert and
// delete-min so the size stays at n. One row per op kind.
std::vector<ResultRow> bench_random(Policy p, std::uint64_t n, std::uint64_t seed);

// ---- Dijkstra --------------------------------------------------------------

struct Edge {
  std::uint32_t from = 0;
  std::uint32_t to = 0;
  std::uint32_t weight = 0;
};

// Directed, no self-loops, no parallel edges; weights uniform in [0, 2^32).
struct Graph {
  std::uint32_t n = 0;
  std::uint64_t seed = 0;
  std::vector<Edge> edges;         // sorted by source
  std::vector<std::uint64_t> first;  // edges of v: [first[v], first[v+1])
};

Graph gen_graph(std::uint32_t n, std::uint64_t m, std::uint64_t seed);

inline constexpr std::uint64_t kUnreachable = ~std::uint64_t{0};

struct DijkstraRun {
  std::vector<std::uint64_t> dist;
  OpCounters counters;
  std::uint64_t inserts = 0;
  std::uint64_t decrease_keys = 0;
  std::uint64_t delete_mins = 0;
  std::uint64_t wall_time_ns = 0;
};

DijkstraRun dijkstra(const Graph& g, std::uint32_t source, Policy p);
// Same algorithm over OracleHeap.
std::vector<std::uint64_t> dijkstra_reference(const Graph& g, std::uint32_t source);

// ---- randomized cascades ---------------------------------------------------

struct ChainStats {
  std::uint64_t decrease_keys = 0;
  std::uint64_t iterations = 0;
  std::uint32_t min_depth = 0;  // shallowest chain depth seen by a decrease
  double mean() const { return decrease_keys ? static_cast<double>(iterations) / decrease_keys : 0; }
};

// Builds `chains` single-path heaps of depth + per_chain nodes by inserting
// decreasing keys, then decrease-keys the deepest node per_chain times so
// every cascade starts at depth >= depth.
ChainStats randomized_chains(std::uint64_t chains, std::uint32_t depth, std::uint32_t per_chain,
                             std::uint64_t seed, CascadeOptions cascade = {});

// ---- fuzz campaigns ----------------------------------------------------------

struct CampaignConfig {
  std::vector<Policy> policies;
  std::uint64_t traces = 100;
  std::uint64_t ops = 1000;
  std::uint64_t seed = 1;
  bool check = true;  // structure, rank bounds, active children, audit
  CascadeOptions cascade;
};

struct CampaignResult {
  std::uint64_t traces = 0;
  std::uint64_t failures = 0;
  std::uint64_t states_checked = 0;
  std::uint64_t reported = 0;       // report-only findings
  std::vector<std::string> messages;  // first few failures
  OpCounters counters;
};

// Profile of trace t in a campaign; varied so that ties, deep decrease
// chains and melds all occur.
TraceProfile campaign_profile(Policy p, std::uint64_t seed, std::uint64_t t, std::uint64_t ops);

CampaignResult run_campaign(const CampaignConfig& cfg, const RowSink& sink = {});

}  // namespace sfheap

#endif  // SFHEAP_BENCH_HPP

#include <doctest.h>

#include <cmath>
#include <queue>
#include <set>

#include "sfheap/bench.hpp"

using namespace sfheap;

namespace {

// Textbook lazy-deletion Dijkstra over std::priority_queue.
std::vector<std::uint64_t> pq_dijkstra(const Graph& g, std::uint32_t s) {
  std::vector<std::uint64_t> dist(g.n, kUnreachable);
  using Item = std::pair<std::uint64_t, std::uint32_t>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> q;
  dist[s] = 0;
  q.push({0, s});
  while (!q.empty()) {
    auto [d, u] = q.top();
    q.pop();
    if (d != dist[u]) continue;
    for (std::uint64_t e = g.first[u]; e < g.first[u + 1]; ++e) {
      const Edge& x = g.edges[e];
      if (d + x.weight < dist[x.to]) {
        dist[x.to] = d + x.weight;
        q.push({dist[x.to], x.to});
      }
    }
  }
  return dist;
}

}  // namespace

TEST_CASE("fit_exponent") {
  std::vector<std::pair<double, double>> line, root, noisy;
  for (double n : {10.0, 100.0, 1000.0, 1e4}) {
    line.push_back({n, 3 * n});
    root.push_back({n, std::sqrt(n)});
  }
  CHECK(std::abs(fit_exponent(line) - 1.0) < 1e-9);
  CHECK(std::abs(fit_exponent(root) - 0.5) < 1e-9);
  CHECK_THROWS_AS(fit_exponent({{1, 1}, {2, 2}}), Error);
  CHECK_THROWS_AS(fit_exponent({{1, 1}, {2, 0}, {3, 3}}), Error);
  CHECK_THROWS_AS(fit_exponent({{-1, 1}, {2, 1}, {3, 3}}), Error);
  CHECK_THROWS_AS(fit_exponent({{5, 1}, {5, 2}, {5, 3}}), Error);
}

TEST_CASE("result rows") {
  ResultRow r;
  r.policy = "simple";
  r.workload = "random";
  r.n = 1000;
  r.op_kind = "delete_min";
  r.fair_links = 7.25;
  r.naive_links = 1.0 / 3.0;
  r.iterations = 0;
  r.comparisons = 7.583333333333333;
  r.wall_time_ns = 123456;
  r.phi = 42;
  ResultRow back = row_from_json(to_jsonl(r));
  CHECK(back.policy == r.policy);
  CHECK(back.n == r.n);
  CHECK(back.naive_links == r.naive_links);
  CHECK(back.wall_time_ns == r.wall_time_ns);
  CHECK(csv_header() == "policy,workload,n,op_kind,fair_links,naive_links,iterations,comparisons,wall_time_ns,phi");
  CHECK(to_csv(r).rfind("simple,random,1000,delete_min,7.25,", 0) == 0);
  CHECK_THROWS_AS(row_from_json("{\"policy\": 1}"), Error);
  CHECK_THROWS_AS(row_from_json("not json"), Error);
}

TEST_CASE("random workload") {
  for (Policy p : {Policy::simple, Policy::classic}) {
    auto rows = bench_random(p, 2000, 3);
    REQUIRE(rows.size() == 3);
    CHECK(rows[0].op_kind == "insert");
    CHECK(rows[2].op_kind == "delete_min");
    CHECK(rows[2].fair_links > 0);
    CHECK(rows[2].comparisons > 0);
    if (p == Policy::simple)
      for (const auto& r : rows) CHECK(r.comparisons == doctest::Approx(r.fair_links + r.naive_links));
  }
  // Same seed, same counters.
  auto a = bench_random(Policy::randomized, 500, 9);
  auto b = bench_random(Policy::randomized, 500, 9);
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].fair_links == b[i].fair_links);
    CHECK(a[i].iterations == b[i].iterations);
  }
}

TEST_CASE("gen_graph") {
  Graph g = gen_graph(200, 3000, 5);
  CHECK(g.edges.size() == 3000);
  std::set<std::pair<std::uint32_t, std::uint32_t>> seen;
  for (const Edge& e : g.edges) {
    CHECK(e.from != e.to);
    CHECK(e.to < 200);
    CHECK(seen.insert({e.from, e.to}).second);
  }
  CHECK(g.first.back() == 3000);
  Graph h = gen_graph(200, 3000, 5);
  CHECK(h.edges.size() == g.edges.size());
  CHECK(std::equal(g.edges.begin(), g.edges.end(), h.edges.begin(), [](const Edge& a, const Edge& b) {
    return a.from == b.from && a.to == b.to && a.weight == b.weight;
  }));
  Graph dense = gen_graph(10, 85, 1);
  CHECK(dense.edges.size() == 85);
  CHECK_THROWS_AS(gen_graph(10, 91, 1), Error);
}

TEST_CASE("dijkstra") {
  Graph g = gen_graph(2000, 20000, 7);
  auto want = pq_dijkstra(g, 0);
  CHECK(dijkstra_reference(g, 0) == want);
  std::vector<std::uint64_t> simple;
  for (Policy p : kAllPolicies) {
    DijkstraRun r = dijkstra(g, 0, p);
    CHECK_MESSAGE(r.dist == want, to_string(p));
    CHECK(r.decrease_keys <= g.edges.size());
    CHECK(r.delete_mins <= g.n);
    if (p == Policy::simple) CHECK(r.counters.comparisons == r.counters.links());
  }
  // Unreachable vertices stay unreachable.
  Graph sparse = gen_graph(50, 10, 2);
  auto d = dijkstra(sparse, 0, Policy::simple).dist;
  CHECK(d == pq_dijkstra(sparse, 0));
  CHECK(std::count(d.begin(), d.end(), kUnreachable) > 0);
}

TEST_CASE("randomized chains") {
  ChainStats s = randomized_chains(200, 64, 50, 1);
  CHECK(s.decrease_keys == 10'000);
  CHECK(s.min_depth >= 64);
  CHECK(s.mean() > 1.8);
  CHECK(s.mean() < 2.2);
  ChainStats again = randomized_chains(200, 64, 50, 1);
  CHECK(again.iterations == s.iterations);
}

TEST_CASE("campaign") {
  CampaignConfig c;
  c.policies = {Policy::simple, Policy::non_cascading};
  c.traces = 5;
  c.ops = 400;
  std::vector<ResultRow> rows;
  CampaignResult r = run_campaign(c, [&](const ResultRow& row) { rows.push_back(row); });
  CHECK(r.failures == 0);
  CHECK(r.traces == 10);
  CHECK(r.states_checked > 0);
  CHECK(rows.size() == 2);
}

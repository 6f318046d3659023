// sfheap: fuzzing, benchmarks and the lower-bound adversary from the shell.
// Talks to the library only through sfheap.h.
//
// Exit codes: 0 all checks passed, 1 a check failed, 2 usage or input error.

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "sfheap/sfheap.h"

namespace {

constexpr int kPass = 0;
constexpr int kCheckFailed = 1;
constexpr int kUsage = 2;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct CheckError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Throws on anything but SFHEAP_OK; E_CHECK becomes a check failure.
void call(sfheap_status s, const char* what) {
  if (s == SFHEAP_OK) return;
  std::string msg = std::string(what) + ": " + sfheap_status_name(s) + ": " + sfheap_last_error();
  switch (s) {
    case SFHEAP_E_CHECK: throw CheckError(msg);
    case SFHEAP_E_ARGUMENT:
    case SFHEAP_E_PARSE:
    case SFHEAP_E_IO: throw UsageError(msg);
    default: throw std::runtime_error(msg);
  }
}

struct Common {
  std::vector<std::string> policies;
  std::uint64_t seed = 1;
  std::string out;
  std::string format = "csv";
  bool check = false;
  bool randomized_from_parent = false;
  bool always_decrement_parent = false;

  sfheap_cascade_options cascade() const {
    return {randomized_from_parent ? 1 : 0, always_decrement_parent ? 1 : 0};
  }
};

void add_common(CLI::App* app, Common& c, const std::string& default_policy) {
  c.policies = {default_policy};
  app->add_option("--policy", c.policies, "policy name, comma list, or 'all'")
      ->delimiter(',')
      ->capture_default_str();
  app->add_option("--seed", c.seed, "base seed")->capture_default_str();
  app->add_option("--out", c.out, "write rows here instead of stdout");
  app->add_option("--format", c.format, "row format")->check(CLI::IsMember({"csv", "jsonl"}))->capture_default_str();
  app->add_flag("--check", c.check, "enable the invariant suite");
  app->add_flag("--randomized-from-parent", c.randomized_from_parent,
                "randomized cascade starts its coin flips at the parent");
  app->add_flag("--always-decrement-parent", c.always_decrement_parent,
                "increasing-rank cascades decrement the parent before the stop test");
}

std::vector<sfheap_policy> parse_policies(const std::vector<std::string>& names) {
  std::vector<sfheap_policy> out;
  for (const auto& n : names) {
    if (n == "all") {
      for (int p = 0; p < SFHEAP_POLICY_COUNT; ++p) out.push_back(static_cast<sfheap_policy>(p));
      continue;
    }
    sfheap_policy p;
    call(sfheap_policy_parse(n.c_str(), &p), "--policy");
    out.push_back(p);
  }
  if (out.empty()) throw UsageError("--policy: no policy given");
  return out;
}

// Row output, serialized through one stream.
class Emitter {
 public:
  Emitter(const std::string& path, const std::string& format) : jsonl_(format == "jsonl") {
    if (!path.empty()) {
      file_.open(path);
      if (!file_) throw UsageError("cannot open '" + path + "' for writing");
    }
    if (!jsonl_) {
      call(sfheap_row_csv(nullptr, &Emitter::text, &os()), "csv header");
      os() << '\n';
    }
  }

  static void row(const sfheap_row* r, void* self) {
    auto* e = static_cast<Emitter*>(self);
    if (e->jsonl_)
      sfheap_row_jsonl(r, &Emitter::text, &e->os());
    else
      sfheap_row_csv(r, &Emitter::text, &e->os());
    e->os() << '\n';
  }

  static void text(const char* s, size_t n, void* stream) { static_cast<std::ostream*>(stream)->write(s, n); }

  std::ostream& os() { return file_.is_open() ? static_cast<std::ostream&>(file_) : std::cout; }

 private:
  std::ofstream file_;
  bool jsonl_;
};

void print_message(const char* s, size_t n, void*) {
  std::cerr << "  ";
  std::cerr.write(s, n);
  std::cerr << '\n';
}

std::string name(sfheap_policy p) { return sfheap_policy_name(p); }

double fit(const std::vector<double>& n, const std::vector<double>& cost) {
  double slope = 0;
  call(sfheap_fit_exponent(n.data(), cost.data(), n.size(), &slope), "fit_exponent");
  return slope;
}

// "a..b" or "a..b:step"; a plain number is a one-element range.
std::vector<int> parse_k_range(const std::string& s, int default_step) {
  int lo = 0, hi = 0, step = default_step;
  auto dots = s.find("..");
  try {
    if (dots == std::string::npos) return {std::stoi(s)};
    lo = std::stoi(s.substr(0, dots));
    std::string rest = s.substr(dots + 2);
    auto colon = rest.find(':');
    hi = std::stoi(rest.substr(0, colon));
    if (colon != std::string::npos) step = std::stoi(rest.substr(colon + 1));
  } catch (const std::exception&) {
    throw UsageError("--k: expected N, A..B or A..B:STEP, got '" + s + "'");
  }
  if (lo < 1 || hi < lo || step < 1) throw UsageError("--k: empty or invalid range '" + s + "'");
  std::vector<int> ks;
  for (int k = lo; k <= hi; k += step) ks.push_back(k);
  if (ks.back() != hi) ks.push_back(hi);
  return ks;
}

// ---- subcommands ---------------------------------------------------------

struct VerifyArgs {
  Common c;
  std::uint64_t traces = 100;
  std::uint64_t ops = 1000;
};

int cmd_verify(const VerifyArgs& a) {
  auto policies = parse_policies(a.c.policies);
  Emitter out(a.c.out, a.c.format);
  bool ok = true;
  for (sfheap_policy p : policies) {
    sfheap_verify_config cfg{&p, 1, a.traces, a.ops, a.c.seed, 1, a.c.cascade()};
    sfheap_verify_result r{};
    std::cerr << name(p) << ":\n";
    call(sfheap_verify(&cfg, &r, &Emitter::row, &out, &print_message, nullptr), "verify");
    std::cerr << "  " << r.traces << " traces, " << r.states_checked << " states checked, " << r.failures
              << " failed, " << r.reported << " report-only findings\n";
    ok = ok && r.failures == 0;
  }
  return ok ? kPass : kCheckFailed;
}

struct BenchArgs {
  Common c;
  std::vector<std::uint64_t> sizes = {1000, 10000, 100000};
};

struct RowCapture {
  Emitter* out;
  std::vector<double> delete_min_links;
};

void capture_row(const sfheap_row* r, void* self) {
  auto* c = static_cast<RowCapture*>(self);
  if (std::string(r->op_kind) == "delete_min") c->delete_min_links.push_back(r->fair_links + r->naive_links);
  Emitter::row(r, c->out);
}

int cmd_bench(const BenchArgs& a) {
  auto policies = parse_policies(a.c.policies);
  Emitter out(a.c.out, a.c.format);
  bool ok = true;
  for (sfheap_policy p : policies) {
    RowCapture cap{&out, {}};
    std::vector<double> ns, cost;
    for (std::uint64_t n : a.sizes) {
      call(sfheap_bench_random(p, n, a.c.seed, &capture_row, &cap), "bench");
      // Estimated delete-min time: 1 + log_phi n + links.
      ns.push_back(static_cast<double>(n));
      cost.push_back(1 + std::log(static_cast<double>(n)) / std::log((1 + std::sqrt(5.0)) / 2) +
                     cap.delete_min_links.back());
    }
    // Logarithmic growth shows as a steady ratio to log_phi n.
    std::cerr << name(p) << ": delete-min estimated time / log_phi n:";
    for (std::size_t i = 0; i < ns.size(); ++i) {
      double lg = std::log(ns[i]) / std::log((1 + std::sqrt(5.0)) / 2);
      std::cerr << (i ? ", " : " ") << "n=" << ns[i] << ": " << cost[i] / lg;
    }
    if (ns.size() >= 3) std::cerr << "; exponent vs n " << fit(ns, cost);
    std::cerr << '\n';
    if (a.c.check) {
      sfheap_verify_config cfg{&p, 1, 10, 1000, a.c.seed, 1, a.c.cascade()};
      sfheap_verify_result r{};
      call(sfheap_verify(&cfg, &r, nullptr, nullptr, &print_message, nullptr), "verify");
      std::cerr << "  check: " << r.failures << " of " << r.traces << " traces failed\n";
      ok = ok && r.failures == 0;
    }
  }
  return ok ? kPass : kCheckFailed;
}

struct AdversaryArgs {
  Common c;
  std::string k;
  int k_step = 10;
  std::uint64_t rounds = 50;
  std::vector<std::uint64_t> m;
  std::string dump_trace;
};

void write_trace(const char* s, size_t n, void* file) { static_cast<std::ofstream*>(file)->write(s, n); }

int cmd_adversary(const AdversaryArgs& a) {
  if (a.k.empty() == a.m.empty()) throw UsageError("adversary: give exactly one of --k and --m");
  auto policies = parse_policies(a.c.policies);
  Emitter out(a.c.out, a.c.format);
  std::ofstream trace;
  if (!a.dump_trace.empty()) {
    trace.open(a.dump_trace);
    if (!trace) throw UsageError("cannot open '" + a.dump_trace + "' for writing");
  }
  bool ok = true;

  if (!a.k.empty()) {
    auto ks = parse_k_range(a.k, a.k_step);
    if (trace.is_open() && (ks.size() != 1 || policies.size() != 1))
      throw UsageError("--dump-trace needs a single k and policy");
    for (sfheap_policy p : policies) {
      std::vector<double> ns, links, cost;
      for (int k : ks) {
        sfheap_adversary_result r{};
        call(sfheap_adversary_k(k, a.rounds, p, &r, &Emitter::row, &out, trace.is_open() ? &write_trace : nullptr,
                                &trace),
             "adversary");
        if (!r.shape_ok) {
          std::cerr << "adversary: shape check failed at k=" << k << '\n';
          ok = false;
        }
        ns.push_back(static_cast<double>(r.n));
        links.push_back(r.links_per_delete_min);
        cost.push_back(r.cost_per_delete_min);
      }
      std::cerr << name(p) << ": k " << ks.front() << ".." << ks.back() << ", " << a.rounds << " rounds";
      if (ns.size() >= 3) {
        std::cerr << "; exponent vs n: links/delete-min " << fit(ns, links) << ", estimated time/delete-min "
                  << fit(ns, cost);
      }
      std::cerr << '\n';
    }
    return ok ? kPass : kCheckFailed;
  }

  // A single m is fitted over m/10, m/sqrt(10) and m.
  std::vector<std::uint64_t> ms = a.m;
  if (ms.size() == 1) {
    std::uint64_t m = ms[0];
    ms = {m / 10, static_cast<std::uint64_t>(static_cast<double>(m) / std::sqrt(10.0)), m};
  }
  if (trace.is_open() && (a.m.size() != 1 || policies.size() != 1))
    throw UsageError("--dump-trace needs a single m and policy");
  for (sfheap_policy p : policies) {
    std::vector<double> xs, total;
    for (std::size_t i = 0; i < ms.size(); ++i) {
      sfheap_lower_bound_result r{};
      bool dump = trace.is_open() && i + 1 == ms.size();
      call(sfheap_adversary_m(ms[i], p, &r, &Emitter::row, &out, dump ? &write_trace : nullptr, &trace),
           "adversary");
      std::cerr << name(p) << ": m=" << r.m << " k=" << r.k << " n=" << r.n << " ops=" << r.operations
                << " links=" << r.links << " estimated=" << r.estimated << '\n';
      xs.push_back(static_cast<double>(r.operations));
      total.push_back(r.estimated);
    }
    if (xs.size() >= 3) std::cerr << name(p) << ": total estimated time exponent vs m " << fit(xs, total) << '\n';
  }
  return kPass;
}

struct DijkstraArgs {
  Common c;
  std::uint32_t n = 10000;
  std::uint64_t edges = 100000;
};

int cmd_dijkstra(const DijkstraArgs& a) {
  auto policies = parse_policies(a.c.policies);
  Emitter out(a.c.out, a.c.format);
  bool ok = true;
  for (sfheap_policy p : policies) {
    sfheap_dijkstra_result r{};
    sfheap_status s = sfheap_dijkstra(a.n, a.edges, a.c.seed, p, &r, &Emitter::row, &out);
    if (s == SFHEAP_E_CHECK) {
      std::cerr << name(p) << ": " << sfheap_last_error() << '\n';
      ok = false;
      continue;
    }
    call(s, "dijkstra");
    std::cerr << name(p) << ": " << r.reachable << " reachable, " << r.inserts << " inserts, " << r.decrease_keys
              << " decrease-keys, " << r.delete_mins << " delete-mins, distances "
              << (r.distances_match ? "match" : "DIFFER") << '\n';
  }
  return ok ? kPass : kCheckFailed;
}

struct ReplayArgs {
  Common c;
  std::string path;
  bool strict = false;
};

int cmd_replay(const ReplayArgs& a) {
  std::ifstream in(a.path);
  if (!in) throw UsageError("cannot read '" + a.path + "'");
  std::stringstream text;
  text << in.rdbuf();
  std::vector<sfheap_policy> policies;
  if (!a.c.policies.empty()) policies = parse_policies(a.c.policies);
  bool ok = true;
  auto run = [&](bool override_policy, sfheap_policy p) {
    sfheap_replay_options o{override_policy ? 1 : 0, p, a.strict ? 1 : 0, a.c.check ? 1 : 0, a.c.cascade()};
    sfheap_replay_result r{};
    sfheap_status s = sfheap_replay(text.str().c_str(), &o, &r);
    std::string label = override_policy ? name(p) : "trace policies";
    if (s == SFHEAP_E_CHECK) {
      std::cerr << label << ": diverged at step " << r.step << ": " << sfheap_last_error() << '\n';
      ok = false;
      return;
    }
    call(s, "replay");
    std::cerr << label << ": " << r.ops << " operations replayed, " << r.states_checked << " states checked, "
              << r.reported << " report-only findings\n";
  };
  if (policies.empty()) run(false, SFHEAP_SIMPLE);
  for (sfheap_policy p : policies) run(true, p);
  return ok ? kPass : kCheckFailed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Simple Fibonacci heaps: verification, benchmarks and the lower-bound adversary"};
  app.require_subcommand(1);

  VerifyArgs verify;
  auto* v = app.add_subcommand("verify", "fuzz campaigns against the reference heap with the invariant suite");
  add_common(v, verify.c, "all");
  v->add_option("--traces", verify.traces, "traces per policy")->capture_default_str();
  v->add_option("--ops", verify.ops, "operations per trace")->capture_default_str();

  BenchArgs bench;
  auto* b = app.add_subcommand("bench", "random workload counters per operation kind");
  add_common(b, bench.c, "simple,classic");
  bench.c.policies = {"simple", "classic"};
  b->add_option("--n", bench.sizes, "workload sizes")->delimiter(',')->capture_default_str();

  AdversaryArgs adv;
  auto* ad = app.add_subcommand("adversary", "lower-bound schedule for non-cascading heaps");
  add_common(ad, adv.c, "non-cascading");
  ad->add_option("--k", adv.k, "k, or a range A..B[:STEP]");
  ad->add_option("--k-step", adv.k_step, "step for a range without one")->capture_default_str();
  ad->add_option("--rounds", adv.rounds, "insert/delete-min cycles per k")->capture_default_str();
  ad->add_option("--m", adv.m, "operation budgets")->delimiter(',');
  ad->add_option("--dump-trace", adv.dump_trace, "write the operation trace here");

  DijkstraArgs dij;
  auto* d = app.add_subcommand("dijkstra", "shortest paths on a random graph, checked against the reference");
  add_common(d, dij.c, "simple");
  d->add_option("--n", dij.n, "vertices")->capture_default_str()->check(CLI::PositiveNumber);
  d->add_option("--edges", dij.edges, "edges")->capture_default_str();

  ReplayArgs rep;
  auto* r = app.add_subcommand("replay", "replay a trace file against the reference heap");
  add_common(r, rep.c, "");
  rep.c.policies.clear();
  r->add_option("trace", rep.path, "trace file")->required();
  r->add_flag("--strict", rep.strict, "compare removed item identities, not only keys");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? kPass : kUsage;
  }

  try {
    if (*v) return cmd_verify(verify);
    if (*b) return cmd_bench(bench);
    if (*ad) return cmd_adversary(adv);
    if (*d) return cmd_dijkstra(dij);
    if (*r) return cmd_replay(rep);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const CheckError& e) {
    std::cerr << "check failed: " << e.what() << '\n';
    return kCheckFailed;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kCheckFailed;
  }
  return kUsage;
}

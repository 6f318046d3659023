#ifndef SFHEAP_SFHEAP_H
#define SFHEAP_SFHEAP_H

/* C interface to the heap library and its experiments.
 *
 * Every function returns an sfheap_status. On failure, sfheap_last_error()
 * describes the most recent failure on the calling thread. Handles are
 * opaque; item and heap references are plain values checked on every use,
 * so a reference to a deleted item or consumed heap fails with
 * SFHEAP_E_STALE instead of misbehaving. */

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define SFHEAP_API __declspec(dllexport)
#else
#define SFHEAP_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum sfheap_status {
  SFHEAP_OK = 0,
  SFHEAP_E_ARGUMENT = 1,     /* null pointer, bad enum, value out of range */
  SFHEAP_E_STALE = 2,        /* item or heap reference no longer valid */
  SFHEAP_E_EMPTY = 3,        /* delete-min on an empty heap */
  SFHEAP_E_PRECONDITION = 4, /* key increase, self meld, item in another heap, ... */
  SFHEAP_E_PARSE = 5,        /* malformed trace text */
  SFHEAP_E_CHECK = 6,        /* an invariant or differential check failed */
  SFHEAP_E_IO = 7,
  SFHEAP_E_INTERNAL = 8
} sfheap_status;

typedef enum sfheap_policy {
  SFHEAP_SIMPLE = 0,
  SFHEAP_HEAP_ORDER,
  SFHEAP_INCREASING_RANK,
  SFHEAP_PASSIVE_CHILD,
  SFHEAP_EAGER,
  SFHEAP_NAIVE_INCREASING,
  SFHEAP_ZERO_RANK,
  SFHEAP_RANDOMIZED,
  SFHEAP_NON_CASCADING,
  SFHEAP_CLASSIC
} sfheap_policy;

#define SFHEAP_POLICY_COUNT 10

typedef struct sfheap_forest sfheap_forest;

typedef struct sfheap_heap {
  uint32_t index;
  uint32_t generation;
} sfheap_heap;

typedef struct sfheap_item {
  uint32_t index;
  uint32_t generation;
} sfheap_item;

typedef struct sfheap_counters {
  uint64_t fair_links;
  uint64_t naive_links;
  uint64_t comparisons;
  uint64_t iterations;
  uint64_t cuts;
  uint64_t markings;
  uint64_t unmarkings;
} sfheap_counters;

/* Cascade variants; zero selects the default loops. */
typedef struct sfheap_cascade_options {
  int randomized_from_parent;
  int always_decrement_parent;
} sfheap_cascade_options;

SFHEAP_API const char* sfheap_last_error(void);
SFHEAP_API const char* sfheap_status_name(sfheap_status s);
SFHEAP_API const char* sfheap_policy_name(sfheap_policy p);
SFHEAP_API sfheap_status sfheap_policy_parse(const char* name, sfheap_policy* out);

/* ---- heaps ------------------------------------------------------------- */

SFHEAP_API sfheap_status sfheap_forest_new(const sfheap_cascade_options* opt, sfheap_forest** out);
SFHEAP_API void sfheap_forest_free(sfheap_forest* f);

SFHEAP_API sfheap_status sfheap_make_heap(sfheap_forest* f, sfheap_policy p, uint64_t seed, sfheap_heap* out);
SFHEAP_API sfheap_status sfheap_make_item(sfheap_forest* f, int64_t key, uint64_t info, sfheap_item* out);
SFHEAP_API sfheap_status sfheap_insert(sfheap_forest* f, sfheap_item x, sfheap_heap h);
/* Melds h2 into h1; h2 becomes stale. */
SFHEAP_API sfheap_status sfheap_meld(sfheap_forest* f, sfheap_heap h1, sfheap_heap h2);
/* *found is 0 for an empty heap. */
SFHEAP_API sfheap_status sfheap_find_min(sfheap_forest* f, sfheap_heap h, sfheap_item* out, int* found);
SFHEAP_API sfheap_status sfheap_delete_min(sfheap_forest* f, sfheap_heap h, int64_t* key, uint64_t* info);
SFHEAP_API sfheap_status sfheap_decrease_key(sfheap_forest* f, sfheap_item x, int64_t key, sfheap_heap h);
SFHEAP_API sfheap_status sfheap_delete(sfheap_forest* f, sfheap_item x, sfheap_heap h, int64_t* key,
                                       uint64_t* info);

SFHEAP_API sfheap_status sfheap_key(const sfheap_forest* f, sfheap_item x, int64_t* out);
SFHEAP_API sfheap_status sfheap_size(const sfheap_forest* f, sfheap_heap h, uint64_t* out);
SFHEAP_API sfheap_status sfheap_counters_get(const sfheap_forest* f, sfheap_counters* out);
SFHEAP_API sfheap_status sfheap_potential(const sfheap_forest* f, sfheap_heap h, int64_t* out);
/* Structure and rank-bound checks of one heap. SFHEAP_E_CHECK with the
 * findings in sfheap_last_error() when a check fails. */
SFHEAP_API sfheap_status sfheap_check_heap(const sfheap_forest* f, sfheap_heap h);

/* ---- results ------------------------------------------------------------ */

/* Counter columns are means per operation of kind op_kind. Strings are
 * valid only during the callback. */
typedef struct sfheap_row {
  const char* policy;
  const char* workload;
  uint64_t n;
  const char* op_kind;
  double fair_links;
  double naive_links;
  double iterations;
  double comparisons;
  uint64_t wall_time_ns;
  double phi;
} sfheap_row;

typedef void (*sfheap_row_sink)(const sfheap_row* row, void* user);
typedef void (*sfheap_text_sink)(const char* text, size_t len, void* user);

/* Formats a row as CSV (no newline; header when row is NULL) or as one JSON
 * object. The text goes to sink. */
SFHEAP_API sfheap_status sfheap_row_csv(const sfheap_row* row, sfheap_text_sink sink, void* user);
SFHEAP_API sfheap_status sfheap_row_jsonl(const sfheap_row* row, sfheap_text_sink sink, void* user);

SFHEAP_API sfheap_status sfheap_fit_exponent(const double* n, const double* cost, size_t count, double* slope);

/* ---- experiments -------------------------------------------------------- */

typedef struct sfheap_verify_config {
  const sfheap_policy* policies;
  size_t policy_count;
  uint64_t traces;
  uint64_t ops;
  uint64_t seed;
  int check;
  sfheap_cascade_options cascade;
} sfheap_verify_config;

typedef struct sfheap_verify_result {
  uint64_t traces;
  uint64_t failures;
  uint64_t states_checked;
  uint64_t reported;
} sfheap_verify_result;

/* Fuzz campaign: generated traces replayed against the reference model with
 * the invariant suite when check is set. Failure messages go to messages,
 * one per call. Returns SFHEAP_OK even when traces fail; inspect failures. */
SFHEAP_API sfheap_status sfheap_verify(const sfheap_verify_config* cfg, sfheap_verify_result* out,
                                       sfheap_row_sink rows, void* rows_user, sfheap_text_sink messages,
                                       void* messages_user);

/* Random workload of size n: one row per operation kind. */
SFHEAP_API sfheap_status sfheap_bench_random(sfheap_policy p, uint64_t n, uint64_t seed, sfheap_row_sink rows,
                                             void* user);

typedef struct sfheap_adversary_result {
  int k;
  uint64_t n;              /* heap size seen by each cycle delete-min */
  uint64_t build_ops;
  uint64_t rounds;
  double links_per_delete_min; /* cycle delete-mins, under the priced policy */
  double cost_per_delete_min;  /* estimated time, same delete-mins */
  int shape_ok;            /* every verification passed */
} sfheap_adversary_result;

/* Builds T(k,k) on a non-cascading heap and runs `rounds` insert/delete-min
 * cycles, verifying shapes and link counts. The schedule is then priced
 * under `policy` (non-cascading reproduces the run itself). The trace goes
 * to trace_sink when given. SFHEAP_E_CHECK on a shape failure. */
SFHEAP_API sfheap_status sfheap_adversary_k(int k, uint64_t rounds, sfheap_policy policy,
                                            sfheap_adversary_result* out, sfheap_row_sink rows, void* rows_user,
                                            sfheap_text_sink trace_sink, void* trace_user);

typedef struct sfheap_lower_bound_result {
  uint64_t m;
  int k;
  uint64_t n;
  uint64_t build_ops;
  uint64_t operations;
  uint64_t links;
  double estimated;          /* whole schedule under the priced policy */
  double cost_per_delete_min; /* cycle delete-mins */
  double links_per_delete_min;
} sfheap_lower_bound_result;

/* Sequence of at most m operations: the largest T(k,k) buildable in m/3
 * operations, then insert/delete-min pairs. Priced under `policy`. */
SFHEAP_API sfheap_status sfheap_adversary_m(uint64_t m, sfheap_policy policy, sfheap_lower_bound_result* out,
                                            sfheap_row_sink rows, void* rows_user, sfheap_text_sink trace_sink,
                                            void* trace_user);

typedef struct sfheap_dijkstra_result {
  uint64_t inserts;
  uint64_t decrease_keys;
  uint64_t delete_mins;
  uint64_t reachable;
  int distances_match; /* against the reference run over the model heap */
  sfheap_counters counters;
} sfheap_dijkstra_result;

/* Random directed graph with n vertices and m edges; shortest paths from
 * vertex 0. SFHEAP_E_CHECK when any distance differs from the reference. */
SFHEAP_API sfheap_status sfheap_dijkstra(uint32_t n, uint64_t m, uint64_t seed, sfheap_policy p,
                                         sfheap_dijkstra_result* out, sfheap_row_sink rows, void* user);

typedef struct sfheap_replay_options {
  int has_policy_override;
  sfheap_policy policy_override;
  int strict_identity;
  int check;
  sfheap_cascade_options cascade;
} sfheap_replay_options;

typedef struct sfheap_replay_result {
  int ok;
  uint64_t step;         /* first divergence when !ok */
  uint64_t ops;
  uint64_t states_checked;
  uint64_t reported;
  sfheap_counters counters;
} sfheap_replay_result;

/* Replays trace text against the reference model. Divergence details are in
 * sfheap_last_error() when result->ok is 0 (the call itself returns
 * SFHEAP_E_CHECK). */
SFHEAP_API sfheap_status sfheap_replay(const char* trace_text, const sfheap_replay_options* opt,
                                       sfheap_replay_result* out);

#ifdef __cplusplus
}
#endif

#endif /* SFHEAP_SFHEAP_H */

/* The public header compiles as C and the library behaves through it. */

#include <stdio.h>
#include <stdlib.h>
#include <string.h>

#include "sfheap/sfheap.h"

static int failures = 0;

#define EXPECT(cond)                                                  \
  do {                                                                \
    if (!(cond)) {                                                    \
      fprintf(stderr, "%s:%d: expected %s\n", __FILE__, __LINE__, #cond); \
      ++failures;                                                     \
    }                                                                 \
  } while (0)

static void count_rows(const sfheap_row* row, void* user) {
  (void)row;
  ++*(int*)user;
}

struct buffer {
  char data[4096];
  size_t len;
};

static void append(const char* s, size_t n, void* user) {
  struct buffer* b = (struct buffer*)user;
  if (b->len + n >= sizeof b->data) n = sizeof b->data - 1 - b->len;
  memcpy(b->data + b->len, s, n);
  b->len += n;
  b->data[b->len] = '\0';
}

static void heap_basics(void) {
  sfheap_forest* f = NULL;
  sfheap_heap h;
  sfheap_item items[20];
  int64_t key = 0;
  uint64_t info = 0, size = 0;
  int i, found = 0;

  EXPECT(sfheap_forest_new(NULL, &f) == SFHEAP_OK);
  EXPECT(sfheap_make_heap(f, SFHEAP_SIMPLE, 0, &h) == SFHEAP_OK);
  for (i = 0; i < 20; ++i) {
    EXPECT(sfheap_make_item(f, 100 + (i * 7) % 20, (uint64_t)i, &items[i]) == SFHEAP_OK);
    EXPECT(sfheap_insert(f, items[i], h) == SFHEAP_OK);
  }
  EXPECT(sfheap_size(f, h, &size) == SFHEAP_OK && size == 20);
  EXPECT(sfheap_delete_min(f, h, &key, &info) == SFHEAP_OK && key == 100);

  /* Build some depth, then cut through it. */
  EXPECT(sfheap_decrease_key(f, items[19], 1, h) == SFHEAP_OK);
  EXPECT(sfheap_find_min(f, h, &items[0], &found) == SFHEAP_OK && found);
  EXPECT(sfheap_key(f, items[0], &key) == SFHEAP_OK && key == 1);
  EXPECT(sfheap_check_heap(f, h) == SFHEAP_OK);

  /* Keys come out sorted. */
  {
    int64_t last = -1;
    int ok = 1;
    while (sfheap_size(f, h, &size) == SFHEAP_OK && size > 0) {
      EXPECT(sfheap_delete_min(f, h, &key, NULL) == SFHEAP_OK);
      ok = ok && key >= last;
      last = key;
    }
    EXPECT(ok);
  }

  EXPECT(sfheap_delete_min(f, h, &key, &info) == SFHEAP_E_EMPTY);
  EXPECT(strlen(sfheap_last_error()) > 0);
  EXPECT(sfheap_find_min(f, h, &items[0], &found) == SFHEAP_OK && !found);
  /* items[1] was deleted above. */
  EXPECT(sfheap_key(f, items[1], &key) == SFHEAP_E_STALE);
  EXPECT(sfheap_make_heap(f, (sfheap_policy)42, 0, &h) == SFHEAP_E_ARGUMENT);
  EXPECT(sfheap_make_heap(NULL, SFHEAP_SIMPLE, 0, &h) == SFHEAP_E_ARGUMENT);
  sfheap_forest_free(f);
}

static void preconditions(void) {
  sfheap_forest* f = NULL;
  sfheap_heap a, b;
  sfheap_item x;
  sfheap_counters c;
  int64_t phi = -1;

  EXPECT(sfheap_forest_new(NULL, &f) == SFHEAP_OK);
  EXPECT(sfheap_make_heap(f, SFHEAP_CLASSIC, 0, &a) == SFHEAP_OK);
  EXPECT(sfheap_make_heap(f, SFHEAP_CLASSIC, 0, &b) == SFHEAP_OK);
  EXPECT(sfheap_make_item(f, 5, 0, &x) == SFHEAP_OK);
  EXPECT(sfheap_insert(f, x, a) == SFHEAP_OK);
  EXPECT(sfheap_insert(f, x, b) == SFHEAP_E_PRECONDITION);
  EXPECT(sfheap_decrease_key(f, x, 9, a) == SFHEAP_E_PRECONDITION);
  EXPECT(sfheap_meld(f, a, a) == SFHEAP_E_PRECONDITION);
  EXPECT(sfheap_meld(f, a, b) == SFHEAP_OK);
  EXPECT(sfheap_meld(f, a, b) == SFHEAP_E_STALE);
  EXPECT(sfheap_potential(f, a, &phi) == SFHEAP_OK && phi == 1);
  EXPECT(sfheap_counters_get(f, &c) == SFHEAP_OK);
  EXPECT(sfheap_delete(f, x, a, NULL, NULL) == SFHEAP_OK);
  sfheap_forest_free(f);
}

static void policies(void) {
  sfheap_policy p;
  int i;
  for (i = 0; i < SFHEAP_POLICY_COUNT; ++i) {
    EXPECT(sfheap_policy_parse(sfheap_policy_name((sfheap_policy)i), &p) == SFHEAP_OK);
    EXPECT(p == (sfheap_policy)i);
  }
  EXPECT(sfheap_policy_parse("fibonacci", &p) == SFHEAP_E_ARGUMENT);
}

static void experiments(void) {
  sfheap_policy all[SFHEAP_POLICY_COUNT];
  sfheap_verify_config cfg;
  sfheap_verify_result vr;
  sfheap_adversary_result ar;
  sfheap_dijkstra_result dr;
  sfheap_replay_result rr;
  sfheap_replay_options ro;
  struct buffer trace, csv;
  double n[3] = {10, 100, 1000}, cost[3] = {10, 100, 1000}, slope = 0;
  int rows = 0, i;

  for (i = 0; i < SFHEAP_POLICY_COUNT; ++i) all[i] = (sfheap_policy)i;
  memset(&cfg, 0, sizeof cfg);
  cfg.policies = all;
  cfg.policy_count = SFHEAP_POLICY_COUNT;
  cfg.traces = 3;
  cfg.ops = 300;
  cfg.seed = 4;
  cfg.check = 1;
  EXPECT(sfheap_verify(&cfg, &vr, count_rows, &rows, NULL, NULL) == SFHEAP_OK);
  EXPECT(vr.traces == 30 && vr.failures == 0 && vr.states_checked > 0);
  EXPECT(rows == SFHEAP_POLICY_COUNT);

  memset(&trace, 0, sizeof trace);
  rows = 0;
  EXPECT(sfheap_adversary_k(3, 4, SFHEAP_NON_CASCADING, &ar, count_rows, &rows, append, &trace) == SFHEAP_OK);
  EXPECT(ar.shape_ok && ar.k == 3 && ar.links_per_delete_min == 3.0 && rows == 1);
  EXPECT(strncmp(trace.data, "newheap", 7) == 0);

  memset(&ro, 0, sizeof ro);
  ro.check = 1;
  EXPECT(sfheap_replay(trace.data, &ro, &rr) == SFHEAP_OK && rr.ok && rr.ops > 0);
  EXPECT(sfheap_replay("insert nowhere x 1\n", &ro, &rr) != SFHEAP_OK);

  EXPECT(sfheap_dijkstra(500, 4000, 3, SFHEAP_SIMPLE, &dr, NULL, NULL) == SFHEAP_OK);
  EXPECT(dr.distances_match && dr.delete_mins <= 500 && dr.decrease_keys <= 4000);
  EXPECT(dr.counters.comparisons == dr.counters.fair_links + dr.counters.naive_links);

  EXPECT(sfheap_fit_exponent(n, cost, 3, &slope) == SFHEAP_OK && slope > 0.999999 && slope < 1.000001);
  EXPECT(sfheap_fit_exponent(n, cost, 2, &slope) == SFHEAP_E_ARGUMENT);

  memset(&csv, 0, sizeof csv);
  EXPECT(sfheap_row_csv(NULL, append, &csv) == SFHEAP_OK);
  EXPECT(strcmp(csv.data, "policy,workload,n,op_kind,fair_links,naive_links,iterations,comparisons,wall_time_ns,phi") ==
         0);
}

int main(void) {
  heap_basics();
  preconditions();
  policies();
  experiments();
  if (failures) {
    fprintf(stderr, "%d failure(s)\n", failures);
    return EXIT_FAILURE;
  }
  puts("ok");
  return EXIT_SUCCESS;
}

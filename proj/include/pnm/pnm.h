#ifndef PNM_PNM_H
#define PNM_PNM_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum pnm_status {
  PNM_OK = 0,
  PNM_ARGUMENT,
  PNM_PARSE,
  PNM_VALIDATION,
  PNM_SIGNATURE,
  PNM_BUDGET,
  PNM_CLASS,
  PNM_CERTIFICATE,
  PNM_INTERNAL
} pnm_status;

typedef struct pnm_graph pnm_graph;
typedef struct pnm_formula pnm_formula;
typedef struct pnm_machine pnm_machine;

/* Message of the last failing call on this thread; never NULL. */
const char* pnm_last_error(void);
const char* pnm_status_name(pnm_status status);
/* Frees every char* handed out by this library. */
void pnm_string_free(char* s);

/* source is a .g or .pn file, or a generator spec: star:K, cycle:N, path:N,
   complete:N, random:N:MAXDEG, cubic16, parity:a, parity:b, parity:union.
   numbering is random, consistent, symmetric or sorted and applies to
   everything except .pn files, which carry their own. */
pnm_status pnm_graph_load(const char* source, const char* numbering, uint64_t seed, pnm_graph** out);
void pnm_graph_free(pnm_graph* g);
int pnm_graph_node_count(const pnm_graph* g);
int pnm_graph_max_degree(const pnm_graph* g);
int pnm_graph_is_consistent(const pnm_graph* g);
/* format is "g" or "pn". */
pnm_status pnm_graph_text(const pnm_graph* g, const char* format, char** out);
/* Nodes, edges, degrees, numbering and structural facts as JSON. */
pnm_status pnm_graph_info(const pnm_graph* g, char** out_json);
pnm_status pnm_kripke(const pnm_graph* g, const char* variant, char** out_json);

pnm_status pnm_formula_parse(const char* text, pnm_formula** out);
void pnm_formula_free(pnm_formula* f);
int pnm_formula_depth(const pnm_formula* f);
int pnm_formula_graded(const pnm_formula* f);
pnm_status pnm_formula_print(const pnm_formula* f, char** out);

pnm_status pnm_machine_named(const char* name, int delta, pnm_machine** out);
pnm_status pnm_machine_compile(const pnm_formula* f, const char* variant, int delta, int graded,
                               pnm_machine** out);
/* class_code is vv, mv, sv, vb, mb or sb. */
pnm_status pnm_machine_random(uint64_t seed, int delta, const char* class_code, int horizon,
                              pnm_machine** out);
/* wrapper is set_from_multiset, multiset_from_vector or bcast_multiset. */
pnm_status pnm_machine_wrap(const pnm_machine* inner, const char* wrapper, pnm_machine** out);
void pnm_machine_free(pnm_machine* m);
int pnm_machine_delta(const pnm_machine* m);
pnm_status pnm_machine_info(const pnm_machine* m, char** out_json);
/* PNM_CLASS when the machine does not belong to the class (vvc counts as vv). */
pnm_status pnm_machine_in_class(const pnm_machine* m, const char* class_code);
/* PNM_CLASS when a probe breaks the declared class; the report is still set. */
pnm_status pnm_machine_conformance(const pnm_machine* m, int samples, uint64_t seed, char** out_json);

/* A timeout is reported through *timed_out and the JSON, not the status. */
pnm_status pnm_run(const pnm_machine* m, const pnm_graph* g, int max_rounds, int with_trace,
                   int* timed_out, char** out_json);
pnm_status pnm_check(const pnm_graph* g, const pnm_formula* f, const char* variant, char** out_json);
/* Coarsest (graded) bisimulation of K(g) or of the disjoint union of the models. */
pnm_status pnm_bisim(const pnm_graph* const* graphs, size_t count, const char* variant, int graded,
                     char** out_json);
pnm_status pnm_decompile(const pnm_machine* m, int delta, int horizon, const char* variant,
                         char** out_formula);
/* demo is star, parity or regular. PNM_CERTIFICATE when anything fails to
   re-verify; the report is still set. */
pnm_status pnm_separate(const char* demo, uint64_t seed, char** out_json);
/* solution_json maps node ids to values, either as an array or an object,
   or is a run report whose outputs (top level or under "results") are used.
   problem is leaf_election, odd_odd or nonconstant. */
pnm_status pnm_verify_solution(const pnm_graph* g, const char* problem, const char* solution_json,
                               int* valid, char** out_json);

#ifdef __cplusplus
}
#endif

#endif

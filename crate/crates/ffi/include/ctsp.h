#ifndef CTSP_H
#define CTSP_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Result codes.
typedef enum CtspStatus {
  CTSP_STATUS_OK = 0,
  CTSP_STATUS_NULL_POINTER = 1,
  CTSP_STATUS_INVALID_ARGUMENT = 2,
  CTSP_STATUS_PARSE = 3,
  CTSP_STATUS_IO = 4,
  CTSP_STATUS_INVALID_INSTANCE = 5,
  CTSP_STATUS_TOO_LARGE = 6,
  CTSP_STATUS_INVALID_ROUTE = 7,
  CTSP_STATUS_PANIC = 8,
} CtspStatus;

// Opaque instance handle.
typedef struct CtspInstance CtspInstance;

// Opaque solution handle.
typedef struct CtspSolution CtspSolution;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message describing the last failure on this thread. Valid until the next
// failing call on the same thread.
const char *ctsp_last_error(void);

// Parses an instance in TSPLIB format, with the optional priority keys.
//
// # Safety
// `text` must be a NUL-terminated string and `out` a valid pointer.
enum CtspStatus ctsp_instance_parse(const char *text, struct CtspInstance **out);

// Loads an instance file.
//
// # Safety
// `path` must be a NUL-terminated string and `out` a valid pointer.
enum CtspStatus ctsp_instance_load(const char *path, struct CtspInstance **out);

// Releases an instance. Null is ignored.
//
// # Safety
// `inst` must come from this library and not be used afterwards.
void ctsp_instance_free(struct CtspInstance *inst);

// Number of nodes, depot included; 0 for null.
//
// # Safety
// `inst` must be null or a live handle.
size_t ctsp_instance_size(const struct CtspInstance *inst);

// Priority of `node` (0 for the depot, null or out of range).
//
// # Safety
// `inst` must be null or a live handle.
uint32_t ctsp_instance_priority(const struct CtspInstance *inst, size_t node);

// Creates a copy of `inst` with customers split into `groups` classes.
// `clustered` selects spatial classes instead of random ones.
//
// # Safety
// `inst` must be a live handle and `out` a valid pointer.
enum CtspStatus ctsp_instance_regroup(const struct CtspInstance *inst,
                                      uint32_t groups,
                                      bool clustered,
                                      uint64_t seed,
                                      struct CtspInstance **out);

// Sets the relaxation `d` in place.
//
// # Safety
// `inst` must be a live handle.
enum CtspStatus ctsp_instance_set_relax(struct CtspInstance *inst, uint32_t d);

// Runs the metaheuristic. `large` selects the longer search preset.
//
// # Safety
// `inst` must be a live handle and `out` a valid pointer.
enum CtspStatus ctsp_solve(const struct CtspInstance *inst,
                           bool large,
                           uint64_t seed,
                           struct CtspSolution **out);

// Solves to optimality with the dynamic program, storing at most
// `state_budget` states.
//
// # Safety
// `inst` must be a live handle and `out` a valid pointer.
enum CtspStatus ctsp_solve_exact(const struct CtspInstance *inst,
                                 size_t state_budget,
                                 struct CtspSolution **out);

// Releases a solution. Null is ignored.
//
// # Safety
// `sol` must come from this library and not be used afterwards.
void ctsp_solution_free(struct CtspSolution *sol);

// Tour cost; 0 for null.
//
// # Safety
// `sol` must be null or a live handle.
int64_t ctsp_solution_cost(const struct CtspSolution *sol);

// Number of nodes in the tour; 0 for null.
//
// # Safety
// `sol` must be null or a live handle.
size_t ctsp_solution_len(const struct CtspSolution *sol);

// Copies the 0-based visiting order, depot first, into `buf`, which must
// hold `ctsp_solution_len` entries.
//
// # Safety
// `sol` must be a live handle and `buf` valid for `cap` writes.
enum CtspStatus ctsp_solution_order(const struct CtspSolution *sol, size_t *buf, size_t cap);

// Checks a visiting order against the rule. `order` lists `len` 0-based
// nodes starting with the depot. The verdict goes to `feasible`; the status
// reports malformed orders.
//
// # Safety
// `inst` must be a live handle, `order` valid for `len` reads and
// `feasible` a valid pointer.
enum CtspStatus ctsp_check_order(const struct CtspInstance *inst,
                                 const size_t *order,
                                 size_t len,
                                 bool *feasible);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* CTSP_H */

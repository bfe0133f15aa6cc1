#ifndef RSEKIT_H
#define RSEKIT_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum {
  RSEKIT_STATUS_OK = 0,
  RSEKIT_STATUS_NULL_POINTER = 1,
  RSEKIT_STATUS_INVALID_ARGUMENT = 2,
  RSEKIT_STATUS_INVALID_GAME = 3,
  RSEKIT_STATUS_PARSE = 4,
  RSEKIT_STATUS_ENUMERATION_CAP_EXCEEDED = 5,
  RSEKIT_STATUS_GAP_TOO_SMALL = 6,
  RSEKIT_STATUS_BUDGET_EXCEEDED = 7,
  RSEKIT_STATUS_LP = 8,
  RSEKIT_STATUS_BUFFER_TOO_SMALL = 9,
  RSEKIT_STATUS_INTERNAL = 10,
  RSEKIT_STATUS_PANIC = 11,
} RsekitStatus;

typedef enum {
  RSEKIT_ARITH_FLOAT = 0,
  RSEKIT_ARITH_EXACT = 1,
} RsekitArith;

typedef enum {
  RSEKIT_METHOD_EXACT = 0,
  RSEKIT_METHOD_SSE = 1,
  RSEKIT_METHOD_MAXIMIN = 2,
  RSEKIT_METHOD_GAP_APPROX = 3,
  RSEKIT_METHOD_QPTAS = 4,
} RsekitMethod;

/**
 * Opaque game handle.
 */
typedef struct RsekitGame RsekitGame;

/**
 * Opaque solution handle.
 */
typedef struct RsekitSolution RsekitSolution;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Last error message on this thread, or null. Valid until the next failing call.
 */
const char *rsekit_last_error(void);

/**
 * Builds a game from row-major `m x n` payoff arrays. Entries outside `[0, 1]`
 * trigger normalization.
 *
 * # Safety
 * `leader` and `follower` must point to `m * n` doubles; `out` must be writable.
 */
RsekitStatus rsekit_game_new(size_t m,
                             size_t n,
                             const double *leader,
                             const double *follower,
                             RsekitArith arith,
                             RsekitGame **out);

/**
 * Parses a game from its JSON text.
 *
 * # Safety
 * `json` must be a nul-terminated string; `out` must be writable.
 */
RsekitStatus rsekit_game_from_json(const char *json, RsekitArith arith, RsekitGame **out);

/**
 * # Safety
 * `game` must come from a constructor above and not be freed twice.
 */
void rsekit_game_free(RsekitGame *game);

/**
 * # Safety
 * `game` must be a live handle; `m` and `n` must be writable.
 */
RsekitStatus rsekit_game_dims(const RsekitGame *game, size_t *m, size_t *n);

/**
 * Writes the delta-best-response set of `x` into `actions` and its size into `len`.
 * Fails with `BufferTooSmall` (after setting `len`) if `capacity` is short.
 *
 * # Safety
 * `x` must hold `m` doubles and `actions` must hold `capacity` entries.
 */
RsekitStatus rsekit_br_delta(const RsekitGame *game,
                             const double *x,
                             size_t m,
                             double delta,
                             size_t *actions,
                             size_t capacity,
                             size_t *len);

/**
 * Pessimistic leader value of committing to `x` against a delta-rational follower.
 *
 * # Safety
 * `x` must hold `m` doubles; `value` and `response` must be writable.
 */
RsekitStatus rsekit_evaluate(const RsekitGame *game,
                             const double *x,
                             size_t m,
                             double delta,
                             double *value,
                             size_t *response);

/**
 * Runs `method` at `delta`. `epsilon` is read only by the QPTAS.
 *
 * # Safety
 * `game` must be a live handle; `out` must be writable.
 */
RsekitStatus rsekit_solve(const RsekitGame *game,
                          RsekitMethod method,
                          double delta,
                          double epsilon,
                          RsekitSolution **out);

/**
 * Inducibility gap; `infinite` is set when the follower has a single action.
 *
 * # Safety
 * `game` must be a live handle; `gap` and `infinite` must be writable.
 */
RsekitStatus rsekit_gap(const RsekitGame *game, double *gap, bool *infinite);

/**
 * # Safety
 * `sol` must be a live solution handle.
 */
double rsekit_solution_value(const RsekitSolution *sol);

/**
 * # Safety
 * `sol` must be a live solution handle.
 */
size_t rsekit_solution_response(const RsekitSolution *sol);

/**
 * Copies the leader strategy into `buf`; `len` receives the number of actions.
 *
 * # Safety
 * `buf` must hold `capacity` doubles; `len` must be writable.
 */
RsekitStatus rsekit_solution_strategy(const RsekitSolution *sol,
                                      double *buf,
                                      size_t capacity,
                                      size_t *len);

/**
 * Full solution as JSON. Release with `rsekit_string_free`.
 *
 * # Safety
 * `sol` must be a live solution handle.
 */
char *rsekit_solution_json(const RsekitSolution *sol);

/**
 * # Safety
 * `sol` must come from `rsekit_solve` and not be freed twice.
 */
void rsekit_solution_free(RsekitSolution *sol);

/**
 * # Safety
 * `s` must come from this library and not be freed twice.
 */
void rsekit_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* RSEKIT_H */

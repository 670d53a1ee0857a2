#ifndef ISING_AVN_H
#define ISING_AVN_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/*
 Result code of every fallible call.
 */
typedef enum IaStatus {
  IA_STATUS_OK = 0,
  IA_STATUS_NULL_POINTER = 1,
  IA_STATUS_INVALID_ARGUMENT = 2,
  IA_STATUS_SIZE_MISMATCH = 3,
  IA_STATUS_CAP_EXCEEDED = 4,
  IA_STATUS_PARSE = 5,
  IA_STATUS_NOT_HERMITIAN = 6,
  IA_STATUS_NOT_COMMUTING = 7,
  IA_STATUS_NOT_AN_EIGENSTATE = 8,
  IA_STATUS_DEGENERATE_GROUND_STATE = 9,
  IA_STATUS_NUMERICAL = 10,
  /*
   The check ran but did not pass (e.g. a report whose certification failed).
   */
  IA_STATUS_CHECK_FAILED = 11,
  IA_STATUS_PANIC = 12,
} IaStatus;

/*
 Ordered, pairwise commuting list of eigenvalue constraints.
 */
typedef struct IaConstraintSet IaConstraintSet;

/*
 Normalized state vector on `n` sites.
 */
typedef struct IaState IaState;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/*
 Message for the last failed call on this thread, or NULL after a success.

 The pointer stays valid until the next `ia_*` call on the same thread.
 */
const char *ia_last_error_message(void);

/*
 Library version as a static NUL-terminated string.
 */
const char *ia_version(void);

/*
 Releases a string returned by this library. NULL is ignored.
 */
void ia_string_free(char *s);

/*
 Uniform superposition of the even-parity basis states on `n >= 2` sites.
 */
enum IaStatus ia_state_even_parity(size_t n, struct IaState **out);

enum IaStatus ia_state_odd_parity(size_t n, struct IaState **out);

/*
 `(-|0000> + |1111>)/sqrt(2)`.
 */
enum IaStatus ia_state_first_excited_4(struct IaState **out);

enum IaStatus ia_state_closed_form_3(double field_b, struct IaState **out);

enum IaStatus ia_state_closed_form_4(double field_b, struct IaState **out);

/*
 Numerical ground state of the ring.

 `parity`: 0 for the even sector, 1 for odd, any negative value for none.
 Without a sector a degenerate ground level yields
 `IA_STATUS_DEGENERATE_GROUND_STATE`.
 */
enum IaStatus ia_state_ground(size_t n, double field_b, int32_t parity, struct IaState **out);

/*
 Copies `len = 2^n` amplitudes (real and imaginary parts) and normalizes.

 `imag` may be NULL for a real vector.
 */
enum IaStatus ia_state_from_amplitudes(size_t n,
                                       const double *real,
                                       const double *imag,
                                       size_t len,
                                       struct IaState **out);

void ia_state_free(struct IaState *state);

enum IaStatus ia_state_sites(const struct IaState *state, size_t *out);

/*
 Writes the `2^n` amplitudes; `len` must equal `2^n`. Either output may be NULL.
 */
enum IaStatus ia_state_amplitudes(const struct IaState *state,
                                  double *real,
                                  double *imag,
                                  size_t len);

/*
 Empty set on `n` sites; fill it with [`ia_set_push`].
 */
enum IaStatus ia_set_new(size_t n, struct IaConstraintSet **out);

/*
 The four-operator contradiction set for `n >= 3` sites.
 */
enum IaStatus ia_set_standard(size_t n, struct IaConstraintSet **out);

enum IaStatus ia_set_excited_4(struct IaConstraintSet **out);

/*
 Appends `observable` (e.g. `"+YYZ"` or `"-Y1 Y2 Z3"`) with `eigenvalue` ±1.

 Fails with `IA_STATUS_NOT_COMMUTING` if it anticommutes with an existing entry.
 */
enum IaStatus ia_set_push(struct IaConstraintSet *set, const char *observable, int32_t eigenvalue);

enum IaStatus ia_set_len(const struct IaConstraintSet *set, size_t *out);

void ia_set_free(struct IaConstraintSet *set);

/*
 Checks the eigenequations on `state` and the classical sign system.

 `certified` receives whether both the quantum side passes at `tol` and no
 hidden-variable assignment exists. `json_out`, if not NULL, receives the
 full certificate as JSON.
 */
enum IaStatus ia_certify(const struct IaConstraintSet *set,
                         const struct IaState *state,
                         double tol,
                         bool *certified,
                         char **json_out);

/*
 Writes the `len` lowest eigenvalues of the ring, ascending.
 */
enum IaStatus ia_lowest_eigenvalues(size_t n, double field_b, double *out, size_t len);

/*
 Dimension of the ground level, grouping eigenvalues closer than `degeneracy_tol`.
 */
enum IaStatus ia_ground_degeneracy(size_t n, double field_b, double degeneracy_tol, size_t *out);

/*
 Stabilizer scan of `state` plus the contradiction subsets of at most
 `max_subset` entries, as JSON `{"inventory": ..., "avn_sets": [...]}`.
 */
enum IaStatus ia_search(const struct IaState *state,
                        double tol,
                        size_t max_subset,
                        char **json_out);

/*
 Seeded measurement experiment with `shots` shots per constraint.

 `matched_fractions`, if not NULL, receives one value per constraint
 (`fractions_len` must equal the set length). `json_out`, if not NULL,
 receives the statistics table.
 */
enum IaStatus ia_run_experiment(const struct IaState *state,
                                const struct IaConstraintSet *set,
                                size_t shots,
                                uint64_t seed,
                                double *matched_fractions,
                                size_t fractions_len,
                                char **json_out);

/*
 Whether two Pauli strings in text form commute.
 */
enum IaStatus ia_pauli_commutes(const char *a, const char *b, bool *out);

/*
 Product `a·b` including its phase, e.g. `"+X" * "+Z" = "-iY"`.
 */
enum IaStatus ia_pauli_multiply(const char *a, const char *b, char **out);

/*
 Runs one command from a JSON run configuration and returns the JSON report.

 Same payloads as the command-line tool. When the command runs but its
 check fails, the report is still written and the status is
 `IA_STATUS_CHECK_FAILED`.
 */
enum IaStatus ia_run_command(const char *config_json, char **report_out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* ISING_AVN_H */

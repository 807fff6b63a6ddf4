#ifndef QNC_H
#define QNC_H

/* Generated by cbindgen from crates/ffi/src. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum QncStatus {
  QNC_STATUS_OK = 0,
  QNC_STATUS_NULL_POINTER = 1,
  QNC_STATUS_INVALID_ARGUMENT = 2,
  QNC_STATUS_IO = 3,
  QNC_STATUS_PARSE = 4,
  QNC_STATUS_TOO_LARGE = 5,
  QNC_STATUS_INFEASIBLE = 6,
  QNC_STATUS_BUFFER_TOO_SMALL = 7,
  QNC_STATUS_ORACLE_MISMATCH = 8,
  QNC_STATUS_INTERNAL = 9,
} QncStatus;

// Rows of a zero-waste search. Opaque.
typedef struct QncSolutionList QncSolutionList;

// A two-subspace source. Opaque.
typedef struct QncSource QncSource;

typedef struct QncEntropyReport {
  double p1;
  double p2;
  double s_total;
  double h_x;
  double s1;
  double s2;
  double residual;
} QncEntropyReport;

// Scalar results of a pipeline run.
typedef struct QncPipelineSummary {
  uint64_t n1;
  uint64_t n2;
  double h_x;
  double classical_bits_per_signal;
  double realized_bits_per_signal;
  uint64_t stream_bytes;
  bool round_trip_ok;
  double s_rho;
  uint32_t m1;
  uint32_t m2;
  double fidelity1;
  double fidelity2;
  double quantum_qubits;
  double total_per_signal;
} QncPipelineSummary;

// Inclusive search bounds.
typedef struct QncSearchRanges {
  uint32_t d_min;
  uint32_t d_max;
  uint32_t n_min;
  uint32_t n_max;
  uint32_t q_min;
  uint32_t q_max;
  uint32_t m_min;
  uint32_t m_max;
} QncSearchRanges;

typedef struct QncSolution {
  uint32_t d;
  uint32_t n;
  uint32_t q;
  uint32_t m;
} QncSolution;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Library version as a static NUL-terminated string.
const char *qnc_version(void);

// Copies the calling thread's last error message into `buf` (truncated,
// always NUL-terminated when `cap > 0`). Returns the full message length.
//
// # Safety
// `buf` must be NULL or point to `cap` writable bytes.
uintptr_t qnc_last_error_message(char *buf, uintptr_t cap);

// Typical-subspace dimension `D_Λ(d, N)` as a decimal string.
//
// # Safety
// `buf` must be NULL or point to `cap` writable bytes; `len` must be valid.
enum QncStatus qnc_d_lambda(uint32_t d, uint32_t n, char *buf, uintptr_t cap, uintptr_t *len);

// Smallest `M` with `q^M ≥ D_Λ(d, N)`.
//
// # Safety
// `m` must be a valid pointer.
enum QncStatus qnc_minimal_block_length(uint32_t d, uint32_t n, uint32_t q, uint32_t *m);

// Relative excess capacity `(q^M - D_Λ) / D_Λ`. Fails with
// `QNC_STATUS_INFEASIBLE` when `q^M < D_Λ`.
//
// # Safety
// `excess` must be a valid pointer.
enum QncStatus qnc_waste(uint32_t d, uint32_t n, uint32_t q, uint32_t m, double *excess);

// Majority-subspace fidelity for per-site weights `q_s` (most probable
// retained state), `q_r[0..r_len]` (other retained states) and
// `q_ext[0..ext_len]` (states outside the retained span).
//
// # Safety
// `q_r` and `q_ext` must point to the given number of doubles (or be NULL
// when the length is 0); `fidelity` must be valid.
enum QncStatus qnc_fidelity_majority(double q_s,
                                     const double *q_r,
                                     uintptr_t r_len,
                                     const double *q_ext,
                                     uintptr_t ext_len,
                                     uint32_t n,
                                     double *fidelity);

// Binary entropy `H(P1)` in bits.
//
// # Safety
// `bits` must be a valid pointer.
enum QncStatus qnc_shannon_entropy_bits(double p1, double *bits);

// Expected Huffman bits per membership bit for blocks of `k` bits.
//
// # Safety
// `rate` must be a valid pointer.
enum QncStatus qnc_measured_rate(double p1, uint32_t k, double *rate);

// Loads a decomposable source from a JSON file.
//
// # Safety
// `path` must be NUL-terminated; `handle` must be valid.
enum QncStatus qnc_source_load(const char *path, struct QncSource **handle);

// Parses a decomposable source from JSON text.
//
// # Safety
// `json` must be NUL-terminated; `handle` must be valid.
enum QncStatus qnc_source_parse(const char *json, struct QncSource **handle);

// Two-qubit Bell source: the singlet with probability `p1`, the three
// triplet Bell states sharing `1 - p1` equally.
//
// # Safety
// `handle` must be valid.
enum QncStatus qnc_source_bell(double p1, struct QncSource **handle);

// # Safety
// `handle` must be NULL or come from a `qnc_source_*` constructor, and
// must not be used afterwards.
void qnc_source_free(struct QncSource *handle);

// # Safety
// `handle` must be live; `report` must be valid.
enum QncStatus qnc_source_entropy(const struct QncSource *handle, struct QncEntropyReport *report);

// Samples `n` signals with `seed` and runs the hybrid accounting with
// classical block length `k` and q-ary carriers.
//
// # Safety
// `handle` must be live; `summary` must be valid.
enum QncStatus qnc_source_run_pipeline(const struct QncSource *handle,
                                       uint64_t n,
                                       uint32_t k,
                                       uint32_t q,
                                       uint64_t seed,
                                       struct QncPipelineSummary *summary);

// Default bounds: `2 ≤ d, q, M ≤ 32`, `3 ≤ N ≤ 32`.
struct QncSearchRanges qnc_search_ranges_default(void);

// All `(d, N, q, M)` in range with `q^M = D_Λ(d, N)`, sorted.
//
// # Safety
// `ranges` and `handle` must be valid.
enum QncStatus qnc_search(const struct QncSearchRanges *ranges, struct QncSolutionList **handle);

// Number of rows; 0 for NULL.
//
// # Safety
// `list` must be NULL or live.
uintptr_t qnc_solution_list_len(const struct QncSolutionList *list);

// # Safety
// `list` must be live; `solution` must be valid.
enum QncStatus qnc_solution_list_get(const struct QncSolutionList *list,
                                     uintptr_t index,
                                     struct QncSolution *solution);

// `D_Λ` of row `index` as a decimal string.
//
// # Safety
// `list` must be live; see [`qnc_d_lambda`] for the buffer contract.
enum QncStatus qnc_solution_list_d_lambda(const struct QncSolutionList *list,
                                          uintptr_t index,
                                          char *buf,
                                          uintptr_t cap,
                                          uintptr_t *len);

// # Safety
// `list` must be NULL or come from [`qnc_search`], and must not be used
// afterwards.
void qnc_solution_list_free(struct QncSolutionList *list);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* QNC_H */

#ifndef SQGT_H
#define SQGT_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum SqgtAlgorithm {
  SQGT_DECODE_DISJUNCT = 0,
  SQGT_DECODE_CONCAT,
  SQGT_DECODE_LINDSTROM,
  SQGT_DECODE_ML,
  SQGT_DECODE_BP_THRESHOLD,
  SQGT_DECODE_BP_TOP_D,
} SqgtAlgorithm;

typedef enum SqgtProperty {
  SQGT_SQ_DISJUNCT = 0,
  SQGT_SQ_SEPARABLE,
  SQGT_BIN_DISJUNCT,
  SQGT_BIN_SEP_CGT,
  SQGT_BIN_SEP_QGT,
} SqgtProperty;

// Result of every call. Nonzero values other than `SQGT_BUFFER_TOO_SMALL`
// name the library error that occurred.
typedef enum SqgtStatus {
  SQGT_OK = 0,
  SQGT_NULL_POINTER,
  SQGT_BUFFER_TOO_SMALL,
  SQGT_BAD_ARGUMENT,
  SQGT_PANIC,
  SQGT_THRESHOLD_NOT_INCREASING,
  SQGT_SENTINEL_TOO_SMALL,
  SQGT_BAD_RANGE,
  SQGT_SUM_OUT_OF_RANGE,
  SQGT_LENGTH_MISMATCH,
  SQGT_TOO_FEW_COLUMNS,
  SQGT_EXPLOSION_GUARD,
  SQGT_NOT_BINARY,
  SQGT_ALPHABET_TOO_SMALL,
  SQGT_BAD_DISTRIBUTION,
  SQGT_NOT_PRIME,
  SQGT_OVERFLOW,
  SQGT_BAD_THRESHOLD,
  SQGT_DENSITY_OUT_OF_RANGE,
  SQGT_BAD_KAPPA,
  SQGT_INCONSISTENT_SPEC,
  SQGT_NON_BINARY_RESIDUE,
  SQGT_NO_CONSISTENT_SET,
  SQGT_NUMERICAL_UNDERFLOW,
  SQGT_BAD_D,
  SQGT_BAD_PARTITION,
  SQGT_BUDGET_EXCEEDED,
  SQGT_BAD_ETA,
  SQGT_ENTRY_OUT_OF_ALPHABET,
  SQGT_BAD_NOISE,
  SQGT_BAD_SUBJECT,
  SQGT_PARSE_ERROR,
  SQGT_CONFIG_ERROR,
  SQGT_IO,
} SqgtStatus;

// A test matrix, its claimed parameters and, for structured codes, what
// their dedicated decoder needs.
typedef struct SqgtCode SqgtCode;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Copies the message of the last failure on this thread, NUL-terminated and
// truncated to `cap` bytes. Returns the untruncated length.
//
// # Safety
// `buf` must point to `cap` writable bytes, or be null when `cap` is 0.
size_t sqgt_last_error(char *buf, size_t cap);

// Parses the text matrix format.
//
// # Safety
// `text` must be a NUL-terminated string and `out` a valid pointer.
enum SqgtStatus sqgt_code_parse(const char *text, struct SqgtCode **out);

// Writes the code in the text matrix format. `*out_len` receives the byte
// count without the terminating NUL.
//
// # Safety
// `code` must come from this library; `buf` must hold `cap` bytes.
enum SqgtStatus sqgt_code_format(const struct SqgtCode *code,
                                 char *buf,
                                 size_t cap,
                                 size_t *out_len);

// # Safety
// `code` must come from this library and not be used afterwards.
void sqgt_code_free(struct SqgtCode *code);

// # Safety
// `code` must come from this library.
size_t sqgt_code_rows(const struct SqgtCode *code);

// # Safety
// `code` must come from this library.
size_t sqgt_code_cols(const struct SqgtCode *code);

// Copies the matrix in row-major order.
//
// # Safety
// `out` must hold `cap` values.
enum SqgtStatus sqgt_code_entries(const struct SqgtCode *code,
                                  uint32_t *out,
                                  size_t cap,
                                  size_t *out_len);

// Concatenated scaled copies of a binary `m x nb` base given in row-major order.
//
// # Safety
// `base` must hold `m * nb` values.
enum SqgtStatus sqgt_construct_concat(const uint32_t *base,
                                      size_t m,
                                      size_t nb,
                                      uint64_t q,
                                      uint64_t eta1,
                                      size_t d,
                                      size_t e,
                                      struct SqgtCode **out);

// Generalized Lindstrom code with the default chains. `n = 0` keeps every column.
//
// # Safety
// `out` must be a valid pointer.
enum SqgtStatus sqgt_construct_lindstrom(uint32_t kappa,
                                         uint64_t q,
                                         uint64_t eta1,
                                         size_t n,
                                         struct SqgtCode **out);

// Random SQ-disjunct code with `m` rows drawn from `seed`.
//
// # Safety
// `out` must be a valid pointer.
enum SqgtStatus sqgt_construct_random(size_t n,
                                      size_t d,
                                      size_t e,
                                      uint64_t q,
                                      uint64_t eta1,
                                      size_t m,
                                      uint64_t seed,
                                      struct SqgtCode **out);

// Exactly-`d` separable code from a Bose-Chowla set.
//
// # Safety
// `out` must be a valid pointer.
enum SqgtStatus sqgt_construct_bose_chowla(size_t n,
                                           size_t d,
                                           uint64_t q,
                                           uint64_t eta1,
                                           struct SqgtCode **out);

// Test outcomes for the 1-based `defectives`, passed through the noise
// channel when either rate is positive.
//
// # Safety
// `defectives` must hold `k` values and `out` `cap` values.
enum SqgtStatus sqgt_encode(const struct SqgtCode *code,
                            const size_t *defectives,
                            size_t k,
                            double gamma_p,
                            double gamma_n,
                            uint64_t seed,
                            uint32_t *out,
                            size_t cap,
                            size_t *out_len);

// Decodes `z` into 1-based subject indices. `d` bounds the set size for
// ML and BP; 0 means the code's own bound. The noise rates only affect
// ML and BP.
//
// # Safety
// `z` must hold `len` values and `out` `cap` values.
enum SqgtStatus sqgt_decode(const struct SqgtCode *code,
                            enum SqgtAlgorithm algorithm,
                            const uint32_t *z,
                            size_t len,
                            size_t d,
                            double gamma_p,
                            double gamma_n,
                            size_t *out,
                            size_t cap,
                            size_t *out_len);

// Belief-propagation marginals, one per subject.
//
// # Safety
// `z` must hold `len` values and `out` `cap` values.
enum SqgtStatus sqgt_bp_marginals(const struct SqgtCode *code,
                                  const uint32_t *z,
                                  size_t len,
                                  size_t d,
                                  double gamma_p,
                                  double gamma_n,
                                  size_t iterations,
                                  double *out,
                                  size_t cap,
                                  size_t *out_len);

// Exhaustively checks `property` at the code's claimed parameters.
// `*passed` is 1 on success and 0 when a witness exists.
//
// # Safety
// `passed` must be a valid pointer.
enum SqgtStatus sqgt_verify(const struct SqgtCode *code,
                            enum SqgtProperty property,
                            int32_t *passed);

// Best objective found by the capacity search.
//
// # Safety
// `alpha` must be a valid pointer.
enum SqgtStatus sqgt_capacity(size_t d, size_t q, size_t levels, double grid_step, double *alpha);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* SQGT_H */

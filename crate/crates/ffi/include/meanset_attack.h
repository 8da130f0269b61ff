#ifndef MEANSET_ATTACK_H
#define MEANSET_ATTACK_H

/* Generated by cbindgen from meanset-attack-ffi; do not edit by hand. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result code of every FFI call.
 */
typedef enum MsaStatus {
  MSA_OK = 0,
  /**
   * A required pointer argument was null.
   */
  MSA_ERR_NULL_ARGUMENT = 1,
  /**
   * Bad letters, malformed config, unusable parameter values.
   */
  MSA_ERR_INVALID_ARGUMENT = 2,
  /**
   * An output buffer was too small; retry with the reported length.
   */
  MSA_ERR_BUFFER_TOO_SMALL = 3,
  /**
   * The deterministic work budget ran out.
   */
  MSA_ERR_WORK_BUDGET = 4,
  /**
   * Handle reduction exceeded its rewrite budget.
   */
  MSA_ERR_REDUCTION_BUDGET = 5,
  /**
   * A sample or challenge class was empty.
   */
  MSA_ERR_EMPTY_SAMPLE = 6,
  /**
   * A caught panic or other library bug.
   */
  MSA_ERR_INTERNAL = 7,
} MsaStatus;

/**
 * Key generation flavor.
 */
typedef enum MsaKeygenMode {
  /**
   * Uniform words of a fixed letter count.
   */
  MSA_KEYGEN_CLASSICAL = 0,
  /**
   * Products of permutation-braid factors (braid contexts only).
   */
  MSA_KEYGEN_ALTERNATIVE = 1,
} MsaKeygenMode;

/**
 * Which word of the key material to export.
 */
typedef enum MsaKeyWord {
  /**
   * The private conjugator `s`.
   */
  MSA_KEY_SECRET = 0,
  /**
   * The public base word `w`.
   */
  MSA_KEY_BASE = 1,
  /**
   * The public conjugate `t = s^-1 w s`.
   */
  MSA_KEY_CONJUGATE = 2,
} MsaKeyWord;

/**
 * Opaque platform-group context handle.
 */
typedef struct MsaContext MsaContext;

/**
 * Opaque protocol key material handle.
 */
typedef struct MsaKeys MsaKeys;

/**
 * Scalar summary of one simulated eavesdropping attack.
 */
typedef struct MsaTrialResult {
  /**
   * Some enumerated candidate equals the secret exactly.
   */
  bool exact_secret;
  /**
   * Some candidate solves the conjugacy equation.
   */
  bool conjugacy_solution;
  /**
   * Letters in the residual error element, or -1 when unmeasured.
   */
  int64_t error_length;
  /**
   * Distance evaluations spent.
   */
  uint64_t evaluations;
  /**
   * Error-ball candidates enumerated.
   */
  uint64_t enumerated;
  /**
   * Accepted descent steps on the two challenge classes.
   */
  uint64_t steps_g0;
  uint64_t steps_g1;
} MsaTrialResult;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Free group of the given rank.
 */
enum MsaStatus msa_context_new_free(uint32_t rank, struct MsaContext **out);

/**
 * Free-abelian group of the given rank.
 */
enum MsaStatus msa_context_new_free_abelian(uint32_t rank, struct MsaContext **out);

/**
 * Braid group on the given strand count (at least 2).
 */
enum MsaStatus msa_context_new_braid(uint32_t strands, struct MsaContext **out);

/**
 * Releases a context handle. Null is a no-op.
 */
void msa_context_free(struct MsaContext *ctx);

/**
 * Group-specific length of the element spelled by `letters`: reduced letter
 * count (free), L1 norm of exponents (free-abelian), or the geodesic-length
 * approximation (braid).
 */
enum MsaStatus msa_word_length(const struct MsaContext *ctx,
                               const int32_t *letters,
                               size_t len,
                               uint64_t *out_length);

/**
 * Whether two words spell the same group element.
 */
enum MsaStatus msa_word_equal(const struct MsaContext *ctx,
                              const int32_t *u,
                              size_t u_len,
                              const int32_t *v,
                              size_t v_len,
                              bool *out_equal);

/**
 * Shortened representative of the word (free reduction, exponent collection,
 * or handle reduction). Writes up to `cap` letters into `out` and the true
 * length into `out_len`; returns the buffer-too-small status when `cap` is
 * short, with `out_len` still set so the caller can retry.
 */
enum MsaStatus msa_word_shorten(const struct MsaContext *ctx,
                                const int32_t *letters,
                                size_t len,
                                int32_t *out,
                                size_t cap,
                                size_t *out_len);

/**
 * Generates protocol keys: a secret conjugator `s`, a base word `w`, and
 * the public conjugate `t`. `length` counts letters (classical) or
 * permutation-braid factors (alternative). Deterministic in `seed`.
 */
enum MsaStatus msa_keys_generate(const struct MsaContext *ctx,
                                 enum MsaKeygenMode mode,
                                 uint32_t length,
                                 uint64_t seed,
                                 struct MsaKeys **out);

/**
 * Releases a key handle. Null is a no-op.
 */
void msa_keys_free(struct MsaKeys *keys);

/**
 * Copies one of the key words into `out` (same buffer contract as
 * `msa_word_shorten`).
 */
enum MsaStatus msa_keys_word(const struct MsaKeys *keys,
                             enum MsaKeyWord which,
                             int32_t *out,
                             size_t cap,
                             size_t *out_len);

/**
 * Simulates `rounds` balanced protocol rounds, eavesdrops the transcript,
 * and runs the error-ball attack against the keys. `work_budget` caps
 * distance evaluations (0 = unlimited). Deterministic in `seed`.
 */
enum MsaStatus msa_attack_trial(const struct MsaKeys *keys,
                                uint32_t rounds,
                                uint32_t k_err,
                                uint64_t work_budget,
                                uint64_t seed,
                                struct MsaTrialResult *out);

/**
 * Runs a full experiment sweep from a JSON config (same schema as the CLI's
 * `attack-sweep --config`) and returns `{"cells": [...], "csv": "..."}` as a
 * JSON string. Release the string with `msa_string_free`.
 */
enum MsaStatus msa_sweep_run_json(const char *config_json, char **out_json);

/**
 * Releases a string returned by this library. Null is a no-op.
 */
void msa_string_free(char *s);

/**
 * Copies the current thread's last error message (NUL-terminated) into
 * `buf` and returns the full message length in bytes, excluding the NUL.
 * Call with `cap = 0` to query the length alone.
 */
size_t msa_last_error_message(char *buf, size_t cap);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* MEANSET_ATTACK_H */

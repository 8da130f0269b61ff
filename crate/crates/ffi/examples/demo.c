/* Smoke test for the C API: build the library, then
 *
 *   cargo build -p meanset-attack-ffi
 *   gcc crates/ffi/examples/demo.c -Icrates/ffi/include \
 *       target/debug/libmeanset_attack_ffi.a -lpthread -ldl -lm -o demo
 *   ./demo
 */
#include <inttypes.h>
#include <stdio.h>
#include <stdlib.h>

#include "meanset_attack.h"

static void die(const char *where) {
    char msg[256];
    msa_last_error_message(msg, sizeof msg);
    fprintf(stderr, "%s: %s\n", where, msg);
    exit(1);
}

int main(void) {
    MsaContext *ctx = NULL;
    if (msa_context_new_braid(5, &ctx) != MSA_OK) die("context");

    /* the braid relation sigma_1 sigma_2 sigma_1 = sigma_2 sigma_1 sigma_2 */
    const int32_t lhs[] = {1, 2, 1};
    const int32_t rhs[] = {2, 1, 2};
    bool equal = false;
    if (msa_word_equal(ctx, lhs, 3, rhs, 3, &equal) != MSA_OK) die("equal");
    printf("braid relation holds: %s\n", equal ? "yes" : "no");

    MsaKeys *keys = NULL;
    if (msa_keys_generate(ctx, MSA_KEYGEN_CLASSICAL, 10, 7, &keys) != MSA_OK)
        die("keygen");

    int32_t secret[64];
    size_t secret_len = 0;
    if (msa_keys_word(keys, MSA_KEY_SECRET, secret, 64, &secret_len) != MSA_OK)
        die("secret");
    printf("secret has %zu letters\n", secret_len);

    MsaTrialResult result;
    if (msa_attack_trial(keys, 80, 0, 0, 11, &result) != MSA_OK) die("attack");
    printf("attack after 80 rounds: exact=%d conjugacy=%d errorLength=%" PRId64
           " (%" PRIu64 " evaluations)\n",
           result.exact_secret, result.conjugacy_solution, result.error_length,
           result.evaluations);

    msa_keys_free(keys);
    msa_context_free(ctx);
    return equal && result.conjugacy_solution ? 0 : 1;
}

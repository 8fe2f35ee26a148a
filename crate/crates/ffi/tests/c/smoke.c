#include <stdio.h>
#include "sqgt.h"

static const uint32_t BASE[9 * 12] = {
    1, 0, 0, 0, 1, 0, 0, 1, 1, 0, 0, 0,
    1, 0, 0, 0, 0, 1, 1, 0, 0, 1, 0, 0,
    0, 1, 0, 0, 1, 0, 1, 0, 0, 0, 1, 0,
    0, 1, 0, 0, 0, 1, 0, 1, 0, 0, 0, 1,
    0, 0, 1, 0, 1, 0, 0, 0, 0, 1, 0, 1,
    0, 0, 1, 0, 0, 1, 0, 0, 1, 0, 1, 0,
    0, 0, 0, 1, 0, 0, 1, 0, 1, 0, 0, 1,
    0, 0, 0, 1, 0, 0, 0, 1, 0, 1, 1, 0,
    1, 1, 1, 1, 0, 0, 0, 0, 0, 0, 0, 0,
};

int main(void) {
    SqgtCode *code = NULL;
    if (sqgt_construct_concat(BASE, 9, 12, 7, 2, 2, 0, &code) != SQGT_OK) return 1;
    size_t defectives[2] = {2, 20};
    uint32_t z[9];
    size_t len = 0;
    if (sqgt_encode(code, defectives, 2, 0.0, 0.0, 0, z, 9, &len) != SQGT_OK || len != 9) return 2;
    size_t found[24];
    size_t count = 0;
    if (sqgt_decode(code, SQGT_DECODE_CONCAT, z, len, 0, 0.0, 0.0, found, 24, &count) != SQGT_OK) return 3;
    for (size_t i = 0; i < len; i++) printf("%u ", z[i]);
    printf("|");
    for (size_t i = 0; i < count; i++) printf(" %zu", found[i]);
    printf("\n");
    SqgtStatus bad = sqgt_construct_lindstrom(0, 5, 1, 0, &code);
    char msg[128];
    sqgt_last_error(msg, sizeof msg);
    printf("%d %s\n", bad == SQGT_BAD_KAPPA, msg);
    sqgt_code_free(code);
    return 0;
}

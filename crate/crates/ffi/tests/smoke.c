#include <stdio.h>
#include "ordcov.h"

int main(void) {
    OrdcovOrdinal *a = NULL, *b = NULL, *sum = NULL;
    char *text = NULL;
    if (ordcov_ordinal_parse("w^2", &a) != ORDCOV_STATUS_OK) return 1;
    if (ordcov_ordinal_parse("w", &b) != ORDCOV_STATUS_OK) return 1;
    if (ordcov_ordinal_add(a, b, &sum) != ORDCOV_STATUS_OK) return 1;
    if (ordcov_ordinal_to_string(sum, &text) != ORDCOV_STATUS_OK) return 1;
    printf("%s\n", text);
    ordcov_string_free(text);
    ordcov_ordinal_free(sum);
    ordcov_ordinal_free(b);
    ordcov_ordinal_free(a);

    if (ordcov_ordinal_parse("w^3 + w^2", &a) != ORDCOV_STATUS_OK) return 1;
    if (ordcov_degree_word(a, &text) != ORDCOV_STATUS_OK) return 1;
    printf("%s\n", text);
    ordcov_string_free(text);
    ordcov_ordinal_free(a);

    OrdcovStatus s = ordcov_ordinal_parse("w^", &a);
    printf("status %d\n", (int)s);
    return 0;
}

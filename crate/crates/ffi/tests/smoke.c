#include <stdio.h>
#include <string.h>
#include "tga.h"

int main(void) {
    TgaFamily *fam = NULL;
    if (tga_family_build("Q", 2, "-4", true, &fam) != TGA_STATUS_OK) {
        fprintf(stderr, "build: %s\n", tga_last_error());
        return 1;
    }
    size_t len = tga_family_len(fam);
    size_t dim = 0;
    bool ok = false;
    tga_family_dim(fam, 0, &dim);
    tga_family_verify(fam, &ok);
    char *json = NULL;
    tga_family_json(fam, false, &json);
    printf("%zu %zu %d %d\n", len, dim, ok, strstr(json, "eps_coset") != NULL);
    tga_string_free(json);
    tga_family_free(fam);

    if (tga_family_build("F:9", 1, "1", true, &fam) != TGA_STATUS_PARSE || fam != NULL) {
        return 1;
    }
    printf("%s\n", tga_last_error());
    return 0;
}

#include <stdio.h>
#include <string.h>
#include "curveforms.h"

int main(void) {
    CfCurve *curve = NULL;
    if (cf_curve_parse(2, "x^5+y^5+(x+y)^3+x*y", &curve) != CF_STATUS_OK) return 10;
    CfForms *forms = NULL;
    if (cf_forms_compute(curve, 0, &forms) != CF_STATUS_OK) return 11;
    if (cf_forms_genus(forms) != 3) return 12;
    uint32_t m[9];
    if (cf_forms_cartier_matrix(forms, m, 9) != CF_STATUS_OK) return 13;
    uint32_t want[9] = {0, 0, 1, 0, 0, 0, 1, 0, 0};
    if (memcmp(m, want, sizeof m) != 0) return 14;
    CfInvariants inv;
    if (cf_forms_invariants(forms, &inv) != CF_STATUS_OK || inv.a_number != 1 || inv.p_rank != 2) return 15;
    char *s = NULL;
    if (cf_forms_numerator(forms, 1, &s) != CF_STATUS_OK || strcmp(s, "x*y") != 0) return 16;
    cf_string_free(s);
    cf_forms_free(forms);
    cf_curve_free(curve);

    CfCurve *bad = NULL;
    if (cf_curve_parse(11, "x^5+*y", &bad) != CF_STATUS_PARSE || bad != NULL) return 17;
    if (strstr(cf_last_error(), "position 4") == NULL) return 18;
    puts("ok");
    return 0;
}

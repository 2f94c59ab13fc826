#include <math.h>
#include <stdio.h>
#include "ppt_antisym.h"

int main(void) {
    PptState *rho_a = NULL;
    PptState *sigma = NULL;
    const double c[2] = {0.7071067811865476, 0.7071067811865476};
    if (ppt_multilevel_singlet(4, c, NULL, 2, &rho_a) != PPT_STATUS_OK) {
        fprintf(stderr, "singlet: %s\n", ppt_last_error());
        return 1;
    }
    PptSolverConfig cfg = ppt_solver_config_default();
    PptCertificate cert;
    if (ppt_certify(rho_a, &cfg, PPT_FORM_FULL, &cert, &sigma) != PPT_STATUS_OK) {
        fprintf(stderr, "certify: %s\n", ppt_last_error());
        return 1;
    }
    if (cert.kind != PPT_CERTIFICATE_KIND_PPT_ENTANGLED_VIA_SDP || !(cert.p_ppt < 0.499)) {
        fprintf(stderr, "unexpected certificate kind %d, p_ppt %g\n", cert.kind, cert.p_ppt);
        return 1;
    }
    PptState *bad = NULL;
    if (ppt_werner(1, 0.5, &bad) != PPT_STATUS_INVALID_ARGUMENT || ppt_last_error() == NULL) {
        return 1;
    }
    printf("p_ppt %.9f\n", cert.p_ppt);
    ppt_state_free(sigma);
    ppt_state_free(rho_a);
    return 0;
}

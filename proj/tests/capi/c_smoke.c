/* Built as C to keep the public header C-clean. */
#include <math.h>
#include <stdio.h>

#include "micvib/micvib.h"

#define EXPECT(cond)                                                       \
    do {                                                                   \
        if (!(cond)) {                                                     \
            fprintf(stderr, "%s:%d: failed: %s\n", __FILE__, __LINE__, #cond); \
            return 1;                                                      \
        }                                                                  \
    } while (0)

int main(void)
{
    mv_environment env = mv_environment_default();
    mv_element element = {2300.0, 1e-6, 1e-6, 4500.0, 0.707};
    mv_package* pkg = NULL;
    double spag = 0.0;
    double grid[3];
    mv_response* r = NULL;

    EXPECT(mv_package_create(MV_PACKAGE_TWO_PORT, "c", 1.25e-3, 1.25e-3, 2.5e-3, 0.0, &element, &pkg) == MV_OK);
    EXPECT(mv_s_pa_per_g_two_port(pkg, &env, 1000.0, 0.0, MV_MODE_FULL, &spag) == MV_OK);
    EXPECT(fabs(spag - 1.1374642908961285) < 1e-12);

    EXPECT(mv_grid_fill(100.0, 10000.0, 3, 1, grid) == MV_OK);
    EXPECT(mv_predict_sweep(pkg, &env, grid, 3, 0.0, MV_MODE_FULL, &r) == MV_OK);
    EXPECT(mv_response_size(r) == 3);
    EXPECT(mv_response_unit(r) == MV_UNIT_PA_PER_G);
    EXPECT(fabs(mv_response_values(r)[0] / mv_response_values(r)[2] - 100.0) < 1e-12);

    EXPECT(mv_s_pa_per_g_two_port(pkg, &env, 0.0, 0.0, MV_MODE_FULL, &spag) == MV_E_POLE);
    EXPECT(mv_status_is_numerical(MV_E_POLE));
    EXPECT(mv_last_error()[0] != '\0');

    mv_response_free(r);
    mv_package_free(pkg);
    printf("c api smoke ok (%s)\n", mv_version());
    return 0;
}

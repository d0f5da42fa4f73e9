#include <math.h>
#include <stdio.h>
#include "vistri.h"

int main(void) {
    const double coords[] = {0, 0, 10, 0, 10, 10, 0, 10, 4, 4, 6, 4, 6, 6, 4, 6};
    const size_t sizes[] = {4, 4};
    VistriEngine *e = NULL;
    if (vistri_engine_new(coords, sizes, 2, &e) != VISTRI_STATUS_OK) return 1;

    double *poly = NULL;
    size_t n = 0;
    if (vistri_visibility_region(e, 1.0, 1.0, NULL, &poly, &n) != VISTRI_STATUS_OK || n < 4) return 2;
    vistri_coords_free(poly, n);

    int vis = -1;
    if (vistri_two_point_visible(e, 2, 5, 8, 5, NULL, &vis) != VISTRI_STATUS_OK || vis != 0) return 3;

    if (vistri_visibility_region(e, 5, 5, NULL, &poly, &n) != VISTRI_STATUS_OUTSIDE) return 4;
    if (vistri_last_error() == NULL) return 5;

    vistri_engine_free(e);
    printf("ok\n");
    return 0;
}

#include <stdio.h>
#include "reeb_index.h"

int main(void) {
    ReebCone *cone = NULL;
    ReebStatus st = reeb_cone_from_json("{\"dim\": 2, \"normals\": [[1,0],[-1,1]]}", &cone);
    if (st != REEB_STATUS_OK) {
        fprintf(stderr, "%s\n", reeb_last_error_message());
        return 1;
    }
    ReebHcTable *table = NULL;
    st = reeb_hc_table_auto(cone, 0, 13, &table);
    if (st == REEB_STATUS_OK) {
        int64_t k_minus = 0;
        reeb_hc_table_k_minus(table, &k_minus);
        printf("k_minus = %lld\n", (long long)k_minus);
        reeb_hc_table_free(table);
    } else {
        printf("%s\n", reeb_status_name((int32_t)st));
    }
    reeb_cone_free(cone);
    return st == REEB_STATUS_OK ? 0 : 1;
}

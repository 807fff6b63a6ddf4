#include <stdio.h>
#include "qnc.h"

int main(int argc, char **argv) {
    QncSearchRanges ranges = qnc_search_ranges_default();
    QncSolutionList *list = NULL;
    if (qnc_search(&ranges, &list) != QNC_STATUS_OK) {
        char msg[256];
        qnc_last_error_message(msg, sizeof msg);
        fprintf(stderr, "search failed: %s\n", msg);
        return 1;
    }
    size_t n = qnc_solution_list_len(list);
    for (size_t i = 0; i < n; i++) {
        QncSolution row;
        char dl[64];
        size_t len;
        qnc_solution_list_get(list, i, &row);
        qnc_solution_list_d_lambda(list, i, dl, sizeof dl, &len);
        printf("d=%u N=%u q=%u M=%u D=%s\n", row.d, row.n, row.q, row.m, dl);
    }
    qnc_solution_list_free(list);

    if (argc > 1) {
        QncSource *src = NULL;
        QncEntropyReport e;
        if (qnc_source_load(argv[1], &src) != QNC_STATUS_OK) {
            char msg[256];
            qnc_last_error_message(msg, sizeof msg);
            fprintf(stderr, "%s\n", msg);
            return 1;
        }
        qnc_source_entropy(src, &e);
        printf("S(rho)=%.12g H(X)=%.12g residual=%.3g\n", e.s_total, e.h_x, e.residual);
        qnc_source_free(src);
    }
    return 0;
}

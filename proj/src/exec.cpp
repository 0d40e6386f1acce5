#include "kcmap/exec.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace kcmap {

namespace {
int g_thread_limit = 0;
}

int hardware_threads() {
#ifdef _OPENMP
    return omp_get_max_threads();
#else
    return 1;
#endif
}

void set_thread_limit(int n) {
    g_thread_limit = n < 0 ? 0 : n;
#ifdef _OPENMP
    if (g_thread_limit > 0) omp_set_num_threads(g_thread_limit);
#endif
}

int thread_limit() { return g_thread_limit; }

} // namespace kcmap

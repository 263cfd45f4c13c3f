#ifndef FRACPAR_PARALLEL_HPP
#define FRACPAR_PARALLEL_HPP

// Thin OpenMP shims so the library builds and runs identically without OpenMP.
// Parallel regions in this codebase are restricted to elementwise maps and
// loops writing disjoint outputs, so results are bit-identical for any thread
// count. Reductions stay serial.

#ifdef _OPENMP
#include <omp.h>
namespace fracpar {
inline int max_threads() { return omp_get_max_threads(); }
inline void set_threads(int n) { if (n > 0) omp_set_num_threads(n); }
inline int thread_id() { return omp_get_thread_num(); }
}
#else
namespace fracpar {
inline int max_threads() { return 1; }
inline void set_threads(int) {}
inline int thread_id() { return 0; }
}
#endif

#endif

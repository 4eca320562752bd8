#pragma once

// Include this instead of <omp.h> so serial builds still compile.

#if defined(_OPENMP)
#include <omp.h>
namespace mixnoise {
constexpr bool use_omp = true;
}
#else
#pragma GCC diagnostic ignored "-Wunknown-pragmas"
namespace mixnoise {
constexpr bool use_omp = false;
}
#define omp_get_thread_num() 0
#define omp_get_max_threads() 1
#endif

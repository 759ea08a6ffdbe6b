#pragma once

#ifdef _OPENMP
#include <omp.h>
#define FREEDEC_PRAGMA_OMP(content) _Pragma(content)
#else
#define FREEDEC_PRAGMA_OMP(content)
namespace freedec {
inline int omp_get_max_threads() { return 1; }
inline int omp_get_thread_num() { return 0; }
}  // namespace freedec
#endif

namespace freedec {

inline int max_threads()
{
    return omp_get_max_threads();
}

}  // namespace freedec

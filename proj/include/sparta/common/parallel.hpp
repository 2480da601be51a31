#pragma once

#ifdef _OPENMP
#include <omp.h>
#endif

namespace sparta {

inline int hardware_threads()
{
#ifdef _OPENMP
    return omp_get_max_threads();
#else
    return 1;
#endif
}

inline int current_thread()
{
#ifdef _OPENMP
    return omp_get_thread_num();
#else
    return 0;
#endif
}

// Resolves a user-facing job count: values below 1 mean "all hardware threads".
inline int resolve_jobs(int jobs)
{
    return jobs < 1 ? hardware_threads() : jobs;
}

} // namespace sparta

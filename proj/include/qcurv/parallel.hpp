#ifndef QCURV_PARALLEL_HPP
#define QCURV_PARALLEL_HPP

#include <cstddef>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace qcurv {

// Execution policy for the data-parallel kernels (sweeps, potential
// profiles, sphere sampling). Serial is the reference path; both must
// produce bitwise-identical results, which holds because every work item
// is a pure function writing to its own output slot.
enum class Exec { Serial, Parallel };

inline int max_threads() {
#ifdef _OPENMP
    return omp_get_max_threads();
#else
    return 1;
#endif
}

template <class F>
void parallel_for(std::size_t count, Exec mode, F&& body) {
#ifdef _OPENMP
    if (mode == Exec::Parallel && count > 1) {
        #pragma omp parallel for schedule(dynamic)
        for (long long i = 0; i < static_cast<long long>(count); ++i)
            body(static_cast<std::size_t>(i));
        return;
    }
#else
    (void)mode;
#endif
    for (std::size_t i = 0; i < count; ++i) body(i);
}

} // namespace qcurv

#endif

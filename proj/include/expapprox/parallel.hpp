#pragma once

#include <cstddef>
#include <cstdlib>
#include <exception>

#include <omp.h>

namespace expapprox {

enum class ParallelMode { serial, openmp };

// Default worker count: EXPAPPROX_THREADS env var, else the OpenMP default.
inline int default_thread_count() {
    if (const char* env = std::getenv("EXPAPPROX_THREADS")) {
        const int n = std::atoi(env);
        if (n > 0) return n;
    }
    return omp_get_max_threads();
}

// Map a kernel over replicate indices. Replicates must be independent and
// deterministic in their index so both modes produce identical output.
// The serial path is the reference implementation used by the tests and the
// benchmark target.
template <typename F>
void replicate_map(std::size_t reps, F&& kernel,
                   ParallelMode mode = ParallelMode::openmp) {
    if (mode == ParallelMode::serial) {
        for (std::size_t r = 0; r < reps; ++r) kernel(r);
        return;
    }
    // exceptions cannot cross the parallel region; surface the first one
    std::exception_ptr eptr = nullptr;
#pragma omp parallel for schedule(static) num_threads(default_thread_count())
    for (std::size_t r = 0; r < reps; ++r) {
        try {
            kernel(r);
        } catch (...) {
#pragma omp critical(expapprox_replicate_map)
            if (!eptr) eptr = std::current_exception();
        }
    }
    if (eptr) std::rethrow_exception(eptr);
}

}  // namespace expapprox

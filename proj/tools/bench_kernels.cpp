// Serial vs OpenMP timings for the dense kernels.
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <omp.h>

#include "gfbp/linalg.hpp"
#include "gfbp/rng.hpp"

using namespace gfbp;

namespace {

template <class F>
double best_of(int reps, F&& f) {
    double best = 1e300;
    for (int r = 0; r < reps; ++r) {
        const auto t0 = std::chrono::steady_clock::now();
        f();
        const std::chrono::duration<double> dt = std::chrono::steady_clock::now() - t0;
        best = std::min(best, dt.count());
    }
    return best;
}

Matrix random_matrix(std::size_t m, std::size_t n, std::uint64_t seed) {
    Rng rng(seed);
    Matrix a(m, n);
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < n; ++j) a(i, j) = rng.normal();
    return a;
}

void row(const char* name, double serial, double parallel) {
    std::printf("%-22s %12.6f %12.6f %8.2fx\n", name, serial, parallel, serial / parallel);
}

}  // namespace

int main(int argc, char** argv) {
    const std::size_t m = argc > 1 ? std::strtoul(argv[1], nullptr, 10) : 400;
    const std::size_t n = argc > 2 ? std::strtoul(argv[2], nullptr, 10) : 2000;
    const int reps = 5;
    const Matrix a = random_matrix(m, n, 1);
    Vector x(n, 1.0);
    Vector y(m, 1.0);
    volatile double sink = 0.0;

    std::printf("threads: %d, A: %zu x %zu\n", omp_get_max_threads(), m, n);
    std::printf("%-22s %12s %12s %9s\n", "kernel", "serial [s]", "openmp [s]", "speedup");
    row("matvec", best_of(reps, [&] { sink = sink + kernels::serial::matvec(a, x)[0]; }),
        best_of(reps, [&] { sink = sink + kernels::matvec(a, x)[0]; }));
    row("matvec_transposed", best_of(reps, [&] { sink = sink + kernels::serial::matvec_transposed(a, y)[0]; }),
        best_of(reps, [&] { sink = sink + kernels::matvec_transposed(a, y)[0]; }));
    row("gram_rows", best_of(reps, [&] { sink = sink + kernels::serial::gram_rows(a)(0, 0); }),
        best_of(reps, [&] { sink = sink + kernels::gram_rows(a)(0, 0); }));
    const Matrix tall = random_matrix(n, m / 2, 2);
    row("gram_columns", best_of(reps, [&] { sink = sink + kernels::serial::gram_columns(tall)(0, 0); }),
        best_of(reps, [&] { sink = sink + kernels::gram_columns(tall)(0, 0); }));
    return 0;
}

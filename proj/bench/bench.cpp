// Projection enumeration timing: serial reference against the parallel kernel.

#include <cgr/homomorphism.hpp>

#include "generators.hpp"

#include <omp.h>

#include <chrono>
#include <cstdio>

using namespace cgr;

namespace {
template <class F>
auto time_ms(F && f) -> double
{
    auto start = std::chrono::steady_clock::now();
    f();
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
}
}

auto main(int argc, char ** argv) -> int
{
    int rounds = argc > 1 ? std::atoi(argv[1]) : 200;
    gen::Rng rng(7);
    std::printf("threads %d, rounds %d\n", omp_get_max_threads(), rounds);
    std::printf("%8s %8s %12s %12s %10s\n", "query", "target", "serial_ms", "parallel_ms", "solutions");
    for (int size : {4, 6, 8, 10}) {
        double serial = 0;
        double parallel = 0;
        std::size_t solutions = 0;
        for (int round = 0; round < rounds; ++round) {
            auto s = gen::support(rng, {2, 2, 2, 1});
            auto q = gen::graph(rng, s, {size / 2, size / 2, 0.1, size / 2});
            auto t = gen::graph(rng, s, {size, size, 0.1, size});
            std::size_t a = 0;
            std::size_t b = 0;
            serial += time_ms([&] { a = enumerate_projections_serial(q, t, 100000).projections.size(); });
            parallel += time_ms([&] { b = enumerate_projections(q, t, {100000, true}).projections.size(); });
            if (a != b) {
                std::fprintf(stderr, "mismatch at size %d round %d: %zu vs %zu\n", size, round, a, b);
                return 1;
            }
            solutions += a;
        }
        std::printf("%8d %8d %12.2f %12.2f %10zu\n", size / 2, size, serial, parallel, solutions);
    }
    return 0;
}

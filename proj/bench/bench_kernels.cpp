#include <chrono>
#include <cstdio>
#include <string>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "sqn/direction.hpp"
#include "sqn/rng.hpp"
#include "sqn/vec_ops.hpp"

// Times the OpenMP kernels against the serial reference on sizes matching
// the optimizer workloads (two-loop vectors, MLP minibatch matmuls).
// Usage: sqn_bench [repeats]

namespace {

using clk = std::chrono::steady_clock;

double seconds_since(clk::time_point start) {
    return std::chrono::duration<double>(clk::now() - start).count();
}

volatile double sink_value = 0.0;

template <typename Fn>
double time_best_of(int repeats, Fn&& fn) {
    double best = 1e300;
    for (int r = 0; r < repeats; ++r) {
        const auto t0 = clk::now();
        fn();
        best = std::min(best, seconds_since(t0));
    }
    return best;
}

void bench_reductions(int repeats) {
    std::printf("%-26s %12s %12s %8s\n", "kernel", "serial [ms]", "openmp [ms]", "speedup");
    for (const std::size_t n : {std::size_t{10000}, std::size_t{100000}, std::size_t{1000000},
                                std::size_t{10000000}}) {
        sqn::Rng rng(7);
        sqn::Vec a(n), b(n);
        for (std::size_t i = 0; i < n; ++i) {
            a[i] = rng.uniform(-1.0, 1.0);
            b[i] = rng.uniform(-1.0, 1.0);
        }
        const double ts = time_best_of(repeats, [&] { sink_value = sqn::kern::serial::dot(a, b); });
        const double tp = time_best_of(repeats, [&] { sink_value = sqn::kern::dot(a, b); });
        std::printf("dot       n=%-12zu %12.3f %12.3f %8.2f\n", n, ts * 1e3, tp * 1e3, ts / tp);

        sqn::Vec y = b;
        const double ts2 =
            time_best_of(repeats, [&] { sqn::kern::serial::axpy(0.5, a, y); });
        const double tp2 = time_best_of(repeats, [&] { sqn::kern::axpy(0.5, a, y); });
        std::printf("axpy      n=%-12zu %12.3f %12.3f %8.2f\n", n, ts2 * 1e3, tp2 * 1e3,
                    ts2 / tp2);
    }
}

void bench_matmul(int repeats) {
    // Minibatch forward/backward shapes for a 784-32-10 network, batch 64,
    // plus a full test-set forward.
    struct Shape {
        std::size_t m, k, n;
        const char* label;
    };
    const Shape shapes[] = {
        {64, 784, 32, "batch fwd  64x784*784x32"},
        {32, 64, 784, "grad       32x64*64x784"},
        {2000, 784, 32, "test fwd   2000x784*784x32"},
    };
    for (const auto& s : shapes) {
        sqn::Rng rng(11);
        sqn::Vec a(s.m * s.k), b(s.n * s.k), c(s.m * s.n);
        for (double& v : a) v = rng.uniform(-1.0, 1.0);
        for (double& v : b) v = rng.uniform(-1.0, 1.0);
        const double ts = time_best_of(
            repeats, [&] { sqn::kern::serial::matmul_nt(a, b, c, s.m, s.k, s.n); });
        const double tp =
            time_best_of(repeats, [&] { sqn::kern::matmul_nt(a, b, c, s.m, s.k, s.n); });
        std::printf("matmul_nt %-16s %12.3f %12.3f %8.2f\n", s.label, ts * 1e3, tp * 1e3,
                    ts / tp);
    }
}

// End-to-end: the two-loop recursion at MLP scale, whose inner dots/axpys
// ride the kernel layer.
void bench_two_loop(int repeats) {
    const std::size_t d = 200000;
    const std::size_t pairs = 20;
    sqn::Rng rng(3);
    sqn::DampingConfig cfg;
    sqn::CurvatureMemory memory(pairs);
    for (std::size_t p = 0; p < pairs; ++p) {
        sqn::Vec s(d), y(d);
        for (std::size_t i = 0; i < d; ++i) {
            s[i] = rng.normal();
            y[i] = s[i] + 0.3 * rng.normal();
        }
        if (auto pair = sqn::damp_pair(s, y, 1.0, cfg)) memory.push(std::move(*pair));
    }
    sqn::Vec g(d);
    for (double& v : g) v = rng.normal();
    const double t = time_best_of(repeats, [&] {
        const sqn::Vec v = sqn::two_loop(memory, g, 1.0);
        sink_value = v[0];
    });
    std::printf("two_loop  d=%zu c=%zu %25.3f ms\n", d, memory.size(), t * 1e3);
}

}  // namespace

int main(int argc, char** argv) {
    const int repeats = argc > 1 ? std::max(1, std::atoi(argv[1])) : 5;
#ifdef _OPENMP
    std::printf("openmp threads: %d\n", omp_get_max_threads());
#else
    std::printf("built without openmp\n");
#endif
    bench_reductions(repeats);
    bench_matmul(repeats);
    bench_two_loop(repeats);
    return 0;
}

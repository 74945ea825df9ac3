// Benchmark comparing the serial reference replica loop against the OpenMP
// fan-out on the two hot kernels (windowed self-interacting walk and the
// stopped-urn sampler), plus raw single-kernel step throughput.
//
//   ./sirw_bench [replicas] [N]

#include <chrono>
#include <cstdint>
#include <cstdio>
#include <cstdlib>

#include "sirw/replicate.hpp"
#include "sirw/urn.hpp"
#include "sirw/window_walk.hpp"

using namespace sirw;
using Clock = std::chrono::steady_clock;

namespace {

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct KernelResult {
    double seconds;
    double checksum;
    std::uint64_t steps;
};

KernelResult run_walk_batch(std::size_t replicas, std::uint64_t N, int workers) {
    const auto w = WeightFn::polynomial(1.0);
    const std::uint64_t ell = 2 * N;
    struct Rec {
        double e1;
        std::uint64_t steps;
    };
    const auto t0 = Clock::now();
    auto batch = replicate<Rec>(replicas, 17, 1, workers, [&](std::size_t, Rng& rng) {
        WindowSirw walk(w, 0, static_cast<std::int64_t>(N), rng);
        while (walk.upcrossings(0) <= ell) walk.step();
        return Rec{static_cast<double>(walk.upcrossings(N / 2)), walk.in_window_steps()};
    });
    KernelResult res{seconds_since(t0), 0.0, 0};
    for (std::size_t i = 0; i < batch.size(); ++i) {
        res.checksum += batch.records[i].e1;
        res.steps += batch.records[i].steps;
    }
    return res;
}

KernelResult run_urn_batch(std::size_t replicas, std::uint64_t n, int workers) {
    const auto w = WeightFn::polynomial(1.0);
    const auto t0 = Clock::now();
    auto batch = replicate<double>(replicas, 23, 2, workers, [&](std::size_t, Rng& rng) {
        UrnProcess urn(UrnVariant::Plus, w);
        return static_cast<double>(run_to_blue_count(urn, n, rng).discrepancy_at_tau);
    });
    KernelResult res{seconds_since(t0), 0.0, 2 * n * replicas};
    for (std::size_t i = 0; i < batch.size(); ++i) res.checksum += batch.records[i];
    return res;
}

}  // namespace

int main(int argc, char** argv) {
    const std::size_t replicas = argc > 1 ? std::strtoull(argv[1], nullptr, 10) : 400;
    const std::uint64_t N = argc > 2 ? std::strtoull(argv[2], nullptr, 10) : 300;
    const int threads = default_workers();

    std::printf("replicas=%zu N=%llu threads=%d\n", replicas,
                static_cast<unsigned long long>(N), threads);

    const auto ws = run_walk_batch(replicas, N, 1);
    const auto wp = run_walk_batch(replicas, N, threads);
    std::printf("windowed walk  serial: %7.3f s  (%.1f Msteps/s)  checksum %.0f\n", ws.seconds,
                static_cast<double>(ws.steps) / ws.seconds / 1e6, ws.checksum);
    std::printf("windowed walk  openmp: %7.3f s  (%.1f Msteps/s)  speedup %.2fx\n", wp.seconds,
                static_cast<double>(wp.steps) / wp.seconds / 1e6, ws.seconds / wp.seconds);
    if (ws.checksum != wp.checksum) {
        std::printf("MISMATCH between serial and parallel results\n");
        return 1;
    }

    const auto us = run_urn_batch(replicas * 20, 5000, 1);
    const auto up = run_urn_batch(replicas * 20, 5000, threads);
    std::printf("stopped urn    serial: %7.3f s  (%.1f Mdraws/s)  checksum %.0f\n", us.seconds,
                static_cast<double>(us.steps) / us.seconds / 1e6, us.checksum);
    std::printf("stopped urn    openmp: %7.3f s  (%.1f Mdraws/s)  speedup %.2fx\n", up.seconds,
                static_cast<double>(up.steps) / up.seconds / 1e6, us.seconds / up.seconds);
    if (us.checksum != up.checksum) {
        std::printf("MISMATCH between serial and parallel results\n");
        return 1;
    }
    return 0;
}

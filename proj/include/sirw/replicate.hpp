#pragma once
// Replica fan-out. The OpenMP path and the serial reference path fill the
// same per-replica slots; reduction happens afterwards in replica-index
// order, so results are identical for any worker count.

#include <omp.h>

#include <chrono>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "sirw/rng.hpp"

namespace sirw {

struct ReplicaError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

template <class Record>
struct ReplicaBatch {
    std::vector<Record> records;      // one slot per replica, index order
    std::vector<std::uint8_t> ok;     // 1 = record valid, 0 = replica failed
    std::size_t failures = 0;
    double wall_seconds = 0.0;

    std::size_t size() const { return records.size(); }
};

// kernel: (replica_index, Rng&) -> Record; may throw ReplicaError.
// workers <= 1 runs the plain serial loop (the reference implementation);
// workers > 1 runs the OpenMP loop. Records land in the same slots either way.
template <class Record, class Kernel>
ReplicaBatch<Record> replicate(std::size_t replicas, std::uint64_t master_seed,
                               std::uint64_t stream_salt, int workers, Kernel&& kernel) {
    ReplicaBatch<Record> batch;
    batch.records.resize(replicas);
    batch.ok.assign(replicas, 0);
    const auto t0 = std::chrono::steady_clock::now();

    if (workers <= 1) {
        for (std::size_t i = 0; i < replicas; ++i) {
            Rng rng = Rng::stream(master_seed, stream_salt, i);
            try {
                batch.records[i] = kernel(i, rng);
                batch.ok[i] = 1;
            } catch (const ReplicaError&) {
                batch.ok[i] = 0;
            }
        }
    } else {
#pragma omp parallel for schedule(dynamic, 8) num_threads(workers)
        for (long long ii = 0; ii < static_cast<long long>(replicas); ++ii) {
            const std::size_t i = static_cast<std::size_t>(ii);
            Rng rng = Rng::stream(master_seed, stream_salt, i);
            try {
                batch.records[i] = kernel(i, rng);
                batch.ok[i] = 1;
            } catch (const ReplicaError&) {
                batch.ok[i] = 0;
            }
        }
    }

    for (std::size_t i = 0; i < replicas; ++i)
        if (!batch.ok[i]) ++batch.failures;
    batch.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return batch;
}

// Collect one double per successful replica, in replica order.
template <class Record, class Extract>
std::vector<double> collect(const ReplicaBatch<Record>& batch, Extract&& f) {
    std::vector<double> out;
    out.reserve(batch.size());
    for (std::size_t i = 0; i < batch.size(); ++i)
        if (batch.ok[i]) out.push_back(f(batch.records[i]));
    return out;
}

inline int default_workers() { return omp_get_max_threads(); }

inline void require_failure_rate(std::size_t failures, std::size_t replicas, double max_rate,
                                 const std::string& what) {
    if (replicas == 0) throw std::invalid_argument("replicate: zero replicas");
    const double rate = static_cast<double>(failures) / static_cast<double>(replicas);
    if (rate > max_rate)
        throw std::runtime_error(what + ": replica failure rate " + std::to_string(rate) +
                                 " exceeds " + std::to_string(max_rate));
}

}  // namespace sirw

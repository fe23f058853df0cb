#pragma once

#include <cstdint>
#include <cstdio>
#include <functional>
#include <mutex>
#include <random>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace vardom {

/// Thrown when an iterative solver fails to reach its tolerance.
class SolverError : public std::runtime_error {
public:
    explicit SolverError(const std::string& what) : std::runtime_error(what) {}
};

/// Thrown when a restriction would silently discard mass outside the target mask.
class SupportLeakageError : public std::runtime_error {
public:
    SupportLeakageError(const std::string& what, double leaked_mass)
        : std::runtime_error(what), leaked(leaked_mass) {}
    double leaked;
};

inline std::uint64_t default_seed() { return 1234; }

/// Deterministic engine; every randomized component takes one of these
/// explicitly so runs are reproducible from a single recorded seed.
using Rng = std::mt19937_64;

/// Shortest decimal form that round-trips a double. Used by every CSV
/// writer so that identical runs produce byte-identical files.
inline std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    // prefer the shorter %.15g / %.16g forms when they round-trip
    for (int prec = 15; prec <= 16; ++prec) {
        char shorter[40];
        std::snprintf(shorter, sizeof(shorter), "%.*g", prec, v);
        double back = 0;
        std::sscanf(shorter, "%lf", &back);
        if (back == v) return shorter;
    }
    return buf;
}

inline int env_thread_count() {
    if (const char* s = std::getenv("VARDOM_THREADS")) {
        int n = std::atoi(s);
        if (n >= 1) return n;
    }
    unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
}

/// Index-parallel map. Results must be written to preallocated slots by the
/// body, so the output is independent of the schedule. The first exception
/// thrown by any worker is rethrown on the calling thread after the join.
inline void parallel_for(int n, const std::function<void(int)>& body) {
    int threads = std::min(env_thread_count(), n);
    if (threads <= 1) {
        for (int i = 0; i < n; ++i) body(i);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(threads));
    std::mutex mu;
    std::exception_ptr first;
    for (int t = 0; t < threads; ++t) {
        pool.emplace_back([&, t]() {
            try {
                for (int i = t; i < n; i += threads) body(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(mu);
                if (!first) first = std::current_exception();
            }
        });
    }
    for (auto& th : pool) th.join();
    if (first) std::rethrow_exception(first);
}

} // namespace vardom

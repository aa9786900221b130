#pragma once

#include <atomic>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace archmap {

// Error taxonomy, mapped onto CLI exit codes (validate=2, infeasible=3, budget=4).
struct ValidationError : std::runtime_error {
    explicit ValidationError(const std::string &msg) : std::runtime_error(msg) {}
};
struct LookupError : std::runtime_error {
    explicit LookupError(const std::string &msg) : std::runtime_error(msg) {}
};
struct InfeasibleError : std::runtime_error {
    explicit InfeasibleError(const std::string &msg) : std::runtime_error(msg) {}
};
struct BudgetError : std::runtime_error {
    explicit BudgetError(const std::string &msg) : std::runtime_error(msg) {}
};

using Rng = std::mt19937_64;

// Search-space cardinalities overflow u64 for layerwise plans on 3+ CUs.
using BigCount = unsigned __int128;

std::string big_to_string(BigCount v);
double big_to_double(BigCount v);

// a*b with overflow check; throws BudgetError on wrap.
BigCount big_mul_checked(BigCount a, BigCount b, const std::string &context);

inline std::uint64_t fnv1a64(const void *data, std::size_t len, std::uint64_t seed = 1469598103934665603ull) {
    const auto *p = static_cast<const unsigned char *>(data);
    std::uint64_t h = seed;
    for (std::size_t i = 0; i < len; ++i) {
        h ^= p[i];
        h *= 1099511628211ull;
    }
    return h;
}

inline std::uint64_t fnv1a64(const std::string &s, std::uint64_t seed = 1469598103934665603ull) {
    return fnv1a64(s.data(), s.size(), seed);
}

inline std::uint64_t fnv1a64(const std::vector<int> &v, std::uint64_t seed = 1469598103934665603ull) {
    std::uint64_t h = seed;
    for (int x : v) {
        auto u = static_cast<std::uint64_t>(static_cast<std::int64_t>(x));
        h = fnv1a64(&u, sizeof(u), h);
    }
    return h;
}

// Fixed-point decimal formatting; record files must be byte-stable across runs.
std::string fmt_fixed(double v, int decimals = 6);

// Deterministic index-based work distribution. Results must be written by
// index so the outcome is independent of the worker count.
template <typename Fn>
void parallel_for(std::size_t n, int threads, Fn &&fn) {
    if (threads <= 1 || n <= 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::size_t workers = std::min<std::size_t>(static_cast<std::size_t>(threads), n);
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for (;;) {
                std::size_t i = next.fetch_add(1);
                if (i >= n) return;
                fn(i);
            }
        });
    }
    for (auto &t : pool) t.join();
}

} // namespace archmap

#ifndef MAGWEYL_COMMON_HPP
#define MAGWEYL_COMMON_HPP

#include <complex>
#include <cstdint>
#include <cstdlib>
#include <functional>
#include <numbers>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace magweyl {

using cplx = std::complex<double>;
inline constexpr double pi = std::numbers::pi;
inline constexpr cplx iu{0.0, 1.0};

inline double sq(double x) { return x * x; }

// Japanese bracket <v> = sqrt(1 + |v|^2).
inline double jbracket(const double* v, int d) {
    double s = 1.0;
    for (int a = 0; a < d; ++a) s += v[a] * v[a];
    return std::sqrt(s);
}
inline double jbracket(const std::vector<double>& v) {
    return jbracket(v.data(), static_cast<int>(v.size()));
}

// ---------------------------------------------------------------------------
// Thread pool substitute: fixed-chunk parallel_for with slot-wise writes only,
// so results are identical for any thread count. Thread count comes from
// MAGWEYL_THREADS (default 1).
// ---------------------------------------------------------------------------
inline int thread_count() {
    static int cached = [] {
        const char* env = std::getenv("MAGWEYL_THREADS");
        if (!env) return 1;
        int v = std::atoi(env);
        return v >= 1 ? v : 1;
    }();
    return cached;
}

inline void set_thread_count_for_testing(int n);  // defined below

namespace detail {
inline int& thread_override() {
    static int v = 0;  // 0 = use env
    return v;
}
}  // namespace detail

inline int effective_threads() {
    int o = detail::thread_override();
    return o >= 1 ? o : thread_count();
}

inline void set_thread_count_for_testing(int n) { detail::thread_override() = n; }

template <class Fn>
void parallel_for(std::int64_t begin, std::int64_t end, Fn&& fn) {
    const std::int64_t count = end - begin;
    const int nt = effective_threads();
    if (nt <= 1 || count < 2048) {
        for (std::int64_t i = begin; i < end; ++i) fn(i);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(nt);
    const std::int64_t chunk = (count + nt - 1) / nt;
    for (int t = 0; t < nt; ++t) {
        const std::int64_t lo = begin + t * chunk;
        const std::int64_t hi = std::min(end, lo + chunk);
        if (lo >= hi) break;
        pool.emplace_back([lo, hi, &fn] {
            for (std::int64_t i = lo; i < hi; ++i) fn(i);
        });
    }
    for (auto& th : pool) th.join();
}

// ---------------------------------------------------------------------------
// Deterministic RNG helpers (explicit mapping, not std::distribution, so that
// streams are stable across standard library versions).
// ---------------------------------------------------------------------------
struct Rng {
    std::uint64_t state;
    explicit Rng(std::uint64_t seed) : state(seed ? seed : 0x9e3779b97f4a7c15ull) {}

    std::uint64_t next_u64() {
        // splitmix64
        std::uint64_t z = (state += 0x9e3779b97f4a7c15ull);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }
    double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
    cplx complex_unit_box() { return {uniform(-1.0, 1.0), uniform(-1.0, 1.0)}; }
};

}  // namespace magweyl

#endif  // MAGWEYL_COMMON_HPP

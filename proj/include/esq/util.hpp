#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

namespace esq {

// Global worker count for data-parallel loops (set from --threads).
void set_threads(unsigned n);
unsigned threads();

// Runs fn(begin, end) over [0, n) split into contiguous ranges.
// Chunk boundaries are independent of the worker count, so reductions
// that combine per-chunk partials in index order are deterministic.
void parallel_for(std::size_t n, const std::function<void(std::size_t, std::size_t)>& fn);

// Runs fn(i) for i in [0, n), one item at a time (coarse tasks).
void parallel_for_each(std::size_t n, const std::function<void(std::size_t)>& fn);

// Kahan compensated accumulator.
struct KahanSum {
    double sum = 0.0;
    double c = 0.0;
    void add(double x) {
        double y = x - c;
        double t = sum + y;
        c = (t - sum) - y;
        sum = t;
    }
    double value() const { return sum; }
};

// Fixed-size chunks for order-independent parallel reductions.
inline constexpr std::size_t kReduceChunk = 4096;

// Reduces term(i) over [0, n) with per-chunk Kahan sums combined in chunk
// order; result does not depend on the number of workers.
double chunked_sum(std::size_t n, const std::function<double(std::size_t)>& term);

// FNV-1a 64-bit, used for cache keys and output checksums.
std::uint64_t fnv1a64(const void* data, std::size_t len, std::uint64_t seed = 0xcbf29ce484222325ull);
std::uint64_t fnv1a64_file(const std::string& path);

// x*ln(x) extended by continuity to 0 at x = 0.
double xlogx(double x);

// Validates that 2j is a non-negative integer; returns 2j.
long require_half_integer(double j, const char* what);

} // namespace esq

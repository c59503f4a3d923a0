#include "esq/util.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <thread>

namespace esq {

namespace {
std::atomic<unsigned> g_threads{1};
}

void set_threads(unsigned n) { g_threads.store(n == 0 ? 1u : n); }
unsigned threads() { return g_threads.load(); }

void parallel_for(std::size_t n, const std::function<void(std::size_t, std::size_t)>& fn)
{
    unsigned nt = threads();
    if (nt <= 1 || n < 2 * kReduceChunk) {
        fn(0, n);
        return;
    }
    std::atomic<std::size_t> next{0};
    auto worker = [&]() {
        for (;;) {
            std::size_t i0 = next.fetch_add(kReduceChunk);
            if (i0 >= n) break;
            fn(i0, std::min(n, i0 + kReduceChunk));
        }
    };
    std::vector<std::thread> pool;
    for (unsigned t = 1; t < nt; ++t) pool.emplace_back(worker);
    worker();
    for (auto& th : pool) th.join();
}

void parallel_for_each(std::size_t n, const std::function<void(std::size_t)>& fn)
{
    unsigned nt = threads();
    if (nt <= 1 || n < 2) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    auto worker = [&]() {
        for (;;) {
            std::size_t i = next.fetch_add(1);
            if (i >= n) break;
            fn(i);
        }
    };
    std::vector<std::thread> pool;
    for (unsigned t = 1; t < std::min<std::size_t>(nt, n); ++t) pool.emplace_back(worker);
    worker();
    for (auto& th : pool) th.join();
}

double chunked_sum(std::size_t n, const std::function<double(std::size_t)>& term)
{
    std::size_t nchunks = (n + kReduceChunk - 1) / kReduceChunk;
    std::vector<double> partial(nchunks, 0.0);
    parallel_for(n, [&](std::size_t i0, std::size_t i1) {
        while (i0 < i1) {
            std::size_t c = i0 / kReduceChunk;
            std::size_t stop = std::min(i1, (c + 1) * kReduceChunk);
            KahanSum acc;
            for (std::size_t i = i0; i < stop; ++i) acc.add(term(i));
            partial[c] = acc.value();
            i0 = stop;
        }
    });
    KahanSum total;
    for (double p : partial) total.add(p);
    return total.value();
}

std::uint64_t fnv1a64(const void* data, std::size_t len, std::uint64_t seed)
{
    const unsigned char* p = static_cast<const unsigned char*>(data);
    std::uint64_t h = seed;
    for (std::size_t i = 0; i < len; ++i) {
        h ^= p[i];
        h *= 0x100000001b3ull;
    }
    return h;
}

std::uint64_t fnv1a64_file(const std::string& path)
{
    std::FILE* f = std::fopen(path.c_str(), "rb");
    if (!f) throw std::runtime_error("cannot open file for checksum: " + path);
    std::uint64_t h = 0xcbf29ce484222325ull;
    char buf[1 << 16];
    std::size_t got;
    while ((got = std::fread(buf, 1, sizeof(buf), f)) > 0) h = fnv1a64(buf, got, h);
    std::fclose(f);
    return h;
}

double xlogx(double x)
{
    return x > 0.0 ? x * std::log(x) : 0.0;
}

long require_half_integer(double j, const char* what)
{
    double twoj = 2.0 * j;
    long t = std::lround(twoj);
    if (j < 0.0 || std::abs(twoj - static_cast<double>(t)) > 1e-9)
        throw std::invalid_argument(std::string(what) + ": j must be a non-negative half-integer");
    return t;
}

} // namespace esq

#include "esq/cache.hpp"
#include "esq/util.hpp"

#include <algorithm>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <unistd.h>

namespace fs = std::filesystem;

namespace esq {

namespace {

constexpr char kMagic[8] = {'E', 'S', 'Q', 'E', 'I', 'G', 'C', '1'};
constexpr std::uint32_t kVersion = 1;

void put_bytes(std::string& buf, const void* data, std::size_t len)
{
    buf.append(static_cast<const char*>(data), len);
}

template <typename T>
void put_pod(std::string& buf, T v)
{
    put_bytes(buf, &v, sizeof(T));
}

bool is_entry(const fs::path& p)
{
    return p.extension() == ".eig";
}

bool has_ref_marker(const fs::path& entry)
{
    std::string stem = entry.filename().string();
    for (auto& e : fs::directory_iterator(entry.parent_path())) {
        std::string name = e.path().filename().string();
        if (name.rfind(stem + ".ref-", 0) == 0) return true;
    }
    return false;
}

} // namespace

EigCache::EigCache(std::string dir) : dir_(std::move(dir))
{
    fs::create_directories(dir_);
}

EigCache::~EigCache()
{
    std::error_code ec;
    for (auto& m : ref_markers_) fs::remove(m, ec);
}

std::string EigCache::entry_filename(const std::string& key)
{
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%016llx",
                  static_cast<unsigned long long>(fnv1a64(key.data(), key.size())));
    return std::string(buf) + ".eig";
}

std::string EigCache::mark_referenced(const std::string& path)
{
    std::string marker = path + ".ref-" + std::to_string(::getpid());
    std::ofstream(marker).put('\n');
    ref_markers_.push_back(marker);
    return marker;
}

void EigCache::store(const std::string& key, const EigenSystem& es)
{
    std::string payload;
    put_bytes(payload, kMagic, sizeof(kMagic));
    put_pod(payload, kVersion);
    put_pod(payload, static_cast<std::uint32_t>(key.size()));
    put_bytes(payload, key.data(), key.size());
    const std::uint64_t dim = static_cast<std::uint64_t>(es.dim());
    put_pod(payload, dim);
    bool is_complex = es.vectors.imag().cwiseAbs().maxCoeff() != 0.0;
    put_pod(payload, static_cast<std::uint8_t>(is_complex ? 1 : 0));
    put_bytes(payload, es.values.data(), sizeof(double) * dim);
    if (is_complex) {
        put_bytes(payload, es.vectors.data(), sizeof(cxd) * dim * dim);
    } else {
        Eigen::MatrixXd re = es.vectors.real();
        put_bytes(payload, re.data(), sizeof(double) * dim * dim);
    }
    put_pod(payload, fnv1a64(payload.data(), payload.size()));

    fs::path final_path = fs::path(dir_) / entry_filename(key);
    fs::path tmp = final_path;
    tmp += ".tmp-" + std::to_string(::getpid());
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        out.write(payload.data(), static_cast<std::streamsize>(payload.size()));
        if (!out) throw std::runtime_error("cache store failed: " + tmp.string());
    }
    fs::rename(tmp, final_path);
    mark_referenced(final_path.string());
}

std::optional<EigenSystem> EigCache::load(const std::string& key)
{
    fs::path path = fs::path(dir_) / entry_filename(key);
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        ++misses_;
        return std::nullopt;
    }
    std::string buf((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());

    auto corrupt = [&](const char* why) -> CacheCorruption {
        return CacheCorruption("cache entry corrupt (" + std::string(why) + "): " + path.string());
    };
    if (buf.size() < sizeof(kMagic) + 8 + 8 + 1 + 8) throw corrupt("truncated");
    if (std::memcmp(buf.data(), kMagic, sizeof(kMagic)) != 0) throw corrupt("bad magic");
    std::uint64_t stored_sum;
    std::memcpy(&stored_sum, buf.data() + buf.size() - 8, 8);
    if (fnv1a64(buf.data(), buf.size() - 8) != stored_sum) throw corrupt("checksum mismatch");

    std::size_t off = sizeof(kMagic);
    std::uint32_t version, keylen;
    std::memcpy(&version, buf.data() + off, 4); off += 4;
    if (version != kVersion) throw corrupt("version mismatch");
    std::memcpy(&keylen, buf.data() + off, 4); off += 4;
    if (off + keylen > buf.size()) throw corrupt("truncated key");
    std::string stored_key(buf.data() + off, keylen); off += keylen;
    if (stored_key != key) throw corrupt("key collision");
    std::uint64_t dim;
    std::memcpy(&dim, buf.data() + off, 8); off += 8;
    std::uint8_t is_complex = static_cast<std::uint8_t>(buf[off]); off += 1;

    std::size_t need = sizeof(double) * dim + (is_complex ? sizeof(cxd) : sizeof(double)) * dim * dim;
    if (off + need + 8 != buf.size()) throw corrupt("payload size mismatch");

    EigenSystem es;
    es.tag = key;
    es.values.resize(static_cast<Eigen::Index>(dim));
    std::memcpy(es.values.data(), buf.data() + off, sizeof(double) * dim);
    off += sizeof(double) * dim;
    es.vectors.resize(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
    if (is_complex) {
        std::memcpy(es.vectors.data(), buf.data() + off, sizeof(cxd) * dim * dim);
    } else {
        Eigen::MatrixXd re(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
        std::memcpy(re.data(), buf.data() + off, sizeof(double) * dim * dim);
        es.vectors = re.cast<cxd>();
    }

    // refresh LRU clock and pin against concurrent gc
    std::error_code ec;
    fs::last_write_time(path, fs::file_time_type::clock::now(), ec);
    mark_referenced(path.string());
    ++hits_;
    return es;
}

std::uint64_t cache_gc(const std::string& dir, std::uint64_t max_bytes)
{
    if (!fs::exists(dir)) return 0;
    struct Entry {
        fs::path path;
        std::uint64_t size;
        fs::file_time_type mtime;
    };
    std::vector<Entry> entries;
    std::uint64_t total = 0;
    for (auto& e : fs::directory_iterator(dir)) {
        if (!e.is_regular_file() || !is_entry(e.path())) continue;
        Entry ent{e.path(), e.file_size(), fs::last_write_time(e.path())};
        total += ent.size;
        entries.push_back(std::move(ent));
    }
    if (total <= max_bytes) return 0;

    std::sort(entries.begin(), entries.end(),
              [](const Entry& a, const Entry& b) { return a.mtime < b.mtime; });
    std::uint64_t freed = 0;
    for (auto& ent : entries) {
        if (total - freed <= max_bytes) break;
        if (has_ref_marker(ent.path)) continue;  // referenced by a running job
        std::error_code ec;
        if (fs::remove(ent.path, ec) && !ec) freed += ent.size;
    }
    return freed;
}

} // namespace esq

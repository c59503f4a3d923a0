#pragma once

#include "esq/eig.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace esq {

// Raised when a cache file fails its magic or checksum test. Corruption is
// fatal by contract; callers must not silently recompute.
struct CacheCorruption : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Disk cache of eigensystems keyed by (model, sector, parameters, dimension).
// Layout per entry: magic "ESQEIGC1", u32 version, u32 key length, key bytes,
// u64 dim, u8 complex flag, little-endian f64 payload (values then column-
// major vectors), u64 FNV-1a checksum over everything before it.
//
// Entries loaded or stored by a live EigCache carry a .ref-<pid> marker so a
// concurrent gc will not evict them; markers are removed on destruction.
class EigCache {
public:
    explicit EigCache(std::string dir);
    ~EigCache();
    EigCache(const EigCache&) = delete;
    EigCache& operator=(const EigCache&) = delete;

    // Returns the cached eigensystem, or nullopt on a clean miss.
    // Throws CacheCorruption on a damaged entry.
    std::optional<EigenSystem> load(const std::string& key);
    void store(const std::string& key, const EigenSystem& es);

    const std::string& dir() const { return dir_; }
    long hits() const { return hits_; }
    long misses() const { return misses_; }

    static std::string entry_filename(const std::string& key);

private:
    std::string dir_;
    std::vector<std::string> ref_markers_;
    long hits_ = 0;
    long misses_ = 0;

    std::string mark_referenced(const std::string& path);
};

// Least-recently-used eviction down to max_bytes; entries with a .ref-*
// marker are never evicted. Returns freed bytes.
std::uint64_t cache_gc(const std::string& dir, std::uint64_t max_bytes);

} // namespace esq

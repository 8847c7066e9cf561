#pragma once

// Result cache keyed by SHA-256 of the canonical config text.
//
// One manifest file per key: JSON {"config": <canonical text>, "files":
// {relative path: content}}.  A hit replays the stored bytes verbatim, so
// cached and fresh runs are byte-identical.  Anything unreadable -- parse
// failure, wrong shape, or a config string that does not match the key's --
// is evicted and treated as a miss; manifests are written atomically, so a
// torn write can only ever surface as such an evictable entry.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>

#include <openssl/evp.h>

#include <json.hpp>

#include "hamsys/errors.hpp"
#include "hamsys/serialize.hpp"

namespace hamsys {

inline std::string sha256_hex(const std::string& text) {
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (EVP_Digest(text.data(), text.size(), digest, &len, EVP_sha256(), nullptr) != 1)
        throw ConfigError("sha256: digest failed");
    static const char* hex = "0123456789abcdef";
    std::string out;
    out.reserve(2 * len);
    for (unsigned int i = 0; i < len; ++i) {
        out += hex[digest[i] >> 4];
        out += hex[digest[i] & 0xf];
    }
    return out;
}

/// HAMSYS_CACHE_DIR wins; otherwise ~/.cache/hamsys, or ./.hamsys-cache
/// without a home directory.
inline std::filesystem::path cache_root() {
    if (const char* env = std::getenv("HAMSYS_CACHE_DIR"); env && *env)
        return env;
    if (const char* home = std::getenv("HOME"); home && *home)
        return std::filesystem::path(home) / ".cache" / "hamsys";
    return ".hamsys-cache";
}

struct CacheEntry {
    std::string config;                        // canonical text, for audit
    std::map<std::string, std::string> files;  // relative path -> content
};

namespace detail {

inline std::filesystem::path cache_path(const std::string& key) {
    return cache_root() / (key + ".json");
}

} // namespace detail

/// Returns the stored entry for `key`, or nothing.  `canonical` is the
/// canonical config the key was derived from; a stored config that differs
/// marks the entry corrupt.
inline std::optional<CacheEntry> cache_lookup(const std::string& key,
                                              const std::string& canonical) {
    namespace fs = std::filesystem;
    const fs::path path = detail::cache_path(key);
    std::ifstream is(path, std::ios::binary);
    if (!is) return std::nullopt;
    std::ostringstream buf;
    buf << is.rdbuf();

    const auto evict = [&] {
        std::error_code ec;
        fs::remove(path, ec);
        return std::nullopt;
    };

    nlohmann::json j = nlohmann::json::parse(buf.str(), nullptr, false);
    if (!j.is_object() || !j.contains("config") || !j.contains("files"))
        return evict();
    if (!j["config"].is_string() || j["config"].get<std::string>() != canonical)
        return evict();
    if (!j["files"].is_object()) return evict();

    CacheEntry entry;
    entry.config = canonical;
    for (const auto& [name, content] : j["files"].items()) {
        if (!content.is_string()) return evict();
        entry.files[name] = content.get<std::string>();
    }
    return entry;
}

inline void cache_store(const std::string& key, const CacheEntry& entry) {
    nlohmann::json files = nlohmann::json::object();
    for (const auto& [name, content] : entry.files) files[name] = content;
    const nlohmann::json j = {{"config", entry.config}, {"files", files}};
    write_text_atomic(detail::cache_path(key), json_text(j));
}

} // namespace hamsys

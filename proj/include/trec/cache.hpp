#pragma once

// On-disk exact-result cache: a content-addressed directory of records.
// Records carry a checksum of their payload; corruption is detected by
// re-hashing and treated as a miss. Writes go through a temporary file and a
// rename.

#include "trec/io.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <string>

namespace trec {

inline constexpr const char* kEngineVersion = "trec-1";

inline std::string fnv1a64(const std::string& data) {
    unsigned long long h = 1469598103934665603ULL;
    for (unsigned char c : data) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", h);
    return buf;
}

class ResultCache {
public:
    explicit ResultCache(std::filesystem::path dir) : dir_(std::move(dir)) {
        std::filesystem::create_directories(dir_);
    }

    // The key string should cover everything that affects the result: curve
    // content, descriptor, engine version, frame order.
    static std::string make_key(const std::string& curve_content, const std::string& descriptor,
                                long long frame_order) {
        return std::string(kEngineVersion) + "|" + curve_content + "|" + descriptor + "|order=" +
               std::to_string(frame_order);
    }

    std::optional<ordered_json> get(const std::string& key) const {
        std::filesystem::path p = path_for(key);
        std::ifstream in(p);
        if (!in) return std::nullopt;
        ordered_json rec;
        try {
            in >> rec;
            if (rec.at("key").get<std::string>() != key) return std::nullopt;
            std::string payload = rec.at("payload").dump();
            if (rec.at("checksum").get<std::string>() != fnv1a64(payload)) return std::nullopt;
            return rec.at("payload");
        } catch (...) {
            return std::nullopt; // corrupt record: miss
        }
    }

    void put(const std::string& key, const ordered_json& payload) const {
        ordered_json rec;
        rec["engine"] = kEngineVersion;
        rec["key"] = key;
        rec["payload"] = payload;
        rec["checksum"] = fnv1a64(payload.dump());
        std::filesystem::path final = path_for(key);
        std::filesystem::path tmp = final;
        tmp += ".tmp";
        {
            std::ofstream out(tmp);
            out << rec.dump(1) << "\n";
        }
        std::filesystem::rename(tmp, final);
    }

    std::filesystem::path path_for(const std::string& key) const {
        return dir_ / (fnv1a64(key) + ".json");
    }

private:
    std::filesystem::path dir_;
};

} // namespace trec

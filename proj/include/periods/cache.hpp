#pragma once

// Append-only line-JSON store for evaluated MZVs and discovered relations.
// Every line carries an FNV-1a checksum of its payload; lines that fail to
// parse or verify are copied to PATH.quarantine and ignored.

#include "periods/relations.hpp"

#include <nlohmann/json.hpp>

#include <fcntl.h>
#include <sys/file.h>
#include <unistd.h>

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <thread>
#include <vector>

namespace periods {

inline std::string fnv1a_hex(const std::string& s) {
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

struct CachedZeta {
    std::string index;  // "zeta(1,2)"
    unsigned digits = 0;
    std::string value;        // scientific, `digits` significant digits after the point
    std::string error_bound;  // scientific
};

class CacheError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Exclusive writer lock on PATH.lock (flock, released on close or crash).
class WriterLock {
public:
    explicit WriterLock(const std::filesystem::path& store, double timeout_s = 10) {
        auto p = store.string() + ".lock";
        fd_ = ::open(p.c_str(), O_RDWR | O_CREAT, 0644);
        if (fd_ < 0) throw CacheError("cannot open lock file " + p);
        auto until = std::chrono::steady_clock::now() + std::chrono::duration<double>(timeout_s);
        while (::flock(fd_, LOCK_EX | LOCK_NB) != 0) {
            if (std::chrono::steady_clock::now() > until) {
                ::close(fd_);
                throw CacheError("cache " + store.string() + " is locked by another writer");
            }
            std::this_thread::sleep_for(std::chrono::milliseconds(50));
        }
    }
    ~WriterLock() {
        if (fd_ >= 0) {
            ::flock(fd_, LOCK_UN);
            ::close(fd_);
        }
    }
    WriterLock(const WriterLock&) = delete;
    WriterLock& operator=(const WriterLock&) = delete;

private:
    int fd_ = -1;
};

class CacheStore {
public:
    explicit CacheStore(std::filesystem::path path) : path_(std::move(path)) { load(); }

    const std::filesystem::path& path() const { return path_; }
    std::size_t quarantined() const { return quarantined_; }
    std::size_t zeta_entries() const { return zeta_.size(); }
    const std::vector<nlohmann::json>& relations() const { return relations_; }

    /// Entry for `index` at >= digits, the lowest such precision.
    std::optional<CachedZeta> find_zeta(const std::string& index, unsigned digits) const {
        auto it = zeta_.lower_bound({index, digits});
        if (it == zeta_.end() || it->first.first != index) return std::nullopt;
        return it->second;
    }

    void add_zeta(const CachedZeta& z) {
        if (zeta_.count({z.index, z.digits})) return;
        append({{"kind", "zeta"}, {"index", z.index}, {"digits", z.digits}, {"value", z.value},
                {"error_bound", z.error_bound}});
        zeta_[{z.index, z.digits}] = z;
    }

    void add_relation(const Relation& r) {
        auto j = r.to_json();
        j["kind"] = "relation";
        for (const auto& e : relations_)
            if (e.value("labels", nlohmann::json()) == j["labels"] &&
                e.value("coefficients", nlohmann::json()) == j["coefficients"])
                return;
        append(j);
        relations_.push_back(std::move(j));
    }

    static std::string encode(nlohmann::json payload) {
        std::string body = payload.dump();
        payload["sum"] = fnv1a_hex(body);
        return payload.dump();
    }

    /// The payload of a stored line, or nullopt if it is damaged.
    static std::optional<nlohmann::json> decode(const std::string& line) {
        auto j = nlohmann::json::parse(line, nullptr, false);
        if (j.is_discarded() || !j.is_object() || !j.contains("sum") || !j["sum"].is_string()) return std::nullopt;
        std::string sum = j["sum"];
        j.erase("sum");
        if (fnv1a_hex(j.dump()) != sum) return std::nullopt;
        return j;
    }

private:
    void load() {
        std::ifstream in(path_);
        if (!in) return;
        std::string line;
        std::vector<std::string> bad;
        while (std::getline(in, line)) {
            if (line.empty()) continue;
            auto j = decode(line);
            if (!j || !ingest(*j)) bad.push_back(line);
        }
        if (!bad.empty()) {
            quarantined_ = bad.size();
            std::ofstream q(path_.string() + ".quarantine", std::ios::app);
            for (const auto& b : bad) q << b << '\n';
        }
    }

    bool ingest(const nlohmann::json& j) {
        try {
            std::string kind = j.at("kind");
            if (kind == "zeta") {
                CachedZeta z{j.at("index"), j.at("digits"), j.at("value"), j.at("error_bound")};
                zeta_.emplace(std::make_pair(z.index, z.digits), z);
                return true;
            }
            if (kind == "relation") {
                relations_.push_back(j);
                return true;
            }
        } catch (const nlohmann::json::exception&) {
        }
        return false;
    }

    void append(const nlohmann::json& payload) {
        WriterLock lock(path_);
        std::ofstream out(path_, std::ios::app);
        if (!out) throw CacheError("cannot write cache " + path_.string());
        out << encode(payload) << '\n';
        out.flush();
        if (!out) throw CacheError("write to cache " + path_.string() + " failed");
    }

    std::filesystem::path path_;
    std::map<std::pair<std::string, unsigned>, CachedZeta> zeta_;
    std::vector<nlohmann::json> relations_;
    std::size_t quarantined_ = 0;
};

/// MZV values through an optional cache: a cached entry at >= digits is
/// rounded to the request, otherwise the value is computed and stored.
class ZetaSource {
public:
    explicit ZetaSource(CacheStore* cache = nullptr) : cache_(cache) {}

    CachedZeta entry(const CompositionIndex& idx, unsigned digits) {
        const std::string key = idx.str();
        if (cache_) {
            if (auto hit = cache_->find_zeta(key, digits)) {
                if (hit->digits == digits) return *hit;
                WorkingPrecision wp(hit->digits + 10);
                Real v = parse_real(hit->value, hit->digits + 10);
                Real e = parse_real(hit->error_bound, hit->digits + 10);
                return {key, digits, to_scientific(v, digits), to_scientific(e + pow10_real(-static_cast<long>(digits), digits + 10), 3)};
            }
        }
        auto& ev = evaluators_[digits];
        if (!ev) ev = std::make_unique<ZetaEvaluator>(digits);
        auto z = (*ev)(idx);
        CachedZeta out{key, digits, to_scientific(z.value, digits), to_scientific(z.error_bound, 3)};
        if (cache_) cache_->add_zeta(out);
        return out;
    }

    Real value(const CompositionIndex& idx, unsigned digits) {
        auto e = entry(idx, digits);
        return parse_real(e.value, digits + 10);
    }

private:
    CacheStore* cache_;
    std::map<unsigned, std::unique_ptr<ZetaEvaluator>> evaluators_;
};

}  // namespace periods

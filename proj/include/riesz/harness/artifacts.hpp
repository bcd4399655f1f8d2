#pragma once

// Output directory bookkeeping: every file written through an ArtifactSet is
// digested into the manifest, and an uncommitted set removes what it wrote.

#include <openssl/evp.h>

#include <nlohmann/json.hpp>

#include <array>
#include <filesystem>
#include <fstream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "riesz/error.hpp"
#include "riesz/io/records.hpp"

namespace riesz::harness {

namespace fs = std::filesystem;

inline std::string sha256_hex(const void* data, std::size_t n) {
    std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(), EVP_MD_CTX_free);
    std::array<unsigned char, EVP_MAX_MD_SIZE> md{};
    unsigned int len = 0;
    if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr) != 1 ||
        EVP_DigestUpdate(ctx.get(), data, n) != 1 || EVP_DigestFinal_ex(ctx.get(), md.data(), &len) != 1)
        throw Error("sha256: OpenSSL digest failed");
    static constexpr char hex[] = "0123456789abcdef";
    std::string out;
    for (unsigned int i = 0; i < len; ++i) {
        out += hex[md[i] >> 4];
        out += hex[md[i] & 0xf];
    }
    return out;
}

inline std::string sha256_hex(const std::string& s) { return sha256_hex(s.data(), s.size()); }

struct ManifestEntry {
    std::string path;
    std::string sha256;
    std::size_t bytes = 0;
};

class ArtifactSet {
public:
    /// `header` is prefixed to every CSV and NDJSON file.
    ArtifactSet(fs::path root, io::HeaderBlock header) : root_(std::move(root)), header_(std::move(header)) {
        std::error_code ec;
        if (!fs::exists(root_)) {
            fs::create_directories(root_, ec);
            if (ec) throw Error("cannot create output directory '" + root_.string() + "': " + ec.message());
            created_root_ = true;
        } else if (!fs::is_directory(root_)) {
            throw Error("output path '" + root_.string() + "' is not a directory");
        }
        const fs::path probe = root_ / ".riesz-write-probe";
        {
            std::ofstream p(probe);
            if (!p) throw Error("output directory '" + root_.string() + "' is not writable");
        }
        fs::remove(probe, ec);
    }

    ArtifactSet(const ArtifactSet&) = delete;
    ArtifactSet& operator=(const ArtifactSet&) = delete;

    ~ArtifactSet() {
        if (!committed_) discard();
    }

    const io::HeaderBlock& header() const { return header_; }
    const fs::path& root() const { return root_; }

    /// CSV table with the header block and one column-name line.
    void write_csv(const std::string& name, const std::string& columns, const std::vector<std::string>& rows) {
        std::ostringstream os;
        io::write_header(os, header_);
        os << columns << '\n';
        for (const std::string& r : rows) os << r << '\n';
        write_bytes(name, os.str());
    }

    /// NDJSON stream: the writer receives the header as its first record.
    template <class F>
    void write_ndjson(const std::string& name, F&& fill) {
        std::ostringstream os;
        io::NdjsonWriter w(os, header_);
        fill(w);
        write_bytes(name, os.str());
    }

    void write_bytes(const std::string& name, const std::string& bytes) {
        write_raw(name, bytes.data(), bytes.size());
    }

    void write_bytes(const std::string& name, const std::vector<unsigned char>& bytes) {
        write_raw(name, bytes.data(), bytes.size());
    }

    const std::vector<ManifestEntry>& entries() const { return entries_; }

    /// Writes manifest.json (not listed in itself) and keeps the outputs.
    void commit(const nlohmann::json& extra = {}) {
        nlohmann::json m = extra.is_null() ? nlohmann::json::object() : extra;
        for (const auto& [k, v] : header_) m[k] = v;
        nlohmann::json files = nlohmann::json::array();
        for (const ManifestEntry& e : entries_) files.push_back({{"path", e.path}, {"sha256", e.sha256}, {"bytes", e.bytes}});
        m["files"] = files;
        const std::string text = m.dump(2) + "\n";
        write_file(root_ / "manifest.json", text.data(), text.size());
        written_.push_back(root_ / "manifest.json");
        committed_ = true;
    }

    /// Removes every file written so far (and directories this set created).
    void discard() {
        std::error_code ec;
        for (auto it = written_.rbegin(); it != written_.rend(); ++it) fs::remove(*it, ec);
        for (auto it = made_dirs_.rbegin(); it != made_dirs_.rend(); ++it) fs::remove(*it, ec);
        if (created_root_) fs::remove(root_, ec);
        written_.clear();
        made_dirs_.clear();
        entries_.clear();
    }

private:
    void write_raw(const std::string& name, const void* data, std::size_t n) {
        require(!committed_, "artifact set already committed");
        const fs::path target = root_ / name;
        const fs::path parent = target.parent_path();
        if (!fs::exists(parent)) {
            std::vector<fs::path> fresh;
            for (fs::path p = parent; !fs::exists(p); p = p.parent_path()) fresh.push_back(p);
            fs::create_directories(parent);
            made_dirs_.insert(made_dirs_.end(), fresh.rbegin(), fresh.rend());
        }
        written_.push_back(target);
        write_file(target, data, n);
        entries_.push_back({name, sha256_hex(data, n), n});
    }

    static void write_file(const fs::path& path, const void* data, std::size_t n) {
        std::ofstream out(path, std::ios::binary | std::ios::trunc);
        if (!out) throw Error("cannot open '" + path.string() + "' for writing");
        out.write(static_cast<const char*>(data), static_cast<std::streamsize>(n));
        if (!out) throw Error("write failed for '" + path.string() + "'");
    }

    fs::path root_;
    io::HeaderBlock header_;
    bool created_root_ = false;
    bool committed_ = false;
    std::vector<fs::path> written_;
    std::vector<fs::path> made_dirs_;
    std::vector<ManifestEntry> entries_;
};

}  // namespace riesz::harness

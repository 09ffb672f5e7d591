#include "alloylab/manifest.hpp"

#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>
#include <openssl/evp.h>

#include "alloylab/error.hpp"

namespace alloylab {

std::string sha256_hex(std::string_view bytes) {
    std::array<unsigned char, EVP_MAX_MD_SIZE> digest{};
    unsigned int len = 0;
    if (EVP_Digest(bytes.data(), bytes.size(), digest.data(), &len, EVP_sha256(), nullptr) != 1) {
        throw Error(ErrorKind::io, "SHA-256 computation failed");
    }
    static constexpr char hex[] = "0123456789abcdef";
    std::string out;
    out.reserve(2 * len);
    for (unsigned int i = 0; i < len; ++i) {
        out.push_back(hex[digest[i] >> 4]);
        out.push_back(hex[digest[i] & 0xf]);
    }
    return out;
}

std::string sha256_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorKind::io, "cannot read '" + path.string() + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return sha256_hex(ss.str());
}

std::string utc_timestamp() {
    const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

std::string format_number(double value) {
    if (std::isnan(value)) return "nan";
    if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", value);
    return buf;
}

CsvTable::CsvTable(std::vector<std::string> header) : width_(header.size()) { row(std::move(header)); }

CsvTable& CsvTable::row(std::vector<std::string> cells) {
    if (cells.size() != width_) throw Error(ErrorKind::invalid_argument, "CSV row width mismatch");
    for (std::size_t i = 0; i < cells.size(); ++i) {
        if (i > 0) text_ += ',';
        text_ += cells[i];
    }
    text_ += '\n';
    return *this;
}

std::string CsvTable::text() const { return text_; }

bool RunManifest::all_ok() const noexcept {
    for (const auto& c : cells) {
        if (!c.ok) return false;
    }
    return true;
}

std::string RunManifest::to_json() const {
    nlohmann::ordered_json j;
    j["kind"] = kind;
    j["config_sha256"] = config_sha256;
    j["version"] = version;
    j["started"] = started;
    j["finished"] = finished;
    j["threads"] = threads;
    j["seeds"] = {{"structure_seed", structure_seed}, {"master_seed", master_seed}};
    j["status"] = all_ok() ? "ok" : "partial-failure";
    auto& cj = j["cells"] = nlohmann::ordered_json::array();
    for (const auto& c : cells) {
        nlohmann::ordered_json e{{"id", c.id}, {"status", c.ok ? "ok" : "failed"}};
        if (!c.message.empty()) e["message"] = c.message;
        cj.push_back(e);
    }
    auto& fj = j["files"] = nlohmann::ordered_json::array();
    for (const auto& f : files) fj.push_back({{"path", f.path}, {"sha256", f.sha256}, {"bytes", f.bytes}});
    return j.dump(2) + "\n";
}

FileRecord write_output(const std::filesystem::path& directory, const std::string& name, const std::string& content) {
    std::filesystem::create_directories(directory);
    const auto path = directory / name;
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorKind::io, "cannot write '" + path.string() + "'");
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    out.close();
    if (!out) throw Error(ErrorKind::io, "write to '" + path.string() + "' failed");
    return {name, sha256_hex(content), content.size()};
}

std::string library_version() { return ALLOYLAB_VERSION; }

}  // namespace alloylab

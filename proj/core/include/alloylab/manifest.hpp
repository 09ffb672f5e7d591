#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace alloylab {

std::string sha256_hex(std::string_view bytes);
std::string sha256_file(const std::filesystem::path& path);

/// Current UTC time as YYYY-MM-DDTHH:MM:SSZ.
std::string utc_timestamp();

/// 17 significant digits, dot decimal; "nan", "inf", "-inf" for non-finite values.
std::string format_number(double value);

/// Comma-separated rows with LF endings.
class CsvTable {
public:
    explicit CsvTable(std::vector<std::string> header);

    CsvTable& row(std::vector<std::string> cells);
    std::string text() const;

private:
    std::size_t width_;
    std::string text_;
};

struct FileRecord {
    std::string path;  // relative to the output directory
    std::string sha256;
    std::uintmax_t bytes = 0;
};

struct CellStatus {
    std::string id;
    bool ok = true;
    std::string message;
};

struct RunManifest {
    std::string kind;
    std::string config_sha256;
    std::string version;
    std::string started;
    std::string finished;
    unsigned threads = 1;
    std::uint64_t structure_seed = 0;
    std::uint64_t master_seed = 0;
    std::vector<CellStatus> cells;
    std::vector<FileRecord> files;

    bool all_ok() const noexcept;
    std::string to_json() const;
};

/// Writes `content` to directory/name and returns its inventory record.
FileRecord write_output(const std::filesystem::path& directory, const std::string& name, const std::string& content);

std::string library_version();

}  // namespace alloylab

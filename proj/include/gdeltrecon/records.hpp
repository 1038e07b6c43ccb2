#pragma once

#include <chrono>
#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <regex>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

namespace gdeltrecon {

using Timestamp = std::chrono::sys_seconds;

/// One entry of the GDELT Web News NGrams 3.0 dataset.
struct NgramRecord {
    std::optional<Timestamp> date;
    std::string ngram;
    std::string lang;
    int lang_type = 1;  // 1 = space-segmented, 2 = scriptio continua
    int pos = 0;        // approximate article position, 0..100
    std::string pre;
    std::string post;
    std::string url;

    friend bool operator==(const NgramRecord&, const NgramRecord&) = default;
};

struct ParseDiagnostics {
    std::size_t lines_read = 0;
    std::size_t records_ok = 0;
    std::size_t lines_malformed = 0;
    std::size_t records_type2_skipped = 0;
    std::size_t records_filtered = 0;
    // Informational, not part of the line accounting.
    std::size_t pos_clamped = 0;
    std::size_t dates_unparsed = 0;

    ParseDiagnostics& operator+=(const ParseDiagnostics& other);
    friend bool operator==(const ParseDiagnostics&, const ParseDiagnostics&) = default;
};

/// JSON key for each record field. Defaults follow the public dataset.
struct FieldMapping {
    std::string date = "date";
    std::string ngram = "ngram";
    std::string lang = "lang";
    std::string lang_type = "type";
    std::string pos = "pos";
    std::string pre = "pre";
    std::string post = "post";
    std::string url = "url";

    static FieldMapping from_json(const nlohmann::json& j);
};

/// Language allow-list and URL include/exclude patterns (ECMAScript regex, searched anywhere in the URL).
/// An empty allow-list or include list admits everything.
class RecordFilter {
public:
    RecordFilter() = default;
    RecordFilter(std::set<std::string> languages, const std::vector<std::string>& url_include,
                 const std::vector<std::string>& url_exclude);

    bool accepts(const NgramRecord& record) const;
    bool empty() const { return languages_.empty() && include_.empty() && exclude_.empty(); }

private:
    std::set<std::string> languages_;
    std::vector<std::regex> include_;
    std::vector<std::regex> exclude_;
};

struct ParseResult {
    std::vector<NgramRecord> records;
    ParseDiagnostics diagnostics;
};

/// Streams newline-delimited JSON records. gzip input is detected by its magic bytes.
/// Malformed lines are skipped and counted; blank lines are ignored. Throws IoError if the
/// stream itself cannot be read or decompressed.
ParseResult parse_records(std::istream& in, const RecordFilter& filter = {},
                          const FieldMapping& fields = {});

ParseResult parse_records_file(const std::filesystem::path& path, const RecordFilter& filter = {},
                               const FieldMapping& fields = {});

/// Parses a single line. Returns nullopt for malformed input; type-2 and filtering are not applied.
std::optional<NgramRecord> parse_record_line(std::string_view line, const FieldMapping& fields = {},
                                             bool* pos_clamped = nullptr,
                                             bool* date_unparsed = nullptr);

nlohmann::json record_to_json(const NgramRecord& record, const FieldMapping& fields = {});

/// Partition by URL; each group keeps input order. Keys iterate in ascending URL order.
std::map<std::string, std::vector<NgramRecord>> group_by_url(std::vector<NgramRecord> records);

std::optional<Timestamp> parse_timestamp(std::string_view text);
std::string format_timestamp(Timestamp ts);

}  // namespace gdeltrecon

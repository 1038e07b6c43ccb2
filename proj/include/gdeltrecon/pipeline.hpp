#pragma once

#include <chrono>
#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "gdeltrecon/assembly.hpp"
#include "gdeltrecon/fetch.hpp"
#include "gdeltrecon/records.hpp"
#include "gdeltrecon/shredder.hpp"
#include "gdeltrecon/similarity.hpp"

namespace gdeltrecon {

enum class ExitCode : int {
    ok = 0,
    failure = 1,
    config_error = 2,
    empty_input = 3,
    io_error = 4,
};

struct ReconstructedArticle {
    std::string url;
    std::string lang;
    std::optional<Timestamp> date_first_seen;
    std::string text;
    std::size_t fragments_total = 0;
    std::size_t fragments_used = 0;
    std::size_t fragments_unanchored = 0;
    std::size_t wraparound_applied = 0;

    friend bool operator==(const ReconstructedArticle&, const ReconstructedArticle&) = default;
};

nlohmann::ordered_json article_to_json(const ReconstructedArticle& article);
ReconstructedArticle article_from_json(const nlohmann::json& j);

struct FetchWindow {
    Timestamp start;
    Timestamp end;
};

struct RunConfig {
    AssemblyConfig assembly;
    std::set<std::string> languages;
    std::vector<std::string> url_include;
    std::vector<std::string> url_exclude;
    int workers = 1;
    std::vector<std::filesystem::path> inputs;
    std::optional<FetchWindow> fetch_window;
    std::filesystem::path output;
    std::string fetch_template{kDefaultFetchTemplate};
    std::filesystem::path fetch_dir = "gdelt-downloads";
    int fetch_attempts = 3;
    std::chrono::milliseconds fetch_backoff{1000};
    FieldMapping fields;

    /// Throws ConfigError on out-of-range values or missing inputs.
    void validate() const;
    RecordFilter make_filter() const;
};

/// Reads a JSON config file. Keys absent from the file keep their defaults.
RunConfig load_run_config(const std::filesystem::path& path);
RunConfig run_config_from_json(const nlohmann::json& j);

/// Fragments, artifact stripping, assembly and dedup for one URL group.
/// nullopt when no fragment survives.
std::optional<ReconstructedArticle> reconstruct_article(const std::vector<NgramRecord>& records,
                                                        const AssemblyConfig& config);

struct SkippedGroup {
    std::string url;
    std::string reason;
};

struct GroupResults {
    std::vector<ReconstructedArticle> articles;  // ascending URL
    std::vector<SkippedGroup> skipped;
};

using UrlGroups = std::map<std::string, std::vector<NgramRecord>>;

/// URL groups reconstructed over an OpenMP pool of `workers` threads. Output order is the map's
/// URL order regardless of worker count; a throwing group is reported in `skipped`.
GroupResults reconstruct_groups(const UrlGroups& groups, const AssemblyConfig& config, int workers);
/// Single-threaded reference for reconstruct_groups.
GroupResults reconstruct_groups_serial(const UrlGroups& groups, const AssemblyConfig& config);

void write_corpus(std::ostream& out, const std::vector<ReconstructedArticle>& articles);
std::vector<ReconstructedArticle> read_corpus(const std::filesystem::path& path);

struct ReferenceText {
    std::string url;
    std::string text;
};
/// NDJSON of {"url", "text"}.
std::vector<ReferenceText> read_references(const std::filesystem::path& path);

struct RunSummary {
    std::size_t input_files = 0;
    std::size_t records = 0;
    std::size_t groups = 0;
    std::size_t articles = 0;
    std::size_t fragments_total = 0;
    std::size_t fragments_unanchored = 0;
    std::vector<SkippedGroup> skipped;
    ParseDiagnostics diagnostics;
    std::chrono::milliseconds wall{0};

    std::string describe() const;
};

/// parse -> filter -> group -> reconstruct -> write config.output (NDJSON sorted by URL).
/// Downloads the fetch window first when one is configured. Throws EmptyInputError when no
/// records survive filtering, IoError on file failures.
RunSummary reconstruct_command(const RunConfig& config);

struct ValidateOptions {
    std::vector<double> thresholds = kDefaultJaccardThresholds;
    int workers = 1;
    std::optional<std::filesystem::path> table_out;
    std::optional<std::filesystem::path> json_out;
};

/// Joins corpus and references on exact URL, scores the matched pairs, writes the report files.
SimilarityReport validate_command(const std::filesystem::path& corpus, const std::filesystem::path& reference,
                                  const ValidateOptions& options);

struct ShredOptions {
    ShredConfig shred;
    std::string lang = "en";
    bool gzip = false;
};

/// Shreds every reference text into records NDJSON (optionally gzipped). Returns the record count.
std::size_t shred_command(const std::filesystem::path& reference, const std::filesystem::path& output,
                          const ShredOptions& options);

}  // namespace gdeltrecon

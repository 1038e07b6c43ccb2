#pragma once

#include <chrono>
#include <filesystem>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include "gdeltrecon/records.hpp"

namespace gdeltrecon {

/// Public web-ngrams file naming; %Y %m %d %H %M %S expand from the tick time (UTC).
inline constexpr std::string_view kDefaultFetchTemplate =
    "http://data.gdeltproject.org/gdeltv3/webngrams/%Y%m%d%H%M%S.webngrams.json.gz";

inline constexpr std::chrono::minutes kTickInterval{15};

/// Every 15-minute tick in [start, end] after rounding start down and end up to the grid.
/// Throws ConfigError if start > end.
std::vector<Timestamp> fetch_ticks(Timestamp start, Timestamp end);

/// Expands %Y %m %d %H %M %S and %% in the template. Unknown % sequences are left untouched.
std::string expand_template(std::string_view url_template, Timestamp tick);

struct FetchOptions {
    std::string url_template{kDefaultFetchTemplate};
    std::filesystem::path dest;
    int max_attempts = 3;
    std::chrono::milliseconds initial_backoff{1000};  // doubled after each failed attempt
    std::chrono::seconds timeout{60};
    std::function<void(const std::string&)> warn;    // defaults to stderr
};

struct FetchResult {
    std::vector<std::filesystem::path> files;  // in tick order
    std::size_t attempts = 0;                  // HTTP requests issued
    std::size_t missing = 0;                   // ticks answered with 404
    std::size_t failed = 0;                    // ticks that exhausted retries or hit another 4xx
};

/// Downloads one file per tick into options.dest. Missing and failed ticks are skipped with a
/// warning. Throws IoError if dest cannot be created or written.
FetchResult fetch_window(Timestamp start, Timestamp end, const FetchOptions& options);

}  // namespace gdeltrecon

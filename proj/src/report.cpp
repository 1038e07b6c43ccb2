#include <charconv>
#include <cmath>
#include <iomanip>
#include <sstream>

#include <json.hpp>

#include "gdeltrecon/similarity.hpp"

namespace gdeltrecon {

namespace {

// Shortest representation that round-trips.
std::string shortest(double v) {
    char buf[64];
    const auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return ec == std::errc{} ? std::string(buf, end) : std::to_string(v);
}

nlohmann::json optional_number(const std::optional<double>& v) {
    return v ? nlohmann::json(*v) : nlohmann::json(nullptr);
}

}  // namespace

std::string ReportColumn::label() const {
    if (!jaccard_threshold) return "No Filter";
    return ">" + shortest(std::round(*jaccard_threshold * 1e6) / 1e4) + "%";
}

std::string ReportColumn::filter_key() const {
    if (!jaccard_threshold) return "none";
    return ">" + shortest(*jaccard_threshold);
}

std::string render_table(const SimilarityReport& report) {
    constexpr int kMetricWidth = 28;
    constexpr int kCellWidth = 22;
    std::ostringstream out;
    out << std::left << std::setw(kMetricWidth) << "Metric" << "Common tokens (%)\n";
    out << std::left << std::setw(kMetricWidth) << "";
    for (const auto& col : report.columns) out << std::right << std::setw(kCellWidth) << col.label();
    out << '\n';

    auto metric_row = [&](const char* name, auto mean_of) {
        out << std::left << std::setw(kMetricWidth) << name;
        for (const auto& col : report.columns) {
            const std::optional<double> mean = mean_of(col);
            out << std::right << std::setw(kCellWidth) << (mean ? shortest(*mean) : std::string("-"));
        }
        out << '\n';
    };
    metric_row("Levenshtein Similarity", [](const ReportColumn& c) { return c.levenshtein_mean; });
    metric_row("SequenceMatcher Similarity", [](const ReportColumn& c) { return c.sequence_matcher_mean; });

    out << std::left << std::setw(kMetricWidth) << "Pairs";
    for (const auto& col : report.columns) out << std::right << std::setw(kCellWidth) << col.pair_count;
    out << '\n';
    out << "matched=" << report.matched << " unmatched_left=" << report.unmatched_left
        << " unmatched_right=" << report.unmatched_right << '\n';
    return out.str();
}

std::string render_json(const SimilarityReport& report) {
    nlohmann::json j;
    j["columns"] = nlohmann::json::array();
    for (const char* metric : {"levenshtein", "sequence_matcher"}) {
        const bool lev = std::string_view(metric) == "levenshtein";
        for (const auto& col : report.columns) {
            j["columns"].push_back({{"metric", metric},
                                    {"filter", col.filter_key()},
                                    {"mean", optional_number(lev ? col.levenshtein_mean : col.sequence_matcher_mean)},
                                    {"pair_count", col.pair_count}});
        }
    }
    j["pairs"] = nlohmann::json::array();
    for (const auto& r : report.rows) {
        j["pairs"].push_back({{"url", r.url},
                              {"levenshtein_similarity", r.levenshtein},
                              {"sequence_matcher_similarity", r.sequence_matcher},
                              {"jaccard", r.jaccard}});
    }
    j["matched"] = report.matched;
    j["unmatched_left"] = report.unmatched_left;
    j["unmatched_right"] = report.unmatched_right;
    return j.dump(2) + "\n";
}

}  // namespace gdeltrecon

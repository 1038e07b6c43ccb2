#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace gdeltrecon {

/// Text after cleaning: NFKC, lowercase, non-alphanumerics turned into spaces, spaces collapsed.
/// Lengths used by the metrics are code point counts.
struct NormalizedText {
    std::string text;            // UTF-8
    std::u32string codepoints;   // same text, decoded
    std::vector<std::string> tokens;
};

NormalizedText preprocess(std::string_view raw);

/// Decodes UTF-8; invalid sequences become U+FFFD.
std::u32string to_codepoints(std::string_view utf8);

/// Minimum insertions, deletions and substitutions (per code point) turning a into b.
/// Bit-parallel over 64-row blocks, O(ceil(min(|a|,|b|)/64) * max(|a|,|b|)).
std::size_t levenshtein_distance(std::u32string_view a, std::u32string_view b);
std::size_t levenshtein_distance(std::string_view a, std::string_view b);

/// 1 - distance / (|a| + |b|); 1 when both are empty.
double levenshtein_similarity(std::u32string_view a, std::u32string_view b);
double levenshtein_similarity(std::string_view a, std::string_view b);

struct SequenceMatchStats {
    std::size_t matching_chars = 0;  // M
    std::size_t total_chars = 0;     // TC = |a| + |b|
};

struct MatchingBlock {
    std::size_t a_start;
    std::size_t b_start;
    std::size_t size;

    friend bool operator==(const MatchingBlock&, const MatchingBlock&) = default;
};

struct SequenceMatch {
    double ratio = 1.0;  // 2M / TC, 1 when both are empty
    SequenceMatchStats stats;
};

/// Longest common block in a[alo, ahi) x b[blo, bhi): earliest start in a, then earliest in b.
MatchingBlock find_longest_match(std::u32string_view a, std::u32string_view b, std::size_t alo, std::size_t ahi,
                                 std::size_t blo, std::size_t bhi);

/// Recursive longest-block decomposition (no junk heuristics), blocks sorted by position.
std::vector<MatchingBlock> matching_blocks(std::u32string_view a, std::u32string_view b);

SequenceMatch sequence_matcher_similarity(std::u32string_view a, std::u32string_view b);
SequenceMatch sequence_matcher_similarity(std::string_view a, std::string_view b);

/// |A n B| / |A u B| over token sets; 1 when both are empty.
double jaccard_similarity(std::span<const std::string> a, std::span<const std::string> b);

struct TextPair {
    std::string reconstructed;
    std::string reference;
    std::string url;
};

struct PairScore {
    std::string url;
    double levenshtein = 0;
    double sequence_matcher = 0;
    double jaccard = 0;
};

struct ReportColumn {
    std::optional<double> jaccard_threshold;  // nullopt = no filter
    std::size_t pair_count = 0;
    std::optional<double> levenshtein_mean;   // nullopt when pair_count == 0
    std::optional<double> sequence_matcher_mean;

    std::string label() const;      // "No Filter", ">60%"
    std::string filter_key() const; // "none", ">0.6"
};

struct SimilarityReport {
    std::vector<PairScore> rows;
    std::vector<ReportColumn> columns;  // first is unfiltered
    // Join bookkeeping filled in by the validate command.
    std::size_t matched = 0;
    std::size_t unmatched_left = 0;
    std::size_t unmatched_right = 0;
};

inline const std::vector<double> kDefaultJaccardThresholds{0.6, 0.7, 0.8};

/// Scores each pair on preprocessed text. OpenMP across pairs; results are in input order.
std::vector<PairScore> score_pairs(std::span<const TextPair> pairs, int workers = 1);
/// Single-threaded reference for score_pairs.
std::vector<PairScore> score_pairs_serial(std::span<const TextPair> pairs);

/// Aggregates rows into the unfiltered column plus one column per threshold (strict jaccard > t).
/// Sums run in input order.
SimilarityReport build_report(std::vector<PairScore> rows, std::span<const double> thresholds);

SimilarityReport validate_corpus(std::span<const TextPair> pairs,
                                 std::span<const double> thresholds = kDefaultJaccardThresholds,
                                 int workers = 1);

/// Aligned text table: one row per metric, one column per filter, then pair counts.
std::string render_table(const SimilarityReport& report);
/// {"columns":[{metric, filter, mean, pair_count}...], "pairs":[...], matched/unmatched counts}
std::string render_json(const SimilarityReport& report);

}  // namespace gdeltrecon

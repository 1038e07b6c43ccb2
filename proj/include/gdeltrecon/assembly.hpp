#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "gdeltrecon/fragments.hpp"

namespace gdeltrecon {

struct AssemblyConfig {
    std::size_t min_overlap = 3;  // words
    int pos_window = 10;          // max |fragment.pos - end pos| for a merge
    std::size_t min_dup_run = 5;  // shortest adjacent repeat the dedup pass collapses

    /// Throws ConfigError when a field is out of range.
    void validate() const;
};

/// The evolving reconstruction of one article.
struct ArticleDraft {
    std::vector<std::string> words;
    int head_pos = 0;
    int tail_pos = 0;
    std::size_t fragments_used = 0;
    std::size_t fragments_unanchored = 0;
};

enum class MergeMode { none, append, prepend };

struct Overlap {
    MergeMode mode = MergeMode::none;
    std::size_t length = 0;

    friend bool operator==(const Overlap&, const Overlap&) = default;
};

/// Emitted once per placement: seed, overlap merges, and unanchored flushes (mode none).
struct MergeEvent {
    std::size_t source_index;
    int fragment_pos;
    MergeMode mode;
    std::size_t overlap;
    int head_pos_before;
    int tail_pos_before;
};
using MergeObserver = std::function<void(const MergeEvent&)>;

/// Lowest pos, then most words, then lowest source_index. Throws EmptyInputError on an empty list.
const Fragment& select_seed(std::span<const Fragment> fragments);

/// Longest exact word overlap of the fragment against either end of the draft, each end gated by
/// pos_window. Greater length wins; ties go to append.
Overlap best_overlap(const ArticleDraft& draft, const Fragment& fragment, const AssemblyConfig& config);

/// Greedy reconstruction: seed, then repeatedly merge the unplaced fragment with the globally largest
/// overlap (>= min_overlap; ties by lower pos, then lower source_index). Leftovers are appended in
/// (pos, source_index) order and counted as unanchored.
ArticleDraft assemble(std::span<const Fragment> fragments, const AssemblyConfig& config,
                      const MergeObserver& observer = {});

/// Collapses adjacent duplicated runs of at least min_dup_run words, leftmost first and longest
/// at that position, until none remain.
std::vector<std::string> deduplicate(std::vector<std::string> words, const AssemblyConfig& config);

}  // namespace gdeltrecon

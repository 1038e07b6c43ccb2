#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "gdeltrecon/records.hpp"

namespace gdeltrecon {

/// Whitespace-normalized word sequence centered on one unigram.
struct Fragment {
    std::vector<std::string> words;  // non-empty, no token contains whitespace
    int pos = 0;
    std::size_t source_index = 0;    // ordinal of the originating record within its URL group

    std::string text() const;
    friend bool operator==(const Fragment&, const Fragment&) = default;
};

/// Splits on ASCII whitespace, dropping empty tokens.
std::vector<std::string> split_words(std::string_view text);
std::string join_words(const std::vector<std::string>& words);

/// pre ++ ngram ++ post, whitespace-collapsed. nullopt if nothing remains.
std::optional<Fragment> build_fragment(const NgramRecord& record, std::size_t source_index);

/// Records positioned before this value may carry end-of-article text in front of a " / ".
inline constexpr int kWraparoundPosLimit = 20;

/// If pos < 20 and a standalone "/" token follows at least one word, drops everything up to and
/// including the first such token. Applied once. nullopt when nothing follows the separator.
std::optional<Fragment> strip_wraparound_artifact(Fragment fragment);

}  // namespace gdeltrecon

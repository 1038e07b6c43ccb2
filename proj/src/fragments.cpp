#include "gdeltrecon/fragments.hpp"

#include <algorithm>
#include <cctype>

namespace gdeltrecon {

std::string Fragment::text() const { return join_words(words); }

std::vector<std::string> split_words(std::string_view text) {
    std::vector<std::string> out;
    std::size_t i = 0;
    while (i < text.size()) {
        while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
        const std::size_t start = i;
        while (i < text.size() && !std::isspace(static_cast<unsigned char>(text[i]))) ++i;
        if (i > start) out.emplace_back(text.substr(start, i - start));
    }
    return out;
}

std::string join_words(const std::vector<std::string>& words) {
    std::string out;
    std::size_t total = words.empty() ? 0 : words.size() - 1;
    for (const auto& w : words) total += w.size();
    out.reserve(total);
    for (std::size_t i = 0; i < words.size(); ++i) {
        if (i) out.push_back(' ');
        out += words[i];
    }
    return out;
}

std::optional<Fragment> build_fragment(const NgramRecord& record, std::size_t source_index) {
    Fragment f;
    f.pos = record.pos;
    f.source_index = source_index;
    for (const std::string_view part : {std::string_view(record.pre), std::string_view(record.ngram),
                                        std::string_view(record.post)}) {
        auto words = split_words(part);
        std::move(words.begin(), words.end(), std::back_inserter(f.words));
    }
    if (f.words.empty()) {
        return std::nullopt;
    }
    return f;
}

std::optional<Fragment> strip_wraparound_artifact(Fragment fragment) {
    if (fragment.pos >= kWraparoundPosLimit || fragment.words.size() < 2) {
        return fragment;
    }
    // " / " in the single-space joined text is a "/" token with a word before it. A trailing
    // separator still counts: whatever followed it was trimmed away.
    const auto sep = std::find(fragment.words.begin() + 1, fragment.words.end(), "/");
    if (sep == fragment.words.end()) {
        return fragment;
    }
    fragment.words.erase(fragment.words.begin(), sep + 1);
    if (fragment.words.empty()) {
        return std::nullopt;
    }
    return fragment;
}

}  // namespace gdeltrecon

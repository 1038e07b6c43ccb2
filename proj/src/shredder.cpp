#include "gdeltrecon/shredder.hpp"

#include <algorithm>
#include <random>
#include <unordered_set>

#include "gdeltrecon/errors.hpp"
#include "gdeltrecon/fragments.hpp"

namespace gdeltrecon {

void ShredConfig::validate() const {
    if (window < 1) {
        throw ConfigError("shred window must be >= 1");
    }
    if (!(drop_rate >= 0.0 && drop_rate < 1.0)) {
        throw ConfigError("drop_rate must lie in [0, 1)");
    }
}

int decile_pos(std::size_t index, std::size_t word_count) {
    return static_cast<int>((10 * index) / word_count) * 10;
}

std::vector<NgramRecord> shred(std::string_view text, const ShredConfig& config, const std::string& url,
                               const std::string& lang) {
    config.validate();
    const auto words = split_words(text);
    if (words.empty()) {
        throw EmptyInputError("cannot shred empty text");
    }
    const std::size_t n = words.size();

    auto join_range = [&](std::size_t from, std::size_t to) {
        std::string out;
        for (std::size_t i = from; i < to; ++i) {
            if (i > from) out.push_back(' ');
            out += words[i];
        }
        return out;
    };

    std::mt19937_64 rng(config.seed);
    std::bernoulli_distribution drop(config.drop_rate);
    std::unordered_set<std::string_view> seen;

    std::vector<NgramRecord> records;
    records.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        if (config.mode == ShredMode::distinct_first && !seen.insert(words[i]).second) {
            continue;
        }
        if (drop(rng)) continue;

        NgramRecord r;
        r.ngram = words[i];
        r.lang = lang;
        r.lang_type = 1;
        r.pos = decile_pos(i, n);
        r.pre = join_range(i > config.window ? i - config.window : 0, i);
        r.post = join_range(i + 1, std::min(n, i + config.window + 1));
        r.url = url;
        records.push_back(std::move(r));
    }
    return records;
}

ShredMode parse_shred_mode(std::string_view name) {
    if (name == "all_occurrences" || name == "all") return ShredMode::all_occurrences;
    if (name == "distinct_first" || name == "distinct") return ShredMode::distinct_first;
    throw ConfigError("unknown shred mode '" + std::string(name) + "'");
}

std::string_view to_string(ShredMode mode) {
    return mode == ShredMode::all_occurrences ? "all_occurrences" : "distinct_first";
}

}  // namespace gdeltrecon

#pragma once

#include <cstdint>
#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "gdeltrecon/records.hpp"

namespace gdeltrecon {

enum class ShredMode {
    all_occurrences,  // one record per word position
    distinct_first,   // one record per distinct token, at its first occurrence
};

struct ShredConfig {
    std::size_t window = 7;
    ShredMode mode = ShredMode::all_occurrences;
    double drop_rate = 0.0;  // fraction of records withheld, in [0, 1)
    std::uint64_t seed = 0;

    void validate() const;
};

/// floor(10 * index / word_count) * 10
int decile_pos(std::size_t index, std::size_t word_count);

/// Synthetic GDELT-style records for a known text. Throws EmptyInputError if the text has no words.
std::vector<NgramRecord> shred(std::string_view text, const ShredConfig& config, const std::string& url,
                               const std::string& lang = "en");

ShredMode parse_shred_mode(std::string_view name);
std::string_view to_string(ShredMode mode);

}  // namespace gdeltrecon

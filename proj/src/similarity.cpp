#include "gdeltrecon/similarity.hpp"

#include <unicode/normalizer2.h>
#include <unicode/uchar.h>
#include <unicode/unistr.h>
#include <unicode/utf8.h>
#include <unicode/locid.h>
#include <omp.h>

#include <algorithm>
#include <array>
#include <cstdint>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>

#include "gdeltrecon/fragments.hpp"

namespace gdeltrecon {

std::u32string to_codepoints(std::string_view utf8) {
    std::u32string out;
    out.reserve(utf8.size());
    const auto* s = reinterpret_cast<const uint8_t*>(utf8.data());
    const auto length = static_cast<int32_t>(utf8.size());
    int32_t i = 0;
    while (i < length) {
        UChar32 c;
        U8_NEXT(s, i, length, c);
        out.push_back(c < 0 ? U'\uFFFD' : static_cast<char32_t>(c));
    }
    return out;
}

namespace {

std::string to_utf8(std::u32string_view cps) {
    std::string out;
    out.reserve(cps.size());
    for (const char32_t c : cps) {
        uint8_t buf[U8_MAX_LENGTH];
        int32_t n = 0;
        U8_APPEND_UNSAFE(buf, n, static_cast<UChar32>(c));
        out.append(reinterpret_cast<const char*>(buf), static_cast<std::size_t>(n));
    }
    return out;
}

}  // namespace

NormalizedText preprocess(std::string_view raw) {
    UErrorCode status = U_ZERO_ERROR;
    const icu::Normalizer2* nfkc = icu::Normalizer2::getNFKCInstance(status);
    if (U_FAILURE(status)) {
        throw std::runtime_error("ICU NFKC normalizer unavailable");
    }
    icu::UnicodeString us = icu::UnicodeString::fromUTF8(icu::StringPiece(raw.data(), static_cast<int32_t>(raw.size())));
    icu::UnicodeString normalized = nfkc->normalize(us, status);
    if (U_FAILURE(status)) {
        throw std::runtime_error("ICU normalization failed");
    }
    normalized.toLower(icu::Locale::getRoot());

    NormalizedText out;
    std::u32string& cps = out.codepoints;
    cps.reserve(static_cast<std::size_t>(normalized.length()));
    bool pending_space = false;
    for (int32_t i = 0; i < normalized.length();) {
        const UChar32 c = normalized.char32At(i);
        i += U16_LENGTH(c);
        if (u_isalnum(c)) {
            if (pending_space && !cps.empty()) cps.push_back(U' ');
            pending_space = false;
            cps.push_back(static_cast<char32_t>(c));
        } else {
            pending_space = true;
        }
    }
    out.text = to_utf8(cps);
    out.tokens = split_words(out.text);
    return out;
}

// ---------------------------------------------------------------------------
// Levenshtein: Myers/Hyyro bit-vector recurrence, blocked by 64 pattern rows.

std::size_t levenshtein_distance(std::u32string_view a, std::u32string_view b) {
    if (a.size() > b.size()) std::swap(a, b);
    // a is the pattern (rows), b the text (columns).
    const std::size_t m = a.size();
    if (m == 0) return b.size();

    constexpr std::size_t kWord = 64;
    const std::size_t blocks = (m + kWord - 1) / kWord;

    // Per-character match masks. Latin-1 goes through a direct table.
    std::array<int32_t, 256> small_slot;
    small_slot.fill(-1);
    std::unordered_map<char32_t, int32_t> big_slot;
    std::vector<uint64_t> peq;
    auto slot_for = [&](char32_t c, bool create) -> int32_t {
        int32_t* slot = nullptr;
        if (c < 256) {
            slot = &small_slot[c];
        } else if (auto it = big_slot.find(c); it != big_slot.end()) {
            slot = &it->second;
        } else if (create) {
            slot = &big_slot.emplace(c, -1).first->second;
        } else {
            return -1;
        }
        if (*slot < 0 && create) {
            *slot = static_cast<int32_t>(peq.size() / blocks);
            peq.resize(peq.size() + blocks, 0);
        }
        return *slot;
    };
    for (std::size_t i = 0; i < m; ++i) {
        const auto s = static_cast<std::size_t>(slot_for(a[i], true));
        peq[s * blocks + i / kWord] |= uint64_t{1} << (i % kWord);
    }

    std::vector<uint64_t> pv(blocks, ~uint64_t{0});
    std::vector<uint64_t> mv(blocks, 0);
    const std::size_t last_bit = (m - 1) % kWord;
    std::size_t score = m;

    for (const char32_t c : b) {
        const int32_t s = slot_for(c, false);
        const uint64_t* eq_row = s < 0 ? nullptr : &peq[static_cast<std::size_t>(s) * blocks];
        int hin = 1;  // D[0][j] - D[0][j-1]
        for (std::size_t blk = 0; blk < blocks; ++blk) {
            uint64_t eq = eq_row ? eq_row[blk] : 0;
            const uint64_t pvb = pv[blk];
            const uint64_t mvb = mv[blk];
            const uint64_t hin_neg = hin < 0 ? 1 : 0;
            const uint64_t hin_pos = hin > 0 ? 1 : 0;

            const uint64_t xv = eq | mvb;
            eq |= hin_neg;
            const uint64_t xh = (((eq & pvb) + pvb) ^ pvb) | eq;
            uint64_t ph = mvb | ~(xh | pvb);
            uint64_t mh = pvb & xh;

            if (blk + 1 == blocks) {
                score += (ph >> last_bit) & 1;
                score -= (mh >> last_bit) & 1;
            }
            hin = static_cast<int>(ph >> 63) - static_cast<int>(mh >> 63);

            ph = (ph << 1) | hin_pos;
            mh = (mh << 1) | hin_neg;
            pv[blk] = mh | ~(xv | ph);
            mv[blk] = ph & xv;
        }
    }
    return score;
}

std::size_t levenshtein_distance(std::string_view a, std::string_view b) {
    return levenshtein_distance(std::u32string_view(to_codepoints(a)), std::u32string_view(to_codepoints(b)));
}

double levenshtein_similarity(std::u32string_view a, std::u32string_view b) {
    const std::size_t total = a.size() + b.size();
    if (total == 0) return 1.0;
    return 1.0 - static_cast<double>(levenshtein_distance(a, b)) / static_cast<double>(total);
}

double levenshtein_similarity(std::string_view a, std::string_view b) {
    return levenshtein_similarity(std::u32string_view(to_codepoints(a)), std::u32string_view(to_codepoints(b)));
}

// ---------------------------------------------------------------------------
// Ratcliff/Obershelp matching.

namespace {

class BlockFinder {
public:
    BlockFinder(std::u32string_view a, std::u32string_view b)
        : a_(a), b_(b), prev_(b.size() + 1, 0), cur_(b.size() + 1, 0) {
        for (std::size_t j = 0; j < b.size(); ++j) b2j_[b[j]].push_back(j);
    }

    MatchingBlock longest(std::size_t alo, std::size_t ahi, std::size_t blo, std::size_t bhi) {
        MatchingBlock best{alo, blo, 0};
        // prev_[j + 1] = length of the common block ending at (i - 1, j).
        for (std::size_t i = alo; i < ahi; ++i) {
            auto it = b2j_.find(a_[i]);
            if (it != b2j_.end()) {
                const auto& js = it->second;
                for (auto p = std::lower_bound(js.begin(), js.end(), blo); p != js.end() && *p < bhi; ++p) {
                    const std::size_t j = *p;
                    const std::size_t k = (j > blo ? prev_[j] : 0) + 1;
                    cur_[j + 1] = k;
                    touched_cur_.push_back(j + 1);
                    if (k > best.size) {
                        best = {i + 1 - k, j + 1 - k, k};
                    }
                }
            }
            for (const std::size_t idx : touched_prev_) prev_[idx] = 0;
            touched_prev_.clear();
            std::swap(prev_, cur_);
            std::swap(touched_prev_, touched_cur_);
        }
        for (const std::size_t idx : touched_prev_) prev_[idx] = 0;
        touched_prev_.clear();
        return best;
    }

private:
    std::u32string_view a_;
    std::u32string_view b_;
    std::unordered_map<char32_t, std::vector<std::size_t>> b2j_;
    std::vector<std::size_t> prev_;
    std::vector<std::size_t> cur_;
    std::vector<std::size_t> touched_prev_;
    std::vector<std::size_t> touched_cur_;
};

}  // namespace

MatchingBlock find_longest_match(std::u32string_view a, std::u32string_view b, std::size_t alo, std::size_t ahi,
                                 std::size_t blo, std::size_t bhi) {
    BlockFinder finder(a, b);
    return finder.longest(alo, ahi, blo, bhi);
}

std::vector<MatchingBlock> matching_blocks(std::u32string_view a, std::u32string_view b) {
    std::vector<MatchingBlock> blocks;
    if (a.empty() || b.empty()) return blocks;
    BlockFinder finder(a, b);
    struct Range {
        std::size_t alo, ahi, blo, bhi;
    };
    std::vector<Range> pending{{0, a.size(), 0, b.size()}};
    while (!pending.empty()) {
        const Range r = pending.back();
        pending.pop_back();
        const MatchingBlock m = finder.longest(r.alo, r.ahi, r.blo, r.bhi);
        if (m.size == 0) continue;
        blocks.push_back(m);
        if (r.alo < m.a_start && r.blo < m.b_start) {
            pending.push_back({r.alo, m.a_start, r.blo, m.b_start});
        }
        if (m.a_start + m.size < r.ahi && m.b_start + m.size < r.bhi) {
            pending.push_back({m.a_start + m.size, r.ahi, m.b_start + m.size, r.bhi});
        }
    }
    std::sort(blocks.begin(), blocks.end(),
              [](const MatchingBlock& x, const MatchingBlock& y) { return x.a_start < y.a_start; });
    return blocks;
}

SequenceMatch sequence_matcher_similarity(std::u32string_view a, std::u32string_view b) {
    SequenceMatch out;
    out.stats.total_chars = a.size() + b.size();
    for (const auto& blk : matching_blocks(a, b)) out.stats.matching_chars += blk.size;
    out.ratio = out.stats.total_chars == 0
                    ? 1.0
                    : 2.0 * static_cast<double>(out.stats.matching_chars) / static_cast<double>(out.stats.total_chars);
    return out;
}

SequenceMatch sequence_matcher_similarity(std::string_view a, std::string_view b) {
    return sequence_matcher_similarity(std::u32string_view(to_codepoints(a)), std::u32string_view(to_codepoints(b)));
}

double jaccard_similarity(std::span<const std::string> a, std::span<const std::string> b) {
    const std::unordered_set<std::string_view> sa(a.begin(), a.end());
    const std::unordered_set<std::string_view> sb(b.begin(), b.end());
    if (sa.empty() && sb.empty()) return 1.0;
    std::size_t common = 0;
    for (const auto& t : sa) common += sb.contains(t) ? 1 : 0;
    const std::size_t uni = sa.size() + sb.size() - common;
    return static_cast<double>(common) / static_cast<double>(uni);
}

namespace {

PairScore score_pair(const TextPair& pair) {
    const NormalizedText rec = preprocess(pair.reconstructed);
    const NormalizedText ref = preprocess(pair.reference);
    PairScore s;
    s.url = pair.url;
    s.levenshtein = levenshtein_similarity(rec.codepoints, ref.codepoints);
    s.sequence_matcher = sequence_matcher_similarity(rec.codepoints, ref.codepoints).ratio;
    s.jaccard = jaccard_similarity(rec.tokens, ref.tokens);
    return s;
}

}  // namespace

std::vector<PairScore> score_pairs_serial(std::span<const TextPair> pairs) {
    std::vector<PairScore> rows;
    rows.reserve(pairs.size());
    for (const auto& p : pairs) rows.push_back(score_pair(p));
    return rows;
}

std::vector<PairScore> score_pairs(std::span<const TextPair> pairs, int workers) {
    std::vector<PairScore> rows(pairs.size());
    const auto n = static_cast<std::ptrdiff_t>(pairs.size());
#pragma omp parallel for schedule(dynamic, 1) num_threads(std::max(workers, 1))
    for (std::ptrdiff_t i = 0; i < n; ++i) {
        rows[static_cast<std::size_t>(i)] = score_pair(pairs[static_cast<std::size_t>(i)]);
    }
    return rows;
}

SimilarityReport build_report(std::vector<PairScore> rows, std::span<const double> thresholds) {
    SimilarityReport report;
    report.rows = std::move(rows);
    report.columns.push_back({});
    for (const double t : thresholds) report.columns.push_back({t, 0, {}, {}});

    for (auto& col : report.columns) {
        double lev = 0;
        double seq = 0;
        for (const auto& r : report.rows) {
            if (col.jaccard_threshold && !(r.jaccard > *col.jaccard_threshold)) continue;
            lev += r.levenshtein;
            seq += r.sequence_matcher;
            ++col.pair_count;
        }
        if (col.pair_count > 0) {
            col.levenshtein_mean = lev / static_cast<double>(col.pair_count);
            col.sequence_matcher_mean = seq / static_cast<double>(col.pair_count);
        }
    }
    report.matched = report.rows.size();
    return report;
}

SimilarityReport validate_corpus(std::span<const TextPair> pairs, std::span<const double> thresholds, int workers) {
    return build_report(score_pairs(pairs, workers), thresholds);
}

}  // namespace gdeltrecon

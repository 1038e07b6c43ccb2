#include "gdeltrecon/assembly.hpp"

#include <algorithm>
#include <cstdint>
#include <cstdlib>
#include <deque>
#include <tuple>
#include <unordered_map>

#include "gdeltrecon/errors.hpp"

namespace gdeltrecon {

void AssemblyConfig::validate() const {
    if (min_overlap < 1) {
        throw ConfigError("min_overlap must be >= 1");
    }
    if (pos_window < 0 || pos_window > 100) {
        throw ConfigError("pos_window must lie in [0, 100]");
    }
    if (min_dup_run < 2) {
        throw ConfigError("min_dup_run must be >= 2");
    }
}

namespace {

bool seed_before(const Fragment& a, const Fragment& b) {
    if (a.pos != b.pos) return a.pos < b.pos;
    if (a.words.size() != b.words.size()) return a.words.size() > b.words.size();
    return a.source_index < b.source_index;
}

bool within_window(int a, int b, int window) { return std::abs(a - b) <= window; }

// Largest k with the last k of `left` equal to the first k of `right`.
template <typename Left, typename Right>
std::size_t boundary_overlap(const Left& left, const Right& right) {
    const std::size_t limit = std::min(left.size(), right.size());
    for (std::size_t k = limit; k >= 1; --k) {
        if (std::equal(left.end() - static_cast<std::ptrdiff_t>(k), left.end(), right.begin())) {
            return k;
        }
    }
    return 0;
}

using WordId = std::uint32_t;

class WordTable {
public:
    WordId intern(const std::string& w) {
        auto [it, inserted] = ids_.try_emplace(w, static_cast<WordId>(words_.size()));
        if (inserted) words_.push_back(w);
        return it->second;
    }
    const std::string& word(WordId id) const { return words_[id]; }

private:
    std::unordered_map<std::string, WordId> ids_;
    std::vector<std::string> words_;
};

// Polynomial hash over word ids; H(s) = sum s[i] * B^(len-1-i). Combined with the length so that
// prefixes of different lengths land in distinct buckets.
constexpr std::uint64_t kHashBase = 0x100000001b3ULL;

std::uint64_t bucket_key(std::uint64_t h, std::size_t k) {
    std::uint64_t x = h ^ (static_cast<std::uint64_t>(k) * 0x9e3779b97f4a7c15ULL);
    x ^= x >> 31;
    x *= 0xbf58476d1ce4e5b9ULL;
    x ^= x >> 29;
    return x;
}

struct IndexedFragment {
    const Fragment* fragment;
    std::vector<WordId> ids;
    bool placed = false;
};

// Candidate lookup for the greedy loop: for each k >= min_overlap, fragments keyed by their first k
// words and by their last k words.
class OverlapIndex {
public:
    OverlapIndex(const std::vector<IndexedFragment>& frags, std::size_t min_overlap) {
        for (std::size_t f = 0; f < frags.size(); ++f) {
            const auto& ids = frags[f].ids;
            const std::size_t len = ids.size();
            max_len_ = std::max(max_len_, len);
            std::uint64_t h = 0;
            for (std::size_t k = 1; k <= len; ++k) {
                h = h * kHashBase + (ids[k - 1] + 1);
                if (k >= min_overlap) by_prefix_[bucket_key(h, k)].push_back(static_cast<std::uint32_t>(f));
            }
            h = 0;
            std::uint64_t power = 1;
            for (std::size_t k = 1; k <= len; ++k) {
                h += (ids[len - k] + 1) * power;
                power *= kHashBase;
                if (k >= min_overlap) by_suffix_[bucket_key(h, k)].push_back(static_cast<std::uint32_t>(f));
            }
        }
    }

    std::size_t max_len() const { return max_len_; }

    const std::vector<std::uint32_t>* with_prefix(std::uint64_t h, std::size_t k) const {
        auto it = by_prefix_.find(bucket_key(h, k));
        return it == by_prefix_.end() ? nullptr : &it->second;
    }
    const std::vector<std::uint32_t>* with_suffix(std::uint64_t h, std::size_t k) const {
        auto it = by_suffix_.find(bucket_key(h, k));
        return it == by_suffix_.end() ? nullptr : &it->second;
    }

private:
    std::size_t max_len_ = 0;
    std::unordered_map<std::uint64_t, std::vector<std::uint32_t>> by_prefix_;
    std::unordered_map<std::uint64_t, std::vector<std::uint32_t>> by_suffix_;
};

}  // namespace

const Fragment& select_seed(std::span<const Fragment> fragments) {
    if (fragments.empty()) {
        throw EmptyInputError("no fragments to assemble");
    }
    return *std::min_element(fragments.begin(), fragments.end(), seed_before);
}

Overlap best_overlap(const ArticleDraft& draft, const Fragment& fragment, const AssemblyConfig& config) {
    std::size_t append = 0;
    std::size_t prepend = 0;
    if (within_window(fragment.pos, draft.tail_pos, config.pos_window)) {
        append = boundary_overlap(draft.words, fragment.words);
    }
    if (within_window(fragment.pos, draft.head_pos, config.pos_window)) {
        prepend = boundary_overlap(fragment.words, draft.words);
    }
    if (append == 0 && prepend == 0) {
        return {};
    }
    if (append >= prepend) {
        return {MergeMode::append, append};
    }
    return {MergeMode::prepend, prepend};
}

ArticleDraft assemble(std::span<const Fragment> fragments, const AssemblyConfig& config,
                      const MergeObserver& observer) {
    const Fragment& seed = select_seed(fragments);

    WordTable table;
    std::vector<IndexedFragment> frags;
    frags.reserve(fragments.size());
    for (const auto& f : fragments) {
        IndexedFragment entry{&f, {}, false};
        entry.ids.reserve(f.words.size());
        for (const auto& w : f.words) entry.ids.push_back(table.intern(w));
        frags.push_back(std::move(entry));
    }
    const OverlapIndex index(frags, config.min_overlap);

    auto notify = [&](const IndexedFragment& f, MergeMode mode, std::size_t k, const ArticleDraft& d) {
        if (observer) observer({f.fragment->source_index, f.fragment->pos, mode, k, d.head_pos, d.tail_pos});
    };

    ArticleDraft draft;
    std::deque<WordId> words;
    const auto seed_at = static_cast<std::size_t>(&seed - fragments.data());
    {
        auto& s = frags[seed_at];
        words.assign(s.ids.begin(), s.ids.end());
        draft.head_pos = draft.tail_pos = seed.pos;
        notify(s, MergeMode::none, 0, draft);
        s.placed = true;
        draft.fragments_used = 1;
    }

    // Ordering among equally long overlaps: lower pos, then lower source_index, then input order.
    auto rank = [&](std::uint32_t f) {
        return std::tuple(frags[f].fragment->pos, frags[f].fragment->source_index, f);
    };

    std::vector<std::uint64_t> tail_hash;
    std::vector<std::uint64_t> head_hash;
    while (draft.fragments_used < frags.size()) {
        const std::size_t max_k = std::min(index.max_len(), words.size());
        tail_hash.assign(max_k + 1, 0);
        head_hash.assign(max_k + 1, 0);
        std::uint64_t power = 1;
        for (std::size_t k = 1; k <= max_k; ++k) {
            tail_hash[k] = tail_hash[k - 1] + (words[words.size() - k] + 1) * power;
            power *= kHashBase;
            head_hash[k] = head_hash[k - 1] * kHashBase + (words[k - 1] + 1);
        }

        // Scanning k downward, the first length with any admissible candidate is the global maximum.
        std::int64_t best = -1;
        MergeMode best_mode = MergeMode::none;
        std::size_t best_k = 0;
        for (std::size_t k = max_k; k >= config.min_overlap && k >= 1 && best < 0; --k) {
            auto consider = [&](const std::vector<std::uint32_t>* bucket, MergeMode mode) {
                if (!bucket) return;
                for (const std::uint32_t f : *bucket) {
                    const auto& cand = frags[f];
                    if (cand.placed) continue;
                    const int end_pos = mode == MergeMode::append ? draft.tail_pos : draft.head_pos;
                    if (!within_window(cand.fragment->pos, end_pos, config.pos_window)) continue;
                    const bool match =
                        mode == MergeMode::append
                            ? std::equal(cand.ids.begin(), cand.ids.begin() + static_cast<std::ptrdiff_t>(k),
                                         words.end() - static_cast<std::ptrdiff_t>(k))
                            : std::equal(cand.ids.end() - static_cast<std::ptrdiff_t>(k), cand.ids.end(),
                                         words.begin());
                    if (!match) continue;
                    // A fragment reaching k at both ends prefers append, which is visited first.
                    if (best >= 0 && static_cast<std::uint32_t>(best) == f) continue;
                    if (best < 0 || rank(f) < rank(static_cast<std::uint32_t>(best))) {
                        best = f;
                        best_mode = mode;
                        best_k = k;
                    }
                }
            };
            consider(index.with_prefix(tail_hash[k], k), MergeMode::append);
            consider(index.with_suffix(head_hash[k], k), MergeMode::prepend);
        }
        if (best < 0) {
            break;
        }

        auto& chosen = frags[static_cast<std::size_t>(best)];
        notify(chosen, best_mode, best_k, draft);
        const int pos = chosen.fragment->pos;
        if (best_mode == MergeMode::append) {
            words.insert(words.end(), chosen.ids.begin() + static_cast<std::ptrdiff_t>(best_k), chosen.ids.end());
            draft.tail_pos = std::max(pos, draft.head_pos);
        } else {
            words.insert(words.begin(), chosen.ids.begin(), chosen.ids.end() - static_cast<std::ptrdiff_t>(best_k));
            draft.head_pos = std::min(pos, draft.tail_pos);
        }
        chosen.placed = true;
        ++draft.fragments_used;
    }

    if (draft.fragments_used < frags.size()) {
        std::vector<std::uint32_t> rest;
        for (std::uint32_t f = 0; f < frags.size(); ++f) {
            if (!frags[f].placed) rest.push_back(f);
        }
        std::sort(rest.begin(), rest.end(), [&](std::uint32_t a, std::uint32_t b) { return rank(a) < rank(b); });
        for (const std::uint32_t f : rest) {
            auto& leftover = frags[f];
            notify(leftover, MergeMode::none, 0, draft);
            words.insert(words.end(), leftover.ids.begin(), leftover.ids.end());
            draft.tail_pos = std::max(leftover.fragment->pos, draft.head_pos);
            leftover.placed = true;
            ++draft.fragments_used;
            ++draft.fragments_unanchored;
        }
    }

    draft.words.reserve(words.size());
    for (const WordId id : words) draft.words.push_back(table.word(id));
    return draft;
}

std::vector<std::string> deduplicate(std::vector<std::string> words, const AssemblyConfig& config) {
    const std::size_t min_run = std::max<std::size_t>(config.min_dup_run, 1);
    WordTable table;
    std::vector<WordId> ids;
    ids.reserve(words.size());
    for (const auto& w : words) ids.push_back(table.intern(w));

    bool changed = true;
    bool any_change = false;
    while (changed) {
        changed = false;
        const std::size_t n = ids.size();
        for (std::size_t i = 0; i + 2 * min_run <= n && !changed; ++i) {
            for (std::size_t k = (n - i) / 2; k >= min_run; --k) {
                const auto first = ids.begin() + static_cast<std::ptrdiff_t>(i);
                const auto second = first + static_cast<std::ptrdiff_t>(k);
                if (std::equal(first, second, second)) {
                    ids.erase(second, second + static_cast<std::ptrdiff_t>(k));
                    changed = true;
                    any_change = true;
                    break;
                }
            }
        }
    }
    if (!any_change) {
        return words;
    }
    std::vector<std::string> out;
    out.reserve(ids.size());
    for (const WordId id : ids) out.push_back(table.word(id));
    return out;
}

}  // namespace gdeltrecon

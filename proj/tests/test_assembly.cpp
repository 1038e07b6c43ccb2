#include <gtest/gtest.h>

#include <cstdlib>
#include <random>

#include "gdeltrecon/assembly.hpp"
#include "gdeltrecon/errors.hpp"
#include "gdeltrecon/shredder.hpp"
#include "support/corpus.hpp"
#include "support/oracles.hpp"

using namespace gdeltrecon;
using Words = std::vector<std::string>;

namespace {

Fragment frag(std::string_view text, int pos, std::size_t source_index = 0) {
    return Fragment{split_words(text), pos, source_index};
}

ArticleDraft draft_of(std::string_view text, int head_pos, int tail_pos) {
    ArticleDraft d;
    d.words = split_words(text);
    d.head_pos = head_pos;
    d.tail_pos = tail_pos;
    d.fragments_used = 1;
    return d;
}

std::vector<Fragment> fragments_from(const std::vector<NgramRecord>& records) {
    std::vector<Fragment> out;
    for (std::size_t i = 0; i < records.size(); ++i) {
        if (auto f = build_fragment(records[i], i)) out.push_back(std::move(*f));
    }
    return out;
}

}  // namespace

TEST(SelectSeed, MinimumPos) {
    const std::vector<Fragment> f{frag("a b", 30, 0), frag("c d", 0, 1), frag("e f", 50, 2)};
    EXPECT_EQ(select_seed(f).source_index, 1u);
}

TEST(SelectSeed, TieBreaksOnLengthThenIndex) {
    const std::vector<Fragment> f{frag("1 2 3 4 5 6 7 8", 0, 0), frag("1 2 3 4 5 6 7 8 9 10 11 12", 0, 1)};
    EXPECT_EQ(select_seed(f).words.size(), 12u);
    const std::vector<Fragment> g{frag("x y", 0, 5), frag("p q", 0, 2)};
    EXPECT_EQ(select_seed(g).source_index, 2u);
}

TEST(SelectSeed, SingleAndEmpty) {
    const std::vector<Fragment> one{frag("only", 40, 3)};
    EXPECT_EQ(select_seed(one), one[0]);
    EXPECT_THROW(select_seed({}), EmptyInputError);
}

TEST(BestOverlap, AppendByTwoWords) {
    const auto d = draft_of("the quick brown fox", 10, 10);
    const auto f = frag("brown fox jumps over", 10);
    const AssemblyConfig cfg;
    const Overlap expected{MergeMode::append, 2};
    EXPECT_EQ(oracle::brute_best_overlap(d, f, cfg), expected);
    EXPECT_EQ(best_overlap(d, f, cfg), expected);
}

TEST(BestOverlap, PosGateBlocksDistantFragment) {
    const auto d = draft_of("c d e", 50, 50);
    const auto f = frag("a b c", 0);
    EXPECT_EQ(best_overlap(d, f, AssemblyConfig{}), Overlap{});
    AssemblyConfig wide;
    wide.pos_window = 50;
    EXPECT_EQ(best_overlap(d, f, wide), (Overlap{MergeMode::prepend, 1}));
}

TEST(BestOverlap, NoSharedBoundary) {
    EXPECT_EQ(best_overlap(draft_of("x y", 0, 0), frag("p q", 0), AssemblyConfig{}), Overlap{});
}

TEST(BestOverlap, TiePrefersAppend) {
    // "a b" overlaps the draft tail by 1 and its head by 1.
    EXPECT_EQ(best_overlap(draft_of("b x a", 0, 0), frag("a b", 0), AssemblyConfig{}), (Overlap{MergeMode::append, 1}));
}

TEST(BestOverlapProperty, MatchesBruteForceScan) {
    std::mt19937_64 rng(21);
    const Words vocab{"a", "b", "c"};
    std::uniform_int_distribution<std::size_t> pick(0, vocab.size() - 1);
    std::uniform_int_distribution<int> len(1, 9);
    std::uniform_int_distribution<int> pos(0, 40);
    AssemblyConfig cfg;
    for (int i = 0; i < 3000; ++i) {
        ArticleDraft d;
        for (int k = len(rng); k > 0; --k) d.words.push_back(vocab[pick(rng)]);
        d.head_pos = pos(rng);
        d.tail_pos = d.head_pos + pos(rng) / 2;
        Fragment f;
        for (int k = len(rng); k > 0; --k) f.words.push_back(vocab[pick(rng)]);
        f.pos = pos(rng);
        ASSERT_EQ(best_overlap(d, f, cfg), oracle::brute_best_overlap(d, f, cfg));
    }
}

TEST(Assemble, SingleFragment) {
    const std::vector<Fragment> f{frag("just one fragment here", 20)};
    const auto d = assemble(f, AssemblyConfig{});
    EXPECT_EQ(d.words, f[0].words);
    EXPECT_EQ(d.fragments_used, 1u);
    EXPECT_EQ(d.fragments_unanchored, 0u);
}

TEST(Assemble, ShreddedTenWordsRoundTrip) {
    ShredConfig sc;
    sc.window = 2;
    const auto records = shred("a b c d e f g h i j", sc, "u");
    const auto d = assemble(fragments_from(records), AssemblyConfig{});
    EXPECT_EQ(d.words, split_words("a b c d e f g h i j"));
    EXPECT_EQ(d.fragments_unanchored, 0u);
    EXPECT_EQ(d.fragments_used, 10u);
}

TEST(Assemble, TwoFragmentMerge) {
    const std::vector<Fragment> f{frag("the quick brown fox", 0, 0), frag("brown fox jumps over", 10, 1)};
    AssemblyConfig cfg;
    cfg.min_overlap = 2;
    const auto d = assemble(f, cfg);
    EXPECT_EQ(d.words, split_words("the quick brown fox jumps over"));
    EXPECT_EQ(d.fragments_unanchored, 0u);
    EXPECT_EQ(oracle::naive_assemble(f, cfg).words, d.words);
}

TEST(Assemble, UnanchoredFragmentsAreAppendedInPosOrder) {
    const std::vector<Fragment> f{frag("a b c d", 0, 0), frag("zz yy", 30, 1), frag("q r", 20, 2), frag("c d e f", 0, 3)};
    AssemblyConfig cfg;
    cfg.min_overlap = 2;
    const auto d = assemble(f, cfg);
    EXPECT_EQ(d.words, split_words("a b c d e f q r zz yy"));
    EXPECT_EQ(d.fragments_unanchored, 2u);
    EXPECT_EQ(d.fragments_used, 4u);
    EXPECT_LE(d.head_pos, d.tail_pos);
}

TEST(Assemble, EmptyInputThrows) {
    EXPECT_THROW(assemble({}, AssemblyConfig{}), EmptyInputError);
}

TEST(AssembleProperty, IndexedGreedyMatchesNaiveGreedy) {
    // Small alphabets force many competing overlaps and ties.
    std::mt19937_64 rng(99);
    std::uniform_int_distribution<int> n_frags(1, 14);
    std::uniform_int_distribution<int> len(1, 8);
    std::uniform_int_distribution<int> pos10(0, 10);
    for (int round = 0; round < 1500; ++round) {
        const Words vocab = round % 2 ? Words{"a", "b"} : Words{"a", "b", "c", "d"};
        std::uniform_int_distribution<std::size_t> pick(0, vocab.size() - 1);
        AssemblyConfig cfg;
        cfg.min_overlap = 1 + static_cast<std::size_t>(round % 3);
        cfg.pos_window = round % 5 == 0 ? 100 : 10 * (round % 3);
        std::vector<Fragment> frags;
        for (int i = n_frags(rng); i > 0; --i) {
            Fragment f;
            for (int k = len(rng); k > 0; --k) f.words.push_back(vocab[pick(rng)]);
            f.pos = pos10(rng) * 10;
            f.source_index = static_cast<std::size_t>(round % 7 == 0 ? 0 : frags.size() * 3 % 11);
            frags.push_back(std::move(f));
        }
        const auto fast = assemble(frags, cfg);
        const auto slow = oracle::naive_assemble(frags, cfg);
        ASSERT_EQ(fast.words, slow.words) << "round " << round;
        ASSERT_EQ(fast.head_pos, slow.head_pos);
        ASSERT_EQ(fast.tail_pos, slow.tail_pos);
        ASSERT_EQ(fast.fragments_unanchored, slow.fragments_unanchored);
        ASSERT_EQ(fast.fragments_used, frags.size());
    }
}

TEST(AssembleProperty, ConservationAndPosGate) {
    std::mt19937_64 rng(1234);
    std::uniform_int_distribution<int> n_frags(2, 20);
    std::uniform_int_distribution<int> len(1, 10);
    std::uniform_int_distribution<int> pos(0, 100);
    const Words vocab{"a", "b", "c"};
    std::uniform_int_distribution<std::size_t> pick(0, vocab.size() - 1);
    for (int round = 0; round < 800; ++round) {
        AssemblyConfig cfg;
        cfg.min_overlap = 1 + static_cast<std::size_t>(round % 2);
        std::vector<Fragment> frags;
        std::size_t total_words = 0;
        for (int i = n_frags(rng); i > 0; --i) {
            Fragment f;
            for (int k = len(rng); k > 0; --k) f.words.push_back(vocab[pick(rng)]);
            f.pos = pos(rng);
            f.source_index = frags.size();
            total_words += f.words.size();
            frags.push_back(std::move(f));
        }
        std::size_t overlap_sum = 0;
        std::size_t events = 0;
        const auto d = assemble(frags, cfg, [&](const MergeEvent& e) {
            ++events;
            if (e.mode == MergeMode::append) {
                EXPECT_LE(std::abs(e.fragment_pos - e.tail_pos_before), cfg.pos_window);
            } else if (e.mode == MergeMode::prepend) {
                EXPECT_LE(std::abs(e.fragment_pos - e.head_pos_before), cfg.pos_window);
            }
            if (e.mode != MergeMode::none) {
                EXPECT_GE(e.overlap, cfg.min_overlap);
            }
            overlap_sum += e.overlap;
        });
        EXPECT_EQ(events, frags.size());
        EXPECT_EQ(d.fragments_used, frags.size());
        EXPECT_EQ(d.words.size(), total_words - overlap_sum);
        EXPECT_LE(d.head_pos, d.tail_pos);
        // Deterministic.
        EXPECT_EQ(assemble(frags, cfg).words, d.words);
    }
}

TEST(AssembleProperty, ShredRoundTripReproducesText) {
    corpus::Rng rng(77);
    std::uniform_int_distribution<std::size_t> n(10, 160);
    std::uniform_int_distribution<std::size_t> window(3, 8);
    const AssemblyConfig cfg;
    for (int round = 0; round < 150; ++round) {
        const auto words = corpus::random_words(rng, n(rng), round % 3 == 0 ? 60 : 5000);
        ShredConfig sc;
        sc.window = window(rng);
        const auto records = shred(corpus::join(words), sc, "u");
        const auto d = assemble(fragments_from(records), cfg);
        ASSERT_EQ(deduplicate(d.words, cfg), words) << "round " << round;
        EXPECT_EQ(d.fragments_unanchored, 0u);
    }
}

TEST(Deduplicate, CollapsesAdjacentRun) {
    const AssemblyConfig cfg;
    const Words in = split_words("a b c d e a b c d e f");
    const Words expected = split_words("a b c d e f");
    EXPECT_EQ(oracle::brute_deduplicate(in, 5), expected);
    EXPECT_EQ(deduplicate(in, cfg), expected);
}

TEST(Deduplicate, FixpointAndEmpty) {
    const AssemblyConfig cfg;
    const Words short_repeat = split_words("a b c d a b c d x");  // run of 4 < 5
    EXPECT_EQ(deduplicate(short_repeat, cfg), short_repeat);
    const Words distant = split_words("a b c d e x a b c d e");  // not adjacent
    EXPECT_EQ(deduplicate(distant, cfg), distant);
    EXPECT_TRUE(deduplicate({}, cfg).empty());
}

TEST(Deduplicate, PrefersLongestRunAtLeftmostPosition) {
    AssemblyConfig cfg;
    cfg.min_dup_run = 2;
    // At i=0 both k=2 ("a b a b") and k=4 ("a b a b a b a b") repeat; the longer one collapses first.
    const Words in = split_words("a b a b a b a b");
    EXPECT_EQ(deduplicate(in, cfg), split_words("a b"));
    EXPECT_EQ(oracle::brute_deduplicate(in, 2), split_words("a b"));
}

TEST(DeduplicateProperty, MatchesBruteForceAndIsIdempotent) {
    std::mt19937_64 rng(8);
    std::uniform_int_distribution<int> len(0, 40);
    for (int round = 0; round < 500; ++round) {
        const Words vocab = round % 2 ? Words{"a", "b"} : Words{"a", "b", "c"};
        std::uniform_int_distribution<std::size_t> pick(0, vocab.size() - 1);
        AssemblyConfig cfg;
        cfg.min_dup_run = 2 + static_cast<std::size_t>(round % 4);
        Words w;
        for (int k = len(rng); k > 0; --k) w.push_back(vocab[pick(rng)]);
        // Plant a duplicated run half of the time.
        if (round % 2 == 0 && w.size() > 6) {
            const std::size_t at = w.size() / 3;
            Words run(w.begin() + static_cast<long>(at), w.begin() + static_cast<long>(at + 5));
            w.insert(w.begin() + static_cast<long>(at + 5), run.begin(), run.end());
        }
        const Words once = deduplicate(w, cfg);
        ASSERT_EQ(once, oracle::brute_deduplicate(w, cfg.min_dup_run));
        ASSERT_LE(once.size(), w.size());
        ASSERT_EQ(deduplicate(once, cfg), once);
    }
}

TEST(AssemblyConfig, RejectsOutOfRangeValues) {
    AssemblyConfig c;
    EXPECT_NO_THROW(c.validate());
    c.min_overlap = 0;
    EXPECT_THROW(c.validate(), ConfigError);
    c = {};
    c.pos_window = 101;
    EXPECT_THROW(c.validate(), ConfigError);
    c = {};
    c.min_dup_run = 1;
    EXPECT_THROW(c.validate(), ConfigError);
}

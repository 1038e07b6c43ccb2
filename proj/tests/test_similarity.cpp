#include <gtest/gtest.h>

#include <json.hpp>
#include <random>

#include "gdeltrecon/similarity.hpp"
#include "support/corpus.hpp"
#include "support/oracles.hpp"

using namespace gdeltrecon;

namespace {

std::u32string random_u32(std::mt19937_64& rng, std::size_t n, const std::u32string& alphabet) {
    std::uniform_int_distribution<std::size_t> pick(0, alphabet.size() - 1);
    std::u32string s;
    for (std::size_t i = 0; i < n; ++i) s.push_back(alphabet[pick(rng)]);
    return s;
}

}  // namespace

TEST(Preprocess, LowercasesAndStripsPunctuation) {
    const auto n = preprocess("Hello, World!  It's 2024.");
    EXPECT_EQ(n.text, "hello world it s 2024");
    EXPECT_EQ(n.tokens, (std::vector<std::string>{"hello", "world", "it", "s", "2024"}));
    EXPECT_EQ(n.codepoints.size(), n.text.size());
}

TEST(Preprocess, CompatibilityNormalization) {
    EXPECT_EQ(preprocess("\xEF\xAC\x81nance").text, "finance");              // U+FB01 ligature
    EXPECT_EQ(preprocess("\xEF\xBC\xA1\xEF\xBC\xA2\xEF\xBC\xA3").text, "abc");  // fullwidth ABC
    EXPECT_EQ(preprocess("Caf\xC3\x89").codepoints, U"café");
}

TEST(Preprocess, EmptyAndPunctuationOnly) {
    EXPECT_EQ(preprocess("").text, "");
    EXPECT_EQ(preprocess(" ... --- !!! ").text, "");
    EXPECT_TRUE(preprocess("?!").tokens.empty());
}

TEST(Levenshtein, KittenSitting) {
    EXPECT_EQ(levenshtein_distance(std::string_view("kitten"), std::string_view("sitting")), 3u);
    EXPECT_DOUBLE_EQ(levenshtein_similarity(std::string_view("kitten"), std::string_view("sitting")), 1.0 - 3.0 / 13.0);
}

TEST(Levenshtein, EmptyCases) {
    EXPECT_EQ(levenshtein_distance(std::string_view(""), std::string_view("abc")), 3u);
    EXPECT_EQ(levenshtein_distance(std::string_view("abc"), std::string_view("")), 3u);
    EXPECT_DOUBLE_EQ(levenshtein_similarity(std::string_view(""), std::string_view("")), 1.0);
    EXPECT_DOUBLE_EQ(levenshtein_similarity(std::string_view("abc"), std::string_view("")), 0.0);
}

TEST(Levenshtein, CountsCodePointsNotBytes) {
    EXPECT_EQ(levenshtein_distance(std::string_view("caf\xC3\xA9"), std::string_view("cafe")), 1u);
}

TEST(LevenshteinProperty, MatchesDynamicProgramming) {
    std::mt19937_64 rng(3);
    const std::u32string small = U"ab";
    const std::u32string medium = U"abcdefgh é世";
    std::uniform_int_distribution<std::size_t> short_len(0, 40);
    std::uniform_int_distribution<std::size_t> long_len(60, 300);
    for (int round = 0; round < 1200; ++round) {
        const auto& alpha = round % 2 ? small : medium;
        auto& dist = round % 4 < 2 ? short_len : long_len;
        const auto a = random_u32(rng, dist(rng), alpha);
        auto b = a;
        // Mostly-similar pairs exercise long diagonal runs across block boundaries.
        if (round % 3 == 0) {
            b = random_u32(rng, dist(rng), alpha);
        } else {
            std::uniform_int_distribution<int> edits(0, 12);
            for (int e = edits(rng); e > 0; --e) {
                std::uniform_int_distribution<std::size_t> at(0, b.size());
                const std::size_t p = at(rng);
                if (p < b.size() && e % 3 == 0) b.erase(p, 1);
                else if (p < b.size() && e % 3 == 1) b[p] = alpha[0];
                else b.insert(p, 1, alpha.back());
            }
        }
        ASSERT_EQ(levenshtein_distance(a, b), oracle::dp_levenshtein(a, b)) << "round " << round;
    }
}

TEST(LevenshteinProperty, MetricAxioms) {
    std::mt19937_64 rng(17);
    std::uniform_int_distribution<std::size_t> len(0, 150);
    for (int round = 0; round < 300; ++round) {
        const auto a = random_u32(rng, len(rng), U"abc");
        const auto b = random_u32(rng, len(rng), U"abc");
        const auto c = random_u32(rng, len(rng), U"abc");
        const auto ab = levenshtein_distance(a, b);
        EXPECT_EQ(ab, levenshtein_distance(b, a));
        EXPECT_EQ(levenshtein_distance(a, a), 0u);
        EXPECT_LE(levenshtein_distance(a, c), ab + levenshtein_distance(b, c));
        EXPECT_GE(ab, a.size() > b.size() ? a.size() - b.size() : b.size() - a.size());
        EXPECT_LE(ab, std::max(a.size(), b.size()));
        const double s = levenshtein_similarity(a, b);
        EXPECT_GE(s, 0.0);
        EXPECT_LE(s, 1.0);
    }
}

TEST(SequenceMatcher, BasicRatio) {
    const auto m = sequence_matcher_similarity(std::string_view("abcd"), std::string_view("bcde"));
    EXPECT_DOUBLE_EQ(m.ratio, 0.75);
    EXPECT_EQ(m.stats.matching_chars, 3u);
    EXPECT_EQ(m.stats.total_chars, 8u);
    EXPECT_DOUBLE_EQ(sequence_matcher_similarity(std::string_view(""), std::string_view("")).ratio, 1.0);
    EXPECT_DOUBLE_EQ(sequence_matcher_similarity(std::string_view("abc"), std::string_view("")).ratio, 0.0);
}

TEST(SequenceMatcher, LongestMatchTieBreaksEarliest) {
    const std::u32string a = U"xabyab";
    const std::u32string b = U"abab";
    const auto m = find_longest_match(a, b, 0, a.size(), 0, b.size());
    EXPECT_EQ(m, (MatchingBlock{1, 0, 2}));
}

TEST(SequenceMatcher, BlocksAreOrderedAndDisjoint) {
    const auto blocks = matching_blocks(U"the cat sat on the mat", U"a cat sat on a mat");
    std::size_t prev_a = 0;
    std::size_t prev_b = 0;
    for (const auto& blk : blocks) {
        EXPECT_GE(blk.a_start, prev_a);
        EXPECT_GE(blk.b_start, prev_b);
        EXPECT_GT(blk.size, 0u);
        prev_a = blk.a_start + blk.size;
        prev_b = blk.b_start + blk.size;
    }
}

TEST(SequenceMatcherProperty, MatchesRecursiveOracle) {
    std::mt19937_64 rng(29);
    std::uniform_int_distribution<std::size_t> len(0, 60);
    for (int round = 0; round < 1500; ++round) {
        const std::u32string alpha = round % 2 ? U"ab" : U"abcdef é";
        const auto a = random_u32(rng, len(rng), alpha);
        const auto b = random_u32(rng, len(rng), alpha);
        const auto m = sequence_matcher_similarity(a, b);
        const std::size_t expected = oracle::ro_matching_chars(a, b);
        ASSERT_EQ(m.stats.matching_chars, expected) << "round " << round;
        const auto top = find_longest_match(a, b, 0, a.size(), 0, b.size());
        const auto brute = oracle::brute_longest_block(a, b, 0, a.size(), 0, b.size());
        ASSERT_EQ(top.size, brute.size);
        if (brute.size > 0) {
            ASSERT_EQ(top.a_start, brute.i);
            ASSERT_EQ(top.b_start, brute.j);
        }
        std::size_t sum = 0;
        for (const auto& blk : matching_blocks(a, b)) sum += blk.size;
        ASSERT_EQ(sum, expected);
        EXPECT_GE(m.ratio, 0.0);
        EXPECT_LE(m.ratio, 1.0);
    }
}

TEST(Jaccard, TokenSets) {
    const std::vector<std::string> a{"a", "b", "c"};
    const std::vector<std::string> b{"b", "c", "d"};
    EXPECT_DOUBLE_EQ(jaccard_similarity(a, b), 0.5);
    const std::vector<std::string> dup{"a", "a", "b", "c"};
    EXPECT_DOUBLE_EQ(jaccard_similarity(a, dup), 1.0);
    EXPECT_DOUBLE_EQ(jaccard_similarity({}, {}), 1.0);
    EXPECT_DOUBLE_EQ(jaccard_similarity(a, {}), 0.0);
}

TEST(ScorePairs, IdenticalTextsScoreOne) {
    const std::vector<TextPair> pairs{{"The Economy grew.", "the economy grew", "u1"}};
    const auto rows = score_pairs(pairs);
    ASSERT_EQ(rows.size(), 1u);
    EXPECT_EQ(rows[0].url, "u1");
    EXPECT_DOUBLE_EQ(rows[0].levenshtein, 1.0);
    EXPECT_DOUBLE_EQ(rows[0].sequence_matcher, 1.0);
    EXPECT_DOUBLE_EQ(rows[0].jaccard, 1.0);
}

TEST(ScorePairs, ParallelMatchesSerial) {
    corpus::Rng rng(4);
    corpus::NewsTextGenerator gen(500);
    std::vector<TextPair> pairs;
    for (int i = 0; i < 40; ++i) {
        const auto a = gen.words(rng, 80);
        auto b = a;
        b.resize(b.size() - static_cast<std::size_t>(i % 20));
        pairs.push_back({corpus::join(a), corpus::join(b), "u" + std::to_string(i)});
    }
    const auto serial = score_pairs_serial(pairs);
    const auto parallel = score_pairs(pairs, 4);
    ASSERT_EQ(serial.size(), parallel.size());
    for (std::size_t i = 0; i < serial.size(); ++i) {
        EXPECT_EQ(serial[i].url, parallel[i].url);
        EXPECT_EQ(serial[i].levenshtein, parallel[i].levenshtein);
        EXPECT_EQ(serial[i].sequence_matcher, parallel[i].sequence_matcher);
        EXPECT_EQ(serial[i].jaccard, parallel[i].jaccard);
    }
}

TEST(Report, ThresholdBuckets) {
    // Jaccard of {a b c d e f g} vs {a b c d e f g h i j k} is 7/11 ~= 0.636.
    const std::vector<TextPair> pairs{
        {"a b c d e f g", "a b c d e f g h i j k", "mid"},
        {"same words here", "same words here", "same"},
    };
    const auto report = validate_corpus(pairs);
    ASSERT_EQ(report.columns.size(), 4u);
    EXPECT_EQ(report.columns[0].pair_count, 2u);
    EXPECT_EQ(report.columns[1].pair_count, 2u);
    EXPECT_EQ(report.columns[2].pair_count, 1u);
    EXPECT_EQ(report.columns[3].pair_count, 1u);
    EXPECT_DOUBLE_EQ(*report.columns[3].levenshtein_mean, 1.0);
    EXPECT_EQ(report.columns[0].label(), "No Filter");
    EXPECT_EQ(report.columns[1].label(), ">60%");
    EXPECT_EQ(report.columns[3].filter_key(), ">0.8");

    const double lev_mid = report.rows[0].levenshtein;
    EXPECT_DOUBLE_EQ(*report.columns[0].levenshtein_mean, (lev_mid + 1.0) / 2.0);
}

TEST(Report, ThresholdIsStrict) {
    // Jaccard exactly 0.6: {a b c} vs {a b c d e}.
    const std::vector<TextPair> pairs{{"a b c", "a b c d e", "u"}};
    const std::vector<double> thresholds{0.6};
    const auto report = validate_corpus(pairs, thresholds);
    EXPECT_DOUBLE_EQ(report.rows[0].jaccard, 0.6);
    EXPECT_EQ(report.columns[1].pair_count, 0u);
    EXPECT_FALSE(report.columns[1].levenshtein_mean.has_value());
}

TEST(Report, EmptyInputGivesNullMeans) {
    const auto report = validate_corpus({});
    ASSERT_EQ(report.columns.size(), 4u);
    for (const auto& c : report.columns) {
        EXPECT_EQ(c.pair_count, 0u);
        EXPECT_FALSE(c.levenshtein_mean.has_value());
        EXPECT_FALSE(c.sequence_matcher_mean.has_value());
    }
    const auto j = nlohmann::json::parse(render_json(report));
    EXPECT_TRUE(j["columns"][0]["mean"].is_null());
}

TEST(Report, RenderedShape) {
    const std::vector<TextPair> pairs{{"x y z", "x y z", "u"}};
    const auto report = validate_corpus(pairs);
    const auto table = render_table(report);
    EXPECT_NE(table.find("Levenshtein Similarity"), std::string::npos);
    EXPECT_NE(table.find("SequenceMatcher Similarity"), std::string::npos);
    EXPECT_NE(table.find("No Filter"), std::string::npos);
    EXPECT_NE(table.find(">80%"), std::string::npos);

    const auto j = nlohmann::json::parse(render_json(report));
    ASSERT_EQ(j["columns"].size(), 8u);
    std::size_t lev = 0;
    for (const auto& c : j["columns"]) {
        EXPECT_EQ(c["pair_count"], 1);
        EXPECT_DOUBLE_EQ(c["mean"].get<double>(), 1.0);
        if (c["metric"] == "levenshtein") ++lev;
    }
    EXPECT_EQ(lev, 4u);
    EXPECT_EQ(j["pairs"].size(), 1u);
}

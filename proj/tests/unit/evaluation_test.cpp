#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>

#include "generators.hpp"
#include "mvr/error.hpp"
#include "mvr/evaluation.hpp"
#include "oracles.hpp"

namespace mvr {
namespace {

RetrievalResult ranked(std::string query_id, std::vector<std::string> ids) {
    RetrievalResult r{std::move(query_id), {}};
    double s = 1.0;
    for (auto& id : ids) {
        r.ranked.push_back({std::move(id), s});
        s -= 0.01;
    }
    return r;
}

std::vector<std::string> decoys(std::size_t n) {
    std::vector<std::string> out;
    for (std::size_t i = 0; i < n; ++i) {
        out.push_back("decoy" + std::to_string(i));
    }
    return out;
}

const std::vector<std::size_t> kDefaultKs = {1, 5, 10};

TEST(Recall, SingleQueryAtRankOne) {
    const std::vector<RetrievalResult> results = {ranked("q", {"t", "a", "b"})};
    const auto e = recall_at_k(results, {{"q", "t"}}, kDefaultKs);
    EXPECT_EQ(e.n, 1u);
    EXPECT_EQ(e.at(1), 1.0);
    EXPECT_EQ(e.at(5), 1.0);
    EXPECT_EQ(e.at(10), 1.0);
}

TEST(Recall, RanksOneAndSeven) {
    auto second = decoys(6);
    second.push_back("t2");
    second.push_back("x");
    const std::vector<RetrievalResult> results = {ranked("q1", {"t1", "y"}), ranked("q2", second)};
    const auto e = recall_at_k(results, {{"q1", "t1"}, {"q2", "t2"}}, kDefaultKs);
    EXPECT_EQ(e.at(1), 0.5);
    EXPECT_EQ(e.at(5), 0.5);
    EXPECT_EQ(e.at(10), 1.0);
}

TEST(Recall, TruthAbsentCountsZero) {
    const std::vector<RetrievalResult> results = {ranked("q", decoys(3))};
    const auto e = recall_at_k(results, {{"q", "t"}}, kDefaultKs);
    EXPECT_EQ(e.at(1), 0.0);
    EXPECT_EQ(e.at(10), 0.0);
}

TEST(Recall, MonotoneInKAndBounded) {
    const auto g = testing::random_gallery(4, 200, 5, 16);
    const auto queries = testing::random_queries(5, g, 300);
    const std::vector<std::size_t> ks = {1, 2, 3, 5, 10, 20, 50};
    const auto report = evaluate(queries, g, ks);
    for (const auto& [tier, entry] : report.tiers) {
        double prev = 0.0;
        for (const auto& [k, v] : entry.r_at) {
            EXPECT_GE(v, prev) << tier << " k=" << k;
            EXPECT_LE(v, 1.0);
            prev = v;
        }
    }
}

TEST(Recall, MissingTruth) {
    const std::vector<RetrievalResult> results = {ranked("q", {"a"})};
    try {
        recall_at_k(results, {}, kDefaultKs);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::MissingTruth);
    }
}

TEST(Ks, ParseAndValidate) {
    EXPECT_EQ(parse_ks("1,5,10"), kDefaultKs);
    EXPECT_EQ(parse_ks("3"), std::vector<std::size_t>{3});
    EXPECT_THROW(parse_ks(""), Error);
    EXPECT_THROW(parse_ks("1,0"), Error);
    EXPECT_THROW(parse_ks("5,5"), Error);
    EXPECT_THROW(parse_ks("1,x"), Error);
    EXPECT_THROW(parse_ks("-1"), Error);
}

TEST(Evaluate, GroupsByTierAndMatchesOracle) {
    const auto g = testing::random_gallery(12, 300, 5, 32);
    const auto queries = testing::random_queries(13, g, 90);
    const auto report = evaluate(queries, g, kDefaultKs, {.threads = 4});
    ASSERT_EQ(report.tiers.size(), 3u);

    std::map<std::string, std::array<int, 3>> hits;
    std::map<std::string, int> counts;
    for (const auto& q : queries) {
        const auto ranking = oracle::brute_force_search(oracle::to_std(q.embedding), g.items(), 10);
        std::size_t rank = 11;
        for (std::size_t i = 0; i < ranking.size(); ++i) {
            if (ranking[i].item_id == q.target_item_id) {
                rank = i + 1;
            }
        }
        auto& h = hits[q.tier];
        h[0] += rank <= 1;
        h[1] += rank <= 5;
        h[2] += rank <= 10;
        ++counts[q.tier];
    }
    for (const auto& [tier, entry] : report.tiers) {
        EXPECT_EQ(entry.n, static_cast<std::size_t>(counts[tier]));
        EXPECT_EQ(entry.at(1), static_cast<double>(hits[tier][0]) / counts[tier]);
        EXPECT_EQ(entry.at(5), static_cast<double>(hits[tier][1]) / counts[tier]);
        EXPECT_EQ(entry.at(10), static_cast<double>(hits[tier][2]) / counts[tier]);
    }
}

TEST(Evaluate, UnknownTargetIsMissingTruth) {
    const auto g = testing::random_gallery(1, 5, 2, 4);
    auto queries = testing::random_queries(2, g, 3);
    queries[1].target_item_id = "not-in-gallery";
    try {
        evaluate(queries, g, kDefaultKs);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::MissingTruth);
        EXPECT_NE(std::string(e.what()).find("not-in-gallery"), std::string::npos);
    }
}

TEST(Evaluate, JsonLayout) {
    EvalReport report;
    report.tiers["zoom2"] = {{{1, 0.5}, {5, 0.75}, {10, 1.0}}, 4};
    const auto text = report_to_json(report);
    const auto j = nlohmann::json::parse(text);
    EXPECT_EQ(j["tiers"]["zoom2"]["r_at"]["1"], 0.5);
    EXPECT_EQ(j["tiers"]["zoom2"]["r_at"]["10"], 1.0);
    EXPECT_EQ(j["tiers"]["zoom2"]["n"], 4);
    EXPECT_FALSE(j.contains("generated_at"));
    EXPECT_TRUE(nlohmann::json::parse(report_to_json(report, "2026-01-01T00:00:00Z")).contains("generated_at"));
    EXPECT_EQ(report_to_json(report), text);
}

TEST(Evaluate, TableShowsPercentages) {
    EvalReport report;
    report.tiers["full_res"] = {{{1, 0.125}, {5, 0.5}, {10, 1.0}}, 8};
    const auto table = report_to_table(report, "multi-embedding");
    EXPECT_NE(table.find("multi-embedding"), std::string::npos);
    EXPECT_NE(table.find("full_res"), std::string::npos);
    EXPECT_NE(table.find("12.5"), std::string::npos);
    EXPECT_NE(table.find("100.0"), std::string::npos);
}

QueryRecord caption(std::string id, std::string owner, EmbeddingVector v) {
    QueryRecord q;
    q.query_id = std::move(id);
    q.target_item_id = std::move(owner);
    q.embedding = std::move(v);
    return q;
}

TEST(TextRetrieval, OneCaptionRankedFirst) {
    const std::vector<ItemEmbeddingSet> images = {{"img", {{{SourceKind::Global, "g"}, {1, 0}}}}};
    const std::vector<QueryRecord> captions = {caption("c1", "img", {1, 0.1}), caption("c2", "other", {0, 1})};
    const auto e = text_retrieval_eval(images, captions, kDefaultKs);
    EXPECT_EQ(e.at(1), 1.0);
}

TEST(TextRetrieval, BestOfFiveAtRankFour) {
    const std::vector<ItemEmbeddingSet> images = {{"img", {{{SourceKind::Global, "g"}, {1, 0}}}}};
    std::vector<QueryRecord> captions = {caption("d1", "x", {1, 0.01}), caption("d2", "x", {1, 0.02}),
                                         caption("d3", "x", {1, 0.03})};
    for (int i = 0; i < 5; ++i) {
        captions.push_back(caption("own" + std::to_string(i), "img", {1, 0.04 + 0.1 * i}));
    }
    const auto e = text_retrieval_eval(images, captions, kDefaultKs);
    EXPECT_EQ(e.at(1), 0.0);
    EXPECT_EQ(e.at(5), 1.0);
    EXPECT_EQ(e.at(10), 1.0);
}

TEST(TextRetrieval, MatchesAnyOfOracle) {
    testing::Random rng(77);
    for (int trial = 0; trial < 20; ++trial) {
        std::vector<ItemEmbeddingSet> images;
        std::vector<QueryRecord> captions;
        for (int i = 0; i < 10; ++i) {
            const std::string id = "img" + std::to_string(i);
            images.push_back(testing::random_item(rng, id, 5, 8));
            for (int c = 0; c < 5; ++c) {
                captions.push_back(caption(id + "_c" + std::to_string(c), id, rng.vector(8)));
            }
        }
        const auto e = text_retrieval_eval(images, captions, kDefaultKs);

        // Independent any-of oracle: best rank among owned captions.
        std::array<int, 3> hits{};
        for (const auto& img : images) {
            const EmbeddingVector* qv = &img.embeddings.front().vector;
            for (const auto& emb : img.embeddings) {
                if (emb.tag.kind == SourceKind::Global) {
                    qv = &emb.vector;
                }
            }
            const auto q = oracle::to_std(*qv);
            std::vector<std::pair<std::string, std::vector<double>>> pool;
            for (const auto& c : captions) {
                pool.emplace_back(c.query_id, oracle::to_std(c.embedding));
            }
            const auto order = oracle::single_vector_search(q, pool, pool.size());
            std::size_t best = order.size() + 1;
            for (std::size_t r = 0; r < order.size(); ++r) {
                if (order[r].item_id.starts_with(img.item_id + "_")) {
                    best = std::min(best, r + 1);
                }
            }
            hits[0] += best <= 1;
            hits[1] += best <= 5;
            hits[2] += best <= 10;
        }
        EXPECT_EQ(e.n, 10u);
        EXPECT_EQ(e.at(1), hits[0] / 10.0);
        EXPECT_EQ(e.at(5), hits[1] / 10.0);
        EXPECT_EQ(e.at(10), hits[2] / 10.0);
    }
}

TEST(TextRetrieval, ImageWithoutCaptions) {
    const std::vector<ItemEmbeddingSet> images = {{"lonely", {{{SourceKind::Global, "g"}, {1, 0}}}}};
    const std::vector<QueryRecord> captions = {caption("c", "someone-else", {1, 0})};
    try {
        text_retrieval_eval(images, captions, kDefaultKs);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::NoCaptions);
    }
}

TEST(Queries, ParseFormatRoundTrip) {
    const auto g = testing::random_gallery(9, 10, 2, 6);
    const auto queries = testing::random_queries(10, g, 15);
    const auto text = format_queries(queries);
    EXPECT_EQ(parse_queries(text), queries);
    EXPECT_EQ(format_queries(parse_queries(text)), text);
}

TEST(Queries, CustomTierFieldAndDefault) {
    const std::string text =
        R"({"query_id":"a","text":"x","target_item_id":"i","embedding":[1,0],"split":"zoom3"})" "\n"
        "\n"
        R"({"query_id":"b","text":"y","target_item_id":"i","embedding":[0,1]})" "\n";
    const auto qs = parse_queries(text, "split");
    ASSERT_EQ(qs.size(), 2u);
    EXPECT_EQ(qs[0].tier, "zoom3");
    EXPECT_EQ(qs[1].tier, "all");
    EXPECT_EQ(parse_queries(text)[0].tier, "all");
}

TEST(Queries, ErrorsNameTheLine) {
    const auto expect_line = [](const std::string& text, const std::string& needle) {
        try {
            parse_queries(text);
            FAIL() << text;
        } catch (const Error& e) {
            EXPECT_EQ(e.code(), ErrorCode::FormatError);
            EXPECT_NE(std::string(e.what()).find(needle), std::string::npos) << e.what();
        }
    };
    const std::string good = R"({"query_id":"a","text":"x","target_item_id":"i","embedding":[1,0]})";
    expect_line(good + "\n{not json\n", "line 2");
    expect_line(good + "\n" + good + "\n", "line 2");
    expect_line(R"({"query_id":"a","text":"x","embedding":[1]})", "target_item_id");
    expect_line(R"({"query_id":"a","text":"x","target_item_id":"i","embedding":["z"]})", "line 1");
    expect_line(R"({"query_id":"a","text":"x","target_item_id":"i","embedding":[1e400]})", "line 1");
}

}  // namespace
}  // namespace mvr

#include "chromad/eval.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>

using namespace chromad;

namespace {

// Independent AUC oracle: the Mann-Whitney statistic
// P(s_pos > s_neg) + 0.5 * P(s_pos = s_neg) over all pos/neg pairs.
double brute_force_auc(const std::vector<LabeledScore>& scores) {
    double wins = 0.0;
    std::int64_t pairs = 0;
    for (const auto& p : scores) {
        if (p.label != 1) continue;
        for (const auto& n : scores) {
            if (n.label != -1) continue;
            ++pairs;
            if (p.score > n.score) {
                wins += 1.0;
            } else if (p.score == n.score) {
                wins += 0.5;
            }
        }
    }
    return wins / static_cast<double>(pairs);
}

std::vector<LabeledScore> make_scores(std::initializer_list<std::pair<double, int>> init) {
    std::vector<LabeledScore> out;
    int i = 0;
    for (const auto& [score, label] : init) {
        out.push_back({"img_" + std::to_string(i++), score, label});
    }
    return out;
}

std::vector<LabeledScore> random_instance(std::mt19937_64& rng) {
    std::uniform_int_distribution<int> uN(2, 200);
    std::uniform_real_distribution<double> uS(0.0, 10.0);
    const int n = uN(rng);
    std::vector<LabeledScore> scores;
    for (int i = 0; i < n; ++i) {
        // quantize so ties actually happen
        const double s = std::round(uS(rng) * 4.0) / 4.0;
        scores.push_back({"img_" + std::to_string(i), s, (rng() % 2 == 0) ? 1 : -1});
    }
    // guarantee both classes
    scores[0].label = 1;
    scores[1].label = -1;
    return scores;
}

}  // namespace

TEST(RocAuc, PerfectSeparation) {
    const auto scores = make_scores({{0.9, 1}, {0.7, 1}, {0.6, -1}, {0.2, -1}});
    EXPECT_DOUBLE_EQ(roc_auc(scores).auc, 1.0);
}

TEST(RocAuc, HandComputedInterleavedCase) {
    // 3 of the 4 pos/neg pairs correctly ordered
    const auto scores = make_scores({{0.9, 1}, {0.6, 1}, {0.7, -1}, {0.2, -1}});
    EXPECT_DOUBLE_EQ(roc_auc(scores).auc, 0.75);
}

TEST(RocAuc, AllTiedScoresGiveHalf) {
    const auto scores = make_scores({{1.0, 1}, {1.0, 1}, {1.0, -1}, {1.0, -1}});
    EXPECT_DOUBLE_EQ(roc_auc(scores).auc, 0.5);
}

TEST(RocAuc, SingleClassIsAnError) {
    EXPECT_THROW(roc_auc(make_scores({{0.5, 1}, {0.7, 1}})), std::invalid_argument);
    EXPECT_THROW(roc_auc(make_scores({{0.5, -1}})), std::invalid_argument);
    EXPECT_THROW(roc_auc({}), std::invalid_argument);
}

TEST(RocAuc, CurveAnchorsAndMonotonicity) {
    std::mt19937_64 rng(23);
    for (int trial = 0; trial < 50; ++trial) {
        const auto scores = random_instance(rng);
        const RocCurve curve = roc_auc(scores);
        ASSERT_GE(curve.points.size(), 2u);
        EXPECT_DOUBLE_EQ(curve.points.front().fpr, 0.0);
        EXPECT_DOUBLE_EQ(curve.points.front().tpr, 0.0);
        EXPECT_DOUBLE_EQ(curve.points.back().fpr, 1.0);
        EXPECT_DOUBLE_EQ(curve.points.back().tpr, 1.0);
        for (std::size_t i = 1; i < curve.points.size(); ++i) {
            EXPECT_GE(curve.points[i].fpr, curve.points[i - 1].fpr);
            EXPECT_GE(curve.points[i].tpr, curve.points[i - 1].tpr);
        }
        EXPECT_GE(curve.auc, 0.0);
        EXPECT_LE(curve.auc, 1.0);
    }
}

TEST(RocAuc, TrapezoidEqualsBruteForceOnRandomInstances) {
    std::mt19937_64 rng(29);
    for (int trial = 0; trial < 100; ++trial) {
        const auto scores = random_instance(rng);
        EXPECT_NEAR(roc_auc(scores).auc, brute_force_auc(scores), 1e-9);
    }
}

TEST(RocAuc, InvariantUnderStrictlyIncreasingTransform) {
    std::mt19937_64 rng(31);
    for (int trial = 0; trial < 30; ++trial) {
        auto scores = random_instance(rng);
        const double base = roc_auc(scores).auc;
        for (auto& s : scores) s.score = std::exp(0.3 * s.score) + 5.0;
        EXPECT_NEAR(roc_auc(scores).auc, base, 1e-12);
    }
}

TEST(TopK, RetrievesBothAnomalies) {
    const auto scores = make_scores({{0.9, 1}, {0.5, -1}, {0.8, 1}});
    const TopKReport r = top_k_metrics(scores, 2);
    EXPECT_DOUBLE_EQ(r.precision, 1.0);
    EXPECT_DOUBLE_EQ(r.recall, 1.0);
    EXPECT_DOUBLE_EQ(r.f1, 1.0);
}

TEST(TopK, PartialRecallAtKOne) {
    const auto scores = make_scores({{0.9, 1}, {0.5, -1}, {0.8, 1}});
    const TopKReport r = top_k_metrics(scores, 1);
    EXPECT_DOUBLE_EQ(r.precision, 1.0);
    EXPECT_DOUBLE_EQ(r.recall, 0.5);
}

TEST(TopK, PerfectSeparationAtKEqualsAnomalyCount) {
    const auto scores = make_scores({{0.9, 1}, {0.8, 1}, {0.3, -1}, {0.1, -1}});
    const TopKReport r = top_k_metrics(scores, 2);
    EXPECT_DOUBLE_EQ(r.precision, 1.0);
    EXPECT_DOUBLE_EQ(r.recall, 1.0);
    EXPECT_DOUBLE_EQ(r.f1, 1.0);
}

TEST(TopK, PrecisionEqualsRecallWhenKEqualsAnomalyCount) {
    std::mt19937_64 rng(37);
    for (int trial = 0; trial < 100; ++trial) {
        const auto scores = random_instance(rng);
        std::int64_t anomalies = 0;
        for (const auto& s : scores) anomalies += s.label == 1 ? 1 : 0;
        const TopKReport r = top_k_metrics(scores, static_cast<int>(anomalies));
        ASSERT_DOUBLE_EQ(r.precision, r.recall);
    }
}

TEST(TopK, TieBrokenByImageIdAscending) {
    std::vector<LabeledScore> scores = {
        {"b", 0.5, -1},
        {"a", 0.5, 1},
        {"c", 0.1, -1},
    };
    // "a" sorts before "b" at the tied score, so K=1 picks the anomaly
    const TopKReport r = top_k_metrics(scores, 1);
    EXPECT_DOUBLE_EQ(r.precision, 1.0);
}

TEST(TopK, OutOfRangeKThrows) {
    const auto scores = make_scores({{0.9, 1}, {0.5, -1}});
    EXPECT_THROW(top_k_metrics(scores, 0), std::invalid_argument);
    EXPECT_THROW(top_k_metrics(scores, 3), std::invalid_argument);
}

TEST(ThresholdClassify, BelowAllScoresFlagsEverything) {
    const auto scores = make_scores({{0.9, 1}, {0.5, -1}, {0.8, 1}, {0.3, -1}});
    const auto r = threshold_classify(scores, 0.0);
    EXPECT_EQ(r.counts.tp, 2);
    EXPECT_EQ(r.counts.fp, 2);
    EXPECT_EQ(r.counts.tn, 0);
    EXPECT_EQ(r.counts.fn, 0);
}

TEST(ThresholdClassify, AboveAllScoresFlagsNothing) {
    const auto scores = make_scores({{0.9, 1}, {0.5, -1}});
    const auto r = threshold_classify(scores, 1.5);
    EXPECT_EQ(r.counts.tp, 0);
    EXPECT_EQ(r.counts.fp, 0);
    EXPECT_EQ(r.counts.tn, 1);
    EXPECT_EQ(r.counts.fn, 1);
}

TEST(ThresholdClassify, SeparatingThetaMakesNoErrors) {
    const auto scores = make_scores({{0.9, 1}, {0.8, 1}, {0.3, -1}, {0.1, -1}});
    const auto r = threshold_classify(scores, 0.5);
    EXPECT_EQ(r.counts.tp, 2);
    EXPECT_EQ(r.counts.fp, 0);
    EXPECT_EQ(r.counts.tn, 2);
    EXPECT_EQ(r.counts.fn, 0);
    EXPECT_EQ(r.predicted, (std::vector<int>{1, 1, -1, -1}));
}

TEST(ScoreHistogram, OneScorePerClass) {
    const auto scores = make_scores({{1.0, 1}, {0.0, -1}});
    const auto h = score_histogram(scores, 4);
    std::int64_t anomTotal = 0, normTotal = 0;
    for (auto v : h.anomalous) anomTotal += v;
    for (auto v : h.normal) normTotal += v;
    EXPECT_EQ(anomTotal, 1);
    EXPECT_EQ(normTotal, 1);
    EXPECT_EQ(h.normal[0], 1);
    EXPECT_EQ(h.anomalous[3], 1);
}

TEST(ScoreHistogram, DegenerateRangeUsesOneBin) {
    const auto scores = make_scores({{2.0, 1}, {2.0, -1}, {2.0, -1}});
    const auto h = score_histogram(scores, 5);
    EXPECT_EQ(h.anomalous[0], 1);
    EXPECT_EQ(h.normal[0], 2);
}

TEST(ScoreHistogram, CountsSumToClassSizes) {
    std::mt19937_64 rng(41);
    for (int trial = 0; trial < 20; ++trial) {
        const auto scores = random_instance(rng);
        const auto h = score_histogram(scores, 16);
        std::int64_t anomTotal = 0, normTotal = 0, anomExpected = 0, normExpected = 0;
        for (auto v : h.anomalous) anomTotal += v;
        for (auto v : h.normal) normTotal += v;
        for (const auto& s : scores) (s.label == 1 ? anomExpected : normExpected) += 1;
        EXPECT_EQ(anomTotal, anomExpected);
        EXPECT_EQ(normTotal, normExpected);
    }
}

TEST(EvalReport, JsonRoundTrip) {
    EvalReport r;
    r.method = "ciede2000";
    r.roc.auc = 0.9875;
    r.roc.points = {{0.0, 0.0}, {0.25, 1.0}, {1.0, 1.0}};
    r.top_k = {40, 0.95, 0.95, 0.95};
    r.histogram.bins = 2;
    r.histogram.lo = 0.0;
    r.histogram.hi = 4.0;
    r.histogram.anomalous = {0, 7};
    r.histogram.normal = {9, 1};
    r.theta = 2.5;
    r.confusion = ConfusionCounts{7, 1, 9, 0};

    const EvalReport back = EvalReport::from_json(r.to_json());
    EXPECT_EQ(back.method, r.method);
    EXPECT_DOUBLE_EQ(back.roc.auc, r.roc.auc);
    ASSERT_EQ(back.roc.points.size(), r.roc.points.size());
    EXPECT_DOUBLE_EQ(back.roc.points[1].fpr, 0.25);
    EXPECT_EQ(back.top_k.k, 40);
    EXPECT_EQ(back.histogram.anomalous, r.histogram.anomalous);
    ASSERT_TRUE(back.theta.has_value());
    EXPECT_DOUBLE_EQ(*back.theta, 2.5);
    ASSERT_TRUE(back.confusion.has_value());
    EXPECT_EQ(back.confusion->tp, 7);
}

TEST(EvalReport, RejectsUnknownSchemaVersion) {
    EXPECT_THROW(EvalReport::from_json("{\"schema_version\": 999}"), std::runtime_error);
}

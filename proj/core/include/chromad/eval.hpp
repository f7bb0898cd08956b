#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace chromad {

/// Image-level score with its ground-truth label: 1 anomalous, -1 normal.
struct LabeledScore {
    std::string image_id;
    double score = 0.0;
    int label = -1;
};

struct RocPoint {
    double fpr = 0.0;
    double tpr = 0.0;
};

/// Threshold-sweep ROC. Points run from (0,0) to (1,1) with both
/// coordinates non-decreasing; tied scores collapse into one threshold.
struct RocCurve {
    std::vector<RocPoint> points;
    double auc = 0.0;
};

/// Requires at least one score of each class; AUC is the trapezoidal area,
/// which equals the tie-corrected Mann-Whitney statistic.
RocCurve roc_auc(const std::vector<LabeledScore>& scores);

struct TopKReport {
    int k = 0;
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;
};

/// Precision/recall/F1 over the K highest scores, ties broken by image id
/// ascending. Throws when K is out of [1, scores.size()].
TopKReport top_k_metrics(const std::vector<LabeledScore>& scores, int k);

struct ConfusionCounts {
    std::int64_t tp = 0;
    std::int64_t fp = 0;
    std::int64_t tn = 0;
    std::int64_t fn = 0;
};

struct ThresholdResult {
    std::vector<int> predicted;  // aligned with the input order; 1 or -1
    ConfusionCounts counts;
};

/// Predicts anomalous iff score > theta.
ThresholdResult threshold_classify(const std::vector<LabeledScore>& scores, double theta);

/// Per-class counts over a bin range shared by both classes. A degenerate
/// range (all scores equal) puts everything into bin 0.
struct ScoreHistogram {
    int bins = 0;
    double lo = 0.0;
    double hi = 0.0;
    std::vector<std::int64_t> anomalous;
    std::vector<std::int64_t> normal;
};

ScoreHistogram score_histogram(const std::vector<LabeledScore>& scores, int bins);

/// Aggregated evaluation artifacts, serialized as versioned JSON.
struct EvalReport {
    static constexpr std::uint32_t kSchemaVersion = 1;

    std::string method;
    RocCurve roc;
    TopKReport top_k;
    ScoreHistogram histogram;
    std::optional<double> theta;
    std::optional<ConfusionCounts> confusion;

    std::string to_json() const;
    static EvalReport from_json(const std::string& text);
};

}  // namespace chromad

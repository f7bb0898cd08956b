#include "chromad/eval.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace chromad {

using nlohmann::json;

RocCurve roc_auc(const std::vector<LabeledScore>& scores) {
    std::int64_t pos = 0;
    std::int64_t neg = 0;
    for (const auto& s : scores) {
        if (!std::isfinite(s.score)) throw std::invalid_argument("roc_auc: non-finite score for " + s.image_id);
        (s.label == 1 ? pos : neg) += 1;
    }
    if (pos == 0 || neg == 0) {
        throw std::invalid_argument("roc_auc: need at least one score of each class");
    }

    std::vector<const LabeledScore*> sorted;
    sorted.reserve(scores.size());
    for (const auto& s : scores) sorted.push_back(&s);
    std::sort(sorted.begin(), sorted.end(),
              [](const LabeledScore* a, const LabeledScore* b) { return a->score > b->score; });

    RocCurve curve;
    curve.points.push_back({0.0, 0.0});
    std::int64_t tp = 0;
    std::int64_t fp = 0;
    std::size_t i = 0;
    while (i < sorted.size()) {
        const double v = sorted[i]->score;
        // consume the whole tie group at this threshold
        while (i < sorted.size() && sorted[i]->score == v) {
            (sorted[i]->label == 1 ? tp : fp) += 1;
            ++i;
        }
        curve.points.push_back({static_cast<double>(fp) / neg, static_cast<double>(tp) / pos});
    }

    double auc = 0.0;
    for (std::size_t p = 1; p < curve.points.size(); ++p) {
        const auto& a = curve.points[p - 1];
        const auto& b = curve.points[p];
        auc += (b.fpr - a.fpr) * 0.5 * (a.tpr + b.tpr);
    }
    curve.auc = auc;
    return curve;
}

TopKReport top_k_metrics(const std::vector<LabeledScore>& scores, int k) {
    if (k < 1 || static_cast<std::size_t>(k) > scores.size()) {
        throw std::invalid_argument("top_k_metrics: K must be in [1, scores.size()]");
    }
    std::vector<const LabeledScore*> sorted;
    sorted.reserve(scores.size());
    for (const auto& s : scores) sorted.push_back(&s);
    std::sort(sorted.begin(), sorted.end(), [](const LabeledScore* a, const LabeledScore* b) {
        if (a->score != b->score) return a->score > b->score;
        return a->image_id < b->image_id;
    });

    std::int64_t totalAnomalies = 0;
    for (const auto& s : scores) totalAnomalies += s.label == 1 ? 1 : 0;
    std::int64_t hit = 0;
    for (int i = 0; i < k; ++i) hit += sorted[i]->label == 1 ? 1 : 0;

    TopKReport r;
    r.k = k;
    r.precision = static_cast<double>(hit) / k;
    r.recall = totalAnomalies > 0 ? static_cast<double>(hit) / totalAnomalies : 0.0;
    r.f1 = (r.precision + r.recall) > 0.0 ? 2.0 * r.precision * r.recall / (r.precision + r.recall) : 0.0;
    return r;
}

ThresholdResult threshold_classify(const std::vector<LabeledScore>& scores, double theta) {
    if (!std::isfinite(theta)) throw std::invalid_argument("threshold_classify: non-finite theta");
    ThresholdResult r;
    r.predicted.reserve(scores.size());
    for (const auto& s : scores) {
        const bool anomalous = s.score > theta;
        r.predicted.push_back(anomalous ? 1 : -1);
        if (anomalous) {
            (s.label == 1 ? r.counts.tp : r.counts.fp) += 1;
        } else {
            (s.label == 1 ? r.counts.fn : r.counts.tn) += 1;
        }
    }
    return r;
}

ScoreHistogram score_histogram(const std::vector<LabeledScore>& scores, int bins) {
    if (bins < 1) throw std::invalid_argument("score_histogram: bins must be >= 1");
    ScoreHistogram h;
    h.bins = bins;
    h.anomalous.assign(bins, 0);
    h.normal.assign(bins, 0);
    if (scores.empty()) return h;

    h.lo = scores.front().score;
    h.hi = scores.front().score;
    for (const auto& s : scores) {
        h.lo = std::min(h.lo, s.score);
        h.hi = std::max(h.hi, s.score);
    }
    const double width = h.hi - h.lo;
    for (const auto& s : scores) {
        int idx = 0;
        if (width > 0.0) {
            idx = std::min(static_cast<int>((s.score - h.lo) / width * bins), bins - 1);
        }
        (s.label == 1 ? h.anomalous : h.normal)[idx] += 1;
    }
    return h;
}

std::string EvalReport::to_json() const {
    json j;
    j["schema_version"] = kSchemaVersion;
    j["method"] = method;
    j["auc"] = roc.auc;
    j["roc"] = json::array();
    for (const auto& p : roc.points) j["roc"].push_back({p.fpr, p.tpr});
    j["top_k"] = {{"k", top_k.k}, {"precision", top_k.precision}, {"recall", top_k.recall}, {"f1", top_k.f1}};
    j["histogram"] = {{"bins", histogram.bins}, {"lo", histogram.lo},     {"hi", histogram.hi},
                      {"anomalous", histogram.anomalous}, {"normal", histogram.normal}};
    if (theta && confusion) {
        j["threshold"] = {{"theta", *theta}, {"tp", confusion->tp},  {"fp", confusion->fp},
                          {"tn", confusion->tn}, {"fn", confusion->fn}};
    }
    return j.dump(2) + "\n";
}

EvalReport EvalReport::from_json(const std::string& text) {
    json j = json::parse(text);
    if (!j.contains("schema_version") || j["schema_version"].get<std::uint32_t>() != kSchemaVersion) {
        throw std::runtime_error("eval report: missing or unsupported schema_version");
    }
    EvalReport r;
    r.method = j.at("method").get<std::string>();
    r.roc.auc = j.at("auc").get<double>();
    for (const auto& p : j.at("roc")) r.roc.points.push_back({p.at(0).get<double>(), p.at(1).get<double>()});
    const auto& tk = j.at("top_k");
    r.top_k = {tk.at("k").get<int>(), tk.at("precision").get<double>(), tk.at("recall").get<double>(),
               tk.at("f1").get<double>()};
    const auto& hg = j.at("histogram");
    r.histogram.bins = hg.at("bins").get<int>();
    r.histogram.lo = hg.at("lo").get<double>();
    r.histogram.hi = hg.at("hi").get<double>();
    r.histogram.anomalous = hg.at("anomalous").get<std::vector<std::int64_t>>();
    r.histogram.normal = hg.at("normal").get<std::vector<std::int64_t>>();
    if (j.contains("threshold")) {
        const auto& th = j.at("threshold");
        r.theta = th.at("theta").get<double>();
        r.confusion = ConfusionCounts{th.at("tp").get<std::int64_t>(), th.at("fp").get<std::int64_t>(),
                                      th.at("tn").get<std::int64_t>(), th.at("fn").get<std::int64_t>()};
    }
    return r;
}

}  // namespace chromad

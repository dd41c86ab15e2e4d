#include "citysynth/metrics.hpp"

#include <iomanip>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "citysynth/mesh.hpp"

namespace citysynth {

uint64_t ConfusionMatrix::total() const {
    return std::accumulate(counts.begin(), counts.end(), uint64_t{0});
}

ConfusionMatrix& ConfusionMatrix::operator+=(const ConfusionMatrix& other) {
    if (other.n_classes != n_classes) throw std::invalid_argument("confusion matrix size mismatch");
    for (size_t i = 0; i < counts.size(); ++i) counts[i] += other.counts[i];
    return *this;
}

ConfusionMatrix confusion(const std::vector<uint8_t>& pred, const std::vector<uint8_t>& gt,
                          int n_classes, const std::map<uint8_t, uint8_t>& class_map) {
    if (pred.size() != gt.size()) {
        throw std::invalid_argument("prediction and ground-truth label arrays differ in length");
    }
    ConfusionMatrix cm;
    cm.n_classes = n_classes;
    cm.counts.assign(static_cast<size_t>(n_classes) * n_classes, 0);
    auto remap = [&](uint8_t l) -> uint8_t {
        auto it = class_map.find(l);
        return it != class_map.end() ? it->second : l;
    };
    for (size_t i = 0; i < pred.size(); ++i) {
        uint8_t g = remap(gt[i]);
        uint8_t p = remap(pred[i]);
        if (g == kMissId || p == kMissId) continue;
        if (g >= n_classes || p >= n_classes) {
            throw std::invalid_argument("label outside [0, n_classes) after remap");
        }
        ++cm.at(g, p);
    }
    return cm;
}

std::vector<ClassMetrics> per_class(const ConfusionMatrix& cm,
                                    const std::vector<std::string>& class_names) {
    std::vector<ClassMetrics> rows(cm.n_classes);
    for (int c = 0; c < cm.n_classes; ++c) {
        uint64_t tp = cm.at(c, c), fp = 0, fn = 0;
        for (int o = 0; o < cm.n_classes; ++o) {
            if (o == c) continue;
            fp += cm.at(o, c);
            fn += cm.at(c, o);
        }
        ClassMetrics& row = rows[c];
        row.name = c < static_cast<int>(class_names.size()) ? class_names[c]
                                                            : class_name(static_cast<uint8_t>(c));
        row.support = tp + fn;
        auto rate = [&row](uint64_t num, uint64_t den) {
            if (den == 0) {
                row.zero_denominator = true;
                return 0.0;
            }
            return static_cast<double>(num) / static_cast<double>(den);
        };
        row.precision = rate(tp, tp + fp);
        row.recall = rate(tp, tp + fn);
        row.f1 = row.precision + row.recall > 0
                     ? 2 * row.precision * row.recall / (row.precision + row.recall)
                     : (row.zero_denominator = true, 0.0);
        row.iou = rate(tp, tp + fp + fn);
    }
    return rows;
}

MetricsReport aggregate(std::vector<ClassMetrics> rows) {
    MetricsReport report;
    report.rows = std::move(rows);
    size_t n = report.rows.size();
    if (n == 0) return report;
    uint64_t total_support = 0;
    for (const ClassMetrics& r : report.rows) total_support += r.support;

    report.macro_avg.name = "macro avg";
    report.weighted_avg.name = "weighted avg";
    report.macro_avg.support = total_support;
    report.weighted_avg.support = total_support;
    for (const ClassMetrics& r : report.rows) {
        report.macro_avg.precision += r.precision / n;
        report.macro_avg.recall += r.recall / n;
        report.macro_avg.f1 += r.f1 / n;
        report.macro_avg.iou += r.iou / n;
        if (total_support > 0) {
            double w = static_cast<double>(r.support) / static_cast<double>(total_support);
            report.weighted_avg.precision += r.precision * w;
            report.weighted_avg.recall += r.recall * w;
            report.weighted_avg.f1 += r.f1 * w;
            report.weighted_avg.iou += r.iou * w;
        }
    }
    return report;
}

namespace {

void append_row_csv(std::ostringstream& out, const ClassMetrics& r) {
    out << r.name << ',' << std::setprecision(6) << std::fixed << r.precision << ',' << r.recall
        << ',' << r.f1 << ',' << r.iou << ',' << r.support << "\n";
}

nlohmann::json row_json(const ClassMetrics& r) {
    return {{"class", r.name},     {"precision", r.precision}, {"recall", r.recall},
            {"f1", r.f1},          {"iou", r.iou},             {"support", r.support}};
}

}  // namespace

std::string render_report(const MetricsReport& report, ReportFormat format) {
    if (format == ReportFormat::kCsv) {
        std::ostringstream out;
        out << "class,precision,recall,f1,iou,support\n";
        for (const ClassMetrics& r : report.rows) append_row_csv(out, r);
        append_row_csv(out, report.macro_avg);
        append_row_csv(out, report.weighted_avg);
        return out.str();
    }
    if (format == ReportFormat::kJson) {
        nlohmann::json doc;
        doc["rows"] = nlohmann::json::array();
        for (const ClassMetrics& r : report.rows) doc["rows"].push_back(row_json(r));
        doc["macro_avg"] = row_json(report.macro_avg);
        doc["weighted_avg"] = row_json(report.weighted_avg);
        return doc.dump(2) + "\n";
    }
    // Fixed-width text table: class rows, then macro avg, then weighted avg.
    std::ostringstream out;
    out << std::left << std::setw(14) << "" << std::right << std::setw(10) << "precision"
        << std::setw(10) << "recall" << std::setw(10) << "f1-score" << std::setw(10) << "IOU"
        << std::setw(12) << "support" << "\n";
    auto line = [&](const ClassMetrics& r) {
        out << std::left << std::setw(14) << r.name << std::right << std::fixed
            << std::setprecision(3) << std::setw(10) << r.precision << std::setw(10) << r.recall
            << std::setw(10) << r.f1 << std::setw(10) << r.iou << std::setw(12) << r.support
            << (r.zero_denominator ? "  (zero denominator)" : "") << "\n";
    };
    for (const ClassMetrics& r : report.rows) line(r);
    line(report.macro_avg);
    line(report.weighted_avg);
    return out.str();
}

MetricsReport parse_report_csv(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line) || line != "class,precision,recall,f1,iou,support") {
        throw std::runtime_error("unexpected metrics CSV header");
    }
    std::vector<ClassMetrics> all;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream ls(line);
        ClassMetrics r;
        std::string tok;
        std::getline(ls, r.name, ',');
        std::getline(ls, tok, ',');
        r.precision = std::stod(tok);
        std::getline(ls, tok, ',');
        r.recall = std::stod(tok);
        std::getline(ls, tok, ',');
        r.f1 = std::stod(tok);
        std::getline(ls, tok, ',');
        r.iou = std::stod(tok);
        std::getline(ls, tok, ',');
        r.support = std::stoull(tok);
        all.push_back(r);
    }
    if (all.size() < 2) throw std::runtime_error("metrics CSV missing aggregate rows");
    MetricsReport report;
    report.weighted_avg = all.back();
    all.pop_back();
    report.macro_avg = all.back();
    all.pop_back();
    report.rows = std::move(all);
    return report;
}

}  // namespace citysynth

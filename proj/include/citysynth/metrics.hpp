#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace citysynth {

struct ConfusionMatrix {
    int n_classes = 0;
    std::vector<uint64_t> counts;  // counts[gt * n_classes + pred]

    uint64_t at(int gt, int pred) const { return counts[static_cast<size_t>(gt) * n_classes + pred]; }
    uint64_t& at(int gt, int pred) { return counts[static_cast<size_t>(gt) * n_classes + pred]; }
    uint64_t total() const;

    ConfusionMatrix& operator+=(const ConfusionMatrix& other);
};

struct ClassMetrics {
    std::string name;
    double precision = 0, recall = 0, f1 = 0, iou = 0;
    uint64_t support = 0;
    bool zero_denominator = false;  // some rate had an empty denominator
};

struct MetricsReport {
    std::vector<ClassMetrics> rows;
    ClassMetrics macro_avg;
    ClassMetrics weighted_avg;
};

// Builds the count layer. Labels are remapped first when class_map is given;
// a mapping to 255 (or any label equal to 255) excludes the point.
ConfusionMatrix confusion(const std::vector<uint8_t>& pred, const std::vector<uint8_t>& gt,
                          int n_classes,
                          const std::map<uint8_t, uint8_t>& class_map = {});

// P = TP/(TP+FP), R = TP/(TP+FN), f1 = 2PR/(P+R), iou = TP/(TP+FP+FN).
// Zero denominators yield 0 with the row flagged.
std::vector<ClassMetrics> per_class(const ConfusionMatrix& cm,
                                    const std::vector<std::string>& class_names = {});

MetricsReport aggregate(std::vector<ClassMetrics> rows);

enum class ReportFormat { kCsv, kJson, kTextTable };
std::string render_report(const MetricsReport& report, ReportFormat format);
MetricsReport parse_report_csv(const std::string& text);

}  // namespace citysynth

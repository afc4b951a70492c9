#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "texseg/classifier.hpp"
#include "texseg/image.hpp"
#include "texseg/textons.hpp"

namespace texseg {

struct ConfusionMatrix {
    int classes = 0;
    std::vector<std::uint64_t> counts;  // C x C, row = ground truth, column = prediction
    std::uint64_t ignored = 0;          // ground-truth UNKNOWN pixels

    ConfusionMatrix() = default;
    explicit ConfusionMatrix(int c)
        : classes(c), counts(static_cast<std::size_t>(c) * c, 0) {}

    std::uint64_t& at(int gt, int pred) {
        return counts[static_cast<std::size_t>(gt) * classes + pred];
    }
    std::uint64_t at(int gt, int pred) const {
        return counts[static_cast<std::size_t>(gt) * classes + pred];
    }
    std::uint64_t row_total(int gt) const;
    std::uint64_t total() const;

    // row-normalized percentages; an empty row stays all zero
    std::vector<double> row_percent(int gt) const;

    void merge(const ConfusionMatrix& other);
};

ConfusionMatrix confusion(const LabelMap& pred, const LabelMap& gt, int classes);

struct MetricsReport {
    double global = 0.0;                      // %
    std::vector<double> per_class;            // %, zero for classes without gt pixels
    double average = 0.0;                     // % over populated classes only
    std::vector<std::uint64_t> class_pixels;  // ground-truth pixels per class
    std::uint64_t total_pixels = 0;           // labeled pixels scored
    std::uint64_t ignored_pixels = 0;
};

MetricsReport metrics(const ConfusionMatrix& cm);

std::string metrics_to_json(const MetricsReport& r, const std::vector<std::string>& class_names,
                            const ConfusionMatrix* cm = nullptr);

// aligned columns: one per class, then Average and Global
std::string metrics_table(const MetricsReport& r, const std::vector<std::string>& class_names);

struct CrossValPlan {
    int folds = 0;
    std::uint64_t seed = 0;
    // assignment[class][fold] = indices into that class's region list
    std::vector<std::vector<std::vector<int>>> assignment;
};

CrossValPlan make_folds(const std::vector<int>& regions_per_class, int folds,
                        std::uint64_t seed);

struct CrossValDataset {
    std::vector<std::string> class_names;
    std::vector<std::vector<std::string>> regions;  // per class, loader keys
};

struct CrossValParams {
    int folds = 4;
    int k = 60;
    DistanceMetric metric = DistanceMetric::Euclidean;
    FeatureConfig config;
    double w = 1.0;
    int samples_per_region = 120;
    int restarts = 5;
    std::uint64_t seed = 0;
};

struct CrossValResult {
    CrossValPlan plan;
    std::vector<MetricsReport> fold_reports;
    std::vector<ConfusionMatrix> fold_confusions;
    double mean_global = 0.0;
    double stddev_global = 0.0;  // sample standard deviation over folds
};

// Region-level protocol: each held-out region is classified whole and all of
// its pixels score as its single predicted label. The loader indirection
// keeps the harness testable with in-memory images.
CrossValResult run_crossval(const CrossValDataset& ds, const CrossValParams& params,
                            const std::function<RgbImage(const std::string&)>& loader);

}  // namespace texseg

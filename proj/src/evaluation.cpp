#include "texseg/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <numeric>
#include <sstream>

#include "json.hpp"
#include "texseg/errors.hpp"
#include "texseg/rng.hpp"

namespace texseg {

std::uint64_t ConfusionMatrix::row_total(int gt) const {
    std::uint64_t s = 0;
    for (int p = 0; p < classes; ++p) s += at(gt, p);
    return s;
}

std::uint64_t ConfusionMatrix::total() const {
    return std::accumulate(counts.begin(), counts.end(), std::uint64_t{0});
}

std::vector<double> ConfusionMatrix::row_percent(int gt) const {
    std::vector<double> out(classes, 0.0);
    const std::uint64_t rt = row_total(gt);
    if (rt == 0) return out;
    for (int p = 0; p < classes; ++p) out[p] = 100.0 * at(gt, p) / rt;
    return out;
}

void ConfusionMatrix::merge(const ConfusionMatrix& other) {
    if (other.classes != classes)
        throw DimensionMismatch("confusion merge: class counts differ");
    for (std::size_t i = 0; i < counts.size(); ++i) counts[i] += other.counts[i];
    ignored += other.ignored;
}

ConfusionMatrix confusion(const LabelMap& pred, const LabelMap& gt, int classes) {
    if (pred.width != gt.width || pred.height != gt.height)
        throw DimensionMismatch("confusion: prediction is " + std::to_string(pred.width) + "x" +
                                std::to_string(pred.height) + ", ground truth is " +
                                std::to_string(gt.width) + "x" + std::to_string(gt.height));
    ConfusionMatrix cm(classes);
    const std::size_t n = gt.data.size();
    for (std::size_t i = 0; i < n; ++i) {
        const std::uint8_t g = gt.data[i];
        if (g == kUnknownLabel) {
            ++cm.ignored;
            continue;
        }
        const std::uint8_t p = pred.data[i];
        if (g >= classes || p >= classes)
            throw Error("confusion: label " + std::to_string(std::max(g, p)) +
                        " outside the " + std::to_string(classes) + "-class palette");
        ++cm.at(g, p);
    }
    return cm;
}

MetricsReport metrics(const ConfusionMatrix& cm) {
    MetricsReport r;
    r.per_class.assign(cm.classes, 0.0);
    r.class_pixels.assign(cm.classes, 0);
    r.ignored_pixels = cm.ignored;
    std::uint64_t trace = 0;
    int populated = 0;
    double acc_sum = 0.0;
    for (int c = 0; c < cm.classes; ++c) {
        const std::uint64_t rt = cm.row_total(c);
        r.class_pixels[c] = rt;
        r.total_pixels += rt;
        trace += cm.at(c, c);
        if (rt > 0) {
            r.per_class[c] = 100.0 * cm.at(c, c) / rt;
            acc_sum += r.per_class[c];
            ++populated;
        }
    }
    r.global = r.total_pixels ? 100.0 * trace / r.total_pixels : 0.0;
    r.average = populated ? acc_sum / populated : 0.0;
    return r;
}

std::string metrics_to_json(const MetricsReport& r, const std::vector<std::string>& class_names,
                            const ConfusionMatrix* cm) {
    nlohmann::ordered_json j;
    j["global_accuracy"] = r.global;
    j["average_accuracy"] = r.average;
    nlohmann::ordered_json per = nlohmann::ordered_json::object();
    for (std::size_t c = 0; c < r.per_class.size(); ++c) {
        const std::string name =
            c < class_names.size() ? class_names[c] : "class_" + std::to_string(c);
        per[name] = {{"accuracy", r.per_class[c]}, {"pixels", r.class_pixels[c]}};
    }
    j["classes"] = std::move(per);
    j["total_pixels"] = r.total_pixels;
    j["ignored_pixels"] = r.ignored_pixels;
    if (cm) {
        nlohmann::ordered_json rows = nlohmann::ordered_json::array();
        nlohmann::ordered_json pct = nlohmann::ordered_json::array();
        for (int g = 0; g < cm->classes; ++g) {
            nlohmann::ordered_json row = nlohmann::ordered_json::array();
            for (int p = 0; p < cm->classes; ++p) row.push_back(cm->at(g, p));
            rows.push_back(std::move(row));
            pct.push_back(cm->row_percent(g));
        }
        j["confusion"] = {{"counts", std::move(rows)}, {"row_percent", std::move(pct)}};
    }
    return j.dump(2) + "\n";
}

std::string metrics_table(const MetricsReport& r, const std::vector<std::string>& class_names) {
    std::vector<std::string> headers;
    std::vector<std::string> values;
    auto fmt = [](double v) {
        std::ostringstream os;
        os << std::fixed << std::setprecision(1) << v;
        return os.str();
    };
    for (std::size_t c = 0; c < r.per_class.size(); ++c) {
        headers.push_back(c < class_names.size() ? class_names[c]
                                                 : "class_" + std::to_string(c));
        values.push_back(fmt(r.per_class[c]));
    }
    headers.push_back("Average");
    values.push_back(fmt(r.average));
    headers.push_back("Global");
    values.push_back(fmt(r.global));

    std::ostringstream out;
    for (std::size_t i = 0; i < headers.size(); ++i) {
        const std::size_t w = std::max(headers[i].size(), values[i].size());
        out << std::setw(static_cast<int>(w)) << headers[i] << (i + 1 < headers.size() ? "  " : "");
    }
    out << "\n";
    for (std::size_t i = 0; i < values.size(); ++i) {
        const std::size_t w = std::max(headers[i].size(), values[i].size());
        out << std::setw(static_cast<int>(w)) << values[i] << (i + 1 < values.size() ? "  " : "");
    }
    out << "\n";
    return out.str();
}

CrossValPlan make_folds(const std::vector<int>& regions_per_class, int folds,
                        std::uint64_t seed) {
    if (folds < 2) throw Error("make_folds: need at least 2 folds");
    CrossValPlan plan;
    plan.folds = folds;
    plan.seed = seed;
    plan.assignment.resize(regions_per_class.size());
    for (std::size_t c = 0; c < regions_per_class.size(); ++c) {
        const int n = regions_per_class[c];
        if (n < folds)
            throw ClassTooSmall("make_folds: class " + std::to_string(c) + " has " +
                                std::to_string(n) + " regions, needs at least " +
                                std::to_string(folds));
        std::vector<int> idx(n);
        std::iota(idx.begin(), idx.end(), 0);
        Rng rng(mix_seed(seed, c));
        for (int i = n - 1; i > 0; --i) {
            const int j = static_cast<int>(rng_below(rng, static_cast<std::uint64_t>(i) + 1));
            std::swap(idx[i], idx[j]);
        }
        plan.assignment[c].resize(folds);
        for (int i = 0; i < n; ++i) plan.assignment[c][i % folds].push_back(idx[i]);
    }
    return plan;
}

CrossValResult run_crossval(const CrossValDataset& ds, const CrossValParams& params,
                            const std::function<RgbImage(const std::string&)>& loader) {
    const int c_count = static_cast<int>(ds.class_names.size());
    if (c_count == 0 || ds.regions.size() != static_cast<std::size_t>(c_count))
        throw Error("run_crossval: dataset classes and region lists disagree");

    std::vector<int> per_class(c_count);
    for (int c = 0; c < c_count; ++c) per_class[c] = static_cast<int>(ds.regions[c].size());

    CrossValResult res;
    res.plan = make_folds(per_class, params.folds, params.seed);

    // samples are drawn once per region; folds reuse them
    std::vector<std::vector<std::vector<TrainingSample>>> samples(c_count);
    std::uint64_t ordinal = 0;
    const std::uint64_t sample_stream = mix_seed(params.seed, 0xA11CE);
    for (int c = 0; c < c_count; ++c) {
        samples[c].resize(ds.regions[c].size());
        for (std::size_t r = 0; r < ds.regions[c].size(); ++r, ++ordinal) {
            const RgbImage img = loader(ds.regions[c][r]);
            samples[c][r] = sample_training_pixels(img, c, params.samples_per_region,
                                                   mix_seed(sample_stream, ordinal),
                                                   params.config);
        }
    }

    const std::uint64_t train_stream = mix_seed(params.seed, 0xF01D);
    for (int f = 0; f < params.folds; ++f) {
        std::vector<TrainingSample> train;
        for (int c = 0; c < c_count; ++c) {
            for (int g = 0; g < params.folds; ++g) {
                if (g == f) continue;
                for (int r : res.plan.assignment[c][g])
                    train.insert(train.end(), samples[c][r].begin(), samples[c][r].end());
            }
        }
        const TextonDictionary dict =
            train_dictionary(train, ds.class_names, params.k, params.metric, params.config,
                             mix_seed(train_stream, f), params.restarts);

        ConfusionMatrix cm(c_count);
        for (int c = 0; c < c_count; ++c) {
            for (int r : res.plan.assignment[c][f]) {
                const RgbImage img = loader(ds.regions[c][r]);
                const ClassProbabilityVector v = classify_region(img, dict, params.w);
                cm.at(c, v.label) += img.pixel_count();
            }
        }
        res.fold_confusions.push_back(cm);
        res.fold_reports.push_back(metrics(cm));
    }

    double mean = 0.0;
    for (const MetricsReport& r : res.fold_reports) mean += r.global;
    mean /= params.folds;
    double var = 0.0;
    for (const MetricsReport& r : res.fold_reports) {
        const double d = r.global - mean;
        var += d * d;
    }
    res.mean_global = mean;
    res.stddev_global = params.folds > 1 ? std::sqrt(var / (params.folds - 1)) : 0.0;
    return res;
}

}  // namespace texseg

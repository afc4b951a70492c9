#include "texseg/textons.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>

#include "json.hpp"
#include "texseg/errors.hpp"
#include "texseg/rng.hpp"

namespace texseg {

std::string metric_name(DistanceMetric m) {
    switch (m) {
        case DistanceMetric::Euclidean: return "euclidean";
        case DistanceMetric::CityBlock: return "cityblock";
        case DistanceMetric::Cosine: return "cosine";
        case DistanceMetric::Correlation: return "correlation";
    }
    throw Error("unhandled metric");
}

DistanceMetric metric_from_name(const std::string& name) {
    if (name == "euclidean") return DistanceMetric::Euclidean;
    if (name == "cityblock") return DistanceMetric::CityBlock;
    if (name == "cosine") return DistanceMetric::Cosine;
    if (name == "correlation") return DistanceMetric::Correlation;
    throw Error("unknown distance metric '" + name + "'");
}

double distance(DistanceMetric m, std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size() || a.empty())
        throw DimensionMismatch("distance: vectors of length " + std::to_string(a.size()) +
                                " and " + std::to_string(b.size()));
    double out;
    simd::texton_distances_scalar(m, a.data(), b.data(), 1, a.size(), &out);
    return out;
}

namespace {

// squared L2 norm is not needed anywhere; keep helpers local to the updates

void update_mean(const std::vector<double>& pts, const std::vector<int>& assign,
                 const std::vector<int>& counts, int k, int dim, std::vector<double>& centers) {
    std::fill(centers.begin(), centers.end(), 0.0);
    for (std::size_t i = 0; i < assign.size(); ++i) {
        const double* p = &pts[i * dim];
        double* c = &centers[static_cast<std::size_t>(assign[i]) * dim];
        for (int d = 0; d < dim; ++d) c[d] += p[d];
    }
    for (int j = 0; j < k; ++j) {
        if (counts[j] == 0) continue;
        double* c = &centers[static_cast<std::size_t>(j) * dim];
        for (int d = 0; d < dim; ++d) c[d] /= counts[j];
    }
}

void update_median(const std::vector<double>& pts, const std::vector<int>& assign,
                   const std::vector<int>& counts, int k, int dim,
                   std::vector<double>& centers) {
    std::vector<std::vector<std::size_t>> members(k);
    for (int j = 0; j < k; ++j) members[j].reserve(counts[j]);
    for (std::size_t i = 0; i < assign.size(); ++i) members[assign[i]].push_back(i);
    std::vector<double> column;
    for (int j = 0; j < k; ++j) {
        if (members[j].empty()) continue;
        double* c = &centers[static_cast<std::size_t>(j) * dim];
        for (int d = 0; d < dim; ++d) {
            column.clear();
            for (std::size_t i : members[j]) column.push_back(pts[i * dim + d]);
            std::sort(column.begin(), column.end());
            const std::size_t n = column.size();
            c[d] = (n % 2 == 1) ? column[n / 2]
                                : 0.5 * (column[n / 2 - 1] + column[n / 2]);
        }
    }
}

// subtracts the vector's own component mean; used for the correlation metric
void center_in_place(double* v, int dim) {
    double mean = 0.0;
    for (int d = 0; d < dim; ++d) mean += v[d];
    mean /= dim;
    for (int d = 0; d < dim; ++d) v[d] -= mean;
}

// L2-normalize, zero vector stays zero
void normalize_in_place(double* v, int dim) {
    double ss = 0.0;
    for (int d = 0; d < dim; ++d) ss += v[d] * v[d];
    if (ss <= 0.0) return;
    const double inv = 1.0 / std::sqrt(ss);
    for (int d = 0; d < dim; ++d) v[d] *= inv;
}

// mean of the direction vectors, renormalized; optimal for 1 - cos distance
void update_spherical(const std::vector<double>& pts, const std::vector<int>& assign,
                      const std::vector<int>& counts, int k, int dim,
                      std::vector<double>& centers, bool center_first) {
    std::fill(centers.begin(), centers.end(), 0.0);
    std::vector<double> tmp(dim);
    for (std::size_t i = 0; i < assign.size(); ++i) {
        const double* p = &pts[i * dim];
        std::copy(p, p + dim, tmp.begin());
        if (center_first) center_in_place(tmp.data(), dim);
        normalize_in_place(tmp.data(), dim);
        double* c = &centers[static_cast<std::size_t>(assign[i]) * dim];
        for (int d = 0; d < dim; ++d) c[d] += tmp[d];
    }
    for (int j = 0; j < k; ++j) {
        if (counts[j] == 0) continue;
        double* c = &centers[static_cast<std::size_t>(j) * dim];
        for (int d = 0; d < dim; ++d) c[d] /= counts[j];
        if (center_first) center_in_place(c, dim);
        normalize_in_place(c, dim);
    }
}

struct LloydOutcome {
    std::vector<double> centers;
    double objective = 0.0;
};

LloydOutcome run_lloyd(const std::vector<double>& pts, std::size_t n, int dim, int k,
                       DistanceMetric m, std::uint64_t seed, int max_iter) {
    Rng rng(seed);

    // k-means++ seeding: first center uniform, the rest weighted by the
    // distance to the nearest center chosen so far
    std::vector<double> centers(static_cast<std::size_t>(k) * dim);
    std::vector<double> dmin(n);
    {
        const std::size_t first = rng_below(rng, n);
        std::copy(&pts[first * dim], &pts[first * dim] + dim, centers.begin());
        for (std::size_t i = 0; i < n; ++i) {
            simd::texton_distances_scalar(m, &pts[i * dim], centers.data(), 1, dim, &dmin[i]);
        }
        for (int j = 1; j < k; ++j) {
            double total = 0.0;
            for (std::size_t i = 0; i < n; ++i) total += dmin[i];
            std::size_t pick = 0;
            if (total > 0.0) {
                const double u = rng_double(rng) * total;
                double acc = 0.0;
                pick = n - 1;
                for (std::size_t i = 0; i < n; ++i) {
                    acc += dmin[i];
                    if (u < acc) {
                        pick = i;
                        break;
                    }
                }
            } else {
                pick = rng_below(rng, n);
            }
            double* cj = &centers[static_cast<std::size_t>(j) * dim];
            std::copy(&pts[pick * dim], &pts[pick * dim] + dim, cj);
            for (std::size_t i = 0; i < n; ++i) {
                double d;
                simd::texton_distances_scalar(m, &pts[i * dim], cj, 1, dim, &d);
                if (d < dmin[i]) dmin[i] = d;
            }
        }
    }

    std::vector<int> assign(n, -1);
    std::vector<int> prev_assign;
    std::vector<int> counts(k, 0);
    std::vector<double> dists(k);
    double prev_obj = std::numeric_limits<double>::infinity();
    double obj = 0.0;

    for (int iter = 0; iter < max_iter; ++iter) {
        prev_assign = assign;
        std::fill(counts.begin(), counts.end(), 0);
        obj = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            simd::texton_distances(m, &pts[i * dim], centers.data(), k, dim, dists.data());
            const std::size_t a = simd::argmin_first(dists.data(), k);
            assign[i] = static_cast<int>(a);
            dmin[i] = dists[a];
            ++counts[a];
            obj += dists[a];
        }

        // an empty cluster steals the point farthest from its center,
        // never draining a singleton cluster
        for (int j = 0; j < k; ++j) {
            if (counts[j] != 0) continue;
            std::size_t worst = n;
            double worst_d = -1.0;
            for (std::size_t i = 0; i < n; ++i) {
                if (counts[assign[i]] < 2) continue;
                if (dmin[i] > worst_d) {
                    worst_d = dmin[i];
                    worst = i;
                }
            }
            if (worst == n) continue;  // fewer distinct points than clusters
            --counts[assign[worst]];
            double* cj = &centers[static_cast<std::size_t>(j) * dim];
            std::copy(&pts[worst * dim], &pts[worst * dim] + dim, cj);
            double d;
            simd::texton_distances_scalar(m, &pts[worst * dim], cj, 1, dim, &d);
            obj += d - dmin[worst];
            dmin[worst] = d;
            assign[worst] = j;
            counts[j] = 1;
        }

        if (!(obj <= prev_obj + 1e-9 * (1.0 + std::abs(prev_obj))))
            throw Error("k-means objective increased: " + std::to_string(prev_obj) + " -> " +
                        std::to_string(obj));
        prev_obj = obj;
        if (assign == prev_assign) break;

        switch (m) {
            case DistanceMetric::Euclidean:
                update_mean(pts, assign, counts, k, dim, centers);
                break;
            case DistanceMetric::CityBlock:
                update_median(pts, assign, counts, k, dim, centers);
                break;
            case DistanceMetric::Cosine:
                update_spherical(pts, assign, counts, k, dim, centers, false);
                break;
            case DistanceMetric::Correlation:
                update_spherical(pts, assign, counts, k, dim, centers, true);
                break;
        }
    }

    return {std::move(centers), obj};
}

}  // namespace

KMeansResult kmeans(const std::vector<double>& points, std::size_t n, int dim, int k,
                    DistanceMetric m, std::uint64_t seed, KMeansParams params) {
    if (dim <= 0) throw DimensionMismatch("kmeans: dim must be positive");
    if (k <= 0) throw Error("kmeans: k must be positive");
    if (points.size() != n * static_cast<std::size_t>(dim))
        throw DimensionMismatch("kmeans: points buffer does not match n*dim");
    if (n < static_cast<std::size_t>(k))
        throw TooFewPoints("kmeans: " + std::to_string(n) + " points for k=" +
                           std::to_string(k));
    if (params.restarts < 1 || params.max_iter < 1)
        throw Error("kmeans: restarts and max_iter must be at least 1");

    LloydOutcome best;
    bool have = false;
    for (int r = 0; r < params.restarts; ++r) {
        LloydOutcome o = run_lloyd(points, n, dim, k, m, mix_seed(seed, r), params.max_iter);
        if (!have || o.objective < best.objective) {
            best = std::move(o);
            have = true;
        }
    }

    // canonical order so equal dictionaries serialize identically
    std::vector<std::size_t> order(k);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        const double* ca = &best.centers[a * dim];
        const double* cb = &best.centers[b * dim];
        return std::lexicographical_compare(ca, ca + dim, cb, cb + dim);
    });
    KMeansResult res;
    res.k = k;
    res.dim = dim;
    res.objective = best.objective;
    res.centers.resize(static_cast<std::size_t>(k) * dim);
    for (int j = 0; j < k; ++j) {
        const double* src = &best.centers[order[j] * dim];
        std::copy(src, src + dim, &res.centers[static_cast<std::size_t>(j) * dim]);
    }
    return res;
}

std::vector<TrainingSample> sample_training_pixels(const RgbImage& region, int class_index, int n,
                                                   std::uint64_t seed, const FeatureConfig& cfg) {
    if (region.pixel_count() == 0) throw EmptyRegion("sample_training_pixels: empty region");
    if (n <= 0) return {};

    const LabImage lab = rgb_to_lab(region);
    const FilterBank fb = build_filter_bank(cfg.filter_size);
    const FeaturePlanes color = extract_color_features(region, lab);
    const FeaturePlanes texture = extract_texture_features(lab, fb);

    const std::size_t total = region.pixel_count();
    std::vector<std::size_t> idx(total);
    std::iota(idx.begin(), idx.end(), 0);
    std::size_t take = std::min<std::size_t>(n, total);
    if (take < total) {
        Rng rng(seed);
        for (std::size_t i = 0; i < take; ++i) {
            const std::size_t j = i + rng_below(rng, total - i);
            std::swap(idx[i], idx[j]);
        }
    }

    std::vector<TrainingSample> out(take);
    for (std::size_t i = 0; i < take; ++i) {
        const int x = static_cast<int>(idx[i] % region.width);
        const int y = static_cast<int>(idx[i] / region.width);
        TrainingSample& s = out[i];
        s.class_index = class_index;
        const double* c = color.at(x, y);
        std::copy(c, c + kColorDim, s.color.begin());
        const double* t = texture.at(x, y);
        std::copy(t, t + kTextureDim, s.texture.begin());
    }
    return out;
}

TextonDictionary train_dictionary(const std::vector<TrainingSample>& samples,
                                  const std::vector<std::string>& class_names, int k,
                                  DistanceMetric m, FeatureConfig cfg, std::uint64_t seed,
                                  int restarts) {
    if (class_names.empty()) throw Error("train_dictionary: no classes");
    if (k <= 0) throw Error("train_dictionary: k must be positive");
    const int c_count = static_cast<int>(class_names.size());

    std::vector<std::vector<const TrainingSample*>> per_class(c_count);
    for (const TrainingSample& s : samples) {
        if (s.class_index < 0 || s.class_index >= c_count)
            throw Error("train_dictionary: sample class index " +
                        std::to_string(s.class_index) + " out of range");
        per_class[s.class_index].push_back(&s);
    }

    TextonDictionary d;
    d.classes = class_names;
    d.k = k;
    d.metric = m;
    d.config = cfg;
    d.seed = seed;
    d.color_textons.resize(static_cast<std::size_t>(c_count) * k * kColorDim);
    d.texture_textons.resize(static_cast<std::size_t>(c_count) * k * kTextureDim);

    KMeansParams params;
    params.restarts = restarts;
    std::vector<double> color_pts, texture_pts;
    for (int ci = 0; ci < c_count; ++ci) {
        const auto& group = per_class[ci];
        if (group.size() < static_cast<std::size_t>(k))
            throw ClassUnderpopulated(ci, "('" + class_names[ci] + "') has " +
                                              std::to_string(group.size()) +
                                              " samples, needs at least " + std::to_string(k));
        color_pts.resize(group.size() * kColorDim);
        texture_pts.resize(group.size() * kTextureDim);
        for (std::size_t i = 0; i < group.size(); ++i) {
            std::copy(group[i]->color.begin(), group[i]->color.end(),
                      &color_pts[i * kColorDim]);
            std::copy(group[i]->texture.begin(), group[i]->texture.end(),
                      &texture_pts[i * kTextureDim]);
        }
        const KMeansResult rc = kmeans(color_pts, group.size(), kColorDim, k, m,
                                       mix_seed(seed, static_cast<std::uint64_t>(ci) * 2), params);
        const KMeansResult rt =
            kmeans(texture_pts, group.size(), kTextureDim, k, m,
                   mix_seed(seed, static_cast<std::uint64_t>(ci) * 2 + 1), params);
        std::copy(rc.centers.begin(), rc.centers.end(),
                  &d.color_textons[static_cast<std::size_t>(ci) * k * kColorDim]);
        std::copy(rt.centers.begin(), rt.centers.end(),
                  &d.texture_textons[static_cast<std::size_t>(ci) * k * kTextureDim]);
    }
    return d;
}

namespace {

nlohmann::ordered_json rows_to_json(const std::vector<double>& flat, int rows, int width) {
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    for (int r = 0; r < rows; ++r) {
        nlohmann::ordered_json row = nlohmann::ordered_json::array();
        for (int c = 0; c < width; ++c) row.push_back(flat[static_cast<std::size_t>(r) * width + c]);
        arr.push_back(std::move(row));
    }
    return arr;
}

std::vector<double> rows_from_json(const nlohmann::json& arr, int rows, int width,
                                   const char* what) {
    if (!arr.is_array() || static_cast<int>(arr.size()) != rows)
        throw CorruptFile(std::string("dictionary: ") + what + " must have " +
                          std::to_string(rows) + " rows");
    std::vector<double> flat(static_cast<std::size_t>(rows) * width);
    for (int r = 0; r < rows; ++r) {
        const auto& row = arr[r];
        if (!row.is_array() || static_cast<int>(row.size()) != width)
            throw CorruptFile(std::string("dictionary: ") + what + " row " + std::to_string(r) +
                              " must have " + std::to_string(width) + " values");
        for (int c = 0; c < width; ++c) {
            const auto& v = row[c];
            if (!v.is_number()) throw CorruptFile(std::string("dictionary: ") + what +
                                                  " contains a non-numeric value");
            flat[static_cast<std::size_t>(r) * width + c] = v.get<double>();
        }
    }
    return flat;
}

}  // namespace

std::string save_dictionary(const TextonDictionary& d) {
    nlohmann::ordered_json j;
    j["format_version"] = "1";
    j["classes"] = d.classes;
    j["k"] = d.k;
    j["metric"] = metric_name(d.metric);
    j["filter_size"] = d.config.filter_size;
    j["normalization"] = {{"rgb_divisor", 255},
                          {"l_divisor", 100},
                          {"ab_offset", 128},
                          {"ab_divisor", 256}};
    j["seed"] = d.seed;
    j["color_textons"] = rows_to_json(d.color_textons, d.rows(), kColorDim);
    j["texture_textons"] = rows_to_json(d.texture_textons, d.rows(), kTextureDim);
    return j.dump(2) + "\n";
}

TextonDictionary load_dictionary(const std::string& bytes) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(bytes);
    } catch (const nlohmann::json::exception& e) {
        throw CorruptFile(std::string("dictionary: ") + e.what());
    }
    if (!j.is_object() || !j.contains("format_version") || !j["format_version"].is_string())
        throw CorruptFile("dictionary: missing format_version");
    if (j["format_version"].get<std::string>() != "1")
        throw FormatVersionMismatch("dictionary: unsupported format_version '" +
                                    j["format_version"].get<std::string>() + "'");

    try {
        TextonDictionary d;
        d.classes = j.at("classes").get<std::vector<std::string>>();
        if (d.classes.empty()) throw CorruptFile("dictionary: classes is empty");
        d.k = j.at("k").get<int>();
        if (d.k <= 0) throw CorruptFile("dictionary: k must be positive");
        d.metric = metric_from_name(j.at("metric").get<std::string>());
        d.config.filter_size = j.at("filter_size").get<int>();
        const auto& norm = j.at("normalization");
        if (norm.at("rgb_divisor").get<int>() != 255 || norm.at("l_divisor").get<int>() != 100 ||
            norm.at("ab_offset").get<int>() != 128 || norm.at("ab_divisor").get<int>() != 256)
            throw ConfigMismatch("dictionary: unsupported channel normalization");
        d.seed = j.at("seed").get<std::uint64_t>();
        d.color_textons = rows_from_json(j.at("color_textons"), d.rows(), kColorDim,
                                         "color_textons");
        d.texture_textons = rows_from_json(j.at("texture_textons"), d.rows(), kTextureDim,
                                           "texture_textons");
        build_filter_bank(d.config.filter_size);  // validates the window size
        return d;
    } catch (const nlohmann::json::exception& e) {
        throw CorruptFile(std::string("dictionary: ") + e.what());
    }
}

}  // namespace texseg

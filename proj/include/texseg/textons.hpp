#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "texseg/features.hpp"
#include "texseg/simd.hpp"

namespace texseg {

std::string metric_name(DistanceMetric m);
DistanceMetric metric_from_name(const std::string& name);

// Euclidean is the squared norm; Cosine/Correlation are 1 - similarity with
// degenerate inputs (zero vector / constant vector) pinned to distance 1.
double distance(DistanceMetric m, std::span<const double> a, std::span<const double> b);

struct KMeansParams {
    int max_iter = 100;
    int restarts = 5;
};

struct KMeansResult {
    int k = 0;
    int dim = 0;
    std::vector<double> centers;  // k x dim, lexicographically sorted
    double objective = 0.0;
};

// k-means++ seeding, Lloyd iterations, metric-specific center updates.
// Deterministic for a given seed; restarts keep the best objective.
KMeansResult kmeans(const std::vector<double>& points, std::size_t n, int dim, int k,
                    DistanceMetric m, std::uint64_t seed, KMeansParams params = {});

struct TrainingSample {
    int class_index = 0;
    std::array<double, kColorDim> color{};
    std::array<double, kTextureDim> texture{};
};

// n random pixel coordinates without replacement (all pixels when the region
// is smaller), with both feature vectors extracted at each.
std::vector<TrainingSample> sample_training_pixels(const RgbImage& region, int class_index, int n,
                                                   std::uint64_t seed, const FeatureConfig& cfg);

struct TextonDictionary {
    std::vector<std::string> classes;
    int k = 0;
    DistanceMetric metric = DistanceMetric::Euclidean;
    FeatureConfig config;
    std::uint64_t seed = 0;
    std::vector<double> color_textons;    // (C*k) x 6, class-major rows
    std::vector<double> texture_textons;  // (C*k) x 17, class-major rows

    int class_count() const { return static_cast<int>(classes.size()); }
    int rows() const { return class_count() * k; }
};

TextonDictionary train_dictionary(const std::vector<TrainingSample>& samples,
                                  const std::vector<std::string>& class_names, int k,
                                  DistanceMetric m, FeatureConfig cfg, std::uint64_t seed,
                                  int restarts = 5);

std::string save_dictionary(const TextonDictionary& d);
TextonDictionary load_dictionary(const std::string& bytes);

}  // namespace texseg

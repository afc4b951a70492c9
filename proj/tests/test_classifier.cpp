#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "doctest.h"
#include "texseg/classifier.hpp"
#include "texseg/errors.hpp"
#include "texseg/rng.hpp"

using namespace texseg;

namespace {

TextonDictionary random_dictionary(int classes, int k, DistanceMetric m, std::uint64_t seed) {
    TextonDictionary d;
    for (int c = 0; c < classes; ++c) d.classes.push_back("cls" + std::to_string(c));
    d.k = k;
    d.metric = m;
    d.seed = seed;
    Rng rng(seed);
    d.color_textons.resize(static_cast<std::size_t>(classes) * k * kColorDim);
    d.texture_textons.resize(static_cast<std::size_t>(classes) * k * kTextureDim);
    for (double& v : d.color_textons) v = rng_double(rng);
    for (double& v : d.texture_textons) v = rng_double(rng);
    return d;
}

RgbImage random_image(int w, int h, std::uint64_t seed) {
    RgbImage img(w, h);
    Rng rng(seed);
    for (auto& v : img.data) v = static_cast<std::uint8_t>(rng_below(rng, 256));
    return img;
}

// noisy two-tone frame: left half near (40,60,50), right half near (220,180,190)
RgbImage two_tone(int w, int h, std::uint64_t seed) {
    RgbImage img(w, h);
    Rng rng(seed);
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x) {
            std::uint8_t* p = img.px(x, y);
            const bool left = x < w / 2;
            const int base[3] = {left ? 40 : 220, left ? 60 : 180, left ? 50 : 190};
            for (int c = 0; c < 3; ++c)
                p[c] = static_cast<std::uint8_t>(base[c] + static_cast<int>(rng_below(rng, 9)) - 4);
        }
    return img;
}

TextonDictionary two_tone_dictionary(std::uint64_t seed) {
    const RgbImage img = two_tone(64, 48, seed);
    RgbImage left(32, 48), right(32, 48);
    for (int y = 0; y < 48; ++y)
        for (int x = 0; x < 32; ++x)
            for (int c = 0; c < 3; ++c) {
                left.px(x, y)[c] = img.px(x, y)[c];
                right.px(x, y)[c] = img.px(x + 32, y)[c];
            }
    std::vector<TrainingSample> samples = sample_training_pixels(left, 0, 200, 11, FeatureConfig{});
    const auto rs = sample_training_pixels(right, 1, 200, 12, FeatureConfig{});
    samples.insert(samples.end(), rs.begin(), rs.end());
    return train_dictionary(samples, {"dark", "bright"}, 3, DistanceMetric::Euclidean,
                            FeatureConfig{}, 99);
}

std::int32_t brute_nearest(DistanceMetric m, const double* f, const std::vector<double>& rows,
                           int dim) {
    const std::size_t n = rows.size() / dim;
    std::int32_t best = 0;
    double best_d = distance(m, std::span<const double>(f, dim),
                             std::span<const double>(rows.data(), dim));
    for (std::size_t r = 1; r < n; ++r) {
        const double dd = distance(m, std::span<const double>(f, dim),
                                   std::span<const double>(&rows[r * dim], dim));
        if (dd < best_d) {
            best_d = dd;
            best = static_cast<std::int32_t>(r);
        }
    }
    return best;
}

}  // namespace

TEST_CASE("map_to_textons agrees with a brute-force nearest row search") {
    const RgbImage img = random_image(16, 12, 31);
    const LabImage lab = rgb_to_lab(img);
    const FeaturePlanes color = extract_color_features(img, lab);
    const FeaturePlanes texture = extract_texture_features(lab, build_filter_bank(7));

    for (auto m : {DistanceMetric::Euclidean, DistanceMetric::CityBlock, DistanceMetric::Cosine,
                   DistanceMetric::Correlation}) {
        const TextonDictionary d = random_dictionary(3, 4, m, 1 + static_cast<int>(m));
        const TextonAssignment a = map_to_textons(color, texture, d);
        REQUIRE(a.width == 16);
        REQUIRE(a.classes == 3);
        for (std::size_t i = 0; i < a.color.size(); ++i) {
            CHECK(a.color[i] == brute_nearest(m, &color.data[i * kColorDim], d.color_textons,
                                              kColorDim));
            CHECK(a.texture[i] == brute_nearest(m, &texture.data[i * kTextureDim],
                                                d.texture_textons, kTextureDim));
        }
    }
}

TEST_CASE("a pixel matching a texton exactly maps to that row") {
    FeaturePlanes color(1, 1, kColorDim), texture(1, 1, kTextureDim);
    for (int i = 0; i < kColorDim; ++i) color.data[i] = 0.31 + 0.07 * i;
    for (int i = 0; i < kTextureDim; ++i) texture.data[i] = -0.2 + 0.04 * i;

    TextonDictionary d = random_dictionary(3, 4, DistanceMetric::Euclidean, 8);
    const int row = 2 * 4 + 3;  // class 2, texton 3
    for (int i = 0; i < kColorDim; ++i) d.color_textons[row * kColorDim + i] = color.data[i];
    for (int i = 0; i < kTextureDim; ++i)
        d.texture_textons[row * kTextureDim + i] = texture.data[i];
    // push every other row far away so the zero-distance row is unique
    for (int r = 0; r < d.rows(); ++r)
        if (r != row) {
            for (int i = 0; i < kColorDim; ++i) d.color_textons[r * kColorDim + i] += 5.0;
            for (int i = 0; i < kTextureDim; ++i) d.texture_textons[r * kTextureDim + i] += 5.0;
        }

    const TextonAssignment a = map_to_textons(color, texture, d);
    CHECK(a.color[0] == row);
    CHECK(a.texture[0] == row);
    CHECK(a.class_of(a.color[0]) == 2);
    CHECK(a.texton_of(a.color[0]) == 3);
}

TEST_CASE("a one-class one-texton dictionary maps everything to row zero") {
    const RgbImage img = random_image(5, 4, 3);
    const LabImage lab = rgb_to_lab(img);
    const TextonDictionary d = random_dictionary(1, 1, DistanceMetric::Euclidean, 2);
    const TextonAssignment a = map_to_textons(extract_color_features(img, lab),
                                              extract_texture_features(lab, build_filter_bank(7)), d);
    for (auto r : a.color) CHECK(r == 0);
    for (auto r : a.texture) CHECK(r == 0);
}

TEST_CASE("map_to_textons validates its inputs") {
    const RgbImage img = random_image(4, 3, 1);
    const LabImage lab = rgb_to_lab(img);
    const FeaturePlanes color = extract_color_features(img, lab);
    const FeaturePlanes texture = extract_texture_features(lab, build_filter_bank(5));
    const TextonDictionary d = random_dictionary(2, 2, DistanceMetric::Euclidean, 5);

    CHECK_THROWS_AS(map_to_textons(texture, texture, d), ConfigMismatch);
    TextonDictionary broken = d;
    broken.color_textons.pop_back();
    CHECK_THROWS_AS(map_to_textons(color, texture, broken), ConfigMismatch);
}

TEST_CASE("accumulate fills the occurrence table from a hand-checked example") {
    SuperpixelMap sp;
    sp.width = 3;
    sp.height = 2;
    sp.ids = {0, 0, 1, 1, 2, 2};
    sp.count = 3;
    sp.pixels = {{0, 1}, {2, 3}, {4, 5}};

    TextonAssignment a;
    a.width = 3;
    a.height = 2;
    a.classes = 2;
    a.k = 2;
    a.color = {0, 1, 2, 3, 3, 3};    // rows: class 0 {0,1}, class 1 {2,3}
    a.texture = {3, 2, 1, 0, 0, 0};

    const OccurrenceTable t = accumulate(sp, a);
    REQUIRE(t.segments == 3);
    REQUIRE(t.classes == 2);

    CHECK(t.color_count(0, 0, 0) == 1);
    CHECK(t.color_count(0, 0, 1) == 1);
    CHECK(t.color_count(0, 1, 0) == 0);
    CHECK(t.color_sum(0, 0) == 2.0);
    CHECK(t.color_sum(0, 1) == 0.0);
    CHECK(t.texture_sum(0, 1) == 2.0);

    CHECK(t.color_sum(1, 1) == 2.0);
    CHECK(t.texture_count(1, 0, 1) == 1);  // pixel 2 -> row 1 = class 0, texton 1
    CHECK(t.texture_count(1, 0, 0) == 1);  // pixel 3 -> row 0 = class 0, texton 0
    CHECK(t.texture_sum(1, 0) == 2.0);
    CHECK(t.texture_sum(1, 1) == 0.0);

    CHECK(t.color_count(2, 1, 1) == 2);
    CHECK(t.texture_count(2, 0, 0) == 2);
    CHECK(t.color_sum(2, 1) == 2.0);
    CHECK(t.texture_sum(2, 0) == 2.0);

    // per-kind totals equal the segment sizes
    for (int s = 0; s < 3; ++s) {
        double csum = 0, tsum = 0;
        for (int c = 0; c < 2; ++c) {
            csum += t.color_sum(s, c);
            tsum += t.texture_sum(s, c);
        }
        CHECK(csum == 2.0);
        CHECK(tsum == 2.0);
    }
}

TEST_CASE("accumulate rejects mismatched dimensions") {
    SuperpixelMap sp = singleton_superpixels(3, 3);
    TextonAssignment a;
    a.width = 3;
    a.height = 2;
    a.classes = 1;
    a.k = 1;
    a.color.assign(6, 0);
    a.texture.assign(6, 0);
    CHECK_THROWS_AS(accumulate(sp, a), DimensionMismatch);
}

TEST_CASE("mix_and_vote blends the two histograms at the given weight") {
    OccurrenceTable t;
    t.segments = 1;
    t.classes = 2;
    t.k = 1;
    t.color_class_sums = {8, 2};
    t.texture_class_sums = {2, 8};

    SUBCASE("w=1 balances both kinds, ties go to the lowest class") {
        const ClassProbabilityVector v = mix_and_vote(t, 0, 1.0, 10.0);
        CHECK(v.p[0] == doctest::Approx(1.0));
        CHECK(v.p[1] == doctest::Approx(1.0));
        CHECK(v.label == 0);
        CHECK(v.w == 1.0);
    }
    SUBCASE("w=0 is a pure color vote") {
        const ClassProbabilityVector v = mix_and_vote(t, 0, 0.0, 10.0);
        CHECK(v.p[0] == doctest::Approx(0.8));
        CHECK(v.p[1] == doctest::Approx(0.2));
        CHECK(v.label == 0);
    }
    SUBCASE("a huge weight is a pure texture vote") {
        const ClassProbabilityVector v = mix_and_vote(t, 0, 1e6, 10.0);
        CHECK(v.label == 1);
    }
    SUBCASE("fractional weights shift the blend") {
        t.color_class_sums = {6, 4};
        t.texture_class_sums = {1, 9};
        const ClassProbabilityVector v = mix_and_vote(t, 0, 1.2, 10.0);
        CHECK(v.p[0] == doctest::Approx(0.72));
        CHECK(v.p[1] == doctest::Approx(1.48));
        CHECK(v.label == 1);
    }
}

TEST_CASE("probabilities sum to 1 + w when sums total the pixel count") {
    Rng rng(17);
    for (int trial = 0; trial < 5; ++trial) {
        const int classes = 2 + static_cast<int>(rng_below(rng, 5));
        const double m = 40;
        OccurrenceTable t;
        t.segments = 1;
        t.classes = classes;
        t.k = 1;
        t.color_class_sums.assign(classes, 0.0);
        t.texture_class_sums.assign(classes, 0.0);
        for (int i = 0; i < 40; ++i) {
            t.color_class_sums[rng_below(rng, classes)] += 1.0;
            t.texture_class_sums[rng_below(rng, classes)] += 1.0;
        }
        for (double w : {0.0, 0.3, 1.0, 2.5}) {
            const ClassProbabilityVector v = mix_and_vote(t, 0, w, m);
            const double sum = std::accumulate(v.p.begin(), v.p.end(), 0.0);
            CHECK(sum == doctest::Approx(1.0 + w).epsilon(1e-12));
        }
    }
}

TEST_CASE("segment scale does not change the probabilities") {
    OccurrenceTable t;
    t.segments = 2;
    t.classes = 3;
    t.k = 1;
    t.color_class_sums = {6, 3, 1, 60, 30, 10};     // segment 1 is segment 0 scaled by 10
    t.texture_class_sums = {2, 5, 3, 20, 50, 30};
    const ClassProbabilityVector a = mix_and_vote(t, 0, 0.7, 10.0);
    const ClassProbabilityVector b = mix_and_vote(t, 1, 0.7, 100.0);
    for (int c = 0; c < 3; ++c) CHECK(a.p[c] == doctest::Approx(b.p[c]).epsilon(1e-12));
    CHECK(a.label == b.label);
}

TEST_CASE("classify_with_superpixels labels a noisy two-tone image") {
    const TextonDictionary d = two_tone_dictionary(5);
    const RgbImage img = two_tone(64, 48, 6);  // different noise than training

    SegParams p;
    p.sigma = 0.0;
    p.min_size = 40;
    SegmentationResult r = classify_with_superpixels(img, d, segment_graph_based(img, p), 1.0);

    REQUIRE(r.labels.width == 64);
    REQUIRE(r.labels.height == 48);
    REQUIRE(static_cast<int>(r.probabilities.size()) == r.superpixels.count);
    int correct = 0;
    for (int y = 0; y < 48; ++y)
        for (int x = 0; x < 64; ++x)
            correct += r.labels.at(x, y) == (x < 32 ? 0 : 1);
    CHECK(correct > 64 * 48 * 95 / 100);

    for (const ClassProbabilityVector& v : r.probabilities) {
        CHECK(std::accumulate(v.p.begin(), v.p.end(), 0.0) ==
              doctest::Approx(2.0).epsilon(1e-9));
        CHECK(v.label == static_cast<int>(std::max_element(v.p.begin(), v.p.end()) - v.p.begin()));
    }
}

TEST_CASE("pixelwise classification equals a singleton superpixel map") {
    const TextonDictionary d = two_tone_dictionary(7);
    const RgbImage img = two_tone(40, 30, 9);
    const SegmentationResult a = classify_pixelwise(img, d, 1.0, 40, 30);
    const SegmentationResult b =
        classify_with_superpixels(img, d, singleton_superpixels(40, 30), 1.0);
    CHECK(a.labels.data == b.labels.data);
    CHECK(a.superpixels.count == 40 * 30);
}

TEST_CASE("classify_image at native size equals the shared core") {
    const TextonDictionary d = two_tone_dictionary(13);
    const RgbImage img = two_tone(48, 36, 14);
    SegParams p;
    p.min_size = 30;
    const SegmentationResult a = classify_image(img, d, p, 1.0, 48, 36);
    const SegmentationResult b = classify_with_superpixels(img, d, segment_graph_based(img, p), 1.0);
    CHECK(a.labels.data == b.labels.data);
    CHECK(a.superpixels.ids == b.superpixels.ids);
}

TEST_CASE("classify_region votes once over the whole region") {
    const TextonDictionary d = two_tone_dictionary(21);

    // a region drawn from the bright side should vote class 1
    RgbImage bright(20, 10);
    Rng rng(33);
    for (int i = 0; i < 20 * 10; ++i)
        for (int c = 0; c < 3; ++c)
            bright.data[i * 3 + c] = static_cast<std::uint8_t>(
                (c == 0 ? 220 : c == 1 ? 180 : 190) + static_cast<int>(rng_below(rng, 9)) - 4);
    const ClassProbabilityVector v = classify_region(bright, d, 1.0);
    CHECK(v.label == 1);
    CHECK(std::accumulate(v.p.begin(), v.p.end(), 0.0) == doctest::Approx(2.0).epsilon(1e-9));

    CHECK_THROWS_AS(classify_region(RgbImage(), d, 1.0), EmptyRegion);
}

TEST_CASE("a unanimous region concentrates all mass on one class") {
    // dictionary with far-apart constant rows so a constant region maps to
    // class 1 for both feature kinds
    TextonDictionary d = random_dictionary(3, 1, DistanceMetric::Euclidean, 40);
    for (int r = 0; r < 3; ++r) {
        for (int i = 0; i < kColorDim; ++i) d.color_textons[r * kColorDim + i] = 10.0 * r;
        for (int i = 0; i < kTextureDim; ++i) d.texture_textons[r * kTextureDim + i] = 10.0 * r;
    }
    // feature values live in [0,1], nearest row for class index 0 is row 0;
    // shift row 0 away so row 1 wins both votes
    for (int i = 0; i < kColorDim; ++i) d.color_textons[i] = -30.0;
    for (int i = 0; i < kTextureDim; ++i) d.texture_textons[i] = -30.0;

    RgbImage region(8, 6);
    for (auto& v : region.data) v = 128;
    const ClassProbabilityVector v = classify_region(region, d, 1.0);
    CHECK(v.label == 1);
    CHECK(v.p[1] == doctest::Approx(2.0));
    CHECK(v.p[0] == doctest::Approx(0.0));
    CHECK(v.p[2] == doctest::Approx(0.0));
}

TEST_CASE("permuting textons inside a class block changes nothing") {
    const RgbImage img = two_tone(32, 24, 50);
    const TextonDictionary d = two_tone_dictionary(51);
    TextonDictionary shuffled = d;
    // reverse the texton rows inside every class block, both matrices
    for (int c = 0; c < d.class_count(); ++c)
        for (int t = 0; t < d.k / 2; ++t) {
            const int lo = c * d.k + t, hi = c * d.k + (d.k - 1 - t);
            for (int i = 0; i < kColorDim; ++i)
                std::swap(shuffled.color_textons[lo * kColorDim + i],
                          shuffled.color_textons[hi * kColorDim + i]);
            for (int i = 0; i < kTextureDim; ++i)
                std::swap(shuffled.texture_textons[lo * kTextureDim + i],
                          shuffled.texture_textons[hi * kTextureDim + i]);
        }
    const SegmentationResult a = classify_pixelwise(img, d, 1.0, 32, 24);
    const SegmentationResult b = classify_pixelwise(img, shuffled, 1.0, 32, 24);
    CHECK(a.labels.data == b.labels.data);
}

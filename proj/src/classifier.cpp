#include "texseg/classifier.hpp"

#include <algorithm>
#include <string>
#include <utility>

#include "texseg/errors.hpp"
#include "texseg/simd.hpp"

namespace texseg {

TextonAssignment map_to_textons(const FeaturePlanes& color, const FeaturePlanes& texture,
                                const TextonDictionary& d) {
    if (color.dim != kColorDim || texture.dim != kTextureDim)
        throw ConfigMismatch("map_to_textons: feature planes have wrong dimensionality");
    if (color.width != texture.width || color.height != texture.height)
        throw ConfigMismatch("map_to_textons: color and texture planes differ in size");
    if (d.rows() <= 0 || d.color_textons.size() != static_cast<std::size_t>(d.rows()) * kColorDim ||
        d.texture_textons.size() != static_cast<std::size_t>(d.rows()) * kTextureDim)
        throw ConfigMismatch("map_to_textons: dictionary shape is inconsistent");

    TextonAssignment a;
    a.width = color.width;
    a.height = color.height;
    a.classes = d.class_count();
    a.k = d.k;
    const std::size_t n = static_cast<std::size_t>(a.width) * a.height;
    a.color.resize(n);
    a.texture.resize(n);

    const std::size_t rows = static_cast<std::size_t>(d.rows());
    std::vector<double> dists(rows);
    for (std::size_t i = 0; i < n; ++i) {
        simd::texton_distances(d.metric, &color.data[i * kColorDim], d.color_textons.data(),
                               rows, kColorDim, dists.data());
        a.color[i] = static_cast<std::int32_t>(simd::argmin_first(dists.data(), rows));
        simd::texton_distances(d.metric, &texture.data[i * kTextureDim],
                               d.texture_textons.data(), rows, kTextureDim, dists.data());
        a.texture[i] = static_cast<std::int32_t>(simd::argmin_first(dists.data(), rows));
    }
    return a;
}

OccurrenceTable accumulate(const SuperpixelMap& sp, const TextonAssignment& a) {
    if (sp.width != a.width || sp.height != a.height)
        throw DimensionMismatch("accumulate: superpixel map is " + std::to_string(sp.width) +
                                "x" + std::to_string(sp.height) + ", assignments are " +
                                std::to_string(a.width) + "x" + std::to_string(a.height));

    OccurrenceTable t;
    t.segments = sp.count;
    t.classes = a.classes;
    t.k = a.k;
    const std::size_t ck = static_cast<std::size_t>(a.classes) * a.k;
    t.color_counts.assign(sp.count * ck, 0);
    t.texture_counts.assign(sp.count * ck, 0);
    t.color_class_sums.assign(static_cast<std::size_t>(sp.count) * a.classes, 0.0);
    t.texture_class_sums.assign(static_cast<std::size_t>(sp.count) * a.classes, 0.0);

    const std::size_t n = static_cast<std::size_t>(a.width) * a.height;
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t seg = sp.ids[i];
        ++t.color_counts[seg * ck + a.color[i]];
        ++t.texture_counts[seg * ck + a.texture[i]];
        t.color_class_sums[seg * a.classes + a.class_of(a.color[i])] += 1.0;
        t.texture_class_sums[seg * a.classes + a.class_of(a.texture[i])] += 1.0;
    }
    return t;
}

ClassProbabilityVector mix_and_vote(const OccurrenceTable& t, int segment, double w, double m) {
    ClassProbabilityVector v;
    v.w = w;
    v.p.resize(t.classes);
    int best = 0;
    for (int c = 0; c < t.classes; ++c) {
        const double mixed = t.color_sum(segment, c) + w * t.texture_sum(segment, c);
        v.p[c] = mixed / m;
        if (v.p[c] > v.p[best]) best = c;
    }
    v.label = best;
    return v;
}

SegmentationResult classify_with_superpixels(const RgbImage& img, const TextonDictionary& d,
                                             SuperpixelMap sp, double w) {
    const LabImage lab = rgb_to_lab(img);
    const FilterBank fb = build_filter_bank(d.config.filter_size);
    const FeaturePlanes color = extract_color_features(img, lab);
    const FeaturePlanes texture = extract_texture_features(lab, fb);
    const TextonAssignment a = map_to_textons(color, texture, d);
    const OccurrenceTable t = accumulate(sp, a);

    SegmentationResult res;
    res.superpixels = std::move(sp);
    res.probabilities.reserve(res.superpixels.count);
    res.labels.width = img.width;
    res.labels.height = img.height;
    res.labels.data.resize(static_cast<std::size_t>(img.width) * img.height);
    for (int s = 0; s < res.superpixels.count; ++s) {
        const double m = static_cast<double>(res.superpixels.pixels[s].size());
        res.probabilities.push_back(mix_and_vote(t, s, w, m));
        const std::uint8_t label = static_cast<std::uint8_t>(res.probabilities.back().label);
        for (int pix : res.superpixels.pixels[s]) res.labels.data[pix] = label;
    }
    return res;
}

SegmentationResult classify_image(const RgbImage& img, const TextonDictionary& d,
                                  const SegParams& p, double w, int resize_w, int resize_h) {
    const RgbImage work = resize_bilinear(img, resize_w, resize_h);
    return classify_with_superpixels(work, d, segment_graph_based(work, p), w);
}

SegmentationResult classify_pixelwise(const RgbImage& img, const TextonDictionary& d, double w,
                                      int resize_w, int resize_h) {
    const RgbImage work = resize_bilinear(img, resize_w, resize_h);
    return classify_with_superpixels(work, d, singleton_superpixels(work.width, work.height), w);
}

ClassProbabilityVector classify_region(const RgbImage& region, const TextonDictionary& d,
                                       double w) {
    if (region.pixel_count() == 0) throw EmptyRegion("classify_region: empty region");
    SegmentationResult res = classify_with_superpixels(
        region, d, [&] {
            SuperpixelMap one;
            one.width = region.width;
            one.height = region.height;
            one.count = 1;
            one.ids.assign(region.pixel_count(), 0);
            one.pixels.resize(1);
            one.pixels[0].resize(region.pixel_count());
            for (std::size_t i = 0; i < region.pixel_count(); ++i)
                one.pixels[0][i] = static_cast<int>(i);
            return one;
        }(), w);
    return res.probabilities[0];
}

}  // namespace texseg

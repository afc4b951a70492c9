#include <atomic>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <mutex>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "texseg/classifier.hpp"
#include "texseg/errors.hpp"
#include "texseg/evaluation.hpp"
#include "texseg/image_io.hpp"
#include "texseg/rng.hpp"

namespace fs = std::filesystem;
using namespace texseg;

namespace {

struct RunConfig {
    int textons = -1;  // per-command default when negative
    double weight = 1.0;
    int filter_size = 7;
    std::string distance = "euclidean";
    double seg_sigma = 0.5;
    double seg_k = 80.0;
    int seg_min = 80;
    std::uint64_t seed = 0;
    std::string palette;
    std::string dataset;
    int samples_per_region = 120;
    int restarts = 5;
    int folds = 4;
    int resize_width = 320;
    int resize_height = 240;
    int jobs = 1;
};

void apply_config_file(const std::string& path, RunConfig& rc) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw IoError("cannot read config file " + path);
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(f);
    } catch (const nlohmann::json::exception& e) {
        throw Error("config " + path + ": " + e.what());
    }
    if (!j.is_object()) throw Error("config " + path + ": expected a JSON object");
    for (const auto& [key, value] : j.items()) {
        try {
            if (key == "textons") rc.textons = value.get<int>();
            else if (key == "weight") rc.weight = value.get<double>();
            else if (key == "filter_size") rc.filter_size = value.get<int>();
            else if (key == "distance") rc.distance = value.get<std::string>();
            else if (key == "seg_sigma") rc.seg_sigma = value.get<double>();
            else if (key == "seg_k") rc.seg_k = value.get<double>();
            else if (key == "seg_min") rc.seg_min = value.get<int>();
            else if (key == "seed") rc.seed = value.get<std::uint64_t>();
            else if (key == "palette") rc.palette = value.get<std::string>();
            else if (key == "dataset") rc.dataset = value.get<std::string>();
            else if (key == "samples_per_region") rc.samples_per_region = value.get<int>();
            else if (key == "restarts") rc.restarts = value.get<int>();
            else if (key == "folds") rc.folds = value.get<int>();
            else if (key == "resize_width") rc.resize_width = value.get<int>();
            else if (key == "resize_height") rc.resize_height = value.get<int>();
            else if (key == "jobs") rc.jobs = value.get<int>();
            else throw Error("config " + path + ": unknown key '" + key + "'");
        } catch (const nlohmann::json::exception& e) {
            throw Error("config " + path + ": key '" + key + "': " + e.what());
        }
    }
}

SegParams seg_params(const RunConfig& rc) {
    SegParams p;
    p.sigma = rc.seg_sigma;
    p.k = rc.seg_k;
    p.min_size = rc.seg_min;
    return p;
}

void add_common_options(CLI::App* cmd, RunConfig& rc, std::string& config_path) {
    cmd->add_option("--config", config_path, "JSON config file (flags override it)");
    cmd->add_option("--textons", rc.textons, "textons per class");
    cmd->add_option("--weight", rc.weight, "texture weight w");
    cmd->add_option("--filter-size", rc.filter_size, "filter window size (odd, 5..15)");
    cmd->add_option("--distance", rc.distance, "euclidean|cityblock|cosine|correlation");
    cmd->add_option("--seg-sigma", rc.seg_sigma, "segmentation pre-smoothing sigma");
    cmd->add_option("--seg-k", rc.seg_k, "segmentation threshold scale");
    cmd->add_option("--seg-min", rc.seg_min, "minimum segment size in pixels");
    cmd->add_option("--seed", rc.seed, "random seed");
    cmd->add_option("--samples", rc.samples_per_region, "training pixels sampled per region");
    cmd->add_option("--restarts", rc.restarts, "k-means restarts");
    cmd->add_option("--resize-width", rc.resize_width, "working width for whole images");
    cmd->add_option("--resize-height", rc.resize_height, "working height for whole images");
    cmd->add_option("--jobs", rc.jobs, "parallel workers for batch commands");
}

bool is_image_file(const fs::path& p) {
    std::string ext = p.extension().string();
    std::transform(ext.begin(), ext.end(), ext.begin(),
                   [](unsigned char c) { return std::tolower(c); });
    return ext == ".png" || ext == ".jpg" || ext == ".jpeg";
}

std::vector<fs::path> list_images(const fs::path& dir) {
    std::vector<fs::path> out;
    for (const auto& e : fs::directory_iterator(dir))
        if (e.is_regular_file() && is_image_file(e.path())) out.push_back(e.path());
    std::sort(out.begin(), out.end(),
              [](const fs::path& a, const fs::path& b) { return a.string() < b.string(); });
    return out;
}

std::vector<std::string> palette_class_names(const ClassPalette& pal) {
    std::vector<std::string> names;
    for (int c = 0; c < pal.class_count(); ++c) names.push_back(pal.entries[c].name);
    return names;
}

void check_palette_matches(const ClassPalette& pal, const TextonDictionary& d) {
    if (palette_class_names(pal) != d.classes)
        throw ConfigMismatch("palette classes do not match the dictionary's classes");
}

TextonDictionary load_dictionary_file(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw IoError("cannot read dictionary " + path);
    std::ostringstream ss;
    ss << f.rdbuf();
    return load_dictionary(ss.str());
}

void write_text_file(const fs::path& path, const std::string& text) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw IoError("cannot write " + path.string());
    f << text;
    if (!f) throw IoError("short write to " + path.string());
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// run fn(i) for i in [0, count) on up to `jobs` threads; returns failure count
template <typename Fn>
int for_each_item(std::size_t count, int jobs, Fn&& fn) {
    std::atomic<int> failures{0};
    if (jobs <= 1) {
        for (std::size_t i = 0; i < count; ++i)
            if (!fn(i)) ++failures;
        return failures.load();
    }
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next.fetch_add(1); i < count; i = next.fetch_add(1))
            if (!fn(i)) ++failures;
    };
    std::vector<std::thread> pool;
    const int n = std::min<std::size_t>(jobs, count ? count : 1);
    for (int t = 0; t < n; ++t) pool.emplace_back(worker);
    for (std::thread& t : pool) t.join();
    return failures.load();
}

std::mutex g_print_mutex;

void print_line(std::ostream& os, const std::string& line) {
    std::lock_guard<std::mutex> lock(g_print_mutex);
    os << line << "\n";
}

// ---------------------------------------------------------------- train ----

struct DatasetListing {
    std::vector<std::string> class_names;
    std::vector<std::vector<fs::path>> files;  // per class, sorted
};

DatasetListing list_cropped_dataset(const fs::path& root, const ClassPalette& pal) {
    DatasetListing ds;
    ds.class_names = palette_class_names(pal);
    for (const std::string& name : ds.class_names) {
        const fs::path dir = root / name;
        if (!fs::is_directory(dir))
            throw IoError("missing class directory for '" + name + "': " + dir.string());
        ds.files.push_back(list_images(dir));
    }
    return ds;
}

int cmd_train(const RunConfig& rc, const std::string& output) {
    const ClassPalette pal = load_palette(rc.palette);
    const DatasetListing ds = list_cropped_dataset(rc.dataset, pal);
    const int k = rc.textons < 0 ? 30 : rc.textons;
    const DistanceMetric metric = metric_from_name(rc.distance);
    FeatureConfig cfg;
    cfg.filter_size = rc.filter_size;

    std::vector<TrainingSample> samples;
    const std::uint64_t sample_stream = mix_seed(rc.seed, 0xA11CE);
    std::uint64_t ordinal = 0;
    for (std::size_t c = 0; c < ds.files.size(); ++c) {
        std::size_t count = 0;
        for (const fs::path& file : ds.files[c]) {
            RgbImage img;
            try {
                img = read_image(file.string());
            } catch (const Error& e) {
                throw IoError(file.string() + ": " + e.what());
            }
            const auto s = sample_training_pixels(img, static_cast<int>(c),
                                                  rc.samples_per_region,
                                                  mix_seed(sample_stream, ordinal++), cfg);
            count += s.size();
            samples.insert(samples.end(), s.begin(), s.end());
        }
        std::cout << ds.class_names[c] << ": " << ds.files[c].size() << " regions, " << count
                  << " samples\n";
    }

    const TextonDictionary dict =
        train_dictionary(samples, ds.class_names, k, metric, cfg, rc.seed, rc.restarts);
    write_text_file(output, save_dictionary(dict));
    std::cout << "wrote " << output << " (" << dict.class_count() << " classes x " << dict.k
              << " textons)\n";
    return 0;
}

// -------------------------------------------------------------- segment ----

std::string probability_csv(const SegmentationResult& res) {
    std::ostringstream out;
    const int c_count = res.probabilities.empty()
                            ? 0
                            : static_cast<int>(res.probabilities[0].p.size());
    out << "superpixel_id,size";
    for (int c = 0; c < c_count; ++c) out << ",p_" << c;
    out << ",label\n";
    char buf[64];
    for (int s = 0; s < res.superpixels.count; ++s) {
        out << s << "," << res.superpixels.pixels[s].size();
        for (double p : res.probabilities[s].p) {
            std::snprintf(buf, sizeof buf, "%.10g", p);
            out << "," << buf;
        }
        out << "," << res.probabilities[s].label << "\n";
    }
    return out.str();
}

RgbImage overlay_image(const RgbImage& img, const LabelMap& lm, const ClassPalette& pal) {
    RgbImage out(img.width, img.height);
    for (std::size_t i = 0; i < img.pixel_count(); ++i) {
        const std::uint8_t v = lm.data[i];
        const auto& color =
            v == kUnknownLabel ? pal.unknown().rgb : pal.entries[v].rgb;
        for (int c = 0; c < 3; ++c)
            out.data[i * 3 + c] =
                static_cast<std::uint8_t>((img.data[i * 3 + c] + color[c] + 1) / 2);
    }
    return out;
}

RgbImage boundary_overlay(const RgbImage& img, const SuperpixelMap& sp) {
    RgbImage out = img;
    for (int y = 0; y < sp.height; ++y) {
        for (int x = 0; x < sp.width; ++x) {
            const bool edge = (x + 1 < sp.width && sp.id_at(x, y) != sp.id_at(x + 1, y)) ||
                              (y + 1 < sp.height && sp.id_at(x, y) != sp.id_at(x, y + 1));
            if (!edge) continue;
            std::uint8_t* p = out.px(x, y);
            p[0] = 255;
            p[1] = 0;
            p[2] = 0;
        }
    }
    return out;
}

int cmd_segment(const RunConfig& rc, const std::string& dict_path, const std::string& input,
                const std::string& output_dir, bool dump_superpixels) {
    const TextonDictionary dict = load_dictionary_file(dict_path);
    const ClassPalette pal = load_palette(rc.palette);
    check_palette_matches(pal, dict);
    const SegParams sparams = seg_params(rc);
    const FilterBank fb = build_filter_bank(dict.config.filter_size);

    std::vector<fs::path> inputs;
    if (fs::is_directory(input)) {
        inputs = list_images(input);
    } else if (fs::is_regular_file(input)) {
        inputs.push_back(input);
    } else {
        throw IoError("input not found: " + input);
    }
    fs::create_directories(output_dir);

    const int failures = for_each_item(inputs.size(), rc.jobs, [&](std::size_t i) {
        const fs::path& file = inputs[i];
        try {
            auto t0 = std::chrono::steady_clock::now();
            const RgbImage raw = read_image(file.string());
            const double t_decode = seconds_since(t0);

            t0 = std::chrono::steady_clock::now();
            const RgbImage work = resize_bilinear(raw, rc.resize_width, rc.resize_height);
            const double t_resize = seconds_since(t0);

            t0 = std::chrono::steady_clock::now();
            SuperpixelMap sp = segment_graph_based(work, sparams);
            const double t_sp = seconds_since(t0);

            t0 = std::chrono::steady_clock::now();
            const LabImage lab = rgb_to_lab(work);
            const FeaturePlanes color = extract_color_features(work, lab);
            const FeaturePlanes texture = extract_texture_features(lab, fb);
            const double t_feat = seconds_since(t0);

            t0 = std::chrono::steady_clock::now();
            const TextonAssignment assign = map_to_textons(color, texture, dict);
            const OccurrenceTable table = accumulate(sp, assign);
            SegmentationResult res;
            res.superpixels = std::move(sp);
            res.labels = LabelMap(work.width, work.height);
            for (int s = 0; s < res.superpixels.count; ++s) {
                const double m = static_cast<double>(res.superpixels.pixels[s].size());
                res.probabilities.push_back(mix_and_vote(table, s, rc.weight, m));
                const auto label = static_cast<std::uint8_t>(res.probabilities.back().label);
                for (int pix : res.superpixels.pixels[s]) res.labels.data[pix] = label;
            }
            const double t_map = seconds_since(t0);

            t0 = std::chrono::steady_clock::now();
            const std::string stem = file.stem().string();
            const fs::path base = fs::path(output_dir) / stem;
            write_label_png(base.string() + "_labels.png", res.labels, pal);
            write_png(base.string() + "_overlay.png", overlay_image(work, res.labels, pal));
            write_text_file(base.string() + "_probs.csv", probability_csv(res));
            if (dump_superpixels) {
                write_png(base.string() + "_superpixels.png",
                          boundary_overlay(work, res.superpixels));
                if (res.superpixels.count > 65535)
                    throw Error("too many segments for 16-bit id image");
                std::vector<std::uint16_t> ids(res.superpixels.ids.begin(),
                                               res.superpixels.ids.end());
                write_gray16_png(base.string() + "_segids.png", ids, work.width, work.height);
            }
            const double t_write = seconds_since(t0);

            char line[256];
            std::snprintf(line, sizeof line,
                          "%s: decode %.3fs resize %.3fs superpixels %.3fs features %.3fs "
                          "mapping %.3fs write %.3fs (%d segments)",
                          file.string().c_str(), t_decode, t_resize, t_sp, t_feat, t_map,
                          t_write, res.superpixels.count);
            print_line(std::cout, line);
            return true;
        } catch (const std::exception& e) {
            print_line(std::cerr, "error: " + file.string() + ": " + e.what());
            return false;
        }
    });
    return failures ? 1 : 0;
}

// ------------------------------------------------------------- evaluate ----

struct ManifestRow {
    fs::path image;
    fs::path label;
};

std::vector<ManifestRow> parse_manifest(const fs::path& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw IoError("cannot read manifest " + path.string());
    const fs::path base = path.parent_path();
    std::vector<ManifestRow> rows;
    std::string line;
    int lineno = 0;
    while (std::getline(f, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const std::size_t tab = line.find('\t');
        if (tab == std::string::npos || tab == 0 || tab + 1 >= line.size() ||
            line.find('\t', tab + 1) != std::string::npos)
            throw Error("manifest " + path.string() + " line " + std::to_string(lineno) +
                        ": expected image_path<TAB>label_path");
        fs::path img = line.substr(0, tab);
        fs::path lbl = line.substr(tab + 1);
        if (img.is_relative()) img = base / img;
        if (lbl.is_relative()) lbl = base / lbl;
        rows.push_back({std::move(img), std::move(lbl)});
    }
    return rows;
}

int cmd_evaluate(const RunConfig& rc, const std::string& dict_path, const std::string& manifest,
                 const std::string& output_dir) {
    const TextonDictionary dict = load_dictionary_file(dict_path);
    const ClassPalette pal = load_palette(rc.palette);
    check_palette_matches(pal, dict);
    const std::vector<ManifestRow> rows = parse_manifest(manifest);
    const SegParams sparams = seg_params(rc);
    fs::create_directories(output_dir);

    std::vector<std::optional<ConfusionMatrix>> parts(rows.size());
    const int failures = for_each_item(rows.size(), rc.jobs, [&](std::size_t i) {
        try {
            const RgbImage img = read_image(rows[i].image.string());
            const SegmentationResult res = classify_image(img, dict, sparams, rc.weight,
                                                          rc.resize_width, rc.resize_height);
            LabelMap gt = read_label_map(rows[i].label.string(), pal);
            if (gt.width != res.labels.width || gt.height != res.labels.height)
                gt = resize_nearest(gt, res.labels.width, res.labels.height);
            parts[i] = confusion(res.labels, gt, dict.class_count());
            return true;
        } catch (const std::exception& e) {
            print_line(std::cerr, "error: " + rows[i].image.string() + ": " + e.what());
            return false;
        }
    });

    ConfusionMatrix total(dict.class_count());
    for (const auto& part : parts)
        if (part) total.merge(*part);
    const MetricsReport report = metrics(total);
    const std::string table = metrics_table(report, dict.classes);
    std::cout << table;
    std::cout << "scored " << report.total_pixels << " pixels, ignored "
              << report.ignored_pixels << " UNKNOWN pixels\n";
    write_text_file(fs::path(output_dir) / "metrics.json",
                    metrics_to_json(report, dict.classes, &total));
    write_text_file(fs::path(output_dir) / "metrics.txt", table);
    return failures ? 1 : 0;
}

// ------------------------------------------------------------- crossval ----

CrossValResult run_crossval_on_dataset(const RunConfig& rc, int default_k,
                                       std::vector<std::string>* names_out) {
    const ClassPalette pal = load_palette(rc.palette);
    const DatasetListing listing = list_cropped_dataset(rc.dataset, pal);

    CrossValDataset ds;
    ds.class_names = listing.class_names;
    for (const auto& files : listing.files) {
        std::vector<std::string> keys;
        for (const fs::path& p : files) keys.push_back(p.string());
        ds.regions.push_back(std::move(keys));
    }

    CrossValParams params;
    params.folds = rc.folds;
    params.k = rc.textons < 0 ? default_k : rc.textons;
    params.metric = metric_from_name(rc.distance);
    params.config.filter_size = rc.filter_size;
    params.w = rc.weight;
    params.samples_per_region = rc.samples_per_region;
    params.restarts = rc.restarts;
    params.seed = rc.seed;
    if (names_out) *names_out = ds.class_names;
    return run_crossval(ds, params, [](const std::string& key) { return read_image(key); });
}

void print_crossval(const CrossValResult& res) {
    char line[128];
    for (std::size_t f = 0; f < res.fold_reports.size(); ++f) {
        std::snprintf(line, sizeof line, "fold %zu: global %.2f%% average %.2f%%", f,
                      res.fold_reports[f].global, res.fold_reports[f].average);
        std::cout << line << "\n";
    }
    std::snprintf(line, sizeof line, "mean global: %.2f%% +/- %.2f%%", res.mean_global,
                  res.stddev_global);
    std::cout << line << "\n";
}

nlohmann::ordered_json crossval_json(const CrossValResult& res,
                                     const std::vector<std::string>& names) {
    nlohmann::ordered_json j;
    nlohmann::ordered_json folds = nlohmann::ordered_json::array();
    for (std::size_t f = 0; f < res.fold_reports.size(); ++f)
        folds.push_back(nlohmann::ordered_json::parse(
            metrics_to_json(res.fold_reports[f], names, &res.fold_confusions[f])));
    j["folds"] = std::move(folds);
    j["mean_global"] = res.mean_global;
    j["stddev_global"] = res.stddev_global;
    return j;
}

int cmd_crossval(const RunConfig& rc, const std::string& output) {
    std::vector<std::string> names;
    const CrossValResult res = run_crossval_on_dataset(rc, 60, &names);
    print_crossval(res);
    if (!output.empty()) write_text_file(output, crossval_json(res, names).dump(2) + "\n");
    return 0;
}

// ---------------------------------------------------------------- sweep ----

struct SweepValue {
    std::string text;
    int textons = 0;
    double weight = 0.0;
    int filter_size = 0;
    std::string metric;
};

std::vector<SweepValue> parse_sweep_values(const std::string& axis,
                                           const std::vector<std::string>& raw) {
    std::vector<std::string> values = raw;
    if (values.empty()) {
        if (axis == "textons") values = {"10", "20", "30", "40", "50", "60"};
        else if (axis == "weight")
            for (int i = 1; i <= 15; ++i) {
                char b[16];
                std::snprintf(b, sizeof b, "%.1f", i * 0.1);
                values.push_back(b);
            }
        else if (axis == "filter_size") values = {"5", "7", "9", "11", "13", "15"};
        else if (axis == "metric") values = {"euclidean", "cityblock", "cosine", "correlation"};
    }
    std::vector<SweepValue> out;
    for (const std::string& v : values) {
        SweepValue sv;
        sv.text = v;
        try {
            if (axis == "textons") {
                sv.textons = std::stoi(v);
                if (sv.textons < 1) throw Error("");
            } else if (axis == "weight") {
                sv.weight = std::stod(v);
                if (!(sv.weight >= 0.0)) throw Error("");
            } else if (axis == "filter_size") {
                sv.filter_size = std::stoi(v);
                build_filter_bank(sv.filter_size);  // validates
            } else if (axis == "metric") {
                metric_from_name(v);
                sv.metric = v;
            } else {
                throw Error("sweep: unknown axis '" + axis +
                            "' (expected textons|weight|filter_size|metric)");
            }
        } catch (const Error& e) {
            if (std::string(e.what()).rfind("sweep:", 0) == 0) throw;
            throw Error("sweep: invalid " + axis + " value '" + v + "'");
        } catch (const std::exception&) {
            throw Error("sweep: invalid " + axis + " value '" + v + "'");
        }
        out.push_back(std::move(sv));
    }
    if (out.empty()) throw Error("sweep: no values for axis " + axis);
    return out;
}

// stage timing for one parameter set: features vs mapping+classification,
// measured over every region with a dictionary trained on the whole set
std::pair<double, double> time_stages(const RunConfig& rc, int k, DistanceMetric metric,
                                      const FeatureConfig& cfg, double w) {
    const ClassPalette pal = load_palette(rc.palette);
    const DatasetListing listing = list_cropped_dataset(rc.dataset, pal);

    std::vector<TrainingSample> samples;
    const std::uint64_t sample_stream = mix_seed(rc.seed, 0xA11CE);
    std::uint64_t ordinal = 0;
    for (std::size_t c = 0; c < listing.files.size(); ++c)
        for (const fs::path& file : listing.files[c]) {
            const RgbImage img = read_image(file.string());
            const auto s =
                sample_training_pixels(img, static_cast<int>(c), rc.samples_per_region,
                                       mix_seed(sample_stream, ordinal++), cfg);
            samples.insert(samples.end(), s.begin(), s.end());
        }
    const TextonDictionary dict = train_dictionary(samples, listing.class_names, k, metric, cfg,
                                                   rc.seed, rc.restarts);

    const FilterBank fb = build_filter_bank(cfg.filter_size);
    double t_feat = 0.0, t_map = 0.0;
    for (const auto& files : listing.files)
        for (const fs::path& file : files) {
            const RgbImage img = read_image(file.string());

            auto t0 = std::chrono::steady_clock::now();
            const LabImage lab = rgb_to_lab(img);
            const FeaturePlanes color = extract_color_features(img, lab);
            const FeaturePlanes texture = extract_texture_features(lab, fb);
            t_feat += seconds_since(t0);

            t0 = std::chrono::steady_clock::now();
            const TextonAssignment assign = map_to_textons(color, texture, dict);
            SuperpixelMap one;
            one.width = img.width;
            one.height = img.height;
            one.count = 1;
            one.ids.assign(img.pixel_count(), 0);
            one.pixels.resize(1);
            for (std::size_t i = 0; i < img.pixel_count(); ++i)
                one.pixels[0].push_back(static_cast<int>(i));
            const OccurrenceTable table = accumulate(one, assign);
            (void)mix_and_vote(table, 0, w, static_cast<double>(img.pixel_count()));
            t_map += seconds_since(t0);
        }
    return {t_feat, t_map};
}

int cmd_sweep(const RunConfig& rc, const std::string& axis,
              const std::vector<std::string>& raw_values, const std::string& output) {
    const std::vector<SweepValue> values = parse_sweep_values(axis, raw_values);

    std::ostringstream csv;
    csv << "axis,value,global_accuracy,average_accuracy\n";
    for (const SweepValue& v : values) {
        RunConfig run = rc;
        if (axis == "textons") run.textons = v.textons;
        else if (axis == "weight") run.weight = v.weight;
        else if (axis == "filter_size") run.filter_size = v.filter_size;
        else run.distance = v.metric;

        const CrossValResult res = run_crossval_on_dataset(run, 60, nullptr);
        double avg = 0.0;
        for (const MetricsReport& r : res.fold_reports) avg += r.average;
        avg /= res.fold_reports.size();

        FeatureConfig cfg;
        cfg.filter_size = run.filter_size;
        const auto [t_feat, t_map] =
            time_stages(run, run.textons < 0 ? 60 : run.textons,
                        metric_from_name(run.distance), cfg, run.weight);

        char buf[160];
        std::snprintf(buf, sizeof buf, "%s,%s,%.4f,%.4f", axis.c_str(), v.text.c_str(),
                      res.mean_global, avg);
        csv << buf << "\n";
        std::snprintf(buf, sizeof buf,
                      "%s=%s: global %.2f%% average %.2f%% | features %.3fs mapping %.3fs",
                      axis.c_str(), v.text.c_str(), res.mean_global, avg, t_feat, t_map);
        std::cout << buf << "\n";
    }
    write_text_file(output, csv.str());
    std::cout << "wrote " << output << "\n";
    return 0;
}

std::string find_config_arg(int argc, char** argv) {
    for (int i = 1; i < argc; ++i) {
        const std::string a = argv[i];
        if (a == "--config" && i + 1 < argc) return argv[i + 1];
        if (a.rfind("--config=", 0) == 0) return a.substr(9);
    }
    return {};
}

}  // namespace

int main(int argc, char** argv) {
    RunConfig rc;
    try {
        const std::string config_path = find_config_arg(argc, argv);
        if (!config_path.empty()) apply_config_file(config_path, rc);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }

    CLI::App app{"Texton-based color/texture segmentation"};
    app.require_subcommand(1);
    std::string config_path;  // consumed above; accepted here so parsing succeeds

    std::string train_output = "dictionary.json";
    CLI::App* train = app.add_subcommand("train", "learn a texton dictionary from crops");
    add_common_options(train, rc, config_path);
    train->add_option("--palette", rc.palette, "class palette JSON");
    train->add_option("--dataset", rc.dataset, "root directory of per-class crop folders");
    train->add_option("-o,--output", train_output, "dictionary output path");

    std::string seg_dict, seg_input, seg_output = ".";
    bool dump_superpixels = false;
    CLI::App* segment = app.add_subcommand("segment", "segment images with a dictionary");
    add_common_options(segment, rc, config_path);
    segment->add_option("--palette", rc.palette, "class palette JSON");
    segment->add_option("-d,--dictionary", seg_dict, "dictionary JSON")->required();
    segment->add_option("input", seg_input, "image file or directory of frames")->required();
    segment->add_option("-o,--output-dir", seg_output, "output directory");
    segment->add_flag("--dump-superpixels", dump_superpixels,
                      "also write boundary overlay and 16-bit segment ids");

    std::string eval_dict, eval_manifest, eval_output = ".";
    CLI::App* evaluate = app.add_subcommand("evaluate", "score predictions against ground truth");
    add_common_options(evaluate, rc, config_path);
    evaluate->add_option("--palette", rc.palette, "class palette JSON");
    evaluate->add_option("-d,--dictionary", eval_dict, "dictionary JSON")->required();
    evaluate->add_option("--manifest", eval_manifest, "TSV of image_path<TAB>label_path")
        ->required();
    evaluate->add_option("-o,--output-dir", eval_output, "output directory");

    std::string cv_output;
    CLI::App* crossval = app.add_subcommand("crossval", "k-fold cross-validation on crops");
    add_common_options(crossval, rc, config_path);
    crossval->add_option("--palette", rc.palette, "class palette JSON");
    crossval->add_option("--dataset", rc.dataset, "root directory of per-class crop folders");
    crossval->add_option("--folds", rc.folds, "fold count");
    crossval->add_option("-o,--output", cv_output, "optional JSON report path");

    std::string sweep_axis, sweep_output = "sweep.csv";
    std::vector<std::string> sweep_values;
    CLI::App* sweep = app.add_subcommand("sweep", "cross-validated parameter sweep");
    add_common_options(sweep, rc, config_path);
    sweep->add_option("--palette", rc.palette, "class palette JSON");
    sweep->add_option("--dataset", rc.dataset, "root directory of per-class crop folders");
    sweep->add_option("--folds", rc.folds, "fold count");
    sweep->add_option("--axis", sweep_axis, "textons|weight|filter_size|metric")->required();
    sweep->add_option("--values", sweep_values, "axis values (comma separated)")
        ->delimiter(',');
    sweep->add_option("-o,--output", sweep_output, "CSV output path");

    CLI11_PARSE(app, argc, argv);

    try {
        if (train->parsed()) return cmd_train(rc, train_output);
        if (segment->parsed())
            return cmd_segment(rc, seg_dict, seg_input, seg_output, dump_superpixels);
        if (evaluate->parsed()) return cmd_evaluate(rc, eval_dict, eval_manifest, eval_output);
        if (crossval->parsed()) return cmd_crossval(rc, cv_output);
        if (sweep->parsed()) return cmd_sweep(rc, sweep_axis, sweep_values, sweep_output);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}

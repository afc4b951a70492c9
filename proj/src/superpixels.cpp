#include "texseg/superpixels.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>

#include "texseg/errors.hpp"

namespace texseg {
namespace {

// separable Gaussian on one channel, replicate borders, x then y
std::vector<double> smooth_channel(const std::vector<double>& src, int w, int h, double sigma) {
    if (sigma <= 0.0) return src;
    const int len = static_cast<int>(std::ceil(sigma * 4.0)) + 1;
    std::vector<double> mask(len);
    for (int i = 0; i < len; ++i) mask[i] = std::exp(-0.5 * (i / sigma) * (i / sigma));
    double sum = mask[0];
    for (int i = 1; i < len; ++i) sum += 2.0 * mask[i];
    for (double& m : mask) m /= sum;

    auto clamp_x = [w](int x) { return std::clamp(x, 0, w - 1); };
    auto clamp_y = [h](int y) { return std::clamp(y, 0, h - 1); };

    std::vector<double> tmp(src.size()), dst(src.size());
    for (int y = 0; y < h; ++y) {
        const double* row = &src[static_cast<std::size_t>(y) * w];
        double* out = &tmp[static_cast<std::size_t>(y) * w];
        for (int x = 0; x < w; ++x) {
            double acc = mask[0] * row[x];
            for (int i = 1; i < len; ++i)
                acc += mask[i] * (row[clamp_x(x - i)] + row[clamp_x(x + i)]);
            out[x] = acc;
        }
    }
    for (int y = 0; y < h; ++y) {
        double* out = &dst[static_cast<std::size_t>(y) * w];
        for (int x = 0; x < w; ++x) {
            double acc = mask[0] * tmp[static_cast<std::size_t>(y) * w + x];
            for (int i = 1; i < len; ++i)
                acc += mask[i] * (tmp[static_cast<std::size_t>(clamp_y(y - i)) * w + x] +
                                  tmp[static_cast<std::size_t>(clamp_y(y + i)) * w + x]);
            out[x] = acc;
        }
    }
    return dst;
}

struct Edge {
    double w;
    int a, b;
};

class UnionFind {
  public:
    explicit UnionFind(int n) : parent_(n), rank_(n, 0), size_(n, 1) {
        std::iota(parent_.begin(), parent_.end(), 0);
    }
    int find(int x) {
        int root = x;
        while (parent_[root] != root) root = parent_[root];
        while (parent_[x] != root) {
            int next = parent_[x];
            parent_[x] = root;
            x = next;
        }
        return root;
    }
    int join(int a, int b) {
        if (rank_[a] < rank_[b]) std::swap(a, b);
        parent_[b] = a;
        size_[a] += size_[b];
        if (rank_[a] == rank_[b]) ++rank_[a];
        return a;
    }
    int size(int root) const { return size_[root]; }

  private:
    std::vector<int> parent_, rank_, size_;
};

}  // namespace

SuperpixelMap segment_graph_based(const RgbImage& img, const SegParams& p) {
    const int w = img.width, h = img.height;
    const int n = w * h;
    if (n < p.min_size)
        throw ImageTooSmall("segment_graph_based: " + std::to_string(w) + "x" +
                            std::to_string(h) + " image is smaller than min_size " +
                            std::to_string(p.min_size));

    std::vector<double> chan[3];
    for (int c = 0; c < 3; ++c) {
        std::vector<double> raw(n);
        for (int i = 0; i < n; ++i) raw[i] = img.data[static_cast<std::size_t>(i) * 3 + c];
        chan[c] = smooth_channel(raw, w, h, p.sigma);
    }

    auto weight = [&](int a, int b) {
        const double dr = chan[0][a] - chan[0][b];
        const double dg = chan[1][a] - chan[1][b];
        const double db = chan[2][a] - chan[2][b];
        return std::sqrt(dr * dr + dg * dg + db * db);
    };

    std::vector<Edge> edges;
    edges.reserve(static_cast<std::size_t>(n) * 4);
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            const int a = y * w + x;
            if (x + 1 < w) edges.push_back({weight(a, a + 1), a, a + 1});
            if (y + 1 < h) edges.push_back({weight(a, a + w), a, a + w});
            if (x + 1 < w && y + 1 < h) edges.push_back({weight(a, a + w + 1), a, a + w + 1});
            if (x > 0 && y + 1 < h) edges.push_back({weight(a, a + w - 1), a, a + w - 1});
        }
    }
    std::sort(edges.begin(), edges.end(), [](const Edge& l, const Edge& r) {
        if (l.w != r.w) return l.w < r.w;
        if (l.a != r.a) return l.a < r.a;
        return l.b < r.b;
    });

    UnionFind uf(n);
    std::vector<double> thr(n, p.k);  // tau of a singleton is k/1
    for (const Edge& e : edges) {
        const int ra = uf.find(e.a), rb = uf.find(e.b);
        if (ra == rb) continue;
        if (e.w <= thr[ra] && e.w <= thr[rb]) {
            const int r = uf.join(ra, rb);
            thr[r] = e.w + p.k / uf.size(r);
        }
    }
    for (const Edge& e : edges) {
        const int ra = uf.find(e.a), rb = uf.find(e.b);
        if (ra == rb) continue;
        if (uf.size(ra) < p.min_size || uf.size(rb) < p.min_size) uf.join(ra, rb);
    }

    SuperpixelMap map;
    map.width = w;
    map.height = h;
    map.ids.assign(n, -1);
    std::vector<int> root_id(n, -1);
    for (int i = 0; i < n; ++i) {
        const int r = uf.find(i);
        if (root_id[r] < 0) {
            root_id[r] = map.count++;
            map.pixels.emplace_back();
        }
        map.ids[i] = root_id[r];
        map.pixels[root_id[r]].push_back(i);
    }
    return map;
}

SuperpixelMap singleton_superpixels(int width, int height) {
    if (width < 1 || height < 1) throw ImageTooSmall("singleton_superpixels: empty image");
    SuperpixelMap map;
    map.width = width;
    map.height = height;
    const int n = width * height;
    map.count = n;
    map.ids.resize(n);
    std::iota(map.ids.begin(), map.ids.end(), 0);
    map.pixels.resize(n);
    for (int i = 0; i < n; ++i) map.pixels[i].push_back(i);
    return map;
}

}  // namespace texseg

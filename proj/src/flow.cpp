#include "memk/flow.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>

#include "memk/error.hpp"
#include "memk/textio.hpp"

namespace fs = std::filesystem;

namespace memk {

namespace {

struct Derivatives {
    std::vector<double> ix, iy, it;
};

// 2x2x2 stencils averaged over the two frames, indices clamped at the
// right/bottom border.
Derivatives image_derivatives(const FrameGray& a, const FrameGray& b) {
    const size_t w = a.width, h = a.height;
    Derivatives d;
    d.ix.resize(w * h);
    d.iy.resize(w * h);
    d.it.resize(w * h);
    for (size_t y = 0; y < h; ++y) {
        const size_t y1 = std::min(y + 1, h - 1);
        for (size_t x = 0; x < w; ++x) {
            const size_t x1 = std::min(x + 1, w - 1);
            const double a00 = a.at(y, x), a01 = a.at(y, x1), a10 = a.at(y1, x),
                         a11 = a.at(y1, x1);
            const double b00 = b.at(y, x), b01 = b.at(y, x1), b10 = b.at(y1, x),
                         b11 = b.at(y1, x1);
            const size_t i = y * w + x;
            d.ix[i] = 0.25 * ((a01 - a00) + (a11 - a10) + (b01 - b00) + (b11 - b10));
            d.iy[i] = 0.25 * ((a10 - a00) + (a11 - a01) + (b10 - b00) + (b11 - b01));
            d.it[i] = 0.25 * ((b00 - a00) + (b10 - a10) + (b01 - a01) + (b11 - a11));
        }
    }
    return d;
}

void neighbor_average(const std::vector<double>& f, std::vector<double>& out, size_t w, size_t h) {
    for (size_t y = 0; y < h; ++y) {
        const size_t yu = y == 0 ? 0 : y - 1;
        const size_t yd = y + 1 >= h ? h - 1 : y + 1;
        for (size_t x = 0; x < w; ++x) {
            const size_t xl = x == 0 ? 0 : x - 1;
            const size_t xr = x + 1 >= w ? w - 1 : x + 1;
            out[y * w + x] = 0.25 * (f[yu * w + x] + f[yd * w + x] + f[y * w + xl] + f[y * w + xr]);
        }
    }
}

} // namespace

FlowField horn_schunck(const FrameGray& a, const FrameGray& b, const FlowParams& params) {
    if (a.width != b.width || a.height != b.height) {
        throw Error("horn_schunck: frame dimensions differ");
    }
    if (a.width < 2 || a.height < 2) {
        throw Error("horn_schunck: frames must be at least 2x2");
    }
    if (!(params.alpha > 0.0)) throw Error("horn_schunck: alpha must be positive");

    const size_t w = a.width, h = a.height, n = w * h;
    const Derivatives d = image_derivatives(a, b);
    std::vector<double> denom(n);
    for (size_t i = 0; i < n; ++i) {
        denom[i] = params.alpha * params.alpha + d.ix[i] * d.ix[i] + d.iy[i] * d.iy[i];
    }

    FlowField flow;
    flow.width = w;
    flow.height = h;
    flow.u.assign(n, 0.0);
    flow.v.assign(n, 0.0);
    std::vector<double> ubar(n), vbar(n);
    for (size_t iter = 0; iter < params.iterations; ++iter) {
        neighbor_average(flow.u, ubar, w, h);
        neighbor_average(flow.v, vbar, w, h);
        for (size_t i = 0; i < n; ++i) {
            const double t = (d.ix[i] * ubar[i] + d.iy[i] * vbar[i] + d.it[i]) / denom[i];
            flow.u[i] = ubar[i] - d.ix[i] * t;
            flow.v[i] = vbar[i] - d.iy[i] * t;
        }
    }
    return flow;
}

double mean_flow_magnitude(const std::vector<FrameGray>& frames, const FlowParams& params) {
    if (frames.size() < 2) {
        throw Error("mean_flow_magnitude: need at least 2 frames, got " +
                    std::to_string(frames.size()));
    }
    for (size_t i = 1; i < frames.size(); ++i) {
        if (frames[i].width != frames[0].width || frames[i].height != frames[0].height) {
            throw Error("mean_flow_magnitude: frame " + std::to_string(i) +
                        " dimensions differ from frame 0");
        }
    }
    double sum = 0.0;
    size_t count = 0;
    for (size_t i = 0; i + 1 < frames.size(); ++i) {
        const FlowField flow = horn_schunck(frames[i], frames[i + 1], params);
        for (size_t p = 0; p < flow.u.size(); ++p) {
            sum += std::sqrt(flow.u[p] * flow.u[p] + flow.v[p] * flow.v[p]);
        }
        count += flow.u.size();
    }
    return sum / static_cast<double>(count);
}

std::vector<HistogramBin> flow_histogram(const std::vector<double>& values, double bin_width) {
    if (!(bin_width > 0.0)) throw Error("flow_histogram: bin_width must be positive");
    std::vector<HistogramBin> bins;
    if (values.empty()) return bins;

    double max_value = 0.0;
    for (double v : values) {
        if (v < 0.0) throw Error("flow_histogram: negative value " + format_real17(v));
        max_value = std::max(max_value, v);
    }
    const size_t n_bins = static_cast<size_t>(std::floor(max_value / bin_width)) + 1;
    bins.resize(n_bins);
    for (size_t k = 0; k < n_bins; ++k) {
        bins[k].low = static_cast<double>(k) * bin_width;
        bins[k].high = static_cast<double>(k + 1) * bin_width;
    }
    for (double v : values) {
        size_t k = static_cast<size_t>(std::floor(v / bin_width));
        if (k >= n_bins) k = n_bins - 1; // floor rounding at the exact max
        ++bins[k].count;
    }
    return bins;
}

MotionStatsResult motion_stats_for_root(const std::string& root, const FlowParams& params) {
    if (!fs::is_directory(root)) throw Error("motion: frames root is not a directory: " + root);

    std::vector<std::string> video_dirs;
    for (const auto& entry : fs::directory_iterator(root)) {
        if (entry.is_directory()) video_dirs.push_back(entry.path().filename().string());
    }
    std::sort(video_dirs.begin(), video_dirs.end());

    MotionStatsResult result;
    for (const std::string& video : video_dirs) {
        std::vector<std::string> frame_paths;
        for (const auto& entry : fs::directory_iterator(fs::path(root) / video)) {
            if (entry.is_regular_file() && entry.path().extension() == ".pgm") {
                frame_paths.push_back(entry.path().string());
            }
        }
        std::sort(frame_paths.begin(), frame_paths.end());
        if (frame_paths.size() < 2) {
            result.skipped.push_back(video);
            continue;
        }
        std::vector<FrameGray> frames;
        frames.reserve(frame_paths.size());
        for (const std::string& p : frame_paths) frames.push_back(load_frame(p));
        result.stats.push_back({video, mean_flow_magnitude(frames, params)});
    }
    return result;
}

void write_flow_stats_csv(const std::string& path, const std::vector<VideoFlowStat>& stats) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw Error("cannot write flow stats: " + path);
    for (const VideoFlowStat& s : stats) {
        out << s.video_id << ',' << format_real17(s.mean_flow_magnitude) << '\n';
    }
    if (!out.good()) throw Error("flow stats write failed: " + path);
}

void write_histogram_csv(const std::string& path, const std::vector<HistogramBin>& bins) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw Error("cannot write histogram: " + path);
    for (const HistogramBin& b : bins) {
        out << format_real17(b.low) << ',' << format_real17(b.high) << ',' << b.count << '\n';
    }
    if (!out.good()) throw Error("histogram write failed: " + path);
}

} // namespace memk

#pragma once

#include <string>
#include <vector>

#include "memk/pgm.hpp"

namespace memk {

// Per-pixel displacement between two frames, in pixels/frame.
struct FlowField {
    size_t width = 0;
    size_t height = 0;
    std::vector<double> u; // horizontal, +x rightward
    std::vector<double> v; // vertical, +y downward
};

struct FlowParams {
    double alpha = 1.0;       // smoothness weight
    size_t iterations = 100;  // fixed-point sweeps
};

// Classic Horn-Schunck: derivatives from the 2x2x2 stencils, zero-initialized
// flow, and per sweep
//   u <- ubar - Ix*(Ix*ubar + Iy*vbar + It) / (alpha^2 + Ix^2 + Iy^2)
// (symmetrically for v) where ubar/vbar are 4-neighbor averages with
// replicated borders. Single scale; large displacements are underestimated,
// which is acceptable for a relative motion statistic.
FlowField horn_schunck(const FrameGray& a, const FrameGray& b, const FlowParams& params);

// Mean of sqrt(u^2+v^2) over all pixels of all consecutive frame pairs.
double mean_flow_magnitude(const std::vector<FrameGray>& frames, const FlowParams& params);

struct HistogramBin {
    double low = 0.0;
    double high = 0.0;
    size_t count = 0;
};

// Half-open bins [k*w, (k+1)*w) that run contiguously from 0 through the
// maximum value; counts sum to the input length. Empty input, empty
// histogram.
std::vector<HistogramBin> flow_histogram(const std::vector<double>& values, double bin_width);

struct VideoFlowStat {
    std::string video_id;
    double mean_flow_magnitude = 0.0;
};

struct MotionStatsResult {
    std::vector<VideoFlowStat> stats;    // sorted by video_id
    std::vector<std::string> skipped;    // videos with fewer than 2 frames
};

// Scans root for one subdirectory of *.pgm frames per video (frames in
// lexicographic filename order) and computes the per-video statistic.
MotionStatsResult motion_stats_for_root(const std::string& root, const FlowParams& params);

void write_flow_stats_csv(const std::string& path, const std::vector<VideoFlowStat>& stats);
void write_histogram_csv(const std::string& path, const std::vector<HistogramBin>& bins);

} // namespace memk

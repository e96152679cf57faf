#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace memk {

// Grayscale frame with row-major pixels in [0,1].
struct FrameGray {
    size_t width = 0;
    size_t height = 0;
    std::vector<double> pixels;

    double at(size_t y, size_t x) const { return pixels[y * width + x]; }
    double& at(size_t y, size_t x) { return pixels[y * width + x]; }
};

// Binary PGM (P5, maxval 255) only; pixels scaled to [0,1] by /255.
// ASCII PGM (P2) and other magics are rejected as unsupported.
FrameGray load_frame(const std::string& path);

// Writes P5/255, clamping and rounding pixel values.
void save_frame(const std::string& path, const FrameGray& frame);

} // namespace memk

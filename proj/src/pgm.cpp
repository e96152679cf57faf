#include "memk/pgm.hpp"

#include <cctype>
#include <cmath>
#include <fstream>

#include "memk/error.hpp"

namespace memk {

namespace {

// Reads the next header token, skipping whitespace and '#' comments.
std::string next_token(std::istream& in) {
    std::string tok;
    int c;
    while ((c = in.get()) != EOF) {
        if (c == '#') {
            while ((c = in.get()) != EOF && c != '\n') {
            }
            continue;
        }
        if (std::isspace(c)) {
            if (!tok.empty()) break;
            continue;
        }
        tok.push_back(static_cast<char>(c));
    }
    return tok;
}

size_t parse_dim(const std::string& tok, const std::string& path, const char* what) {
    if (tok.empty()) throw Error(path + ": missing " + what + " in PGM header");
    size_t value = 0;
    for (char c : tok) {
        if (!std::isdigit(static_cast<unsigned char>(c))) {
            throw Error(path + ": bad " + what + " '" + tok + "' in PGM header");
        }
        value = value * 10 + static_cast<size_t>(c - '0');
    }
    if (value == 0) throw Error(path + ": zero " + what + " in PGM header");
    return value;
}

} // namespace

FrameGray load_frame(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open frame: " + path);

    const std::string magic = next_token(in);
    if (magic != "P5") {
        throw Error(path + ": unsupported format '" + magic + "' (only binary PGM P5 is read)");
    }
    FrameGray frame;
    frame.width = parse_dim(next_token(in), path, "width");
    frame.height = parse_dim(next_token(in), path, "height");
    const size_t maxval = parse_dim(next_token(in), path, "maxval");
    if (maxval != 255) {
        throw Error(path + ": unsupported maxval " + std::to_string(maxval) + " (expected 255)");
    }
    // One whitespace byte separates the header from the payload; next_token
    // already consumed it.

    const size_t expected = frame.width * frame.height;
    std::vector<unsigned char> raw(expected);
    in.read(reinterpret_cast<char*>(raw.data()), static_cast<std::streamsize>(expected));
    const size_t actual = static_cast<size_t>(in.gcount());
    if (actual != expected) {
        throw Error(path + ": truncated pixel payload (expected " + std::to_string(expected) +
                    " bytes, found " + std::to_string(actual) + ")");
    }

    frame.pixels.resize(expected);
    for (size_t i = 0; i < expected; ++i) {
        double v = static_cast<double>(raw[i]) / 255.0;
        frame.pixels[i] = v < 0.0 ? 0.0 : (v > 1.0 ? 1.0 : v);
    }
    return frame;
}

void save_frame(const std::string& path, const FrameGray& frame) {
    if (frame.pixels.size() != frame.width * frame.height) {
        throw Error("save_frame: pixel count does not match dimensions");
    }
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write frame: " + path);
    out << "P5\n" << frame.width << ' ' << frame.height << "\n255\n";
    std::vector<unsigned char> raw(frame.pixels.size());
    for (size_t i = 0; i < frame.pixels.size(); ++i) {
        double v = frame.pixels[i];
        v = v < 0.0 ? 0.0 : (v > 1.0 ? 1.0 : v);
        raw[i] = static_cast<unsigned char>(std::lround(v * 255.0));
    }
    out.write(reinterpret_cast<const char*>(raw.data()), static_cast<std::streamsize>(raw.size()));
    if (!out.good()) throw Error("frame write failed: " + path);
}

} // namespace memk

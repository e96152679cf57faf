// memk-make-synthetic - fixture generator for experiments and smoke tests.
//
// regress: feature/label CSVs where both scores follow sigmoid(w.x) plus
//          Gaussian noise. --w-perturb derives a related task by nudging
//          the ground-truth weights, which is how the pretrain/fine-tune
//          experiment builds its task pair.
// frames:  a directory of PGM frames containing a horizontal sinusoid
//          translating at a fixed speed (0 = static scene).

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "memk/data.hpp"
#include "memk/error.hpp"
#include "memk/pgm.hpp"
#include "memk/rng.hpp"
#include "memk/textio.hpp"

namespace fs = std::filesystem;
using namespace memk;

namespace {

struct RegressCli {
    std::string out_prefix;
    size_t n = 500;
    size_t dim = 16;
    double noise = 0.02;
    double w_perturb = 0.0;
    uint64_t w_seed = 7;
    uint64_t x_seed = 3;
    uint64_t perturb_seed = 11;
    std::string id_prefix = "v";
};

int cmd_regress(const RegressCli& cli) {
    Rng w_rng(cli.w_seed);
    std::vector<double> w(cli.dim);
    for (double& wi : w) wi = w_rng.normal(0.0, 1.0);
    if (cli.w_perturb != 0.0) {
        Rng p_rng(cli.perturb_seed);
        for (double& wi : w) wi += cli.w_perturb * p_rng.normal(0.0, 1.0);
    }

    LabeledDataset ds;
    ds.features = Matrix(cli.n, cli.dim);
    Rng x_rng(cli.x_seed);
    for (size_t i = 0; i < cli.n; ++i) {
        ds.ids.push_back(cli.id_prefix + std::to_string(i));
        double z = 0.0;
        for (size_t j = 0; j < cli.dim; ++j) {
            const double x = x_rng.normal(0.0, 1.0);
            ds.features.at(i, j) = x;
            z += w[j] * x;
        }
        double y = 1.0 / (1.0 + std::exp(-z)) + x_rng.normal(0.0, cli.noise);
        y = y < 0.0 ? 0.0 : (y > 1.0 ? 1.0 : y);
        ds.short_term.push_back(y);
        ds.long_term.push_back(y);
    }
    write_features(cli.out_prefix + ".features.csv", ds);
    write_labels(cli.out_prefix + ".labels.csv", ds);
    std::cout << "wrote " << cli.n << " examples to " << cli.out_prefix << ".{features,labels}.csv\n";
    return 0;
}

struct FramesCli {
    std::string dir;
    size_t frames = 3;
    size_t width = 64;
    size_t height = 64;
    double period = 16.0;
    double speed = 1.0;
};

int cmd_frames(const FramesCli& cli) {
    fs::create_directories(cli.dir);
    for (size_t t = 0; t < cli.frames; ++t) {
        FrameGray frame;
        frame.width = cli.width;
        frame.height = cli.height;
        frame.pixels.resize(cli.width * cli.height);
        const double shift = cli.speed * static_cast<double>(t);
        for (size_t y = 0; y < cli.height; ++y) {
            for (size_t x = 0; x < cli.width; ++x) {
                const double phase =
                    2.0 * 3.141592653589793238462643 * (static_cast<double>(x) - shift) / cli.period;
                frame.at(y, x) = 0.5 + 0.5 * std::sin(phase);
            }
        }
        char name[32];
        std::snprintf(name, sizeof(name), "frame_%03zu.pgm", t);
        save_frame((fs::path(cli.dir) / name).string(), frame);
    }
    std::cout << "wrote " << cli.frames << " frames to " << cli.dir << "\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"synthetic fixture generator"};
    app.require_subcommand(1);

    RegressCli regress_cli;
    auto* regress = app.add_subcommand("regress", "sigmoid(w.x) regression fixture");
    regress->add_option("--out-prefix", regress_cli.out_prefix, "output path prefix")->required();
    regress->add_option("--n", regress_cli.n, "example count")->capture_default_str();
    regress->add_option("--dim", regress_cli.dim, "feature dimension")->capture_default_str();
    regress->add_option("--noise", regress_cli.noise, "label noise stddev")->capture_default_str();
    regress->add_option("--w-seed", regress_cli.w_seed, "weight seed")->capture_default_str();
    regress->add_option("--x-seed", regress_cli.x_seed, "feature/noise seed")->capture_default_str();
    regress->add_option("--w-perturb", regress_cli.w_perturb, "weight perturbation scale")
        ->capture_default_str();
    regress->add_option("--perturb-seed", regress_cli.perturb_seed, "perturbation seed")
        ->capture_default_str();
    regress->add_option("--id-prefix", regress_cli.id_prefix, "video id prefix")
        ->capture_default_str();

    FramesCli frames_cli;
    auto* frames = app.add_subcommand("frames", "translating sinusoid PGM frames");
    frames->add_option("--dir", frames_cli.dir, "output frame directory")->required();
    frames->add_option("--frames", frames_cli.frames, "frame count")->capture_default_str();
    frames->add_option("--width", frames_cli.width, "frame width")->capture_default_str();
    frames->add_option("--height", frames_cli.height, "frame height")->capture_default_str();
    frames->add_option("--period", frames_cli.period, "sinusoid period in pixels")
        ->capture_default_str();
    frames->add_option("--speed", frames_cli.speed, "translation in pixels/frame")
        ->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (app.got_subcommand(regress)) return cmd_regress(regress_cli);
        if (app.got_subcommand(frames)) return cmd_frames(frames_cli);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}

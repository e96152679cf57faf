// Shared test fixtures and independent oracles. The oracles here are
// deliberately separate implementations from the library paths they
// check: ranks by pairwise counting instead of sorting, correlation from
// raw moments instead of centered sums, gradients from central finite
// differences instead of backpropagation.
#pragma once

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <unistd.h>
#include <vector>

#include "memk/data.hpp"
#include "memk/losses.hpp"
#include "memk/model.hpp"
#include "memk/rng.hpp"
#include "memk/train.hpp"

namespace testutil {

namespace fs = std::filesystem;

class TempDir {
  public:
    TempDir() {
        static int counter = 0;
        std::ostringstream name;
        name << "memk_test_" << ::getpid() << "_" << counter++;
        path_ = fs::temp_directory_path() / name.str();
        fs::create_directories(path_);
    }
    ~TempDir() {
        std::error_code ec;
        fs::remove_all(path_, ec);
    }
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;

    const fs::path& path() const { return path_; }
    std::string file(const std::string& name) const { return (path_ / name).string(); }

  private:
    fs::path path_;
};

inline void write_text(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::trunc | std::ios::binary);
    out << content;
}

inline std::string read_bytes(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    return std::string((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
}

// ---------------------------------------------------------------------
// Synthetic datasets

inline std::vector<double> make_weights(size_t dim, uint64_t seed) {
    memk::Rng rng(seed);
    std::vector<double> w(dim);
    for (double& wi : w) wi = rng.normal(0.0, 1.0);
    return w;
}

// Both score columns carry sigmoid(w.x) + Gaussian noise, clamped to [0,1].
inline memk::LabeledDataset make_sigmoid_dataset(size_t n, const std::vector<double>& w,
                                                 double noise, uint64_t seed,
                                                 const std::string& id_prefix = "v") {
    memk::LabeledDataset ds;
    const size_t dim = w.size();
    ds.features = memk::Matrix(n, dim);
    memk::Rng rng(seed);
    for (size_t i = 0; i < n; ++i) {
        ds.ids.push_back(id_prefix + std::to_string(i));
        double z = 0.0;
        for (size_t j = 0; j < dim; ++j) {
            const double x = rng.normal(0.0, 1.0);
            ds.features.at(i, j) = x;
            z += w[j] * x;
        }
        double y = 1.0 / (1.0 + std::exp(-z)) + (noise > 0.0 ? rng.normal(0.0, noise) : 0.0);
        y = y < 0.0 ? 0.0 : (y > 1.0 ? 1.0 : y);
        ds.short_term.push_back(y);
        ds.long_term.push_back(y);
    }
    return ds;
}

inline memk::LabeledDataset make_constant_dataset(size_t n, size_t dim, double value,
                                                  uint64_t seed) {
    memk::LabeledDataset ds;
    ds.features = memk::Matrix(n, dim);
    memk::Rng rng(seed);
    for (size_t i = 0; i < n; ++i) {
        ds.ids.push_back("c" + std::to_string(i));
        for (size_t j = 0; j < dim; ++j) ds.features.at(i, j) = rng.normal(0.0, 1.0);
        ds.short_term.push_back(value);
        ds.long_term.push_back(value);
    }
    return ds;
}

// ---------------------------------------------------------------------
// Brute-force metric oracles

inline std::vector<double> ranks_bruteforce(const std::vector<double>& v) {
    std::vector<double> r(v.size());
    for (size_t i = 0; i < v.size(); ++i) {
        size_t less = 0, equal = 0;
        for (size_t j = 0; j < v.size(); ++j) {
            if (v[j] < v[i]) ++less;
            if (v[j] == v[i]) ++equal;
        }
        r[i] = static_cast<double>(less + 1) + (static_cast<double>(equal) - 1.0) / 2.0;
    }
    return r;
}

inline bool is_constant(const std::vector<double>& v) {
    for (double x : v) {
        if (x != v.front()) return false;
    }
    return true;
}

// Raw-moment Pearson; returns NaN for zero variance.
inline double pearson_bruteforce(const std::vector<double>& x, const std::vector<double>& y) {
    const double n = static_cast<double>(x.size());
    double sx = 0, sy = 0, sxx = 0, syy = 0, sxy = 0;
    for (size_t i = 0; i < x.size(); ++i) {
        sx += x[i];
        sy += y[i];
        sxx += x[i] * x[i];
        syy += y[i] * y[i];
        sxy += x[i] * y[i];
    }
    const double vx = n * sxx - sx * sx;
    const double vy = n * syy - sy * sy;
    if (vx <= 0.0 || vy <= 0.0) return std::nan("");
    return (n * sxy - sx * sy) / std::sqrt(vx * vy);
}

inline double spearman_bruteforce(const std::vector<double>& a, const std::vector<double>& b) {
    return pearson_bruteforce(ranks_bruteforce(a), ranks_bruteforce(b));
}

inline double mse_bruteforce(const std::vector<double>& a, const std::vector<double>& b) {
    double acc = 0.0;
    for (size_t i = 0; i < a.size(); ++i) acc += (a[i] - b[i]) * (a[i] - b[i]);
    return acc / static_cast<double>(a.size());
}

// ---------------------------------------------------------------------
// Finite-difference gradient oracle

struct GradCheckResult {
    double max_rel_err = 0.0;
    std::string worst = "";
    size_t checked = 0;
};

inline double grad_rel_err(double analytic, double numeric) {
    const double scale = std::max(std::abs(analytic), std::abs(numeric));
    if (scale < 1e-9) return 0.0;
    return std::abs(analytic - numeric) / scale;
}

// Central differences with step h over every trainable parameter and
// every input element. Dropout must be disabled (the loss would be
// stochastic otherwise); train-mode BatchNorm is fine because its output
// depends only on parameters and the batch.
inline GradCheckResult gradient_check(const std::vector<size_t>& dims, uint64_t seed,
                                      size_t batch, memk::LossKind kind, double h = 1e-6) {
    using namespace memk;
    MlpModel model = init_model(dims, seed, 0.0);
    Rng rng(derive_seed(seed, 77));
    Matrix x(batch, dims.front());
    for (double& v : x.data) v = rng.normal(0.0, 1.0);

    Matrix pred = forward(model, x, Mode::kTrain);
    // Targets sit 0.1 away from the initial predictions so the L1 kink is
    // never crossed by +-h parameter nudges.
    Matrix target(batch, 1);
    for (size_t i = 0; i < batch; ++i) {
        target.at(i, 0) = pred.at(i, 0) + (i % 2 == 0 ? 0.1 : -0.1);
    }

    auto loss_at = [&]() {
        Matrix p = forward(model, x, Mode::kTrain);
        return (kind == LossKind::kL1 ? l1_loss(p, target) : mse_loss(p, target)).loss;
    };

    LossGrad lg = kind == LossKind::kL1 ? l1_loss(pred, target) : mse_loss(pred, target);
    Matrix input_grad = backward(model, lg.grad);

    std::vector<std::vector<double>> analytic;
    for (const ParamRef& ref : trainable_params(model)) analytic.push_back(*ref.grads);

    GradCheckResult result;
    auto record = [&](double a, double fd, const std::string& name) {
        const double err = grad_rel_err(a, fd);
        ++result.checked;
        if (err > result.max_rel_err) {
            result.max_rel_err = err;
            result.worst = name;
        }
    };

    std::vector<ParamRef> refs = trainable_params(model);
    for (size_t r = 0; r < refs.size(); ++r) {
        std::vector<double>& values = *refs[r].values;
        for (size_t i = 0; i < values.size(); ++i) {
            const double orig = values[i];
            values[i] = orig + h;
            const double lp = loss_at();
            values[i] = orig - h;
            const double lm = loss_at();
            values[i] = orig;
            record(analytic[r][i], (lp - lm) / (2.0 * h),
                   refs[r].name + "[" + std::to_string(i) + "]");
        }
    }
    for (size_t i = 0; i < x.data.size(); ++i) {
        const double orig = x.data[i];
        x.data[i] = orig + h;
        const double lp = loss_at();
        x.data[i] = orig - h;
        const double lm = loss_at();
        x.data[i] = orig;
        record(input_grad.data[i], (lp - lm) / (2.0 * h), "input[" + std::to_string(i) + "]");
    }
    return result;
}

// ---------------------------------------------------------------------
// CLI subprocess runner

struct CliResult {
    int exit_code = -1;
    std::string out;
    std::string err;
};

inline CliResult run_command(const std::string& command, const fs::path& workdir) {
    const std::string out_path = (workdir / "_stdout.txt").string();
    const std::string err_path = (workdir / "_stderr.txt").string();
    const std::string full = "cd '" + workdir.string() + "' && " + command + " > '" + out_path +
                             "' 2> '" + err_path + "'";
    const int raw = std::system(full.c_str());
    CliResult r;
    r.exit_code = (raw == -1) ? -1 : WEXITSTATUS(raw);
    r.out = read_bytes(out_path);
    r.err = read_bytes(err_path);
    return r;
}

} // namespace testutil

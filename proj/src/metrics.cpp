#include "memk/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "memk/error.hpp"

namespace memk {

namespace {

void require_finite(const std::vector<double>& v, const char* side) {
    for (double x : v) {
        if (!std::isfinite(x)) {
            throw Error(std::string("metrics: non-finite value on ") + side + " side");
        }
    }
}

void require_pair_shape(const ScorePairs& pairs, size_t min_n) {
    if (pairs.predicted.size() != pairs.actual.size()) {
        throw Error("metrics: predicted and actual lengths differ (" +
                    std::to_string(pairs.predicted.size()) + " vs " +
                    std::to_string(pairs.actual.size()) + ")");
    }
    if (pairs.predicted.size() < min_n) {
        throw Error("metrics: need at least " + std::to_string(min_n) + " pairs, got " +
                    std::to_string(pairs.predicted.size()));
    }
    require_finite(pairs.predicted, "predicted");
    require_finite(pairs.actual, "actual");
}

double pearson_checked(const std::vector<double>& x, const std::vector<double>& y,
                       const char* what) {
    const size_t n = x.size();
    double mean_x = std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(n);
    double mean_y = std::accumulate(y.begin(), y.end(), 0.0) / static_cast<double>(n);
    double sxy = 0.0, sxx = 0.0, syy = 0.0;
    for (size_t i = 0; i < n; ++i) {
        const double dx = x[i] - mean_x;
        const double dy = y[i] - mean_y;
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if (sxx == 0.0 || syy == 0.0) {
        throw Error(std::string(what) + ": zero variance on " +
                    (sxx == 0.0 ? "predicted" : "actual") + " side (degenerate input)");
    }
    return sxy / std::sqrt(sxx * syy);
}

} // namespace

std::vector<double> average_ranks(const std::vector<double>& values) {
    if (values.empty()) throw Error("average_ranks: empty input");
    require_finite(values, "rank");
    const size_t n = values.size();
    std::vector<size_t> order(n);
    for (size_t i = 0; i < n; ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(),
                     [&](size_t a, size_t b) { return values[a] < values[b]; });

    std::vector<double> ranks(n);
    size_t i = 0;
    while (i < n) {
        size_t j = i;
        while (j + 1 < n && values[order[j + 1]] == values[order[i]]) ++j;
        // positions i..j (0-based) share ranks i+1 .. j+1
        const double shared = (static_cast<double>(i + 1) + static_cast<double>(j + 1)) / 2.0;
        for (size_t k = i; k <= j; ++k) ranks[order[k]] = shared;
        i = j + 1;
    }
    return ranks;
}

double spearman(const ScorePairs& pairs) {
    require_pair_shape(pairs, 2);
    const std::vector<double> rp = average_ranks(pairs.predicted);
    const std::vector<double> ra = average_ranks(pairs.actual);
    return pearson_checked(rp, ra, "spearman");
}

double pearson(const ScorePairs& pairs) {
    require_pair_shape(pairs, 2);
    return pearson_checked(pairs.predicted, pairs.actual, "pearson");
}

double mse(const ScorePairs& pairs) {
    require_pair_shape(pairs, 1);
    double acc = 0.0;
    for (size_t i = 0; i < pairs.predicted.size(); ++i) {
        const double d = pairs.predicted[i] - pairs.actual[i];
        acc += d * d;
    }
    return acc / static_cast<double>(pairs.predicted.size());
}

} // namespace memk

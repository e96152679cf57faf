#pragma once

#include <vector>

namespace memk {

// Predicted/actual score columns, paired by position.
struct ScorePairs {
    std::vector<double> predicted;
    std::vector<double> actual;
};

// Fractional ranks: rank 1 is the smallest value, tied values share the
// mean of the ranks they span. Sums to N(N+1)/2.
std::vector<double> average_ranks(const std::vector<double>& values);

// Pearson correlation of average ranks (tie-correct; the 6*sum(d^2)
// shortcut is wrong under ties and deliberately not used). Throws on
// zero rank variance instead of returning a silent 0.
double spearman(const ScorePairs& pairs);

// Throws on zero variance on either side.
double pearson(const ScorePairs& pairs);

double mse(const ScorePairs& pairs);

} // namespace memk

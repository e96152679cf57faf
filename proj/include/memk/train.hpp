#pragma once

#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "memk/checkpoint.hpp"
#include "memk/data.hpp"
#include "memk/model.hpp"

namespace memk {

enum class LossKind { kL1, kMse };
enum class OptimizerKind { kAdam, kSgd };

struct TrainConfig {
    size_t epochs = 100;
    size_t batch_size = 64;
    LossKind loss = LossKind::kL1;
    double lr = 1e-3;
    uint64_t seed = 0;
    Target target = Target::kShortTerm;
    std::vector<size_t> hidden_dims = {512, 512};
    OptimizerKind optimizer = OptimizerKind::kAdam;
    double dropout_p = 0.1;
    std::set<size_t> freeze_blocks; // 1-based, only meaningful for fine_tune
};

// Validation metrics can be undefined when predictions or labels are
// constant (zero rank variance); those epochs carry nullopt.
struct EpochStats {
    double train_loss = 0.0;
    std::optional<double> val_spearman;
    std::optional<double> val_pearson;
    double val_mse = 0.0;
};

struct TrainHistory {
    std::vector<EpochStats> epochs;
    // 0-based index of the selected epoch: highest val_spearman, first
    // occurrence on ties. When every epoch is degenerate the epoch with
    // the lowest val_mse is selected instead.
    size_t best_epoch = 0;
};

struct MetricsReport {
    size_t count = 0;
    std::optional<double> spearman;
    std::optional<double> pearson;
    double mse = 0.0;

    bool degenerate() const { return !spearman.has_value() || !pearson.has_value(); }
};

struct TrainResult {
    MlpModel model;
    TrainHistory history;
};

// Trains a fresh model for config.epochs and returns the parameter
// snapshot (including running statistics) from history.best_epoch, not
// the final epoch. Deterministic given (data, config). Examples are
// reshuffled every epoch; a trailing batch of size 1 is dropped.
TrainResult train(const LabeledDataset& train_set, const LabeledDataset& val_set,
                  const TrainConfig& config);

// Resumes from checkpoint parameters with fresh optimizer state.
// Blocks in config.freeze_blocks receive no updates and run in
// inference mode (batch statistics unused, running statistics and
// dropout inactive) during training passes.
TrainResult fine_tune(const Checkpoint& ckpt, const LabeledDataset& train_set,
                      const LabeledDataset& val_set, const TrainConfig& config);

// Eval-mode predictions scored against the chosen target column.
MetricsReport evaluate(const MlpModel& model, const LabeledDataset& dataset, Target target);

// Eval-mode scores in input order; every score lies in (0,1).
std::vector<std::pair<std::string, double>> predict(const MlpModel& model,
                                                    const std::vector<FeatureRecord>& features);

// Report rows. Undefined metrics print as `degenerate`.
std::string metrics_csv_header();
std::string metrics_csv_row(const std::string& run, const MetricsReport& report);

// Two-target table in the challenge layout: run label, then short-term
// and long-term Spearman/Pearson/MSE.
std::string dual_report_header();
std::string dual_report_row(const std::string& run, const MetricsReport& short_term,
                            const MetricsReport& long_term);

void write_history_csv(const std::string& path, const TrainHistory& history);

} // namespace memk

#include "memk/train.hpp"

#include <cmath>
#include <fstream>
#include <limits>

#include "memk/error.hpp"
#include "memk/losses.hpp"
#include "memk/metrics.hpp"
#include "memk/optim.hpp"
#include "memk/rng.hpp"
#include "memk/textio.hpp"

namespace memk {

namespace {

void validate_config(const TrainConfig& config) {
    if (config.epochs < 1) throw Error("train: epochs must be >= 1");
    if (config.batch_size < 2) throw Error("train: batch_size must be >= 2");
    if (!(config.lr >= 0.0) || !std::isfinite(config.lr)) {
        throw Error("train: learning rate must be finite and non-negative");
    }
}

Matrix batch_features(const LabeledDataset& ds, const std::vector<size_t>& order, size_t begin,
                      size_t count) {
    Matrix x(count, ds.feature_dim());
    for (size_t i = 0; i < count; ++i) {
        const size_t row = order[begin + i];
        for (size_t j = 0; j < ds.feature_dim(); ++j) x.at(i, j) = ds.features.at(row, j);
    }
    return x;
}

Matrix batch_targets(const std::vector<double>& targets, const std::vector<size_t>& order,
                     size_t begin, size_t count) {
    Matrix y(count, 1);
    for (size_t i = 0; i < count; ++i) y.at(i, 0) = targets[order[begin + i]];
    return y;
}

void zero_frozen_grads(MlpModel& model) {
    for (ParamRef& ref : trainable_params(model)) {
        if (model.is_frozen(ref.block_index - 1)) {
            std::fill(ref.grads->begin(), ref.grads->end(), 0.0);
        }
    }
}

// Shared by train and fine_tune; the model arrives initialized (fresh or
// from a checkpoint) with frozen blocks already marked.
TrainResult run_training(MlpModel model, const LabeledDataset& train_set,
                         const LabeledDataset& val_set, const TrainConfig& config) {
    if (val_set.size() == 0) throw Error("train: validation set is empty");
    if (train_set.feature_dim() != val_set.feature_dim()) {
        throw Error("train: train feature dim " + std::to_string(train_set.feature_dim()) +
                    " does not match validation feature dim " +
                    std::to_string(val_set.feature_dim()));
    }
    if (model.input_dim() != train_set.feature_dim()) {
        throw Error("train: model input dim " + std::to_string(model.input_dim()) +
                    " does not match feature dim " + std::to_string(train_set.feature_dim()));
    }
    if (config.batch_size > train_set.size()) {
        throw Error("train: batch_size " + std::to_string(config.batch_size) +
                    " exceeds training set size " + std::to_string(train_set.size()));
    }

    const std::vector<double>& targets = train_set.targets(config.target);
    AdamState adam = make_adam_state(model);
    AdamParams adam_params;
    adam_params.lr = config.lr;
    Rng shuffle_rng(derive_seed(config.seed, 2));

    TrainHistory history;
    MlpModel best_by_spearman;
    MlpModel best_by_mse;
    double best_spearman = -std::numeric_limits<double>::infinity();
    double best_mse = std::numeric_limits<double>::infinity();
    size_t best_spearman_epoch = 0;
    size_t best_mse_epoch = 0;
    bool any_defined = false;

    std::vector<size_t> order(train_set.size());
    for (size_t i = 0; i < order.size(); ++i) order[i] = i;

    for (size_t epoch = 0; epoch < config.epochs; ++epoch) {
        shuffle_rng.shuffle(order);
        double loss_sum = 0.0;
        size_t examples = 0;
        for (size_t begin = 0; begin < order.size(); begin += config.batch_size) {
            const size_t count = std::min(config.batch_size, order.size() - begin);
            if (count < 2) continue; // BatchNorm cannot normalize one row
            Matrix x = batch_features(train_set, order, begin, count);
            Matrix y = batch_targets(targets, order, begin, count);
            Matrix pred = forward(model, x, Mode::kTrain);
            LossGrad lg = config.loss == LossKind::kL1 ? l1_loss(pred, y) : mse_loss(pred, y);
            loss_sum += lg.loss * static_cast<double>(count);
            examples += count;
            backward(model, lg.grad);
            zero_frozen_grads(model);
            if (config.optimizer == OptimizerKind::kAdam) {
                adam_step(model, adam, adam_params);
            } else {
                sgd_step(model, config.lr);
            }
        }

        MetricsReport val = evaluate(model, val_set, config.target);
        EpochStats stats;
        stats.train_loss = loss_sum / static_cast<double>(examples);
        stats.val_spearman = val.spearman;
        stats.val_pearson = val.pearson;
        stats.val_mse = val.mse;
        history.epochs.push_back(stats);

        if (val.spearman.has_value()) {
            any_defined = true;
            if (*val.spearman > best_spearman) {
                best_spearman = *val.spearman;
                best_spearman_epoch = epoch;
                best_by_spearman = model;
            }
        }
        if (val.mse < best_mse) {
            best_mse = val.mse;
            best_mse_epoch = epoch;
            best_by_mse = model;
        }
    }

    TrainResult result;
    if (any_defined) {
        history.best_epoch = best_spearman_epoch;
        result.model = std::move(best_by_spearman);
    } else {
        history.best_epoch = best_mse_epoch;
        result.model = std::move(best_by_mse);
    }
    result.history = std::move(history);
    return result;
}

std::string metric_or_degenerate(const std::optional<double>& value) {
    return value.has_value() ? format_real17(*value) : std::string("degenerate");
}

} // namespace

TrainResult train(const LabeledDataset& train_set, const LabeledDataset& val_set,
                  const TrainConfig& config) {
    validate_config(config);
    std::vector<size_t> dims;
    dims.push_back(train_set.feature_dim());
    dims.insert(dims.end(), config.hidden_dims.begin(), config.hidden_dims.end());
    dims.push_back(1);
    MlpModel model = init_model(dims, config.seed, config.dropout_p);
    model.set_frozen_blocks(config.freeze_blocks);
    return run_training(std::move(model), train_set, val_set, config);
}

TrainResult fine_tune(const Checkpoint& ckpt, const LabeledDataset& train_set,
                      const LabeledDataset& val_set, const TrainConfig& config) {
    validate_config(config);
    if (ckpt.model.input_dim() != train_set.feature_dim()) {
        throw Error("fine_tune: checkpoint input dim " + std::to_string(ckpt.model.input_dim()) +
                    " does not match dataset feature dim " +
                    std::to_string(train_set.feature_dim()));
    }
    MlpModel model = ckpt.model;
    model.dropout_p = config.dropout_p;
    for (Block& blk : model.blocks) blk.dropout.p = config.dropout_p;
    model.dropout_rng = Rng(derive_seed(config.seed, 1));
    model.set_frozen_blocks(config.freeze_blocks);
    return run_training(std::move(model), train_set, val_set, config);
}

MetricsReport evaluate(const MlpModel& model, const LabeledDataset& dataset, Target target) {
    if (dataset.size() == 0) throw Error("evaluate: dataset is empty");
    if (dataset.feature_dim() != model.input_dim()) {
        throw Error("evaluate: feature dim " + std::to_string(dataset.feature_dim()) +
                    " does not match model input dim " + std::to_string(model.input_dim()));
    }
    Matrix pred = eval_forward(model, dataset.features);

    ScorePairs pairs;
    pairs.predicted.resize(dataset.size());
    for (size_t i = 0; i < dataset.size(); ++i) pairs.predicted[i] = pred.at(i, 0);
    pairs.actual = dataset.targets(target);

    MetricsReport report;
    report.count = dataset.size();
    report.mse = mse(pairs);
    if (dataset.size() >= 2) {
        try {
            report.spearman = spearman(pairs);
        } catch (const Error&) {
        }
        try {
            report.pearson = pearson(pairs);
        } catch (const Error&) {
        }
    }
    return report;
}

std::vector<std::pair<std::string, double>> predict(const MlpModel& model,
                                                    const std::vector<FeatureRecord>& features) {
    std::vector<std::pair<std::string, double>> out;
    if (features.empty()) return out;
    Matrix x = features_matrix(features);
    if (x.cols != model.input_dim()) {
        throw Error("predict: feature dim " + std::to_string(x.cols) +
                    " does not match model input dim " + std::to_string(model.input_dim()));
    }
    Matrix pred = eval_forward(model, x);
    out.reserve(features.size());
    for (size_t i = 0; i < features.size(); ++i) {
        out.emplace_back(features[i].video_id, pred.at(i, 0));
    }
    return out;
}

std::string metrics_csv_header() { return "run,spearman,pearson,mse"; }

std::string metrics_csv_row(const std::string& run, const MetricsReport& report) {
    return run + "," + metric_or_degenerate(report.spearman) + "," +
           metric_or_degenerate(report.pearson) + "," + format_real17(report.mse);
}

std::string dual_report_header() {
    return "run,short_spearman,short_pearson,short_mse,long_spearman,long_pearson,long_mse";
}

std::string dual_report_row(const std::string& run, const MetricsReport& short_term,
                            const MetricsReport& long_term) {
    return run + "," + metric_or_degenerate(short_term.spearman) + "," +
           metric_or_degenerate(short_term.pearson) + "," + format_real17(short_term.mse) + "," +
           metric_or_degenerate(long_term.spearman) + "," +
           metric_or_degenerate(long_term.pearson) + "," + format_real17(long_term.mse);
}

void write_history_csv(const std::string& path, const TrainHistory& history) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw Error("cannot write history: " + path);
    out << "epoch,train_loss,val_spearman,val_pearson,val_mse\n";
    for (size_t i = 0; i < history.epochs.size(); ++i) {
        const EpochStats& e = history.epochs[i];
        out << (i + 1) << ',' << format_real17(e.train_loss) << ','
            << metric_or_degenerate(e.val_spearman) << ',' << metric_or_degenerate(e.val_pearson)
            << ',' << format_real17(e.val_mse) << '\n';
    }
    if (!out.good()) throw Error("history write failed: " + path);
}

} // namespace memk

// memk - train/evaluate/predict memorability regressors over pre-extracted
// video features, plus the dataset motion statistic.
//
// Exit codes: 0 success, 1 data/runtime error, 2 usage error.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <set>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "memk/checkpoint.hpp"
#include "memk/data.hpp"
#include "memk/error.hpp"
#include "memk/flow.hpp"
#include "memk/model.hpp"
#include "memk/textio.hpp"
#include "memk/train.hpp"

namespace {

using namespace memk;

std::vector<size_t> parse_dim_list(const std::string& text, const std::string& flag) {
    std::vector<size_t> dims;
    for (std::string_view field : split_csv_line(text)) {
        size_t value = 0;
        bool ok = !field.empty();
        for (char c : field) {
            if (c < '0' || c > '9') {
                ok = false;
                break;
            }
            value = value * 10 + static_cast<size_t>(c - '0');
        }
        if (!ok || value == 0) {
            throw Error(flag + ": '" + std::string(field) + "' is not a positive integer");
        }
        dims.push_back(value);
    }
    return dims;
}

Target parse_target(const std::string& text) {
    if (text == "short") return Target::kShortTerm;
    if (text == "long") return Target::kLongTerm;
    throw Error("--target must be 'short' or 'long', got '" + text + "'");
}

// Loads features (inferring the dimension when dim == 0), joins with
// labels, and reports dropped ids on stderr.
LabeledDataset load_joined(const std::string& features_path, const std::string& labels_path,
                           size_t dim) {
    if (dim == 0) dim = infer_feature_dim(features_path);
    auto features = load_features(features_path, dim);
    auto labels = load_labels(labels_path);
    JoinResult joined = join(features, labels);
    std::cerr << "join: " << joined.dataset.size() << " videos ("
              << joined.dropped_feature_ids << " feature ids and " << joined.dropped_label_ids
              << " label ids without a match)\n";
    return std::move(joined.dataset);
}

struct TrainCli {
    std::string features, labels, out;
    std::string val_features, val_labels;
    std::string history;
    std::string target = "short";
    std::string loss = "l1";
    std::string optimizer = "adam";
    std::string hidden = "512,512";
    double val_fraction = 0.2;
    double lr = 1e-3;
    double dropout = 0.1;
    uint64_t seed = 0;
    size_t epochs = 100;
    size_t batch_size = 64;
    size_t dim = 0;
    std::string freeze; // finetune only
    std::string checkpoint; // finetune only
};

TrainConfig to_config(const TrainCli& cli) {
    TrainConfig config;
    config.epochs = cli.epochs;
    config.batch_size = cli.batch_size;
    config.loss = cli.loss == "l1" ? LossKind::kL1 : LossKind::kMse;
    config.lr = cli.lr;
    config.seed = cli.seed;
    config.target = parse_target(cli.target);
    config.hidden_dims = parse_dim_list(cli.hidden, "--hidden");
    config.optimizer = cli.optimizer == "adam" ? OptimizerKind::kAdam : OptimizerKind::kSgd;
    config.dropout_p = cli.dropout;
    if (!cli.freeze.empty()) {
        for (size_t idx : parse_dim_list(cli.freeze, "--freeze")) config.freeze_blocks.insert(idx);
    }
    return config;
}

// train/val datasets from either explicit validation files or a split.
std::pair<LabeledDataset, LabeledDataset> resolve_datasets(const TrainCli& cli) {
    LabeledDataset full = load_joined(cli.features, cli.labels, cli.dim);
    if (!cli.val_features.empty()) {
        LabeledDataset val = load_joined(cli.val_features, cli.val_labels, full.feature_dim());
        return {std::move(full), std::move(val)};
    }
    SplitResult split_result = split(full, SplitSpec{cli.val_fraction, cli.seed});
    return {std::move(split_result.train), std::move(split_result.val)};
}

void finish_training_run(const TrainCli& cli, const TrainConfig& config,
                         const TrainResult& result, uint32_t epochs_run) {
    CheckpointMeta meta;
    meta.target = config.target;
    meta.seed = config.seed;
    meta.epochs_run = epochs_run;
    const auto& best = result.history.epochs[result.history.best_epoch];
    meta.best_val_spearman =
        best.val_spearman.value_or(std::numeric_limits<double>::quiet_NaN());
    save_checkpoint(result.model, meta, cli.out);

    const std::string history_path = cli.history.empty() ? cli.out + ".history.csv" : cli.history;
    write_history_csv(history_path, result.history);

    std::cout << "best_epoch=" << (result.history.best_epoch + 1) << "\n";
    std::cout << "best_val_spearman="
              << (best.val_spearman.has_value() ? format_real17(*best.val_spearman)
                                                : std::string("degenerate"))
              << "\n";
    std::cout << "checkpoint=" << cli.out << "\n";
    std::cout << "history=" << history_path << "\n";
}

int cmd_train(const TrainCli& cli) {
    TrainConfig config = to_config(cli);
    auto [train_set, val_set] = resolve_datasets(cli);
    TrainResult result = train(train_set, val_set, config);
    finish_training_run(cli, config, result, static_cast<uint32_t>(config.epochs));
    return 0;
}

int cmd_finetune(const TrainCli& cli) {
    Checkpoint ckpt = load_checkpoint(cli.checkpoint);
    TrainCli resolved = cli;
    if (resolved.target == "auto") resolved.target = target_name(ckpt.meta.target);
    TrainConfig config = to_config(resolved);
    auto [train_set, val_set] = resolve_datasets(resolved);
    TrainResult result = fine_tune(ckpt, train_set, val_set, config);
    finish_training_run(resolved, config, result, static_cast<uint32_t>(config.epochs));
    return 0;
}

struct EvalCli {
    std::string checkpoint, features, labels;
    std::string target = "auto";
    std::string run = "eval";
    size_t dim = 0;
};

int cmd_evaluate(const EvalCli& cli) {
    Checkpoint ckpt = load_checkpoint(cli.checkpoint);
    Target target = cli.target == "auto" ? ckpt.meta.target : parse_target(cli.target);
    LabeledDataset dataset = load_joined(cli.features, cli.labels,
                                         cli.dim == 0 ? ckpt.model.input_dim() : cli.dim);
    MetricsReport report = evaluate(ckpt.model, dataset, target);
    std::cout << metrics_csv_header() << "\n" << metrics_csv_row(cli.run, report) << "\n";
    if (report.degenerate()) {
        std::cerr << "error: degenerate variance, rank correlation undefined\n";
        return 1;
    }
    return 0;
}

struct PredictCli {
    std::string checkpoint, features, out;
    size_t dim = 0;
};

int cmd_predict(const PredictCli& cli) {
    Checkpoint ckpt = load_checkpoint(cli.checkpoint);
    std::vector<FeatureRecord> records;
    if (file_has_data_lines(cli.features)) {
        records = load_features(cli.features,
                                cli.dim == 0 ? ckpt.model.input_dim() : cli.dim);
    }
    auto scores = predict(ckpt.model, records);
    std::ofstream out(cli.out, std::ios::trunc);
    if (!out) throw Error("cannot write scores: " + cli.out);
    for (const auto& [id, score] : scores) out << id << ',' << format_real17(score) << '\n';
    if (!out.good()) throw Error("score write failed: " + cli.out);
    std::cout << "wrote " << scores.size() << " scores to " << cli.out << "\n";
    return 0;
}

struct MotionCli {
    std::string frames_root, out_prefix;
    double alpha = 1.0;
    double bin_width = 0.1;
    size_t iterations = 100;
};

int cmd_motion_stats(const MotionCli& cli) {
    FlowParams params;
    params.alpha = cli.alpha;
    params.iterations = cli.iterations;
    MotionStatsResult result = motion_stats_for_root(cli.frames_root, params);
    for (const std::string& video : result.skipped) {
        std::cerr << "skipped " << video << ": fewer than 2 frames\n";
    }
    if (result.stats.empty()) {
        std::cerr << "error: no video with at least 2 frames under " << cli.frames_root << "\n";
        return 1;
    }
    std::vector<double> values;
    values.reserve(result.stats.size());
    for (const VideoFlowStat& s : result.stats) values.push_back(s.mean_flow_magnitude);

    const std::string flow_path = cli.out_prefix + ".flow.csv";
    const std::string hist_path = cli.out_prefix + ".hist.csv";
    write_flow_stats_csv(flow_path, result.stats);
    write_histogram_csv(hist_path, flow_histogram(values, cli.bin_width));
    std::cout << "videos=" << result.stats.size() << "\n";
    std::cout << "flow_stats=" << flow_path << "\n";
    std::cout << "histogram=" << hist_path << "\n";
    return 0;
}

struct SplitCli {
    std::string features, labels, out_prefix;
    double val_fraction = 0.2;
    uint64_t seed = 0;
    size_t dim = 0;
};

int cmd_split(const SplitCli& cli) {
    LabeledDataset dataset = load_joined(cli.features, cli.labels, cli.dim);
    SplitResult result = split(dataset, SplitSpec{cli.val_fraction, cli.seed});
    write_features(cli.out_prefix + ".train.features.csv", result.train);
    write_labels(cli.out_prefix + ".train.labels.csv", result.train);
    write_features(cli.out_prefix + ".val.features.csv", result.val);
    write_labels(cli.out_prefix + ".val.labels.csv", result.val);
    std::cout << "train=" << result.train.size() << "\n";
    std::cout << "val=" << result.val.size() << "\n";
    return 0;
}

int cmd_inspect(const std::string& path) {
    Checkpoint ckpt = load_checkpoint(path);
    std::cout << "version=" << ckpt.version << "\n";
    std::cout << "dims=";
    for (size_t i = 0; i < ckpt.dims.size(); ++i) {
        if (i) std::cout << ',';
        std::cout << ckpt.dims[i];
    }
    std::cout << "\n";
    std::cout << "target=" << target_name(ckpt.meta.target) << "\n";
    std::cout << "trainable_params=" << param_count(ckpt.model) << "\n";
    std::cout << "seed=" << ckpt.meta.seed << "\n";
    std::cout << "epochs_run=" << ckpt.meta.epochs_run << "\n";
    std::cout << "best_val_spearman=" << format_real17(ckpt.meta.best_val_spearman) << "\n";
    return 0;
}

void add_train_flags(CLI::App* cmd, TrainCli& cli, bool finetune) {
    if (finetune) cli.target = "auto";
    cmd->add_option("--features", cli.features, "training feature CSV")->required();
    cmd->add_option("--labels", cli.labels, "training label CSV")->required();
    auto* vf = cmd->add_option("--val-features", cli.val_features, "validation feature CSV");
    auto* vl = cmd->add_option("--val-labels", cli.val_labels, "validation label CSV");
    vf->needs(vl);
    vl->needs(vf);
    cmd->add_option("--val-fraction", cli.val_fraction,
                    "validation fraction when no --val-features is given")
        ->capture_default_str()
        ->excludes(vf);
    cmd->add_option("--target", cli.target, finetune ? "short|long|auto" : "short|long")
        ->capture_default_str();
    cmd->add_option("--seed", cli.seed, "run seed")->capture_default_str();
    cmd->add_option("--epochs", cli.epochs, "training epochs")->capture_default_str();
    cmd->add_option("--batch-size", cli.batch_size, "minibatch size")->capture_default_str();
    cmd->add_option("--loss", cli.loss, "l1|mse")
        ->check(CLI::IsMember({"l1", "mse"}))
        ->capture_default_str();
    cmd->add_option("--lr", cli.lr, "learning rate")->capture_default_str();
    cmd->add_option("--optimizer", cli.optimizer, "adam|sgd")
        ->check(CLI::IsMember({"adam", "sgd"}))
        ->capture_default_str();
    cmd->add_option("--dropout", cli.dropout, "dropout probability")->capture_default_str();
    cmd->add_option("--dim", cli.dim, "feature dimension (0 = infer from file)")
        ->capture_default_str();
    cmd->add_option("--out", cli.out, "checkpoint output path")->required();
    cmd->add_option("--history", cli.history, "history CSV path (default <out>.history.csv)");
    if (finetune) {
        cmd->add_option("--checkpoint", cli.checkpoint, "checkpoint to resume from")->required();
        cmd->add_option("--freeze", cli.freeze, "comma list of 1-based blocks to freeze");
    } else {
        cmd->add_option("--hidden", cli.hidden, "comma list of hidden widths")
            ->capture_default_str();
    }
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"video memorability regression toolkit"};
    app.require_subcommand(1);

    TrainCli train_cli;
    auto* train_cmd = app.add_subcommand("train", "train a model from scratch");
    add_train_flags(train_cmd, train_cli, false);

    TrainCli finetune_cli;
    auto* finetune_cmd = app.add_subcommand("finetune", "resume training from a checkpoint");
    add_train_flags(finetune_cmd, finetune_cli, true);

    EvalCli eval_cli;
    auto* eval_cmd = app.add_subcommand("evaluate", "score a checkpoint against labels");
    eval_cmd->add_option("--checkpoint", eval_cli.checkpoint, "checkpoint path")->required();
    eval_cmd->add_option("--features", eval_cli.features, "feature CSV")->required();
    eval_cmd->add_option("--labels", eval_cli.labels, "label CSV")->required();
    eval_cmd->add_option("--target", eval_cli.target, "short|long|auto")->capture_default_str();
    eval_cmd->add_option("--run", eval_cli.run, "run label for the report row")
        ->capture_default_str();
    eval_cmd->add_option("--dim", eval_cli.dim, "feature dimension (0 = from checkpoint)")
        ->capture_default_str();

    PredictCli predict_cli;
    auto* predict_cmd = app.add_subcommand("predict", "write scores for a feature file");
    predict_cmd->add_option("--checkpoint", predict_cli.checkpoint, "checkpoint path")->required();
    predict_cmd->add_option("--features", predict_cli.features, "feature CSV")->required();
    predict_cmd->add_option("--out", predict_cli.out, "output CSV (video_id,score)")->required();
    predict_cmd->add_option("--dim", predict_cli.dim, "feature dimension (0 = from checkpoint)")
        ->capture_default_str();

    MotionCli motion_cli;
    auto* motion_cmd =
        app.add_subcommand("motion-stats", "per-video mean optical-flow magnitude + histogram");
    motion_cmd->add_option("--frames-root", motion_cli.frames_root,
                           "directory with one PGM frame directory per video")
        ->required();
    motion_cmd->add_option("--alpha", motion_cli.alpha, "smoothness weight")
        ->capture_default_str();
    motion_cmd->add_option("--iterations", motion_cli.iterations, "solver sweeps")
        ->capture_default_str();
    motion_cmd->add_option("--bin-width", motion_cli.bin_width, "histogram bin width")
        ->capture_default_str();
    motion_cmd->add_option("--out", motion_cli.out_prefix, "output prefix")->required();

    SplitCli split_cli;
    auto* split_cmd = app.add_subcommand("split", "deterministic train/validation split");
    split_cmd->add_option("--features", split_cli.features, "feature CSV")->required();
    split_cmd->add_option("--labels", split_cli.labels, "label CSV")->required();
    split_cmd->add_option("--val-fraction", split_cli.val_fraction, "validation fraction")
        ->capture_default_str();
    split_cmd->add_option("--seed", split_cli.seed, "shuffle seed")->capture_default_str();
    split_cmd->add_option("--dim", split_cli.dim, "feature dimension (0 = infer)")
        ->capture_default_str();
    split_cmd->add_option("--out-prefix", split_cli.out_prefix, "output path prefix")->required();

    std::string inspect_path;
    auto* inspect_cmd = app.add_subcommand("inspect", "print checkpoint metadata");
    inspect_cmd->add_option("--checkpoint", inspect_path, "checkpoint path")->required();

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
        if (app.got_subcommand(train_cmd)) return cmd_train(train_cli);
        if (app.got_subcommand(finetune_cmd)) return cmd_finetune(finetune_cli);
        if (app.got_subcommand(eval_cmd)) return cmd_evaluate(eval_cli);
        if (app.got_subcommand(predict_cmd)) return cmd_predict(predict_cli);
        if (app.got_subcommand(motion_cmd)) return cmd_motion_stats(motion_cli);
        if (app.got_subcommand(split_cmd)) return cmd_split(split_cli);
        if (app.got_subcommand(inspect_cmd)) return cmd_inspect(inspect_path);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "memk/matrix.hpp"

namespace memk {

// Which memorability score a run trains against / evaluates on.
enum class Target : uint8_t { kShortTerm = 0, kLongTerm = 1 };

const char* target_name(Target t);

// One video's pre-extracted spatio-temporal feature vector.
struct FeatureRecord {
    std::string video_id;
    std::vector<double> features;
};

struct LabelRecord {
    std::string video_id;
    double short_term = 0.0;
    double long_term = 0.0;
};

// Features joined with both score columns, in feature-file order.
// Stored columnar; features is an N x D matrix.
struct LabeledDataset {
    std::vector<std::string> ids;
    Matrix features;
    std::vector<double> short_term;
    std::vector<double> long_term;

    size_t size() const { return ids.size(); }
    size_t feature_dim() const { return features.cols; }
    const std::vector<double>& targets(Target t) const {
        return t == Target::kShortTerm ? short_term : long_term;
    }
};

struct SplitSpec {
    double val_fraction = 0.2;
    uint64_t seed = 0;
};

struct JoinResult {
    LabeledDataset dataset;
    size_t dropped_feature_ids = 0;
    size_t dropped_label_ids = 0;
};

struct SplitResult {
    LabeledDataset train;
    LabeledDataset val;
};

// Feature file: `video_id,f0,...,f{D-1}` per line, optional header whose
// first field is `video_id`. Every line must carry exactly expected_dim
// finite reals. Errors name the offending 1-based line.
std::vector<FeatureRecord> load_features(const std::string& path, size_t expected_dim);

// Reads the first data line and returns its field count minus one, so
// callers can load files of unknown dimensionality.
size_t infer_feature_dim(const std::string& path);

// True when the file holds at least one data line (header excluded);
// lets callers treat header-only score inputs as legitimately empty.
bool file_has_data_lines(const std::string& path);

// Label file: `video_id,short_term,long_term`, scores validated in [0,1].
std::vector<LabelRecord> load_labels(const std::string& path);

// Inner join on video_id, ordered by the feature-file order. Ids present
// on only one side are dropped and counted, not errors; an empty
// intersection is.
JoinResult join(const std::vector<FeatureRecord>& features,
                const std::vector<LabelRecord>& labels);

// Deterministic shuffle by spec.seed, then the first ceil(val_fraction*N)
// records become the validation set. Same seed, same split.
SplitResult split(const LabeledDataset& dataset, const SplitSpec& spec);

// Writers for the same two formats (17 significant digits per real, so a
// write/load cycle is bit-exact). Both emit a header line.
void write_features(const std::string& path, const LabeledDataset& dataset);
void write_labels(const std::string& path, const LabeledDataset& dataset);

// Conversion helpers shared by train/predict paths.
Matrix features_matrix(const std::vector<FeatureRecord>& records);
LabeledDataset take_rows(const LabeledDataset& src, const std::vector<size_t>& rows);

} // namespace memk

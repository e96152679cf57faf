#include "memk/data.hpp"

#include <cmath>
#include <fstream>
#include <unordered_map>
#include <unordered_set>

#include "memk/error.hpp"
#include "memk/rng.hpp"
#include "memk/textio.hpp"

namespace memk {

namespace {

// Strips a trailing '\r' so CRLF files load like LF files.
void chomp(std::string& line) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
}

bool is_header(const std::vector<std::string_view>& fields) {
    return !fields.empty() && fields[0] == "video_id";
}

std::ifstream open_or_throw(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open file: " + path);
    return in;
}

} // namespace

const char* target_name(Target t) {
    return t == Target::kShortTerm ? "short" : "long";
}

std::vector<FeatureRecord> load_features(const std::string& path, size_t expected_dim) {
    if (expected_dim == 0) throw Error("feature dimension must be positive");
    std::ifstream in = open_or_throw(path);

    std::vector<FeatureRecord> records;
    std::unordered_set<std::string> seen;
    std::string line;
    size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        chomp(line);
        if (line.empty()) continue;
        auto fields = split_csv_line(line);
        if (line_no == 1 && is_header(fields)) continue;

        if (fields.size() != expected_dim + 1) {
            throw Error(path + ":" + std::to_string(line_no) + ": expected " +
                        std::to_string(expected_dim) + " feature values, found " +
                        std::to_string(fields.size() - 1));
        }
        FeatureRecord rec;
        rec.video_id = std::string(fields[0]);
        if (!valid_video_id(rec.video_id)) {
            throw Error(path + ":" + std::to_string(line_no) + ": invalid video_id '" +
                        rec.video_id + "'");
        }
        if (!seen.insert(rec.video_id).second) {
            throw Error(path + ":" + std::to_string(line_no) + ": duplicate video_id '" +
                        rec.video_id + "'");
        }
        rec.features.reserve(expected_dim);
        for (size_t i = 1; i < fields.size(); ++i) {
            double v;
            if (!parse_real(fields[i], v)) {
                throw Error(path + ":" + std::to_string(line_no) +
                            ": unparseable or non-finite real '" + std::string(fields[i]) + "'");
            }
            rec.features.push_back(v);
        }
        records.push_back(std::move(rec));
    }
    if (records.empty()) throw Error(path + ": empty file (no data lines)");
    return records;
}

size_t infer_feature_dim(const std::string& path) {
    std::ifstream in = open_or_throw(path);
    std::string line;
    size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        chomp(line);
        if (line.empty()) continue;
        auto fields = split_csv_line(line);
        if (line_no == 1 && is_header(fields)) continue;
        if (fields.size() < 2) {
            throw Error(path + ":" + std::to_string(line_no) + ": no feature values on line");
        }
        return fields.size() - 1;
    }
    throw Error(path + ": empty file (no data lines)");
}

bool file_has_data_lines(const std::string& path) {
    std::ifstream in = open_or_throw(path);
    std::string line;
    size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        chomp(line);
        if (line.empty()) continue;
        if (line_no == 1 && is_header(split_csv_line(line))) continue;
        return true;
    }
    return false;
}

std::vector<LabelRecord> load_labels(const std::string& path) {
    std::ifstream in = open_or_throw(path);

    std::vector<LabelRecord> records;
    std::unordered_set<std::string> seen;
    std::string line;
    size_t line_no = 0;
    const char* columns[2] = {"short_term", "long_term"};
    while (std::getline(in, line)) {
        ++line_no;
        chomp(line);
        if (line.empty()) continue;
        auto fields = split_csv_line(line);
        if (line_no == 1 && is_header(fields)) continue;

        if (fields.size() != 3) {
            throw Error(path + ":" + std::to_string(line_no) +
                        ": expected columns video_id,short_term,long_term, found " +
                        std::to_string(fields.size()) + " fields");
        }
        LabelRecord rec;
        rec.video_id = std::string(fields[0]);
        if (!valid_video_id(rec.video_id)) {
            throw Error(path + ":" + std::to_string(line_no) + ": invalid video_id '" +
                        rec.video_id + "'");
        }
        if (!seen.insert(rec.video_id).second) {
            throw Error(path + ":" + std::to_string(line_no) + ": duplicate video_id '" +
                        rec.video_id + "'");
        }
        double scores[2];
        for (int i = 0; i < 2; ++i) {
            if (!parse_real(fields[i + 1], scores[i])) {
                throw Error(path + ":" + std::to_string(line_no) + ": unparseable " +
                            columns[i] + " value '" + std::string(fields[i + 1]) + "'");
            }
            if (scores[i] < 0.0 || scores[i] > 1.0) {
                throw Error(path + ":" + std::to_string(line_no) + ": " + columns[i] +
                            " score " + format_real17(scores[i]) + " outside [0,1]");
            }
        }
        rec.short_term = scores[0];
        rec.long_term = scores[1];
        records.push_back(std::move(rec));
    }
    if (records.empty()) throw Error(path + ": empty file (no data lines)");
    return records;
}

JoinResult join(const std::vector<FeatureRecord>& features,
                const std::vector<LabelRecord>& labels) {
    std::unordered_map<std::string, const LabelRecord*> by_id;
    by_id.reserve(labels.size());
    for (const auto& l : labels) by_id.emplace(l.video_id, &l);

    const size_t dim = features.empty() ? 0 : features.front().features.size();

    JoinResult result;
    std::vector<const FeatureRecord*> kept;
    for (const auto& f : features) {
        if (by_id.count(f.video_id)) {
            kept.push_back(&f);
        } else {
            ++result.dropped_feature_ids;
        }
    }
    result.dropped_label_ids = labels.size() - kept.size();
    if (kept.empty()) throw Error("join: no video_id is present in both inputs");

    LabeledDataset& ds = result.dataset;
    ds.features = Matrix(kept.size(), dim);
    ds.ids.reserve(kept.size());
    ds.short_term.reserve(kept.size());
    ds.long_term.reserve(kept.size());
    for (size_t i = 0; i < kept.size(); ++i) {
        const FeatureRecord& f = *kept[i];
        if (f.features.size() != dim) {
            throw Error("join: feature rows have inconsistent dimensions");
        }
        const LabelRecord& l = *by_id.at(f.video_id);
        ds.ids.push_back(f.video_id);
        for (size_t j = 0; j < dim; ++j) ds.features.at(i, j) = f.features[j];
        ds.short_term.push_back(l.short_term);
        ds.long_term.push_back(l.long_term);
    }
    return result;
}

LabeledDataset take_rows(const LabeledDataset& src, const std::vector<size_t>& rows) {
    LabeledDataset out;
    out.features = Matrix(rows.size(), src.feature_dim());
    out.ids.reserve(rows.size());
    for (size_t i = 0; i < rows.size(); ++i) {
        const size_t r = rows[i];
        out.ids.push_back(src.ids[r]);
        for (size_t j = 0; j < src.feature_dim(); ++j) {
            out.features.at(i, j) = src.features.at(r, j);
        }
        out.short_term.push_back(src.short_term[r]);
        out.long_term.push_back(src.long_term[r]);
    }
    return out;
}

SplitResult split(const LabeledDataset& dataset, const SplitSpec& spec) {
    if (dataset.size() < 2) throw Error("split: dataset needs at least 2 records");
    if (!(spec.val_fraction > 0.0 && spec.val_fraction < 1.0)) {
        throw Error("split: val_fraction must lie in (0,1)");
    }
    const size_t n = dataset.size();
    const size_t val_count =
        static_cast<size_t>(std::ceil(spec.val_fraction * static_cast<double>(n)));
    if (val_count == 0) throw Error("split: validation set would be empty");
    if (val_count >= n) throw Error("split: training set would be empty");

    std::vector<size_t> order(n);
    for (size_t i = 0; i < n; ++i) order[i] = i;
    Rng rng(spec.seed);
    rng.shuffle(order);

    std::vector<size_t> val_rows(order.begin(), order.begin() + val_count);
    std::vector<size_t> train_rows(order.begin() + val_count, order.end());
    return SplitResult{take_rows(dataset, train_rows), take_rows(dataset, val_rows)};
}

void write_features(const std::string& path, const LabeledDataset& dataset) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw Error("cannot write file: " + path);
    out << "video_id";
    for (size_t j = 0; j < dataset.feature_dim(); ++j) out << ",f" << j;
    out << '\n';
    for (size_t i = 0; i < dataset.size(); ++i) {
        out << dataset.ids[i];
        for (size_t j = 0; j < dataset.feature_dim(); ++j) {
            out << ',' << format_real17(dataset.features.at(i, j));
        }
        out << '\n';
    }
    if (!out.good()) throw Error("write failed: " + path);
}

void write_labels(const std::string& path, const LabeledDataset& dataset) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw Error("cannot write file: " + path);
    out << "video_id,short_term,long_term\n";
    for (size_t i = 0; i < dataset.size(); ++i) {
        out << dataset.ids[i] << ',' << format_real17(dataset.short_term[i]) << ','
            << format_real17(dataset.long_term[i]) << '\n';
    }
    if (!out.good()) throw Error("write failed: " + path);
}

Matrix features_matrix(const std::vector<FeatureRecord>& records) {
    if (records.empty()) return Matrix();
    const size_t dim = records.front().features.size();
    Matrix m(records.size(), dim);
    for (size_t i = 0; i < records.size(); ++i) {
        if (records[i].features.size() != dim) {
            throw Error("feature records have inconsistent dimensions");
        }
        for (size_t j = 0; j < dim; ++j) m.at(i, j) = records[i].features[j];
    }
    return m;
}

} // namespace memk

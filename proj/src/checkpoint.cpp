#include "memk/checkpoint.hpp"

#include <bit>
#include <cstring>
#include <fstream>

#include "memk/error.hpp"

namespace memk {

namespace {

constexpr char kMagic[4] = {'M', 'E', 'M', 'K'};

void put_u32(std::string& out, uint32_t v) {
    for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xFF));
}

void put_u64(std::string& out, uint64_t v) {
    for (int i = 0; i < 8; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xFF));
}

void put_f64(std::string& out, double v) { put_u64(out, std::bit_cast<uint64_t>(v)); }

class Reader {
  public:
    Reader(const std::string& bytes, const std::string& path) : bytes_(bytes), path_(path) {}

    uint32_t u32() { return static_cast<uint32_t>(u_n(4)); }
    uint64_t u64() { return u_n(8); }
    uint8_t u8() { return static_cast<uint8_t>(u_n(1)); }
    double f64() { return std::bit_cast<double>(u64()); }

    void expect_bytes(size_t n, const char* what) {
        if (pos_ + n > bytes_.size()) {
            throw Error(path_ + ": truncated checkpoint while reading " + std::string(what) +
                        " (need " + std::to_string(pos_ + n) + " bytes, file has " +
                        std::to_string(bytes_.size()) + ")");
        }
    }

    size_t pos() const { return pos_; }
    size_t size() const { return bytes_.size(); }

  private:
    uint64_t u_n(size_t n) {
        expect_bytes(n, "field");
        uint64_t v = 0;
        for (size_t i = 0; i < n; ++i) {
            v |= static_cast<uint64_t>(static_cast<uint8_t>(bytes_[pos_ + i])) << (8 * i);
        }
        pos_ += n;
        return v;
    }

    const std::string& bytes_;
    const std::string& path_;
    size_t pos_ = 0;
};

void append_vec(std::string& out, const std::vector<double>& v) {
    for (double x : v) put_f64(out, x);
}

void read_vec(Reader& r, std::vector<double>& v, const char* what) {
    r.expect_bytes(v.size() * 8, what);
    for (double& x : v) x = r.f64();
}

} // namespace

size_t checkpoint_file_size(const std::vector<size_t>& dims) {
    size_t header = 4 + 4 + 4 + 4 * dims.size() + 1 + 8 + 4 + 8;
    size_t doubles = 0;
    for (size_t b = 0; b + 1 < dims.size(); ++b) {
        doubles += 4 * dims[b];               // gamma, beta, running_mean, running_var
        doubles += dims[b + 1] * dims[b];     // weight
        doubles += dims[b + 1];               // bias
    }
    return header + 8 * doubles;
}

void save_checkpoint(const MlpModel& model, const CheckpointMeta& meta, const std::string& path) {
    std::string out;
    out.reserve(checkpoint_file_size(model.dims));
    out.append(kMagic, 4);
    put_u32(out, kCheckpointVersion);
    put_u32(out, static_cast<uint32_t>(model.dims.size()));
    for (size_t d : model.dims) put_u32(out, static_cast<uint32_t>(d));
    out.push_back(static_cast<char>(meta.target));
    put_u64(out, meta.seed);
    put_u32(out, meta.epochs_run);
    put_f64(out, meta.best_val_spearman);

    for (const Block& blk : model.blocks) {
        append_vec(out, blk.bn.gamma);
        append_vec(out, blk.bn.beta);
        append_vec(out, blk.bn.running_mean);
        append_vec(out, blk.bn.running_var);
        append_vec(out, blk.fc.weight.data);
        append_vec(out, blk.fc.bias);
    }

    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) throw Error("cannot write checkpoint: " + path);
    f.write(out.data(), static_cast<std::streamsize>(out.size()));
    if (!f.good()) throw Error("checkpoint write failed: " + path);
}

Checkpoint load_checkpoint(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw Error("cannot open checkpoint: " + path);
    std::string bytes((std::istreambuf_iterator<char>(f)), std::istreambuf_iterator<char>());

    Reader r(bytes, path);
    r.expect_bytes(4, "magic");
    if (std::memcmp(bytes.data(), kMagic, 4) != 0) {
        throw Error(path + ": bad magic bytes (not a MEMK checkpoint)");
    }
    Checkpoint ckpt;
    (void)r.u32(); // skip magic
    ckpt.version = r.u32();
    if (ckpt.version != kCheckpointVersion) {
        throw Error(path + ": unsupported checkpoint version " + std::to_string(ckpt.version) +
                    " (expected " + std::to_string(kCheckpointVersion) + ")");
    }
    const uint32_t n_dims = r.u32();
    if (n_dims < 2 || n_dims > 64) {
        throw Error(path + ": implausible dimension count " + std::to_string(n_dims));
    }
    ckpt.dims.resize(n_dims);
    for (uint32_t i = 0; i < n_dims; ++i) {
        ckpt.dims[i] = r.u32();
        if (ckpt.dims[i] == 0) throw Error(path + ": zero dimension in architecture");
    }
    const uint8_t target_tag = r.u8();
    if (target_tag > 1) throw Error(path + ": unknown target tag " + std::to_string(target_tag));
    ckpt.meta.target = static_cast<Target>(target_tag);
    ckpt.meta.seed = r.u64();
    ckpt.meta.epochs_run = r.u32();
    ckpt.meta.best_val_spearman = r.f64();

    if (bytes.size() != checkpoint_file_size(ckpt.dims)) {
        throw Error(path + ": checkpoint size mismatch (expected " +
                    std::to_string(checkpoint_file_size(ckpt.dims)) + " bytes, file has " +
                    std::to_string(bytes.size()) + ")");
    }

    ckpt.model = init_model(ckpt.dims, ckpt.meta.seed);
    for (Block& blk : ckpt.model.blocks) {
        read_vec(r, blk.bn.gamma, "gamma");
        read_vec(r, blk.bn.beta, "beta");
        read_vec(r, blk.bn.running_mean, "running_mean");
        read_vec(r, blk.bn.running_var, "running_var");
        read_vec(r, blk.fc.weight.data, "weight");
        read_vec(r, blk.fc.bias, "bias");
    }
    return ckpt;
}

} // namespace memk

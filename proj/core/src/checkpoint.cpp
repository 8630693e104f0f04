#include "kedial/checkpoint.hpp"

#include <array>
#include <bit>
#include <cstring>
#include <fstream>

#include <nlohmann/json.hpp>

namespace kedial {

using nlohmann::json;

static_assert(std::endian::native == std::endian::little,
              "checkpoint writer assumes a little-endian host");

namespace {

constexpr std::array<char, 4> kMagic = {'K', 'D', 'L', 'C'};
constexpr uint32_t kVersion = 1;

const std::array<uint32_t, 256>& crc_table() {
    static const std::array<uint32_t, 256> table = [] {
        std::array<uint32_t, 256> t{};
        for (uint32_t i = 0; i < 256; ++i) {
            uint32_t c = i;
            for (int bit = 0; bit < 8; ++bit) {
                c = (c & 1) ? (0xEDB88320u ^ (c >> 1)) : (c >> 1);
            }
            t[i] = c;
        }
        return t;
    }();
    return table;
}

json config_to_json(const ModelConfig& cfg) {
    return json{{"vocab_size", cfg.vocab_size},   {"d_model", cfg.d_model},
                {"n_heads", cfg.n_heads},         {"n_enc_layers", cfg.n_enc_layers},
                {"n_dec_layers", cfg.n_dec_layers}, {"d_ff", cfg.d_ff},
                {"max_positions", cfg.max_positions}, {"dropout", cfg.dropout}};
}

ModelConfig config_from_json(const json& j) {
    ModelConfig cfg;
    cfg.vocab_size = j.at("vocab_size").get<int>();
    cfg.d_model = j.at("d_model").get<int>();
    cfg.n_heads = j.at("n_heads").get<int>();
    cfg.n_enc_layers = j.at("n_enc_layers").get<int>();
    cfg.n_dec_layers = j.at("n_dec_layers").get<int>();
    cfg.d_ff = j.at("d_ff").get<int>();
    cfg.max_positions = j.at("max_positions").get<int>();
    cfg.dropout = j.at("dropout").get<double>();
    return cfg;
}

void append_u32(std::string& buf, uint32_t v) {
    char bytes[4];
    std::memcpy(bytes, &v, 4);
    buf.append(bytes, 4);
}

void append_u64(std::string& buf, uint64_t v) {
    char bytes[8];
    std::memcpy(bytes, &v, 8);
    buf.append(bytes, 8);
}

std::string to_hex(uint64_t v) {
    static const char* digits = "0123456789abcdef";
    std::string out(16, '0');
    for (int i = 15; i >= 0; --i) {
        out[static_cast<size_t>(i)] = digits[v & 0xF];
        v >>= 4;
    }
    return out;
}

Checkpoint snapshot(const std::string& arch, const ModelConfig& cfg,
                    const std::vector<Parameter>& params, const Vocab& vocab,
                    const CheckpointMeta& meta) {
    Checkpoint ckpt;
    ckpt.arch = arch;
    ckpt.config = cfg;
    ckpt.vocab = vocab;
    ckpt.meta = meta;
    ckpt.params.reserve(params.size());
    for (const auto& p : params) ckpt.params.emplace_back(p.name, p.value());
    return ckpt;
}

void load_params_into(std::vector<Parameter>& params, const Checkpoint& ckpt) {
    if (params.size() != ckpt.params.size()) {
        throw CheckpointError("checkpoint holds " + std::to_string(ckpt.params.size()) +
                              " parameters, model expects " + std::to_string(params.size()));
    }
    for (size_t i = 0; i < params.size(); ++i) {
        const auto& [name, tensor] = ckpt.params[i];
        if (params[i].name != name) {
            throw CheckpointError("parameter order mismatch: '" + name + "' vs '" +
                                  params[i].name + "'");
        }
        if (params[i].value().shape != tensor.shape) {
            throw CheckpointError("parameter '" + name + "' shape mismatch");
        }
        params[i].value().data = tensor.data;
    }
}

}  // namespace

uint32_t crc32(const unsigned char* data, size_t len, uint32_t seed) {
    uint32_t c = seed ^ 0xFFFFFFFFu;
    for (size_t i = 0; i < len; ++i) {
        c = crc_table()[(c ^ data[i]) & 0xFF] ^ (c >> 8);
    }
    return c ^ 0xFFFFFFFFu;
}

Checkpoint make_checkpoint(const Seq2SeqModel& model, const Vocab& vocab,
                           const CheckpointMeta& meta) {
    return snapshot("seq2seq", model.config(), model.params(), vocab, meta);
}

Checkpoint make_checkpoint(const MaskedLM& mlm, const Vocab& vocab, const CheckpointMeta& meta) {
    return snapshot("mlm", mlm.config(), mlm.params(), vocab, meta);
}

void save_checkpoint(const Checkpoint& ckpt, const std::filesystem::path& path) {
    json header;
    header["arch"] = ckpt.arch;
    header["config"] = config_to_json(ckpt.config);
    header["meta"] = {{"epoch", ckpt.meta.epoch}, {"step", ckpt.meta.step}, {"lr", ckpt.meta.lr}};
    header["vocab"] = ckpt.vocab.tokens();
    header["vocab_fingerprint"] = to_hex(ckpt.vocab.fingerprint());
    json manifest = json::array();
    for (const auto& [name, tensor] : ckpt.params) {
        manifest.push_back({{"name", name}, {"shape", tensor.shape}});
    }
    header["params"] = manifest;
    const std::string header_bytes = header.dump();

    std::string buf;
    buf.append(kMagic.data(), kMagic.size());
    append_u32(buf, kVersion);
    append_u64(buf, header_bytes.size());
    buf += header_bytes;
    for (const auto& [name, tensor] : ckpt.params) {
        const size_t bytes = tensor.data.size() * sizeof(double);
        const size_t off = buf.size();
        buf.resize(off + bytes);
        std::memcpy(buf.data() + off, tensor.data.data(), bytes);
    }
    append_u32(buf, crc32(reinterpret_cast<const unsigned char*>(buf.data()), buf.size()));

    std::ofstream out(path, std::ios::binary);
    if (!out) throw CheckpointError("cannot write " + path.string());
    out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
    if (!out) throw CheckpointError("short write to " + path.string());
}

Checkpoint load_checkpoint(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw CheckpointError("cannot read " + path.string());
    std::string buf((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());

    if (buf.size() < kMagic.size() + 4 + 8 + 4) {
        throw CheckpointError(path.string() + ": truncated checkpoint");
    }
    if (std::memcmp(buf.data(), kMagic.data(), kMagic.size()) != 0) {
        throw CheckpointError(path.string() + ": not a checkpoint file");
    }
    uint32_t version = 0;
    std::memcpy(&version, buf.data() + 4, 4);
    if (version != kVersion) {
        throw CheckpointError(path.string() + ": unsupported checkpoint version " +
                              std::to_string(version));
    }

    const uint32_t stored_crc = [&] {
        uint32_t c = 0;
        std::memcpy(&c, buf.data() + buf.size() - 4, 4);
        return c;
    }();
    const uint32_t actual_crc =
        crc32(reinterpret_cast<const unsigned char*>(buf.data()), buf.size() - 4);
    if (stored_crc != actual_crc) {
        throw CheckpointError(path.string() + ": checksum failure");
    }

    uint64_t header_len = 0;
    std::memcpy(&header_len, buf.data() + 8, 8);
    size_t off = 16;
    if (off + header_len + 4 > buf.size()) {
        throw CheckpointError(path.string() + ": truncated header");
    }
    json header;
    try {
        header = json::parse(buf.substr(off, header_len));
    } catch (const json::exception& e) {
        throw CheckpointError(path.string() + ": bad header: " + e.what());
    }
    off += header_len;

    Checkpoint ckpt;
    try {
        ckpt.arch = header.at("arch").get<std::string>();
        ckpt.config = config_from_json(header.at("config"));
        ckpt.meta.epoch = header.at("meta").at("epoch").get<int>();
        ckpt.meta.step = header.at("meta").at("step").get<int64_t>();
        ckpt.meta.lr = header.at("meta").at("lr").get<double>();
        ckpt.vocab = Vocab::from_tokens(header.at("vocab").get<std::vector<std::string>>());
        for (const auto& entry : header.at("params")) {
            const auto name = entry.at("name").get<std::string>();
            const auto shape = entry.at("shape").get<std::vector<int>>();
            const int64_t n = Tensor::numel_of(shape);
            const size_t bytes = static_cast<size_t>(n) * sizeof(double);
            if (off + bytes > buf.size() - 4) {
                throw CheckpointError(path.string() + ": truncated parameter block '" + name + "'");
            }
            Tensor t(shape);
            std::memcpy(t.data.data(), buf.data() + off, bytes);
            off += bytes;
            ckpt.params.emplace_back(name, std::move(t));
        }
    } catch (const json::exception& e) {
        throw CheckpointError(path.string() + ": bad header field: " + e.what());
    }
    if (off != buf.size() - 4) {
        throw CheckpointError(path.string() + ": trailing bytes after parameter blocks");
    }
    const std::string expect_fp = to_hex(ckpt.vocab.fingerprint());
    if (header.contains("vocab_fingerprint") &&
        header["vocab_fingerprint"].get<std::string>() != expect_fp) {
        throw CheckpointError(path.string() + ": vocab fingerprint mismatch");
    }
    return ckpt;
}

Seq2SeqModel restore_seq2seq(const Checkpoint& ckpt) {
    if (ckpt.arch != "seq2seq") {
        throw CheckpointError("checkpoint arch is '" + ckpt.arch + "', expected seq2seq");
    }
    Seq2SeqModel model(ckpt.config, /*seed=*/0);
    load_params_into(model.params(), ckpt);
    return model;
}

MaskedLM restore_mlm(const Checkpoint& ckpt) {
    if (ckpt.arch != "mlm") {
        throw CheckpointError("checkpoint arch is '" + ckpt.arch + "', expected mlm");
    }
    MaskedLM mlm(ckpt.config, /*seed=*/0);
    load_params_into(mlm.params(), ckpt);
    return mlm;
}

}  // namespace kedial

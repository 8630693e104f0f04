#pragma once

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "kedial/model.hpp"
#include "kedial/vocab.hpp"

namespace kedial {

struct CheckpointMeta {
    int epoch = 0;
    int64_t step = 0;
    double lr = 0.0;
};

// Everything needed to rebuild a model: config, named parameter tensors in
// registration order, the vocabulary, and training progress. Save/load round
// trips are bitwise lossless.
struct Checkpoint {
    std::string arch;  // "seq2seq" or "mlm"
    ModelConfig config;
    std::vector<std::pair<std::string, Tensor>> params;
    Vocab vocab;
    CheckpointMeta meta;
};

Checkpoint make_checkpoint(const Seq2SeqModel& model, const Vocab& vocab,
                           const CheckpointMeta& meta);
Checkpoint make_checkpoint(const MaskedLM& mlm, const Vocab& vocab, const CheckpointMeta& meta);

// Layout: magic, u32 version, u64 header length, JSON header (arch, config,
// meta, vocab, parameter manifest), little-endian double blocks in manifest
// order, trailing CRC-32 of everything before it.
void save_checkpoint(const Checkpoint& ckpt, const std::filesystem::path& path);

// Throws CheckpointError on bad magic, version mismatch, truncation, or
// checksum failure; never returns a partial model.
Checkpoint load_checkpoint(const std::filesystem::path& path);

Seq2SeqModel restore_seq2seq(const Checkpoint& ckpt);
MaskedLM restore_mlm(const Checkpoint& ckpt);

uint32_t crc32(const unsigned char* data, size_t len, uint32_t seed = 0);

}  // namespace kedial

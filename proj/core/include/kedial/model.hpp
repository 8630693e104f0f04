#pragma once

#include <cstdint>
#include <string>
#include <unordered_map>
#include <vector>

#include "kedial/optim.hpp"
#include "kedial/vocab.hpp"

namespace kedial {

struct ModelConfig {
    int vocab_size = 0;
    int d_model = 32;
    int n_heads = 4;
    int n_enc_layers = 2;
    int n_dec_layers = 2;
    int d_ff = 64;
    int max_positions = 512;
    double dropout = 0.0;

    void validate() const;  // throws NumericError on a bad combination
    int head_dim() const { return d_model / n_heads; }
};

// Named parameter registry shared by both model kinds. Registration order is
// fixed at construction, which pins initialization, update and serialization
// order.
class ParameterStore {
public:
    NodeRef add(const std::string& name, Tensor init);
    const NodeRef& get(const std::string& name) const;
    bool has(const std::string& name) const { return index_.count(name) != 0; }

    std::vector<Parameter>& params() { return params_; }
    const std::vector<Parameter>& params() const { return params_; }

private:
    std::vector<Parameter> params_;
    std::unordered_map<std::string, size_t> index_;
};

struct LinearRef {
    NodeRef w, b;
};
struct LayerNormRef {
    NodeRef gamma, beta;
};
struct AttentionRef {
    LinearRef q, k, v, o;
};
struct EncoderLayerRef {
    LayerNormRef ln1;
    AttentionRef attn;
    LayerNormRef ln2;
    LinearRef ff1, ff2;
};
struct DecoderLayerRef {
    LayerNormRef ln1;
    AttentionRef self_attn;
    LayerNormRef ln2;
    AttentionRef cross_attn;
    LayerNormRef ln3;
    LinearRef ff1, ff2;
};

struct EncoderRefs {
    NodeRef tok_emb, pos_emb;
    std::vector<EncoderLayerRef> layers;
    LayerNormRef final_ln;
};

// Pre-norm encoder-decoder transformer with learned positions, GELU
// feed-forward, and an untied output projection.
class Seq2SeqModel {
public:
    Seq2SeqModel(ModelConfig config, uint64_t seed);

    const ModelConfig& config() const { return config_; }
    std::vector<Parameter>& params() { return store_.params(); }
    const std::vector<Parameter>& params() const { return store_.params(); }
    ParameterStore& store() { return store_; }

    EncoderRefs encoder;
    std::vector<DecoderLayerRef> decoder_layers;
    LayerNormRef decoder_final_ln;
    LinearRef out_proj;

private:
    ModelConfig config_;
    ParameterStore store_;
};

// Encoder-only model with a vocabulary prediction head; the evaluation
// metric's masked-word scorer.
class MaskedLM {
public:
    MaskedLM(ModelConfig config, uint64_t seed);

    const ModelConfig& config() const { return config_; }
    std::vector<Parameter>& params() { return store_.params(); }
    const std::vector<Parameter>& params() const { return store_.params(); }
    ParameterStore& store() { return store_; }

    EncoderRefs encoder;
    LinearRef head;

private:
    ModelConfig config_;
    ParameterStore store_;
};

// ---- graph builders (training path) ----------------------------------------
// When `training` is true and dropout > 0, `rng` must be non-null.

NodeRef encode_graph(const Seq2SeqModel& model, const std::vector<int>& source_ids,
                     bool training = false, Rng* rng = nullptr);

// Teacher-forced decoder over the whole prefix; returns [len(prefix), vocab]
// logits, causally masked.
NodeRef decode_graph(const Seq2SeqModel& model, const NodeRef& enc_states,
                     const std::vector<int>& prefix_ids, bool training = false,
                     Rng* rng = nullptr);

// Sum over target positions of -log p(y_t | source, y_<t); target must be
// framed as start-token ... [END]. Throws DataError on malformed framing.
NodeRef sequence_nll_graph(const Seq2SeqModel& model, const std::vector<int>& source_ids,
                           const std::vector<int>& target_ids, bool training = false,
                           Rng* rng = nullptr);

// Encoder logits for a masked-token batch: rows of the head output at
// `positions`.
NodeRef mlm_logits_graph(const MaskedLM& mlm, const std::vector<int>& input_ids,
                         const std::vector<int>& positions, bool training = false,
                         Rng* rng = nullptr);

// ---- evaluation path --------------------------------------------------------

// Deterministic (dropout off) encoder states, one d_model row per token.
Tensor encode(const Seq2SeqModel& model, const std::vector<int>& source_ids);

// Logits over the vocabulary for the next position after `prefix_ids`.
Tensor decode_step(const Seq2SeqModel& model, const Tensor& enc_states,
                   const std::vector<int>& prefix_ids);

double sequence_nll(const Seq2SeqModel& model, const std::vector<int>& source_ids,
                    const std::vector<int>& target_ids);

// Greedy decoding; argmax ties break toward the lowest token id. The result
// excludes the start token and [END].
std::vector<int> greedy_generate(const Seq2SeqModel& model, const std::vector<int>& source_ids,
                                 int start_token, int max_len);

// All vocab ids at the single [MASK] position, most probable first, ties
// toward the lowest id. Throws unless exactly one [MASK] is present.
std::vector<int> masked_lm_predict(const MaskedLM& mlm, const std::vector<int>& token_ids);

int argmax_lowest(const Tensor& logits);

}  // namespace kedial

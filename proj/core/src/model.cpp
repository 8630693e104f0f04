#include "kedial/model.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace kedial {

void ModelConfig::validate() const {
    if (vocab_size <= 0) throw NumericError("model config: vocab_size must be positive");
    if (d_model <= 0 || n_heads <= 0 || d_ff <= 0 || max_positions <= 0) {
        throw NumericError("model config: dimensions must be positive");
    }
    if (d_model % n_heads != 0) {
        throw NumericError("model config: d_model must be divisible by n_heads");
    }
    if (n_enc_layers <= 0 || n_dec_layers < 0) {
        throw NumericError("model config: layer counts out of range");
    }
    if (dropout < 0.0 || dropout >= 1.0) {
        throw NumericError("model config: dropout must be in [0, 1)");
    }
}

NodeRef ParameterStore::add(const std::string& name, Tensor init) {
    if (index_.count(name)) throw NumericError("duplicate parameter name '" + name + "'");
    NodeRef node = make_leaf(std::move(init), /*requires_grad=*/true);
    index_.emplace(name, params_.size());
    params_.push_back(Parameter{name, node});
    return node;
}

const NodeRef& ParameterStore::get(const std::string& name) const {
    auto it = index_.find(name);
    if (it == index_.end()) throw NumericError("unknown parameter '" + name + "'");
    return params_[it->second].node;
}

namespace {

constexpr double kInitStd = 0.02;

LinearRef add_linear(ParameterStore& store, const std::string& prefix, int in, int out, Rng& rng) {
    LinearRef ref;
    ref.w = store.add(prefix + ".weight", Tensor::randn({in, out}, rng, kInitStd));
    ref.b = store.add(prefix + ".bias", Tensor({out}));
    return ref;
}

LayerNormRef add_layer_norm(ParameterStore& store, const std::string& prefix, int d) {
    LayerNormRef ref;
    ref.gamma = store.add(prefix + ".gamma", Tensor({d}, 1.0));
    ref.beta = store.add(prefix + ".beta", Tensor({d}));
    return ref;
}

AttentionRef add_attention(ParameterStore& store, const std::string& prefix, int d, Rng& rng) {
    AttentionRef ref;
    ref.q = add_linear(store, prefix + ".wq", d, d, rng);
    ref.k = add_linear(store, prefix + ".wk", d, d, rng);
    ref.v = add_linear(store, prefix + ".wv", d, d, rng);
    ref.o = add_linear(store, prefix + ".wo", d, d, rng);
    return ref;
}

EncoderRefs add_encoder(ParameterStore& store, const ModelConfig& cfg, Rng& rng) {
    EncoderRefs enc;
    enc.tok_emb = store.add("tok_emb.weight",
                            Tensor::randn({cfg.vocab_size, cfg.d_model}, rng, kInitStd));
    enc.pos_emb = store.add("pos_emb.weight",
                            Tensor::randn({cfg.max_positions, cfg.d_model}, rng, kInitStd));
    for (int l = 0; l < cfg.n_enc_layers; ++l) {
        const std::string p = "encoder.layer" + std::to_string(l);
        EncoderLayerRef layer;
        layer.ln1 = add_layer_norm(store, p + ".ln1", cfg.d_model);
        layer.attn = add_attention(store, p + ".attn", cfg.d_model, rng);
        layer.ln2 = add_layer_norm(store, p + ".ln2", cfg.d_model);
        layer.ff1 = add_linear(store, p + ".ffn.w1", cfg.d_model, cfg.d_ff, rng);
        layer.ff2 = add_linear(store, p + ".ffn.w2", cfg.d_ff, cfg.d_model, rng);
        enc.layers.push_back(std::move(layer));
    }
    enc.final_ln = add_layer_norm(store, "encoder.final_ln", cfg.d_model);
    return enc;
}

NodeRef linear(const LinearRef& ref, const NodeRef& x) {
    return add_rowvec(matmul(x, ref.w), ref.b);
}

NodeRef norm(const LayerNormRef& ref, const NodeRef& x) {
    return layer_norm(x, ref.gamma, ref.beta);
}

NodeRef maybe_dropout(const NodeRef& x, const ModelConfig& cfg, bool training, Rng* rng) {
    if (!training || cfg.dropout == 0.0) return x;
    if (!rng) throw NumericError("dropout requested without an rng");
    return dropout(x, cfg.dropout, *rng);
}

// Multi-head attention. Queries from x_q, keys/values from x_kv; causal only
// makes sense for self-attention (square score matrix).
NodeRef attention(const AttentionRef& p, const NodeRef& x_q, const NodeRef& x_kv, int n_heads,
                  bool causal) {
    const int d = x_q->value.shape[1];
    const int dh = d / n_heads;
    const double att_scale = 1.0 / std::sqrt(static_cast<double>(dh));
    NodeRef q = linear(p.q, x_q);
    NodeRef k = linear(p.k, x_kv);
    NodeRef v = linear(p.v, x_kv);
    std::vector<NodeRef> heads;
    heads.reserve(static_cast<size_t>(n_heads));
    for (int h = 0; h < n_heads; ++h) {
        NodeRef qh = slice_cols(q, h * dh, (h + 1) * dh);
        NodeRef kh = slice_cols(k, h * dh, (h + 1) * dh);
        NodeRef vh = slice_cols(v, h * dh, (h + 1) * dh);
        NodeRef scores = scale(matmul_nt(qh, kh), att_scale);
        NodeRef probs = causal ? causal_softmax_rows(scores) : softmax_rows(scores);
        heads.push_back(matmul(probs, vh));
    }
    return linear(p.o, concat_cols(heads));
}

NodeRef ffn(const LinearRef& w1, const LinearRef& w2, const NodeRef& x) {
    return linear(w2, gelu(linear(w1, x)));
}

std::vector<int> iota_positions(size_t n) {
    std::vector<int> pos(n);
    std::iota(pos.begin(), pos.end(), 0);
    return pos;
}

void check_ids(const std::vector<int>& ids, const ModelConfig& cfg, const char* what) {
    if (ids.empty()) throw NumericError(std::string(what) + ": empty token sequence");
    if (static_cast<int>(ids.size()) > cfg.max_positions) {
        throw NumericError(std::string(what) + ": sequence of length " +
                           std::to_string(ids.size()) + " exceeds max positions " +
                           std::to_string(cfg.max_positions));
    }
    for (int id : ids) {
        if (id < 0 || id >= cfg.vocab_size) {
            throw NumericError(std::string(what) + ": token id " + std::to_string(id) +
                               " out of range [0, " + std::to_string(cfg.vocab_size) + ")");
        }
    }
}

NodeRef embed(const NodeRef& tok_emb, const NodeRef& pos_emb, const std::vector<int>& ids) {
    NodeRef tok = embedding(tok_emb, ids);
    NodeRef pos = embedding(pos_emb, iota_positions(ids.size()));
    return add(tok, pos);
}

NodeRef run_encoder(const EncoderRefs& enc, const ModelConfig& cfg, const std::vector<int>& ids,
                    bool training, Rng* rng) {
    check_ids(ids, cfg, "encode");
    NodeRef h = maybe_dropout(embed(enc.tok_emb, enc.pos_emb, ids), cfg, training, rng);
    for (const auto& layer : enc.layers) {
        NodeRef n1 = norm(layer.ln1, h);
        NodeRef att = attention(layer.attn, n1, n1, cfg.n_heads, /*causal=*/false);
        h = add(h, maybe_dropout(att, cfg, training, rng));
        NodeRef ff = ffn(layer.ff1, layer.ff2, norm(layer.ln2, h));
        h = add(h, maybe_dropout(ff, cfg, training, rng));
    }
    return norm(enc.final_ln, h);
}

void check_target_framing(const std::vector<int>& target_ids) {
    const bool starts_ok =
        !target_ids.empty() && (target_ids.front() == tok::kStart ||
                                target_ids.front() == tok::kDefi || target_ids.front() == tok::kHype);
    const bool ends_ok = target_ids.size() >= 2 && target_ids.back() == tok::kEnd;
    if (!starts_ok || !ends_ok) {
        throw DataError("malformed target framing: expected start token ... [END]");
    }
}

}  // namespace

Seq2SeqModel::Seq2SeqModel(ModelConfig config, uint64_t seed) : config_(config) {
    config_.validate();
    Rng rng(seed);
    encoder = add_encoder(store_, config_, rng);
    for (int l = 0; l < config_.n_dec_layers; ++l) {
        const std::string p = "decoder.layer" + std::to_string(l);
        DecoderLayerRef layer;
        layer.ln1 = add_layer_norm(store_, p + ".ln1", config_.d_model);
        layer.self_attn = add_attention(store_, p + ".self_attn", config_.d_model, rng);
        layer.ln2 = add_layer_norm(store_, p + ".ln2", config_.d_model);
        layer.cross_attn = add_attention(store_, p + ".cross_attn", config_.d_model, rng);
        layer.ln3 = add_layer_norm(store_, p + ".ln3", config_.d_model);
        layer.ff1 = add_linear(store_, p + ".ffn.w1", config_.d_model, config_.d_ff, rng);
        layer.ff2 = add_linear(store_, p + ".ffn.w2", config_.d_ff, config_.d_model, rng);
        decoder_layers.push_back(std::move(layer));
    }
    decoder_final_ln = add_layer_norm(store_, "decoder.final_ln", config_.d_model);
    out_proj = add_linear(store_, "out_proj", config_.d_model, config_.vocab_size, rng);
}

MaskedLM::MaskedLM(ModelConfig config, uint64_t seed) : config_(config) {
    config_.n_dec_layers = 0;
    config_.validate();
    Rng rng(seed);
    encoder = add_encoder(store_, config_, rng);
    head = add_linear(store_, "mlm_head", config_.d_model, config_.vocab_size, rng);
}

NodeRef encode_graph(const Seq2SeqModel& model, const std::vector<int>& source_ids, bool training,
                     Rng* rng) {
    return run_encoder(model.encoder, model.config(), source_ids, training, rng);
}

NodeRef decode_graph(const Seq2SeqModel& model, const NodeRef& enc_states,
                     const std::vector<int>& prefix_ids, bool training, Rng* rng) {
    const ModelConfig& cfg = model.config();
    if (!enc_states || enc_states->value.numel() == 0) {
        throw NumericError("decode: empty encoder states");
    }
    check_ids(prefix_ids, cfg, "decode");
    NodeRef h = maybe_dropout(embed(model.encoder.tok_emb, model.encoder.pos_emb, prefix_ids), cfg,
                              training, rng);
    for (const auto& layer : model.decoder_layers) {
        NodeRef n1 = norm(layer.ln1, h);
        NodeRef self = attention(layer.self_attn, n1, n1, cfg.n_heads, /*causal=*/true);
        h = add(h, maybe_dropout(self, cfg, training, rng));
        NodeRef cross = attention(layer.cross_attn, norm(layer.ln2, h), enc_states, cfg.n_heads,
                                  /*causal=*/false);
        h = add(h, maybe_dropout(cross, cfg, training, rng));
        NodeRef ff = ffn(layer.ff1, layer.ff2, norm(layer.ln3, h));
        h = add(h, maybe_dropout(ff, cfg, training, rng));
    }
    h = norm(model.decoder_final_ln, h);
    return add_rowvec(matmul(h, model.out_proj.w), model.out_proj.b);
}

NodeRef sequence_nll_graph(const Seq2SeqModel& model, const std::vector<int>& source_ids,
                           const std::vector<int>& target_ids, bool training, Rng* rng) {
    check_target_framing(target_ids);
    NodeRef enc = encode_graph(model, source_ids, training, rng);
    const std::vector<int> prefix(target_ids.begin(), target_ids.end() - 1);
    const std::vector<int> labels(target_ids.begin() + 1, target_ids.end());
    NodeRef logits = decode_graph(model, enc, prefix, training, rng);
    return seq_cross_entropy(logits, labels);
}

NodeRef mlm_logits_graph(const MaskedLM& mlm, const std::vector<int>& input_ids,
                         const std::vector<int>& positions, bool training, Rng* rng) {
    NodeRef states = run_encoder(mlm.encoder, mlm.config(), input_ids, training, rng);
    NodeRef picked = gather_rows(states, positions);
    return add_rowvec(matmul(picked, mlm.head.w), mlm.head.b);
}

Tensor encode(const Seq2SeqModel& model, const std::vector<int>& source_ids) {
    return encode_graph(model, source_ids)->value;
}

Tensor decode_step(const Seq2SeqModel& model, const Tensor& enc_states,
                   const std::vector<int>& prefix_ids) {
    if (enc_states.numel() == 0) throw NumericError("decode_step: empty encoder states");
    NodeRef enc = make_constant(enc_states);
    NodeRef logits = decode_graph(model, enc, prefix_ids);
    const int t = logits->value.shape[0];
    const int v = logits->value.shape[1];
    Tensor out({v});
    const double* last = logits->value.row_ptr(t - 1);
    std::copy(last, last + v, out.data.begin());
    return out;
}

double sequence_nll(const Seq2SeqModel& model, const std::vector<int>& source_ids,
                    const std::vector<int>& target_ids) {
    return sequence_nll_graph(model, source_ids, target_ids)->value.data[0];
}

int argmax_lowest(const Tensor& logits) {
    int best = 0;
    for (int i = 1; i < static_cast<int>(logits.numel()); ++i) {
        if (logits.data[static_cast<size_t>(i)] > logits.data[static_cast<size_t>(best)]) best = i;
    }
    return best;
}

std::vector<int> greedy_generate(const Seq2SeqModel& model, const std::vector<int>& source_ids,
                                 int start_token, int max_len) {
    const ModelConfig& cfg = model.config();
    if (start_token < 0 || start_token >= cfg.vocab_size) {
        throw NumericError("greedy_generate: unknown start token " + std::to_string(start_token));
    }
    if (max_len < 1) throw NumericError("greedy_generate: max_len must be >= 1");
    const Tensor enc_states = encode(model, source_ids);
    std::vector<int> prefix{start_token};
    std::vector<int> out;
    while (static_cast<int>(out.size()) < max_len &&
           static_cast<int>(prefix.size()) < cfg.max_positions) {
        const Tensor logits = decode_step(model, enc_states, prefix);
        const int next = argmax_lowest(logits);
        if (next == tok::kEnd) break;
        out.push_back(next);
        prefix.push_back(next);
    }
    return out;
}

std::vector<int> masked_lm_predict(const MaskedLM& mlm, const std::vector<int>& token_ids) {
    int mask_pos = -1;
    int mask_count = 0;
    for (size_t i = 0; i < token_ids.size(); ++i) {
        if (token_ids[i] == tok::kMask) {
            mask_pos = static_cast<int>(i);
            ++mask_count;
        }
    }
    if (mask_count != 1) {
        throw DataError("masked_lm_predict: expected exactly one [MASK], found " +
                        std::to_string(mask_count));
    }
    NodeRef logits = mlm_logits_graph(mlm, token_ids, {mask_pos});
    const int v = logits->value.shape[1];
    const double* row = logits->value.row_ptr(0);
    std::vector<int> ranking(static_cast<size_t>(v));
    std::iota(ranking.begin(), ranking.end(), 0);
    std::sort(ranking.begin(), ranking.end(), [row](int a, int b) {
        if (row[a] != row[b]) return row[a] > row[b];
        return a < b;
    });
    return ranking;
}

}  // namespace kedial

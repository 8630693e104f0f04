#include "kedial/train.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include <nlohmann/json.hpp>

#include "kedial/optim.hpp"

namespace kedial {

using nlohmann::json;

const char* train_mode_name(TrainMode mode) {
    switch (mode) {
        case TrainMode::kDialogueOnly: return "dialogue-only";
        case TrainMode::kKnowledgeGrounded: return "kg";
        case TrainMode::kKnowledgeEnhanced: return "ke";
    }
    throw DataError("unknown train mode");
}

TrainMode train_mode_from_name(const std::string& s) {
    if (s == "dialogue-only") return TrainMode::kDialogueOnly;
    if (s == "kg") return TrainMode::kKnowledgeGrounded;
    if (s == "ke") return TrainMode::kKnowledgeEnhanced;
    throw DataError("unknown train mode '" + s + "' (expected dialogue-only | kg | ke)");
}

TaskDatasets build_task_datasets(const std::vector<DialogueExample>& examples,
                                 const KnowledgeBase& kb, const HypernymLexicon& lexicon,
                                 const Vocab& vocab, const TrainConfig& config) {
    BuilderOptions opts;
    opts.max_positions = config.max_positions;
    TaskDatasets out;
    const TrainMode mode = config.mode;

    for (const auto& ex : examples) {
        switch (mode) {
            case TrainMode::kDialogueOnly:
                out.dialogue.push_back(
                    make_dialogue_instance(ex, /*with_knowledge=*/false, vocab, opts,
                                           out.dialogue_report));
                break;
            case TrainMode::kKnowledgeGrounded: {
                TrainingInstance inst = make_dialogue_instance(ex, /*with_knowledge=*/true, vocab,
                                                               opts, out.dial_know_report);
                (inst.task == Task::kDialKnow ? out.dial_know : out.dialogue)
                    .push_back(std::move(inst));
                break;
            }
            case TrainMode::kKnowledgeEnhanced: {
                out.dialogue.push_back(
                    make_dialogue_instance(ex, /*with_knowledge=*/false, vocab, opts,
                                           out.dialogue_report));
                if (ex.has_knowledge()) {
                    out.dial_know.push_back(make_dialogue_instance(
                        ex, /*with_knowledge=*/true, vocab, opts, out.dial_know_report));
                }
                break;
            }
        }
    }
    if (mode == TrainMode::kKnowledgeEnhanced) {
        if (config.interpret_weight > 0.0) {
            for (const auto& ex : examples) {
                if (auto inst = make_interpret_instance(ex, kb, vocab, opts, out.interpret_report)) {
                    out.interpret.push_back(std::move(*inst));
                }
            }
        }
        if (config.hypernym_weight > 0.0) {
            for (const auto& ex : examples) {
                if (auto inst = make_hypernym_instance(ex, lexicon, vocab, opts,
                                                       out.hypernym_report)) {
                    out.hypernym.push_back(std::move(*inst));
                }
            }
        }
    }
    return out;
}

namespace {

double task_weight(Task task, const TrainConfig& config) {
    switch (task) {
        case Task::kDialogue:
        case Task::kDialKnow: return 1.0;
        case Task::kInterpret: return config.interpret_weight;
        case Task::kHypernym: return config.hypernym_weight;
    }
    throw DataError("unknown task tag in batch");
}

int64_t predicted_tokens(const TrainingInstance& inst) {
    return static_cast<int64_t>(inst.target_ids.size()) - 1;
}

}  // namespace

NodeRef joint_loss(const Seq2SeqModel& model, const std::vector<const TrainingInstance*>& batch,
                   const TrainConfig& config, bool training, Rng* rng) {
    if (batch.empty()) throw DataError("joint_loss: empty batch");
    std::vector<NodeRef> terms;
    terms.reserve(batch.size());
    for (const TrainingInstance* inst : batch) {
        const double w = task_weight(inst->task, config);
        NodeRef nll = sequence_nll_graph(model, inst->source_ids, inst->target_ids, training, rng);
        terms.push_back(w == 1.0 ? nll : scale(nll, w));
    }
    return terms.size() == 1 ? terms[0] : add_scalars(terms);
}

double joint_loss_value(const Seq2SeqModel& model, const std::vector<TrainingInstance>& batch,
                        const TrainConfig& config) {
    std::vector<const TrainingInstance*> ptrs;
    ptrs.reserve(batch.size());
    for (const auto& inst : batch) ptrs.push_back(&inst);
    return joint_loss(model, ptrs, config, /*training=*/false)->value.data[0];
}

uint64_t epoch_stream_seed(uint64_t seed, int epoch) {
    // splitmix64 over (seed, epoch) so per-epoch orders are unrelated.
    uint64_t z = seed + 0x9E3779B97F4A7C15ull * (static_cast<uint64_t>(epoch) + 1);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

std::vector<const TrainingInstance*> mix_instances(const TaskDatasets& datasets, uint64_t seed) {
    if (datasets.total() == 0) throw DataError("mix_instances: all datasets empty");
    std::vector<const TrainingInstance*> pool;
    pool.reserve(datasets.total());
    for (const auto& inst : datasets.dialogue) pool.push_back(&inst);
    for (const auto& inst : datasets.dial_know) pool.push_back(&inst);
    for (const auto& inst : datasets.interpret) pool.push_back(&inst);
    for (const auto& inst : datasets.hypernym) pool.push_back(&inst);
    Rng rng(seed);
    std::shuffle(pool.begin(), pool.end(), rng);
    return pool;
}

double instances_perplexity(const Seq2SeqModel& model,
                            const std::vector<TrainingInstance>& instances) {
    if (instances.empty()) throw DataError("perplexity: empty instance set");
    double total_nll = 0.0;
    int64_t total_tokens = 0;
    for (const auto& inst : instances) {
        total_nll += sequence_nll(model, inst.source_ids, inst.target_ids);
        total_tokens += predicted_tokens(inst);
    }
    return std::exp(total_nll / static_cast<double>(total_tokens));
}

TrainResult train(const TrainConfig& config, const TaskDatasets& datasets, Seq2SeqModel& model,
                  const std::vector<TrainingInstance>* eval_instances) {
    if (config.batch_size < 1) throw DataError("train: batch_size must be >= 1");
    if (config.epochs < 1) throw DataError("train: epochs must be >= 1");
    if (datasets.total() == 0) throw DataError("train: no training instances");

    for (const auto* set : {&datasets.dialogue, &datasets.dial_know, &datasets.interpret,
                            &datasets.hypernym}) {
        for (const auto& inst : *set) validate_instance(inst, config.max_positions);
    }

    AdamWConfig acfg;
    acfg.weight_decay = config.weight_decay;
    AdamWState state = make_adamw_state(model.params());
    Rng dropout_rng(epoch_stream_seed(config.seed, -1));

    TrainResult result;
    for (int epoch = 0; epoch < config.epochs; ++epoch) {
        const double lr = config.lr_halving ? config.lr0 / std::pow(2.0, epoch) : config.lr0;
        acfg.lr = lr;
        auto stream = mix_instances(datasets, epoch_stream_seed(config.seed, epoch));

        double epoch_loss = 0.0;
        int64_t epoch_tokens = 0;
        double window_loss = 0.0;
        int64_t window_tokens = 0;

        for (size_t start = 0; start < stream.size(); start += config.batch_size) {
            const size_t stop = std::min(stream.size(), start + config.batch_size);
            std::vector<const TrainingInstance*> batch(stream.begin() + start,
                                                       stream.begin() + stop);
            zero_grads(model.params());
            NodeRef loss;
            try {
                loss = joint_loss(model, batch, config, /*training=*/true, &dropout_rng);
                if (!std::isfinite(loss->value.data[0])) {
                    throw NumericError("joint loss is not finite");
                }
                backward(loss);
            } catch (const NumericError& e) {
                throw Error("training diverged at epoch " + std::to_string(epoch) + ", step " +
                            std::to_string(result.steps) + ": " + e.what());
            }
            if (config.clip_norm > 0.0) clip_grad_norm(model.params(), config.clip_norm);
            adamw_step(model.params(), state, acfg);
            ++result.steps;

            int64_t batch_tokens = 0;
            for (const auto* inst : batch) batch_tokens += predicted_tokens(*inst);
            epoch_loss += loss->value.data[0];
            epoch_tokens += batch_tokens;
            window_loss += loss->value.data[0];
            window_tokens += batch_tokens;

            if (config.eval_every > 0 && result.steps % config.eval_every == 0) {
                MetricRecord rec;
                rec.epoch = epoch;
                rec.step = result.steps;
                rec.lr = lr;
                rec.train_loss = window_loss;
                rec.train_loss_per_token =
                    window_tokens ? window_loss / static_cast<double>(window_tokens) : 0.0;
                if (eval_instances) rec.eval_ppl = instances_perplexity(model, *eval_instances);
                result.records.push_back(std::move(rec));
                window_loss = 0.0;
                window_tokens = 0;
            }
        }

        MetricRecord rec;
        rec.epoch = epoch;
        rec.step = result.steps;
        rec.lr = lr;
        rec.train_loss = epoch_loss;
        rec.train_loss_per_token =
            epoch_tokens ? epoch_loss / static_cast<double>(epoch_tokens) : 0.0;
        if (eval_instances) rec.eval_ppl = instances_perplexity(model, *eval_instances);
        result.final_lr = lr;
        result.final_train_loss_per_token = rec.train_loss_per_token;
        result.records.push_back(std::move(rec));
    }
    return result;
}

void write_metric_log(const std::vector<MetricRecord>& records,
                      const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write " + path.string());
    for (const auto& rec : records) {
        json j;
        j["epoch"] = rec.epoch;
        j["step"] = rec.step;
        j["lr"] = rec.lr;
        j["train_loss"] = rec.train_loss;
        j["train_loss_per_token"] = rec.train_loss_per_token;
        if (rec.eval_ppl) {
            j["eval_ppl"] = *rec.eval_ppl;
        } else {
            j["eval_ppl"] = nullptr;
        }
        out << j.dump() << '\n';
    }
}

TrainResult train_masked_lm(const MlmTrainConfig& config,
                            const std::vector<std::vector<int>>& sentences, MaskedLM& mlm) {
    if (sentences.empty()) throw DataError("mlm training: no sentences");
    if (config.mask_prob <= 0.0 || config.mask_prob >= 1.0) {
        throw DataError("mlm training: mask_prob must be in (0, 1)");
    }

    AdamWConfig acfg;
    acfg.weight_decay = config.weight_decay;
    AdamWState state = make_adamw_state(mlm.params());
    Rng rng(epoch_stream_seed(config.seed, -2));

    TrainResult result;
    std::vector<size_t> order(sentences.size());
    for (size_t i = 0; i < order.size(); ++i) order[i] = i;

    for (int epoch = 0; epoch < config.epochs; ++epoch) {
        const double lr = config.lr_halving ? config.lr0 / std::pow(2.0, epoch) : config.lr0;
        acfg.lr = lr;
        Rng shuffle_rng(epoch_stream_seed(config.seed, epoch));
        std::shuffle(order.begin(), order.end(), shuffle_rng);

        double epoch_loss = 0.0;
        int64_t epoch_targets = 0;
        size_t in_batch = 0;
        bool have_grads = false;

        auto flush = [&] {
            if (!have_grads) return;
            if (config.clip_norm > 0.0) clip_grad_norm(mlm.params(), config.clip_norm);
            adamw_step(mlm.params(), state, acfg);
            ++result.steps;
            zero_grads(mlm.params());
            have_grads = false;
            in_batch = 0;
        };

        zero_grads(mlm.params());
        for (size_t idx : order) {
            const auto& sentence = sentences[idx];
            if (sentence.empty() ||
                static_cast<int>(sentence.size()) > mlm.config().max_positions) {
                continue;
            }
            std::vector<int> candidates;
            for (size_t i = 0; i < sentence.size(); ++i) {
                if (sentence[i] >= tok::kNumSpecials) candidates.push_back(static_cast<int>(i));
            }
            if (candidates.empty()) continue;

            std::vector<int> input = sentence;
            std::vector<int> positions;
            std::vector<int> targets;
            std::bernoulli_distribution mask_d(config.mask_prob);
            for (int pos : candidates) {
                if (mask_d(rng)) {
                    positions.push_back(pos);
                    targets.push_back(sentence[static_cast<size_t>(pos)]);
                    input[static_cast<size_t>(pos)] = tok::kMask;
                }
            }
            if (positions.empty()) {
                std::uniform_int_distribution<size_t> pick(0, candidates.size() - 1);
                const int pos = candidates[pick(rng)];
                positions.push_back(pos);
                targets.push_back(sentence[static_cast<size_t>(pos)]);
                input[static_cast<size_t>(pos)] = tok::kMask;
            }

            NodeRef logits = mlm_logits_graph(mlm, input, positions);
            NodeRef loss = seq_cross_entropy(logits, targets);
            backward(loss);
            have_grads = true;
            epoch_loss += loss->value.data[0];
            epoch_targets += static_cast<int64_t>(targets.size());
            if (++in_batch >= static_cast<size_t>(config.batch_size)) flush();
        }
        flush();

        MetricRecord rec;
        rec.epoch = epoch;
        rec.step = result.steps;
        rec.lr = lr;
        rec.train_loss = epoch_loss;
        rec.train_loss_per_token =
            epoch_targets ? epoch_loss / static_cast<double>(epoch_targets) : 0.0;
        result.final_lr = lr;
        result.final_train_loss_per_token = rec.train_loss_per_token;
        result.records.push_back(std::move(rec));
    }
    return result;
}

}  // namespace kedial

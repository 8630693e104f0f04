#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "kedial/checkpoint.hpp"
#include "kedial/data.hpp"
#include "kedial/model.hpp"

namespace kedial {

enum class TrainMode { kDialogueOnly, kKnowledgeGrounded, kKnowledgeEnhanced };

const char* train_mode_name(TrainMode mode);           // dialogue-only | kg | ke
TrainMode train_mode_from_name(const std::string& s);  // throws DataError

struct TrainConfig {
    TrainMode mode = TrainMode::kKnowledgeEnhanced;
    int batch_size = 128;
    double lr0 = 1e-5;
    int epochs = 1;
    bool lr_halving = true;  // lr at epoch e is lr0 / 2^e
    uint64_t seed = 0;
    int max_positions = 512;
    int eval_every = 0;  // optimizer steps between extra log records; 0 = per epoch only
    // Auxiliary loss weights; the joint objective is an unweighted sum by
    // default, zero drops the task from training entirely (ablations).
    double interpret_weight = 1.0;
    double hypernym_weight = 1.0;
    double weight_decay = 0.01;
    double clip_norm = 1.0;  // global-norm gradient clip; 0 disables
};

// Instances grouped by task, with the builders' skip accounting.
struct TaskDatasets {
    std::vector<TrainingInstance> dialogue;
    std::vector<TrainingInstance> dial_know;
    std::vector<TrainingInstance> interpret;
    std::vector<TrainingInstance> hypernym;
    SkipReport dialogue_report, dial_know_report, interpret_report, hypernym_report;

    size_t total() const {
        return dialogue.size() + dial_know.size() + interpret.size() + hypernym.size();
    }
};

// Builds the instance sets a training mode consumes:
//   dialogue-only: context-only instances;
//   kg:            context+knowledge instances (context-only fallback when
//                  an example has no knowledge);
//   ke:            context-only for every example, plus a context+knowledge
//                  duplicate for knowledge-bearing examples, plus the
//                  interpret and hypernym sets (unless their weight is 0).
TaskDatasets build_task_datasets(const std::vector<DialogueExample>& examples,
                                 const KnowledgeBase& kb, const HypernymLexicon& lexicon,
                                 const Vocab& vocab, const TrainConfig& config);

// Sum of per-instance sequence NLLs, auxiliary tasks weighted. Throws on an
// empty batch.
NodeRef joint_loss(const Seq2SeqModel& model, const std::vector<const TrainingInstance*>& batch,
                   const TrainConfig& config, bool training = true, Rng* rng = nullptr);

double joint_loss_value(const Seq2SeqModel& model, const std::vector<TrainingInstance>& batch,
                        const TrainConfig& config);

// One epoch's instance stream: the pooled union of all task datasets,
// uniformly shuffled by `seed`. Pointers stay valid while `datasets` lives.
std::vector<const TrainingInstance*> mix_instances(const TaskDatasets& datasets, uint64_t seed);

// Stream seed for a given epoch; exposed so tests can reproduce epoch order.
uint64_t epoch_stream_seed(uint64_t seed, int epoch);

struct MetricRecord {
    int epoch = 0;
    int64_t step = 0;
    double lr = 0.0;
    double train_loss = 0.0;            // summed over tokens and instances
    double train_loss_per_token = 0.0;  // same quantity, per-token mean
    std::optional<double> eval_ppl;
};

struct TrainResult {
    std::vector<MetricRecord> records;
    int64_t steps = 0;
    double final_lr = 0.0;
    double final_train_loss_per_token = 0.0;
};

// Reference training loop: single-threaded, deterministic in (config, model
// seed, datasets). Each step zeroes grads, evaluates the joint loss over one
// batch, backpropagates, clips, and applies AdamW. A non-finite loss aborts
// with a diagnostic. eval_instances, when given, adds teacher-forced
// perplexity to each record.
TrainResult train(const TrainConfig& config, const TaskDatasets& datasets, Seq2SeqModel& model,
                  const std::vector<TrainingInstance>* eval_instances = nullptr);

// JSON lines, one record per eval point.
void write_metric_log(const std::vector<MetricRecord>& records,
                      const std::filesystem::path& path);

struct MlmTrainConfig {
    int batch_size = 32;
    double lr0 = 3e-4;
    int epochs = 3;
    bool lr_halving = true;
    uint64_t seed = 0;
    double mask_prob = 0.15;
    double weight_decay = 0.01;
    double clip_norm = 1.0;
};

// Masked-token training for the evaluation scorer: each non-special position
// is replaced by [MASK] with mask_prob (at least one per sentence), and the
// model is trained to restore the originals.
TrainResult train_masked_lm(const MlmTrainConfig& config,
                            const std::vector<std::vector<int>>& sentences, MaskedLM& mlm);

// Teacher-forced exp(sum NLL / sum predicted tokens) over instances.
double instances_perplexity(const Seq2SeqModel& model,
                            const std::vector<TrainingInstance>& instances);

}  // namespace kedial

#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "kedial/data.hpp"
#include "kedial/model.hpp"

namespace kedial {

struct EvalOptions {
    std::vector<int> k_list = {1, 5, 10, 20};
    int max_gen_len = 24;
    BuilderOptions builder;
    uint64_t seed = 0;  // drives sweep withholding and probe shuffling
};

// ---- scalar metrics ---------------------------------------------------------

// Teacher-forced exp(sum NLL / sum gold tokens) of gold responses;
// with_knowledge selects how sources are built. Errors on an empty test set.
double perplexity(const Seq2SeqModel& model, const std::vector<DialogueExample>& examples,
                  bool with_knowledge, const Vocab& vocab, const EvalOptions& opts);

// Token-overlap F1 with lowercasing and punctuation stripped; multiset
// overlap; 0 when either side is empty or nothing overlaps.
double unigram_f1(const std::string& generated, const std::string& gold);

// Mean of unigram_f1 over (generated, gold) pairs.
double corpus_f1(const std::vector<std::pair<std::string, std::string>>& pairs);

// ---- masked-topic recall ----------------------------------------------------

enum class RecallResponse { kGenerated, kGoldResponse, kEmpty };

struct RecallResult {
    std::map<int, double> recall;  // k -> fraction
    int scored = 0;
    int skipped = 0;  // multi-token topics, repeated topics, out-of-vocab topics
};

// For each example: generate a response, mask the topic in the last context
// utterance, feed "masked utterance [SEP] response" to the masked LM, and
// score a hit at k when the gold topic token ranks in the top k.
RecallResult knowledge_recall_at_k(const Seq2SeqModel& model, const MaskedLM& mlm,
                                   const std::vector<DialogueExample>& examples,
                                   const Vocab& vocab, const EvalOptions& opts,
                                   bool generate_with_knowledge = false,
                                   RecallResponse response_source = RecallResponse::kGenerated);

// ---- knowledge-mining probe --------------------------------------------------

struct ProbeSample {
    std::string masked_utterance;
    std::string generated_definition;
    std::string generated_hypernym;
};

struct MiningProbeResult {
    double matched_ppl = 0.0;   // gold definitions conditioned on their own masked context
    double shuffled_ppl = 0.0;  // same definitions, contexts permuted (control)
    int n_probes = 0;
    int skipped = 0;
    std::vector<ProbeSample> samples;
};

// Scores gold definitions under the definition task. Works on any model
// sharing the vocabulary; one never trained on the task simply scores badly.
MiningProbeResult knowledge_mining_probe(const Seq2SeqModel& model, const KnowledgeBase& kb,
                                         const std::vector<DialogueExample>& examples,
                                         const Vocab& vocab, const EvalOptions& opts,
                                         int n_samples = 5);

// ---- full grid ----------------------------------------------------------------

struct EvalCell {
    double ppl = 0.0;
    double f1 = 0.0;
    std::map<int, double> recall_at;
    int n_examples = 0;
    int recall_scored = 0;
    int recall_skipped = 0;
};

struct EvalReport {
    std::vector<int> k_list;
    std::vector<std::string> modes;  // rendering order
    // mode -> split ("seen" | "unseen") -> setting ("with_knowledge" |
    // "without_knowledge") -> cell
    std::map<std::string, std::map<std::string, std::map<std::string, EvalCell>>> cells;

    const EvalCell& cell(const std::string& mode, const std::string& split,
                         const std::string& setting) const;
};

using ModelGrid = std::vector<std::pair<std::string, const Seq2SeqModel*>>;

// The whole mode x split x knowledge-availability grid. mlm may be null to
// skip recall columns.
EvalReport evaluate_suite(const ModelGrid& models, const std::vector<DialogueExample>& seen,
                          const std::vector<DialogueExample>& unseen, const MaskedLM* mlm,
                          const Vocab& vocab, const EvalOptions& opts);

std::string report_to_json(const EvalReport& report);
// Aligned tables: PPL/F1 per split plus the seen->unseen gap, then recall.
std::string report_to_text(const EvalReport& report);

// ---- knowledge-availability sweep ---------------------------------------------

struct SweepRow {
    double percent_knowledge = 0.0;  // 0..100
    std::string mode;
    double ppl = 0.0;
    double f1 = 0.0;
};

// Evaluates each model while only a fraction of examples keep their
// knowledge. The available subset is seeded and shared across modes and
// nested across fractions.
std::vector<SweepRow> knowledge_availability_sweep(const ModelGrid& models,
                                                   const std::vector<DialogueExample>& examples,
                                                   const std::vector<double>& fractions,
                                                   const Vocab& vocab, const EvalOptions& opts);

std::string sweep_to_csv(const std::vector<SweepRow>& rows);

}  // namespace kedial

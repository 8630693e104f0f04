#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "kedial/vocab.hpp"

namespace kedial {

enum class Task { kDialogue, kDialKnow, kInterpret, kHypernym };

const char* task_name(Task task);
Task task_from_name(const std::string& name);

struct DialogueExample {
    std::vector<std::string> context;    // oldest utterance first
    std::vector<std::string> knowledge;  // empty means no knowledge attached
    std::string response;
    std::string topic;

    const std::string& last_utterance() const { return context.back(); }
    bool has_knowledge() const { return !knowledge.empty(); }
};

// term -> definition sentence, keys lowercased on insert and lookup.
class KnowledgeBase {
public:
    void insert(const std::string& term, const std::string& definition);
    std::optional<std::string> lookup(const std::string& term) const;
    size_t size() const { return defs_.size(); }
    int duplicates_replaced = 0;

    const std::unordered_map<std::string, std::string>& entries() const { return defs_; }

private:
    std::unordered_map<std::string, std::string> defs_;
};

// term -> hypernym, keys lowercased. Chains must terminate; a cycle in the
// loaded entries is a data error.
class HypernymLexicon {
public:
    void insert(const std::string& term, const std::string& hypernym);
    std::optional<std::string> lookup(const std::string& term) const;
    size_t size() const { return map_.size(); }
    void check_acyclic() const;
    int duplicates_replaced = 0;

    const std::unordered_map<std::string, std::string>& entries() const { return map_; }

private:
    std::unordered_map<std::string, std::string> map_;
};

struct TrainingInstance {
    Task task = Task::kDialogue;
    std::vector<int> source_ids;
    std::vector<int> target_ids;
};

// ---- loaders ---------------------------------------------------------------
// All raise DataError with "<path>:<line>: <what>" on malformed input.

// JSON lines: {"context": [...], "knowledge": [...]?, "response": "...",
// "topic": "..."}.
std::vector<DialogueExample> load_dialogue_jsonl(const std::filesystem::path& path);
KnowledgeBase load_kb_tsv(const std::filesystem::path& path);
HypernymLexicon load_hypernym_tsv(const std::filesystem::path& path);

void save_dialogue_jsonl(const std::vector<DialogueExample>& examples,
                         const std::filesystem::path& path);

// ---- builders --------------------------------------------------------------

// Replaces every occurrence of the tokenized topic span with a single
// [MASK]. Throws DataError when the span does not occur.
std::vector<std::string> mask_topic_word(const std::vector<std::string>& utterance_tokens,
                                         const std::string& topic);

// Replaces every occurrence of `span` with `replacement`, left to right,
// non-overlapping. Returns nullopt when span never occurs.
std::optional<std::vector<std::string>> replace_span_all(
    const std::vector<std::string>& tokens, const std::vector<std::string>& span,
    const std::vector<std::string>& replacement);

struct BuilderOptions {
    int max_positions = 512;
    int max_definition_tokens = 64;
};

struct SkipReport {
    int emitted = 0;
    int skipped = 0;
    int fallbacks = 0;    // dialogue builder: knowledge requested but absent
    int truncations = 0;  // definitions cut to max_definition_tokens
    std::vector<std::string> log;

    void skip(const std::string& why) {
        ++skipped;
        log.push_back(why);
    }
};

// Masked last utterance -> [DEFI] definition [END]. Skips (returns nullopt,
// counts in report) when the topic is missing from the KB or the utterance.
std::optional<TrainingInstance> make_interpret_instance(const DialogueExample& example,
                                                        const KnowledgeBase& kb,
                                                        const Vocab& vocab,
                                                        const BuilderOptions& opts,
                                                        SkipReport& report);

// Last utterance -> [HYPE] utterance-with-hypernym [END].
std::optional<TrainingInstance> make_hypernym_instance(const DialogueExample& example,
                                                       const HypernymLexicon& lexicon,
                                                       const Vocab& vocab,
                                                       const BuilderOptions& opts,
                                                       SkipReport& report);

// Context joined with [SEP] (knowledge sentences appended after a further
// [SEP] when requested) -> [START] response [END]. Source is truncated from
// the left so the newest tokens survive. with_knowledge on an example with
// no knowledge falls back to the plain dialogue task and counts a fallback.
TrainingInstance make_dialogue_instance(const DialogueExample& example, bool with_knowledge,
                                        const Vocab& vocab, const BuilderOptions& opts,
                                        SkipReport& report);

// Framing contract every emitted instance satisfies: task-specific start
// token, exactly one [END] and it is last, source non-empty and within
// max_positions. Throws DataError on violation.
void validate_instance(const TrainingInstance& instance, int max_positions);

// ---- instance file I/O -----------------------------------------------------
// JSON lines {"task": ..., "source_ids": [...], "target_ids": [...]}.

void save_instances_jsonl(const std::vector<TrainingInstance>& instances,
                          const std::filesystem::path& path);
std::vector<TrainingInstance> load_instances_jsonl(const std::filesystem::path& path);

}  // namespace kedial

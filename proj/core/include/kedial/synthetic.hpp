#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "kedial/data.hpp"

namespace kedial {

// Knobs for the synthetic dialogue corpus. Entities are pseudo-words grouped
// into a small category system; each entity gets a definition and a hypernym,
// responses are category-themed templates. Train uses seen entities only;
// both test splits reuse the same templates so the only distribution shift
// is whether the entity appeared in training.
struct SynthConfig {
    uint64_t seed = 7;
    int n_entities = 40;
    int n_templates = 6;  // context templates drawn per category
    double unseen_fraction = 0.25;
    int n_train = 2000;
    int n_test = 250;  // per split
    double opener_prob = 0.5;      // chance of a greeting before the entity utterance
    double response_jitter = 0.25; // chance the response template is re-rolled
};

struct SyntheticCorpus {
    std::vector<DialogueExample> train;
    std::vector<DialogueExample> test_seen;
    std::vector<DialogueExample> test_unseen;
    std::vector<std::pair<std::string, std::string>> kb;       // term, definition
    std::vector<std::pair<std::string, std::string>> lexicon;  // term, hypernym
    std::vector<std::string> seen_entities;
    std::vector<std::string> unseen_entities;
};

// Deterministic in `config.seed`: equal configs give byte-identical output
// files. Throws DataError when the parameters cannot populate all splits.
SyntheticCorpus generate_synthetic_corpus(const SynthConfig& config);

// train.jsonl, test_seen.jsonl, test_unseen.jsonl, kb.tsv, hypernyms.tsv.
void write_corpus_dir(const SyntheticCorpus& corpus, const std::filesystem::path& dir);

// Every text field in the corpus (dialogues, definitions, hypernyms), the
// input build_vocab wants so that unseen entities are in-vocabulary (their
// embeddings simply never train).
std::vector<std::string> corpus_texts(const SyntheticCorpus& corpus);

}  // namespace kedial

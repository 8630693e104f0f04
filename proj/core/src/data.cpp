#include "kedial/data.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <functional>
#include <sstream>

#include <nlohmann/json.hpp>

namespace kedial {

using nlohmann::json;

const char* task_name(Task task) {
    switch (task) {
        case Task::kDialogue: return "DIALOGUE";
        case Task::kDialKnow: return "DIAL_KNOW";
        case Task::kInterpret: return "INTERPRET";
        case Task::kHypernym: return "HYPERNYM";
    }
    throw DataError("unknown task tag");
}

Task task_from_name(const std::string& name) {
    if (name == "DIALOGUE") return Task::kDialogue;
    if (name == "DIAL_KNOW") return Task::kDialKnow;
    if (name == "INTERPRET") return Task::kInterpret;
    if (name == "HYPERNYM") return Task::kHypernym;
    throw DataError("unknown task tag '" + name + "'");
}

namespace {

std::string lower(const std::string& s) {
    std::string out = s;
    std::transform(out.begin(), out.end(), out.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return out;
}

[[noreturn]] void line_error(const std::filesystem::path& path, int line, const std::string& what) {
    throw DataError(path.string() + ":" + std::to_string(line) + ": " + what);
}

}  // namespace

void KnowledgeBase::insert(const std::string& term, const std::string& definition) {
    if (definition.empty()) throw DataError("knowledge base: empty definition for '" + term + "'");
    auto [it, inserted] = defs_.insert_or_assign(lower(term), definition);
    (void)it;
    if (!inserted) ++duplicates_replaced;
}

std::optional<std::string> KnowledgeBase::lookup(const std::string& term) const {
    auto it = defs_.find(lower(term));
    if (it == defs_.end()) return std::nullopt;
    return it->second;
}

void HypernymLexicon::insert(const std::string& term, const std::string& hypernym) {
    const std::string key = lower(term);
    const std::string value = lower(hypernym);
    if (value.empty()) throw DataError("hypernym lexicon: empty hypernym for '" + term + "'");
    if (key == value) throw DataError("hypernym lexicon: '" + term + "' is its own hypernym");
    auto [it, inserted] = map_.insert_or_assign(key, value);
    (void)it;
    if (!inserted) ++duplicates_replaced;
}

std::optional<std::string> HypernymLexicon::lookup(const std::string& term) const {
    auto it = map_.find(lower(term));
    if (it == map_.end()) return std::nullopt;
    return it->second;
}

void HypernymLexicon::check_acyclic() const {
    for (const auto& [start, _] : map_) {
        std::string cur = start;
        size_t hops = 0;
        while (true) {
            auto it = map_.find(cur);
            if (it == map_.end()) break;
            cur = it->second;
            if (++hops > map_.size()) {
                throw DataError("hypernym lexicon: cycle reachable from '" + start + "'");
            }
        }
    }
}

std::vector<DialogueExample> load_dialogue_jsonl(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot read " + path.string());
    std::vector<DialogueExample> out;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        json j;
        try {
            j = json::parse(line);
        } catch (const json::exception& e) {
            line_error(path, lineno, std::string("invalid JSON: ") + e.what());
        }
        DialogueExample ex;
        if (!j.contains("context") || !j["context"].is_array() || j["context"].empty()) {
            line_error(path, lineno, "missing or empty \"context\" array");
        }
        for (const auto& u : j["context"]) {
            if (!u.is_string()) line_error(path, lineno, "context entries must be strings");
            ex.context.push_back(u.get<std::string>());
        }
        if (!j.contains("response") || !j["response"].is_string()) {
            line_error(path, lineno, "missing \"response\" string");
        }
        ex.response = j["response"].get<std::string>();
        if (!j.contains("topic") || !j["topic"].is_string()) {
            line_error(path, lineno, "missing \"topic\" string");
        }
        ex.topic = j["topic"].get<std::string>();
        if (j.contains("knowledge")) {
            if (!j["knowledge"].is_array()) line_error(path, lineno, "\"knowledge\" must be an array");
            for (const auto& k : j["knowledge"]) {
                if (!k.is_string()) line_error(path, lineno, "knowledge entries must be strings");
                ex.knowledge.push_back(k.get<std::string>());
            }
        }
        out.push_back(std::move(ex));
    }
    return out;
}

void save_dialogue_jsonl(const std::vector<DialogueExample>& examples,
                         const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write " + path.string());
    for (const auto& ex : examples) {
        json j;
        j["context"] = ex.context;
        if (ex.has_knowledge()) j["knowledge"] = ex.knowledge;
        j["response"] = ex.response;
        j["topic"] = ex.topic;
        out << j.dump() << '\n';
    }
}

namespace {

using TsvSink = std::function<void(const std::string&, const std::string&)>;

void load_tsv(const std::filesystem::path& path, const TsvSink& sink) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot read " + path.string());
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const size_t tab = line.find('\t');
        if (tab == std::string::npos || tab == 0 || tab + 1 >= line.size()) {
            line_error(path, lineno, "expected two tab-separated columns");
        }
        try {
            sink(line.substr(0, tab), line.substr(tab + 1));
        } catch (const DataError& e) {
            line_error(path, lineno, e.what());
        }
    }
}

}  // namespace

KnowledgeBase load_kb_tsv(const std::filesystem::path& path) {
    KnowledgeBase kb;
    load_tsv(path, [&kb](const std::string& term, const std::string& def) { kb.insert(term, def); });
    return kb;
}

HypernymLexicon load_hypernym_tsv(const std::filesystem::path& path) {
    HypernymLexicon lex;
    load_tsv(path,
             [&lex](const std::string& term, const std::string& hyp) { lex.insert(term, hyp); });
    lex.check_acyclic();
    return lex;
}

std::optional<std::vector<std::string>> replace_span_all(
    const std::vector<std::string>& tokens, const std::vector<std::string>& span,
    const std::vector<std::string>& replacement) {
    if (span.empty() || span.size() > tokens.size()) return std::nullopt;
    std::vector<std::string> out;
    bool replaced = false;
    size_t i = 0;
    while (i < tokens.size()) {
        if (i + span.size() <= tokens.size() &&
            std::equal(span.begin(), span.end(), tokens.begin() + static_cast<long>(i))) {
            out.insert(out.end(), replacement.begin(), replacement.end());
            i += span.size();
            replaced = true;
        } else {
            out.push_back(tokens[i]);
            ++i;
        }
    }
    if (!replaced) return std::nullopt;
    return out;
}

std::vector<std::string> mask_topic_word(const std::vector<std::string>& utterance_tokens,
                                         const std::string& topic) {
    const std::vector<std::string> span = tokenize(topic);
    if (span.empty()) throw DataError("mask_topic_word: empty topic");
    auto masked = replace_span_all(utterance_tokens, span, {special_tokens()[tok::kMask]});
    if (!masked) {
        throw DataError("mask_topic_word: topic '" + topic + "' not found in utterance");
    }
    return *masked;
}

std::optional<TrainingInstance> make_interpret_instance(const DialogueExample& example,
                                                        const KnowledgeBase& kb,
                                                        const Vocab& vocab,
                                                        const BuilderOptions& opts,
                                                        SkipReport& report) {
    const auto definition = kb.lookup(example.topic);
    if (!definition) {
        report.skip("interpret: no definition for topic '" + example.topic + "'");
        return std::nullopt;
    }
    std::vector<std::string> masked;
    try {
        masked = mask_topic_word(tokenize(example.last_utterance()), example.topic);
    } catch (const DataError&) {
        report.skip("interpret: topic '" + example.topic + "' absent from last utterance");
        return std::nullopt;
    }
    std::vector<std::string> def_tokens = tokenize(*definition);
    if (static_cast<int>(def_tokens.size()) > opts.max_definition_tokens) {
        def_tokens.resize(static_cast<size_t>(opts.max_definition_tokens));
        ++report.truncations;
    }

    TrainingInstance inst;
    inst.task = Task::kInterpret;
    inst.source_ids = vocab.encode(masked);
    inst.target_ids.push_back(tok::kDefi);
    for (int id : vocab.encode(def_tokens)) inst.target_ids.push_back(id);
    inst.target_ids.push_back(tok::kEnd);
    ++report.emitted;
    return inst;
}

std::optional<TrainingInstance> make_hypernym_instance(const DialogueExample& example,
                                                       const HypernymLexicon& lexicon,
                                                       const Vocab& vocab,
                                                       const BuilderOptions& opts,
                                                       SkipReport& report) {
    (void)opts;
    const auto hypernym = lexicon.lookup(example.topic);
    if (!hypernym) {
        report.skip("hypernym: no hypernym for topic '" + example.topic + "'");
        return std::nullopt;
    }
    const std::vector<std::string> utt = tokenize(example.last_utterance());
    const auto rewritten = replace_span_all(utt, tokenize(example.topic), tokenize(*hypernym));
    if (!rewritten) {
        report.skip("hypernym: topic '" + example.topic + "' absent from last utterance");
        return std::nullopt;
    }

    TrainingInstance inst;
    inst.task = Task::kHypernym;
    inst.source_ids = vocab.encode(utt);
    inst.target_ids.push_back(tok::kHype);
    for (int id : vocab.encode(*rewritten)) inst.target_ids.push_back(id);
    inst.target_ids.push_back(tok::kEnd);
    ++report.emitted;
    return inst;
}

TrainingInstance make_dialogue_instance(const DialogueExample& example, bool with_knowledge,
                                        const Vocab& vocab, const BuilderOptions& opts,
                                        SkipReport& report) {
    if (example.context.empty()) throw DataError("dialogue instance: empty context");
    if (example.response.empty()) throw DataError("dialogue instance: empty response");

    TrainingInstance inst;
    const bool use_knowledge = with_knowledge && example.has_knowledge();
    if (with_knowledge && !example.has_knowledge()) ++report.fallbacks;
    inst.task = use_knowledge ? Task::kDialKnow : Task::kDialogue;

    std::vector<int>& src = inst.source_ids;
    for (size_t i = 0; i < example.context.size(); ++i) {
        if (i) src.push_back(tok::kSep);
        for (int id : vocab.encode_text(example.context[i])) src.push_back(id);
    }
    if (use_knowledge) {
        for (const auto& sentence : example.knowledge) {
            src.push_back(tok::kSep);
            for (int id : vocab.encode_text(sentence)) src.push_back(id);
        }
    }
    // Oldest tokens go first, so plain left truncation keeps the newest.
    if (static_cast<int>(src.size()) > opts.max_positions) {
        src.erase(src.begin(), src.end() - opts.max_positions);
    }

    inst.target_ids.push_back(tok::kStart);
    for (int id : vocab.encode_text(example.response)) inst.target_ids.push_back(id);
    inst.target_ids.push_back(tok::kEnd);
    ++report.emitted;
    return inst;
}

void validate_instance(const TrainingInstance& instance, int max_positions) {
    int expected_start = tok::kStart;
    switch (instance.task) {
        case Task::kDialogue:
        case Task::kDialKnow: expected_start = tok::kStart; break;
        case Task::kInterpret: expected_start = tok::kDefi; break;
        case Task::kHypernym: expected_start = tok::kHype; break;
    }
    if (instance.source_ids.empty()) {
        throw DataError("instance: empty source");
    }
    if (static_cast<int>(instance.source_ids.size()) > max_positions) {
        throw DataError("instance: source exceeds max positions");
    }
    if (instance.target_ids.size() < 2 || instance.target_ids.front() != expected_start) {
        throw DataError(std::string("instance: ") + task_name(instance.task) +
                        " target must begin with its start token");
    }
    int end_count = 0;
    for (int id : instance.target_ids) {
        if (id == tok::kEnd) ++end_count;
    }
    if (end_count != 1 || instance.target_ids.back() != tok::kEnd) {
        throw DataError("instance: target must contain exactly one [END], at the end");
    }
}

void save_instances_jsonl(const std::vector<TrainingInstance>& instances,
                          const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write " + path.string());
    for (const auto& inst : instances) {
        json j;
        j["task"] = task_name(inst.task);
        j["source_ids"] = inst.source_ids;
        j["target_ids"] = inst.target_ids;
        out << j.dump() << '\n';
    }
}

std::vector<TrainingInstance> load_instances_jsonl(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot read " + path.string());
    std::vector<TrainingInstance> out;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        try {
            json j = json::parse(line);
            TrainingInstance inst;
            inst.task = task_from_name(j.at("task").get<std::string>());
            inst.source_ids = j.at("source_ids").get<std::vector<int>>();
            inst.target_ids = j.at("target_ids").get<std::vector<int>>();
            out.push_back(std::move(inst));
        } catch (const json::exception& e) {
            line_error(path, lineno, std::string("invalid instance: ") + e.what());
        }
    }
    return out;
}

}  // namespace kedial

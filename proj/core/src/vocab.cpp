#include "kedial/vocab.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <map>

namespace kedial {

const std::array<std::string, tok::kNumSpecials>& special_tokens() {
    static const std::array<std::string, tok::kNumSpecials> specials = {
        "[PAD]", "[UNK]", "[START]", "[END]", "[SEP]", "[MASK]", "[DEFI]", "[HYPE]"};
    return specials;
}

namespace {

bool is_word_char(unsigned char c) {
    return std::isalnum(c) != 0 || c >= 0x80;
}

// Returns the length of the special token starting at text[i], or 0.
size_t match_special(const std::string& text, size_t i) {
    for (const auto& s : special_tokens()) {
        if (text.compare(i, s.size(), s) == 0) return s.size();
    }
    return 0;
}

}  // namespace

std::vector<std::string> tokenize(const std::string& text) {
    std::vector<std::string> out;
    std::string word;
    auto flush = [&] {
        if (!word.empty()) {
            out.push_back(word);
            word.clear();
        }
    };
    size_t i = 0;
    while (i < text.size()) {
        const unsigned char c = static_cast<unsigned char>(text[i]);
        if (c == '[') {
            if (const size_t len = match_special(text, i); len > 0) {
                flush();
                out.push_back(text.substr(i, len));
                i += len;
                continue;
            }
        }
        if (std::isspace(c)) {
            flush();
        } else if (is_word_char(c)) {
            word.push_back(static_cast<char>(std::tolower(c)));
        } else {
            flush();
            out.push_back(std::string(1, static_cast<char>(c)));
        }
        ++i;
    }
    flush();
    return out;
}

std::string detokenize(const std::vector<std::string>& tokens) {
    std::string out;
    for (size_t i = 0; i < tokens.size(); ++i) {
        if (i) out.push_back(' ');
        out += tokens[i];
    }
    return out;
}

Vocab::Vocab() {
    id_to_token_.assign(special_tokens().begin(), special_tokens().end());
    index_tokens();
}

Vocab Vocab::build(const std::vector<std::string>& texts, int min_freq) {
    std::unordered_map<std::string, int64_t> counts;
    for (const auto& text : texts) {
        for (auto& token : tokenize(text)) ++counts[token];
    }
    for (const auto& s : special_tokens()) counts.erase(s);

    std::vector<std::pair<std::string, int64_t>> ranked(counts.begin(), counts.end());
    std::sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
        if (a.second != b.second) return a.second > b.second;
        return a.first < b.first;
    });

    Vocab v;
    for (auto& [token, count] : ranked) {
        if (count < min_freq) continue;
        v.id_to_token_.push_back(token);
    }
    v.index_tokens();
    return v;
}

Vocab Vocab::from_tokens(std::vector<std::string> tokens) {
    Vocab v;
    v.id_to_token_ = std::move(tokens);
    const auto& specials = special_tokens();
    if (v.id_to_token_.size() < specials.size() ||
        !std::equal(specials.begin(), specials.end(), v.id_to_token_.begin())) {
        throw DataError("vocab: reserved specials missing or out of place at ids 0-7");
    }
    v.index_tokens();
    return v;
}

void Vocab::index_tokens() {
    token_to_id_.clear();
    token_to_id_.reserve(id_to_token_.size());
    for (size_t i = 0; i < id_to_token_.size(); ++i) {
        auto [it, inserted] = token_to_id_.emplace(id_to_token_[i], static_cast<int>(i));
        if (!inserted) {
            throw DataError("vocab: duplicate token '" + id_to_token_[i] + "'");
        }
    }
}

int Vocab::id_of(const std::string& token) const {
    auto it = token_to_id_.find(token);
    return it == token_to_id_.end() ? tok::kUnk : it->second;
}

bool Vocab::contains(const std::string& token) const {
    return token_to_id_.count(token) != 0;
}

const std::string& Vocab::token_of(int id) const {
    if (id < 0 || id >= size()) {
        throw DataError("vocab: id " + std::to_string(id) + " out of range");
    }
    return id_to_token_[static_cast<size_t>(id)];
}

std::vector<int> Vocab::encode(const std::vector<std::string>& tokens) const {
    std::vector<int> ids;
    ids.reserve(tokens.size());
    for (const auto& t : tokens) ids.push_back(id_of(t));
    return ids;
}

std::vector<int> Vocab::encode_text(const std::string& text) const {
    return encode(tokenize(text));
}

std::vector<std::string> Vocab::decode(const std::vector<int>& ids) const {
    std::vector<std::string> tokens;
    tokens.reserve(ids.size());
    for (int id : ids) tokens.push_back(token_of(id));
    return tokens;
}

std::string Vocab::decode_text(const std::vector<int>& ids) const {
    std::vector<std::string> kept;
    kept.reserve(ids.size());
    for (int id : ids) {
        if (id < tok::kNumSpecials) continue;
        kept.push_back(token_of(id));
    }
    return detokenize(kept);
}

void Vocab::save(const std::filesystem::path& path) const {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("vocab: cannot write " + path.string());
    for (const auto& t : id_to_token_) out << t << '\n';
}

Vocab Vocab::load(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("vocab: cannot read " + path.string());
    std::vector<std::string> tokens;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        tokens.push_back(line);
    }
    return from_tokens(std::move(tokens));
}

uint64_t Vocab::fingerprint() const {
    uint64_t h = 1469598103934665603ull;
    auto mix = [&h](unsigned char c) {
        h ^= c;
        h *= 1099511628211ull;
    };
    for (const auto& t : id_to_token_) {
        for (char c : t) mix(static_cast<unsigned char>(c));
        mix('\n');
    }
    return h;
}

}  // namespace kedial

#pragma once

#include <array>
#include <filesystem>
#include <string>
#include <unordered_map>
#include <vector>

#include "kedial/tensor.hpp"

namespace kedial {

// Reserved special tokens sit at fixed ids in every vocabulary.
namespace tok {
constexpr int kPad = 0;
constexpr int kUnk = 1;
constexpr int kStart = 2;
constexpr int kEnd = 3;
constexpr int kSep = 4;
constexpr int kMask = 5;
constexpr int kDefi = 6;
constexpr int kHype = 7;
constexpr int kNumSpecials = 8;
}  // namespace tok

const std::array<std::string, tok::kNumSpecials>& special_tokens();

// Word-level tokenizer: lowercases, splits punctuation into single-character
// tokens, and passes the bracketed specials above through whole. Bytes >=
// 0x80 are kept inside words so UTF-8 text survives. Empty text gives an
// empty sequence.
std::vector<std::string> tokenize(const std::string& text);

// Space-joins tokens. tokenize(detokenize(tokenize(x))) == tokenize(x).
std::string detokenize(const std::vector<std::string>& tokens);

class Vocab {
public:
    // Specials only; mostly useful for tests.
    Vocab();

    // Frequency-descending, then lexicographic; tokens seen fewer than
    // min_freq times are left out and later map to [UNK].
    static Vocab build(const std::vector<std::string>& texts, int min_freq = 1);

    int size() const { return static_cast<int>(id_to_token_.size()); }
    int id_of(const std::string& token) const;  // [UNK] id when absent
    bool contains(const std::string& token) const;
    const std::string& token_of(int id) const;

    std::vector<int> encode(const std::vector<std::string>& tokens) const;
    std::vector<int> encode_text(const std::string& text) const;
    std::vector<std::string> decode(const std::vector<int>& ids) const;
    // Decoded text with specials dropped, space-joined.
    std::string decode_text(const std::vector<int>& ids) const;

    // One token per line, line number == id.
    void save(const std::filesystem::path& path) const;
    static Vocab load(const std::filesystem::path& path);

    static Vocab from_tokens(std::vector<std::string> tokens);

    const std::vector<std::string>& tokens() const { return id_to_token_; }

    // FNV-1a over the token list; stored in checkpoints to catch mismatches.
    uint64_t fingerprint() const;

private:
    void index_tokens();

    std::vector<std::string> id_to_token_;
    std::unordered_map<std::string, int> token_to_id_;
};

}  // namespace kedial

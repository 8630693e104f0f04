#include "kedial/synthetic.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <unordered_set>

namespace kedial {

namespace {

struct CategorySpec {
    const char* hypernym;
    std::array<const char*, 6> props;
    const char* definition;  // <e>, <prop> slots
    std::array<const char*, 8> contexts;
    std::array<const char*, 8> responses;
};

// Response templates lean on the literal category word and the entity's
// property so that gold responses stay predictable from the context pattern
// rather than from entity identity alone.
constexpr std::array<CategorySpec, 8> kCategories = {{
    {"sport",
     {"ball", "net", "racket", "team", "ice", "track"},
     "<e> is a sport played with a <prop> .",
     {"do you like playing <e> ?", "i watched a <e> match yesterday .",
      "my brother practices <e> every weekend .", "have you ever tried <e> before ?",
      "everyone in my town plays <e> .", "i am learning <e> at the club .",
      "the <e> season starts next month .", "we talked about <e> after practice ."},
     {"yes , it is my favorite sport to play .", "that sport is fun to watch on weekends .",
      "i have heard it is a sport played with a <prop> .",
      "playing a sport with a <prop> keeps you fit .",
      "i am not very good at sports but i enjoy them .",
      "<e> is a great sport for the whole family .",
      "a good <prop> makes that sport much easier .",
      "maybe we can play <e> together sometime ."}},
    {"fruit",
     {"sweet", "sour", "juicy", "ripe", "tart", "fresh"},
     "<e> is a fruit that tastes <prop> .",
     {"i bought some <e> at the market .", "would you like a slice of <e> ?",
      "my garden is full of <e> this year .", "have you ever tasted <e> ?",
      "grandma makes jam from <e> .", "the price of <e> went up again .",
      "i packed some <e> for lunch .", "this pie is made with fresh <e> ."},
     {"that fruit is delicious when it is ripe .",
      "i love fruit , especially when it tastes <prop> .",
      "a <prop> fruit is perfect for breakfast .", "i should buy more fruit this week .",
      "fruit from the market is always fresh .", "<e> juice is my favorite drink in summer .",
      "jam made from <prop> fruit tastes wonderful .", "maybe i will try <e> tomorrow ."}},
    {"color",
     {"bright", "dark", "warm", "soft", "deep", "pale"},
     "<e> is a color that looks <prop> .",
     {"i painted my room <e> last week .", "do you like the color <e> ?",
      "her dress was completely <e> .", "the walls are <e> in the new office .",
      "i chose <e> for the curtains .", "the sky turned <e> at sunset .",
      "his car is a shiny <e> .", "we picked <e> for the team shirts ."},
     {"that color looks <prop> on walls .", "it is a very <prop> color indeed .",
      "colors like that make a room feel calm .", "i prefer a more <prop> color myself .",
      "that color matches almost everything .", "<e> is a lovely color for a dress .",
      "a <prop> color suits the season well .", "painting with that color was a good idea ."}},
    {"animal",
     {"forest", "river", "desert", "mountain", "farm", "meadow"},
     "<e> is an animal that lives in the <prop> .",
     {"we saw a <e> at the zoo today .", "my neighbor keeps a <e> as a pet .",
      "a wild <e> crossed the road .", "the children drew a <e> at school .",
      "i read a book about the <e> .", "there is a <e> living near the lake .",
      "the farmer raises <e> behind the barn .", "a <e> appeared in our garden ."},
     {"that animal usually lives in the <prop> .", "what a beautiful animal to see up close .",
      "animals from the <prop> are fascinating .",
      "i would love to watch that animal in the wild .",
      "keeping such an animal takes patience .", "the <e> is a gentle animal most of the time .",
      "every animal needs space and good food .", "seeing a <e> so close must be exciting ."}},
    {"instrument",
     {"strings", "keys", "brass", "wood", "drums", "reeds"},
     "<e> is an instrument with <prop> .",
     {"she practices the <e> every evening .", "can you play the <e> ?",
      "the band needs a <e> player .", "i heard a <e> solo on the radio .",
      "his new <e> sounds wonderful .", "lessons for the <e> start on monday .",
      "the shop sells a used <e> .", "a street musician played the <e> ."},
     {"that instrument with <prop> sounds beautiful .",
      "learning an instrument takes daily practice .",
      "an instrument with <prop> is hard to master .",
      "i always wanted to play an instrument like that .",
      "the <e> fits well in a small band .", "music from that instrument fills the room .",
      "a good teacher makes the instrument easier .", "maybe i will rent a <e> and try ."}},
    {"drink",
     {"hot", "cold", "fizzy", "herbal", "creamy", "spiced"},
     "<e> is a drink served <prop> .",
     {"i ordered a <e> at the cafe .", "would you like a cup of <e> ?",
      "they serve <e> at the corner shop .", "this recipe for <e> is very old .",
      "we shared a pot of <e> .", "the menu lists a new <e> .",
      "my aunt brews <e> every morning .", "a cold glass of <e> sounds nice ."},
     {"that drink is best served <prop> .", "a <prop> drink is perfect for this weather .",
      "i drink too much of it , honestly .", "the cafe makes the best drinks in town .",
      "<e> with breakfast is a fine habit .", "a warm drink helps me relax at night .",
      "drinks like that taste better with friends .", "i will order a <e> next time ."}},
    {"game",
     {"cards", "dice", "board", "tiles", "tokens", "puzzles"},
     "<e> is a game played with <prop> .",
     {"we played <e> all night long .", "do you know the rules of <e> ?",
      "my family loves a round of <e> .", "the club hosts a <e> tournament .",
      "i taught my sister to play <e> .", "a new version of <e> came out .",
      "they sell <e> at the toy store .", "we need four players for <e> ."},
     {"that game with <prop> is so much fun .", "games with <prop> get competitive quickly .",
      "i always lose , but i love that game .", "a long game night is the best weekend plan .",
      "<e> is a game the whole family enjoys .", "learning the rules took me one evening .",
      "games like that sharpen the mind .", "count me in for the next round of <e> ."}},
    {"dance",
     {"drums", "fiddle", "waltz", "folk", "swing", "steps"},
     "<e> is a dance with <prop> music .",
     {"they performed the <e> at the festival .", "can you teach me the <e> ?",
      "the couple danced a perfect <e> .", "lessons in <e> start this spring .",
      "the hall was full for the <e> night .", "grandpa still remembers the <e> .",
      "a film showed dancers doing the <e> .", "the school club practices <e> on fridays ."},
     {"that dance with <prop> music is lively .", "dancing to <prop> music lifts the mood .",
      "i have two left feet , sadly .", "the festival dances are always beautiful .",
      "<e> is a dance everyone should try once .", "a dance night with friends sounds great .",
      "learning the steps takes a few weeks .", "they say the <e> began long ago ."}},
}};

constexpr std::array<const char*, 6> kOpeners = {
    "hello there !",           "hi , how are you today ?", "good evening , friend .",
    "hey , long time no see .", "nice to meet you here .",  "hello , what a lovely day ."};

std::string replace_all(std::string text, const std::string& slot, const std::string& value) {
    size_t pos = 0;
    while ((pos = text.find(slot, pos)) != std::string::npos) {
        text.replace(pos, slot.size(), value);
        pos += value.size();
    }
    return text;
}

// Pseudo-word entity names: 2-3 consonant+vowel(+coda) syllables, all
// lowercase alpha, so each entity is a single token.
std::string make_entity_name(Rng& rng) {
    static const std::array<const char*, 20> onsets = {"b",  "d",  "f",  "g",  "k",  "l",  "m",
                                                       "n",  "p",  "r",  "s",  "t",  "v",  "z",
                                                       "br", "cl", "dr", "gr", "pl", "tr"};
    static const std::array<const char*, 5> vowels = {"a", "e", "i", "o", "u"};
    static const std::array<const char*, 6> codas = {"", "n", "r", "l", "s", "t"};
    std::uniform_int_distribution<size_t> onset_d(0, onsets.size() - 1);
    std::uniform_int_distribution<size_t> vowel_d(0, vowels.size() - 1);
    std::uniform_int_distribution<size_t> coda_d(0, codas.size() - 1);
    std::uniform_int_distribution<int> count_d(2, 3);
    const int syllables = count_d(rng);
    std::string name;
    for (int s = 0; s < syllables; ++s) {
        name += onsets[onset_d(rng)];
        name += vowels[vowel_d(rng)];
    }
    name += codas[coda_d(rng)];
    return name;
}

struct EntityInfo {
    std::string name;
    size_t category;
    size_t prop;
};

DialogueExample make_example(const EntityInfo& entity, const SynthConfig& cfg, Rng& rng) {
    const CategorySpec& cat = kCategories[entity.category];
    std::uniform_int_distribution<int> ctx_d(0, cfg.n_templates - 1);
    std::uniform_real_distribution<double> unit(0.0, 1.0);

    const int ctx_idx = ctx_d(rng);
    int resp_idx = ctx_idx % static_cast<int>(cat.responses.size());
    if (unit(rng) < cfg.response_jitter) {
        std::uniform_int_distribution<int> resp_d(0, static_cast<int>(cat.responses.size()) - 1);
        resp_idx = resp_d(rng);
    }
    const bool opener = unit(rng) < cfg.opener_prob;
    std::uniform_int_distribution<size_t> opener_d(0, kOpeners.size() - 1);
    const size_t opener_idx = opener_d(rng);  // drawn either way to keep the stream aligned

    auto instantiate = [&](const char* tmpl) {
        std::string s = replace_all(tmpl, "<e>", entity.name);
        s = replace_all(std::move(s), "<prop>", cat.props[entity.prop]);
        return s;
    };

    DialogueExample ex;
    if (opener) ex.context.push_back(kOpeners[opener_idx]);
    ex.context.push_back(instantiate(cat.contexts[static_cast<size_t>(ctx_idx)]));
    ex.response = instantiate(cat.responses[static_cast<size_t>(resp_idx)]);
    ex.knowledge.push_back(instantiate(cat.definition));
    ex.topic = entity.name;
    return ex;
}

}  // namespace

SyntheticCorpus generate_synthetic_corpus(const SynthConfig& cfg) {
    if (cfg.unseen_fraction <= 0.0 || cfg.unseen_fraction >= 1.0) {
        throw DataError("synthetic corpus: unseen_fraction must be in (0, 1)");
    }
    if (cfg.n_entities < 4) throw DataError("synthetic corpus: need at least 4 entities");
    if (cfg.n_templates < 1 || cfg.n_templates > 8) {
        throw DataError("synthetic corpus: n_templates must be in [1, 8]");
    }
    if (cfg.n_train < 1 || cfg.n_test < 1) {
        throw DataError("synthetic corpus: n_train and n_test must be positive");
    }
    const int n_unseen = static_cast<int>(std::llround(cfg.n_entities * cfg.unseen_fraction));
    const int n_seen = cfg.n_entities - n_unseen;
    if (n_unseen < 1 || n_seen < 1) {
        throw DataError("synthetic corpus: split leaves an empty entity set");
    }

    Rng rng(cfg.seed);

    // Build the reserved-word set once so entity names never collide with
    // template vocabulary (or each other).
    std::unordered_set<std::string> reserved;
    for (const auto& cat : kCategories) {
        auto absorb = [&reserved](const std::string& text) {
            for (auto& t : tokenize(text)) reserved.insert(t);
        };
        absorb(cat.hypernym);
        absorb(cat.definition);
        for (const char* p : cat.props) absorb(p);
        for (const char* c : cat.contexts) absorb(c);
        for (const char* r : cat.responses) absorb(r);
    }
    for (const char* o : kOpeners) {
        for (auto& t : tokenize(o)) reserved.insert(t);
    }

    std::vector<EntityInfo> entities;
    entities.reserve(static_cast<size_t>(cfg.n_entities));
    std::uniform_int_distribution<size_t> prop_d(0, kCategories[0].props.size() - 1);
    for (int i = 0; i < cfg.n_entities; ++i) {
        std::string name;
        do {
            name = make_entity_name(rng);
        } while (reserved.count(name));
        reserved.insert(name);
        entities.push_back({name, 0, prop_d(rng)});
    }

    SyntheticCorpus corpus;
    std::vector<EntityInfo> seen(entities.begin(), entities.end() - n_unseen);
    std::vector<EntityInfo> unseen(entities.end() - n_unseen, entities.end());
    // Round-robin categories within each split keeps every category populated
    // on both sides whenever counts allow.
    for (size_t i = 0; i < seen.size(); ++i) seen[i].category = i % kCategories.size();
    for (size_t i = 0; i < unseen.size(); ++i) unseen[i].category = i % kCategories.size();

    for (const auto& e : seen) corpus.seen_entities.push_back(e.name);
    for (const auto& e : unseen) corpus.unseen_entities.push_back(e.name);

    auto add_kb = [&corpus](const EntityInfo& e) {
        const CategorySpec& cat = kCategories[e.category];
        std::string def = replace_all(cat.definition, "<e>", e.name);
        def = replace_all(std::move(def), "<prop>", cat.props[e.prop]);
        corpus.kb.emplace_back(e.name, def);
        corpus.lexicon.emplace_back(e.name, cat.hypernym);
    };
    for (const auto& e : seen) add_kb(e);
    for (const auto& e : unseen) add_kb(e);

    std::uniform_int_distribution<size_t> seen_d(0, seen.size() - 1);
    std::uniform_int_distribution<size_t> unseen_d(0, unseen.size() - 1);
    for (int i = 0; i < cfg.n_train; ++i) {
        corpus.train.push_back(make_example(seen[seen_d(rng)], cfg, rng));
    }
    for (int i = 0; i < cfg.n_test; ++i) {
        corpus.test_seen.push_back(make_example(seen[seen_d(rng)], cfg, rng));
    }
    for (int i = 0; i < cfg.n_test; ++i) {
        corpus.test_unseen.push_back(make_example(unseen[unseen_d(rng)], cfg, rng));
    }
    return corpus;
}

void write_corpus_dir(const SyntheticCorpus& corpus, const std::filesystem::path& dir) {
    std::filesystem::create_directories(dir);
    save_dialogue_jsonl(corpus.train, dir / "train.jsonl");
    save_dialogue_jsonl(corpus.test_seen, dir / "test_seen.jsonl");
    save_dialogue_jsonl(corpus.test_unseen, dir / "test_unseen.jsonl");

    auto write_tsv = [](const std::vector<std::pair<std::string, std::string>>& rows,
                        const std::filesystem::path& path) {
        std::ofstream out(path, std::ios::binary);
        if (!out) throw DataError("cannot write " + path.string());
        for (const auto& [k, v] : rows) out << k << '\t' << v << '\n';
    };
    write_tsv(corpus.kb, dir / "kb.tsv");
    write_tsv(corpus.lexicon, dir / "hypernyms.tsv");
}

std::vector<std::string> corpus_texts(const SyntheticCorpus& corpus) {
    std::vector<std::string> texts;
    auto absorb = [&texts](const std::vector<DialogueExample>& examples) {
        for (const auto& ex : examples) {
            for (const auto& u : ex.context) texts.push_back(u);
            for (const auto& k : ex.knowledge) texts.push_back(k);
            texts.push_back(ex.response);
            texts.push_back(ex.topic);
        }
    };
    absorb(corpus.train);
    absorb(corpus.test_seen);
    absorb(corpus.test_unseen);
    for (const auto& [term, def] : corpus.kb) {
        texts.push_back(term);
        texts.push_back(def);
    }
    for (const auto& [term, hyp] : corpus.lexicon) {
        texts.push_back(term);
        texts.push_back(hyp);
    }
    return texts;
}

}  // namespace kedial

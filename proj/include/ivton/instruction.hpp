#pragma once

// Deterministic parsing of constrained free-text style instructions.
//
// The grammar is a closed, longest-match phrase lexicon over lowercased,
// punctuation-split tokens; clauses split on commas and "and". Anything the
// lexicon does not cover lands in `residual` (the parse never fails) and is
// the VLM backend's problem.

#include <algorithm>
#include <cctype>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "ivton/errors.hpp"
#include "ivton/garment.hpp"

namespace ivton {

// ---------------------------------------------------------------------------
// Phrase lexicon
// ---------------------------------------------------------------------------

/// Canonical phrase ids; each maps to exactly one StyleInstruction mutation.
namespace phrase {
inline const char* sleeves_rolled_up = "sleeves_rolled_up";
inline const char* sleeves_rolled_down = "sleeves_rolled_down";
inline const char* tucked = "tucked";
inline const char* untucked = "untucked";
inline const char* closure_open = "closure_open";
inline const char* closure_closed = "closure_closed";
} // namespace phrase

struct LexiconEntry {
    std::vector<std::string> tokens; // surface form, already lowercased
    std::string phrase_id;
};

struct Lexicon {
    std::vector<LexiconEntry> entries;

    static Lexicon builtin() {
        Lexicon l;
        auto add = [&l](std::initializer_list<const char*> toks, const char* id) {
            LexiconEntry e;
            for (const char* t : toks) e.tokens.emplace_back(t);
            e.phrase_id = id;
            l.entries.push_back(std::move(e));
        };
        add({"sleeves", "rolled", "up"}, phrase::sleeves_rolled_up);
        add({"sleeves", "rolled", "down"}, phrase::sleeves_rolled_down);
        add({"sleeves", "down"}, phrase::sleeves_rolled_down);
        add({"tucked", "in"}, phrase::tucked);
        add({"untucked"}, phrase::untucked);
        add({"buttons", "open"}, phrase::closure_open);
        add({"open"}, phrase::closure_open);
        add({"unzipped"}, phrase::closure_open);
        add({"buttoned"}, phrase::closure_closed);
        add({"zipped"}, phrase::closure_closed);
        add({"closed"}, phrase::closure_closed);
        return l;
    }
};

inline void to_json(nlohmann::json& j, const Lexicon& l) {
    j = nlohmann::json::array();
    for (const auto& e : l.entries)
        j.push_back(nlohmann::json{{"tokens", e.tokens}, {"phrase", e.phrase_id}});
}

inline void from_json(const nlohmann::json& j, Lexicon& l) {
    l.entries.clear();
    for (const auto& e : j) {
        LexiconEntry entry;
        entry.tokens = e.at("tokens").get<std::vector<std::string>>();
        entry.phrase_id = e.at("phrase").get<std::string>();
        l.entries.push_back(std::move(entry));
    }
}

/// Applies a canonical phrase to a style instruction. Every phrase id mutates
/// exactly one field.
inline void apply_phrase(const std::string& phrase_id, StyleInstruction& s) {
    if (phrase_id == phrase::sleeves_rolled_up) {
        s.sleeves = SleeveStyle::rolled_up;
    } else if (phrase_id == phrase::sleeves_rolled_down) {
        s.sleeves = SleeveStyle::rolled_down;
    } else if (phrase_id == phrase::tucked) {
        s.tuck = TuckStyle::tucked;
    } else if (phrase_id == phrase::untucked) {
        s.tuck = TuckStyle::untucked;
    } else if (phrase_id == phrase::closure_open) {
        s.closure_state = ClosureStyle::open;
    } else if (phrase_id == phrase::closure_closed) {
        s.closure_state = ClosureStyle::closed;
    } else {
        throw ContractError("unknown phrase id '" + phrase_id + "'");
    }
}

// ---------------------------------------------------------------------------
// Parsing
// ---------------------------------------------------------------------------

struct InstructionClause {
    std::optional<std::string> garment_binding; // leading garment noun, if any
    std::string style_phrase;                   // canonical phrase id
};

struct ParsedInstruction {
    std::vector<InstructionClause> clauses;
    std::string residual; // unparsed text; nonempty marks the parse partial

    bool partial() const { return !residual.empty(); }
};

namespace detail {

inline std::vector<std::string> tokenize_lower(const std::string& text) {
    std::vector<std::string> tokens;
    std::string cur;
    for (char c : text) {
        if (std::isalnum(static_cast<unsigned char>(c))) {
            cur += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
        } else if (!cur.empty()) {
            tokens.push_back(cur);
            cur.clear();
        }
    }
    if (!cur.empty()) tokens.push_back(cur);
    return tokens;
}

inline bool is_stopword(const std::string& t) {
    static const std::vector<std::string> stop{"a",   "an",  "in",     "it",  "my",
                                               "on",  "put", "please", "the", "their",
                                               "try", "wear", "wearing", "with"};
    return std::find(stop.begin(), stop.end(), t) != stop.end();
}

} // namespace detail

/// Tokenizes, splits clauses on commas/"and", and longest-matches each clause
/// against the lexicon. The first leftover non-stopword token of a clause
/// with at least one match becomes its garment binding; everything else
/// unmatched accumulates in `residual`. Never fails.
inline ParsedInstruction parse_instruction(const std::string& text,
                                           const Lexicon& lexicon = Lexicon::builtin()) {
    // Clause boundaries: punctuation other than token characters plus "and".
    std::vector<std::vector<std::string>> clause_tokens;
    {
        std::string piece;
        std::vector<std::string> pieces;
        for (char c : text) {
            if (c == ',' || c == ';' || c == '.') {
                pieces.push_back(piece);
                piece.clear();
            } else {
                piece += c;
            }
        }
        pieces.push_back(piece);
        for (const std::string& p : pieces) {
            std::vector<std::string> toks = detail::tokenize_lower(p);
            std::vector<std::string> cur;
            for (const std::string& t : toks) {
                if (t == "and") {
                    if (!cur.empty()) clause_tokens.push_back(cur);
                    cur.clear();
                } else {
                    cur.push_back(t);
                }
            }
            if (!cur.empty()) clause_tokens.push_back(cur);
        }
    }

    // Longest surface forms first so "buttons open" beats "open".
    std::vector<const LexiconEntry*> by_length;
    for (const auto& e : lexicon.entries) by_length.push_back(&e);
    std::stable_sort(by_length.begin(), by_length.end(),
                     [](const LexiconEntry* a, const LexiconEntry* b) {
                         return a->tokens.size() > b->tokens.size();
                     });

    ParsedInstruction out;
    auto append_residual = [&out](const std::string& t) {
        if (!out.residual.empty()) out.residual += ' ';
        out.residual += t;
    };

    for (const auto& tokens : clause_tokens) {
        std::vector<std::string> phrases;
        std::vector<std::string> leftover;
        std::size_t i = 0;
        while (i < tokens.size()) {
            const LexiconEntry* hit = nullptr;
            for (const LexiconEntry* e : by_length) {
                if (i + e->tokens.size() > tokens.size()) continue;
                if (std::equal(e->tokens.begin(), e->tokens.end(), tokens.begin() + i)) {
                    hit = e;
                    break;
                }
            }
            if (hit) {
                phrases.push_back(hit->phrase_id);
                i += hit->tokens.size();
            } else {
                leftover.push_back(tokens[i]);
                ++i;
            }
        }
        std::vector<std::string> rest;
        for (const std::string& t : leftover)
            if (!detail::is_stopword(t)) rest.push_back(t);

        if (phrases.empty()) {
            for (const std::string& t : rest) append_residual(t);
            continue;
        }
        std::optional<std::string> binding;
        for (std::size_t k = 0; k < rest.size(); ++k) {
            if (k == 0)
                binding = rest[k];
            else
                append_residual(rest[k]);
        }
        for (const std::string& p : phrases)
            out.clauses.push_back(InstructionClause{binding, p});
    }
    return out;
}

// ---------------------------------------------------------------------------
// Binding resolution
// ---------------------------------------------------------------------------

/// Optional surface-noun -> canonical-noun table. Ships empty: synonyms are
/// data, never assumptions.
using SynonymTable = std::map<std::string, std::string>;

namespace detail {

inline bool phrase_admits(const std::string& phrase_id, const GarmentSpec& g) {
    if (phrase_id == phrase::sleeves_rolled_up || phrase_id == phrase::sleeves_rolled_down)
        return g.classification == Classification::upper ||
               g.classification == Classification::overall;
    if (phrase_id == phrase::tucked || phrase_id == phrase::untucked)
        return g.classification == Classification::upper;
    if (phrase_id == phrase::closure_open || phrase_id == phrase::closure_closed)
        return g.closure != Closure::none;
    return false;
}

} // namespace detail

/// Attaches clauses to garments: bound clauses by category noun, unbound
/// clauses to the unique garment whose classification admits the phrase.
/// Garments without a clause get the all-default instruction.
inline std::map<std::string, StyleInstruction>
resolve_bindings(const ParsedInstruction& parsed, const std::vector<GarmentSpec>& garments,
                 const SynonymTable& synonyms = {}) {
    std::map<std::string, StyleInstruction> out;
    for (const GarmentSpec& g : garments) out[g.id]; // default-init

    for (const InstructionClause& clause : parsed.clauses) {
        std::vector<const GarmentSpec*> candidates;
        if (clause.garment_binding) {
            std::string noun = *clause.garment_binding;
            auto syn = synonyms.find(noun);
            if (syn != synonyms.end()) noun = syn->second;
            for (const GarmentSpec& g : garments)
                if (g.category_noun == noun) candidates.push_back(&g);
            if (candidates.empty())
                throw ContractError("instruction noun '" + *clause.garment_binding +
                                    "' matches no garment");
        } else {
            for (const GarmentSpec& g : garments)
                if (detail::phrase_admits(clause.style_phrase, g)) candidates.push_back(&g);
            if (candidates.empty())
                throw ContractError("no garment admits unbound phrase '" + clause.style_phrase +
                                    "'");
        }
        if (candidates.size() > 1)
            throw ContractError("ambiguous binding for phrase '" + clause.style_phrase +
                                "': garments '" + candidates[0]->id + "' and '" +
                                candidates[1]->id +
                                "' both match; use explicit nouns or a VLM backend");
        apply_phrase(clause.style_phrase, out[candidates[0]->id]);
    }
    return out;
}

} // namespace ivton

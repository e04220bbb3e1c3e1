#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "qpc/errors.hpp"

namespace qpc {

inline constexpr int kTripletCount = 125;
inline constexpr int kAlphabetSize = 98;

// One channel offset drawn from the quinary set {-2,-1,0,+1,+2}.
class QuinaryDelta {
public:
    constexpr QuinaryDelta() : value_(0) {}
    explicit QuinaryDelta(int value);

    int value() const noexcept { return value_; }

    friend bool operator==(QuinaryDelta, QuinaryDelta) = default;

private:
    int8_t value_;
};

// Per-pixel (dR, dG, dB) carrier; 5^3 = 125 distinct triplets.
struct PerturbationTriplet {
    QuinaryDelta dr, dg, db;

    // Lexicographic rank in [0, 124]: (dr+2)*25 + (dg+2)*5 + (db+2).
    int lex_index() const noexcept {
        return (dr.value() + 2) * 25 + (dg.value() + 2) * 5 + (db.value() + 2);
    }
    static PerturbationTriplet from_lex_index(int index);

    friend bool operator==(const PerturbationTriplet&, const PerturbationTriplet&) = default;
};

enum class SymbolKind : uint8_t {
    printable,    // the 94 visible ASCII characters
    space,
    newline,
    para_break,   // paragraph separator, round-trips as "\n\n"
    terminator,   // end-of-message marker, never part of user text
};

class Symbol {
public:
    static Symbol printable(char c);
    static Symbol space() noexcept { return Symbol(SymbolKind::space, 0); }
    static Symbol newline() noexcept { return Symbol(SymbolKind::newline, 0); }
    static Symbol para_break() noexcept { return Symbol(SymbolKind::para_break, 0); }
    static Symbol terminator() noexcept { return Symbol(SymbolKind::terminator, 0); }

    SymbolKind kind() const noexcept { return kind_; }
    char character() const;  // printable symbols only

    // Position in the canonical alphabet order, in [0, 97].
    int index() const noexcept;
    static Symbol from_index(int index);

    friend bool operator==(Symbol, Symbol) = default;

private:
    Symbol(SymbolKind k, char c) : kind_(k), ch_(c) {}
    SymbolKind kind_;
    char ch_;
};

// True for the 94 characters Symbol::printable accepts ('!'..'~' plus
// everything else visible; excludes space and control characters).
bool is_printable_char(char c) noexcept;

class Codebook {
public:
    Codebook();

    PerturbationTriplet triplet_for(Symbol s) const noexcept;
    Symbol symbol_for(const PerturbationTriplet& t) const;  // throws on shelved triplets
    std::optional<Symbol> try_symbol_for(const PerturbationTriplet& t) const noexcept;

    // Alphabet position for a lex index, or -1 for the 27 shelved triplets.
    int symbol_index_for_lex(int lex_index) const noexcept;

private:
    std::array<PerturbationTriplet, kAlphabetSize> forward_;
    std::array<int8_t, kTripletCount> reverse_;
};

const Codebook& codebook();

// ---------------------------------------------------------------------------
// Text preparation
// ---------------------------------------------------------------------------

enum class NormalizeMode { strict, lossy };

struct NormalizationLog {
    struct Substitution {
        size_t position;      // codepoint index in the raw input
        char32_t original;
        std::string replacement;
    };
    struct Rejection {
        size_t position;
        char32_t codepoint;
    };
    std::vector<Substitution> substitutions;
    std::vector<Rejection> rejected;  // lossy mode only; replaced with '?'
};

struct NormalizedText {
    std::string text;
    NormalizationLog log;
};

// Canonicalizes UTF-8 input down to the embeddable character set: smart
// quotes/dashes/ellipses to their ASCII forms, NBSP and tab to space, CR and
// CRLF to LF. Unmappable codepoints throw in strict mode and become '?' in
// lossy mode. Idempotent on its own output.
NormalizedText normalize_text(std::string_view raw_utf8, NormalizeMode mode);

// Pre: normalized text. Greedy: "\n\n" -> ParaBreak, then "\n" -> Newline.
std::vector<Symbol> tokenize(std::string_view normalized);

// Exact inverse of tokenize. Pre: no Terminator in the sequence.
std::string detokenize(std::span<const Symbol> symbols);

// CSV dump, one row per alphabet entry: symbol,dr,dg,db,index.
std::string codebook_csv(const Codebook& cb);

// UTF-8 decoded to codepoints; each invalid byte yields its own value.
std::vector<char32_t> utf8_codepoints(std::string_view s);

} // namespace qpc

#include "qpc/codebook.hpp"

#include <stdexcept>

namespace qpc {

namespace {

// Canonical alphabet order. Positions 0-25 uppercase, 26-51 lowercase,
// 52-61 digits, 62-93 the specials below, then Space, Newline, ParaBreak,
// Terminator. A symbol's position doubles as the lexicographic rank of its
// perturbation triplet.
constexpr std::string_view kSpecials = R"(`~!@#$%^&*()_+-={}[]|\:';"<>?,./)";

static_assert(kSpecials.size() == 32);

const std::array<int8_t, 128>& printable_index_table() {
    static const auto table = [] {
        std::array<int8_t, 128> t{};
        t.fill(-1);
        int8_t idx = 0;
        for (char c = 'A'; c <= 'Z'; ++c) t[static_cast<size_t>(c)] = idx++;
        for (char c = 'a'; c <= 'z'; ++c) t[static_cast<size_t>(c)] = idx++;
        for (char c = '0'; c <= '9'; ++c) t[static_cast<size_t>(c)] = idx++;
        for (char c : kSpecials) t[static_cast<size_t>(c)] = idx++;
        return t;
    }();
    return table;
}

} // namespace

QuinaryDelta::QuinaryDelta(int value) : value_(static_cast<int8_t>(value)) {
    if (value < -2 || value > 2)
        throw std::invalid_argument("quinary delta outside {-2,-1,0,+1,+2}: " +
                                    std::to_string(value));
}

PerturbationTriplet PerturbationTriplet::from_lex_index(int index) {
    if (index < 0 || index >= kTripletCount)
        throw std::invalid_argument("triplet lex index outside [0,124]: " +
                                    std::to_string(index));
    return {QuinaryDelta(index / 25 - 2),
            QuinaryDelta(index / 5 % 5 - 2),
            QuinaryDelta(index % 5 - 2)};
}

Symbol Symbol::printable(char c) {
    if (!is_printable_char(c))
        throw std::invalid_argument("not a printable alphabet character: code " +
                                    std::to_string(static_cast<int>(static_cast<unsigned char>(c))));
    return Symbol(SymbolKind::printable, c);
}

char Symbol::character() const {
    if (kind_ != SymbolKind::printable)
        throw std::invalid_argument("symbol has no character representation");
    return ch_;
}

int Symbol::index() const noexcept {
    switch (kind_) {
    case SymbolKind::printable:  return printable_index_table()[static_cast<size_t>(ch_)];
    case SymbolKind::space:      return 94;
    case SymbolKind::newline:    return 95;
    case SymbolKind::para_break: return 96;
    case SymbolKind::terminator: return 97;
    }
    return -1;
}

Symbol Symbol::from_index(int index) {
    if (index >= 0 && index < 26) return printable(static_cast<char>('A' + index));
    if (index >= 26 && index < 52) return printable(static_cast<char>('a' + index - 26));
    if (index >= 52 && index < 62) return printable(static_cast<char>('0' + index - 52));
    if (index >= 62 && index < 94) return printable(kSpecials[static_cast<size_t>(index - 62)]);
    if (index == 94) return space();
    if (index == 95) return newline();
    if (index == 96) return para_break();
    if (index == 97) return terminator();
    throw std::invalid_argument("symbol index outside [0,97]: " + std::to_string(index));
}

bool is_printable_char(char c) noexcept {
    return c >= '!' && c <= '~';
}

Codebook::Codebook() {
    reverse_.fill(-1);
    for (int i = 0; i < kAlphabetSize; ++i) {
        forward_[static_cast<size_t>(i)] = PerturbationTriplet::from_lex_index(i);
        reverse_[static_cast<size_t>(i)] = static_cast<int8_t>(i);
    }
}

PerturbationTriplet Codebook::triplet_for(Symbol s) const noexcept {
    return forward_[static_cast<size_t>(s.index())];
}

Symbol Codebook::symbol_for(const PerturbationTriplet& t) const {
    int idx = symbol_index_for_lex(t.lex_index());
    if (idx < 0)
        raise(errc::unassigned_combination,
              "triplet (" + std::to_string(t.dr.value()) + "," +
              std::to_string(t.dg.value()) + "," + std::to_string(t.db.value()) +
              ") carries no symbol");
    return Symbol::from_index(idx);
}

std::optional<Symbol> Codebook::try_symbol_for(const PerturbationTriplet& t) const noexcept {
    int idx = symbol_index_for_lex(t.lex_index());
    if (idx < 0) return std::nullopt;
    return Symbol::from_index(idx);
}

int Codebook::symbol_index_for_lex(int lex_index) const noexcept {
    if (lex_index < 0 || lex_index >= kTripletCount) return -1;
    return reverse_[static_cast<size_t>(lex_index)];
}

const Codebook& codebook() {
    static const Codebook instance;
    return instance;
}

// ---------------------------------------------------------------------------
// Text preparation
// ---------------------------------------------------------------------------

namespace {

struct DecodedCp {
    char32_t cp;
    size_t length;
    bool valid;
};

DecodedCp decode_utf8(std::string_view s, size_t i) {
    auto byte = [&](size_t k) { return static_cast<unsigned char>(s[k]); };
    auto cont = [&](size_t k) {
        return k < s.size() && (byte(k) & 0xC0) == 0x80;
    };

    unsigned char b0 = byte(i);
    if (b0 < 0x80) return {b0, 1, true};
    if (b0 >= 0xC2 && b0 <= 0xDF) {
        if (!cont(i + 1)) return {b0, 1, false};
        return {static_cast<char32_t>((b0 & 0x1Fu) << 6 | (byte(i + 1) & 0x3Fu)), 2, true};
    }
    if (b0 >= 0xE0 && b0 <= 0xEF) {
        if (!cont(i + 1) || !cont(i + 2)) return {b0, 1, false};
        char32_t cp = static_cast<char32_t>((b0 & 0x0Fu) << 12 |
                                            (byte(i + 1) & 0x3Fu) << 6 |
                                            (byte(i + 2) & 0x3Fu));
        if (cp < 0x800 || (cp >= 0xD800 && cp <= 0xDFFF)) return {b0, 1, false};
        return {cp, 3, true};
    }
    if (b0 >= 0xF0 && b0 <= 0xF4) {
        if (!cont(i + 1) || !cont(i + 2) || !cont(i + 3)) return {b0, 1, false};
        char32_t cp = static_cast<char32_t>((b0 & 0x07u) << 18 |
                                            (byte(i + 1) & 0x3Fu) << 12 |
                                            (byte(i + 2) & 0x3Fu) << 6 |
                                            (byte(i + 3) & 0x3Fu));
        if (cp < 0x10000 || cp > 0x10FFFF) return {b0, 1, false};
        return {cp, 4, true};
    }
    return {b0, 1, false};
}

std::string codepoint_label(char32_t cp) {
    static const char* hex = "0123456789ABCDEF";
    std::string s = "U+";
    char buf[8];
    int n = 0;
    char32_t v = cp;
    do {
        buf[n++] = hex[v & 0xF];
        v >>= 4;
    } while (v != 0);
    while (n < 4) buf[n++] = '0';
    while (n > 0) s += buf[--n];
    return s;
}

const char* mapped_replacement(char32_t cp) {
    switch (cp) {
    case 0x2018: case 0x2019: return "'";
    case 0x201C: case 0x201D: return "\"";
    case 0x2013: case 0x2014: return "-";
    case 0x2026: return "...";
    case 0x00A0: return " ";
    case U'\t':  return " ";
    default:     return nullptr;
    }
}

bool passes_through(char32_t cp) {
    return cp == U'\n' || cp == U' ' || (cp >= 0x21 && cp <= 0x7E);
}

} // namespace

std::vector<char32_t> utf8_codepoints(std::string_view s) {
    std::vector<char32_t> out;
    out.reserve(s.size());
    size_t i = 0;
    while (i < s.size()) {
        auto [cp, length, valid] = decode_utf8(s, i);
        out.push_back(cp);
        i += length;
    }
    return out;
}

NormalizedText normalize_text(std::string_view raw_utf8, NormalizeMode mode) {
    NormalizedText out;
    out.text.reserve(raw_utf8.size());

    size_t i = 0;
    size_t pos = 0;  // codepoint position, for diagnostics
    while (i < raw_utf8.size()) {
        auto [cp, length, valid] = decode_utf8(raw_utf8, i);
        i += length;

        if (valid && cp == U'\r') {
            // CRLF collapses to a single LF; bare CR becomes LF too.
            size_t consumed = 1;
            if (i < raw_utf8.size() && raw_utf8[i] == '\n') {
                ++i;
                ++consumed;
            }
            out.log.substitutions.push_back({pos, cp, "\n"});
            out.text += '\n';
            pos += consumed;
            continue;
        }

        if (valid && passes_through(cp)) {
            out.text += static_cast<char>(cp);
            ++pos;
            continue;
        }

        const char* rep = valid ? mapped_replacement(cp) : nullptr;
        if (rep != nullptr) {
            out.log.substitutions.push_back({pos, cp, rep});
            out.text += rep;
            ++pos;
            continue;
        }

        if (mode == NormalizeMode::strict)
            raise(errc::unmappable_character,
                  "codepoint " + codepoint_label(cp) + " at position " +
                  std::to_string(pos) + " cannot be embedded");
        out.log.rejected.push_back({pos, cp});
        out.text += '?';
        ++pos;
    }
    return out;
}

std::vector<Symbol> tokenize(std::string_view normalized) {
    std::vector<Symbol> out;
    out.reserve(normalized.size());
    size_t i = 0;
    while (i < normalized.size()) {
        char c = normalized[i];
        if (c == '\n') {
            if (i + 1 < normalized.size() && normalized[i + 1] == '\n') {
                out.push_back(Symbol::para_break());
                i += 2;
            } else {
                out.push_back(Symbol::newline());
                ++i;
            }
        } else if (c == ' ') {
            out.push_back(Symbol::space());
            ++i;
        } else if (is_printable_char(c)) {
            out.push_back(Symbol::printable(c));
            ++i;
        } else {
            raise(errc::unmappable_character,
                  "tokenize expects normalized text; found byte " +
                  std::to_string(static_cast<int>(static_cast<unsigned char>(c))) +
                  " at offset " + std::to_string(i));
        }
    }
    return out;
}

std::string detokenize(std::span<const Symbol> symbols) {
    std::string out;
    out.reserve(symbols.size());
    for (Symbol s : symbols) {
        switch (s.kind()) {
        case SymbolKind::printable:  out += s.character(); break;
        case SymbolKind::space:      out += ' '; break;
        case SymbolKind::newline:    out += '\n'; break;
        case SymbolKind::para_break: out += "\n\n"; break;
        case SymbolKind::terminator:
            throw std::invalid_argument("terminator has no text form");
        }
    }
    return out;
}

namespace {

std::string csv_symbol_field(Symbol s) {
    switch (s.kind()) {
    case SymbolKind::space:      return "SP";
    case SymbolKind::newline:    return "\\n";
    case SymbolKind::para_break: return "\\n\\n";
    case SymbolKind::terminator: return "NUL";
    case SymbolKind::printable:  break;
    }
    char c = s.character();
    if (c == ',') return "\",\"";
    if (c == '"') return "\"\"\"\"";
    return std::string(1, c);
}

} // namespace

std::string codebook_csv(const Codebook& cb) {
    std::string out = "symbol,dr,dg,db,index\n";
    for (int i = 0; i < kAlphabetSize; ++i) {
        Symbol s = Symbol::from_index(i);
        PerturbationTriplet t = cb.triplet_for(s);
        out += csv_symbol_field(s);
        out += ',' + std::to_string(t.dr.value());
        out += ',' + std::to_string(t.dg.value());
        out += ',' + std::to_string(t.db.value());
        out += ',' + std::to_string(i);
        out += '\n';
    }
    return out;
}

} // namespace qpc

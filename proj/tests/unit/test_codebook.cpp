#include <doctest.h>

#include <fstream>
#include <set>

#include "helpers.hpp"
#include "qpc/codebook.hpp"

using namespace qpc;

namespace {

PerturbationTriplet triplet(int r, int g, int b) {
    return {QuinaryDelta(r), QuinaryDelta(g), QuinaryDelta(b)};
}

struct FixtureRow {
    std::string symbol;
    int dr, dg, db;
};

// Parses the reference mapping table (RFC-4180 quoting on the symbol field).
std::vector<FixtureRow> load_fixture_rows() {
    std::ifstream in(test::data_dir() / "codebook_reference.csv");
    REQUIRE(in.good());
    std::vector<FixtureRow> rows;
    std::string line;
    std::getline(in, line);
    CHECK(line == "symbol,dr,dg,db");
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::string symbol;
        size_t pos;
        if (line[0] == '"') {
            size_t i = 1;
            for (; i < line.size(); ++i) {
                if (line[i] != '"') {
                    symbol += line[i];
                } else if (i + 1 < line.size() && line[i + 1] == '"') {
                    symbol += '"';
                    ++i;
                } else {
                    break;
                }
            }
            pos = i + 1;  // at the comma after the closing quote
        } else {
            pos = line.find(',');
            symbol = line.substr(0, pos);
        }
        REQUIRE(line[pos] == ',');
        int d[3];
        for (int k = 0; k < 3; ++k) {
            size_t next = line.find(',', pos + 1);
            d[k] = std::stoi(line.substr(pos + 1, next - pos - 1));
            pos = next;
        }
        rows.push_back({symbol, d[0], d[1], d[2]});
    }
    return rows;
}

Symbol symbol_from_token(const std::string& token) {
    if (token == "SP") return Symbol::space();
    if (token == "\\n") return Symbol::newline();
    if (token == "\\n\\n") return Symbol::para_break();
    if (token == "NUL") return Symbol::terminator();
    REQUIRE(token.size() == 1);
    return Symbol::printable(token[0]);
}

} // namespace

TEST_CASE("quinary deltas accept exactly {-2..2}") {
    for (int v = -2; v <= 2; ++v) CHECK(QuinaryDelta(v).value() == v);
    CHECK_THROWS_AS(QuinaryDelta(3), std::invalid_argument);
    CHECK_THROWS_AS(QuinaryDelta(-3), std::invalid_argument);
    CHECK_THROWS_AS(QuinaryDelta(255), std::invalid_argument);
}

TEST_CASE("triplet lex index round-trips all 125 combinations") {
    std::set<int> seen;
    for (int r = -2; r <= 2; ++r)
        for (int g = -2; g <= 2; ++g)
            for (int b = -2; b <= 2; ++b) {
                PerturbationTriplet t = triplet(r, g, b);
                int idx = t.lex_index();
                CHECK(idx >= 0);
                CHECK(idx < kTripletCount);
                CHECK(PerturbationTriplet::from_lex_index(idx) == t);
                seen.insert(idx);
            }
    CHECK(seen.size() == 125);
    CHECK(triplet(-2, -2, -2).lex_index() == 0);
    CHECK(triplet(2, 2, 2).lex_index() == 124);
    CHECK_THROWS_AS(PerturbationTriplet::from_lex_index(125), std::invalid_argument);
    CHECK_THROWS_AS(PerturbationTriplet::from_lex_index(-1), std::invalid_argument);
}

TEST_CASE("symbol indices cover the whole alphabet") {
    std::set<int> seen;
    for (int i = 0; i < kAlphabetSize; ++i) {
        Symbol s = Symbol::from_index(i);
        CHECK(s.index() == i);
        seen.insert(s.index());
    }
    CHECK(seen.size() == 98);
    CHECK(Symbol::printable('A').index() == 0);
    CHECK(Symbol::printable('Z').index() == 25);
    CHECK(Symbol::printable('a').index() == 26);
    CHECK(Symbol::printable('0').index() == 52);
    CHECK(Symbol::printable('`').index() == 62);
    CHECK(Symbol::space().index() == 94);
    CHECK(Symbol::newline().index() == 95);
    CHECK(Symbol::para_break().index() == 96);
    CHECK(Symbol::terminator().index() == 97);
    CHECK_THROWS_AS(Symbol::from_index(98), std::invalid_argument);
    CHECK_THROWS_AS(Symbol::printable(' '), std::invalid_argument);
    CHECK_THROWS_AS(Symbol::printable('\n'), std::invalid_argument);
    CHECK_THROWS_AS(Symbol::printable('\x7f'), std::invalid_argument);
}

TEST_CASE("codebook assigns the documented triplets") {
    const Codebook& cb = codebook();
    CHECK(cb.triplet_for(Symbol::printable('A')) == triplet(-2, -2, -2));
    CHECK(cb.triplet_for(Symbol::printable('y')) == triplet(0, -2, -2));
    CHECK(cb.triplet_for(Symbol::printable('0')) == triplet(0, -2, 0));
    CHECK(cb.triplet_for(Symbol::printable('`')) == triplet(0, 0, 0));
    CHECK(cb.triplet_for(Symbol::printable('/')) == triplet(1, 1, 1));
    CHECK(cb.triplet_for(Symbol::space()) == triplet(1, 1, 2));
    CHECK(cb.triplet_for(Symbol::newline()) == triplet(1, 2, -2));
    CHECK(cb.triplet_for(Symbol::para_break()) == triplet(1, 2, -1));
    CHECK(cb.triplet_for(Symbol::terminator()) == triplet(1, 2, 0));

    // ':' is followed by apostrophe, then semicolon.
    CHECK(cb.triplet_for(Symbol::printable(':')) == triplet(1, -1, 2));
    CHECK(cb.triplet_for(Symbol::printable('\'')) == triplet(1, 0, -2));
    CHECK(cb.triplet_for(Symbol::printable(';')) == triplet(1, 0, -1));
    CHECK(cb.triplet_for(Symbol::printable('"')) == triplet(1, 0, 0));
}

TEST_CASE("codebook reverse lookup") {
    const Codebook& cb = codebook();
    CHECK(cb.symbol_for(triplet(0, 0, 0)) == Symbol::printable('`'));
    CHECK(cb.symbol_for(triplet(1, 2, 0)) == Symbol::terminator());
    CHECK_THROWS_AS(cb.symbol_for(triplet(2, 0, 0)), Error);
    CHECK(!cb.try_symbol_for(triplet(2, 0, 0)).has_value());
    CHECK(cb.try_symbol_for(triplet(-2, -2, -2)) == Symbol::printable('A'));
    try {
        cb.symbol_for(triplet(1, 2, 1));
        FAIL("expected an error");
    } catch (const Error& e) {
        CHECK(e.code() == errc::unassigned_combination);
    }
}

TEST_CASE("codebook is a bijection with bounded deltas") {
    const Codebook& cb = codebook();
    std::set<int> used;
    for (int i = 0; i < kAlphabetSize; ++i) {
        Symbol s = Symbol::from_index(i);
        PerturbationTriplet t = cb.triplet_for(s);
        CHECK(std::abs(t.dr.value()) <= 2);
        CHECK(std::abs(t.dg.value()) <= 2);
        CHECK(std::abs(t.db.value()) <= 2);
        CHECK(cb.symbol_for(t) == s);
        used.insert(t.lex_index());
    }
    CHECK(used.size() == 98);

    int shelved = 0;
    for (int lex = 0; lex < kTripletCount; ++lex)
        if (cb.symbol_index_for_lex(lex) < 0) ++shelved;
    CHECK(shelved == 27);
}

TEST_CASE("codebook matches every row of the reference table") {
    const Codebook& cb = codebook();
    auto rows = load_fixture_rows();
    CHECK(rows.size() == 95);
    for (const auto& row : rows) {
        Symbol s = symbol_from_token(row.symbol);
        PerturbationTriplet expected = triplet(row.dr, row.dg, row.db);
        INFO("symbol token: ", row.symbol);
        CHECK(cb.triplet_for(s) == expected);
    }
}

TEST_CASE("normalize_text canonicalizes typographic characters") {
    auto r = normalize_text("don’t", NormalizeMode::strict);
    CHECK(r.text == "don't");
    REQUIRE(r.log.substitutions.size() == 1);
    CHECK(r.log.substitutions[0].position == 3);
    CHECK(r.log.substitutions[0].original == U'’');
    CHECK(r.log.substitutions[0].replacement == "'");

    CHECK(normalize_text("“q”", NormalizeMode::strict).text == "\"q\"");
    CHECK(normalize_text("a–b—c", NormalizeMode::strict).text == "a-b-c");
    CHECK(normalize_text("wait…", NormalizeMode::strict).text == "wait...");
    CHECK(normalize_text("a b", NormalizeMode::strict).text == "a b");
    CHECK(normalize_text("a\tb", NormalizeMode::strict).text == "a b");
    CHECK(normalize_text("a\r\nb\rc", NormalizeMode::strict).text == "a\nb\nc");
}

TEST_CASE("normalize_text strict rejects with codepoint position") {
    try {
        normalize_text("café", NormalizeMode::strict);
        FAIL("expected an error");
    } catch (const Error& e) {
        CHECK(e.code() == errc::unmappable_character);
        CHECK(std::string(e.what()).find("U+00E9") != std::string::npos);
        CHECK(std::string(e.what()).find("position 3") != std::string::npos);
    }
}

TEST_CASE("normalize_text lossy substitutes and logs rejects") {
    auto r = normalize_text("café!", NormalizeMode::lossy);
    CHECK(r.text == "caf?!");
    REQUIRE(r.log.rejected.size() == 1);
    CHECK(r.log.rejected[0].position == 3);
    CHECK(r.log.rejected[0].codepoint == U'é');

    // Invalid UTF-8 bytes degrade the same way instead of desyncing.
    auto bad = normalize_text(std::string_view("a\xFF\x80z", 4), NormalizeMode::lossy);
    CHECK(bad.text == "a??z");
    CHECK(bad.log.rejected.size() == 2);
}

TEST_CASE("normalize_text is idempotent") {
    std::mt19937 rng(7);
    const char* samples[] = {
        "plain ascii text\nwith lines\n\nand paragraphs",
        "don’t “quote” me — ever…",
        "tabs\tand spaces\r\nmixed\rlines",
    };
    for (const char* s : samples) {
        auto once = normalize_text(s, NormalizeMode::lossy);
        auto twice = normalize_text(once.text, NormalizeMode::lossy);
        CHECK(twice.text == once.text);
        CHECK(twice.log.substitutions.empty());
        CHECK(twice.log.rejected.empty());
    }
    for (int i = 0; i < 50; ++i) {
        std::string s = test::random_normalized_text(rng, 200);
        auto r = normalize_text(s, NormalizeMode::strict);
        CHECK(r.text == s);
        CHECK(r.log.substitutions.empty());
    }
}

TEST_CASE("tokenize splits paragraphs greedily") {
    auto symbols = tokenize("ab\n\ncd");
    REQUIRE(symbols.size() == 5);
    CHECK(symbols[0] == Symbol::printable('a'));
    CHECK(symbols[1] == Symbol::printable('b'));
    CHECK(symbols[2] == Symbol::para_break());
    CHECK(symbols[3] == Symbol::printable('c'));
    CHECK(symbols[4] == Symbol::printable('d'));

    auto triple = tokenize("a\n\n\nb");
    REQUIRE(triple.size() == 4);
    CHECK(triple[1] == Symbol::para_break());
    CHECK(triple[2] == Symbol::newline());

    CHECK(tokenize("").empty());
    CHECK(tokenize("\n\n").size() == 1);
    CHECK(tokenize("\n").size() == 1);

    try {
        tokenize("a\tb");
        FAIL("expected an error");
    } catch (const Error& e) {
        CHECK(e.code() == errc::unmappable_character);
    }
}

TEST_CASE("detokenize inverts tokenize on normalized text") {
    std::vector<Symbol> hi = {Symbol::printable('H'), Symbol::printable('i'),
                              Symbol::space(), Symbol::printable('!')};
    CHECK(detokenize(hi) == "Hi !");

    std::mt19937 rng(11);
    for (int i = 0; i < 200; ++i) {
        std::string text = test::random_normalized_text(rng, 1 + i * 3);
        CHECK(detokenize(tokenize(text)) == text);
    }

    std::vector<Symbol> with_term = {Symbol::printable('x'), Symbol::terminator()};
    CHECK_THROWS_AS(detokenize(with_term), std::invalid_argument);
}

TEST_CASE("codebook CSV dump") {
    std::string csv = codebook_csv(codebook());
    std::vector<std::string> lines;
    size_t start = 0;
    while (start < csv.size()) {
        size_t end = csv.find('\n', start);
        lines.push_back(csv.substr(start, end - start));
        start = end + 1;
    }
    REQUIRE(lines.size() == 99);  // header + 98 rows
    CHECK(lines[0] == "symbol,dr,dg,db,index");
    CHECK(lines[1] == "A,-2,-2,-2,0");
    CHECK(lines[63] == "`,0,0,0,62");
    CHECK(lines[92] == "\",\",1,1,-1,91");
    CHECK(lines[87] == ";,1,0,-1,86");
    CHECK(lines[88] == "\"\"\"\",1,0,0,87");
    CHECK(lines[95] == "SP,1,1,2,94");
    CHECK(lines[96] == "\\n,1,2,-2,95");
    CHECK(lines[97] == "\\n\\n,1,2,-1,96");
    CHECK(lines[98] == "NUL,1,2,0,97");
}

TEST_CASE("utf8_codepoints decodes multibyte sequences") {
    auto cps = utf8_codepoints("aé中\U0001F600");
    REQUIRE(cps.size() == 4);
    CHECK(cps[0] == U'a');
    CHECK(cps[1] == 0xE9);
    CHECK(cps[2] == 0x4E2D);
    CHECK(cps[3] == 0x1F600);

    auto bad = utf8_codepoints(std::string_view("\xC3", 1));
    REQUIRE(bad.size() == 1);
    CHECK(bad[0] == 0xC3);
}

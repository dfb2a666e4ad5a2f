#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "polyrag/base64.hpp"
#include "polyrag/errors.hpp"
#include "polyrag/text.hpp"
#include "polyrag/time_util.hpp"
#include "polyrag/utf8.hpp"

using namespace polyrag;

TEST_CASE("utf8 code point offsets") {
    const std::string s = "aé؟ਸ";
    const auto off = utf8::codepoint_offsets(s);
    REQUIRE(off.size() == 5);
    CHECK(off[0] == 0);
    CHECK(off[1] == 1);
    CHECK(off[2] == 3);
    CHECK(off[3] == 5);
    CHECK(off[4] == s.size());
    CHECK(utf8::length(s) == 4);
    CHECK(utf8::is_valid(s));
    CHECK_FALSE(utf8::is_valid("\xC3"));
    CHECK_FALSE(utf8::is_valid("\xFF"));
}

TEST_CASE("utf8 append round trip") {
    std::string out;
    for (char32_t cp : {U'a', U'é', U'؟', U'ਸ', U'😀'}) utf8::append(out, cp);
    const auto cps = utf8::decode(out);
    REQUIRE(cps.size() == 5);
    CHECK(cps[4] == U'😀');
}

TEST_CASE("tokenize lowercases ASCII and keeps non-ASCII runs") {
    const auto t = text::tokenize("What's the LEAVE-policy? چھٹی 20");
    REQUIRE(t.size() == 7);
    CHECK(t[0] == "what");
    CHECK(t[1] == "s");
    CHECK(t[3] == "leave");
    CHECK(t[4] == "policy");
    CHECK(t[5] == "چھٹی");
    CHECK(t[6] == "20");
    CHECK(text::tokenize("  ... ").empty());
}

TEST_CASE("sentences split at terminators followed by whitespace") {
    const auto s = text::sentences("Leave is 20 days. Offices close Friday! Version 1.5 ships? yes");
    REQUIRE(s.size() == 4);
    CHECK(s[0] == "Leave is 20 days.");
    CHECK(s[1] == "Offices close Friday!");
    CHECK(s[2] == "Version 1.5 ships?");
    CHECK(s[3] == "yes");
}

TEST_CASE("sentences honour the Arabic question mark and blank lines") {
    const auto s = text::sentences("چھٹی کتنی ہے؟ ٹھیک\n\n# Heading\n\nBody text.");
    REQUIRE(s.size() == 4);
    CHECK(s[0] == "چھٹی کتنی ہے؟");
    CHECK(s[1] == "ٹھیک");
    CHECK(s[2] == "# Heading");
    CHECK(s[3] == "Body text.");
}

TEST_CASE("paragraph spans split on blank lines") {
    const std::string s = "A\nA2\n\n\nB\n  \nC";
    const auto p = text::paragraph_spans(s);
    REQUIRE(p.size() == 3);
    CHECK(s.substr(p[0].start, p[0].end - p[0].start) == "A\nA2");
    CHECK(s.substr(p[1].start, p[1].end - p[1].start) == "B");
    CHECK(s.substr(p[2].start, p[2].end - p[2].start) == "C");
}

TEST_CASE("string helpers") {
    CHECK(text::trim("  x y \n") == "x y");
    CHECK(text::is_blank(" \t\n"));
    CHECK(text::normalize_newlines("a\r\nb\rc") == "a\nb\nc");
    CHECK(text::replace_all("{a}{a}", "{a}", "x") == "xx");
    CHECK(text::join(text::split("a,b,,c", ','), "|") == "a|b||c");
}

TEST_CASE("base64 round trip and rejects garbage") {
    for (std::string s : {"", "f", "fo", "foo", "foob", "fooba", "foobar"}) {
        std::vector<std::uint8_t> bytes(s.begin(), s.end());
        CHECK(base64::decode(base64::encode(bytes)) == bytes);
    }
    CHECK(base64::encode({'f', 'o', 'o', 'b', 'a', 'r'}) == "Zm9vYmFy");
    CHECK_THROWS_AS(base64::decode("Zm9v!"), InvalidArgument);
}

TEST_CASE("rfc3339 parse and format") {
    const auto t = parse_rfc3339("2024-01-01T00:00:00Z");
    REQUIRE(t);
    CHECK(format_rfc3339(*t) == "2024-01-01T00:00:00Z");
    const auto off = parse_rfc3339("2024-01-01T05:00:00+05:00");
    REQUIRE(off);
    CHECK(*off == *t);
    CHECK(parse_rfc3339("2024-01-01T00:00:00.250Z"));
    CHECK_FALSE(parse_rfc3339("yesterday"));
    CHECK_FALSE(parse_rfc3339("2024-13-01T00:00:00Z"));
}

#include <catch2/catch_amalgamated.hpp>

#include <string>
#include <vector>

#include "prefact/stance.hpp"
#include "prefact/textfeat.hpp"

using namespace prefact;

namespace {

ArticleRecord art(const std::string& title, const std::string& body) {
    ArticleRecord a;
    a.id = "a1";
    a.source_domain = "example.com";
    a.url = "https://example.com/a1";
    a.title = title;
    a.body = body;
    a.published_at = 1700000000;
    a.language_tag = "en";
    return a;
}

}  // namespace

TEST_CASE("stance labels map to the fixed numeric values", "[stance]") {
    REQUIRE(stance_value(Stance::agree) == 1.0);
    REQUIRE(stance_value(Stance::disagree) == -1.0);
    REQUIRE(stance_value(Stance::discuss) == 0.0);
    REQUIRE(stance_value(Stance::unrelated) == 0.0);
    REQUIRE(std::string(to_string(Stance::agree)) == "agree");
    REQUIRE(std::string(to_string(Stance::disagree)) == "disagree");
    REQUIRE(std::string(to_string(Stance::discuss)) == "discuss");
    REQUIRE(std::string(to_string(Stance::unrelated)) == "unrelated");
}

TEST_CASE("relatedness is content-token jaccard", "[stance]") {
    LexiconBundle lex = builtin_lexicons();
    SECTION("identical sets score 1") {
        REQUIRE(relatedness({"moon", "landing"}, {"moon", "landing"}, lex.stopwords) == 1.0);
    }
    SECTION("disjoint sets score 0") {
        REQUIRE(relatedness({"moon"}, {"river"}, lex.stopwords) == 0.0);
    }
    SECTION("partial overlap") {
        REQUIRE(relatedness({"moon", "landing", "faked"}, {"moon", "landing", "real"},
                            lex.stopwords) == 0.5);  // 2 / 4
    }
    SECTION("stopwords are ignored") {
        REQUIRE(relatedness({"the", "moon"}, {"a", "moon"}, lex.stopwords) == 1.0);
    }
    SECTION("claim of only stopwords is an error") {
        REQUIRE_THROWS_AS(relatedness({"the", "of"}, {"moon"}, lex.stopwords), ValidationError);
    }
}

TEST_CASE("negation_parity counts lexicon hits mod 2", "[stance]") {
    LexiconBundle lex = builtin_lexicons();
    REQUIRE(negation_parity({"x", "causes", "y"}, lex.negation) == Parity::even);
    REQUIRE(negation_parity({"x", "not", "y"}, lex.negation) == Parity::odd);
    REQUIRE(negation_parity({"not", "x", "never", "y"}, lex.negation) == Parity::even);
}

TEST_CASE("detect_stance agrees with an echoing article", "[stance]") {
    LexiconBundle lex = builtin_lexicons();
    StanceResult r = detect_stance("the moon landing was faked",
                                   art("opinion", "The moon landing was faked. More text here."),
                                   lex.stopwords, lex.negation);
    REQUIRE(r.label == Stance::agree);
    REQUIRE(r.value == 1.0);
    REQUIRE(r.relatedness == 1.0);
    REQUIRE(r.matched_sentence == "The moon landing was faked");
}

TEST_CASE("detect_stance disagrees on odd negation parity", "[stance]") {
    LexiconBundle lex = builtin_lexicons();
    StanceResult r = detect_stance("the moon landing was faked",
                                   art("opinion", "The moon landing was not faked."),
                                   lex.stopwords, lex.negation);
    // "not" is a negator, not a stopword: content sets {moon,landing,faked}
    // vs {moon,landing,not,faked} give 3/4 >= tau_agree, parities differ.
    REQUIRE(r.label == Stance::disagree);
    REQUIRE(r.value == -1.0);
}

TEST_CASE("the morphological-variant example lands in discuss", "[stance]") {
    LexiconBundle lex = builtin_lexicons();
    StanceResult r = detect_stance("x causes y", art("note", "x does not cause y"), lex.stopwords,
                                   lex.negation);
    // Content sets {x,causes,y} vs {x,not,cause,y}: overlap {x,y} of union 5.
    REQUIRE(r.relatedness == 0.4);
    REQUIRE(r.label == Stance::discuss);
    REQUIRE(r.value == 0.0);
}

TEST_CASE("detect_stance reports unrelated below tau_rel", "[stance]") {
    LexiconBundle lex = builtin_lexicons();
    StanceResult r = detect_stance("the moon landing was faked",
                                   art("gardening", "Tomatoes ripen best in full sun."),
                                   lex.stopwords, lex.negation);
    REQUIRE(r.label == Stance::unrelated);
    REQUIRE(r.value == 0.0);
    REQUIRE(r.relatedness == 0.0);
    REQUIRE_FALSE(r.matched_sentence.has_value());
}

TEST_CASE("detect_stance validates its inputs", "[stance]") {
    LexiconBundle lex = builtin_lexicons();
    ArticleRecord a = art("t", "body text");
    REQUIRE_THROWS_AS(detect_stance("", a, lex.stopwords, lex.negation), ValidationError);
    REQUIRE_THROWS_AS(detect_stance("?!", a, lex.stopwords, lex.negation), ValidationError);
    REQUIRE_THROWS_AS(detect_stance("the of", a, lex.stopwords, lex.negation), ValidationError);

    ArticleRecord empty = a;
    empty.body = "";
    REQUIRE_THROWS_AS(detect_stance("moon", empty, lex.stopwords, lex.negation), ValidationError);

    StanceParams bad;
    bad.tau_rel = 1.5;
    REQUIRE_THROWS_AS(detect_stance("moon", a, lex.stopwords, lex.negation, bad), ValidationError);
}

TEST_CASE("earliest sentence wins relatedness ties", "[stance]") {
    LexiconBundle lex = builtin_lexicons();
    StanceResult r = detect_stance("storms flood rivers",
                                   art("", "Storms flood rivers quickly. Storms flood rivers slowly."),
                                   lex.stopwords, lex.negation);
    REQUIRE(r.matched_sentence == "Storms flood rivers quickly");
}

TEST_CASE("appending an unrelated sentence never changes the result", "[stance]") {
    LexiconBundle lex = builtin_lexicons();
    std::string claim = "the moon landing was faked";
    ArticleRecord base = art("opinion", "The moon landing was faked.");
    ArticleRecord extended = base;
    extended.body += " Zebras graze on open plains.";

    StanceResult r1 = detect_stance(claim, base, lex.stopwords, lex.negation);
    StanceResult r2 = detect_stance(claim, extended, lex.stopwords, lex.negation);
    REQUIRE(r1.label == r2.label);
    REQUIRE(r1.value == r2.value);
    REQUIRE(r1.relatedness == r2.relatedness);
    REQUIRE(r1.matched_sentence == r2.matched_sentence);
}

TEST_CASE("a duplicated negator flips agree to disagree without moving overlap", "[stance]") {
    LexiconBundle lex = builtin_lexicons();
    std::string claim = "the moon landing was not faked";
    // Claim parity is odd. Sentence echoes the claim: parity odd -> agree.
    ArticleRecord a1 = art("", "The moon landing was not faked.");
    StanceResult r1 = detect_stance(claim, a1, lex.stopwords, lex.negation);
    REQUIRE(r1.label == Stance::agree);

    // Repeating "not" leaves the token SET (and thus relatedness) unchanged
    // but flips sentence parity to even -> disagree.
    ArticleRecord a2 = art("", "The moon landing was not not faked.");
    StanceResult r2 = detect_stance(claim, a2, lex.stopwords, lex.negation);
    REQUIRE(r2.relatedness == r1.relatedness);
    REQUIRE(r2.label == Stance::disagree);
}

TEST_CASE("the baseline detector behind the interface matches the free function", "[stance]") {
    LexiconBundle lex = builtin_lexicons();
    BaselineStanceDetector det(lex.stopwords, lex.negation);
    const StanceDetector& iface = det;
    ArticleRecord a = art("opinion", "The moon landing was faked.");
    StanceResult via_iface = iface.detect("the moon landing was faked", a);
    StanceResult direct = detect_stance("the moon landing was faked", a, lex.stopwords,
                                        lex.negation);
    REQUIRE(via_iface.label == direct.label);
    REQUIRE(via_iface.relatedness == direct.relatedness);
    REQUIRE(via_iface.matched_sentence == direct.matched_sentence);
}

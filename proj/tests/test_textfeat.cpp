#include <catch2/catch_amalgamated.hpp>

#include <string>
#include <vector>

#include "prefact/textfeat.hpp"

using namespace prefact;

namespace {

ArticleRecord make_article(const std::string& title, const std::string& body) {
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

TEST_CASE("tokenize lowercases and splits on non-alphanumerics", "[textfeat]") {
    REQUIRE(tokenize("Fake News!") == std::vector<std::string>{"fake", "news"});
    REQUIRE(tokenize("COVID-19 spreads") == std::vector<std::string>{"covid", "19", "spreads"});
    REQUIRE(tokenize("") == std::vector<std::string>{});
    REQUIRE(tokenize("  ...  ") == std::vector<std::string>{});
    REQUIRE(tokenize("Élan vital") == std::vector<std::string>{"élan", "vital"});
}

TEST_CASE("split_sentences splits on terminators and keeps the tail", "[textfeat]") {
    REQUIRE(split_sentences("One. Two! Three?") ==
            std::vector<std::string>{"One", " Two", " Three"});
    REQUIRE(split_sentences("No terminator") == std::vector<std::string>{"No terminator"});
    REQUIRE(split_sentences("Huh?! Next") == std::vector<std::string>{"Huh", " Next"});
    REQUIRE(split_sentences("...") == std::vector<std::string>{});
}

TEST_CASE("lexicon_density is hit mass over token count", "[textfeat]") {
    Lexicon lex("neg", {"bad"});
    REQUIRE(lexicon_density({"a", "bad", "c", "d"}, lex) == 0.25);
    REQUIRE(lexicon_density({}, lex) == 0.0);
    REQUIRE(lexicon_density({"bad", "bad"}, lex) == 1.0);

    SECTION("100 tokens with 10 cue hits give exactly 0.1") {
        std::vector<std::string> tokens;
        for (int i = 0; i < 90; ++i) tokens.push_back("filler");
        for (int i = 0; i < 10; ++i) tokens.push_back("bad");
        REQUIRE(lexicon_density(tokens, lex) == 0.1);
    }
    SECTION("weights count as mass and the result clamps at 1") {
        Lexicon weighted("cues", {"sheeple"}, {{"sheeple", 2.0}});
        REQUIRE(lexicon_density({"sheeple", "x", "y", "z"}, weighted) == 0.5);
        REQUIRE(lexicon_density({"sheeple"}, weighted) == 1.0);
    }
}

TEST_CASE("sentiment_polarity balances positive against negative hits", "[textfeat]") {
    Lexicon pos("pos", {"good"});
    Lexicon neg("neg", {"bad"});
    REQUIRE(sentiment_polarity({"good", "bad", "bad", "bad"}, pos, neg) == -0.5);
    REQUIRE(sentiment_polarity({"good"}, pos, neg) == 1.0);
    REQUIRE(sentiment_polarity({"meh"}, pos, neg) == 0.0);
    REQUIRE(sentiment_polarity({}, pos, neg) == 0.0);
}

TEST_CASE("type_token_ratio measures distinct share within the window", "[textfeat]") {
    REQUIRE(type_token_ratio({"a", "a", "a", "a"}) == 0.25);
    REQUIRE(type_token_ratio({"a", "b", "c"}) == 1.0);
    REQUIRE(type_token_ratio({}) == 0.0);
    REQUIRE(type_token_ratio({"a", "a", "b", "b"}, 2) == 0.5);
    REQUIRE_THROWS_AS(type_token_ratio({"a"}, 0), ValidationError);
}

TEST_CASE("builtin lexicons separate stopwords from negators", "[textfeat]") {
    LexiconBundle lex = builtin_lexicons();
    REQUIRE(lex.stopwords.contains("the"));
    REQUIRE(lex.stopwords.contains("does"));
    REQUIRE_FALSE(lex.stopwords.contains("not"));
    REQUIRE(lex.negation.contains("not"));
    REQUIRE(lex.negation.contains("never"));
    REQUIRE(lex.propaganda.contains("shocking"));
    REQUIRE(lex.subjectivity.size() > 0);
    REQUIRE(lex.positive.size() > 0);
    REQUIRE(lex.negative.size() > 0);
    REQUIRE(lex.offensive.size() > 0);
}

TEST_CASE("style_features counts the title twice", "[textfeat]") {
    LexiconBundle lex = builtin_lexicons();
    // "shocking" is a propaganda cue. Title contributes it twice, body has
    // three plain tokens: density = 2 / 5.
    ArticleRecord a = make_article("Shocking", "plain calm words");
    StyleFeatureVector v = style_features(a, lex);
    REQUIRE(v.propaganda_cue_density == Catch::Approx(2.0 / 5.0));
}

TEST_CASE("style_features surface statistics", "[textfeat]") {
    LexiconBundle lex = builtin_lexicons();
    SECTION("caps ratio counts shouted words") {
        // Tokens: title "WOW" x2 + body {"ok", "FINE"}; caps = WOW, WOW, FINE.
        ArticleRecord a = make_article("WOW", "ok FINE");
        StyleFeatureVector v = style_features(a, lex);
        REQUIRE(v.caps_word_ratio == Catch::Approx(3.0 / 4.0));
    }
    SECTION("single letters do not count as shouted") {
        ArticleRecord a = make_article("A day", "I went home");
        StyleFeatureVector v = style_features(a, lex);
        REQUIRE(v.caps_word_ratio == 0.0);
    }
    SECTION("exclamation density doubles title marks") {
        // title "go!" counts 2, body "now! stop" counts 1 -> 3 marks / 4 tokens.
        ArticleRecord a = make_article("go!", "now stop!");
        StyleFeatureVector v = style_features(a, lex);
        REQUIRE(v.exclamation_density == Catch::Approx(3.0 / 4.0));
    }
    SECTION("mean sentence length includes the doubled title") {
        // Sentences: "one two" (title, twice) and "three four five".
        ArticleRecord a = make_article("one two", "three four five.");
        StyleFeatureVector v = style_features(a, lex);
        REQUIRE(v.mean_sentence_length == Catch::Approx((2.0 + 2.0 + 3.0) / 3.0));
    }
    SECTION("empty title contributes nothing") {
        ArticleRecord a = make_article("", "calm words here.");
        StyleFeatureVector v = style_features(a, lex);
        REQUIRE(v.mean_sentence_length == Catch::Approx(3.0));
    }
}

TEST_CASE("propaganda_flag blends cue and subjectivity density", "[textfeat]") {
    StyleFeatureVector v;
    v.propaganda_cue_density = 0.4;
    v.subjectivity_density = 0.2;
    PropagandaSignal s = propaganda_flag(v, 0.35);
    REQUIRE(s.score == Catch::Approx(0.34));
    REQUIRE_FALSE(s.flagged);

    StyleFeatureVector hot;
    hot.propaganda_cue_density = 1.0;
    hot.subjectivity_density = 1.0;
    REQUIRE(propaganda_flag(hot, 1.0).flagged);  // threshold is inclusive

    REQUIRE_THROWS_AS(propaganda_flag(v, 1.5), ValidationError);
    REQUIRE_THROWS_AS(propaganda_flag(v, -0.1), ValidationError);
}

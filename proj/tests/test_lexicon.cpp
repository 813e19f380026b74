#include <catch2/catch_amalgamated.hpp>

#include <filesystem>
#include <fstream>

#include "prefact/lexicon.hpp"

namespace fs = std::filesystem;
using namespace prefact;

namespace {

fs::path write_lexicon_file(const std::string& name, const std::string& content) {
    fs::path dir = fs::temp_directory_path() / ("prefact-lex-" + std::to_string(::getpid()));
    fs::create_directories(dir);
    fs::path p = dir / name;
    std::ofstream out(p, std::ios::binary | std::ios::trunc);
    out << content;
    return p;
}

}  // namespace

TEST_CASE("lexicon membership and default weights", "[lexicon]") {
    Lexicon lex("cues", {"shocking", "scandal"}, {{"scandal", 2.0}});
    REQUIRE(lex.name() == "cues");
    REQUIRE(lex.size() == 2);
    REQUIRE(lex.contains("shocking"));
    REQUIRE_FALSE(lex.contains("calm"));
    REQUIRE(lex.weight_of("shocking") == 1.0);
    REQUIRE(lex.weight_of("scandal") == 2.0);
    REQUIRE(lex.weight_of("calm") == 0.0);
}

TEST_CASE("lexicon rejects bad entry sets", "[lexicon]") {
    REQUIRE_THROWS_AS(Lexicon("empty", {}), ValidationError);
    REQUIRE_THROWS_AS(Lexicon("ws", {"two words"}), ValidationError);
    REQUIRE_THROWS_AS(Lexicon("case", {"Shocking"}), ValidationError);
}

TEST_CASE("lexicon load parses comments, blanks, and tab weights", "[lexicon]") {
    fs::path p = write_lexicon_file("cues.txt",
                                    "# comment line\n"
                                    "\n"
                                    "shocking\n"
                                    "traitor\t1.5\n"
                                    "sheeple\t2.0\r\n");
    Lexicon lex = Lexicon::load(p);
    REQUIRE(lex.name() == "cues");
    REQUIRE(lex.size() == 3);
    REQUIRE(lex.weight_of("shocking") == 1.0);
    REQUIRE(lex.weight_of("traitor") == 1.5);
    REQUIRE(lex.weight_of("sheeple") == 2.0);
    fs::remove(p);
}

TEST_CASE("lexicon load honors an explicit name", "[lexicon]") {
    fs::path p = write_lexicon_file("raw.txt", "calm\n");
    REQUIRE(Lexicon::load(p, "override").name() == "override");
    fs::remove(p);
}

TEST_CASE("lexicon load reports malformed weights with line numbers", "[lexicon]") {
    fs::path p = write_lexicon_file("bad.txt", "fine\nbroken\tnot-a-number\n");
    try {
        Lexicon::load(p);
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        REQUIRE(e.line() == 2);
    }
    fs::remove(p);
}

TEST_CASE("lexicon load fails on a missing file", "[lexicon]") {
    REQUIRE_THROWS_AS(Lexicon::load("/no/such/lexicon.txt"), Error);
}

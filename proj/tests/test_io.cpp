#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>
#include <sstream>

#include "favi/io.hpp"
#include "support/generators.hpp"

using namespace favi;

namespace {

std::vector<EvaluationSetting> from_csv(const std::string& text, const LoadOptions& options = {}) {
    std::istringstream in(text);
    return read_preferences(in, TableFormat::Csv, options, "test.csv");
}

std::vector<EvaluationSetting> from_jsonl(const std::string& text,
                                          const LoadOptions& options = {}) {
    std::istringstream in(text);
    return read_preferences(in, TableFormat::Jsonl, options, "test.jsonl");
}

}  // namespace

TEST_CASE("format names") {
    CHECK(table_format_from_string("csv") == TableFormat::Csv);
    CHECK(table_format_from_string("jsonl") == TableFormat::Jsonl);
    CHECK_FALSE(table_format_from_string("tsv").has_value());
}

TEST_CASE("a three-row file for one pair becomes one setting") {
    const auto settings = from_csv(
        "item_id,system_a,system_b,human,metric\n"
        "i1,a,b,+,+\n"
        "i2,a,b,=,-\n"
        "i3,a,b,-,-\n");
    REQUIRE(settings.size() == 1);
    CHECK(settings[0].pair() == SystemPair("a", "b"));
    CHECK(settings[0].size() == 3);
    CHECK(settings[0].items()[1].item_id == "i2");
    CHECK(settings[0].items()[1].metric == RatingLabel::Minus);
}

TEST_CASE("unknown label tokens report the line") {
    try {
        from_csv(
            "item_id,system_a,system_b,human,metric\n"
            "i1,a,b,+,+\n"
            "i2,a,b,++,-\n");
        FAIL("expected a parse error");
    } catch (const ParseError& e) {
        CHECK(e.line() == 3);
        CHECK(std::string(e.what()).find("++") != std::string::npos);
    }
}

TEST_CASE("csv and jsonl encodings load identically") {
    const auto csv = from_csv(
        "item_id,system_a,system_b,human,metric\n"
        "i1,a,b,+,=\n"
        "i2,a,b,-,-\n"
        "i1,a,c,+,+\n");
    const auto jsonl = from_jsonl(
        R"({"item_id":"i1","system_a":"a","system_b":"b","human":"+","metric":"="})"
        "\n"
        R"({"item_id":"i2","system_a":"a","system_b":"b","human":"-","metric":"-"})"
        "\n"
        R"({"item_id":"i1","system_a":"a","system_b":"c","human":"+","metric":"+"})"
        "\n");
    CHECK(csv == jsonl);
    REQUIRE(csv.size() == 2);
}

TEST_CASE("round trips preserve settings in both formats") {
    std::mt19937_64 rng(808);
    std::vector<EvaluationSetting> settings;
    settings.push_back(EvaluationSetting::from_confusion(
        SystemPair("m1", "m2"), testgen::random_confusion(rng, 6)));
    settings.push_back(EvaluationSetting::from_confusion(
        SystemPair("m1", "m3"), testgen::random_confusion(rng, 6)));
    settings.push_back(EvaluationSetting(
        SystemPair("quoted,system", "other\"system"),
        {{"item,with,commas", RatingLabel::Plus, RatingLabel::Minus},
         {"item\"quoted\"", RatingLabel::Equal, RatingLabel::Equal}}));

    for (TableFormat format : {TableFormat::Csv, TableFormat::Jsonl}) {
        std::ostringstream out;
        write_preferences(out, settings, format);
        std::istringstream in(out.str());
        const auto reloaded = read_preferences(in, format, {}, "roundtrip");
        CHECK(reloaded == settings);  // writer order matches sorted order here
    }
}

TEST_CASE("mixed orderings conflict unless symmetrization is on") {
    const std::string text =
        "item_id,system_a,system_b,human,metric\n"
        "i1,a,b,+,=\n"
        "i2,b,a,-,+\n";
    CHECK_THROWS_AS(from_csv(text), OrderingConflict);

    const auto folded = from_csv(text, LoadOptions{.symmetrize_orderings = true});
    REQUIRE(folded.size() == 1);
    CHECK(folded[0].pair() == SystemPair("a", "b"));
    REQUIRE(folded[0].size() == 2);
    CHECK(folded[0].items()[0].human == RatingLabel::Plus);
    CHECK(folded[0].items()[1].human == RatingLabel::Plus);   // inverted from '-'
    CHECK(folded[0].items()[1].metric == RatingLabel::Minus); // inverted from '+'
}

TEST_CASE("same item twice for one pair is an error") {
    CHECK_THROWS_AS(from_csv("item_id,system_a,system_b,human,metric\n"
                             "i1,a,b,+,=\n"
                             "i1,a,b,+,=\n"),
                    ParseError);
    // Also when the duplicate arrives via folding.
    CHECK_THROWS_AS(from_csv("item_id,system_a,system_b,human,metric\n"
                             "i1,a,b,+,=\n"
                             "i1,b,a,-,=\n",
                             LoadOptions{.symmetrize_orderings = true}),
                    ParseError);
}

TEST_CASE("structural csv errors") {
    CHECK_THROWS_AS(from_csv(""), ParseError);
    CHECK_THROWS_AS(from_csv("item_id,system_a,human,metric\ni1,a,+,=\n"), ParseError);
    CHECK_THROWS_AS(from_csv("item_id,system_a,system_b,human,metric\ni1,a,b,+\n"), ParseError);
    CHECK_THROWS_AS(from_csv("item_id,system_a,system_b,human,metric\ni1,a,a,+,=\n"),
                    ParseError);
    CHECK_THROWS_AS(from_csv("item_id,system_a,system_b,human,metric\n\"i1,a,b,+,=\n"),
                    ParseError);
    CHECK_THROWS_AS(from_jsonl("{not json}\n"), ParseError);
    CHECK_THROWS_AS(from_jsonl("[1,2,3]\n"), ParseError);
}

TEST_CASE("blank lines and trailing carriage returns are tolerated") {
    const auto settings = from_csv(
        "item_id,system_a,system_b,human,metric\r\n"
        "i1,a,b,+,+\r\n"
        "\r\n"
        "i2,a,b,=,=\r\n");
    REQUIRE(settings.size() == 1);
    CHECK(settings[0].size() == 2);
}

TEST_CASE("scalar scores average multiple raters") {
    std::istringstream in(
        "item_id,system_id,rater_id,score\n"
        "i1,a,r1,2\n"
        "i1,a,r2,4\n"
        "i1,b,r1,1.5\n");
    const ScalarRatingTable table = read_scalars(in, TableFormat::Csv, "scores.csv");
    CHECK(table.at("i1", "a") == 3.0);
    CHECK(table.at("i1", "b") == 1.5);
}

TEST_CASE("rater column is optional") {
    std::istringstream in(
        "item_id,system_id,score\n"
        "i1,a,0.25\n");
    const ScalarRatingTable table = read_scalars(in, TableFormat::Csv, "scores.csv");
    CHECK(table.at("i1", "a") == 0.25);

    std::istringstream jsonl(R"({"item_id":"i1","system_id":"a","score":0.5})" "\n");
    CHECK(read_scalars(jsonl, TableFormat::Jsonl, "scores.jsonl").at("i1", "a") == 0.5);
}

TEST_CASE("scalar ingestion errors") {
    std::istringstream duplicate(
        "item_id,system_id,rater_id,score\n"
        "i1,a,r1,2\n"
        "i1,a,r1,4\n");
    CHECK_THROWS_AS(read_scalars(duplicate, TableFormat::Csv, "s.csv"), ParseError);

    std::istringstream non_finite(
        "item_id,system_id,score\n"
        "i1,a,inf\n");
    CHECK_THROWS_AS(read_scalars(non_finite, TableFormat::Csv, "s.csv"), InvalidScore);

    std::istringstream garbage(
        "item_id,system_id,score\n"
        "i1,a,abc\n");
    CHECK_THROWS_AS(read_scalars(garbage, TableFormat::Csv, "s.csv"), ParseError);
}

TEST_CASE("a summarization-shaped table has the expected size") {
    std::ostringstream text;
    text << "item_id,system_id,rater_id,score\n";
    for (int item = 0; item < 100; ++item) {
        for (int system = 0; system < 16; ++system) {
            for (int rater = 0; rater < 3; ++rater) {
                text << "i" << item << ",m" << system << ",r" << rater << ","
                     << (item + system + rater) % 5 << "\n";
            }
        }
    }
    std::istringstream in(text.str());
    const ScalarRatingTable table = read_scalars(in, TableFormat::Csv, "summ.csv");
    CHECK(table.size() == 1600);
    CHECK(table.systems().size() == 16);
    CHECK(table.items().size() == 100);
    // 16 systems offer C(16, 2) derivable pairs.
    const auto systems = table.systems();
    std::size_t pairs = 0;
    for (std::size_t a = 0; a < systems.size(); ++a) {
        for (std::size_t b = a + 1; b < systems.size(); ++b) {
            ++pairs;
        }
    }
    CHECK(pairs == 120);
}

TEST_CASE("human labels load without a metric column") {
    std::istringstream in(
        "item_id,system_a,system_b,human\n"
        "i1,a,b,+\n"
        "i2,a,b,=\n");
    const auto labels = read_human_labels(in, TableFormat::Csv, {}, "human.csv");
    REQUIRE(labels.size() == 1);
    CHECK(labels[0].pair == SystemPair("a", "b"));
    CHECK(labels[0].items.size() == 2);
    CHECK(labels[0].items[1].second == RatingLabel::Equal);
}

TEST_CASE("judge requests load from jsonl") {
    std::istringstream in(
        R"({"item_id":"i1","system_a":"a","system_b":"b","source":"s","candidate_a":"x","candidate_b":"y","human":"+"})"
        "\n");
    const auto rows = read_judge_requests(in, "req.jsonl");
    REQUIRE(rows.size() == 1);
    CHECK(rows[0].request.pair == SystemPair("a", "b"));
    CHECK(rows[0].human == RatingLabel::Plus);

    std::istringstream self_pair(
        R"({"item_id":"i1","system_a":"a","system_b":"a","source":"s","candidate_a":"x","candidate_b":"y","human":"+"})"
        "\n");
    CHECK_THROWS_AS(read_judge_requests(self_pair, "req.jsonl"), ParseError);

    std::istringstream incomplete(R"({"item_id":"i1"})" "\n");
    CHECK_THROWS_AS(read_judge_requests(incomplete, "req.jsonl"), ParseError);
}

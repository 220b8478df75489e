#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <limits>
#include <random>
#include <sstream>

#include "favi/report.hpp"
#include "favi/scores.hpp"
#include "support/generators.hpp"

using namespace favi;

namespace {

const ConfusionMatrix kC5({{{360, 180, 60}, {20, 40, 40}, {90, 90, 120}}});
const ConfusionMatrix kDiagonal({{{4, 0, 0}, {0, 4, 0}, {0, 0, 4}}});

struct TempDir {
    TempDir() {
        static std::mt19937_64 rng(std::random_device{}());
        path = std::filesystem::temp_directory_path() /
               ("favi-report-test-" + std::to_string(rng()));
        std::filesystem::create_directories(path);
    }
    ~TempDir() { std::filesystem::remove_all(path); }

    std::filesystem::path path;
};

void write_file(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::trunc | std::ios::binary);
    out << text;
}

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream out;
    out << in.rdbuf();
    return out.str();
}

std::string c5_preferences_csv() {
    std::ostringstream out;
    const EvaluationSetting setting =
        EvaluationSetting::from_confusion(SystemPair("sysA", "sysB"), kC5);
    write_preferences(out, std::vector<EvaluationSetting>{setting}, TableFormat::Csv);
    return out.str();
}

}  // namespace

TEST_CASE("pair metrics carry the worked example values") {
    const std::vector<EvaluationSetting> settings{
        EvaluationSetting::from_confusion(SystemPair("sysA", "sysB"), kC5)};
    const nlohmann::json pairs = pair_metrics_json(settings);
    REQUIRE(pairs.size() == 1);
    const nlohmann::json& entry = pairs[0];
    CHECK(entry.at("first") == "sysA");
    CHECK(entry.at("items") == 1000);
    CHECK(entry.at("favi").get<double>() == doctest::Approx(-50.0 / 480.0).epsilon(1e-12));
    CHECK(entry.at("sample_accuracy").get<double>() == doctest::Approx(0.52).epsilon(1e-12));
    CHECK(entry.at("no_errors") == false);
    CHECK(entry.at("total_error") == 480);
    CHECK(entry.at("margin_delta") == -50);
    CHECK(entry.at("human_outcome") == nlohmann::json::array({600, 100, 300}));
    CHECK(entry.at("metric_outcome") == nlohmann::json::array({470, 310, 220}));

    const std::string serialized = to_deterministic_json(pairs);
    CHECK(serialized.find("-0.104166666667") != std::string::npos);
    CHECK(serialized.find("0.52") != std::string::npos);
}

TEST_CASE("error-free pairs serialize a null score and matching DAGs") {
    const std::vector<EvaluationSetting> settings{
        EvaluationSetting::from_confusion(SystemPair("a", "b"), kDiagonal)};
    const nlohmann::json report = build_report(settings, 0.05);
    CHECK(report.at("pairs")[0].at("favi").is_null());
    CHECK(report.at("pairs")[0].at("no_errors") == true);
    CHECK(report.at("dags").at("human") == report.at("dags").at("metric"));

    const DagPair dags = build_ranking_dags(settings, 0.05);
    CHECK(render_dot(dags.human) == render_dot(dags.metric));
}

TEST_CASE("aggregates fold pair scores together") {
    // a beats c through the metric only; b-c error free.
    const ConfusionMatrix plus_one({{{3, 0, 0}, {1, 2, 0}, {0, 0, 3}}});
    const std::vector<EvaluationSetting> settings{
        EvaluationSetting::from_confusion(SystemPair("a", "b"), kC5),
        EvaluationSetting::from_confusion(SystemPair("a", "c"), plus_one),
        EvaluationSetting::from_confusion(SystemPair("b", "c"), kDiagonal),
    };
    const nlohmann::json aggregates = aggregates_json(settings);
    CHECK(aggregates.at("favi_pairs_scored") == 2);
    CHECK(aggregates.at("favi_pairs_absent") == 1);
    CHECK(aggregates.at("pair_set_complete") == true);
    const double mean = (50.0 / 480.0 + 1.0) / 2.0;
    CHECK(aggregates.at("abs_favi_mean").get<double>() == doctest::Approx(mean).epsilon(1e-12));
    CHECK(aggregates.at("per_system_favi").size() == 3);
    CHECK(aggregates.at("per_system_favi")[0].at("system") == "a");

    // Incomplete pair coverage turns the system-level score off.
    const std::vector<EvaluationSetting> incomplete{
        EvaluationSetting::from_confusion(SystemPair("a", "b"), kC5),
        EvaluationSetting::from_confusion(SystemPair("c", "d"), kC5),
    };
    const nlohmann::json partial = aggregates_json(incomplete);
    CHECK(partial.at("system_sign_accuracy").is_null());
    CHECK(partial.at("pair_set_complete") == false);
}

TEST_CASE("deterministic serialization formatting") {
    nlohmann::json doc;
    doc["zeta"] = 0.52;
    doc["alpha"] = -50.0 / 480.0;
    doc["count"] = 42;
    doc["flag"] = true;
    doc["none"] = nullptr;
    doc["text"] = "line\nbreak\t\"quoted\"";
    doc["list"] = nlohmann::json::array({1.0, 2.5});
    const std::string serialized = to_deterministic_json(doc);
    // Keys come out sorted; floats use at most 12 significant digits.
    CHECK(serialized.find("\"alpha\"") < serialized.find("\"count\""));
    CHECK(serialized.find("\"count\"") < serialized.find("\"zeta\""));
    CHECK(serialized.find("-0.104166666667") != std::string::npos);
    CHECK(serialized.find("0.52") != std::string::npos);
    CHECK(serialized.find("\\n") != std::string::npos);
    CHECK(serialized.find("\\\"quoted\\\"") != std::string::npos);
    CHECK(to_deterministic_json(doc) == serialized);

    nlohmann::json bad;
    bad["oops"] = std::numeric_limits<double>::infinity();
    CHECK_THROWS_AS(to_deterministic_json(bad), InvalidInput);
}

TEST_CASE("full report runs are byte stable") {
    TempDir dir;
    const auto input = dir.path / "prefs.csv";
    write_file(input, c5_preferences_csv());

    ReportConfig config;
    config.preferences = input;
    config.format = TableFormat::Csv;
    config.dot_dir = dir.path / "dots";

    const std::string first = to_deterministic_json(run_report(config));
    const std::string first_human = read_file(*config.dot_dir / "human.gv");
    const std::string first_metric = read_file(*config.dot_dir / "metric.gv");

    const std::string second = to_deterministic_json(run_report(config));
    CHECK(first == second);
    CHECK(read_file(*config.dot_dir / "human.gv") == first_human);
    CHECK(read_file(*config.dot_dir / "metric.gv") == first_metric);

    CHECK(first.find("\"schema_version\": 1") != std::string::npos);
    CHECK(first.find("-0.104166666667") != std::string::npos);
    CHECK(first_human.starts_with("digraph {\n"));
    CHECK(first_human.find("\"sysA\"") != std::string::npos);
}

TEST_CASE("reports can derive their settings from scalar scores") {
    TempDir dir;
    const auto scores = dir.path / "scores.csv";
    const auto human = dir.path / "human.csv";
    write_file(scores,
               "item_id,system_id,score\n"
               "i1,a,0.9\n"
               "i1,b,0.3\n"
               "i2,a,0.5\n"
               "i2,b,0.45\n"
               "i3,a,0.1\n"
               "i3,b,0.4\n");
    write_file(human,
               "item_id,system_a,system_b,human\n"
               "i1,a,b,+\n"
               "i2,a,b,=\n"
               "i3,a,b,-\n");

    ReportConfig config;
    config.scalar_scores = scores;
    config.human_labels = human;
    config.format = TableFormat::Csv;
    config.margins.kind = MarginsPolicy::Kind::Optimize;

    const nlohmann::json report = run_report(config);
    REQUIRE(report.at("pairs").size() == 1);
    const nlohmann::json& entry = report.at("pairs")[0];
    REQUIRE(entry.contains("margins"));
    CHECK(entry.at("margins").at("eps_left").get<double>() >= 0.0);
    // The optimized band recovers every human label here.
    CHECK(entry.at("sample_accuracy").get<double>() == doctest::Approx(1.0));

    ReportConfig bad;
    CHECK_THROWS_AS(run_report(bad), InvalidInput);
    bad.preferences = "x.csv";
    bad.scalar_scores = scores;
    CHECK_THROWS_AS(run_report(bad), InvalidInput);
}

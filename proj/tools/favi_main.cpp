// favi: favoritism analysis for automated preference metrics.
//
// Subcommands: score, rank, derive, analyze, judge, report.
// Exit codes: 0 success, 1 usage error, 2 data error.

#include <CLI11.hpp>

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "favi/analysis.hpp"
#include "favi/io.hpp"
#include "favi/report.hpp"
#include "favi/scores.hpp"

#include "http_transport.hpp"

namespace {

using favi::TableFormat;
using nlohmann::json;

struct CommonIo {
    std::string input;
    std::string format = "csv";
    std::string out;
    bool symmetrize = false;
};

void add_common_io(CLI::App& cmd, CommonIo& io, bool with_symmetrize = true) {
    cmd.add_option("--input,-i", io.input, "Preference ratings file")->required();
    cmd.add_option("--format,-f", io.format, "Input format: csv or jsonl")
        ->check(CLI::IsMember({"csv", "jsonl"}));
    cmd.add_option("--out,-o", io.out, "Output path (defaults to stdout)");
    if (with_symmetrize) {
        cmd.add_flag("--symmetrize", io.symmetrize,
                     "Fold reversed pair orderings instead of rejecting them");
    }
}

TableFormat parse_format(const std::string& name) {
    return *favi::table_format_from_string(name);
}

favi::LoadOptions load_options(const CommonIo& io) {
    return favi::LoadOptions{.symmetrize_orderings = io.symmetrize};
}

std::vector<favi::EvaluationSetting> load_settings(const CommonIo& io) {
    auto settings = favi::load_preferences(io.input, parse_format(io.format), load_options(io));
    if (settings.empty()) {
        throw favi::EmptySetting("'" + io.input + "' contains no ratings");
    }
    return settings;
}

void emit(const std::string& out_path, const std::string& text) {
    if (out_path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(out_path, std::ios::trunc | std::ios::binary);
    if (!out) {
        throw favi::InvalidInput("cannot write '" + out_path + "'");
    }
    out << text;
}

void emit_json(const std::string& out_path, const json& document) {
    emit(out_path, favi::to_deterministic_json(document));
}

// ---------------------------------------------------------------------------
// score / analyze / rank
// ---------------------------------------------------------------------------

int run_score(const CommonIo& io) {
    const auto settings = load_settings(io);
    emit_json(io.out, json{{"schema_version", favi::kReportSchemaVersion},
                           {"pairs", favi::pair_metrics_json(settings)}});
    return 0;
}

int run_analyze(const CommonIo& io, const std::string& reversed_path) {
    const auto settings = load_settings(io);
    json document{{"schema_version", favi::kReportSchemaVersion},
                  {"aggregates", favi::aggregates_json(settings)}};

    if (!reversed_path.empty()) {
        // Reversed reruns arrive with swapped pairs; compare each pair's
        // metric labels after inverting the rerun into place.
        const auto reversed =
            favi::load_preferences(reversed_path, parse_format(io.format), load_options(io));
        std::map<favi::SystemPair, const favi::EvaluationSetting*> by_pair;
        for (const auto& setting : reversed) {
            by_pair.emplace(setting.pair(), &setting);
        }
        json consistency = json::array();
        for (const auto& setting : settings) {
            const auto it = by_pair.find(setting.pair().swapped());
            if (it == by_pair.end()) {
                throw favi::InvalidInput("no reversed run for pair (" + setting.pair().first() +
                                         ", " + setting.pair().second() + ")");
            }
            std::vector<std::pair<std::string, favi::RatingLabel>> original;
            std::vector<std::pair<std::string, favi::RatingLabel>> rerun;
            for (const auto& item : setting.items()) {
                original.emplace_back(item.item_id, item.metric);
            }
            for (const auto& item : it->second->items()) {
                rerun.emplace_back(item.item_id, item.metric);
            }
            const favi::ReversalConsistency result =
                favi::reversal_consistency(original, rerun);
            json rows = json::array();
            for (const auto& row : result.confusion.counts()) {
                rows.push_back(json::array({row[0], row[1], row[2]}));
            }
            consistency.push_back(json{
                {"first", setting.pair().first()},
                {"second", setting.pair().second()},
                {"confusion", std::move(rows)},
                {"accuracy", result.accuracy},
                {"alpha", result.alpha ? json(*result.alpha) : json(nullptr)},
            });
        }
        document["reversal_consistency"] = std::move(consistency);
    }
    emit_json(io.out, document);
    return 0;
}

int run_rank(const CommonIo& io, double alpha, const std::string& dot_dir) {
    const auto settings = load_settings(io);
    const favi::DagPair dags = favi::build_ranking_dags(settings, alpha);

    const auto graph_json = [](const favi::RankingGraph& graph) {
        json nodes = json::array();
        for (const auto& node : graph.nodes()) {
            nodes.push_back(node);
        }
        json edges = json::array();
        for (const auto& edge : graph.edges()) {
            edges.push_back(json::array({edge.winner, edge.loser}));
        }
        return json{{"nodes", std::move(nodes)}, {"edges", std::move(edges)}};
    };
    json document{{"schema_version", favi::kReportSchemaVersion},
                  {"alpha", alpha},
                  {"human", graph_json(dags.human)},
                  {"metric", graph_json(dags.metric)}};

    if (!dot_dir.empty()) {
        std::filesystem::create_directories(dot_dir);
        emit((std::filesystem::path(dot_dir) / "human.gv").string(),
             favi::render_dot(dags.human));
        emit((std::filesystem::path(dot_dir) / "metric.gv").string(),
             favi::render_dot(dags.metric));
    }
    emit_json(io.out, document);
    return 0;
}

// ---------------------------------------------------------------------------
// derive
// ---------------------------------------------------------------------------

struct DeriveArgs {
    std::string scores;
    std::string human;
    std::string format = "csv";
    std::string out;
    std::string emit_format = "csv";
    std::string summary_out;
    bool symmetrize = false;
    bool optimize = false;
    std::string objective = "trace";
    double eps_left = 0.0;
    double eps_right = 0.0;
};

int run_derive(const DeriveArgs& args) {
    const TableFormat format = parse_format(args.format);
    const favi::ScalarRatingTable table = favi::load_scalars(args.scores, format);
    const auto labels = favi::load_human_labels(
        args.human, format, favi::LoadOptions{.symmetrize_orderings = args.symmetrize});
    if (labels.empty()) {
        throw favi::EmptySetting("'" + args.human + "' contains no ratings");
    }

    std::vector<favi::EvaluationSetting> settings;
    json summary = json::array();
    for (const favi::HumanLabels& human : labels) {
        favi::MarginPair margins(args.eps_left, args.eps_right);
        if (args.optimize) {
            std::vector<favi::RatingLabel> reference;
            std::vector<std::pair<double, double>> scores;
            for (const auto& [item_id, label] : human.items) {
                reference.push_back(label);
                scores.emplace_back(table.at(item_id, human.pair.first()),
                                    table.at(item_id, human.pair.second()));
            }
            margins = favi::optimize_margins(reference, scores,
                                             args.objective == "mixture-trace"
                                                 ? favi::MarginObjective::MixtureTrace
                                                 : favi::MarginObjective::CountTrace);
        }
        settings.push_back(favi::derive_setting(table, human.pair, human.items, margins));
        summary.push_back(json{{"first", human.pair.first()},
                               {"second", human.pair.second()},
                               {"items", human.items.size()},
                               {"eps_left", margins.eps_left()},
                               {"eps_right", margins.eps_right()}});
    }

    std::ofstream out(args.out, std::ios::trunc | std::ios::binary);
    if (!out) {
        throw favi::InvalidInput("cannot write '" + args.out + "'");
    }
    favi::write_preferences(out, settings, parse_format(args.emit_format));

    emit_json(args.summary_out,
              json{{"schema_version", favi::kReportSchemaVersion}, {"pairs", summary}});
    return 0;
}

// ---------------------------------------------------------------------------
// judge
// ---------------------------------------------------------------------------

struct JudgeArgs {
    std::string requests;
    std::string replay_cache;
    std::string out;
    std::string emit_format = "csv";
    std::string live_url;
    std::string live_path = "/v1/chat/completions";
    std::string model = "gpt-3.5-turbo-0613";
    std::string api_key_env = "FAVI_JUDGE_API_KEY";
    double temperature = std::numeric_limits<double>::quiet_NaN();
};

int run_judge(const JudgeArgs& args) {
    const auto rows = favi::load_judge_requests(args.requests);
    if (rows.empty()) {
        throw favi::EmptySetting("'" + args.requests + "' contains no requests");
    }

    std::unique_ptr<favi::JudgeTransport> live;
    if (!args.live_url.empty()) {
        favi::tools::HttpJudgeOptions options;
        options.base_url = args.live_url;
        options.path = args.live_path;
        options.model = args.model;
        if (const char* key = std::getenv(args.api_key_env.c_str())) {
            options.api_key = key;
        }
        if (!std::isnan(args.temperature)) {
            options.temperature = args.temperature;
        }
        live = std::make_unique<favi::tools::HttpJudgeTransport>(std::move(options));
    }
    favi::CachingTransport transport{favi::ReplayCache(args.replay_cache), std::move(live)};

    std::vector<favi::JudgeRequest> requests;
    requests.reserve(rows.size());
    for (const favi::JudgeItemRow& row : rows) {
        requests.push_back(row.request);
    }
    const std::vector<favi::RatingLabel> metric_labels =
        favi::judge_pair_over_testset(transport, requests);

    // Pair up with the human labels, one setting per ordered pair.
    std::map<favi::SystemPair, std::vector<favi::RatedItem>> grouped;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        grouped[rows[i].request.pair].push_back(
            {rows[i].request.item_id, rows[i].human, metric_labels[i]});
    }
    std::vector<favi::EvaluationSetting> settings;
    settings.reserve(grouped.size());
    for (auto& [pair, items] : grouped) {
        settings.emplace_back(pair, std::move(items));
    }

    if (args.out.empty()) {
        favi::write_preferences(std::cout, settings, parse_format(args.emit_format));
    } else {
        favi::save_preferences(args.out, settings, parse_format(args.emit_format));
    }
    return 0;
}

// ---------------------------------------------------------------------------
// report
// ---------------------------------------------------------------------------

struct ReportArgs {
    CommonIo io;
    std::string scalar_scores;
    std::string human_labels;
    double alpha = 0.05;
    std::string dot_dir;
    bool optimize = false;
    std::string objective = "trace";
    std::optional<double> eps_left;
    std::optional<double> eps_right;
};

int run_full_report(const ReportArgs& args) {
    favi::ReportConfig config;
    config.preferences = args.io.input;
    config.scalar_scores = args.scalar_scores;
    config.human_labels = args.human_labels;
    config.format = parse_format(args.io.format);
    config.load.symmetrize_orderings = args.io.symmetrize;
    config.alpha = args.alpha;
    if (!args.dot_dir.empty()) {
        config.dot_dir = args.dot_dir;
    }
    if (args.optimize) {
        config.margins.kind = favi::MarginsPolicy::Kind::Optimize;
        config.margins.objective = args.objective == "mixture-trace"
                                       ? favi::MarginObjective::MixtureTrace
                                       : favi::MarginObjective::CountTrace;
    } else if (args.eps_left || args.eps_right) {
        config.margins.kind = favi::MarginsPolicy::Kind::Fixed;
        config.margins.fixed =
            favi::MarginPair(args.eps_left.value_or(0.0), args.eps_right.value_or(0.0));
    }
    emit_json(args.io.out, favi::run_report(config));
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Favoritism analysis for automated preference metrics"};
    app.require_subcommand(1);

    CommonIo score_io;
    CLI::App* score = app.add_subcommand("score", "Per-pair confusion and favoritism metrics");
    add_common_io(*score, score_io);

    CommonIo rank_io;
    double rank_alpha = 0.05;
    std::string rank_dot;
    CLI::App* rank = app.add_subcommand("rank", "Sign-test ranking DAGs for human and metric");
    add_common_io(*rank, rank_io);
    rank->add_option("--alpha", rank_alpha, "Significance level for the sign test")
        ->check(CLI::Range(0.0, 1.0));
    rank->add_option("--dot", rank_dot, "Directory for human.gv and metric.gv");

    CommonIo analyze_io;
    std::string analyze_reversed;
    CLI::App* analyze = app.add_subcommand("analyze", "Cross-pair favoritism aggregates");
    add_common_io(*analyze, analyze_io);
    analyze->add_option("--reversed", analyze_reversed,
                        "Rerun with flipped pair order, for consistency analysis");

    DeriveArgs derive_args;
    CLI::App* derive =
        app.add_subcommand("derive", "Derive preference labels from scalar scores");
    derive->add_option("--scores", derive_args.scores, "Scalar scores file")->required();
    derive->add_option("--human", derive_args.human, "Human labels file")->required();
    derive->add_option("--format,-f", derive_args.format, "Input format: csv or jsonl")
        ->check(CLI::IsMember({"csv", "jsonl"}));
    derive->add_option("--out,-o", derive_args.out, "Preferences file to write")->required();
    derive->add_option("--emit", derive_args.emit_format, "Output format: csv or jsonl")
        ->check(CLI::IsMember({"csv", "jsonl"}));
    derive->add_option("--summary-out", derive_args.summary_out,
                       "Margin summary JSON path (defaults to stdout)");
    derive->add_flag("--symmetrize", derive_args.symmetrize,
                     "Fold reversed pair orderings instead of rejecting them");
    derive->add_flag("--optimize-margins", derive_args.optimize,
                     "Search draw margins maximizing the confusion diagonal");
    derive->add_option("--margin-objective", derive_args.objective,
                       "Diagonal to maximize: trace or mixture-trace")
        ->check(CLI::IsMember({"trace", "mixture-trace"}));
    derive->add_option("--eps-left", derive_args.eps_left, "Fixed left draw margin")
        ->check(CLI::NonNegativeNumber);
    derive->add_option("--eps-right", derive_args.eps_right, "Fixed right draw margin")
        ->check(CLI::NonNegativeNumber);

    JudgeArgs judge_args;
    CLI::App* judge = app.add_subcommand("judge", "LLM-as-judge preference adapter");
    judge->add_option("--requests", judge_args.requests, "Judge requests JSONL file")
        ->required();
    judge->add_option("--replay-cache", judge_args.replay_cache,
                      "Directory of cached judge responses")
        ->required();
    judge->add_option("--out,-o", judge_args.out, "Preferences file to write");
    judge->add_option("--emit", judge_args.emit_format, "Output format: csv or jsonl")
        ->check(CLI::IsMember({"csv", "jsonl"}));
    judge->add_option("--live-url", judge_args.live_url,
                      "Base URL of a live provider for cache misses");
    judge->add_option("--live-path", judge_args.live_path, "Completion endpoint path");
    judge->add_option("--model", judge_args.model, "Provider model name");
    judge->add_option("--api-key-env", judge_args.api_key_env,
                      "Environment variable holding the API key");
    judge->add_option("--temperature", judge_args.temperature,
                      "Sampling temperature (provider default when unset)");

    ReportArgs report_args;
    CLI::App* report = app.add_subcommand("report", "Full report: pairs, aggregates and DAGs");
    report->add_option("--input,-i", report_args.io.input, "Preference ratings file");
    report->add_option("--scalars", report_args.scalar_scores,
                       "Scalar scores file (with --human instead of --input)");
    report->add_option("--human", report_args.human_labels, "Human labels file");
    report->add_option("--format,-f", report_args.io.format, "Input format: csv or jsonl")
        ->check(CLI::IsMember({"csv", "jsonl"}));
    report->add_option("--out,-o", report_args.io.out, "Output path (defaults to stdout)");
    report->add_flag("--symmetrize", report_args.io.symmetrize,
                     "Fold reversed pair orderings instead of rejecting them");
    report->add_option("--alpha", report_args.alpha, "Significance level for the sign test")
        ->check(CLI::Range(0.0, 1.0));
    report->add_option("--dot", report_args.dot_dir, "Directory for human.gv and metric.gv");
    report->add_flag("--optimize-margins", report_args.optimize,
                     "Search draw margins when deriving from scalars");
    report->add_option("--margin-objective", report_args.objective,
                       "Diagonal to maximize: trace or mixture-trace")
        ->check(CLI::IsMember({"trace", "mixture-trace"}));
    double report_eps_left = -1.0;
    double report_eps_right = -1.0;
    report->add_option("--eps-left", report_eps_left, "Fixed left draw margin")
        ->check(CLI::NonNegativeNumber);
    report->add_option("--eps-right", report_eps_right, "Fixed right draw margin")
        ->check(CLI::NonNegativeNumber);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1;
    }

    try {
        if (*score) {
            return run_score(score_io);
        }
        if (*rank) {
            return run_rank(rank_io, rank_alpha, rank_dot);
        }
        if (*analyze) {
            return run_analyze(analyze_io, analyze_reversed);
        }
        if (*derive) {
            return run_derive(derive_args);
        }
        if (*judge) {
            return run_judge(judge_args);
        }
        if (*report) {
            if (report_eps_left >= 0.0) {
                report_args.eps_left = report_eps_left;
            }
            if (report_eps_right >= 0.0) {
                report_args.eps_right = report_eps_right;
            }
            return run_full_report(report_args);
        }
    } catch (const favi::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 2;
    }
    return 1;
}

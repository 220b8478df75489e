#include "favi/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>

#include "favi/analysis.hpp"
#include "favi/scores.hpp"

namespace favi {

namespace {

using nlohmann::json;

json outcome_json(const Outcome& outcome) {
    return json::array({outcome.plus(), outcome.equal(), outcome.minus()});
}

json confusion_json(const ConfusionMatrix& matrix) {
    json rows = json::array();
    for (const auto& row : matrix.counts()) {
        rows.push_back(json::array({row[0], row[1], row[2]}));
    }
    return rows;
}

json quartiles_json(const Quartiles& q) {
    return json{{"min", q.min}, {"q1", q.q1}, {"median", q.median}, {"q3", q.q3}, {"max", q.max}};
}

json graph_json(const RankingGraph& graph) {
    json nodes = json::array();
    for (const std::string& node : graph.nodes()) {
        nodes.push_back(node);
    }
    json edges = json::array();
    for (const RankingEdge& edge : graph.edges()) {
        edges.push_back(json::array({edge.winner, edge.loser}));
    }
    return json{{"nodes", std::move(nodes)}, {"edges", std::move(edges)}};
}

std::vector<EvaluationSetting> sorted_by_pair(std::vector<EvaluationSetting> settings) {
    std::sort(settings.begin(), settings.end(),
              [](const EvaluationSetting& a, const EvaluationSetting& b) {
                  return a.pair() < b.pair();
              });
    return settings;
}

}  // namespace

ReportInputs load_report_inputs(const ReportConfig& config) {
    const bool have_preferences = !config.preferences.empty();
    const bool have_scalars = !config.scalar_scores.empty() || !config.human_labels.empty();
    if (have_preferences == have_scalars) {
        throw InvalidInput(
            "configure either a preferences file or scalar scores plus human labels");
    }

    ReportInputs inputs;
    if (have_preferences) {
        inputs.settings = load_preferences(config.preferences, config.format, config.load);
    } else {
        if (config.scalar_scores.empty() || config.human_labels.empty()) {
            throw InvalidInput("deriving needs both scalar scores and human labels");
        }
        inputs.derived = true;
        const ScalarRatingTable table = load_scalars(config.scalar_scores, config.format);
        for (const HumanLabels& labels :
             load_human_labels(config.human_labels, config.format, config.load)) {
            MarginPair margins = config.margins.fixed;
            if (config.margins.kind == MarginsPolicy::Kind::Plain) {
                margins = MarginPair{};
            } else if (config.margins.kind == MarginsPolicy::Kind::Optimize) {
                std::vector<RatingLabel> human;
                std::vector<std::pair<double, double>> scores;
                human.reserve(labels.items.size());
                scores.reserve(labels.items.size());
                for (const auto& [item_id, label] : labels.items) {
                    human.push_back(label);
                    scores.emplace_back(table.at(item_id, labels.pair.first()),
                                        table.at(item_id, labels.pair.second()));
                }
                margins = optimize_margins(human, scores, config.margins.objective);
            }
            inputs.settings.push_back(derive_setting(table, labels.pair, labels.items, margins));
            inputs.margins.emplace(
                std::make_pair(labels.pair.first(), labels.pair.second()), margins);
        }
    }
    if (inputs.settings.empty()) {
        throw EmptySetting("input contains no ratings");
    }
    inputs.settings = sorted_by_pair(std::move(inputs.settings));
    return inputs;
}

nlohmann::json pair_metrics_json(const std::vector<EvaluationSetting>& settings) {
    json pairs = json::array();
    for (const EvaluationSetting& setting : sorted_by_pair(settings)) {
        const ConfusionMatrix confusion = confusion_from_setting(setting);
        const FaviResult favi = favi_score(confusion);
        json entry{
            {"first", setting.pair().first()},
            {"second", setting.pair().second()},
            {"items", setting.size()},
            {"confusion", confusion_json(confusion)},
            {"human_outcome", outcome_json(human_outcome(confusion))},
            {"metric_outcome", outcome_json(metric_outcome(confusion))},
            {"total_error", favi.total_error},
            {"margin_delta", favi.margin_delta},
            {"no_errors", favi.absent()},
            {"favi", favi.absent() ? json(nullptr) : json(*favi.value)},
            {"sample_accuracy", sample_sign_accuracy(confusion)},
            {"sign_agreement", system_sign_agreement(confusion)},
        };
        pairs.push_back(std::move(entry));
    }
    return pairs;
}

nlohmann::json aggregates_json(const std::vector<EvaluationSetting>& settings) {
    const std::vector<EvaluationSetting> sorted = sorted_by_pair(settings);

    std::vector<double> abs_favi;
    std::vector<double> sample_accuracy;
    std::vector<double> sign_agreement;
    std::size_t absent = 0;
    for (const EvaluationSetting& setting : sorted) {
        const ConfusionMatrix confusion = confusion_from_setting(setting);
        const FaviResult favi = favi_score(confusion);
        if (favi.absent()) {
            ++absent;
            continue;
        }
        abs_favi.push_back(std::abs(*favi.value));
        sample_accuracy.push_back(sample_sign_accuracy(confusion));
        sign_agreement.push_back(static_cast<double>(system_sign_agreement(confusion)));
    }

    json aggregates;
    aggregates["favi_pairs_scored"] = abs_favi.size();
    aggregates["favi_pairs_absent"] = absent;
    if (abs_favi.empty()) {
        aggregates["abs_favi_mean"] = nullptr;
        aggregates["abs_favi_stddev"] = nullptr;
    } else {
        double mean = 0.0;
        for (double v : abs_favi) {
            mean += v;
        }
        mean /= static_cast<double>(abs_favi.size());
        double variance = 0.0;
        for (double v : abs_favi) {
            variance += (v - mean) * (v - mean);
        }
        variance /= static_cast<double>(abs_favi.size());
        aggregates["abs_favi_mean"] = mean;
        aggregates["abs_favi_stddev"] = std::sqrt(variance);
    }

    try {
        aggregates["system_sign_accuracy"] = system_sign_accuracy(sorted);
        aggregates["pair_set_complete"] = true;
    } catch (const InconsistentPairSet&) {
        aggregates["system_sign_accuracy"] = nullptr;
        aggregates["pair_set_complete"] = false;
    }

    json summaries = json::array();
    for (const SystemFaviSummary& summary : per_system_favi(sorted)) {
        json entry{
            {"system", summary.system},
            {"values", summary.values},
            {"skipped", summary.skipped},
            {"quartiles",
             summary.quartiles ? quartiles_json(*summary.quartiles) : json(nullptr)},
        };
        summaries.push_back(std::move(entry));
    }
    aggregates["per_system_favi"] = std::move(summaries);

    const auto correlation = [&](const std::vector<double>& other) -> json {
        if (abs_favi.size() < 2) {
            return nullptr;
        }
        const auto rho = spearman_rho(abs_favi, other);
        return rho ? json(*rho) : json(nullptr);
    };
    aggregates["spearman_abs_favi_vs_sample_accuracy"] = correlation(sample_accuracy);
    aggregates["spearman_abs_favi_vs_sign_agreement"] = correlation(sign_agreement);
    return aggregates;
}

DagPair build_ranking_dags(const std::vector<EvaluationSetting>& settings, double alpha) {
    std::vector<std::pair<SystemPair, Outcome>> human;
    std::vector<std::pair<SystemPair, Outcome>> metric;
    human.reserve(settings.size());
    metric.reserve(settings.size());
    for (const EvaluationSetting& setting : sorted_by_pair(settings)) {
        human.emplace_back(setting.pair(), human_outcome(setting));
        metric.emplace_back(setting.pair(), metric_outcome(setting));
    }
    return {omit_transitive_edges(build_dag(human, alpha)),
            omit_transitive_edges(build_dag(metric, alpha))};
}

nlohmann::json build_report(const std::vector<EvaluationSetting>& settings, double alpha) {
    json report{
        {"schema_version", kReportSchemaVersion},
        {"alpha", alpha},
        {"pairs", pair_metrics_json(settings)},
        {"aggregates", aggregates_json(settings)},
    };
    const DagPair dags = build_ranking_dags(settings, alpha);
    report["dags"] = json{{"human", graph_json(dags.human)}, {"metric", graph_json(dags.metric)}};
    return report;
}

nlohmann::json run_report(const ReportConfig& config) {
    const ReportInputs inputs = load_report_inputs(config);
    json report = build_report(inputs.settings, config.alpha);

    if (inputs.derived) {
        for (json& entry : report["pairs"]) {
            const auto key = std::make_pair(entry["first"].get<std::string>(),
                                            entry["second"].get<std::string>());
            const auto it = inputs.margins.find(key);
            if (it != inputs.margins.end()) {
                entry["margins"] = json{{"eps_left", it->second.eps_left()},
                                        {"eps_right", it->second.eps_right()}};
            }
        }
    }

    if (config.dot_dir) {
        const DagPair dags = build_ranking_dags(inputs.settings, config.alpha);
        std::filesystem::create_directories(*config.dot_dir);
        for (const auto& [name, graph] :
             {std::make_pair("human.gv", &dags.human), std::make_pair("metric.gv", &dags.metric)}) {
            std::ofstream out(*config.dot_dir / name, std::ios::trunc | std::ios::binary);
            if (!out) {
                throw InvalidInput("cannot write DOT file in '" + config.dot_dir->string() + "'");
            }
            out << render_dot(*graph);
        }
    }
    return report;
}

namespace {

void write_escaped(std::string& out, const std::string& text) {
    out.push_back('"');
    for (unsigned char c : text) {
        switch (c) {
            case '"':
                out += "\\\"";
                break;
            case '\\':
                out += "\\\\";
                break;
            case '\n':
                out += "\\n";
                break;
            case '\r':
                out += "\\r";
                break;
            case '\t':
                out += "\\t";
                break;
            case '\b':
                out += "\\b";
                break;
            case '\f':
                out += "\\f";
                break;
            default:
                if (c < 0x20) {
                    char buf[8];
                    std::snprintf(buf, sizeof buf, "\\u%04x", c);
                    out += buf;
                } else {
                    out.push_back(static_cast<char>(c));
                }
        }
    }
    out.push_back('"');
}

void write_value(std::string& out, const json& value, int depth) {
    const std::string indent(static_cast<std::size_t>(depth) * 2, ' ');
    const std::string child_indent(static_cast<std::size_t>(depth + 1) * 2, ' ');
    switch (value.type()) {
        case json::value_t::null:
            out += "null";
            break;
        case json::value_t::boolean:
            out += value.get<bool>() ? "true" : "false";
            break;
        case json::value_t::number_integer:
            out += std::to_string(value.get<std::int64_t>());
            break;
        case json::value_t::number_unsigned:
            out += std::to_string(value.get<std::uint64_t>());
            break;
        case json::value_t::number_float: {
            const double v = value.get<double>();
            if (!std::isfinite(v)) {
                throw InvalidInput("report values must be finite");
            }
            char buf[64];
            std::snprintf(buf, sizeof buf, "%.12g", v);
            out += buf;
            break;
        }
        case json::value_t::string:
            write_escaped(out, value.get_ref<const std::string&>());
            break;
        case json::value_t::array: {
            if (value.empty()) {
                out += "[]";
                break;
            }
            out += "[\n";
            for (std::size_t i = 0; i < value.size(); ++i) {
                out += child_indent;
                write_value(out, value[i], depth + 1);
                if (i + 1 < value.size()) {
                    out += ",";
                }
                out += "\n";
            }
            out += indent + "]";
            break;
        }
        case json::value_t::object: {
            if (value.empty()) {
                out += "{}";
                break;
            }
            out += "{\n";
            std::size_t i = 0;
            for (const auto& [key, child] : value.items()) {
                out += child_indent;
                write_escaped(out, key);
                out += ": ";
                write_value(out, child, depth + 1);
                if (++i < value.size()) {
                    out += ",";
                }
                out += "\n";
            }
            out += indent + "}";
            break;
        }
        default:
            throw InvalidInput("unsupported JSON value in report");
    }
}

}  // namespace

std::string to_deterministic_json(const nlohmann::json& document) {
    std::string out;
    write_value(out, document, 0);
    out += "\n";
    return out;
}

}  // namespace favi

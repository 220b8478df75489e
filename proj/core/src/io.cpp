#include "favi/io.hpp"

#include <algorithm>
#include <cerrno>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include <nlohmann/json.hpp>

namespace favi {

namespace {

using nlohmann::json;

std::string strip_cr(std::string line) {
    if (!line.empty() && line.back() == '\r') {
        line.pop_back();
    }
    return line;
}

std::vector<std::string> split_csv_row(const std::string& line, const std::string& source,
                                       std::uint64_t line_no) {
    std::vector<std::string> fields;
    std::string current;
    bool in_quotes = false;
    bool field_was_quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char c = line[i];
        if (in_quotes) {
            if (c == '"') {
                if (i + 1 < line.size() && line[i + 1] == '"') {
                    current.push_back('"');
                    ++i;
                } else {
                    in_quotes = false;
                }
            } else {
                current.push_back(c);
            }
        } else if (c == '"' && current.empty() && !field_was_quoted) {
            in_quotes = true;
            field_was_quoted = true;
        } else if (c == ',') {
            fields.push_back(std::move(current));
            current.clear();
            field_was_quoted = false;
        } else {
            current.push_back(c);
        }
    }
    if (in_quotes) {
        throw ParseError(source, line_no, "unterminated quoted field");
    }
    fields.push_back(std::move(current));
    return fields;
}

std::string csv_escape(const std::string& field) {
    if (field.find_first_of(",\"\n\r") == std::string::npos) {
        return field;
    }
    std::string out = "\"";
    for (char c : field) {
        if (c == '"') {
            out.push_back('"');
        }
        out.push_back(c);
    }
    out.push_back('"');
    return out;
}

/// Header-indexed CSV reader over one stream.
class CsvTable {
public:
    CsvTable(std::istream& in, const std::string& source,
             const std::vector<std::string>& required_columns)
        : in_(in), source_(source) {
        std::string header_line;
        if (!std::getline(in_, header_line)) {
            throw ParseError(source_, 1, "missing header row");
        }
        const std::vector<std::string> names = split_csv_row(strip_cr(header_line), source_, 1);
        for (std::size_t i = 0; i < names.size(); ++i) {
            if (!columns_.emplace(names[i], i).second) {
                throw ParseError(source_, 1, "duplicate column '" + names[i] + "'");
            }
        }
        for (const std::string& name : required_columns) {
            if (!columns_.contains(name)) {
                throw ParseError(source_, 1, "missing required column '" + name + "'");
            }
        }
        line_no_ = 1;
    }

    bool next_row() {
        std::string line;
        while (std::getline(in_, line)) {
            ++line_no_;
            line = strip_cr(line);
            if (line.empty()) {
                continue;
            }
            row_ = split_csv_row(line, source_, line_no_);
            if (row_.size() != columns_.size()) {
                throw ParseError(source_, line_no_,
                                 "expected " + std::to_string(columns_.size()) + " fields, got " +
                                     std::to_string(row_.size()));
            }
            return true;
        }
        return false;
    }

    const std::string& field(const std::string& column) const {
        return row_[columns_.at(column)];
    }

    bool has_column(const std::string& column) const { return columns_.contains(column); }

    std::uint64_t line() const noexcept { return line_no_; }

private:
    std::istream& in_;
    std::string source_;
    std::map<std::string, std::size_t> columns_;
    std::vector<std::string> row_;
    std::uint64_t line_no_ = 0;
};

/// JSONL reader yielding one object per non-empty line.
class JsonlTable {
public:
    JsonlTable(std::istream& in, const std::string& source) : in_(in), source_(source) {}

    bool next_row() {
        std::string line;
        while (std::getline(in_, line)) {
            ++line_no_;
            line = strip_cr(line);
            if (line.empty()) {
                continue;
            }
            try {
                row_ = json::parse(line);
            } catch (const json::exception& e) {
                throw ParseError(source_, line_no_, std::string("bad JSON: ") + e.what());
            }
            if (!row_.is_object()) {
                throw ParseError(source_, line_no_, "each line must hold a JSON object");
            }
            return true;
        }
        return false;
    }

    std::string string_field(const std::string& key) const {
        if (!row_.contains(key) || !row_.at(key).is_string()) {
            throw ParseError(source_, line_no_, "missing string field '" + key + "'");
        }
        return row_.at(key).get<std::string>();
    }

    std::string optional_string_field(const std::string& key) const {
        if (!row_.contains(key)) {
            return "";
        }
        if (!row_.at(key).is_string()) {
            throw ParseError(source_, line_no_, "field '" + key + "' must be a string");
        }
        return row_.at(key).get<std::string>();
    }

    double number_field(const std::string& key) const {
        if (!row_.contains(key) || !row_.at(key).is_number()) {
            throw ParseError(source_, line_no_, "missing numeric field '" + key + "'");
        }
        return row_.at(key).get<double>();
    }

    std::uint64_t line() const noexcept { return line_no_; }

private:
    std::istream& in_;
    std::string source_;
    json row_;
    std::uint64_t line_no_ = 0;
};

RatingLabel parse_label(const std::string& token, const std::string& source,
                        std::uint64_t line_no) {
    const auto label = label_from_token(token);
    if (!label) {
        throw ParseError(source, line_no, "unknown label token '" + token + "'");
    }
    return *label;
}

double parse_number(const std::string& text, const std::string& source, std::uint64_t line_no) {
    errno = 0;
    char* end = nullptr;
    const double value = std::strtod(text.c_str(), &end);
    if (end == text.c_str() || *end != '\0') {
        throw ParseError(source, line_no, "bad number '" + text + "'");
    }
    return value;
}

void require_non_empty(const std::string& value, const char* what, const std::string& source,
                       std::uint64_t line_no) {
    if (value.empty()) {
        throw ParseError(source, line_no, std::string(what) + " must be non-empty");
    }
}

struct PreferenceRow {
    std::string item_id;
    std::string system_a;
    std::string system_b;
    RatingLabel human;
    RatingLabel metric;
    bool has_metric = true;
    std::uint64_t line = 0;
};

template <typename RowFn>
void for_each_preference_row(std::istream& in, TableFormat format, const std::string& source,
                             bool with_metric, RowFn&& fn) {
    if (format == TableFormat::Csv) {
        std::vector<std::string> required{"item_id", "system_a", "system_b", "human"};
        if (with_metric) {
            required.push_back("metric");
        }
        CsvTable table(in, source, required);
        while (table.next_row()) {
            PreferenceRow row;
            row.item_id = table.field("item_id");
            row.system_a = table.field("system_a");
            row.system_b = table.field("system_b");
            row.human = parse_label(table.field("human"), source, table.line());
            row.has_metric = with_metric;
            if (with_metric) {
                row.metric = parse_label(table.field("metric"), source, table.line());
            }
            row.line = table.line();
            fn(row);
        }
    } else {
        JsonlTable table(in, source);
        while (table.next_row()) {
            PreferenceRow row;
            row.item_id = table.string_field("item_id");
            row.system_a = table.string_field("system_a");
            row.system_b = table.string_field("system_b");
            row.human = parse_label(table.string_field("human"), source, table.line());
            row.has_metric = with_metric;
            if (with_metric) {
                row.metric = parse_label(table.string_field("metric"), source, table.line());
            }
            row.line = table.line();
            fn(row);
        }
    }
}

/// Groups preference-style rows by ordered pair, optionally folding
/// reversed orderings onto the lexicographically-first one.
class PairGrouper {
public:
    PairGrouper(const LoadOptions& options, const std::string& source)
        : options_(options), source_(source) {}

    void add(PreferenceRow row) {
        require_non_empty(row.item_id, "item_id", source_, row.line);
        require_non_empty(row.system_a, "system_a", source_, row.line);
        require_non_empty(row.system_b, "system_b", source_, row.line);
        if (row.system_a == row.system_b) {
            throw ParseError(source_, row.line,
                             "system_a and system_b must differ, got '" + row.system_a + "'");
        }
        if (options_.symmetrize_orderings && row.system_a > row.system_b) {
            std::swap(row.system_a, row.system_b);
            row.human = invert(row.human);
            if (row.has_metric) {
                row.metric = invert(row.metric);
            }
        }
        const auto ordered = std::make_pair(row.system_a, row.system_b);
        if (!options_.symmetrize_orderings) {
            const auto unordered = row.system_a < row.system_b
                                       ? ordered
                                       : std::make_pair(row.system_b, row.system_a);
            auto [it, inserted] = orientation_.try_emplace(unordered, ordered);
            if (!inserted && it->second != ordered) {
                throw OrderingConflict(source_ + ":" + std::to_string(row.line) + ": pair (" +
                                       row.system_a + ", " + row.system_b +
                                       ") already appeared in the opposite order");
            }
        }
        auto& group = groups_[ordered];
        if (!group.seen_items.insert(row.item_id).second) {
            throw ParseError(source_, row.line,
                             "duplicate item '" + row.item_id + "' for pair (" + row.system_a +
                                 ", " + row.system_b + ")");
        }
        group.rows.push_back(std::move(row));
    }

    template <typename MakeFn>
    auto finish(MakeFn&& make) const {
        using Result = decltype(make(std::declval<SystemPair>(),
                                     std::declval<const std::vector<PreferenceRow>&>()));
        std::vector<Result> out;
        out.reserve(groups_.size());
        for (const auto& [ordered, group] : groups_) {
            out.push_back(make(SystemPair(ordered.first, ordered.second), group.rows));
        }
        return out;
    }

private:
    struct Group {
        std::vector<PreferenceRow> rows;
        std::unordered_set<std::string> seen_items;
    };

    LoadOptions options_;
    std::string source_;
    std::map<std::pair<std::string, std::string>, Group> groups_;
    std::map<std::pair<std::string, std::string>, std::pair<std::string, std::string>>
        orientation_;
};

template <typename T>
T load_from_file(const std::filesystem::path& path,
                 T (*reader)(std::istream&, TableFormat, const LoadOptions&, const std::string&),
                 TableFormat format, const LoadOptions& options) {
    std::ifstream in(path);
    if (!in) {
        throw InvalidInput("cannot open '" + path.string() + "'");
    }
    return reader(in, format, options, path.string());
}

}  // namespace

std::optional<TableFormat> table_format_from_string(std::string_view name) noexcept {
    if (name == "csv") {
        return TableFormat::Csv;
    }
    if (name == "jsonl") {
        return TableFormat::Jsonl;
    }
    return std::nullopt;
}

std::vector<EvaluationSetting> read_preferences(std::istream& in, TableFormat format,
                                                const LoadOptions& options,
                                                const std::string& source_name) {
    PairGrouper grouper(options, source_name);
    for_each_preference_row(in, format, source_name, /*with_metric=*/true,
                            [&](PreferenceRow row) { grouper.add(std::move(row)); });
    return grouper.finish([](SystemPair pair, const std::vector<PreferenceRow>& rows) {
        std::vector<RatedItem> items;
        items.reserve(rows.size());
        for (const PreferenceRow& row : rows) {
            items.push_back({row.item_id, row.human, row.metric});
        }
        return EvaluationSetting(std::move(pair), std::move(items));
    });
}

std::vector<EvaluationSetting> load_preferences(const std::filesystem::path& path,
                                                TableFormat format, const LoadOptions& options) {
    return load_from_file(path, &read_preferences, format, options);
}

void write_preferences(std::ostream& out, std::span<const EvaluationSetting> settings,
                       TableFormat format) {
    if (format == TableFormat::Csv) {
        out << "item_id,system_a,system_b,human,metric\n";
        for (const EvaluationSetting& setting : settings) {
            for (const RatedItem& item : setting.items()) {
                out << csv_escape(item.item_id) << ',' << csv_escape(setting.pair().first())
                    << ',' << csv_escape(setting.pair().second()) << ','
                    << label_token(item.human) << ',' << label_token(item.metric) << '\n';
            }
        }
    } else {
        for (const EvaluationSetting& setting : settings) {
            for (const RatedItem& item : setting.items()) {
                const json row{
                    {"item_id", item.item_id},
                    {"system_a", setting.pair().first()},
                    {"system_b", setting.pair().second()},
                    {"human", std::string(1, label_token(item.human))},
                    {"metric", std::string(1, label_token(item.metric))},
                };
                out << row.dump() << '\n';
            }
        }
    }
}

void save_preferences(const std::filesystem::path& path,
                      std::span<const EvaluationSetting> settings, TableFormat format) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) {
        throw InvalidInput("cannot write '" + path.string() + "'");
    }
    write_preferences(out, settings, format);
}

ScalarRatingTable read_scalars(std::istream& in, TableFormat format,
                               const std::string& source_name) {
    struct Accumulator {
        double sum = 0.0;
        std::int64_t count = 0;
    };
    std::map<std::pair<std::string, std::string>, Accumulator> sums;
    std::set<std::tuple<std::string, std::string, std::string>> seen;

    const auto add = [&](const std::string& item, const std::string& system,
                         const std::string& rater, double score, std::uint64_t line) {
        require_non_empty(item, "item_id", source_name, line);
        require_non_empty(system, "system_id", source_name, line);
        if (!std::isfinite(score)) {
            throw InvalidScore(source_name + ":" + std::to_string(line) +
                               ": score must be finite");
        }
        if (!seen.emplace(item, system, rater).second) {
            throw ParseError(source_name, line,
                             "duplicate score for (item '" + item + "', system '" + system +
                                 "', rater '" + rater + "')");
        }
        Accumulator& acc = sums[{item, system}];
        acc.sum += score;
        ++acc.count;
    };

    if (format == TableFormat::Csv) {
        CsvTable table(in, source_name, {"item_id", "system_id", "score"});
        while (table.next_row()) {
            const std::string rater = table.has_column("rater_id") ? table.field("rater_id") : "";
            add(table.field("item_id"), table.field("system_id"), rater,
                parse_number(table.field("score"), source_name, table.line()), table.line());
        }
    } else {
        JsonlTable table(in, source_name);
        while (table.next_row()) {
            add(table.string_field("item_id"), table.string_field("system_id"),
                table.optional_string_field("rater_id"), table.number_field("score"),
                table.line());
        }
    }

    ScalarRatingTable out;
    for (const auto& [key, acc] : sums) {
        out.insert(key.first, key.second, acc.sum / static_cast<double>(acc.count));
    }
    return out;
}

ScalarRatingTable load_scalars(const std::filesystem::path& path, TableFormat format) {
    std::ifstream in(path);
    if (!in) {
        throw InvalidInput("cannot open '" + path.string() + "'");
    }
    return read_scalars(in, format, path.string());
}

std::vector<HumanLabels> read_human_labels(std::istream& in, TableFormat format,
                                           const LoadOptions& options,
                                           const std::string& source_name) {
    PairGrouper grouper(options, source_name);
    for_each_preference_row(in, format, source_name, /*with_metric=*/false,
                            [&](PreferenceRow row) { grouper.add(std::move(row)); });
    return grouper.finish([](SystemPair pair, const std::vector<PreferenceRow>& rows) {
        HumanLabels labels{std::move(pair), {}};
        labels.items.reserve(rows.size());
        for (const PreferenceRow& row : rows) {
            labels.items.emplace_back(row.item_id, row.human);
        }
        return labels;
    });
}

std::vector<HumanLabels> load_human_labels(const std::filesystem::path& path, TableFormat format,
                                           const LoadOptions& options) {
    return load_from_file(path, &read_human_labels, format, options);
}

std::vector<JudgeItemRow> read_judge_requests(std::istream& in, const std::string& source_name) {
    std::vector<JudgeItemRow> out;
    JsonlTable table(in, source_name);
    std::set<std::tuple<std::string, std::string, std::string>> seen;
    while (table.next_row()) {
        const std::string system_a = table.string_field("system_a");
        const std::string system_b = table.string_field("system_b");
        if (system_a == system_b) {
            throw ParseError(source_name, table.line(),
                             "system_a and system_b must differ, got '" + system_a + "'");
        }
        JudgeItemRow row{
            JudgeRequest{table.string_field("item_id"), SystemPair(system_a, system_b),
                         table.string_field("source"), table.string_field("candidate_a"),
                         table.string_field("candidate_b")},
            parse_label(table.string_field("human"), source_name, table.line()),
        };
        if (!seen.emplace(system_a, system_b, row.request.item_id).second) {
            throw ParseError(source_name, table.line(),
                             "duplicate request for item '" + row.request.item_id + "'");
        }
        out.push_back(std::move(row));
    }
    return out;
}

std::vector<JudgeItemRow> load_judge_requests(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw InvalidInput("cannot open '" + path.string() + "'");
    }
    return read_judge_requests(in, path.string());
}

}  // namespace favi

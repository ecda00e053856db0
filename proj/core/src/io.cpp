#include "imcergo/io.hpp"

#include <json.hpp>

#include <fstream>
#include <sstream>

namespace imcergo {

using nlohmann::json;

namespace {

[[noreturn]] void schema_error(const std::string& msg) { throw Error(Errc::SchemaViolation, msg); }

json parse_json(std::string_view document) {
    try {
        return json::parse(document.begin(), document.end());
    } catch (const json::parse_error& e) {
        schema_error(std::string("malformed JSON: ") + e.what());
    }
}

std::vector<double> number_array(const json& j, const std::string& where, std::size_t n) {
    if (!j.is_array()) schema_error(where + " must be an array");
    if (j.size() != n) {
        schema_error(where + " must have " + std::to_string(n) + " entries, got " + std::to_string(j.size()));
    }
    std::vector<double> out;
    out.reserve(n);
    for (const auto& v : j) {
        if (!v.is_number()) schema_error(where + " must contain only numbers");
        out.push_back(v.get<double>());
    }
    return out;
}

CredalRow parse_row(const json& j, const StateSpace& states, const std::string& label,
                    std::vector<std::string>& warnings) {
    const std::size_t n = states.size();
    if (!j.is_object()) schema_error("row '" + label + "' must be an object");
    if (!j.contains("type") || !j["type"].is_string()) schema_error("row '" + label + "' needs a string 'type'");
    const auto type = j["type"].get<std::string>();
    if (type == "vertices") {
        if (!j.contains("pmfs") || !j["pmfs"].is_array() || j["pmfs"].empty()) {
            schema_error("row '" + label + "' needs a non-empty 'pmfs' array");
        }
        std::vector<Pmf> pmfs;
        for (std::size_t i = 0; i < j["pmfs"].size(); ++i) {
            pmfs.emplace_back(number_array(j["pmfs"][i], "row '" + label + "' pmf " + std::to_string(i), n));
        }
        return CredalRow::vertices(std::move(pmfs));
    }
    if (type == "intervals") {
        if (!j.contains("lower") || !j.contains("upper")) {
            schema_error("row '" + label + "' needs 'lower' and 'upper'");
        }
        std::vector<BoundChange> changes;
        auto row = CredalRow::intervals(number_array(j["lower"], "row '" + label + "' lower", n),
                                        number_array(j["upper"], "row '" + label + "' upper", n), &changes);
        for (const auto& c : changes) {
            std::ostringstream os;
            os << "row '" << label << "': " << (c.is_lower ? "lower" : "upper") << " bound for '"
               << states.label(c.state) << "' tightened from " << c.before << " to " << c.after;
            warnings.push_back(os.str());
        }
        return row;
    }
    schema_error("row '" + label + "' has unknown type '" + type + "'");
}

} // namespace

LoadedModel load_model(std::string_view document) {
    const json doc = parse_json(document);
    if (!doc.is_object()) schema_error("model document must be an object");
    if (!doc.contains("states") || !doc["states"].is_array()) schema_error("model needs a 'states' array");
    std::vector<std::string> labels;
    for (const auto& s : doc["states"]) {
        if (!s.is_string()) schema_error("state labels must be strings");
        labels.push_back(s.get<std::string>());
    }
    StateSpace states(std::move(labels));

    if (!doc.contains("rows") || !doc["rows"].is_object()) schema_error("model needs a 'rows' object");
    const auto& rows_json = doc["rows"];
    for (const auto& [key, _] : rows_json.items()) {
        if (!states.index_of(key)) schema_error("row for unknown state '" + key + "'");
    }
    std::vector<std::string> warnings;
    std::vector<CredalRow> rows;
    for (const auto& label : states.labels()) {
        if (!rows_json.contains(label)) schema_error("missing row for state '" + label + "'");
        rows.push_back(parse_row(rows_json[label], states, label, warnings));
    }
    return LoadedModel{TransitionModel(std::move(states), std::move(rows)), std::move(warnings)};
}

LoadedModel load_model_file(const std::filesystem::path& path) { return load_model(read_text_file(path)); }

Gamble load_gamble(std::string_view document, const StateSpace& states) {
    const json doc = parse_json(document);
    if (!doc.is_object() || !doc.contains("f")) schema_error("gamble document needs an 'f' entry");
    const auto& f = doc["f"];
    if (f.is_array()) return Gamble(number_array(f, "gamble 'f'", states.size()));
    if (!f.is_object()) schema_error("gamble 'f' must be an array or an object");
    std::vector<double> values(states.size(), 0.0);
    std::vector<bool> seen(states.size(), false);
    for (const auto& [key, v] : f.items()) {
        auto idx = states.index_of(key);
        if (!idx) schema_error("gamble names unknown state '" + key + "'");
        if (!v.is_number()) schema_error("gamble value for '" + key + "' must be a number");
        values[*idx] = v.get<double>();
        seen[*idx] = true;
    }
    for (std::size_t i = 0; i < seen.size(); ++i) {
        if (!seen[i]) schema_error("gamble has no value for state '" + states.label(i) + "'");
    }
    return Gamble(std::move(values));
}

Gamble load_gamble_file(const std::filesystem::path& path, const StateSpace& states) {
    return load_gamble(read_text_file(path), states);
}

Gamble parse_inline_gamble(std::string_view text, const StateSpace& states) {
    std::vector<double> values(states.size(), 0.0);
    std::vector<bool> seen(states.size(), false);
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const auto comma = text.find(',', pos);
        const auto item = text.substr(pos, comma == std::string_view::npos ? text.npos : comma - pos);
        const auto eq = item.find('=');
        if (eq == std::string_view::npos) schema_error("inline gamble item '" + std::string(item) + "' lacks '='");
        const auto label = item.substr(0, eq);
        const auto number = std::string(item.substr(eq + 1));
        auto idx = states.index_of(label);
        if (!idx) schema_error("inline gamble names unknown state '" + std::string(label) + "'");
        if (seen[*idx]) schema_error("inline gamble assigns '" + std::string(label) + "' twice");
        std::size_t used = 0;
        double v = 0.0;
        try {
            v = std::stod(number, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (used == 0 || used != number.size()) schema_error("inline gamble value '" + number + "' is not a number");
        values[*idx] = v;
        seen[*idx] = true;
        if (comma == std::string_view::npos) break;
        pos = comma + 1;
    }
    for (std::size_t i = 0; i < seen.size(); ++i) {
        if (!seen[i]) schema_error("inline gamble has no value for state '" + states.label(i) + "'");
    }
    return Gamble(std::move(values));
}

std::string read_text_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) schema_error("cannot read '" + path.string() + "'");
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

} // namespace imcergo

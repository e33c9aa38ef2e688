#pragma once

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "rvplan/core.hpp"

namespace rvplan {

class ParseError : public Error {
  public:
    explicit ParseError(const std::string& what_arg) : Error(what_arg) {}
};

namespace detail {

inline double require_number(const nlohmann::json& obj, const char* field,
                             const std::string& where) {
    if (!obj.contains(field))
        throw ParseError(where + ": missing required field \"" + field + "\"");
    const nlohmann::json& v = obj.at(field);
    if (!v.is_number())
        throw ParseError(where + ": field \"" + field + "\" must be a number");
    return v.get<double>();
}

}  // namespace detail

/// Parses the problem document: a JSON object with `bids` (array of objects
/// carrying `utility`, `acceptance_probability` and optionally `id`,
/// `label`), `reservation_value`, and `deadline`.  When no bid carries an
/// id, dense ids are assigned by array order; mixing the two styles is an
/// error.  The parsed problem is validated before it is returned.
inline PlanningProblem parse_problem_string(const std::string& text,
                                            const std::string& origin = "<string>") {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(origin + ": " + e.what());
    }
    if (!doc.is_object()) throw ParseError(origin + ": top-level value must be an object");
    if (!doc.contains("bids")) throw ParseError(origin + ": missing required field \"bids\"");
    if (!doc.at("bids").is_array()) throw ParseError(origin + ": \"bids\" must be an array");

    PlanningProblem problem;
    const nlohmann::json& bids = doc.at("bids");

    bool any_with_id = false;
    bool any_without_id = false;
    std::size_t index = 0;
    for (const nlohmann::json& entry : bids) {
        const std::string where = origin + ": bids[" + std::to_string(index) + "]";
        if (!entry.is_object()) throw ParseError(where + " must be an object");
        Bid b;
        if (entry.contains("id")) {
            any_with_id = true;
            const nlohmann::json& id = entry.at("id");
            if (!id.is_number_unsigned())
                throw ParseError(where + ": field \"id\" must be a non-negative integer");
            b.id = id.get<BidId>();
        } else {
            any_without_id = true;
            b.id = static_cast<BidId>(index);
        }
        if (entry.contains("label")) {
            if (!entry.at("label").is_string())
                throw ParseError(where + ": field \"label\" must be a string");
            b.label = entry.at("label").get<std::string>();
        }
        b.utility = detail::require_number(entry, "utility", where);
        b.acceptance_probability = detail::require_number(entry, "acceptance_probability", where);
        problem.domain.bids.push_back(std::move(b));
        ++index;
    }
    if (any_with_id && any_without_id)
        throw ParseError(origin + ": either every bid carries \"id\" or none does");

    problem.reservation_value = detail::require_number(doc, "reservation_value", origin);
    if (!doc.contains("deadline"))
        throw ParseError(origin + ": missing required field \"deadline\"");
    if (!doc.at("deadline").is_number_integer())
        throw ParseError(origin + ": field \"deadline\" must be an integer");
    problem.deadline = doc.at("deadline").get<int>();

    return validate_problem(std::move(problem));
}

inline PlanningProblem parse_problem_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open " + path.string());
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_problem_string(buffer.str(), path.string());
}

inline nlohmann::json problem_to_json(const PlanningProblem& problem) {
    nlohmann::json doc;
    doc["bids"] = nlohmann::json::array();
    for (const Bid& b : problem.domain.bids) {
        nlohmann::json entry;
        entry["id"] = b.id;
        if (!b.label.empty()) entry["label"] = b.label;
        entry["utility"] = b.utility;
        entry["acceptance_probability"] = b.acceptance_probability;
        doc["bids"].push_back(std::move(entry));
    }
    doc["reservation_value"] = problem.reservation_value;
    doc["deadline"] = problem.deadline;
    return doc;
}

/// Serialization round-trips every double bit-exactly (shortest
/// representation that reparses to the same value).
inline std::string problem_to_string(const PlanningProblem& problem) {
    return problem_to_json(problem).dump(2) + "\n";
}

inline void write_problem_file(const std::filesystem::path& path,
                               const PlanningProblem& problem) {
    std::ofstream out(path);
    if (!out) throw Error("cannot write " + path.string());
    out << problem_to_string(problem);
}

/// Shortest decimal form that reparses to the same double; shared by every
/// CLI printer so equal values always print as equal strings.
inline std::string format_double(double value) { return nlohmann::json(value).dump(); }

}  // namespace rvplan

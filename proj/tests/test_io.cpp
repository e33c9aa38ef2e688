#include <filesystem>
#include <string>

#include <catch2/catch_amalgamated.hpp>

#include "rvplan/generators.hpp"
#include "rvplan/io.hpp"
#include "test_support.hpp"

using namespace rvplan;

TEST_CASE("the dinner problem file parses to the expected problem") {
    const PlanningProblem problem = parse_problem_file(test::data_path("dinner_d3_rv02.json"));
    CHECK(problem == test::dinner_problem(0.2, 3));
}

TEST_CASE("missing deadline is a parse error naming the field") {
    const std::string text = R"({"bids": [{"utility": 0.5, "acceptance_probability": 0.5}],
                                 "reservation_value": 0.1})";
    try {
        parse_problem_string(text);
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(std::string(e.what()).find("deadline") != std::string::npos);
    }
}

TEST_CASE("missing reservation_value and bids are parse errors") {
    CHECK_THROWS_AS(parse_problem_string(R"({"bids": [], "deadline": 1})"), ParseError);
    CHECK_THROWS_AS(parse_problem_string(R"({"reservation_value": 0.1, "deadline": 1})"),
                    ParseError);
}

TEST_CASE("out-of-range utility propagates as a validation error") {
    const std::string text = R"({"bids": [{"utility": 1.5, "acceptance_probability": 0.5}],
                                 "reservation_value": 0.1, "deadline": 1})";
    CHECK_THROWS_AS(parse_problem_string(text), OutOfRangeError);
}

TEST_CASE("malformed JSON reports the position") {
    CHECK_THROWS_AS(parse_problem_string("{\"bids\": ["), ParseError);
}

TEST_CASE("ids are assigned densely by array order when omitted") {
    const std::string text = R"({"bids": [
        {"utility": 0.5, "acceptance_probability": 0.4},
        {"utility": 0.9, "acceptance_probability": 0.2}
      ], "reservation_value": 0.0, "deadline": 2})";
    const PlanningProblem problem = parse_problem_string(text);
    REQUIRE(problem.domain.size() == 2);
    CHECK(problem.domain.bids[0].id == 0);
    CHECK(problem.domain.bids[1].id == 1);
}

TEST_CASE("explicit ids are preserved as given") {
    const std::string text = R"({"bids": [
        {"id": 5, "utility": 0.5, "acceptance_probability": 0.4},
        {"id": 2, "utility": 0.9, "acceptance_probability": 0.2}
      ], "reservation_value": 0.0, "deadline": 2})";
    const PlanningProblem problem = parse_problem_string(text);
    CHECK(problem.domain.bids[0].id == 5);
    CHECK(problem.domain.bids[1].id == 2);
}

TEST_CASE("mixing explicit and omitted ids is rejected") {
    const std::string text = R"({"bids": [
        {"id": 0, "utility": 0.5, "acceptance_probability": 0.4},
        {"utility": 0.9, "acceptance_probability": 0.2}
      ], "reservation_value": 0.0, "deadline": 2})";
    CHECK_THROWS_AS(parse_problem_string(text), ParseError);
}

TEST_CASE("duplicate ids in the file are rejected") {
    const std::string text = R"({"bids": [
        {"id": 1, "utility": 0.5, "acceptance_probability": 0.4},
        {"id": 1, "utility": 0.9, "acceptance_probability": 0.2}
      ], "reservation_value": 0.0, "deadline": 2})";
    CHECK_THROWS_AS(parse_problem_string(text), DuplicateIdError);
}

TEST_CASE("field type mismatches are parse errors") {
    CHECK_THROWS_AS(parse_problem_string(
                        R"({"bids": [{"utility": "high", "acceptance_probability": 0.5}],
                            "reservation_value": 0.1, "deadline": 1})"),
                    ParseError);
    CHECK_THROWS_AS(parse_problem_string(
                        R"({"bids": [{"utility": 0.5, "acceptance_probability": 0.5}],
                            "reservation_value": 0.1, "deadline": 1.5})"),
                    ParseError);
    CHECK_THROWS_AS(parse_problem_string(R"([1, 2, 3])"), ParseError);
}

TEST_CASE("labels round-trip through serialization") {
    const PlanningProblem problem = test::dinner_problem(0.2, 3);
    const PlanningProblem reparsed = parse_problem_string(problem_to_string(problem));
    CHECK(reparsed == problem);
}

TEST_CASE("generated problems round-trip bit-exactly") {
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        const PlanningProblem problem =
            random_problem(1 + seed % 12, RvMode::uniform(), 1 + static_cast<int>(seed % 9), seed,
                           seed % 2 == 0 ? Correlation::independent : Correlation::inverse);
        const PlanningProblem reparsed = parse_problem_string(problem_to_string(problem));
        REQUIRE(reparsed.domain.size() == problem.domain.size());
        for (std::size_t i = 0; i < problem.domain.size(); ++i) {
            CHECK(reparsed.domain.bids[i].utility == problem.domain.bids[i].utility);
            CHECK(reparsed.domain.bids[i].acceptance_probability ==
                  problem.domain.bids[i].acceptance_probability);
        }
        CHECK(reparsed.reservation_value == problem.reservation_value);
        CHECK(reparsed == problem);
    }
}

TEST_CASE("short decimal inputs survive a parse round-trip unchanged") {
    const std::string text = R"({"bids": [
        {"id": 0, "utility": 0.123456789012345, "acceptance_probability": 0.5}
      ], "reservation_value": 0.2, "deadline": 1})";
    const PlanningProblem problem = parse_problem_string(text);
    const PlanningProblem reparsed = parse_problem_string(problem_to_string(problem));
    CHECK(reparsed.domain.bids[0].utility == 0.123456789012345);
    CHECK(reparsed.domain.bids[0].utility == problem.domain.bids[0].utility);
}

TEST_CASE("write and read back through the filesystem") {
    const auto path = std::filesystem::temp_directory_path() / "rvplan_io_test.json";
    const PlanningProblem problem = random_problem(6, RvMode::fixed(0.25), 3, 9);
    write_problem_file(path, problem);
    const PlanningProblem reparsed = parse_problem_file(path);
    CHECK(reparsed == problem);
    std::filesystem::remove(path);
}

TEST_CASE("missing files raise a parse error") {
    CHECK_THROWS_AS(parse_problem_file("/nonexistent/rvplan.json"), ParseError);
}

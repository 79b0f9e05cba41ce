#include <doctest.h>

#include <sstream>

#include "fixtures.hpp"
#include "utfsr/errors.hpp"
#include "utfsr/io.hpp"
#include "utfsr/reconstruct.hpp"

using namespace utfsr;
using nlohmann::json;

TEST_CASE("model documents round-trip") {
    const auto m = fixtures::load("feedback_ring");
    const auto again = io::model_from_json(io::model_to_json(m));
    CHECK(again.size() == m.size());
    CHECK(again.links().size() == m.links().size());
    for (std::size_t k = 0; k < m.links().size(); ++k) {
        CHECK(again.links()[k].from == m.links()[k].from);
        CHECK(again.links()[k].to == m.links()[k].to);
        CHECK(again.links()[k].transfer == m.links()[k].transfer);
    }
}

TEST_CASE("model documents are validated") {
    CHECK_THROWS_AS(io::model_from_json(json::parse(R"({"edges": []})")), FormatError);
    CHECK_THROWS_AS(io::model_from_json(json::parse(R"({"n": 2, "edges": [{"from": 1, "to": 3, "num_coeffs": [1]}]})")),
                    FormatError);
    CHECK_THROWS_AS(io::model_from_json(json::parse(R"({"n": 2, "edges": [{"from": 1, "to": 2}]})")), FormatError);
    CHECK_THROWS_AS(
        io::model_from_json(json::parse(R"({"n": 2, "edges": [{"from": 1, "to": 2, "num_coeffs": [1], "den_coeffs": [2]}]})")),
        FormatError);
    CHECK_THROWS_AS(io::model_from_json(json::parse(R"({"n": 2, "noise": [{"variance": -1}, {"variance": 1}]})")),
                    FormatError);
    const auto colored = io::model_from_json(json::parse(
        R"({"n": 1, "comment": "x", "noise": [{"variance": 2, "coloring_coeffs": [1, 0.5], "coloring_den_coeffs": [1, -0.2]}]})"));
    CHECK(colored.noise()[0].variance == 2.0);
    CHECK(colored.noise()[0].coloring.den().coeff(1) == -0.2);
}

TEST_CASE("psd dumps") {
    const auto s = psd(fixtures::load("diamond"), FrequencyGrid(64));
    const auto doc = io::psd_to_json(s);
    CHECK(io::is_psd_document(doc));
    CHECK(doc.at("half").size() == 33);
    const auto back = io::psd_from_json(doc);
    for (std::size_t k = 0; k < 64; ++k) CHECK((back.at(k) - s.at(k)).cwiseAbs().maxCoeff() < 1e-10);
    CHECK(io::psd_to_json(back).dump() == doc.dump());
    CHECK_THROWS_AS(io::psd_from_json(json::parse(R"({"format": "other"})")), FormatError);
    auto truncated = doc;
    truncated["half"].erase(truncated["half"].size() - 1);
    CHECK_THROWS_AS(io::psd_from_json(truncated), FormatError);
}

TEST_CASE("ill-posed pair dumps identically") {
    const FrequencyGrid grid(64);
    CHECK(io::psd_to_json(psd(fixtures::cancelling_triangle(1, 1, -1), grid)).dump() ==
          io::psd_to_json(psd(fixtures::collider_pair(1, 1), grid)).dump());
}

TEST_CASE("stable_round") {
    CHECK(io::stable_round(1e-11) == 0.0);
    CHECK(io::stable_round(-1e-11) == 0.0);
    CHECK(io::stable_round(0.1 + 0.2) == 0.3);
    CHECK(io::stable_round(123456.7890123456) == 123456.789012);
}

TEST_CASE("reports") {
    const auto r = utf_sr(psd(fixtures::load("diamond"), FrequencyGrid()));
    const auto doc = io::report_to_json(r);
    CHECK(doc.at("status") == "CertifiedExact");
    CHECK(doc.at("output_edges") == json::parse("[[1,2],[1,4],[2,3],[3,4]]"));
    CHECK(doc.at("moral_bound_edges").size() == 5);
    CHECK(doc.at("triangles").size() == 2);
    CHECK(doc.at("triangles")[0].at("removable_edges") == json::parse("[[2,4]]"));
    const auto dot = io::report_to_dot(r);
    CHECK(dot.find("y1 -- y2;") != std::string::npos);
    CHECK(dot.find("y2 -- y4") == std::string::npos);
}

TEST_CASE("csv round-trip") {
    Eigen::MatrixXd m(2, 3);
    m << 0.1, -2.5, 1e-300, 3.0, 4.0, 1.0 / 3.0;
    std::stringstream text;
    io::write_csv(text, m);
    CHECK(text.str().rfind("y1,y2\n", 0) == 0);
    CHECK(io::read_csv(text) == m);
    std::stringstream bad("y1,y2\n1,2\n3\n");
    CHECK_THROWS_AS(io::read_csv(bad), FormatError);
    std::stringstream junk("y1\nabc\n");
    CHECK_THROWS_AS(io::read_csv(junk), FormatError);
}

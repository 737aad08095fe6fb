#include <doctest.h>

#include <string>

#include "test_util.hpp"
#include "zonovol/io.hpp"

using namespace zonovol;
using namespace zonovol::testing;

namespace {

std::string parse_error(const std::string& text) {
    try {
        parse_body_file(text);
    } catch (const ParseError& e) {
        return e.what();
    }
    return "";
}

bool contains(const std::string& s, const std::string& part) { return s.find(part) != std::string::npos; }

}  // namespace

TEST_CASE("body files parse into the three body kinds") {
    const auto f = parse_body_file(R"({
      "dimension": 2,
      "bodies": [
        {"name": "z", "kind": "zonotope", "generators": [[1, 0], [0.5, 0.5]], "offset": [1, 2]},
        {"name": "p", "kind": "vpolytope", "vertices": [[0, 0], [1, 0], [0, 1]]},
        {"name": "b", "kind": "ball", "radius": 1}
      ],
      "multiplicities": [1, 0, 1]
    })");
    CHECK(f.dimension == 2);
    REQUIRE(f.bodies.size() == 3);
    const auto& z = std::get<Zonotope>(f.bodies[0].body);
    CHECK(z.num_generators() == 2);
    CHECK(z.offset() == vec({1, 2}));
    CHECK(std::get<VPolytope>(f.bodies[1].body).num_vertices() == 3);
    CHECK(std::get<Ball>(f.bodies[2].body).ambient_dim == 2);
    REQUIRE(f.multiplicities);
    CHECK(*f.multiplicities == std::vector<int>{1, 0, 1});
}

TEST_CASE("malformed body files name the line or field") {
    CHECK(contains(parse_error("{\n\"dimension\": 2,\n\"bodies\": [\n}"), "line 4"));
    CHECK(contains(parse_error(R"({"dimension": 2, "bodies": [{"name": "a", "kind": "zonotope", "generators": [[1, 0, 0]]}]})"),
                   "bodies[0].generators[0]"));
    CHECK(contains(parse_error(R"({"dimension": 2, "bodies": [{"name": "a", "kind": "ball"}, {"name": "a", "kind": "ball"}]})"),
                   "duplicate name"));
    CHECK(contains(parse_error(R"({"dimension": 2, "bodies": [{"name": "a", "kind": "ball", "radius": 3}]})"),
                   "bodies[0].radius"));
    CHECK(contains(parse_error(R"({"dimension": 2, "bodies": [{"name": "a", "kind": "cone"}]})"), "bodies[0].kind"));
    CHECK(contains(parse_error(R"({"dimension": 2, "bodies": [{"name": "a", "kind": "zonotope", "gens": []}]})"),
                   "unknown field 'gens'"));
    CHECK(contains(parse_error(R"({"dimension": 2, "bodies": [{"name": "a", "kind": "vpolytope", "vertices": [[0, "1"]]}]})"),
                   "bodies[0].vertices[0][1]"));
    CHECK(contains(parse_error(R"({"dimension": 0, "bodies": []})"), "dimension"));
    CHECK(contains(parse_error(R"({"dimension": 2, "bodies": [{"name": "a", "kind": "ball"}], "multiplicities": [1, 1]})"),
                   "multiplicities"));
    CHECK(contains(parse_error(R"({"dimension": 2})"), "missing field 'bodies'"));
}

TEST_CASE("reports re-serialize byte-identically") {
    const std::vector<BodyTerm> terms{{segment(vec({1, 0})), 1}, {segment(vec({0.5, std::sqrt(3.0) / 2})), 1}};
    const auto r = check_inequality(InequalityId::conj_1_1, terms);
    const std::string text = dump(to_json(r));
    CHECK(dump(Json::parse(text)) == text);
    const auto j = Json::parse(text);
    CHECK(j.begin().key() == "inequality_id");
    CHECK(j.at("epsilon").get<double>() == *r.epsilon);
    CHECK(j.at("diagnostics").contains("pairwise_brackets"));

    const auto c = check_stability(StabilityTheorem::thm_1_5, terms);
    const std::string ctext = dump(to_json(c));
    CHECK(dump(Json::parse(ctext)) == ctext);
    CHECK(Json::parse(ctext).at("bracket_value").get<double>() == c.bracket_value);
}

TEST_CASE("body JSON carries the defining data") {
    const Body z = Zonotope(2, {vec({1, 2})}, vec({3, 4}));
    const auto j = to_json(z);
    CHECK(j.at("kind") == "zonotope");
    CHECK(j.at("generators")[0][1].get<double>() == 2.0);
    CHECK(j.at("offset")[0].get<double>() == 3.0);
    CHECK(to_json(Body(Ball{3})).at("kind") == "ball");
}

TEST_CASE("short scientific format") {
    CHECK(format_short_sci(0.0) == "0.0e0");
    CHECK(format_short_sci(1.3e-15) == "1.3e-15");
    CHECK(format_short_sci(2.5) == "2.5e0");
    CHECK(format_short_sci(-4.44e12) == "-4.4e12");
}

#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "zonovol/inequality.hpp"
#include "zonovol/stability.hpp"

namespace zonovol {

using Json = nlohmann::ordered_json;

// Malformed body file; the message names the line or the offending field.
class ParseError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct NamedBody {
    std::string name;
    Body body;
};

struct BodyFile {
    int dimension = 0;
    std::vector<NamedBody> bodies;
    std::optional<std::vector<int>> multiplicities;
};

// {"dimension": n, "bodies": [{"name", "kind": "zonotope" | "vpolytope" | "ball",
//   "generators" | "vertices" | "radius", "offset"?}], "multiplicities"?}
BodyFile parse_body_file(std::string_view text);
BodyFile load_body_file(const std::string& path);

Json to_json(const Body& body);
Json to_json(const Subspace& s);
Json to_json(const Estimate& e);
Json to_json(const InequalityReport& r);
Json to_json(const RadiusEstimate& r);
Json to_json(const StabilityCertificate& c);
Json to_json(const ProjStabReport& r);
Json to_json(const BallRatio& r);
Json to_json(const CmReport& r);

// Stable text form: two-space indentation, shortest round-trip doubles, trailing newline.
std::string dump(const Json& j);

// "%.1e" without exponent padding: 0.0e0, 1.3e-15.
std::string format_short_sci(double x);

}  // namespace zonovol

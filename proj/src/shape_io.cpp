#include "dplab/shape_io.hpp"

#include "dplab/errors.hpp"

#include <fmt/format.h>
#include <fstream>
#include "json.hpp"
#include <sstream>

namespace dplab {

namespace {

using nlohmann::json;

std::vector<PolynomialPiece> pieces_from_json(const json& doc)
{
    if (!doc.is_object() || !doc.contains("pieces") || !doc["pieces"].is_array()) {
        throw ValidationError("shape document needs a \"pieces\" array");
    }
    std::vector<PolynomialPiece> pieces;
    for (auto const& p : doc["pieces"]) {
        if (!p.is_object() || !p.contains("interval") || !p.contains("coeffs")) {
            throw ValidationError("each piece needs \"interval\" and \"coeffs\"");
        }
        auto const& iv = p["interval"];
        if (!iv.is_array() || iv.size() != 2 || !iv[0].is_number() || !iv[1].is_number()) {
            throw ValidationError("\"interval\" must be a pair of numbers");
        }
        auto const& cs = p["coeffs"];
        if (!cs.is_array()) {
            throw ValidationError("\"coeffs\" must be an array of numbers");
        }
        PolynomialPiece piece;
        piece.lo = iv[0].get<double>();
        piece.hi = iv[1].get<double>();
        for (auto const& c : cs) {
            if (!c.is_number()) {
                throw ValidationError("\"coeffs\" must be an array of numbers");
            }
            piece.coeffs.push_back(c.get<double>());
        }
        pieces.push_back(std::move(piece));
    }
    return pieces;
}

json parse_document(std::string_view text)
{
    try {
        return json::parse(text);
    } catch (json::parse_error const& e) {
        throw ValidationError(fmt::format("malformed JSON: {}", e.what()));
    }
}

std::string read_file(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in) {
        throw ValidationError(fmt::format("cannot open '{}'", path.string()));
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

} // namespace

ShapePotential parse_shape(std::string_view json_text)
{
    auto doc = parse_document(json_text);
    auto pieces = pieces_from_json(doc);
    std::string label;
    if (doc.contains("label")) {
        if (!doc["label"].is_string()) {
            throw ValidationError("\"label\" must be a string");
        }
        label = doc["label"].get<std::string>();
    }
    return ShapePotential(std::move(label), std::move(pieces));
}

ShapePotential load_shape(const std::filesystem::path& path)
{
    try {
        return parse_shape(read_file(path));
    } catch (ValidationError const& e) {
        throw ValidationError(fmt::format("{}: {}", path.string(), e.what()));
    }
}

std::string shape_to_json(const ShapePotential& shape)
{
    json doc;
    doc["label"] = shape.label();
    doc["pieces"] = json::array();
    for (auto const& p : shape.pieces()) {
        doc["pieces"].push_back({{"interval", {p.lo, p.hi}}, {"coeffs", p.coeffs}});
    }
    return doc.dump(2);
}

PiecewisePolynomial parse_piecewise(std::string_view json_text)
{
    return PiecewisePolynomial(pieces_from_json(parse_document(json_text)));
}

PiecewisePolynomial load_piecewise(const std::filesystem::path& path)
{
    try {
        return parse_piecewise(read_file(path));
    } catch (ValidationError const& e) {
        throw ValidationError(fmt::format("{}: {}", path.string(), e.what()));
    }
}

} // namespace dplab

#include "presist/spec_io.hpp"

#include "presist/error.hpp"
#include "spec_yaml.hpp"

#include <fmt/format.h>
#include <yaml-cpp/yaml.h>

#include <fstream>
#include <sstream>

namespace presist {

std::string emit_generator(const GeneratorTerm &g) {
    switch (g.kind) {
    case GeneratorTerm::Kind::Box: return "box";
    case GeneratorTerm::Kind::Full: return fmt::format("\"full:{}\"", g.index);
    case GeneratorTerm::Kind::BoxFull: return fmt::format("\"boxfull:{}\"", g.index);
    case GeneratorTerm::Kind::Chords: return fmt::format("\"chords:{}\"", g.k);
    case GeneratorTerm::Kind::Offset: return fmt::format("[{}]", fmt::join(g.offset, ", "));
    }
    return "box";
}

std::string emit_spec_block(const GraphSpec &spec, int indent) {
    const std::string pad(static_cast<std::size_t>(indent), ' ');
    std::vector<std::string> factors, gens;
    for (const auto &f : spec.factors) factors.push_back(f.infinite() ? "inf" : std::to_string(f.modulus));
    for (const auto &g : spec.generators) gens.push_back(emit_generator(g));
    std::string out;
    out += fmt::format("{}family: {}\n", pad, to_string(spec.family));
    out += fmt::format("{}factors: [{}]\n", pad, fmt::join(factors, ", "));
    out += fmt::format("{}generators: [{}]\n", pad, fmt::join(gens, ", "));
    out += fmt::format("{}radius: {}\n", pad, spec.radius);
    return out;
}

std::string emit_spec(const GraphSpec &spec) { return emit_spec_block(spec, 0); }

namespace detail {

namespace {

GeneratorTerm parse_generator(const YAML::Node &node) {
    if (node.IsSequence()) {
        Element e;
        for (const auto &x : node) e.push_back(x.as<std::int64_t>());
        return GeneratorTerm::at(std::move(e));
    }
    if (!node.IsScalar()) throw Error(ErrorCode::ParseError, "generator must be a scalar or a list");
    const auto s = node.as<std::string>();
    if (s == "box") return GeneratorTerm::box();
    const auto colon = s.find(':');
    if (colon == std::string::npos) throw Error(ErrorCode::ParseError, "unknown generator '" + s + "'");
    const auto head = s.substr(0, colon);
    std::int64_t value = 0;
    try {
        std::size_t used = 0;
        value = std::stoll(s.substr(colon + 1), &used);
        if (used != s.size() - colon - 1) throw std::invalid_argument(s);
    } catch (const std::exception &) {
        throw Error(ErrorCode::ParseError, "bad generator argument in '" + s + "'");
    }
    if (head == "full") return GeneratorTerm::full(static_cast<int>(value));
    if (head == "boxfull") return GeneratorTerm::box_full(static_cast<int>(value));
    if (head == "chords") return GeneratorTerm::chords(value);
    throw Error(ErrorCode::ParseError, "unknown generator '" + s + "'");
}

} // namespace

GraphSpec spec_from_node(const YAML::Node &node) {
    if (!node.IsMap()) throw Error(ErrorCode::ParseError, "graph spec must be a mapping");
    for (const auto &kv : node) {
        const auto key = kv.first.as<std::string>();
        if (key != "family" && key != "factors" && key != "generators" && key != "radius")
            throw Error(ErrorCode::ParseError, "unknown graph spec key '" + key + "'");
    }
    for (const char *key : {"family", "factors", "generators"})
        if (!node[key]) throw Error(ErrorCode::ParseError, std::string("missing key '") + key + "'");

    GraphSpec spec;
    try {
        spec.family = family_from_string(node["family"].as<std::string>());
        for (const auto &f : node["factors"]) {
            const auto s = f.as<std::string>();
            if (s == "inf") spec.factors.push_back(Factor::integers());
            else spec.factors.push_back(Factor::cyclic(f.as<std::int64_t>()));
        }
        for (const auto &g : node["generators"]) spec.generators.push_back(parse_generator(g));
        spec.radius = node["radius"] ? node["radius"].as<int>() : 0;
    } catch (const YAML::Exception &e) {
        throw Error(ErrorCode::ParseError, e.what());
    }
    expand_generators(spec); // validates invariants
    return spec;
}

} // namespace detail

GraphSpec parse_spec(std::string_view text) {
    try {
        return detail::spec_from_node(YAML::Load(std::string(text)));
    } catch (const YAML::Exception &e) {
        throw Error(ErrorCode::ParseError, e.what());
    }
}

GraphSpec load_spec(const std::string &path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::IoError, "cannot open " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_spec(ss.str());
}

std::string fnv1a_hex(std::string_view text) {
    std::uint64_t h = 14695981039346656037ULL;
    for (unsigned char c : text) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return fmt::format("{:016x}", h);
}

std::string spec_hash(const GraphSpec &spec) { return fnv1a_hex(emit_spec(spec)); }

} // namespace presist

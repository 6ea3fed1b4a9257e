#pragma once

#include <fstream>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "hypertrace/tensor.hpp"

namespace hypertrace {

// Tensor file schema:
//   {"order": m, "dim": n, "entries": [{"idx": [i1,...,im], "val": "p/q"}, ...]}
// Duplicate idx keys are an error; zero values are dropped on load.
inline Tensor tensor_from_json(const nlohmann::json& j) {
    if (!j.is_object() || !j.contains("order") || !j.contains("dim"))
        throw std::invalid_argument("tensor json: need object with 'order' and 'dim'");
    int order = j.at("order").get<int>();
    int dim = j.at("dim").get<int>();
    Tensor::EntryMap entries;
    if (j.contains("entries")) {
        if (!j.at("entries").is_array())
            throw std::invalid_argument("tensor json: 'entries' must be an array");
        for (const auto& e : j.at("entries")) {
            MultiIndex idx = e.at("idx").get<MultiIndex>();
            Rational val = Rational::parse(e.at("val").get<std::string>());
            if (entries.count(idx))
                throw std::invalid_argument("tensor json: duplicate idx key");
            entries.emplace(std::move(idx), std::move(val));
        }
    }
    return Tensor(order, dim, std::move(entries));
}

inline nlohmann::ordered_json tensor_to_json(const Tensor& t) {
    nlohmann::ordered_json j;
    j["order"] = t.order();
    j["dim"] = t.dim();
    auto entries = nlohmann::ordered_json::array();
    for (const auto& [idx, val] : t.nonzeros())
        entries.push_back({{"idx", idx}, {"val", val.str()}});
    j["entries"] = std::move(entries);
    return j;
}

// Hypergraph file schema: {"n": n, "k": k, "edges": [[v1,...,vk], ...]}
inline Hypergraph hypergraph_from_json(const nlohmann::json& j) {
    if (!j.is_object() || !j.contains("n") || !j.contains("k"))
        throw std::invalid_argument("hypergraph json: need object with 'n' and 'k'");
    std::vector<std::vector<int>> edges;
    if (j.contains("edges")) edges = j.at("edges").get<std::vector<std::vector<int>>>();
    return Hypergraph(j.at("n").get<int>(), j.at("k").get<int>(), edges);
}

inline nlohmann::ordered_json hypergraph_to_json(const Hypergraph& h) {
    nlohmann::ordered_json j;
    j["n"] = h.n();
    j["k"] = h.k();
    auto edges = nlohmann::ordered_json::array();
    for (const auto& e : h.edges()) edges.push_back(e);
    j["edges"] = std::move(edges);
    return j;
}

inline nlohmann::json load_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open file: " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::parse_error& e) {
        throw std::invalid_argument("malformed JSON in " + path + ": " + e.what());
    }
    return j;
}

inline Tensor load_tensor(const std::string& path) { return tensor_from_json(load_json_file(path)); }

inline Hypergraph load_hypergraph(const std::string& path) {
    return hypergraph_from_json(load_json_file(path));
}

} // namespace hypertrace

#pragma once

#include <json.hpp>

#include "qcl/laurent.hpp"
#include "qcl/matrix.hpp"
#include "qcl/measures.hpp"
#include "qcl/opalg.hpp"
#include "qcl/scalar.hpp"
#include "qcl/signature.hpp"

namespace qcl {

// Object keys keep insertion order so exact-mode output is byte-stable.
using Json = nlohmann::ordered_json;

inline Json to_json(const Rational& r) { return to_string(r); }

inline Rational rational_from_json(const Json& j) {
    if (j.is_string()) return parse_rational(j.get<std::string>());
    if (j.is_number_integer()) return Rational(j.get<long>());
    throw std::invalid_argument("expected a rational as \"p/q\" string");
}

inline Json to_json(const Signature& sig) {
    Json j = Json::array();
    for (long long e : sig.entries()) j.push_back(e);
    return j;
}

inline Signature signature_from_json(const Json& j) {
    if (!j.is_array()) throw std::invalid_argument("expected a signature as an integer array");
    std::vector<long long> entries;
    for (const auto& e : j) {
        if (!e.is_number_integer()) throw std::invalid_argument("signature entries must be integers");
        entries.push_back(e.get<long long>());
    }
    return Signature(std::move(entries));
}

inline Json to_json(const GTPath& path) {
    Json j = Json::array();
    for (const Signature& sig : path.chain()) j.push_back(to_json(sig));
    return j;
}

inline GTPath path_from_json(const Json& j) {
    if (!j.is_array() || j.empty())
        throw std::invalid_argument("expected a path as a nonempty array of signatures");
    std::vector<Signature> chain;
    for (const auto& s : j) chain.push_back(signature_from_json(s));
    return GTPath(std::move(chain));
}

inline Json to_json(const LaurentPoly& p) {
    Json j = Json::array();
    for (const auto& [e, c] : p.terms()) {
        Json term;
        term["exponents"] = e;
        term["coeff"] = to_json(c);
        j.push_back(std::move(term));
    }
    return j;
}

// The variable count is read off the exponent vectors; an empty term list
// yields the zero polynomial in `nvars_if_empty` variables.
inline LaurentPoly laurent_from_json(const Json& j, int nvars_if_empty = 0) {
    if (!j.is_array()) throw std::invalid_argument("expected a Laurent polynomial as an array");
    if (j.empty()) return LaurentPoly(nvars_if_empty);
    LaurentPoly p(static_cast<int>(j.front().at("exponents").size()));
    for (const auto& term : j) {
        std::vector<long long> e;
        for (const auto& x : term.at("exponents")) e.push_back(x.get<long long>());
        p.add_term(std::move(e), rational_from_json(term.at("coeff")));
    }
    return p;
}

inline Json to_json(const LevelMeasure& m) {
    Json j;
    j["level"] = m.level;
    Json atoms = Json::array();
    for (const auto& [sig, mass] : m.atoms) {
        Json atom;
        atom["sig"] = to_json(sig);
        atom["mass"] = to_json(mass);
        atoms.push_back(std::move(atom));
    }
    j["atoms"] = std::move(atoms);
    return j;
}

inline LevelMeasure measure_from_json(const Json& j) {
    if (!j.is_object() || !j.contains("level") || !j.contains("atoms"))
        throw std::invalid_argument("expected a measure as {level, atoms}");
    std::map<Signature, Rational> atoms;
    for (const auto& atom : j.at("atoms")) {
        Signature sig = signature_from_json(atom.at("sig"));
        Rational mass = rational_from_json(atom.at("mass"));
        auto [it, inserted] = atoms.emplace(std::move(sig), mass);
        if (!inserted) it->second += mass;
    }
    return make_level_measure(j.at("level").get<int>(), std::move(atoms));
}

inline Json to_json(const Matrix& m) {
    Json rows = Json::array();
    for (size_t i = 0; i < m.rows(); ++i) {
        Json row = Json::array();
        for (size_t k = 0; k < m.cols(); ++k) row.push_back(to_json(m.at(i, k)));
        rows.push_back(std::move(row));
    }
    return rows;
}

inline Matrix matrix_from_json(const Json& j) {
    if (!j.is_array() || j.empty()) throw std::invalid_argument("expected a matrix as an array of rows");
    const size_t rows = j.size(), cols = j.front().size();
    Matrix m(rows, cols);
    for (size_t i = 0; i < rows; ++i) {
        if (j[i].size() != cols) throw std::invalid_argument("ragged matrix rows");
        for (size_t k = 0; k < cols; ++k) m.at(i, k) = rational_from_json(j[i][k]);
    }
    return m;
}

inline Json to_json(const BlockOperator& x) {
    Json j;
    j["level"] = x.level;
    Json blocks = Json::array();
    for (const auto& [sig, m] : x.blocks) {
        Json block;
        block["sig"] = to_json(sig);
        block["matrix"] = to_json(m);
        blocks.push_back(std::move(block));
    }
    j["blocks"] = std::move(blocks);
    return j;
}

inline BlockOperator blockop_from_json(const Json& j) {
    if (!j.is_object() || !j.contains("level") || !j.contains("blocks"))
        throw std::invalid_argument("expected a block operator as {level, blocks}");
    std::map<Signature, Matrix> blocks;
    for (const auto& block : j.at("blocks"))
        blocks.emplace(signature_from_json(block.at("sig")), matrix_from_json(block.at("matrix")));
    return make_block_operator(j.at("level").get<int>(), std::move(blocks));
}

}  // namespace qcl

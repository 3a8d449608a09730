#pragma once

#include <json.hpp>

#include "octowrap/cartan.hpp"
#include "octowrap/contour.hpp"
#include "octowrap/phrase.hpp"

namespace ocw {

using nlohmann::json;

inline json to_json(const CN& z) {
    json coords = json::array();
    for (int j = 0; j < z.dim(); ++j) coords.push_back(z.c[j]);
    return json{{"r", z.level}, {"coords", coords}};
}

inline CN cn_from_json(const json& j) {
    CN z(j.at("r").get<int>());
    const auto& coords = j.at("coords");
    if (static_cast<int>(coords.size()) != z.dim())
        throw std::invalid_argument("cayley json: wrong coordinate count");
    for (int t = 0; t < z.dim(); ++t) z.c[t] = coords[t].get<double>();
    return z;
}

inline json coords_json(const CN& z) {
    json coords = json::array();
    for (int j = 0; j < z.dim(); ++j) coords.push_back(z.c[j]);
    return coords;
}

inline CN coords_from_json(const json& coords, int level) {
    CN z(level);
    if (static_cast<int>(coords.size()) != z.dim())
        throw std::invalid_argument("cayley json: wrong coordinate count");
    for (int t = 0; t < z.dim(); ++t) z.c[t] = coords[t].get<double>();
    return z;
}

inline json to_json(const Phrase& p) {
    json terms = json::array();
    for (const Term& t : p.terms) {
        json coeffs = json::array();
        for (const CN& c : t.coeffs) coeffs.push_back(coords_json(c));
        json jt{{"coeffs", coeffs},
                {"exps", t.exps},
                {"conj", std::vector<int>(t.conj_flags.begin(), t.conj_flags.end())},
                {"tree", t.tree.str()}};
        if (!t.center.is_zero()) jt["center"] = coords_json(t.center);
        terms.push_back(std::move(jt));
    }
    return json{{"r", p.level}, {"terms", terms}};
}

inline Phrase phrase_from_json(const json& j) {
    int level = j.at("r").get<int>();
    Phrase p(level);
    for (const auto& jt : j.at("terms")) {
        std::vector<CN> coeffs;
        for (const auto& c : jt.at("coeffs")) coeffs.push_back(coords_from_json(c, level));
        std::vector<long long> exps = jt.at("exps").get<std::vector<long long>>();
        std::vector<bool> conj;
        for (const auto& f : jt.at("conj")) conj.push_back(f.get<int>() != 0);
        Term t(level, std::move(coeffs), std::move(exps), std::move(conj),
               BracketTree::parse(jt.at("tree").get<std::string>()));
        if (jt.contains("center")) t.center = coords_from_json(jt.at("center"), level);
        p.terms.push_back(std::move(t));
    }
    return p;
}

inline json to_json(const Path& path) {
    if (const auto* c = std::get_if<PlaneCircle>(&path)) {
        return json{{"kind", "circle"},
                    {"center", coords_json(c->center)},
                    {"radius", c->radius},
                    {"M", coords_json(c->M.value)},
                    {"winding", c->winding}};
    }
    const auto& v = std::get<Polyline>(path).vertices;
    json pts = json::array();
    for (const CN& z : v) pts.push_back(coords_json(z));
    return json{{"kind", "polyline"}, {"vertices", pts}};
}

inline Path path_from_json(const json& j, int level) {
    std::string kind = j.at("kind").get<std::string>();
    if (kind == "circle") {
        return PlaneCircle{coords_from_json(j.at("center"), level), j.at("radius").get<double>(),
                           Direction(coords_from_json(j.at("M"), level)),
                           j.at("winding").get<int>()};
    }
    if (kind == "polyline") {
        Polyline p;
        for (const auto& v : j.at("vertices")) p.vertices.push_back(coords_from_json(v, level));
        return p;
    }
    throw std::invalid_argument("path json: unknown kind");
}

inline json to_json(const Rational& r) { return json{{"num", r.num()}, {"den", r.den()}}; }

inline json to_json(const QVec& v) {
    json out = json::array();
    for (const Rational& r : v) out.push_back(to_json(r));
    return out;
}

inline json to_json(const QMat& m) {
    json out = json::array();
    for (const QVec& row : m) out.push_back(to_json(row));
    return out;
}

inline json to_json(const Realization& R) {
    json pairing = json::array();
    for (int k = 0; k < R.n; ++k) {
        json row = json::array();
        for (int j = 0; j < R.n; ++j) row.push_back(to_json(R.pairing(k, j)));
        pairing.push_back(std::move(row));
    }
    return json{{"dim_h", R.dim_h}, {"l", R.l}, {"coroots", to_json(R.coroots)},
                {"pairing_matrix", pairing}};
}

}  // namespace ocw

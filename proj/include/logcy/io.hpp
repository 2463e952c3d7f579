#pragma once

#include "logcy/equivalence.hpp"
#include "logcy/generate.hpp"

#include <json.hpp>

#include <fstream>
#include <sstream>
#include <string>

namespace logcy {

using json = nlohmann::ordered_json;

struct ParseError : Error {
    using Error::Error;
};

namespace detail {

inline json int_to_json(const Int& v) {
    static const Int lo = std::numeric_limits<std::int64_t>::min();
    static const Int hi = std::numeric_limits<std::int64_t>::max();
    if (v >= lo && v <= hi) return static_cast<std::int64_t>(v);
    return v.str();
}

inline Int int_from_json(const json& j, const std::string& where) {
    if (j.is_number_integer()) return Int(j.get<std::int64_t>());
    if (j.is_string()) {
        try {
            return Int(j.get<std::string>());
        } catch (...) {
            throw ParseError(where + ": not an integer");
        }
    }
    throw ParseError(where + ": expected an integer or integer string");
}

inline json rat_to_json(const Rat& q) { return numerator(q).str() + "/" + denominator(q).str(); }

inline Rat rat_from_json(const json& j, const std::string& where) {
    if (j.is_number_integer()) return Rat(j.get<std::int64_t>());
    if (!j.is_string()) throw ParseError(where + ": expected a rational \"p/q\" string");
    std::string s = j.get<std::string>();
    auto slash = s.find('/');
    try {
        if (slash == std::string::npos) return Rat(Int(s));
        Int p(s.substr(0, slash)), q(s.substr(slash + 1));
        if (q == 0) throw ParseError(where + ": zero denominator");
        return Rat(p) / Rat(q);
    } catch (const ParseError&) {
        throw;
    } catch (...) {
        throw ParseError(where + ": not a rational");
    }
}

inline json ambient_to_json(const AmbientLattice& L) {
    json a;
    switch (L.kind) {
        case AmbientKind::Rational:
            a["kind"] = "rational";
            a["n"] = L.blowups;
            break;
        case AmbientKind::SphereProduct:
            a["kind"] = "sphere_product";
            break;
        case AmbientKind::HirzebruchOne:
            a["kind"] = "hirzebruch_one";
            break;
        case AmbientKind::EllipticRuled:
            a["kind"] = "elliptic_ruled";
            a["twist"] = L.twist == Twist::Trivial ? "trivial" : "nontrivial";
            a["n"] = L.blowups;
            break;
    }
    return a;
}

inline AmbientLattice ambient_from_json(const json& a) {
    if (!a.is_object() || !a.contains("kind")) throw ParseError("ambient: missing kind");
    std::string kind = a["kind"].get<std::string>();
    auto get_n = [&]() { return a.contains("n") ? a["n"].get<int>() : 0; };
    if (kind == "rational") return AmbientLattice::rational(get_n());
    if (kind == "sphere_product") return AmbientLattice::sphere_product();
    if (kind == "hirzebruch_one") return AmbientLattice::hirzebruch_one();
    if (kind == "elliptic_ruled") {
        Twist t = Twist::Trivial;
        if (a.contains("twist")) {
            std::string ts = a["twist"].get<std::string>();
            if (ts == "nontrivial") t = Twist::Nontrivial;
            else if (ts != "trivial") throw ParseError("ambient.twist: expected trivial or nontrivial");
        }
        return AmbientLattice::elliptic_ruled(t, get_n());
    }
    throw ParseError("ambient.kind: unknown kind '" + kind + "'");
}

}  // namespace detail

inline json divisor_to_json(const DivisorConfig& D) {
    json j;
    j["ambient"] = detail::ambient_to_json(D.lattice);
    j["components"] = json::array();
    for (int i = 0; i < D.k(); ++i) {
        json c;
        c["name"] = D.names[static_cast<size_t>(i)];
        c["class"] = json::array();
        for (const auto& x : D.classes[static_cast<size_t>(i)].c) c["class"].push_back(detail::int_to_json(x));
        j["components"].push_back(std::move(c));
    }
    j["edges"] = json::array();
    for (const auto& e : D.edges) j["edges"].push_back(json::array({e.i + 1, e.j + 1}));
    if (D.areas) {
        j["areas"] = json::array();
        for (const auto& q : D.areas->values) j["areas"].push_back(detail::rat_to_json(q));
    }
    if (!D.markings.empty()) {
        j["markings"] = json::array();
        for (const auto& m : D.markings) {
            json mj;
            if (std::holds_alternative<SmoothPoint>(m.center))
                mj["center"] = json{{"component", std::get<SmoothPoint>(m.center).component + 1}};
            else
                mj["center"] = json{{"edge", std::get<IntersectionPoint>(m.center).edge + 1}};
            mj["origin"] = json::array();
            for (const auto& x : m.origin.c) mj["origin"].push_back(detail::int_to_json(x));
            mj["origin_ambient"] = detail::ambient_to_json(m.origin.lattice);
            j["markings"].push_back(std::move(mj));
        }
    }
    return j;
}

inline DivisorConfig divisor_from_json(const json& j) {
    if (!j.is_object()) throw ParseError("top level: expected an object");
    if (!j.contains("ambient")) throw ParseError("top level: missing ambient");
    if (!j.contains("components")) throw ParseError("top level: missing components");
    DivisorConfig D;
    D.lattice = detail::ambient_from_json(j["ambient"]);
    const int r = D.lattice.rank();
    int ci = 0;
    for (const auto& c : j["components"]) {
        ++ci;
        std::string where = "components[" + std::to_string(ci) + "]";
        if (!c.is_object() || !c.contains("class")) throw ParseError(where + ": missing class");
        D.names.push_back(c.contains("name") ? c["name"].get<std::string>() : "C" + std::to_string(ci));
        std::vector<Int> coeffs;
        for (const auto& x : c["class"]) coeffs.push_back(detail::int_from_json(x, where + ".class"));
        if (static_cast<int>(coeffs.size()) != r)
            throw ParseError(where + ".class: expected " + std::to_string(r) + " coefficients");
        D.classes.emplace_back(D.lattice, std::move(coeffs));
    }
    if (j.contains("edges")) {
        int ei = 0;
        for (const auto& e : j["edges"]) {
            ++ei;
            std::string where = "edges[" + std::to_string(ei) + "]";
            if (!e.is_array() || e.size() != 2) throw ParseError(where + ": expected a pair");
            int a = e[0].get<int>(), b = e[1].get<int>();
            if (a < 1 || b < 1 || a > D.k() || b > D.k())
                throw ParseError(where + ": component indices are 1-based and must exist");
            D.edges.push_back({a - 1, b - 1});
        }
    }
    if (j.contains("areas")) {
        AreaVector av;
        int ai = 0;
        for (const auto& q : j["areas"]) {
            ++ai;
            av.values.push_back(detail::rat_from_json(q, "areas[" + std::to_string(ai) + "]"));
        }
        D.areas = std::move(av);
    }
    if (j.contains("markings")) {
        int mi = 0;
        for (const auto& m : j["markings"]) {
            ++mi;
            std::string where = "markings[" + std::to_string(mi) + "]";
            if (!m.is_object() || !m.contains("center")) throw ParseError(where + ": missing center");
            Marking mk;
            const auto& c = m["center"];
            if (c.contains("component")) mk.center = SmoothPoint{c["component"].get<int>() - 1};
            else if (c.contains("edge")) mk.center = IntersectionPoint{c["edge"].get<int>() - 1};
            else throw ParseError(where + ".center: expected component or edge");
            AmbientLattice ol = D.lattice;
            if (m.contains("origin_ambient")) ol = detail::ambient_from_json(m["origin_ambient"]);
            std::vector<Int> coeffs;
            if (m.contains("origin"))
                for (const auto& x : m["origin"]) coeffs.push_back(detail::int_from_json(x, where + ".origin"));
            if (static_cast<int>(coeffs.size()) != ol.rank())
                throw ParseError(where + ".origin: expected " + std::to_string(ol.rank()) + " coefficients");
            mk.origin = ClassVector(ol, std::move(coeffs));
            D.markings.push_back(std::move(mk));
        }
    }
    return D;
}

inline std::string divisor_to_string(const DivisorConfig& D) { return divisor_to_json(D).dump(2) + "\n"; }

inline DivisorConfig divisor_from_string(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("invalid JSON: ") + e.what());
    }
    return divisor_from_json(j);
}

inline DivisorConfig read_divisor_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return divisor_from_string(ss.str());
}

inline void write_divisor_file(const std::string& path, const DivisorConfig& D) {
    std::ofstream out(path);
    if (!out) throw Error("cannot write " + path);
    out << divisor_to_string(D);
}

// Trace files are JSON lines: one record per blow-down step, then a summary.
inline std::string trace_to_string(const ReductionTrace& t) {
    std::string out;
    int i = 0;
    for (const auto& s : t.steps) {
        json j;
        j["step"] = ++i;
        j["kind"] = s.toric ? "toric" : "nontoric";
        j["component"] = s.component + 1;
        j["contracted"] = json::array();
        for (const auto& x : s.contracted.c) j["contracted"].push_back(detail::int_to_json(x));
        j["map"] = json::array();
        for (int r = 0; r < s.map.rows; ++r) {
            json row = json::array();
            for (int c = 0; c < s.map.cols; ++c) row.push_back(detail::int_to_json(s.map(r, c)));
            j["map"].push_back(std::move(row));
        }
        j["target"] = detail::ambient_to_json(s.target);
        json mj;
        if (std::holds_alternative<SmoothPoint>(s.created_marking.center))
            mj["component"] = std::get<SmoothPoint>(s.created_marking.center).component + 1;
        else
            mj["edge"] = std::get<IntersectionPoint>(s.created_marking.center).edge + 1;
        j["marking"] = std::move(mj);
        out += j.dump() + "\n";
    }
    json fin;
    fin["label"] = case_name(t.label.c);
    fin["parameter"] = t.label.parameter ? detail::int_to_json(*t.label.parameter) : json(nullptr);
    fin["twist"] = t.label.twist ? json(*t.label.twist == Twist::Trivial ? "trivial" : "nontrivial") : json(nullptr);
    fin["exhaustive"] = t.exhaustive;
    fin["steps"] = static_cast<int>(t.steps.size());
    out += fin.dump() + "\n";
    return out;
}

// Re-runs the recorded contractions; bit-exact against the trace's final
// configuration because blow_down is deterministic.
inline DivisorConfig replay_trace(const DivisorConfig& start, const std::string& trace_text) {
    DivisorConfig cur = normalize_coordinates(start);
    std::istringstream in(trace_text);
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        json j;
        try {
            j = json::parse(line);
        } catch (const nlohmann::json::exception& e) {
            throw ParseError(std::string("invalid trace line: ") + e.what());
        }
        if (!j.contains("kind")) continue;  // summary line
        bool toric = j["kind"].get<std::string>() == "toric";
        int component = j["component"].get<int>() - 1;
        std::vector<Int> coeffs;
        for (const auto& x : j["contracted"]) coeffs.push_back(detail::int_from_json(x, "contracted"));
        ClassVector cls(cur.lattice, std::move(coeffs));
        auto f = finding_for(cur, cls, toric, component);
        cur = blow_down(cur, f).first;
    }
    return cur;
}

// Dual graph in DOT form, vertices labeled by self-intersection.
inline std::string dot_export(const DivisorConfig& D) {
    std::string out = "graph divisor {\n";
    for (int i = 0; i < D.k(); ++i) {
        Int s = self_pair(D.classes[static_cast<size_t>(i)]);
        out += "  \"" + D.names[static_cast<size_t>(i)] + "\" [label=\"" + s.str() + "\"];\n";
    }
    for (const auto& e : D.edges)
        out += "  \"" + D.names[static_cast<size_t>(e.i)] + "\" -- \"" + D.names[static_cast<size_t>(e.j)] + "\";\n";
    out += "}\n";
    return out;
}

}  // namespace logcy

#pragma once

#include "logcy/lattice.hpp"

#include <algorithm>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace logcy {

// Combinatorial record of a blow-down center: a smooth point of a component
// or one specific intersection point (edge occurrence).
struct SmoothPoint {
    int component = 0;
    bool operator==(const SmoothPoint& o) const { return component == o.component; }
};
struct IntersectionPoint {
    int edge = 0;
    bool operator==(const IntersectionPoint& o) const { return edge == o.edge; }
};
using MarkingCenter = std::variant<SmoothPoint, IntersectionPoint>;

struct Marking {
    MarkingCenter center;
    // Contracted exceptional class, kept in the coordinates of the lattice the
    // blow-down started from (the class is annihilated by the descent map, so
    // it cannot be carried along in current coordinates).
    ClassVector origin;

    bool operator==(const Marking& o) const { return center == o.center && origin == o.origin; }
};

// The symplectic class [w] as a functional on the lattice basis.
struct AreaVector {
    std::vector<Rat> values;

    bool operator==(const AreaVector& o) const { return values == o.values; }
};

struct Edge {
    int i = 0;
    int j = 0;
    bool operator==(const Edge& o) const { return i == o.i && j == o.j; }
};

inline Edge make_edge(int a, int b) { return a <= b ? Edge{a, b} : Edge{b, a}; }

// Divisor configuration: ordered components with classes, explicit edge
// multiset (one entry per geometric intersection point, so markings can name
// a specific point of a bigon), optional markings and area data.
struct DivisorConfig {
    AmbientLattice lattice;
    std::vector<std::string> names;
    std::vector<ClassVector> classes;
    std::vector<Edge> edges;
    std::vector<Marking> markings;
    std::optional<AreaVector> areas;

    int k() const { return static_cast<int>(classes.size()); }

    Int pairing(int a, int b) const { return pair(classes[static_cast<size_t>(a)], classes[static_cast<size_t>(b)]); }

    Rat component_area(int i) const {
        if (!areas) throw InvalidArgumentError("configuration carries no area data");
        Rat acc = 0;
        const auto& cl = classes[static_cast<size_t>(i)].c;
        for (size_t b = 0; b < cl.size(); ++b) acc += areas->values[b] * Rat(cl[b]);
        return acc;
    }

    ClassVector total_class() const {
        auto sum = ClassVector::zero(lattice);
        for (const auto& cl : classes) sum += cl;
        return sum;
    }
};

// Derive the edge multiset from the homological pairings (one edge per
// intersection number).  Deterministic: (i, j) blocks in lexicographic order.
inline std::vector<Edge> edges_from_pairings(const std::vector<ClassVector>& classes) {
    std::vector<Edge> edges;
    const int k = static_cast<int>(classes.size());
    for (int i = 0; i < k; ++i)
        for (int j = i + 1; j < k; ++j) {
            Int p = pair(classes[static_cast<size_t>(i)], classes[static_cast<size_t>(j)]);
            for (Int t = 0; t < p; ++t) edges.push_back({i, j});
        }
    return edges;
}

inline DivisorConfig make_config(const AmbientLattice& L, std::vector<std::string> names,
                                 std::vector<ClassVector> classes) {
    DivisorConfig d;
    d.lattice = L;
    d.names = std::move(names);
    d.classes = std::move(classes);
    d.edges = edges_from_pairings(d.classes);
    return d;
}

inline DivisorConfig make_config(const AmbientLattice& L, std::vector<ClassVector> classes) {
    std::vector<std::string> names;
    for (size_t i = 0; i < classes.size(); ++i) names.push_back("C" + std::to_string(i + 1));
    return make_config(L, std::move(names), std::move(classes));
}

enum class ViolationCode {
    EmptyDivisor,
    AnticanonicalSum,
    NegativePairing,
    EdgeMultiplicity,
    SelfEdge,
    EdgeOutOfRange,
    Disconnected,
    NotEmbeddable,
    GenusTooLarge,
    GenusOneNotAlone,
    NotACycle,
    BigonPairing,
    TorusHasEdges,
    AreaLength,
    AreaNotPositive,
    MarkingOutOfRange,
};

struct Violation {
    ViolationCode code;
    std::string message;
};

struct ValidationReport {
    std::vector<Violation> violations;
    bool ok() const { return violations.empty(); }

    std::string to_string() const {
        if (ok()) return "valid";
        std::string out;
        for (const auto& v : violations) {
            out += v.message;
            out += '\n';
        }
        return out;
    }
};

namespace detail {

inline bool graph_connected(int k, const std::vector<Edge>& edges) {
    if (k == 0) return false;
    std::vector<int> stack = {0};
    std::vector<bool> seen(static_cast<size_t>(k), false);
    seen[0] = true;
    int count = 1;
    while (!stack.empty()) {
        int v = stack.back();
        stack.pop_back();
        for (const auto& e : edges) {
            int w = -1;
            if (e.i == v) w = e.j;
            else if (e.j == v) w = e.i;
            if (w >= 0 && w < k && !seen[static_cast<size_t>(w)]) {
                seen[static_cast<size_t>(w)] = true;
                ++count;
                stack.push_back(w);
            }
        }
    }
    return count == k;
}

}  // namespace detail

// Total validation of the homological log Calabi-Yau conditions: the divisor
// represents -K, intersections match the stated edges and are non-negative,
// the dual graph is a torus or a single cycle of spheres, and any area data
// is positive on every component.
inline ValidationReport validate(const DivisorConfig& D) {
    ValidationReport rep;
    auto add = [&](ViolationCode c, std::string m) { rep.violations.push_back({c, std::move(m)}); };

    const int k = D.k();
    if (k == 0) {
        add(ViolationCode::EmptyDivisor, "divisor has no components");
        return rep;
    }
    for (const auto& cl : D.classes)
        if (cl.lattice != D.lattice)
            throw LatticeMismatchError("component class lives in a different lattice");

    auto sum = D.total_class();
    auto antican = first_chern(D.lattice);
    if (sum != antican)
        add(ViolationCode::AnticanonicalSum,
            "anticanonical condition failed: components sum to " + sum.to_string() + ", expected " +
                antican.to_string());

    // Edge multiset must reproduce the pairing matrix.
    std::map<std::pair<int, int>, Int> counts;
    bool edges_ok = true;
    for (size_t e = 0; e < D.edges.size(); ++e) {
        const auto& ed = D.edges[e];
        if (ed.i < 0 || ed.j < 0 || ed.i >= k || ed.j >= k) {
            add(ViolationCode::EdgeOutOfRange, "edge " + std::to_string(e) + " references a missing component");
            edges_ok = false;
            continue;
        }
        if (ed.i == ed.j) {
            add(ViolationCode::SelfEdge, "edge " + std::to_string(e) + " is a self-intersection, not modeled");
            edges_ok = false;
            continue;
        }
        counts[{std::min(ed.i, ed.j), std::max(ed.i, ed.j)}] += 1;
    }
    if (edges_ok) {
        for (int i = 0; i < k; ++i)
            for (int j = i + 1; j < k; ++j) {
                Int p = D.pairing(i, j);
                if (p < 0)
                    add(ViolationCode::NegativePairing,
                        "components " + std::to_string(i + 1) + "," + std::to_string(j + 1) +
                            " intersect negatively (" + p.str() + ")");
                Int have = counts.count({i, j}) ? counts[{i, j}] : Int(0);
                if (p >= 0 && have != p)
                    add(ViolationCode::EdgeMultiplicity,
                        "edge multiplicity for components " + std::to_string(i + 1) + "," +
                            std::to_string(j + 1) + " is " + have.str() + ", pairing gives " + p.str());
            }
    }

    if (!detail::graph_connected(k, D.edges))
        add(ViolationCode::Disconnected, "dual graph is not connected");

    // Adjunction genus per component; torus-or-cycle shape.
    std::vector<Int> genus(static_cast<size_t>(k), 0);
    bool genus_known = true;
    for (int i = 0; i < k; ++i) {
        try {
            genus[static_cast<size_t>(i)] = adjunction_genus(D.classes[static_cast<size_t>(i)]);
        } catch (const NotEmbeddableClassError& ex) {
            add(ViolationCode::NotEmbeddable, std::string(ex.what()) + " (component " + std::to_string(i + 1) + ")");
            genus_known = false;
        }
    }
    if (genus_known) {
        for (int i = 0; i < k; ++i) {
            const Int& g = genus[static_cast<size_t>(i)];
            if (g > 1)
                add(ViolationCode::GenusTooLarge,
                    "component " + std::to_string(i + 1) + " has genus " + g.str() + " > 1");
            else if (g == 1 && k > 1)
                add(ViolationCode::GenusOneNotAlone,
                    "component " + std::to_string(i + 1) +
                        " has genus 1 with k > 1; D must be a torus or a cycle of spheres");
        }
        if (k == 1) {
            if (!D.edges.empty())
                add(ViolationCode::TorusHasEdges, "single-component divisor cannot carry intersection points");
        } else if (k == 2) {
            if (D.pairing(0, 1) != 2)
                add(ViolationCode::BigonPairing,
                    "a 2-component divisor must be a bigon: pairing is " + D.pairing(0, 1).str() + ", expected 2");
        } else {
            // k >= 3: every vertex meets exactly two others, once each.
            for (int i = 0; i < k; ++i) {
                Int deg = 0;
                bool simple = true;
                for (int j = 0; j < k; ++j) {
                    if (j == i) continue;
                    Int p = D.pairing(i, j);
                    if (p < 0) continue;  // reported above
                    deg += p;
                    if (p > 1) simple = false;
                }
                if (deg != 2 || !simple)
                    add(ViolationCode::NotACycle,
                        "component " + std::to_string(i + 1) + " does not sit on a simple cycle (degree " +
                            deg.str() + ")");
            }
        }
    }

    if (D.areas) {
        if (static_cast<int>(D.areas->values.size()) != D.lattice.rank())
            add(ViolationCode::AreaLength, "area vector length does not match lattice rank");
        else
            for (int i = 0; i < k; ++i) {
                Rat a = D.component_area(i);
                if (a <= 0)
                    add(ViolationCode::AreaNotPositive,
                        "component " + std::to_string(i + 1) + " has non-positive area");
            }
    }

    for (size_t m = 0; m < D.markings.size(); ++m) {
        const auto& mk = D.markings[m];
        if (std::holds_alternative<SmoothPoint>(mk.center)) {
            int c = std::get<SmoothPoint>(mk.center).component;
            if (c < 0 || c >= k)
                add(ViolationCode::MarkingOutOfRange, "marking " + std::to_string(m) + " references a missing component");
        } else {
            int e = std::get<IntersectionPoint>(mk.center).edge;
            if (e < 0 || e >= static_cast<int>(D.edges.size()))
                add(ViolationCode::MarkingOutOfRange, "marking " + std::to_string(m) + " references a missing edge");
        }
    }

    return rep;
}

inline std::vector<Int> genus_profile(const DivisorConfig& D) {
    std::vector<Int> out;
    out.reserve(D.classes.size());
    for (const auto& cl : D.classes) out.push_back(adjunction_genus(cl));
    return out;
}

struct Shape {
    bool torus = false;
    int k = 0;
    bool operator==(const Shape& o) const { return torus == o.torus && k == o.k; }
    std::string to_string() const { return torus ? "torus" : "cycle(" + std::to_string(k) + ")"; }
};

inline Shape shape(const DivisorConfig& D) {
    if (D.k() == 1) return {true, 1};
    return {false, D.k()};
}

// Redundant integrity check from expanding K^2 = (sum C_i)^2:
// sum C_i^2 = K^2 - 2 * |edges|.
inline bool self_intersection_sum_check(const DivisorConfig& D) {
    Int lhs = 0;
    for (const auto& cl : D.classes) lhs += self_pair(cl);
    Int k2 = self_pair(canonical_class(D.lattice));
    return lhs == k2 - 2 * Int(D.edges.size());
}

// Structural equality that ignores bookkeeping: used for round-trip checks.
inline bool equal_modulo_markings(const DivisorConfig& a, const DivisorConfig& b) {
    if (a.lattice != b.lattice || a.classes != b.classes) return false;
    auto key = [](const std::vector<Edge>& es) {
        std::vector<std::pair<int, int>> v;
        for (const auto& e : es) v.emplace_back(std::min(e.i, e.j), std::max(e.i, e.j));
        std::sort(v.begin(), v.end());
        return v;
    };
    if (key(a.edges) != key(b.edges)) return false;
    return a.areas == b.areas;
}

}  // namespace logcy

#pragma once

#include "logcy/blowdown.hpp"

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace logcy {

struct NonMinimalAmbientError : Error {
    using Error::Error;
};
struct NoMatchingCaseError : Error {
    using Error::Error;
};

struct StuckNonMinimalError : Error {
    bool exhaustive;
    StuckNonMinimalError(const std::string& msg, bool ex) : Error(msg), exhaustive(ex) {}
};

enum class ModelCase { A, B1, B2, B3, C1, C2, C3, C4, D2a, D2b, D3, D4 };

inline const char* case_name(ModelCase c) {
    switch (c) {
        case ModelCase::A: return "A";
        case ModelCase::B1: return "B1";
        case ModelCase::B2: return "B2";
        case ModelCase::B3: return "B3";
        case ModelCase::C1: return "C1";
        case ModelCase::C2: return "C2";
        case ModelCase::C3: return "C3";
        case ModelCase::C4: return "C4";
        case ModelCase::D2a: return "D2a";
        case ModelCase::D2b: return "D2b";
        case ModelCase::D3: return "D3";
        case ModelCase::D4: return "D4";
    }
    return "?";
}

struct MinimalModelLabel {
    ModelCase c = ModelCase::B1;
    std::optional<Int> parameter;
    std::optional<Twist> twist;

    bool operator==(const MinimalModelLabel& o) const {
        return c == o.c && parameter == o.parameter && twist == o.twist;
    }
    bool operator!=(const MinimalModelLabel& o) const { return !(*this == o); }

    std::string to_string() const {
        std::string out = case_name(c);
        if (parameter) {
            const char* p = (c == ModelCase::C2 || c == ModelCase::C3 || c == ModelCase::C4) ? "b" : "a";
            out += "(" + std::string(p) + "=" + parameter->str() + ")";
        }
        if (twist) out += twist == Twist::Trivial ? "(trivial)" : "(nontrivial)";
        return out;
    }
};

namespace detail {

// The paper's stated symmetries, made canonical.
inline Int normalize_param(ModelCase c, const Int& p) {
    switch (c) {
        case ModelCase::C2: return std::min(p, 2 - p);
        case ModelCase::C3: return std::min(p, 1 - p);
        case ModelCase::C4: return abs(p);
        case ModelCase::D2a: return std::max(p, 1 - p);
        case ModelCase::D3: return abs(p);
        case ModelCase::D4: return std::max(p, -p - 1);  // {a, -a-1} name the same pair
        default: return p;
    }
}

struct SpComponents {
    // s-coefficients of components with f-coefficient 1, and count of pure-s
    std::vector<Int> betas;
    int pure = 0;
    bool ok = true;
};

inline SpComponents sp_shape(const std::vector<ClassVector>& cls, bool swapped) {
    SpComponents out;
    for (const auto& c : cls) {
        Int a = swapped ? c.c[1] : c.c[0];
        Int b = swapped ? c.c[0] : c.c[1];
        if (a == 0 && b == 1) ++out.pure;
        else if (a == 1) out.betas.push_back(b);
        else out.ok = false;
    }
    return out;
}

}  // namespace detail

// Match a validated configuration on a Definition 3.3 ambient against the
// minimal-model table, extracting the normalized parameter.
inline MinimalModelLabel classify_minimal(const DivisorConfig& D) {
    const auto& L = D.lattice;
    if (!(L.is_minimal_ambient() || L.is_one_point_blowup_of_plane()))
        throw NonMinimalAmbientError("ambient is not minimal and not CP^2 # CP^2bar");
    const int k = D.k();
    auto no_match = [&](const std::string& why) -> MinimalModelLabel {
        throw NoMatchingCaseError("configuration matches no minimal case: " + why);
    };

    if (L.kind == AmbientKind::EllipticRuled) {
        if (k == 1 && D.classes[0] == first_chern(L)) return {ModelCase::A, std::nullopt, L.twist};
        return no_match("elliptic ruled ambient admits only the anticanonical torus");
    }

    if (L == AmbientLattice::rational(0)) {
        if (k == 1) return {ModelCase::B1, std::nullopt, std::nullopt};
        std::vector<Int> ds;
        for (const auto& c : D.classes) ds.push_back(c.c[0]);
        std::sort(ds.begin(), ds.end());
        if (k == 2 && ds == std::vector<Int>{1, 2}) return {ModelCase::B2, std::nullopt, std::nullopt};
        if (k == 3 && ds == std::vector<Int>{1, 1, 1}) return {ModelCase::B3, std::nullopt, std::nullopt};
        return no_match("no minimal model on CP^2 with these components");
    }

    if (L.kind == AmbientKind::SphereProduct) {
        if (k == 1) return {ModelCase::C1, std::nullopt, std::nullopt};
        if (k > 4) return no_match("S^2 x S^2 admits at most four components");
        for (bool swapped : {false, true}) {
            auto sh = detail::sp_shape(D.classes, swapped);
            if (!sh.ok) continue;
            if (k == 2 && sh.pure == 0 && sh.betas.size() == 2 && sh.betas[0] + sh.betas[1] == 2)
                return {ModelCase::C2, detail::normalize_param(ModelCase::C2, std::min(sh.betas[0], sh.betas[1])),
                        std::nullopt};
            if (k == 3 && sh.pure == 1 && sh.betas.size() == 2 && sh.betas[0] + sh.betas[1] == 1)
                return {ModelCase::C3, detail::normalize_param(ModelCase::C3, std::min(sh.betas[0], sh.betas[1])),
                        std::nullopt};
            if (k == 4 && sh.pure == 2 && sh.betas.size() == 2 && sh.betas[0] + sh.betas[1] == 0)
                return {ModelCase::C4, abs(sh.betas[0]), std::nullopt};
        }
        return no_match("no minimal model on S^2 x S^2 with these components");
    }

    // CP^2 # CP^2bar, possibly in Rational(1) coordinates.
    std::vector<ClassVector> cls;
    auto H1 = AmbientLattice::hirzebruch_one();
    for (const auto& c : D.classes) cls.push_back(L.kind == AmbientKind::HirzebruchOne ? c : convert_basis(c, H1));
    if (k == 1) return no_match("a torus on CP^2 # CP^2bar is never minimal");
    if (k > 4) return no_match("CP^2 # CP^2bar admits at most four components");
    std::vector<Int> alphas;  // f-coefficients of section-type components
    int fibers = 0;
    bool forms_ok = true;
    bool d2b = false;
    if (k == 2) {
        std::vector<std::vector<Int>> raw;
        for (const auto& c : cls) raw.push_back(c.c);
        std::sort(raw.begin(), raw.end());
        if (raw == std::vector<std::vector<Int>>{{0, 2}, {1, 0}}) d2b = true;
    }
    if (d2b) return {ModelCase::D2b, std::nullopt, std::nullopt};
    for (const auto& c : cls) {
        if (c.c == std::vector<Int>{1, 0}) ++fibers;
        else if (c.c[1] == 1) alphas.push_back(c.c[0]);
        else forms_ok = false;
    }
    if (forms_ok && k == 2 && fibers == 0 && alphas.size() == 2 && alphas[0] + alphas[1] == 1)
        return {ModelCase::D2a, detail::normalize_param(ModelCase::D2a, std::max(alphas[0], alphas[1])),
                std::nullopt};
    if (forms_ok && k == 3 && fibers == 1 && alphas.size() == 2 && alphas[0] + alphas[1] == 0)
        return {ModelCase::D3, abs(alphas[0]), std::nullopt};
    if (forms_ok && k == 4 && fibers == 2 && alphas.size() == 2 && alphas[0] + alphas[1] == -1)
        return {ModelCase::D4, std::max(alphas[0], alphas[1]), std::nullopt};
    return no_match("no minimal model on CP^2 # CP^2bar with these components");
}

// One validated representative per case/parameter; classify_minimal is a left
// inverse up to the parameter normalization above.
inline std::vector<DivisorConfig> enumerate_minimal(const AmbientLattice& ambient, int k, const Int& plo,
                                                    const Int& phi) {
    std::vector<DivisorConfig> out;
    auto cv = [&](std::vector<Int> c) { return ClassVector(ambient, std::move(c)); };
    switch (ambient.kind) {
        case AmbientKind::Rational:
            if (ambient.blowups != 0) return out;
            if (k == 1) out.push_back(make_config(ambient, {cv({3})}));
            if (k == 2) out.push_back(make_config(ambient, {cv({1}), cv({2})}));
            if (k == 3) out.push_back(make_config(ambient, {cv({1}), cv({1}), cv({1})}));
            break;
        case AmbientKind::SphereProduct:
            if (k == 1) out.push_back(make_config(ambient, {cv({2, 2})}));
            if (k == 2)
                for (Int b = plo; b <= phi; ++b)
                    out.push_back(make_config(ambient, {cv({1, b}), cv({1, 2 - b})}));
            if (k == 3)
                for (Int b = plo; b <= phi; ++b)
                    out.push_back(make_config(ambient, {cv({1, b}), cv({1, 1 - b}), cv({0, 1})}));
            if (k == 4)
                for (Int b = plo; b <= phi; ++b)
                    out.push_back(make_config(ambient, {cv({1, -b}), cv({1, b}), cv({0, 1}), cv({0, 1})}));
            break;
        case AmbientKind::HirzebruchOne:
            if (k == 2) {
                for (Int a = plo; a <= phi; ++a)
                    out.push_back(make_config(ambient, {cv({a, 1}), cv({1 - a, 1})}));
                out.push_back(make_config(ambient, {cv({1, 0}), cv({0, 2})}));
            }
            if (k == 3)
                for (Int a = plo; a <= phi; ++a)
                    out.push_back(make_config(ambient, {cv({a, 1}), cv({-a, 1}), cv({1, 0})}));
            if (k == 4)
                for (Int a = plo; a <= phi; ++a)
                    out.push_back(make_config(ambient, {cv({a, 1}), cv({-a - 1, 1}), cv({1, 0}), cv({1, 0})}));
            break;
        case AmbientKind::EllipticRuled:
            if (ambient.blowups != 0) return out;
            if (k == 1) out.push_back(make_config(ambient, {first_chern(ambient)}));
            break;
    }
    for (const auto& d : out)
        if (!validate(d).ok()) throw Error("enumerate_minimal produced an invalid configuration");
    return out;
}

struct ReductionTrace {
    std::vector<BlowdownStep> steps;
    DivisorConfig final;
    MinimalModelLabel label;
    bool exhaustive = true;
};

struct ReduceOptions {
    Int bound = 0;  // 0: per-step default, 3 x max coefficient
    std::function<void(const DivisorConfig&)> observer;
};

// Definition 3.3: the ambient manifold is minimal, or the configuration is a
// Looijenga pair on CP^2 # CP^2bar.
inline bool is_minimal_model(const DivisorConfig& D) {
    if (D.lattice.is_minimal_ambient()) return true;
    if (!D.lattice.is_one_point_blowup_of_plane()) return false;
    for (const auto& c : D.classes)
        if (adjunction_genus(c) != 0) return false;
    return true;
}

inline DivisorConfig normalize_coordinates(const DivisorConfig& D) {
    if (D.lattice.kind != AmbientKind::HirzebruchOne) return D;
    DivisorConfig out = D;
    auto R1 = AmbientLattice::rational(1);
    out.lattice = R1;
    for (auto& c : out.classes) c = convert_basis(c, R1);
    if (D.areas) {
        // functional on H = s and E1 = s - f
        AreaVector v;
        v.values = {D.areas->values[1], D.areas->values[1] - D.areas->values[0]};
        out.areas = v;
    }
    return out;
}

// Lemma 3.4 pipeline: non-toric blow-downs, then toric blow-downs, stopping
// as soon as a minimal model is reached.  The lexicographically least finding
// is contracted first, so traces are deterministic.
inline ReductionTrace reduce_to_minimal(const DivisorConfig& D, const ReduceOptions& opts = {}) {
    ReductionTrace trace;
    DivisorConfig cur = normalize_coordinates(D);

    auto notify = [&](const DivisorConfig& c) {
        if (opts.observer) opts.observer(c);
    };

    while (!is_minimal_model(cur)) {
        auto res = find_nontoric(cur, opts.bound);
        if (!res.complete && opts.bound == 0) {
            // escalate the default bound once; 8 covers the certification
            // window of every negative-definite K-orthogonal rank
            res = find_nontoric(cur, std::max(2 * res.bound_used, Int(8)));
        }
        trace.exhaustive = trace.exhaustive && res.complete;
        if (res.findings.empty()) break;
        auto [next, step] = blow_down(cur, res.findings.front());
        trace.steps.push_back(std::move(step));
        cur = std::move(next);
        notify(cur);
    }

    while (!is_minimal_model(cur)) {
        auto toric = find_toric(cur);
        if (toric.empty()) break;
        auto [next, step] = blow_down(cur, toric.front());
        trace.steps.push_back(std::move(step));
        cur = std::move(next);
        notify(cur);
    }

    if (!is_minimal_model(cur))
        throw StuckNonMinimalError(
            std::string("reduction stuck on a non-minimal configuration (search ") +
                (trace.exhaustive ? "exhaustive" : "hit its bound") + ")",
            trace.exhaustive);

    trace.label = classify_minimal(cur);
    trace.final = std::move(cur);
    return trace;
}

}  // namespace logcy

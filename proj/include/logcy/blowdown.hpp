#pragma once

#include "logcy/exceptional.hpp"

#include <algorithm>
#include <cassert>
#include <functional>
#include <vector>

namespace logcy {

struct BlowdownError : Error {
    using Error::Error;
};

// One homology-level blow-down.  `map` sends source coordinates to an adapted
// coordinate system (b_1 .. b_{r-1}, e) in which the first r-1 vectors carry
// the target lattice's Gram matrix and e is the contracted class; descending
// a class means adding (c.e) copies of e and truncating the last coordinate.
struct BlowdownStep {
    ClassVector contracted;  // in source coordinates
    bool toric = false;
    int component = 0;  // toric: removed component; non-toric: component met
    Mat map;
    AmbientLattice source;
    AmbientLattice target;
    Marking created_marking;
};

namespace detail {

// Reflection x -> x + (x.r) r across a square -2 root, as a matrix.
inline Mat reflection_matrix(const ClassVector& r) {
    const auto& L = r.lattice;
    const int n = L.rank();
    Mat R = Mat::identity(n);
    // R = I + r * (r^T G)
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            Int grj = 0;
            for (int t = 0; t < n; ++t) grj += r.c[static_cast<size_t>(t)] * L.gram(t, j);
            R(i, j) += r.c[static_cast<size_t>(i)] * grj;
        }
    }
    return R;
}

inline Mat swap_matrix(int n, int a, int b) {
    Mat P = Mat::identity(n);
    if (a != b) {
        P(a, a) = 0;
        P(b, b) = 0;
        P(a, b) = 1;
        P(b, a) = 1;
    }
    return P;
}

struct ContractionPlan {
    Mat map;
    AmbientLattice target;
};

// Move an exceptional class of Rational(n) to the last basis vector by
// Cremona reflections: while the H-degree is positive, reflect across
// H - E_a - E_b - E_c for the three largest multiplicities.  The lone d >= 1
// class of Rational(2) is H - E1 - E2, whose orthogonal complement is even:
// that contraction lands in SphereProduct coordinates instead.
inline ContractionPlan plan_rational(const AmbientLattice& L, const ClassVector& e) {
    const int n = L.blowups;
    const int r = L.rank();
    if (n == 2 && e.c == std::vector<Int>{1, -1, -1}) {
        Mat B(3, 3);  // columns: H-E1, H-E2, e
        B(0, 0) = 1; B(1, 0) = -1; B(2, 0) = 0;
        B(0, 1) = 1; B(1, 1) = 0;  B(2, 1) = -1;
        B(0, 2) = 1; B(1, 2) = -1; B(2, 2) = -1;
        return {inverse_unimodular(B), AmbientLattice::sphere_product()};
    }
    Mat M = Mat::identity(r);
    ClassVector cur = e;
    while (cur.c[0] > 0) {
        if (n < 3)
            throw BlowdownError("cannot reduce exceptional class " + e.to_string() + " in rank " +
                                std::to_string(r));
        std::vector<int> idx(static_cast<size_t>(n));
        for (int i = 0; i < n; ++i) idx[static_cast<size_t>(i)] = i + 1;
        std::sort(idx.begin(), idx.end(), [&](int a, int b) { return -cur.c[static_cast<size_t>(a)] > -cur.c[static_cast<size_t>(b)]; });
        auto root = ClassVector::zero(e.lattice);
        root.c[0] = 1;
        for (int t = 0; t < 3; ++t) root.c[static_cast<size_t>(idx[static_cast<size_t>(t)])] = -1;
        assert(self_pair(root) == -2);
        Int before = cur.c[0];
        Mat R = reflection_matrix(root);
        cur = ClassVector(e.lattice, R * cur.c);
        if (cur.c[0] >= before)
            throw BlowdownError("Cremona reduction stalled on " + e.to_string());
        M = R * M;
    }
    int p = -1;
    for (int i = 1; i < r; ++i)
        if (cur.c[static_cast<size_t>(i)] == 1) {
            if (p >= 0) throw BlowdownError("unexpected reduced class " + cur.to_string());
            p = i;
        } else if (cur.c[static_cast<size_t>(i)] != 0) {
            throw BlowdownError("unexpected reduced class " + cur.to_string());
        }
    if (cur.c[0] != 0 || p < 0) throw BlowdownError("unexpected reduced class " + cur.to_string());
    M = swap_matrix(r, p, r - 1) * M;
    return {M, AmbientLattice::rational(n - 1)};
}

// Elementary transformation: contracting f - E_1 on a once-blown-up elliptic
// ruled surface lands on the bundle with the opposite twist.
inline Mat elliptic_twist_flip(int eps) {
    Mat A(3, 3);
    if (eps == 0) {
        // f -> f', s -> s' - E', E -> f' - E'
        A(0, 0) = 1; A(0, 1) = 0; A(0, 2) = 1;
        A(1, 0) = 0; A(1, 1) = 1; A(1, 2) = 0;
        A(2, 0) = 0; A(2, 1) = -1; A(2, 2) = -1;
    } else {
        // f -> f', s -> s' + f' - E', E -> f' - E'
        A(0, 0) = 1; A(0, 1) = 1; A(0, 2) = 1;
        A(1, 0) = 0; A(1, 1) = 1; A(1, 2) = 0;
        A(2, 0) = 0; A(2, 1) = -1; A(2, 2) = -1;
    }
    return A;
}

inline ContractionPlan plan_elliptic(const AmbientLattice& L, const ClassVector& e) {
    const int n = L.blowups;
    const int r = L.rank();
    // e = E_i
    for (int i = 2; i < r; ++i) {
        auto unit = ClassVector::basis(L, i);
        if (e == unit) return {swap_matrix(r, i, r - 1), AmbientLattice::elliptic_ruled(L.twist, n - 1)};
    }
    // e = f - E_i
    int p = -1;
    bool fiber = e.c[0] == 1 && e.c[1] == 0;
    if (fiber)
        for (int i = 2; i < r; ++i) {
            if (e.c[static_cast<size_t>(i)] == -1) {
                if (p >= 0) { fiber = false; break; }
                p = i;
            } else if (e.c[static_cast<size_t>(i)] != 0) {
                fiber = false;
                break;
            }
        }
    if (!fiber || p < 0)
        throw BlowdownError("unsupported exceptional class on elliptic ruled lattice: " + e.to_string());
    if (n >= 2) {
        int q = p == 2 ? 3 : 2;
        auto root = ClassVector::zero(L);
        root.c[0] = 1;
        root.c[static_cast<size_t>(p)] = -1;
        root.c[static_cast<size_t>(q)] = -1;
        Mat R = reflection_matrix(root);  // sends f - E_p to E_q
        Mat M = swap_matrix(r, q, r - 1) * R;
        return {M, AmbientLattice::elliptic_ruled(L.twist, n - 1)};
    }
    Twist flipped = L.twist == Twist::Trivial ? Twist::Nontrivial : Twist::Trivial;
    return {elliptic_twist_flip(L.epsilon()), AmbientLattice::elliptic_ruled(flipped, 0)};
}

inline ContractionPlan plan_contraction(const AmbientLattice& L, const ClassVector& e) {
    switch (L.kind) {
        case AmbientKind::Rational:
            return plan_rational(L, e);
        case AmbientKind::EllipticRuled:
            return plan_elliptic(L, e);
        case AmbientKind::HirzebruchOne: {
            if (e.c != std::vector<Int>{-1, 1})
                throw BlowdownError("the only exceptional class of CP^2 # CP^2bar is s - f");
            Mat M(2, 2);  // inverse of columns (s, s - f)
            M(0, 0) = 1; M(0, 1) = 1;
            M(1, 0) = -1; M(1, 1) = 0;
            return {M, AmbientLattice::rational(0)};
        }
        case AmbientKind::SphereProduct:
            throw BlowdownError("the even lattice of S^2 x S^2 has no exceptional classes");
    }
    throw BlowdownError("unreachable");
}

inline void verify_finding(const DivisorConfig& D, const ExceptionalFinding& f) {
    if (f.cls.lattice != D.lattice) throw LatticeMismatchError("finding belongs to a different lattice");
    if (self_pair(f.cls) != -1 || pair(f.cls, canonical_class(D.lattice)) != -1)
        throw BlowdownError("class " + f.cls.to_string() + " is not exceptional");
    const int k = D.k();
    if (f.toric) {
        if (k <= 2) throw BlowdownError("toric contraction in a bigon is not supported");
        if (f.component < 0 || f.component >= k || D.classes[static_cast<size_t>(f.component)] != f.cls)
            throw BlowdownError("toric finding does not name a component with its class");
        int ones = 0;
        for (int j = 0; j < k; ++j) {
            if (j == f.component) continue;
            Int p = D.pairing(f.component, j);
            if (p == 1) ++ones;
            else if (p != 0) throw BlowdownError("toric finding does not meet the cycle pattern");
        }
        if (ones != 2) throw BlowdownError("toric finding does not meet exactly two neighbors");
    } else {
        for (int j = 0; j < k; ++j) {
            Int p = pair(f.cls, D.classes[static_cast<size_t>(j)]);
            Int want = j == f.component ? 1 : 0;
            if (p != want)
                throw BlowdownError("class " + f.cls.to_string() + " is not non-toric for this configuration");
        }
    }
}

inline std::optional<AreaVector> descend_areas(const std::optional<AreaVector>& areas, const Mat& M,
                                               int target_rank) {
    if (!areas) return std::nullopt;
    Mat B = inverse_unimodular(M);  // columns are the adapted basis in source coords
    AreaVector out;
    out.values.resize(static_cast<size_t>(target_rank));
    for (int i = 0; i < target_rank; ++i) {
        Rat acc = 0;
        for (int j = 0; j < B.rows; ++j) acc += areas->values[static_cast<size_t>(j)] * Rat(B(j, i));
        out.values[static_cast<size_t>(i)] = acc;
    }
    return out;
}

}  // namespace detail

inline std::pair<DivisorConfig, BlowdownStep> blow_down(const DivisorConfig& D,
                                                        const ExceptionalFinding& f) {
    detail::verify_finding(D, f);
    const auto& L = D.lattice;
    if (L.rank() < 2) throw BlowdownError("cannot blow down a rank-1 lattice");

    auto plan = detail::plan_contraction(L, f.cls);
    const int r = L.rank();
    const int tr = plan.target.rank();
    assert(tr == r - 1);

    auto descend_class = [&](const ClassVector& c) {
        auto y = plan.map * c.c;
        assert(y[static_cast<size_t>(r - 1)] == -pair(c, f.cls));
        y.resize(static_cast<size_t>(tr));
        return ClassVector(plan.target, std::move(y));
    };

    BlowdownStep step;
    step.contracted = f.cls;
    step.toric = f.toric;
    step.component = f.component;
    step.map = plan.map;
    step.source = L;
    step.target = plan.target;

    DivisorConfig out;
    out.lattice = plan.target;
    out.areas = detail::descend_areas(D.areas, plan.map, tr);

    if (!f.toric) {
        out.names = D.names;
        for (const auto& c : D.classes) out.classes.push_back(descend_class(c));
        out.edges = D.edges;
        out.markings = D.markings;
        Marking m{SmoothPoint{f.component}, f.cls};
        step.created_marking = m;
        out.markings.push_back(std::move(m));
    } else {
        const int t = f.component;
        std::vector<int> nb;
        for (int j = 0; j < D.k(); ++j)
            if (j != t && D.pairing(t, j) == 1) nb.push_back(j);
        auto shift = [&](int i) { return i > t ? i - 1 : i; };
        for (int j = 0; j < D.k(); ++j) {
            if (j == t) continue;
            out.names.push_back(D.names[static_cast<size_t>(j)]);
            out.classes.push_back(descend_class(D.classes[static_cast<size_t>(j)]));
        }
        std::vector<int> edge_remap(D.edges.size(), -1);
        for (size_t e = 0; e < D.edges.size(); ++e) {
            const auto& ed = D.edges[e];
            if (ed.i == t || ed.j == t) continue;
            edge_remap[e] = static_cast<int>(out.edges.size());
            out.edges.push_back({shift(ed.i), shift(ed.j)});
        }
        int new_edge = static_cast<int>(out.edges.size());
        out.edges.push_back(make_edge(shift(nb[0]), shift(nb[1])));
        // Markings on the contracted sphere disappear with it.
        for (const auto& m : D.markings) {
            if (std::holds_alternative<SmoothPoint>(m.center)) {
                int c = std::get<SmoothPoint>(m.center).component;
                if (c == t) continue;
                out.markings.push_back({SmoothPoint{shift(c)}, m.origin});
            } else {
                int e = std::get<IntersectionPoint>(m.center).edge;
                if (edge_remap[static_cast<size_t>(e)] < 0) continue;
                out.markings.push_back({IntersectionPoint{edge_remap[static_cast<size_t>(e)]}, m.origin});
            }
        }
        Marking m{IntersectionPoint{new_edge}, f.cls};
        step.created_marking = m;
        out.markings.push_back(std::move(m));
    }

    assert(out.total_class() == first_chern(out.lattice));
    return {std::move(out), std::move(step)};
}

namespace detail {

// Rewrites a configuration into Rational coordinates extended by one fresh
// exceptional direction, returning the class of the new exceptional sphere.
struct ExtendedConfig {
    DivisorConfig config;
    ClassVector new_class;
};

inline ExtendedConfig extend_lattice(const DivisorConfig& D) {
    const auto& L = D.lattice;
    ExtendedConfig out;
    switch (L.kind) {
        case AmbientKind::Rational: {
            auto T = AmbientLattice::rational(L.blowups + 1);
            out.config = D;
            out.config.lattice = T;
            for (auto& c : out.config.classes) {
                c.lattice = T;
                c.c.push_back(0);
            }
            out.config.areas.reset();  // blow-up sizes are not modeled
            out.new_class = ClassVector::basis(T, T.rank() - 1);
            return out;
        }
        case AmbientKind::EllipticRuled: {
            auto T = AmbientLattice::elliptic_ruled(L.twist, L.blowups + 1);
            out.config = D;
            out.config.lattice = T;
            for (auto& c : out.config.classes) {
                c.lattice = T;
                c.c.push_back(0);
            }
            out.config.areas.reset();
            out.new_class = ClassVector::basis(T, T.rank() - 1);
            return out;
        }
        case AmbientKind::HirzebruchOne: {
            DivisorConfig conv = D;
            auto R1 = AmbientLattice::rational(1);
            conv.lattice = R1;
            for (auto& c : conv.classes) c = convert_basis(c, R1);
            conv.areas.reset();
            return extend_lattice(conv);
        }
        case AmbientKind::SphereProduct: {
            // f = H - E1, s = H - E2, new sphere H - E1 - E2.
            auto T = AmbientLattice::rational(2);
            out.config = D;
            out.config.lattice = T;
            for (auto& c : out.config.classes) {
                c = ClassVector(T, {c.c[0] + c.c[1], -c.c[0], -c.c[1]});
            }
            out.config.areas.reset();
            out.new_class = ClassVector(T, {1, -1, -1});
            return out;
        }
    }
    throw InvalidArgumentError("unreachable");
}

}  // namespace detail

struct BlowupResult {
    DivisorConfig config;
    ClassVector exceptional;  // class of the created sphere, in the new lattice
};

// Proper transform of a blow-up at a smooth point of one component.
inline BlowupResult blow_up_nontoric_traced(const DivisorConfig& D, int at) {
    if (at < 0 || at >= D.k()) throw InvalidArgumentError("component index out of range");
    auto ext = detail::extend_lattice(D);
    ext.config.classes[static_cast<size_t>(at)] -= ext.new_class;
    return {std::move(ext.config), std::move(ext.new_class)};
}

inline DivisorConfig blow_up_nontoric(const DivisorConfig& D, int at) {
    return blow_up_nontoric_traced(D, at).config;
}

// Total transform of a blow-up at one intersection point: the new sphere is
// inserted into the cycle between the edge's endpoints.
inline BlowupResult blow_up_toric_traced(const DivisorConfig& D, int edge_id) {
    if (edge_id < 0 || edge_id >= static_cast<int>(D.edges.size()))
        throw InvalidArgumentError("edge index out of range");
    auto ext = detail::extend_lattice(D);
    auto& cfg = ext.config;
    Edge ed = cfg.edges[static_cast<size_t>(edge_id)];
    cfg.classes[static_cast<size_t>(ed.i)] -= ext.new_class;
    cfg.classes[static_cast<size_t>(ed.j)] -= ext.new_class;
    int nw = cfg.k();
    cfg.names.push_back("C" + std::to_string(nw + 1));
    cfg.classes.push_back(ext.new_class);

    std::vector<Edge> edges;
    std::vector<int> remap(cfg.edges.size(), -1);
    for (size_t e = 0; e < cfg.edges.size(); ++e) {
        if (static_cast<int>(e) == edge_id) continue;
        remap[e] = static_cast<int>(edges.size());
        edges.push_back(cfg.edges[e]);
    }
    edges.push_back({ed.i, nw});
    edges.push_back({nw, ed.j});
    cfg.edges = std::move(edges);

    std::vector<Marking> marks;
    for (const auto& m : cfg.markings) {
        if (std::holds_alternative<IntersectionPoint>(m.center)) {
            int e = std::get<IntersectionPoint>(m.center).edge;
            if (e == edge_id) continue;  // consumed by the blow-up at that point
            marks.push_back({IntersectionPoint{remap[static_cast<size_t>(e)]}, m.origin});
        } else {
            marks.push_back(m);
        }
    }
    cfg.markings = std::move(marks);
    return {std::move(ext.config), std::move(ext.new_class)};
}

inline DivisorConfig blow_up_toric(const DivisorConfig& D, int edge_id) {
    return blow_up_toric_traced(D, edge_id).config;
}

// Finding that contracts the sphere a traced blow-up just created.
inline ExceptionalFinding finding_for(const DivisorConfig& D, const ClassVector& cls, bool toric,
                                      int component) {
    ExceptionalFinding f;
    f.cls = cls;
    f.toric = toric;
    f.component = component;
    for (int j = 0; j < D.k(); ++j) f.certificate.push_back(pair(cls, D.classes[static_cast<size_t>(j)]));
    return f;
}

}  // namespace logcy

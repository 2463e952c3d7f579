#pragma once

#include "logcy/divisor.hpp"

#include <algorithm>
#include <cstdlib>
#include <functional>
#include <limits>
#include <vector>

namespace logcy {

struct UnnormalizedLatticeError : Error {
    using Error::Error;
};

namespace detail {

// Linear constraint pair(v, w) == target.
struct Pin {
    std::vector<Int> w;
    Int target;
};

struct EnumResult {
    std::vector<std::vector<Int>> classes;  // raw coordinates
    bool complete = false;
};

// Backtracking over the E-block of Rational(n): v = (d, a_1..a_n) with
// d fixed, sum a_i^2 == budget and all pins exact.  Pruned by Cauchy-Schwarz
// against the remaining square budget.
template <typename T>
struct RationalSearch {
    int n;
    T budget;  // d^2 - q
    struct PinT {
        std::vector<T> w;      // E-part coefficients
        T needed;              // required value of sum a_i w_i
        std::vector<T> sufw2;  // suffix sums of w^2
    };
    std::vector<PinT> pins;
    std::vector<T> a;
    std::vector<std::vector<Int>>* out;
    T d;

    bool feasible(int depth, T q) const {
        T rem = budget - q;
        if (rem < 0) return false;
        for (const auto& p : pins) {
            T have = 0;
            for (int i = 0; i < depth; ++i) have += a[static_cast<size_t>(i)] * p.w[static_cast<size_t>(i)];
            T need = p.needed - have;
            T w2 = p.sufw2[static_cast<size_t>(depth)];
            // (sum_{i>depth} a_i w_i)^2 <= w2 * rem
            if (need * need > w2 * rem) return false;
        }
        return true;
    }

    void run(int depth, T q) {
        if (depth == n) {
            if (q != budget) return;
            for (const auto& p : pins) {
                T have = 0;
                for (int i = 0; i < n; ++i) have += a[static_cast<size_t>(i)] * p.w[static_cast<size_t>(i)];
                if (have != p.needed) return;
            }
            std::vector<Int> v(static_cast<size_t>(n + 1));
            v[0] = Int(d);
            for (int i = 0; i < n; ++i) v[static_cast<size_t>(i + 1)] = Int(a[static_cast<size_t>(i)]);
            out->push_back(std::move(v));
            return;
        }
        T rem = budget - q;
        T lim = isqrt_floor(rem);
        for (T x = -lim; x <= lim; ++x) {
            a[static_cast<size_t>(depth)] = x;
            T q2 = q + x * x;
            if (q2 > budget) continue;
            if (!feasible(depth + 1, q2)) continue;
            run(depth + 1, q2);
        }
    }
};

template <typename T>
void enumerate_rational_for_d(int n, T d, T q, const std::vector<Pin>& pins,
                              std::vector<std::vector<Int>>& out) {
    T budget = d * d - q;
    if (budget < 0) return;
    RationalSearch<T> s;
    s.n = n;
    s.budget = budget;
    s.d = d;
    s.out = &out;
    s.a.assign(static_cast<size_t>(n), 0);
    for (const auto& p : pins) {
        typename RationalSearch<T>::PinT pt;
        pt.w.resize(static_cast<size_t>(n));
        for (int i = 0; i < n; ++i) pt.w[static_cast<size_t>(i)] = static_cast<T>(p.w[static_cast<size_t>(i + 1)]);
        // pair(v, w) = d*w0 - sum a_i w_i == target  =>  sum a_i w_i = d*w0 - target
        pt.needed = d * static_cast<T>(p.w[0]) - static_cast<T>(p.target);
        pt.sufw2.assign(static_cast<size_t>(n + 1), 0);
        for (int i = n - 1; i >= 0; --i)
            pt.sufw2[static_cast<size_t>(i)] = pt.sufw2[static_cast<size_t>(i + 1)] + pt.w[static_cast<size_t>(i)] * pt.w[static_cast<size_t>(i)];
        s.pins.push_back(std::move(pt));
    }
    if (!s.feasible(0, 0)) return;
    s.run(0, 0);
}

inline bool fits_int64(const Int& v) {
    static const Int lo = std::numeric_limits<std::int64_t>::min() / 4;
    static const Int hi = std::numeric_limits<std::int64_t>::max() / 4;
    return v > lo && v < hi;
}

// All v in Rational(n) with v^2 = q, pair(v, K) = t, the given pins, and
// |H-coefficient| <= dbound.  Complete when n <= 8 and the Cauchy-Schwarz
// window on the H-coefficient fits inside the bound; for n >= 9 the class
// count can be infinite and the result is honestly flagged incomplete.
inline EnumResult enumerate_rational(const AmbientLattice& L, const Int& q, const Int& t,
                                     std::vector<Pin> pins, const Int& dbound) {
    const int n = L.blowups;
    EnumResult res;
    {
        Pin kp;
        kp.w = canonical_class(L).c;
        kp.target = t;
        pins.push_back(std::move(kp));
    }
    Int dlo, dhi;
    bool window_known = false;
    if (n == 0) {
        // v = dH: d^2 = q and -3d = t.
        if (t % 3 == 0) {
            Int d = -t / 3;
            if (d * d == q && abs(d) <= dbound) res.classes.push_back({d});
        }
        res.complete = true;
        return res;
    }
    if (n <= 8) {
        // (9-n) d^2 + 6 t d + (t^2 + n q) <= 0
        Int disc = Int(n) * (t * t - Int(9 - n) * q);
        if (disc < 0) {
            res.complete = true;
            return res;
        }
        Int r = isqrt_floor(disc);
        // conservative by one on each side; leaves are checked exactly
        dlo = (-3 * t - r) / Int(9 - n) - 1;
        dhi = (-3 * t + r) / Int(9 - n) + 1;
        window_known = true;
        res.complete = (dlo >= -dbound && dhi <= dbound);
        dlo = std::max(dlo, -dbound);
        dhi = std::min(dhi, dbound);
    } else {
        dlo = -dbound;
        dhi = dbound;
        res.complete = false;
    }
    (void)window_known;

    bool small = fits_int64(q) && fits_int64(t) && fits_int64(dlo) && fits_int64(dhi);
    for (const auto& p : pins) {
        small = small && fits_int64(p.target);
        for (const auto& w : p.w) small = small && fits_int64(w);
    }
    for (Int d = dlo; d <= dhi; ++d) {
        if (small)
            enumerate_rational_for_d<std::int64_t>(n, static_cast<std::int64_t>(d),
                                                   static_cast<std::int64_t>(q), pins, res.classes);
        else
            enumerate_rational_for_d<Int>(n, d, q, pins, res.classes);
    }
    return res;
}

// Rank-2 cases are solved in closed form; the canonical-class pin keeps the
// isotropic directions finite.
inline EnumResult enumerate_rank2(const AmbientLattice& L, const Int& q, const Int& t,
                                  const std::vector<Pin>& pins, const Int& bound) {
    EnumResult res;
    res.complete = true;
    auto K = canonical_class(L);
    auto try_vec = [&](const Int& x, const Int& y) {
        ClassVector v(L, {x, y});
        if (self_pair(v) != q) return;
        if (pair(v, K) != t) return;
        for (const auto& p : pins)
            if (pair(v, ClassVector(L, p.w)) != p.target) return;
        res.classes.push_back(v.c);
    };
    // Solve the K-pin together with the norm.
    if (L.kind == AmbientKind::SphereProduct) {
        // v = (x, y): 2xy = q, -2x - 2y = t.
        if (t % 2 == 0) {
            Int s = -t / 2;  // x + y = s
            // x(s - x) * 2 = q
            for (Int x = -abs(s) - abs(q) - Int(bound); x <= abs(s) + abs(q) + Int(bound); ++x) {
                Int y = s - x;
                if (2 * x * y == q) try_vec(x, y);
            }
        }
        return res;
    }
    if (L.kind == AmbientKind::HirzebruchOne) {
        // v = (x, y): 2xy + y^2 = q, -2x - 3y = t.
        for (Int y = -abs(q) - abs(t) - Int(bound) - 2; y <= abs(q) + abs(t) + Int(bound) + 2; ++y) {
            Int rx = -t - 3 * y;
            if (rx % 2 != 0) continue;
            Int x = rx / 2;
            if (2 * x * y + y * y == q) try_vec(x, y);
        }
        return res;
    }
    throw InvalidArgumentError("enumerate_rank2 expects a rank-2 lattice");
}

// EllipticRuled(eps, n): fix the s-coefficient b (bounded by `bound`); the
// K-pin then determines the f-coefficient from the E-block, which lives in a
// finite ball.  Complete only within |b| <= bound.
inline EnumResult enumerate_elliptic(const AmbientLattice& L, const Int& q, const Int& t,
                                     const std::vector<Pin>& pins, const Int& bound,
                                     bool fiber_classes_only) {
    EnumResult res;
    const int n = L.blowups;
    const int eps = L.epsilon();
    auto K = canonical_class(L);
    auto emit_checked = [&](const Int& a, const Int& b, const std::vector<Int>& cs) {
        std::vector<Int> raw(static_cast<size_t>(2 + n));
        raw[0] = a;
        raw[1] = b;
        for (int i = 0; i < n; ++i) raw[static_cast<size_t>(2 + i)] = cs[static_cast<size_t>(i)];
        ClassVector v(L, raw);
        if (self_pair(v) != q || pair(v, K) != t) return;
        for (const auto& p : pins)
            if (pair(v, ClassVector(L, p.w)) != p.target) return;
        res.classes.push_back(std::move(raw));
    };

    Int blo = fiber_classes_only ? 0 : -bound;
    Int bhi = fiber_classes_only ? 0 : bound;
    res.complete = fiber_classes_only;
    if (!fiber_classes_only && n == 0) {
        // 0 = sum c^2 + b sum c = -q - bt pins b whenever t != 0, and t = 0
        // forces the norm to vanish; only the (0, 0) case stays infinite.
        if (t != 0) {
            res.complete = true;
            if (q % t == 0) {
                blo = bhi = -q / t;
            } else {
                return res;
            }
        } else if (q != 0) {
            res.complete = true;
            return res;
        }
    }
    for (Int b = blo; b <= bhi; ++b) {
        // With v = a f + b s + sum c_i E_i and the K-pin substituted, the
        // E-block satisfies sum (2c_i + b)^2 = 4(n b^2 / 4 - q - b t) + n b^2
        // ... solved by direct search over a bounded ball:
        // sum c_i^2 + b sum c_i = -q - b t  (for b the s-coefficient).
        Int rhs4 = Int(n) * b * b - 4 * (q + b * t);
        if (rhs4 < 0) continue;
        Int lim = (isqrt_floor(rhs4) + abs(b)) / 2 + 1;
        std::vector<Int> cs(static_cast<size_t>(n), 0);
        // small n; plain backtracking with square-budget pruning
        struct Rec {
            int n;
            Int b, rhs4;
            std::vector<Int>* cs;
            std::function<void()> leaf;
            void go(int depth, Int acc4) {  // acc4 = sum (2c+b)^2 so far
                if (depth == n) {
                    if (acc4 == rhs4) leaf();
                    return;
                }
                Int lim2 = isqrt_floor(rhs4 - acc4);
                for (Int two_c = -lim2 - 2; two_c <= lim2 + 2; ++two_c) {
                    Int num = two_c - b;
                    if (num % 2 != 0) continue;
                    Int c = num / 2;
                    Int term = (2 * c + b) * (2 * c + b);
                    if (acc4 + term > rhs4) continue;
                    (*cs)[static_cast<size_t>(depth)] = c;
                    go(depth + 1, acc4 + term);
                }
            }
        } rec;
        (void)lim;
        rec.n = n;
        rec.b = b;
        rec.rhs4 = rhs4;
        rec.cs = &cs;
        rec.leaf = [&]() {
            // a from the K-pin: -2a - eps b - sum c = t
            Int sc = 0;
            for (const auto& c : cs) sc += c;
            Int na = -t - Int(eps) * b - sc;
            if (na % 2 != 0) return;
            Int a = na / 2;
            if (abs(a) > bound && !fiber_classes_only) return;
            emit_checked(a, b, cs);
        };
        rec.go(0, 0);
    }
    return res;
}

inline EnumResult enumerate_with_pins(const AmbientLattice& L, const Int& q, const Int& t,
                                      const std::vector<Pin>& pins, const Int& bound,
                                      bool elliptic_fiber_only = false) {
    switch (L.kind) {
        case AmbientKind::Rational:
            return enumerate_rational(L, q, t, pins, bound);
        case AmbientKind::SphereProduct:
        case AmbientKind::HirzebruchOne:
            return enumerate_rank2(L, q, t, pins, bound);
        case AmbientKind::EllipticRuled:
            return enumerate_elliptic(L, q, t, pins, bound, elliptic_fiber_only);
    }
    return {};
}

// Sort key matching the write-up e = dH - sum m_i E_i: coordinates on
// negative-definite basis vectors are negated.
inline std::vector<Int> class_sort_key(const ClassVector& v) {
    std::vector<Int> key(v.c.size());
    for (size_t i = 0; i < v.c.size(); ++i)
        key[i] = v.lattice.gram(static_cast<int>(i), static_cast<int>(i)) < 0 ? -v.c[i] : v.c[i];
    return key;
}

inline bool class_key_less(const ClassVector& a, const ClassVector& b) {
    return class_sort_key(a) < class_sort_key(b);
}

}  // namespace detail

struct ExceptionalFinding {
    ClassVector cls;
    bool toric = false;
    int component = 0;  // toric: the component equal to cls; non-toric: the component met
    std::vector<Int> certificate;  // pairings with all components

    bool operator==(const ExceptionalFinding& o) const {
        return cls == o.cls && toric == o.toric && component == o.component;
    }
};

struct NontoricSearchResult {
    std::vector<ExceptionalFinding> findings;
    bool complete = false;  // all exceptional classes provably inside the bound
    Int bound_used = 0;
};

inline Int default_degree_bound(const DivisorConfig& D) {
    Int m = 1;
    for (const auto& cl : D.classes)
        for (const auto& x : cl.c) m = std::max(m, abs(x));
    return 3 * m;
}

// Non-toric exceptional classes for D: e^2 = -1, e.K = -1, and e meets
// exactly one component exactly once.  On elliptic ruled ambients the search
// is restricted to classes with e.fiber = 0: a sphere cannot dominate the
// genus-1 base, so only E_i and f - E_i can carry exceptional spheres there.
inline NontoricSearchResult find_nontoric(const DivisorConfig& D, Int degree_bound = 0) {
    const auto& L = D.lattice;
    if (L.kind == AmbientKind::SphereProduct || L.kind == AmbientKind::HirzebruchOne)
        throw UnnormalizedLatticeError(
            "find_nontoric expects Rational(n) or EllipticRuled(·, n) coordinates; convert the configuration first");
    NontoricSearchResult out;
    if (degree_bound <= 0) degree_bound = default_degree_bound(D);
    out.bound_used = degree_bound;
    if (L.blowups == 0 && L.kind == AmbientKind::Rational) {
        out.complete = true;  // definite rank-1 lattice: no square -1 classes
        return out;
    }
    if (L.blowups == 0 && L.kind == AmbientKind::EllipticRuled) {
        out.complete = true;  // no exceptional sphere classes with e.f = 0
        return out;
    }

    const int k = D.k();
    for (int j0 = 0; j0 < k; ++j0) {
        std::vector<detail::Pin> pins;
        for (int j = 0; j < k; ++j)
            pins.push_back({D.classes[static_cast<size_t>(j)].c, Int(j == j0 ? 1 : 0)});
        auto res = detail::enumerate_with_pins(L, Int(-1), Int(-1), pins, degree_bound,
                                               /*elliptic_fiber_only=*/L.kind == AmbientKind::EllipticRuled);
        if (j0 == 0) out.complete = res.complete;
        else out.complete = out.complete && res.complete;
        for (auto& raw : res.classes) {
            ExceptionalFinding f;
            f.cls = ClassVector(L, std::move(raw));
            f.toric = false;
            f.component = j0;
            for (int j = 0; j < k; ++j) f.certificate.push_back(pair(f.cls, D.classes[static_cast<size_t>(j)]));
            out.findings.push_back(std::move(f));
        }
    }
    std::sort(out.findings.begin(), out.findings.end(), [](const ExceptionalFinding& a, const ExceptionalFinding& b) {
        return detail::class_key_less(a.cls, b.cls);
    });
    out.findings.erase(std::unique(out.findings.begin(), out.findings.end()), out.findings.end());
    return out;
}

// Toric exceptional classes: components of square -1 and genus 0 meeting
// exactly two other components once each.  A bigon component of square -1
// meets its single neighbor twice; contracting it is the generalized toric
// blow-down the engine does not perform, so k <= 2 yields nothing.
inline std::vector<ExceptionalFinding> find_toric(const DivisorConfig& D) {
    std::vector<ExceptionalFinding> out;
    const int k = D.k();
    if (k <= 2) return out;
    for (int i = 0; i < k; ++i) {
        const auto& ci = D.classes[static_cast<size_t>(i)];
        if (self_pair(ci) != -1) continue;
        if (adjunction_genus(ci) != 0) continue;
        int ones = 0;
        bool good = true;
        std::vector<Int> cert;
        for (int j = 0; j < k; ++j) {
            Int p = D.pairing(i, j);
            cert.push_back(p);
            if (j == i) continue;
            if (p == 1) ++ones;
            else if (p != 0) good = false;
        }
        if (good && ones == 2) {
            ExceptionalFinding f;
            f.cls = ci;
            f.toric = true;
            f.component = i;
            f.certificate = std::move(cert);
            out.push_back(std::move(f));
        }
    }
    std::sort(out.begin(), out.end(), [](const ExceptionalFinding& a, const ExceptionalFinding& b) {
        auto ka = detail::class_sort_key(a.cls), kb = detail::class_sort_key(b.cls);
        if (ka != kb) return ka < kb;
        return a.component < b.component;
    });
    return out;
}

}  // namespace logcy

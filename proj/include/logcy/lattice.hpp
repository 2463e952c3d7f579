#pragma once

#include "logcy/numeric.hpp"

#include <optional>
#include <string>
#include <vector>

namespace logcy {

enum class AmbientKind {
    Rational,       // CP^2 blown up n times: basis H, E1..En, diag(1,-1,...,-1)
    SphereProduct,  // S^2 x S^2: basis f, s with f^2 = s^2 = 0, f.s = 1
    HirzebruchOne,  // CP^2 # CP^2bar: basis f, s with f^2 = 0, f.s = 1, s^2 = 1
    EllipticRuled,  // sphere bundle over T^2, blown up n times: f, s, E1..En
};

enum class Twist { Trivial, Nontrivial };

// Intersection lattice of an ambient 4-manifold.  Kind, twist and blow-up
// count determine the whole structure (rank, Gram matrix, canonical class,
// basis names); instances are cheap immutable values.
struct AmbientLattice {
    AmbientKind kind = AmbientKind::Rational;
    int blowups = 0;             // the n of Rational(n) / EllipticRuled(·, n)
    Twist twist = Twist::Trivial;  // elliptic ruled only

    static AmbientLattice rational(int n) {
        if (n < 0) throw InvalidArgumentError("Rational(n) needs n >= 0");
        return {AmbientKind::Rational, n, Twist::Trivial};
    }
    static AmbientLattice sphere_product() { return {AmbientKind::SphereProduct, 0, Twist::Trivial}; }
    static AmbientLattice hirzebruch_one() { return {AmbientKind::HirzebruchOne, 0, Twist::Trivial}; }
    static AmbientLattice elliptic_ruled(Twist t, int n) {
        if (n < 0) throw InvalidArgumentError("EllipticRuled(·, n) needs n >= 0");
        return {AmbientKind::EllipticRuled, n, t};
    }

    int rank() const {
        switch (kind) {
            case AmbientKind::Rational: return 1 + blowups;
            case AmbientKind::SphereProduct:
            case AmbientKind::HirzebruchOne: return 2;
            case AmbientKind::EllipticRuled: return 2 + blowups;
        }
        return 0;
    }

    int epsilon() const { return twist == Twist::Nontrivial ? 1 : 0; }

    // Gram matrix entry in the standard basis.
    Int gram(int i, int j) const {
        switch (kind) {
            case AmbientKind::Rational:
                if (i != j) return 0;
                return i == 0 ? 1 : -1;
            case AmbientKind::SphereProduct:
                return i == j ? 0 : 1;
            case AmbientKind::HirzebruchOne:
                if (i != j) return 1;
                return i == 1 ? 1 : 0;
            case AmbientKind::EllipticRuled:
                if (i >= 2 || j >= 2) return i == j ? -1 : 0;
                if (i != j) return 1;
                return i == 1 ? epsilon() : 0;
        }
        return 0;
    }

    Mat gram_matrix() const {
        const int r = rank();
        Mat g(r, r);
        for (int i = 0; i < r; ++i)
            for (int j = 0; j < r; ++j) g(i, j) = gram(i, j);
        return g;
    }

    std::string basis_name(int i) const {
        switch (kind) {
            case AmbientKind::Rational:
                return i == 0 ? "H" : "E" + std::to_string(i);
            case AmbientKind::SphereProduct:
            case AmbientKind::HirzebruchOne:
                return i == 0 ? "f" : "s";
            case AmbientKind::EllipticRuled:
                if (i == 0) return "f";
                if (i == 1) return "s";
                return "E" + std::to_string(i - 1);
        }
        return "?";
    }

    // True for the minimal ambient manifolds of Definition 3.3's first branch.
    bool is_minimal_ambient() const {
        switch (kind) {
            case AmbientKind::Rational: return blowups == 0;
            case AmbientKind::SphereProduct: return true;
            case AmbientKind::HirzebruchOne: return false;
            case AmbientKind::EllipticRuled: return blowups == 0;
        }
        return false;
    }

    // Rank-2 odd unimodular lattice: CP^2 # CP^2bar in either coordinate set.
    bool is_one_point_blowup_of_plane() const {
        return kind == AmbientKind::HirzebruchOne ||
               (kind == AmbientKind::Rational && blowups == 1);
    }

    bool operator==(const AmbientLattice& o) const {
        if (kind != o.kind) return false;
        if (kind == AmbientKind::Rational || kind == AmbientKind::EllipticRuled)
            if (blowups != o.blowups) return false;
        if (kind == AmbientKind::EllipticRuled && twist != o.twist) return false;
        return true;
    }
    bool operator!=(const AmbientLattice& o) const { return !(*this == o); }
};

// Integer homology class in the standard basis of its lattice.
struct ClassVector {
    AmbientLattice lattice;
    std::vector<Int> c;

    ClassVector() = default;
    ClassVector(AmbientLattice l, std::vector<Int> coeffs) : lattice(l), c(std::move(coeffs)) {
        if (static_cast<int>(c.size()) != lattice.rank())
            throw InvalidArgumentError("coefficient count does not match lattice rank");
    }

    static ClassVector zero(const AmbientLattice& l) {
        return ClassVector(l, std::vector<Int>(static_cast<size_t>(l.rank()), 0));
    }
    static ClassVector basis(const AmbientLattice& l, int i) {
        auto v = zero(l);
        v.c[static_cast<size_t>(i)] = 1;
        return v;
    }

    bool operator==(const ClassVector& o) const { return lattice == o.lattice && c == o.c; }
    bool operator!=(const ClassVector& o) const { return !(*this == o); }

    ClassVector& operator+=(const ClassVector& o) {
        if (lattice != o.lattice) throw LatticeMismatchError("class vectors live in different lattices");
        for (size_t i = 0; i < c.size(); ++i) c[i] += o.c[i];
        return *this;
    }
    ClassVector& operator-=(const ClassVector& o) {
        if (lattice != o.lattice) throw LatticeMismatchError("class vectors live in different lattices");
        for (size_t i = 0; i < c.size(); ++i) c[i] -= o.c[i];
        return *this;
    }
    friend ClassVector operator+(ClassVector a, const ClassVector& b) { return a += b; }
    friend ClassVector operator-(ClassVector a, const ClassVector& b) { return a -= b; }
    friend ClassVector operator*(const Int& k, ClassVector a) {
        for (auto& x : a.c) x *= k;
        return a;
    }
    friend ClassVector operator-(ClassVector a) {
        for (auto& x : a.c) x = -x;
        return a;
    }

    std::string to_string() const {
        std::string out;
        bool first = true;
        for (size_t i = 0; i < c.size(); ++i) {
            if (c[i] == 0) continue;
            Int v = c[i];
            if (first) {
                if (v < 0) { out += "-"; v = -v; }
            } else {
                out += v < 0 ? " - " : " + ";
                if (v < 0) v = -v;
            }
            if (v != 1) out += v.str();
            out += lattice.basis_name(static_cast<int>(i));
            first = false;
        }
        if (first) out = "0";
        return out;
    }
};

inline Int pair(const ClassVector& x, const ClassVector& y) {
    if (x.lattice != y.lattice) throw LatticeMismatchError("pairing across different lattices");
    const auto& L = x.lattice;
    Int acc = 0;
    switch (L.kind) {
        case AmbientKind::Rational: {
            acc = x.c[0] * y.c[0];
            for (size_t i = 1; i < x.c.size(); ++i) acc -= x.c[i] * y.c[i];
            return acc;
        }
        case AmbientKind::SphereProduct:
            return x.c[0] * y.c[1] + x.c[1] * y.c[0];
        case AmbientKind::HirzebruchOne:
            return x.c[0] * y.c[1] + x.c[1] * y.c[0] + x.c[1] * y.c[1];
        case AmbientKind::EllipticRuled: {
            acc = x.c[0] * y.c[1] + x.c[1] * y.c[0];
            if (L.epsilon()) acc += x.c[1] * y.c[1];
            for (size_t i = 2; i < x.c.size(); ++i) acc -= x.c[i] * y.c[i];
            return acc;
        }
    }
    return acc;
}

inline Int self_pair(const ClassVector& x) { return pair(x, x); }

// Canonical class K in the standard basis.
inline ClassVector canonical_class(const AmbientLattice& L) {
    auto k = ClassVector::zero(L);
    switch (L.kind) {
        case AmbientKind::Rational:
            k.c[0] = -3;
            for (int i = 1; i <= L.blowups; ++i) k.c[static_cast<size_t>(i)] = 1;
            break;
        case AmbientKind::SphereProduct:
            k.c[0] = -2;
            k.c[1] = -2;
            break;
        case AmbientKind::HirzebruchOne:
            k.c[0] = -1;
            k.c[1] = -2;
            break;
        case AmbientKind::EllipticRuled:
            k.c[0] = L.epsilon();
            k.c[1] = -2;
            for (int i = 0; i < L.blowups; ++i) k.c[static_cast<size_t>(2 + i)] = 1;
            break;
    }
    return k;
}

inline ClassVector first_chern(const AmbientLattice& L) { return -canonical_class(L); }

// Genus of an embedded representative, from c.D = c^2 + 2 - 2g with D = -K.
inline Int adjunction_genus(const ClassVector& c) {
    Int num = self_pair(c) + 2 + pair(c, canonical_class(c.lattice));
    if (num < 0 || num % 2 != 0)
        throw NotEmbeddableClassError("class cannot be represented by an embedded surface: " + c.to_string());
    return num / 2;
}

// Coordinate dictionaries between the isomorphic presentations of
// CP^2 # CP^2bar: f = H - E1, s = H.  The SphereProduct dictionary
// (f = H - E1, s = H - E2, exceptional class H - E1 - E2) changes rank and is
// used by the blow-up/blow-down engine rather than exposed here.
inline ClassVector convert_basis(const ClassVector& v, const AmbientLattice& target) {
    const auto& src = v.lattice;
    if (src == target) return v;
    if (src.kind == AmbientKind::HirzebruchOne && target == AmbientLattice::rational(1)) {
        // f -> H - E1, s -> H
        return ClassVector(target, {v.c[0] + v.c[1], -v.c[0]});
    }
    if (src == AmbientLattice::rational(1) && target.kind == AmbientKind::HirzebruchOne) {
        // H -> s, E1 -> s - f
        return ClassVector(target, {-v.c[1], v.c[0] + v.c[1]});
    }
    throw InvalidArgumentError("unsupported lattice conversion");
}

}  // namespace logcy

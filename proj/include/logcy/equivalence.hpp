#pragma once

#include "logcy/reduction.hpp"

#include <algorithm>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace logcy {

// Lattice automorphism, acting on coordinates as x -> m x.
struct Isometry {
    AmbientLattice lattice;
    Mat m;

    bool operator==(const Isometry& o) const { return lattice == o.lattice && m == o.m; }
};

inline bool preserves_gram(const Isometry& phi) {
    Mat g = phi.lattice.gram_matrix();
    return transpose(phi.m) * g * phi.m == g;
}

inline ClassVector apply(const Isometry& phi, const ClassVector& v) {
    if (phi.lattice != v.lattice) throw LatticeMismatchError("isometry acts on a different lattice");
    return ClassVector(v.lattice, phi.m * v.c);
}

// Pushforward of a whole configuration; the anticanonical condition must be
// preserved or the image is not a log Calabi-Yau divisor.
inline DivisorConfig apply(const Isometry& phi, const DivisorConfig& D) {
    DivisorConfig out = D;
    for (auto& c : out.classes) c = apply(phi, c);
    if (out.total_class() != first_chern(out.lattice))
        throw InvalidArgumentError("isometry does not fix the canonical class; image is not anticanonical");
    if (D.areas) {
        Mat minv_t = transpose(inverse_unimodular(phi.m));
        AreaVector v;
        v.values.resize(D.areas->values.size());
        for (int i = 0; i < minv_t.rows; ++i) {
            Rat acc = 0;
            for (int j = 0; j < minv_t.cols; ++j)
                acc += Rat(minv_t(i, j)) * D.areas->values[static_cast<size_t>(j)];
            v.values[static_cast<size_t>(i)] = acc;
        }
        out.areas = v;
    }
    return out;
}

// Brute-force enumeration of all isometries with entries bounded by
// coefficient_bound; desk-scale oracle for cross-checking decide.
inline std::vector<Isometry> isometry_oracle(const AmbientLattice& L, int coefficient_bound) {
    const int r = L.rank();
    if (r > 4) throw InvalidArgumentError("isometry_oracle is limited to rank <= 4");
    Mat g = L.gram_matrix();
    std::vector<Isometry> out;
    std::vector<std::vector<Int>> cols;

    std::function<void(int)> place = [&](int p) {
        if (p == r) {
            Mat m(r, r);
            for (int i = 0; i < r; ++i)
                for (int j = 0; j < r; ++j) m(i, j) = cols[static_cast<size_t>(j)][static_cast<size_t>(i)];
            Isometry phi{L, m};
            if (preserves_gram(phi)) out.push_back(std::move(phi));
            return;
        }
        std::vector<Int> v(static_cast<size_t>(r), -coefficient_bound);
        while (true) {
            // check pairings against already placed columns and the norm
            ClassVector cv(L, v);
            bool ok = self_pair(cv) == g(p, p);
            for (int q = 0; ok && q < p; ++q)
                ok = pair(cv, ClassVector(L, cols[static_cast<size_t>(q)])) == g(p, q);
            if (ok) {
                cols.push_back(v);
                place(p + 1);
                cols.pop_back();
            }
            int i = r - 1;
            while (i >= 0 && v[static_cast<size_t>(i)] == coefficient_bound) {
                v[static_cast<size_t>(i)] = -coefficient_bound;
                --i;
            }
            if (i < 0) break;
            v[static_cast<size_t>(i)] += 1;
        }
    };
    place(0);
    return out;
}

enum class DecideMode { Indexed, Unindexed };
enum class VerdictStatus { Equivalent, NotEquivalent, Unknown };

struct Verdict {
    VerdictStatus status = VerdictStatus::Unknown;
    std::optional<Isometry> witness;  // on the normalized lattice of D1
    std::vector<int> sigma;           // component relabeling: C1_j -> C2_sigma[j]
    std::string obstruction;
    bool strict = false;
    DecideMode mode = DecideMode::Unindexed;

    bool equivalent() const { return status == VerdictStatus::Equivalent; }
};

namespace detail {

// Walk the dual cycle of a validated k-gon: component indices in cycle order.
inline std::vector<int> cycle_order(const DivisorConfig& D) {
    const int k = D.k();
    std::vector<int> order = {0};
    if (k <= 2) {
        if (k == 2) order.push_back(1);
        return order;
    }
    int prev = -1, cur = 0;
    for (int t = 1; t < k; ++t) {
        int nxt = -1;
        for (int j = 0; j < k; ++j) {
            if (j == cur || j == prev) continue;
            if (D.pairing(cur, j) == 1) { nxt = j; break; }
        }
        if (nxt < 0) throw Error("cycle walk failed on a validated configuration");
        order.push_back(nxt);
        prev = cur;
        cur = nxt;
    }
    return order;
}

// Index bijections induced by isomorphisms of the two dual graphs; for k-gons
// these are the dihedral correspondences.
inline std::vector<std::vector<int>> sigma_candidates(const DivisorConfig& A, const DivisorConfig& B,
                                                      DecideMode mode) {
    const int k = A.k();
    std::vector<std::vector<int>> out;
    if (mode == DecideMode::Indexed) {
        std::vector<int> id(static_cast<size_t>(k));
        for (int i = 0; i < k; ++i) id[static_cast<size_t>(i)] = i;
        out.push_back(std::move(id));
        return out;
    }
    if (k == 1) {
        out.push_back({0});
        return out;
    }
    if (k == 2) {
        out.push_back({0, 1});
        out.push_back({1, 0});
        return out;
    }
    auto oa = cycle_order(A);
    auto ob = cycle_order(B);
    for (int off = 0; off < k; ++off)
        for (int dir : {1, -1}) {
            std::vector<int> sigma(static_cast<size_t>(k));
            for (int t = 0; t < k; ++t) {
                int bt = ((off + dir * t) % k + k) % k;
                sigma[static_cast<size_t>(oa[static_cast<size_t>(t)])] = ob[static_cast<size_t>(bt)];
            }
            out.push_back(std::move(sigma));
        }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

inline bool gram_matches(const DivisorConfig& A, const DivisorConfig& B, const std::vector<int>& sigma) {
    const int k = A.k();
    for (int i = 0; i < k; ++i)
        for (int j = 0; j < k; ++j)
            if (A.pairing(i, j) != B.pairing(sigma[static_cast<size_t>(i)], sigma[static_cast<size_t>(j)]))
                return false;
    return true;
}

// Express v as a rational combination of the given vectors; empty if v is
// outside their span.
inline std::optional<std::vector<Rat>> solve_in_span(const std::vector<std::vector<Int>>& span,
                                                     const std::vector<Int>& v) {
    const int rows = static_cast<int>(v.size());
    const int cols = static_cast<int>(span.size());
    std::vector<std::vector<Rat>> w(static_cast<size_t>(rows), std::vector<Rat>(static_cast<size_t>(cols + 1)));
    for (int i = 0; i < rows; ++i) {
        for (int j = 0; j < cols; ++j) w[static_cast<size_t>(i)][static_cast<size_t>(j)] = Rat(span[static_cast<size_t>(j)][static_cast<size_t>(i)]);
        w[static_cast<size_t>(i)][static_cast<size_t>(cols)] = Rat(v[static_cast<size_t>(i)]);
    }
    std::vector<int> pivot_col;
    int row = 0;
    for (int c = 0; c < cols && row < rows; ++c) {
        int p = -1;
        for (int rr = row; rr < rows; ++rr)
            if (w[static_cast<size_t>(rr)][static_cast<size_t>(c)] != 0) { p = rr; break; }
        if (p < 0) continue;
        std::swap(w[static_cast<size_t>(row)], w[static_cast<size_t>(p)]);
        Rat piv = w[static_cast<size_t>(row)][static_cast<size_t>(c)];
        for (auto& x : w[static_cast<size_t>(row)]) x /= piv;
        for (int rr = 0; rr < rows; ++rr) {
            if (rr == row) continue;
            Rat f = w[static_cast<size_t>(rr)][static_cast<size_t>(c)];
            if (f == 0) continue;
            for (int cc = 0; cc <= cols; ++cc)
                w[static_cast<size_t>(rr)][static_cast<size_t>(cc)] -= f * w[static_cast<size_t>(row)][static_cast<size_t>(cc)];
        }
        pivot_col.push_back(c);
        ++row;
    }
    // consistency
    for (int rr = row; rr < rows; ++rr)
        if (w[static_cast<size_t>(rr)][static_cast<size_t>(cols)] != 0) return std::nullopt;
    std::vector<Rat> coeff(static_cast<size_t>(cols), Rat(0));
    for (size_t t = 0; t < pivot_col.size(); ++t)
        coeff[static_cast<size_t>(pivot_col[t])] = w[t][static_cast<size_t>(cols)];
    return coeff;
}

struct ExtensionSearch {
    const AmbientLattice* L = nullptr;
    std::vector<std::vector<Int>> known_src;  // vectors with pinned images
    std::vector<std::vector<Int>> known_img;
    std::uint64_t budget = 0;
    bool complete = true;
    Int coeff_bound = 0;

    std::function<bool(const Mat&)> on_witness;  // return true to stop

    bool run(int p) {
        const int r = L->rank();
        if (p == r) {
            Mat m(r, r);
            // known_src ends with the r basis images appended in order
            for (int j = 0; j < r; ++j) {
                const auto& img = known_img[known_img.size() - static_cast<size_t>(r - j)];
                for (int i = 0; i < r; ++i) m(i, j) = img[static_cast<size_t>(i)];
            }
            return on_witness(m);
        }
        auto bp = ClassVector::basis(*L, p);
        // If b_p lies in the span of the pinned vectors, its image is forced.
        if (auto coeff = solve_in_span(known_src, bp.c)) {
            std::vector<Rat> img(static_cast<size_t>(r), Rat(0));
            for (size_t t = 0; t < coeff->size(); ++t)
                for (int i = 0; i < r; ++i)
                    img[static_cast<size_t>(i)] += (*coeff)[t] * Rat(known_img[t][static_cast<size_t>(i)]);
            std::vector<Int> iv(static_cast<size_t>(r));
            for (int i = 0; i < r; ++i) {
                if (denominator(img[static_cast<size_t>(i)]) != 1) return false;  // no integral image
                iv[static_cast<size_t>(i)] = numerator(img[static_cast<size_t>(i)]);
            }
            known_src.push_back(bp.c);
            known_img.push_back(std::move(iv));
            bool stop = run(p + 1);
            known_src.pop_back();
            known_img.pop_back();
            return stop;
        }
        // Otherwise enumerate candidate images with all pairings pinned.
        std::vector<Pin> pins;
        for (size_t t = 0; t < known_src.size(); ++t)
            pins.push_back({known_img[t], pair(bp, ClassVector(*L, known_src[t]))});
        Int q = self_pair(bp);
        Int tk = pair(bp, canonical_class(*L));
        auto res = enumerate_with_pins(*L, q, tk, pins, coeff_bound);
        complete = complete && res.complete;
        std::sort(res.classes.begin(), res.classes.end());
        for (auto& cand : res.classes) {
            if (budget == 0) {
                complete = false;
                return false;
            }
            --budget;
            known_src.push_back(bp.c);
            known_img.push_back(cand);
            bool stop = run(p + 1);
            known_src.pop_back();
            known_img.pop_back();
            if (stop) return true;
        }
        return false;
    }
};

}  // namespace detail

// Decide (strict) homological equivalence at the lattice level: search for an
// integral Gram-preserving map sending the component tuple of D1 to that of
// D2 under an allowed relabeling.  Which lattice isometries are realized by
// diffeomorphisms is not addressed here; all equivalences the construction
// produces act by isometries.
inline Verdict decide(const DivisorConfig& D1in, const DivisorConfig& D2in,
                      DecideMode mode = DecideMode::Unindexed, bool strict = false,
                      std::uint64_t budget = 1000000) {
    Verdict v;
    v.mode = mode;
    v.strict = strict;
    if (strict && (!D1in.areas || !D2in.areas))
        throw InvalidArgumentError("strict equivalence requires area data on both configurations");

    DivisorConfig A = normalize_coordinates(D1in);
    DivisorConfig B = normalize_coordinates(D2in);

    if (A.lattice != B.lattice) {
        v.status = VerdictStatus::NotEquivalent;
        v.obstruction = "ambient lattices differ";
        return v;
    }
    if (A.k() != B.k()) {
        v.status = VerdictStatus::NotEquivalent;
        v.obstruction = "component counts differ (" + std::to_string(A.k()) + " vs " + std::to_string(B.k()) + ")";
        return v;
    }
    {
        auto ga = genus_profile(A), gb = genus_profile(B);
        auto sa = ga, sb = gb;
        std::sort(sa.begin(), sa.end());
        std::sort(sb.begin(), sb.end());
        if (sa != sb) {
            v.status = VerdictStatus::NotEquivalent;
            v.obstruction = "genus profiles differ";
            return v;
        }
    }

    auto sigmas = detail::sigma_candidates(A, B, mode);
    std::vector<std::vector<int>> viable;
    for (const auto& s : sigmas)
        if (detail::gram_matches(A, B, s)) viable.push_back(s);
    if (viable.empty()) {
        v.status = VerdictStatus::NotEquivalent;
        v.obstruction = mode == DecideMode::Indexed
                            ? "component Gram matrices differ"
                            : "component Gram matrices differ under every dual-graph relabeling";
        return v;
    }

    // Candidate coefficient bound: generous multiple of everything in sight.
    // Up to eight blow-ups the K-orthogonal complement is negative definite
    // and every candidate window is certified below 20, so NotEquivalent is
    // definitive there.
    Int cb = 3;
    for (const auto& c : A.classes)
        for (const auto& x : c.c) cb = std::max(cb, Int(3) * abs(x));
    for (const auto& c : B.classes)
        for (const auto& x : c.c) cb = std::max(cb, Int(3) * abs(x));
    if (A.lattice.kind == AmbientKind::Rational && A.lattice.blowups <= 8) cb = std::max(cb, Int(20));

    bool all_complete = true;
    const Mat g = A.lattice.gram_matrix();
    for (const auto& sigma : viable) {
        detail::ExtensionSearch search;
        search.L = &A.lattice;
        search.budget = budget;
        search.coeff_bound = cb;
        for (int j = 0; j < A.k(); ++j) {
            search.known_src.push_back(A.classes[static_cast<size_t>(j)].c);
            search.known_img.push_back(B.classes[static_cast<size_t>(sigma[static_cast<size_t>(j)])].c);
        }
        std::optional<Mat> found;
        search.on_witness = [&](const Mat& m) {
            if (transpose(m) * g * m != g) return false;
            if (strict) {
                // need A.areas = m^T B.areas as functionals
                for (int i = 0; i < m.rows; ++i) {
                    Rat acc = 0;
                    for (int j = 0; j < m.rows; ++j)
                        acc += Rat(m(j, i)) * B.areas->values[static_cast<size_t>(j)];
                    if (acc != A.areas->values[static_cast<size_t>(i)]) return false;
                }
            }
            found = m;
            return true;
        };
        search.run(0);
        all_complete = all_complete && search.complete;
        if (found) {
            Isometry phi{A.lattice, *found};
            // verify before returning
            if (!preserves_gram(phi)) throw Error("internal: witness fails Gram check");
            for (int j = 0; j < A.k(); ++j)
                if (apply(phi, A.classes[static_cast<size_t>(j)]) != B.classes[static_cast<size_t>(sigma[static_cast<size_t>(j)])])
                    throw Error("internal: witness does not map the component tuple");
            v.status = VerdictStatus::Equivalent;
            v.witness = std::move(phi);
            v.sigma = sigma;
            return v;
        }
    }

    if (all_complete) {
        v.status = VerdictStatus::NotEquivalent;
        v.obstruction = strict ? "no lattice isometry matches both the components and the area functional"
                               : "no lattice isometry maps the component tuple";
    } else {
        v.status = VerdictStatus::Unknown;
        v.obstruction = "search budget exhausted before the candidate space was covered";
    }
    return v;
}

}  // namespace logcy

#pragma once

#include "logcy/reduction.hpp"

#include <random>
#include <string>
#include <vector>

namespace logcy {

struct LabeledModel {
    MinimalModelLabel label;
    DivisorConfig config;
};

// The full minimal-model table with parameters in [plo, phi]; labels are the
// classifier's normalized ones.
inline std::vector<LabeledModel> minimal_model_corpus(const Int& plo, const Int& phi) {
    std::vector<LabeledModel> out;
    auto push_all = [&](const AmbientLattice& amb, int k) {
        for (auto& cfg : enumerate_minimal(amb, k, plo, phi))
            out.push_back({classify_minimal(cfg), std::move(cfg)});
    };
    auto r0 = AmbientLattice::rational(0);
    push_all(r0, 1);
    push_all(r0, 2);
    push_all(r0, 3);
    auto sp = AmbientLattice::sphere_product();
    for (int k = 1; k <= 4; ++k) push_all(sp, k);
    auto h1 = AmbientLattice::hirzebruch_one();
    for (int k = 2; k <= 4; ++k) push_all(h1, k);
    push_all(AmbientLattice::elliptic_ruled(Twist::Trivial, 0), 1);
    push_all(AmbientLattice::elliptic_ruled(Twist::Nontrivial, 0), 1);
    return out;
}

struct BlowupMove {
    bool toric = false;
    int where = 0;  // component (non-toric) or edge id (toric)
};

inline std::vector<BlowupMove> legal_moves(const DivisorConfig& D) {
    std::vector<BlowupMove> moves;
    for (int i = 0; i < D.k(); ++i) moves.push_back({false, i});
    for (int e = 0; e < static_cast<int>(D.edges.size()); ++e) moves.push_back({true, e});
    return moves;
}

struct TracedBlowup {
    DivisorConfig config;
    ClassVector exceptional;
    BlowupMove move;
};

inline TracedBlowup random_blowup(const DivisorConfig& D, std::mt19937_64& rng) {
    auto moves = legal_moves(D);
    auto mv = moves[static_cast<size_t>(rng() % moves.size())];
    auto res = mv.toric ? blow_up_toric_traced(D, mv.where) : blow_up_nontoric_traced(D, mv.where);
    return {std::move(res.config), std::move(res.exceptional), mv};
}

// Deterministic small search for an area functional that is positive on every
// component; only needed at the tiny ranks of the minimal models.
inline AreaVector positive_areas(const DivisorConfig& D, int limit = 60) {
    const int r = D.lattice.rank();
    std::vector<int> v(static_cast<size_t>(r), 1);
    auto works = [&]() {
        DivisorConfig probe = D;
        AreaVector av;
        for (int x : v) av.values.push_back(Rat(x));
        probe.areas = av;
        for (int i = 0; i < probe.k(); ++i)
            if (probe.component_area(i) <= 0) return false;
        return true;
    };
    std::function<bool(int)> rec = [&](int p) {
        if (p == r) return works();
        for (int x = 1; x <= limit; ++x) {
            v[static_cast<size_t>(p)] = x;
            if (rec(p + 1)) return true;
        }
        return false;
    };
    if (!rec(0)) throw Error("no positive area functional found below the search limit");
    AreaVector av;
    for (int x : v) av.values.push_back(Rat(x));
    return av;
}

}  // namespace logcy

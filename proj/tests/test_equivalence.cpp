#include "logcy/equivalence.hpp"
#include "logcy/generate.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <random>

using namespace logcy;

namespace {

ClassVector cv(const AmbientLattice& L, std::vector<Int> c) { return ClassVector(L, std::move(c)); }

DivisorConfig permuted(const DivisorConfig& D, const std::vector<int>& perm) {
    DivisorConfig P;
    P.lattice = D.lattice;
    for (int i : perm) {
        P.names.push_back(D.names[static_cast<size_t>(i)]);
        P.classes.push_back(D.classes[static_cast<size_t>(i)]);
    }
    P.edges = edges_from_pairings(P.classes);
    P.areas = D.areas;
    return P;
}

std::vector<Isometry> fixing_k(const std::vector<Isometry>& all, const AmbientLattice& L) {
    std::vector<Isometry> out;
    auto K = canonical_class(L);
    for (const auto& phi : all)
        if (apply(phi, K) == K) out.push_back(phi);
    return out;
}

}  // namespace

TEST_CASE("decide is reflexive") {
    auto r0 = AmbientLattice::rational(0);
    auto B3 = make_config(r0, {cv(r0, {1}), cv(r0, {1}), cv(r0, {1})});
    auto v = decide(B3, B3);
    REQUIRE(v.equivalent());
    CHECK(v.witness->m == Mat::identity(1));
}

TEST_CASE("component counts separate B2 from B3") {
    auto r0 = AmbientLattice::rational(0);
    auto B2 = make_config(r0, {cv(r0, {1}), cv(r0, {2})});
    auto B3 = make_config(r0, {cv(r0, {1}), cv(r0, {1}), cv(r0, {1})});
    auto v = decide(B2, B3);
    CHECK(v.status == VerdictStatus::NotEquivalent);
    CHECK(v.obstruction.find("component counts") != std::string::npos);
}

TEST_CASE("indexed versus unindexed on the swapped bigon") {
    auto sp = AmbientLattice::sphere_product();
    auto D1 = make_config(sp, {cv(sp, {1, 0}), cv(sp, {1, 2})});
    auto D2 = make_config(sp, {cv(sp, {1, 2}), cv(sp, {1, 0})});
    auto indexed = decide(D1, D2, DecideMode::Indexed);
    CHECK(indexed.status == VerdictStatus::NotEquivalent);
    auto unindexed = decide(D1, D2, DecideMode::Unindexed);
    REQUIRE(unindexed.equivalent());
    CHECK(unindexed.witness->m == Mat::identity(2));
    CHECK(unindexed.sigma == std::vector<int>{1, 0});
}

TEST_CASE("oracle contents on small lattices") {
    auto r1 = AmbientLattice::rational(1);
    auto all = isometry_oracle(r1, 2);
    Mat id = Mat::identity(2);
    Mat neg = id;
    neg(0, 0) = -1;
    neg(1, 1) = -1;
    Mat flip = id;
    flip(1, 1) = -1;  // H -> H, E1 -> -E1 preserves diag(1, -1)
    auto contains = [&](const Mat& m) {
        return std::any_of(all.begin(), all.end(), [&](const Isometry& p) { return p.m == m; });
    };
    CHECK(contains(id));
    CHECK(contains(neg));
    CHECK(contains(flip));

    auto sp = AmbientLattice::sphere_product();
    auto sp_all = isometry_oracle(sp, 1);
    Mat swap(2, 2);
    swap(0, 1) = 1;
    swap(1, 0) = 1;
    CHECK(std::any_of(sp_all.begin(), sp_all.end(), [&](const Isometry& p) { return p.m == swap; }));
    // the hyperbolic plane has exactly four isometries: {1, -1} x {1, swap}
    CHECK(sp_all.size() == 4);

    CHECK_THROWS_AS(isometry_oracle(AmbientLattice::rational(4), 1), InvalidArgumentError);
}

TEST_CASE("every oracle isometry preserves the form") {
    for (const auto& L : {AmbientLattice::rational(2), AmbientLattice::sphere_product(),
                          AmbientLattice::hirzebruch_one()}) {
        for (const auto& phi : isometry_oracle(L, 1)) {
            CHECK(preserves_gram(phi));
            Int d = det(phi.m);
            CHECK((d == 1 || d == -1));
        }
    }
}

TEST_CASE("apply examples") {
    auto sp = AmbientLattice::sphere_product();
    auto C2 = make_config(sp, {cv(sp, {1, 0}), cv(sp, {1, 2})});
    Isometry id{sp, Mat::identity(2)};
    CHECK(equal_modulo_markings(apply(id, C2), C2));

    Mat swap(2, 2);
    swap(0, 1) = 1;
    swap(1, 0) = 1;
    Isometry sw{sp, swap};
    auto image = apply(sw, C2);
    CHECK(image.classes[0] == cv(sp, {0, 1}));
    CHECK(image.classes[1] == cv(sp, {2, 1}));
    CHECK(validate(image).ok());
    CHECK(decide(C2, image, DecideMode::Unindexed).equivalent());

    Mat neg = Mat::identity(2);
    neg(0, 0) = -1;
    neg(1, 1) = -1;
    CHECK_THROWS_AS(apply(Isometry{sp, neg}, C2), InvalidArgumentError);
}

TEST_CASE("witnesses are sound") {
    std::mt19937_64 rng(31);
    auto sp = AmbientLattice::sphere_product();
    auto oracle = fixing_k(isometry_oracle(sp, 2), sp);
    REQUIRE_FALSE(oracle.empty());
    for (int b = -2; b <= 2; ++b) {
        auto D = make_config(sp, {cv(sp, {1, Int(b)}), cv(sp, {1, Int(2 - b)})});
        auto phi = oracle[rng() % oracle.size()];
        std::vector<int> perm = {static_cast<int>(rng() % 2), 0};
        perm[1] = 1 - perm[0];
        auto D2 = apply(phi, permuted(D, perm));
        auto v = decide(D, D2);
        REQUIRE(v.equivalent());
        // re-verify: the witness transports the tuple onto D2 under sigma
        for (int j = 0; j < D.k(); ++j)
            CHECK(apply(*v.witness, D.classes[static_cast<size_t>(j)]) ==
                  D2.classes[static_cast<size_t>(v.sigma[static_cast<size_t>(j)])]);
        // and the relation is symmetric
        CHECK(decide(D2, D).equivalent());
    }
}

TEST_CASE("decide agrees with the oracle on random pairs") {
    std::mt19937_64 rng(47);
    auto models = minimal_model_corpus(-2, 2);
    std::vector<DivisorConfig> pool;
    for (auto& m : models)
        if (m.config.lattice.rank() <= 2) pool.push_back(m.config);

    auto brute = [&](const DivisorConfig& A, const DivisorConfig& B) {
        if (A.lattice != B.lattice || A.k() != B.k()) return false;
        auto oracle = isometry_oracle(A.lattice, 3);
        std::vector<int> perm(static_cast<size_t>(A.k()));
        for (int i = 0; i < A.k(); ++i) perm[static_cast<size_t>(i)] = i;
        std::sort(perm.begin(), perm.end());
        do {
            for (const auto& phi : oracle) {
                bool ok = true;
                for (int j = 0; ok && j < A.k(); ++j)
                    ok = apply(phi, A.classes[static_cast<size_t>(j)]) ==
                         B.classes[static_cast<size_t>(perm[static_cast<size_t>(j)])];
                if (ok) return true;
            }
        } while (std::next_permutation(perm.begin(), perm.end()));
        return false;
    };

    int positives = 0, negatives = 0;
    for (int t = 0; t < 60; ++t) {
        const auto& A = pool[rng() % pool.size()];
        DivisorConfig B;
        if (t % 2 == 0) {
            auto oracle = fixing_k(isometry_oracle(A.lattice, 2), A.lattice);
            auto phi = oracle[rng() % oracle.size()];
            std::vector<int> perm(static_cast<size_t>(A.k()));
            for (int i = 0; i < A.k(); ++i) perm[static_cast<size_t>(i)] = i;
            std::shuffle(perm.begin(), perm.end(), rng);
            B = apply(phi, permuted(A, perm));
        } else {
            B = pool[rng() % pool.size()];
        }
        bool expected = brute(A, B);
        auto got = decide(A, B);
        REQUIRE(got.status != VerdictStatus::Unknown);
        CHECK(got.equivalent() == expected);
        (expected ? positives : negatives)++;
    }
    CHECK(positives > 10);
    CHECK(negatives > 0);
}

TEST_CASE("gram obstructions reject without search") {
    auto sp = AmbientLattice::sphere_product();
    auto a = make_config(sp, {cv(sp, {1, 0}), cv(sp, {1, 2})});
    auto b = make_config(sp, {cv(sp, {1, -1}), cv(sp, {1, 3})});
    auto v = decide(a, b);
    CHECK(v.status == VerdictStatus::NotEquivalent);
    CHECK(v.obstruction.find("Gram") != std::string::npos);
}

TEST_CASE("equivalence across coordinate presentations") {
    auto h1 = AmbientLattice::hirzebruch_one();
    auto r1 = AmbientLattice::rational(1);
    auto a = make_config(h1, {cv(h1, {1, 0}), cv(h1, {0, 2})});
    auto b = make_config(r1, {cv(r1, {1, -1}), cv(r1, {2, 0})});
    CHECK(decide(a, b).equivalent());
}

TEST_CASE("strict mode") {
    auto sp = AmbientLattice::sphere_product();
    auto D1 = make_config(sp, {cv(sp, {1, 0}), cv(sp, {1, 2})});
    D1.areas = AreaVector{{Rat(3), Rat(2)}};
    REQUIRE(validate(D1).ok());

    SECTION("missing areas are an error") {
        auto bare = make_config(sp, {cv(sp, {1, 0}), cv(sp, {1, 2})});
        CHECK_THROWS_AS(decide(D1, bare, DecideMode::Unindexed, true), InvalidArgumentError);
    }

    SECTION("pullback areas match strictly; perturbations break it") {
        Mat swap(2, 2);
        swap(0, 1) = 1;
        swap(1, 0) = 1;
        auto D2 = apply(Isometry{sp, swap}, permuted(D1, {1, 0}));
        REQUIRE(validate(D2).ok());
        auto strict = decide(D1, D2, DecideMode::Unindexed, true);
        CHECK(strict.equivalent());

        auto perturbed = D2;
        perturbed.areas->values[0] += Rat(1, 7);
        auto v2 = decide(D1, perturbed, DecideMode::Unindexed, true);
        CHECK(v2.status == VerdictStatus::NotEquivalent);
        // non-strict verdict unaffected
        CHECK(decide(D1, perturbed, DecideMode::Unindexed, false).equivalent());
    }

    SECTION("common rescaling preserves the strict verdict") {
        auto D2 = D1;
        auto strict = decide(D1, D2, DecideMode::Unindexed, true);
        REQUIRE(strict.equivalent());
        auto S1 = D1, S2 = D2;
        for (auto* cfg : {&S1, &S2})
            for (auto& q : cfg->areas->values) q *= Rat(5, 3);
        CHECK(decide(S1, S2, DecideMode::Unindexed, true).equivalent());
    }
}

TEST_CASE("strict equivalence implies plain equivalence") {
    auto r0 = AmbientLattice::rational(0);
    auto a = make_config(r0, {cv(r0, {1}), cv(r0, {2})});
    a.areas = AreaVector{{Rat(2)}};
    auto b = a;
    auto strict = decide(a, b, DecideMode::Unindexed, true);
    REQUIRE(strict.equivalent());
    CHECK(decide(a, b, DecideMode::Unindexed, false).equivalent());
}

TEST_CASE("strict search keeps enumerating witnesses until areas match") {
    // (f+s, f+s) with asymmetric areas: the identity fails the area check but
    // the f <-> s swap succeeds, so the decider must not stop at the first
    // tuple-compatible isometry.
    auto sp = AmbientLattice::sphere_product();
    auto D1 = make_config(sp, {cv(sp, {1, 1}), cv(sp, {1, 1})});
    D1.areas = AreaVector{{Rat(3), Rat(2)}};
    REQUIRE(validate(D1).ok());
    Mat swap(2, 2);
    swap(0, 1) = 1;
    swap(1, 0) = 1;
    auto D2 = apply(Isometry{sp, swap}, D1);
    REQUIRE(D2.areas->values == std::vector<Rat>{Rat(2), Rat(3)});
    auto strict = decide(D1, D2, DecideMode::Unindexed, true);
    REQUIRE(strict.equivalent());
    CHECK(strict.witness->m == swap);
}

TEST_CASE("budget exhaustion yields Unknown") {
    auto r3 = AmbientLattice::rational(3);
    auto D = make_config(r3, {first_chern(r3)});
    auto v = decide(D, D, DecideMode::Unindexed, false, 0);
    CHECK(v.status == VerdictStatus::Unknown);
    CHECK(v.obstruction.find("budget") != std::string::npos);
}

TEST_CASE("blown-up elliptic tori are recognized as equivalent") {
    auto L = AmbientLattice::elliptic_ruled(Twist::Trivial, 2);
    auto D = make_config(L, {first_chern(L)});
    auto v = decide(D, D);
    REQUIRE(v.equivalent());
    CHECK(preserves_gram(*v.witness));
}

TEST_CASE("torus configurations on the same elliptic lattice are equivalent") {
    auto L = AmbientLattice::elliptic_ruled(Twist::Nontrivial, 0);
    auto A1 = make_config(L, {first_chern(L)});
    CHECK(decide(A1, A1).equivalent());
    auto L2 = AmbientLattice::elliptic_ruled(Twist::Trivial, 0);
    auto A2 = make_config(L2, {first_chern(L2)});
    CHECK(decide(A1, A2).status == VerdictStatus::NotEquivalent);
}

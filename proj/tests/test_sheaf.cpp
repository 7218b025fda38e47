#include <gtest/gtest.h>

#include <set>

#include "oracle.hpp"
#include "sitecalc/catalog.hpp"
#include "sitecalc/io.hpp"
#include "sitecalc/sheaf.hpp"

using namespace sitecalc;

namespace {

Mask S(const FinitePoset& P, const std::string& names) { return parse_subset(P, names); }

std::string code_of(const std::function<void()>& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.code();
    }
    return "";
}

std::vector<const CatalogEntry*> small_catalog() {
    std::vector<const CatalogEntry*> out;
    for (const auto& e : catalog())
        if (e.poset.size() <= 3) out.push_back(&e);
    return out;
}

Presheaf constant(const FinitePoset& P, int m) {
    std::map<std::pair<int, int>, std::vector<int>> maps;
    std::vector<int> id(m);
    for (int i = 0; i < m; ++i) id[i] = i;
    for (int p = 0; p < P.size(); ++p)
        for (int q : members(P.down(p)))
            if (q != p) maps[{q, p}] = id;
    return Presheaf(P, std::vector<int>(P.size(), m), maps);
}

} // namespace

TEST(Presheaf, Validate) {
    EXPECT_FALSE(functoriality_violation(constant(chain(3), 2)).has_value());
    Presheaf two_to_one(chain(2), {1, 2}, {{{0, 1}, {0, 0}}});
    EXPECT_NO_THROW(validate_presheaf(two_to_one));
    Presheaf bad(chain(3), {2, 2, 2}, {{{0, 1}, {0, 1}}, {{1, 2}, {0, 1}}, {{0, 2}, {1, 0}}});
    try {
        validate_presheaf(bad);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), "FunctorialityError");
        EXPECT_EQ(e.witness()["r"], "0");
        EXPECT_EQ(e.witness()["q"], "1");
        EXPECT_EQ(e.witness()["p"], "2");
    }
}

TEST(Presheaf, FromPartialComposes) {
    Presheaf F = presheaf_from_partial(chain(3), {2, 2, 2}, {{{0, 1}, {1, 0}}, {{1, 2}, {1, 0}}});
    EXPECT_EQ(F.restriction(0, 2), (std::vector<int>{0, 1}));
    EXPECT_EQ(code_of([] { presheaf_from_partial(chain(2), {1, 1}, {}); }), "ParseError");
    EXPECT_EQ(code_of([] { presheaf_from_partial(chain(2), {1, 1}, {{{0, 1}, {3}}}); }), "RestrictionError");
}

TEST(Amalgamation, Examples) {
    const FinitePoset P = chain(2);
    Presheaf F(P, {1, 2}, {{{0, 1}, {0, 0}}});
    // S = ↓p with the family induced by a
    for (int a = 0; a < 2; ++a) EXPECT_EQ(amalgamations(F, 1, 0b11, {0, a}), (std::vector<int>{a}));
    EXPECT_EQ(amalgamations(F, 1, 0, {-1, -1}), (std::vector<int>{0, 1}));
    EXPECT_EQ(amalgamations(F, 1, 0b01, {0, -1}), (std::vector<int>{0, 1}));
    Presheaf G(P, {2, 2}, {{{0, 1}, {0, 1}}});
    EXPECT_EQ(code_of([&] { amalgamations(G, 1, 0b11, {1, 0}); }), "NotMatchingError");
}

TEST(MatchingFamilies, CountOnAntichainSieve) {
    Presheaf F = constant(antichain(2), 2);
    EXPECT_EQ(matching_families(F, 0b11).size(), 4u);
    EXPECT_EQ(matching_families(F, 0).size(), 1u);
}

TEST(Enumerate, CountsAgainstOracle) {
    EXPECT_EQ(enumerate_presheaves(catalog_poset("point"), 1).size(), 2u);
    EXPECT_EQ(enumerate_presheaves(chain(2), 1).size(), 3u);
    EXPECT_EQ(enumerate_presheaves(chain(2), 0).size(), 1u);
    for (const auto* e : small_catalog())
        for (int k = 0; k <= 2; ++k) {
            auto all = enumerate_presheaves(e->poset, k);
            EXPECT_EQ(static_cast<long>(all.size()), oracle::presheaf_count(e->poset, k)) << e->name << " k=" << k;
            std::set<std::string> seen;
            for (const auto& F : all) {
                EXPECT_FALSE(functoriality_violation(F).has_value());
                seen.insert(presheaf_to_json(F).dump());
            }
            EXPECT_EQ(seen.size(), all.size());
        }
    EXPECT_EQ(code_of([] { enumerate_presheaves(chain(4), 1); }), "TooLargeError");
    EXPECT_EQ(code_of([] { enumerate_presheaves(chain(2), 3); }), "TooLargeError");
}

TEST(IsSheaf, Examples) {
    for (const auto* e : small_catalog()) {
        FramePtr F = make_frame(e->poset);
        Topology ind = indiscrete_topology(F), dis = discrete_topology(F);
        for (const auto& G : enumerate_presheaves(e->poset, 2)) {
            EXPECT_TRUE(is_sheaf(G, ind).ok);
            bool singletons = std::all_of(G.sizes().begin(), G.sizes().end(), [](int m) { return m == 1; });
            EXPECT_EQ(is_sheaf(G, dis).ok, singletons);
        }
        if (!e->poset.is_downward_directed()) continue;
        Topology atom = atomic_topology(F);
        for (const auto& G : enumerate_presheaves(e->poset, 2)) {
            if (!is_sheaf(G, atom).ok) continue;
            for (const auto& [key, table] : G.maps()) {
                std::vector<int> sorted = table;
                std::sort(sorted.begin(), sorted.end());
                EXPECT_EQ(static_cast<int>(sorted.size()), G.size(key.first));
                EXPECT_EQ(std::adjacent_find(sorted.begin(), sorted.end()), sorted.end());
            }
        }
    }
}

TEST(IsSheaf, WitnessShape) {
    FramePtr F = make_frame(chain(2));
    Presheaf G(chain(2), {1, 2}, {{{0, 1}, {0, 0}}});
    SheafCheck r = is_sheaf(G, subset_topology(F, 0b01));
    ASSERT_FALSE(r.ok);
    EXPECT_EQ(r.witness["p"], "1");
    EXPECT_EQ(r.witness["sieve"], json::array({"0"}));
    EXPECT_EQ(r.witness["amalgamations"], 2);
}

TEST(IsSheaf, AntitoneInTopology) {
    for (const auto* e : small_catalog()) {
        auto tops = enumerate_all_topologies(make_frame(e->poset));
        auto sample = enumerate_presheaves(e->poset, e->poset.size() <= 2 ? 2 : 1);
        for (const auto& J : tops)
            for (const auto& K : tops) {
                if (!leq(J, K)) continue;
                for (const auto& G : sample)
                    if (is_sheaf(G, K).ok) {
                        EXPECT_TRUE(is_sheaf(G, J).ok);
                    }
            }
    }
}

TEST(RestrictPresheaf, Examples) {
    for (const auto* e : small_catalog()) {
        Presheaf C = constant(e->poset, 2);
        Presheaf R = restrict_presheaf(C, e->poset.all());
        EXPECT_EQ(R, C);
        Mask X = e->poset.minimal(e->poset.all());
        EXPECT_EQ(restrict_presheaf(C, X), constant(induced(e->poset, X).poset, 2));
    }
    Presheaf G(chain(2), {2, 1}, {{{0, 1}, {1}}});
    Presheaf R = restrict_presheaf(G, 0b01);
    EXPECT_EQ(R.sizes(), (std::vector<int>{2}));
}

TEST(ExtendPresheaf, Examples) {
    // X ∩ ↓p = ∅ gives the empty function only
    const FinitePoset& V = catalog_poset("V");
    Mask X = S(V, "y");
    Presheaf F = constant(induced(V, X).poset, 2);
    ExtendedPresheaf E = extend_presheaf(F, V, X);
    EXPECT_EQ(E.presheaf.size(V.index_of("z")), 1);
    EXPECT_EQ(E.elements[V.index_of("z")], (std::vector<std::vector<int>>{{}}));

    for (const auto* e : small_catalog())
        for (const auto& G : enumerate_presheaves(e->poset, 2))
            EXPECT_EQ(extend_presheaf(G, e->poset, e->poset.all()).presheaf.sizes(), G.sizes());

    Presheaf cd(FinitePoset::from_relation({"0"}, {}), {2}, {});
    ExtendedPresheaf C = extend_presheaf(cd, chain(2), 0b01);
    EXPECT_EQ(C.presheaf.sizes(), (std::vector<int>{2, 2}));
    EXPECT_EQ(C.presheaf.restriction(0, 1), (std::vector<int>{0, 1}));
}

TEST(ExtendPresheaf, IsSheafForSubsetTopology) {
    for (const auto* e : small_catalog()) {
        FramePtr F = make_frame(e->poset);
        for (Mask X = 0; X <= e->poset.all(); ++X) {
            Topology J = subset_topology(F, X);
            for (const auto& G : enumerate_presheaves(induced(e->poset, X).poset, 2)) {
                ExtendedPresheaf E = extend_presheaf(G, e->poset, X);
                EXPECT_FALSE(functoriality_violation(E.presheaf).has_value());
                EXPECT_TRUE(is_sheaf(E.presheaf, J).ok) << e->name;
            }
        }
    }
}

TEST(Comparison, ChainExampleWithMorphisms) {
    FramePtr F = make_frame(chain(2));
    Topology J = subset_topology(F, 0b01);
    auto onX = enumerate_presheaves(induced(chain(2), 0b01).poset, 2);
    auto onP = enumerate_presheaves(chain(2), 2);
    ComparisonReport r = comparison_check(J, 0b01, onX, onP, true);
    EXPECT_TRUE(r.ok()) << (r.failures.empty() ? "" : r.failures[0]);
    EXPECT_EQ(r.presheaves_checked, 3);
    // sizes (0,0), (1,1) and (2,2) with either bijection
    EXPECT_EQ(r.sheaves_checked, 4);
    EXPECT_GT(r.morphisms_checked, 0);
    for (const auto& G : onP)
        if (is_sheaf(G, J).ok) {
            EXPECT_EQ(G.size(0), G.size(1));
        }
    EXPECT_EQ(code_of([&] { comparison_check(indiscrete_topology(F), 0b10, {}, {}); }), "NotDenseError");
}

TEST(Comparison, ConstantSheaf) {
    for (const auto* e : small_catalog()) {
        FramePtr F = make_frame(e->poset);
        Mask X = e->poset.minimal(e->poset.all());
        Topology J = subset_topology(F, X);
        Presheaf C = constant(e->poset, 2);
        if (!is_sheaf(C, J).ok) continue;
        ComparisonReport r = comparison_check(J, X, {}, {C});
        EXPECT_TRUE(r.ok()) << e->name;
        EXPECT_EQ(r.sheaves_checked, 1);
    }
}

TEST(Comparison, LargerTopologies) {
    // J ≥ J_X: only J̄-sheaves on X and J-sheaves on P take part
    for (const auto* e : small_catalog()) {
        FramePtr F = make_frame(e->poset);
        for (Mask X = 0; X <= e->poset.all(); ++X) {
            Topology L = lx_topology(F, X);
            auto onX = enumerate_presheaves(induced(e->poset, X).poset, 1);
            auto onP = enumerate_presheaves(e->poset, 1);
            ComparisonReport r = comparison_check(L, X, onX, onP, false);
            EXPECT_TRUE(r.ok()) << e->name << ": " << (r.failures.empty() ? "" : r.failures[0]);
        }
    }
}

TEST(Yoneda, Examples) {
    Presheaf top = yoneda_presheaf(chain(2), 1);
    EXPECT_EQ(top.sizes(), (std::vector<int>{1, 1}));
    Presheaf bottom = yoneda_presheaf(chain(2), 0);
    EXPECT_EQ(bottom.sizes(), (std::vector<int>{1, 0}));
    for (const auto& e : catalog()) {
        if (e.poset.size() > 4) continue;
        for (const auto& J : enumerate_all_topologies(make_frame(e.poset)))
            for (int p = 0; p < e.poset.size(); ++p) {
                Presheaf y = yoneda_presheaf(e.poset, p);
                EXPECT_FALSE(functoriality_violation(y).has_value());
                EXPECT_EQ(is_sheaf(y, J).ok, representable_is_sheaf(J, p)) << e.name;
            }
    }
}

TEST(DerivedSheaves, SheavesMatchLeastElementForm) {
    for (const auto* e : small_catalog()) {
        const FinitePoset& P = e->poset;
        if (!P.is_downward_directed() || P.least() < 0) continue;
        FramePtr F = make_frame(P);
        for (Mask X = 0; X <= P.all(); ++X) {
            Topology K = derived_topology(F, X);
            Topology J0 = subset_topology(F, X | bit(P.least()));
            for (const auto& G : enumerate_presheaves(P, 2)) EXPECT_EQ(is_sheaf(G, K).ok, is_sheaf(G, J0).ok);
        }
    }
}

TEST(Kx, UpClosureEverything) {
    FramePtr F = make_frame(chain(2));
    KxReport r = kx_sheaf_equivalence_check(F, 0b01, 2);
    EXPECT_TRUE(r.up_closure_is_everything);
    EXPECT_TRUE(r.ok()) << (r.failures.empty() ? "" : r.failures[0]);
    EXPECT_EQ(r.sheaf_classes, r.y_classes);
}

TEST(Kx, ChainEmptyX) {
    // K_∅ = J_{{0}}: sheaves are presheaves with bijective restriction, one class per size
    FramePtr F = make_frame(chain(2));
    KxReport r = kx_sheaf_equivalence_check(F, 0, 2);
    EXPECT_FALSE(r.up_closure_is_everything);
    EXPECT_EQ(r.base_point, 0);
    EXPECT_EQ(r.Y, bit(2));
    EXPECT_EQ(r.sheaf_classes, 3);
    EXPECT_TRUE(r.ok()) << (r.failures.empty() ? "" : r.failures[0]);
}

TEST(Kx, DirectedCatalog) {
    for (const auto* e : small_catalog()) {
        if (!e->poset.is_downward_directed()) continue;
        FramePtr F = make_frame(e->poset);
        for (Mask X = 0; X <= e->poset.all(); ++X) {
            KxReport r = kx_sheaf_equivalence_check(F, X, 2);
            EXPECT_TRUE(r.ok()) << e->name << " X=" << X << ": " << (r.failures.empty() ? "" : r.failures[0]);
        }
    }
}

TEST(Kx, Errors) {
    EXPECT_EQ(code_of([] { kx_sheaf_equivalence_check(make_frame(antichain(2)), 0, 1); }), "NotDownwardsDirectedError");
    EXPECT_EQ(code_of([] { base_point(chain(2), 0b01); }), "BasePointError");
    // indices put the top first, so the base point for X = ∅ is the top and r = bot needs an inverse
    FinitePoset P = FinitePoset::from_relation({"top", "bot"}, {{1, 0}});
    Presheaf G(P, {2, 1}, {{{1, 0}, {0, 0}}});
    EXPECT_EQ(base_point(P, 0), 0);
    EXPECT_EQ(code_of([&] { extend_to_zero(G, 0); }), "NotASheafError");
}

TEST(Kx, ExtendToZeroRoundTrip) {
    const FinitePoset& L = catalog_poset("Λ");
    FramePtr F = make_frame(L);
    Mask X = S(L, "y");
    Topology K = derived_topology(F, X);
    int p0 = base_point(L, X);
    EXPECT_EQ(p0, L.index_of("x"));
    for (const auto& G : enumerate_presheaves(L, 2)) {
        if (!is_sheaf(G, K).ok) continue;
        Presheaf Gbar = extend_to_zero(G, X);
        EXPECT_EQ(Gbar.size(3), G.size(p0));
        EXPECT_EQ(restrict_presheaf(Gbar, L.all()), G);
    }
}

TEST(CanonicalForm, Relabeling) {
    Presheaf a(chain(2), {2, 2}, {{{0, 1}, {0, 1}}});
    Presheaf b(chain(2), {2, 2}, {{{0, 1}, {1, 0}}});
    Presheaf c(chain(2), {2, 2}, {{{0, 1}, {0, 0}}});
    EXPECT_EQ(canonical_form(a), canonical_form(b));
    EXPECT_NE(canonical_form(a), canonical_form(c));
}

TEST(Json, PresheafRoundTrip) {
    for (const auto* e : small_catalog())
        for (const auto& G : enumerate_presheaves(e->poset, 2))
            EXPECT_EQ(presheaf_from_json(e->poset, json::parse(presheaf_to_json(G).dump())), G);
    EXPECT_EQ(code_of([] { presheaf_from_json(chain(2), json::parse(R"({"values":{"0":1}})")); }), "ParseError");
    EXPECT_EQ(code_of([] { presheaf_from_json(chain(2), json::parse(R"({"values":{"0":1,"1":1},"maps":{"0<=9":[0]}})")); }),
              "ParseError");
}

#include <gtest/gtest.h>

#include <set>

#include "oracle.hpp"
#include "sitecalc/catalog.hpp"
#include "sitecalc/io.hpp"
#include "sitecalc/topology.hpp"

using namespace sitecalc;

namespace {

Mask S(const FinitePoset& P, const std::string& names) { return parse_subset(P, names); }

std::vector<Mask> cover_masks(const Topology& J, int p) {
    std::vector<Mask> out;
    for (int id : J.covers(p)) out.push_back(J.frame().at(id));
    return out;
}

Topology from_oracle(const FramePtr& F, Mask X) {
    return Topology(F, covers_from_masks(*F, oracle::subset_covers(F->poset(), X)));
}

std::string code_of(const std::function<void()>& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.code();
    }
    return "";
}

} // namespace

TEST(Validate, AtomicOnVFailsStability) {
    FramePtr F = make_frame(catalog_poset("V"));
    const FinitePoset& P = F->poset();
    CoverFamily atomic(P.size());
    for (int p = 0; p < P.size(); ++p)
        for (int id : F->sieves(p))
            if (F->at(id) != 0) atomic[p].push_back(id);
    auto v = axiom_violations(*F, atomic);
    ASSERT_FALSE(v.empty());
    EXPECT_EQ(v[0].axiom, "stability");
    EXPECT_EQ(v[0].p, P.index_of("x"));
    EXPECT_EQ(v[0].sieve, S(P, "y"));
    EXPECT_EQ(v[0].q, P.index_of("z"));
    try {
        validate_topology(F, atomic);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), "AxiomViolation");
        EXPECT_EQ(e.witness()["axiom"], "stability");
    }
}

TEST(Validate, IndiscreteAndMaximality) {
    FramePtr F = make_frame(chain(2));
    CoverFamily indiscrete = {{F->id(0b01)}, {F->id(0b11)}};
    EXPECT_NO_THROW(validate_topology(F, indiscrete));
    CoverFamily broken = {{F->id(0b01)}, {F->id(0b01)}};
    auto v = axiom_violations(*F, broken);
    ASSERT_FALSE(v.empty());
    EXPECT_EQ(v[0].axiom, "maximality");
    EXPECT_EQ(v[0].p, 1);
}

TEST(SubsetTopology, VExample) {
    FramePtr F = make_frame(catalog_poset("V"));
    const FinitePoset& P = F->poset();
    Topology J = subset_topology(F, S(P, "y"));
    EXPECT_EQ(cover_masks(J, 0), (std::vector<Mask>{S(P, "y"), S(P, "y z"), P.all()}));
    EXPECT_EQ(cover_masks(J, 1), (std::vector<Mask>{S(P, "y")}));
    EXPECT_EQ(cover_masks(J, 2), (std::vector<Mask>{0, S(P, "z")}));
}

TEST(SubsetTopology, MatchesOracleAndRoundTrips) {
    for (const auto& e : catalog()) {
        FramePtr F = make_frame(e.poset);
        const FinitePoset& P = e.poset;
        for (Mask X = 0; X <= P.all(); ++X) {
            Topology J = subset_topology(F, X);
            EXPECT_EQ(J, from_oracle(F, X)) << e.name;
            EXPECT_TRUE(axiom_violations(*F, J.families()).empty());
            EXPECT_EQ(generating_subset(J), X);
            EXPECT_TRUE(is_complete(J));
            for (int p = 0; p < P.size(); ++p) {
                auto c = cover_masks(J, p);
                std::set<Mask> fam(c.begin(), c.end());
                for (Mask a : c)
                    for (Mask b : c) EXPECT_TRUE(fam.count(a & b));
                // J_X(p) = {S : p ∈ X -> S}
                for (int id : F->sieves(p))
                    EXPECT_EQ(J.is_cover_id(p, id), has(heyting_implication(P, X, F->at(id)), p));
            }
            for (Mask Y = 0; Y <= P.all(); ++Y) {
                Topology K = subset_topology(F, Y);
                EXPECT_EQ(leq(J, K), subset_of(Y, X));
            }
        }
        EXPECT_EQ(subset_topology(F, P.all()), indiscrete_topology(F));
        EXPECT_EQ(subset_topology(F, 0), discrete_topology(F));
    }
}

TEST(Constructors, Examples) {
    FramePtr V = make_frame(catalog_poset("V"));
    EXPECT_EQ(code_of([&] { atomic_topology(V); }), "NotDownwardsDirectedError");
    const FinitePoset& P = V->poset();
    EXPECT_EQ(cover_masks(dense_topology(V), 0), (std::vector<Mask>{S(P, "y z"), P.all()}));
    FramePtr c2 = make_frame(chain(2));
    EXPECT_EQ(cover_masks(atomic_topology(c2), 1), (std::vector<Mask>{0b01, 0b11}));
}

TEST(Constructors, DenseIsMinimalSubset) {
    for (const auto& e : catalog()) {
        FramePtr F = make_frame(e.poset);
        EXPECT_EQ(dense_topology(F), subset_topology(F, e.poset.minimal(e.poset.all()))) << e.name;
        if (e.poset.is_downward_directed()) {
            EXPECT_TRUE(axiom_violations(*F, atomic_topology(F).families()).empty());
        }
    }
}

TEST(Derived, Examples) {
    FramePtr c2 = make_frame(chain(2));
    EXPECT_EQ(derived_topology(c2, 0), atomic_topology(c2));
    EXPECT_EQ(derived_topology(c2, 0), subset_topology(c2, 0b01));
    EXPECT_EQ(derived_topology(c2, 0b11), subset_topology(c2, 0b11));

    FramePtr L = make_frame(catalog_poset("Λ"));
    const FinitePoset& P = L->poset();
    Topology K = derived_topology(L, S(P, "y"));
    Topology A = atomic_topology(L);
    Topology J = subset_topology(L, S(P, "y"));
    int y = P.index_of("y"), z = P.index_of("z");
    EXPECT_EQ(K.covers(z), A.covers(z));
    EXPECT_EQ(K.covers(y), J.covers(y));
    EXPECT_EQ(code_of([&] { derived_topology(make_frame(catalog_poset("V")), 0); }), "NotDownwardsDirectedError");
}

TEST(Derived, PiecewiseAndLeastElement) {
    for (const auto& e : catalog()) {
        const FinitePoset& P = e.poset;
        if (!P.is_downward_directed()) continue;
        FramePtr F = make_frame(P);
        Topology A = atomic_topology(F);
        for (Mask X = 0; X <= P.all(); ++X) {
            Topology K = derived_topology(F, X);
            Topology J = subset_topology(F, X);
            EXPECT_TRUE(axiom_violations(*F, K.families()).empty());
            Mask up = P.up_closure(X);
            for (int p = 0; p < P.size(); ++p)
                EXPECT_EQ(K.covers(p), has(up, p) ? J.covers(p) : A.covers(p)) << e.name;
            if (up == P.all()) {
                EXPECT_EQ(K, J);
            }
            if (P.least() >= 0) {
                EXPECT_EQ(K, subset_topology(F, X | bit(P.least())));
            }
        }
    }
}

TEST(Restrict, Examples) {
    for (const auto& e : catalog()) {
        const FinitePoset& P = e.poset;
        FramePtr F = make_frame(P);
        for (Mask X = 1; X <= P.all(); ++X) {
            RestrictedTopology r = restrict_topology(subset_topology(F, X), X);
            FramePtr local = r.topology.frame_ptr();
            EXPECT_EQ(r.topology, indiscrete_topology(local));
            RestrictedTopology l = restrict_topology(lx_topology(F, X), X);
            EXPECT_EQ(l.topology, dense_topology(local));
        }
        Topology D = discrete_topology(F);
        EXPECT_EQ(restrict_topology(D, P.all()).topology.families(), D.families());
    }
    FramePtr c2 = make_frame(chain(2));
    EXPECT_EQ(code_of([&] { restrict_topology(indiscrete_topology(c2), 0b10); }), "NotDenseError");
}

TEST(Extend, RoundTripAndInjective) {
    for (const auto& e : catalog()) {
        const FinitePoset& P = e.poset;
        if (P.size() > 4) continue;
        FramePtr F = make_frame(P);
        for (Mask X = 0; X <= P.all(); ++X) {
            Subposet sub = induced(P, X);
            FramePtr local = make_frame(sub.poset);
            std::set<CoverFamily> images;
            auto inner = enumerate_all_topologies(local);
            for (const Topology& K : inner) {
                Topology JK = extend_topology(F, X, K);
                EXPECT_TRUE(axiom_violations(*F, JK.families()).empty());
                EXPECT_TRUE(leq(subset_topology(F, X), JK));
                if (X) {
                    EXPECT_EQ(restrict_topology(JK, X).topology, K);
                }
                images.insert(JK.families());
            }
            EXPECT_EQ(images.size(), inner.size());
            for (Mask Y = 0; Y <= sub.poset.all(); ++Y)
                EXPECT_EQ(extend_topology(F, X, subset_topology(local, Y)), subset_topology(F, sub.lift(Y)));
            EXPECT_EQ(extend_topology(F, X, dense_topology(local)), lx_topology(F, X));
            EXPECT_EQ(extend_topology(F, X, indiscrete_topology(local)), subset_topology(F, X));
        }
    }
}

TEST(Lx, MinimalElementsAndLxy) {
    for (const auto& e : catalog()) {
        const FinitePoset& P = e.poset;
        FramePtr F = make_frame(P);
        EXPECT_EQ(lx_topology(F, 0), discrete_topology(F));
        for (Mask X = 0; X <= P.all(); ++X) {
            EXPECT_EQ(lx_topology(F, X), subset_topology(F, oracle::minimal_elements(P, X))) << e.name;
            if (P.is_downward_directed(X)) {
                EXPECT_EQ(lxy_topology(F, X, 0), lx_topology(F, X));
                for (Mask Y = 0; Y <= X; ++Y)
                    if (subset_of(Y, X)) {
                        EXPECT_TRUE(axiom_violations(*F, lxy_topology(F, X, Y).families()).empty());
                    }
            }
        }
    }
    FramePtr V = make_frame(catalog_poset("V"));
    EXPECT_EQ(code_of([&] { lxy_topology(V, 0b110, 0); }), "NotDownwardsDirectedError");
}

TEST(Lattice, MeetJoin) {
    for (const auto& e : catalog()) {
        const FinitePoset& P = e.poset;
        FramePtr F = make_frame(P);
        for (Mask X = 0; X <= P.all(); ++X)
            for (Mask Y = 0; Y <= P.all(); ++Y) {
                Topology JX = subset_topology(F, X), JY = subset_topology(F, Y);
                EXPECT_EQ(meet(JX, JY), subset_topology(F, X | Y));
                EXPECT_EQ(join(JX, JY), subset_topology(F, X & Y));
            }
    }
    FramePtr a2 = make_frame(antichain(2));
    EXPECT_EQ(join(subset_topology(a2, 0b01), subset_topology(a2, 0b10)), discrete_topology(a2));
    FramePtr c2 = make_frame(chain(2));
    EXPECT_EQ(code_of([&] { meet(discrete_topology(a2), discrete_topology(c2)); }), "PosetMismatchError");
}

TEST(Enumerate, ClassificationOnSmallCatalog) {
    for (const auto& e : catalog()) {
        const FinitePoset& P = e.poset;
        if (P.size() > 4) continue;
        FramePtr F = make_frame(P);
        auto all = enumerate_all_topologies(F);
        std::vector<Topology> expected;
        for (Mask X = 0; X <= P.all(); ++X) expected.push_back(from_oracle(F, X));
        std::sort(expected.begin(), expected.end());
        EXPECT_EQ(all.size(), std::size_t{1} << P.size()) << e.name;
        EXPECT_EQ(all, expected) << e.name;
    }
    EXPECT_EQ(enumerate_all_topologies(make_frame(catalog_poset("point"))).size(), 2u);
    EXPECT_EQ(code_of([] { enumerate_all_topologies(make_frame(chain(5))); }), "TooLargeForBruteForceError");
}

TEST(SiteMorphisms, Examples) {
    FramePtr a2 = make_frame(antichain(2));
    OrderMorphism swap{antichain(2), antichain(2), {1, 0}};
    EXPECT_TRUE(is_site_isomorphism(swap, subset_topology(a2, 0b01), subset_topology(a2, 0b10)));
    EXPECT_FALSE(is_site_isomorphism(swap, subset_topology(a2, 0b01), subset_topology(a2, 0b01)));

    FramePtr c2 = make_frame(chain(2));
    FramePtr pt = make_frame(FinitePoset::from_relation({"0"}, {}));
    OrderMorphism inc{pt->poset(), chain(2), {0}};
    EXPECT_TRUE(has_clp(inc, subset_topology(pt, 0b1), subset_topology(c2, 0b01)));

    OrderMorphism id{chain(2), chain(2), {0, 1}};
    EXPECT_TRUE(is_site_isomorphism(id, subset_topology(c2, 0b01), subset_topology(c2, 0b01)));
    OrderMorphism collapse{chain(2), chain(2), {0, 0}};
    EXPECT_EQ(code_of([&] { is_site_isomorphism(collapse, discrete_topology(c2), discrete_topology(c2)); }),
              "NotOrderIsomorphismError");
}

TEST(SiteMorphisms, SubsetCharacterisations) {
    for (const auto& a : catalog())
        for (const auto& b : catalog()) {
            if (a.poset.size() != b.poset.size()) continue;
            FramePtr FA = make_frame(a.poset), FB = make_frame(b.poset);
            for (const auto& phi : all_order_morphisms(a.poset, b.poset))
                for (Mask X = 0; X <= a.poset.all(); ++X)
                    for (Mask Y = 0; Y <= b.poset.all(); ++Y) {
                        Topology J = subset_topology(FA, X), K = subset_topology(FB, Y);
                        Mask image = phi.image(X);
                        EXPECT_EQ(has_clp(phi, J, K), subset_of(image, Y));
                        if (phi.is_order_isomorphism()) {
                            EXPECT_EQ(preserves_covers(phi, J, K), subset_of(Y, image));
                            EXPECT_EQ(is_site_isomorphism(phi, J, K), image == Y);
                        }
                        auto report = site_morphism_report(phi, J, K);
                        EXPECT_EQ(report.has_clp, report.clp_witnesses.empty());
                        EXPECT_EQ(report.preserves_covers, report.preserve_witnesses.empty());
                    }
        }
}

TEST(Subcanonical, LambdaExample) {
    FramePtr F = make_frame(catalog_poset("Λ"));
    const FinitePoset& P = F->poset();
    EXPECT_TRUE(is_subcanonical(subset_topology(F, S(P, "y z"))));
    EXPECT_TRUE(heyting_subcanonical(P, S(P, "y z")));
    int failing = -1;
    EXPECT_FALSE(heyting_subcanonical(P, S(P, "y"), &failing));
    EXPECT_EQ(failing, P.index_of("x"));
    EXPECT_EQ(heyting_implication(P, S(P, "y"), P.down(failing)), P.down(P.index_of("z")));
    EXPECT_FALSE(is_subcanonical(subset_topology(F, S(P, "y"))));
}

TEST(Subcanonical, CriteriaAgree) {
    for (const auto& e : catalog()) {
        const FinitePoset& P = e.poset;
        FramePtr F = make_frame(P);
        EXPECT_TRUE(is_subcanonical(indiscrete_topology(F)));
        for (Mask X = 0; X <= P.all(); ++X) {
            EXPECT_EQ(is_subcanonical(subset_topology(F, X)), heyting_subcanonical(P, X)) << e.name;
            if (P.is_downward_directed()) {
                EXPECT_EQ(is_subcanonical(derived_topology(F, X)), heyting_subcanonical(P, X)) << e.name;
            }
        }
    }
}

TEST(Subcanonical, CanonicalSearch) {
    for (const auto& e : catalog()) {
        CanonicalSearch c = canonical_topology_search(e.poset);
        EXPECT_TRUE(c.unique) << e.name;
        ASSERT_FALSE(c.minimal_subsets.empty());
        // J_X for the minimal X is the largest subcanonical topology
        FramePtr F = make_frame(e.poset);
        Topology canon = subset_topology(F, c.minimal_subsets[0]);
        for (Mask X = 0; X <= e.poset.all(); ++X)
            if (heyting_subcanonical(e.poset, X)) {
                EXPECT_TRUE(leq(subset_topology(F, X), canon));
            }
    }
}

TEST(Json, TopologyRoundTrip) {
    for (const auto& e : catalog()) {
        FramePtr F = make_frame(e.poset);
        for (Mask X = 0; X <= e.poset.all(); ++X) {
            Topology J = subset_topology(F, X);
            json j = topology_to_json(J);
            EXPECT_EQ(topology_from_json(F, json::parse(j.dump())), J);
        }
    }
}

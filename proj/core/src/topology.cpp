#include "sitecalc/topology.hpp"

#include <algorithm>
#include <set>

namespace sitecalc {

json mask_to_json(const FinitePoset& P, Mask m) {
    json out = json::array();
    for (int p : members(m)) out.push_back(P.label(p));
    return out;
}

Topology::Topology(FramePtr frame, CoverFamily covers) : frame_(std::move(frame)), covers_(std::move(covers)) {
    covers_.resize(frame_->poset().size());
    for (auto& family : covers_) {
        std::sort(family.begin(), family.end());
        family.erase(std::unique(family.begin(), family.end()), family.end());
    }
}

bool Topology::is_cover_id(int p, int id) const {
    return std::binary_search(covers_[p].begin(), covers_[p].end(), id);
}

bool Topology::is_cover(int p, Mask S) const {
    if (!frame_->contains(S)) return false;
    return is_cover_id(p, frame_->id(S));
}

Mask Topology::minimum_cover(int p) const {
    Mask out = poset().down(p);
    for (int id : covers_[p]) out &= frame_->at(id);
    return out;
}

json AxiomViolation::to_json(const FinitePoset& P) const {
    json w = {{"axiom", axiom}, {"p", P.label(p)}, {"sieve", mask_to_json(P, sieve)}};
    if (axiom == "stability") {
        w["q"] = P.label(q);
        w["restricted"] = mask_to_json(P, other);
    } else if (axiom == "transitivity") {
        w["cover"] = mask_to_json(P, other);
    }
    return w;
}

std::vector<AxiomViolation> axiom_violations(const DownSetFrame& frame, const CoverFamily& covers,
                                             bool first_only) {
    const FinitePoset& P = frame.poset();
    const int n = P.size();
    std::vector<AxiomViolation> out;
    auto done = [&] { return first_only && !out.empty(); };

    std::vector<std::vector<char>> member(n, std::vector<char>(frame.size(), 0));
    for (int p = 0; p < n && p < static_cast<int>(covers.size()); ++p)
        for (int id : covers[p]) {
            if (id < 0 || id >= frame.size() || !subset_of(frame.at(id), P.down(p))) {
                out.push_back({"sieve", p, id >= 0 && id < frame.size() ? frame.at(id) : 0});
                if (done()) return out;
                continue;
            }
            member[p][id] = 1;
        }
    auto in = [&](int p, Mask S) { return member[p][frame.id(S)] != 0; };

    for (int p = 0; p < n; ++p)
        if (!in(p, P.down(p))) {
            out.push_back({"maximality", p, P.down(p)});
            if (done()) return out;
        }

    for (int p = 0; p < n; ++p)
        for (int id : frame.sieves(p)) {
            if (!member[p][id]) continue;
            Mask S = frame.at(id);
            for (int q : members(P.down(p))) {
                Mask R = S & P.down(q);
                if (!in(q, R)) {
                    out.push_back({"stability", p, S, q, R});
                    if (done()) return out;
                }
            }
        }

    for (int p = 0; p < n; ++p)
        for (int rid : frame.sieves(p)) {
            if (member[p][rid]) continue;
            Mask R = frame.at(rid);
            for (int sid : frame.sieves(p)) {
                if (!member[p][sid]) continue;
                Mask S = frame.at(sid);
                bool locally = true;
                for (int q : members(S))
                    if (!in(q, R & P.down(q))) {
                        locally = false;
                        break;
                    }
                if (locally) {
                    out.push_back({"transitivity", p, R, -1, S});
                    if (done()) return out;
                    break;
                }
            }
        }
    return out;
}

Topology validate_topology(const FramePtr& frame, CoverFamily covers) {
    covers.resize(frame->poset().size());
    auto violations = axiom_violations(*frame, covers);
    if (!violations.empty()) {
        const FinitePoset& P = frame->poset();
        json all = json::array();
        for (const auto& v : violations) all.push_back(v.to_json(P));
        json witness = violations.front().to_json(P);
        witness["all"] = all;
        fail("AxiomViolation", violations.front().axiom + " axiom fails at " + P.label(violations.front().p),
             witness);
    }
    return Topology(frame, std::move(covers));
}

CoverFamily covers_from_masks(const DownSetFrame& frame, const std::vector<std::vector<Mask>>& sieves) {
    CoverFamily out(frame.poset().size());
    for (int p = 0; p < static_cast<int>(sieves.size()) && p < frame.poset().size(); ++p)
        for (Mask S : sieves[p]) out[p].push_back(frame.id(S));
    return out;
}

namespace {

template <class Pred>
Topology from_predicate(const FramePtr& frame, Pred keep) {
    const FinitePoset& P = frame->poset();
    CoverFamily covers(P.size());
    for (int p = 0; p < P.size(); ++p)
        for (int id : frame->sieves(p))
            if (keep(p, frame->at(id))) covers[p].push_back(id);
    return Topology(frame, std::move(covers));
}

void require_directed(const FinitePoset& P, Mask X, const char* what) {
    for (int a : members(X))
        for (int b : members(X))
            if ((P.down(a) & P.down(b) & X) == 0)
                fail("NotDownwardsDirectedError", std::string(what) + " is not downwards directed",
                     {{"pair", {P.label(a), P.label(b)}}});
}

void require_same_poset(const Topology& J, const Topology& K) {
    if (!(J.poset() == K.poset())) fail("PosetMismatchError", "topologies live on different posets");
}

} // namespace

Topology subset_topology(const FramePtr& frame, Mask X) {
    const FinitePoset& P = frame->poset();
    return from_predicate(frame, [&](int p, Mask S) { return subset_of(X & P.down(p), S); });
}

Mask generating_subset(const Topology& J) {
    Mask out = 0;
    for (int p = 0; p < J.size(); ++p)
        if (J.covers(p).size() == 1 && J.frame().at(J.covers(p)[0]) == J.poset().down(p)) out |= bit(p);
    return out;
}

Topology indiscrete_topology(const FramePtr& frame) {
    const FinitePoset& P = frame->poset();
    return from_predicate(frame, [&](int p, Mask S) { return S == P.down(p); });
}

Topology discrete_topology(const FramePtr& frame) {
    return from_predicate(frame, [](int, Mask) { return true; });
}

Topology atomic_topology(const FramePtr& frame) {
    require_directed(frame->poset(), frame->poset().all(), "poset");
    return from_predicate(frame, [](int, Mask S) { return S != 0; });
}

Topology dense_topology(const FramePtr& frame) {
    const FinitePoset& P = frame->poset();
    return from_predicate(frame, [&](int p, Mask S) { return subset_of(P.down(p), P.up_closure(S)); });
}

Topology derived_topology(const FramePtr& frame, Mask X) {
    const FinitePoset& P = frame->poset();
    require_directed(P, P.all(), "poset");
    return from_predicate(frame, [&](int p, Mask S) { return S != 0 && subset_of(X & P.down(p), S); });
}

CoverFamily restriction_by_intersection(const Topology& J, const Subposet& sub, const DownSetFrame& local) {
    CoverFamily out(sub.embed.size());
    for (int x = 0; x < static_cast<int>(sub.embed.size()); ++x) {
        for (int id : J.covers(sub.embed[x])) out[x].push_back(local.id(sub.lower(J.frame().at(id))));
        std::sort(out[x].begin(), out[x].end());
        out[x].erase(std::unique(out[x].begin(), out[x].end()), out[x].end());
    }
    return out;
}

CoverFamily restriction_by_closure(const Topology& J, const Subposet& sub, const DownSetFrame& local) {
    const FinitePoset& P = J.poset();
    CoverFamily out(sub.embed.size());
    for (int x = 0; x < static_cast<int>(sub.embed.size()); ++x)
        for (int id : local.sieves(x))
            if (J.is_cover(sub.embed[x], P.down_closure(sub.lift(local.at(id))))) out[x].push_back(id);
    return out;
}

RestrictedTopology restrict_topology(const Topology& J, Mask X) {
    const FinitePoset& P = J.poset();
    X &= P.all();
    for (int p = 0; p < P.size(); ++p) {
        Mask generated = P.down_closure(X & P.down(p));
        if (!J.is_cover(p, generated))
            fail("NotDenseError", "subset is not dense for the topology at " + P.label(p),
                 {{"p", P.label(p)}, {"sieve", mask_to_json(P, generated)}});
    }
    Subposet sub = induced(P, X);
    FramePtr local = make_frame(sub.poset);
    CoverFamily a = restriction_by_intersection(J, sub, *local);
    CoverFamily b = restriction_by_closure(J, sub, *local);
    if (a != b) throw std::logic_error("the two forms of the restricted topology disagree");
    return {std::move(sub), Topology(local, std::move(a))};
}

Topology extend_topology(const FramePtr& frame, Mask X, const Topology& K) {
    const FinitePoset& P = frame->poset();
    Subposet sub = induced(P, X);
    if (!(K.poset() == sub.poset))
        fail("InvalidInnerTopologyError", "inner topology is not defined on the induced subposet");
    auto violations = axiom_violations(K.frame(), K.families(), true);
    if (!violations.empty())
        fail("InvalidInnerTopologyError", "inner topology violates the " + violations[0].axiom + " axiom",
             violations[0].to_json(K.poset()));
    return from_predicate(frame, [&](int p, Mask S) {
        for (int x = 0; x < static_cast<int>(sub.embed.size()); ++x) {
            int g = sub.embed[x];
            if (!P.leq(g, p)) continue;
            if (!K.is_cover(x, sub.lower(S & P.down(g)))) return false;
        }
        return true;
    });
}

Topology lx_topology(const FramePtr& frame, Mask X) {
    const FinitePoset& P = frame->poset();
    return from_predicate(frame, [&](int p, Mask S) {
        for (int x : members(X & P.down(p)))
            if ((S & P.down(x) & X) == 0) return false;
        return true;
    });
}

Topology lxy_topology(const FramePtr& frame, Mask X, Mask Y) {
    const FinitePoset& P = frame->poset();
    if (!subset_of(Y, X))
        fail("NotASubsetError", "Y must be contained in X", {{"Y", mask_to_json(P, Y)}, {"X", mask_to_json(P, X)}});
    require_directed(P, X, "subset X");
    Subposet sub = induced(P, X);
    FramePtr local = make_frame(sub.poset);
    return extend_topology(frame, X, derived_topology(local, sub.lower(Y)));
}

Topology meet(const Topology& J, const Topology& K) {
    require_same_poset(J, K);
    CoverFamily covers(J.size());
    for (int p = 0; p < J.size(); ++p)
        std::set_intersection(J.covers(p).begin(), J.covers(p).end(), K.covers(p).begin(), K.covers(p).end(),
                              std::back_inserter(covers[p]));
    return Topology(J.frame_ptr(), std::move(covers));
}

Topology join(const Topology& J, const Topology& K) {
    require_same_poset(J, K);
    const DownSetFrame& F = J.frame();
    const FinitePoset& P = J.poset();
    const int n = P.size();
    std::vector<std::vector<char>> member(n, std::vector<char>(F.size(), 0));
    for (int p = 0; p < n; ++p) {
        for (int id : J.covers(p)) member[p][id] = 1;
        for (int id : K.covers(p)) member[p][id] = 1;
    }
    auto add = [&](int p, Mask S) {
        int id = F.id(S);
        if (member[p][id]) return false;
        member[p][id] = 1;
        return true;
    };

    bool changed = true;
    while (changed) {
        changed = false;
        for (int p = 0; p < n; ++p) {
            const auto& sieves = F.sieves(p);
            for (int a : sieves) {
                if (!member[p][a]) continue;
                for (int b : sieves) {
                    if (subset_of(F.at(a), F.at(b))) changed |= add(p, F.at(b));
                    if (member[p][b]) changed |= add(p, F.at(a) & F.at(b));
                }
                for (int q : members(P.down(p))) changed |= add(q, F.at(a) & P.down(q));
            }
            for (int r : sieves) {
                if (member[p][r]) continue;
                for (int s : sieves) {
                    if (!member[p][s]) continue;
                    bool locally = true;
                    for (int q : members(F.at(s)))
                        if (!member[q][F.id(F.at(r) & P.down(q))]) {
                            locally = false;
                            break;
                        }
                    if (locally) {
                        changed |= add(p, F.at(r));
                        break;
                    }
                }
            }
        }
    }

    CoverFamily covers(n);
    for (int p = 0; p < n; ++p)
        for (int id : F.sieves(p))
            if (member[p][id]) covers[p].push_back(id);
    return Topology(J.frame_ptr(), std::move(covers));
}

bool leq(const Topology& J, const Topology& K) {
    require_same_poset(J, K);
    for (int p = 0; p < J.size(); ++p)
        if (!std::includes(K.covers(p).begin(), K.covers(p).end(), J.covers(p).begin(), J.covers(p).end()))
            return false;
    return true;
}

bool is_complete(const Topology& J) {
    for (int p = 0; p < J.size(); ++p)
        if (!J.is_cover(p, J.minimum_cover(p))) return false;
    return true;
}

namespace {

// Brute-force filters of a finite lattice of sieves: every family that
// contains the top, is upward closed and is closed under binary meets.
std::vector<std::uint32_t> local_filters(const DownSetFrame& F, int p) {
    const auto& sieves = F.sieves(p);
    const int m = static_cast<int>(sieves.size());
    int top = m - 1; // ↓p has the largest mask among its own sub-down-sets
    std::vector<std::vector<int>> meet(m, std::vector<int>(m));
    for (int a = 0; a < m; ++a)
        for (int b = 0; b < m; ++b) {
            Mask s = F.at(sieves[a]) & F.at(sieves[b]);
            meet[a][b] = static_cast<int>(std::lower_bound(sieves.begin(), sieves.end(), F.id(s)) - sieves.begin());
        }
    std::vector<std::uint32_t> out;
    for (std::uint32_t fam = 0; fam < (std::uint32_t{1} << m); ++fam) {
        if (!((fam >> top) & 1u)) continue;
        bool ok = true;
        for (int a = 0; a < m && ok; ++a) {
            if (!((fam >> a) & 1u)) continue;
            for (int b = 0; b < m && ok; ++b) {
                if (subset_of(F.at(sieves[a]), F.at(sieves[b])) && !((fam >> b) & 1u)) ok = false;
                if (((fam >> b) & 1u) && !((fam >> meet[a][b]) & 1u)) ok = false;
            }
        }
        if (ok) out.push_back(fam);
    }
    return out;
}

} // namespace

std::vector<Topology> enumerate_all_topologies(const FramePtr& frame, int cap) {
    const DownSetFrame& F = *frame;
    const FinitePoset& P = F.poset();
    const int n = P.size();
    if (n > cap)
        fail("TooLargeForBruteForceError", "poset exceeds the brute-force cap", {{"n", n}, {"cap", cap}});

    std::vector<int> local_index(F.size(), -1);
    std::vector<std::vector<int>> position(n, std::vector<int>(F.size(), -1));
    std::vector<std::vector<std::uint32_t>> filters(n);
    for (int p = 0; p < n; ++p) {
        const auto& sieves = F.sieves(p);
        if (sieves.size() > 24)
            fail("TooLargeForBruteForceError", "too many sieves on one element",
                 {{"p", P.label(p)}, {"sieves", sieves.size()}});
        for (int i = 0; i < static_cast<int>(sieves.size()); ++i) position[p][sieves[i]] = i;
        filters[p] = local_filters(F, p);
    }

    const std::vector<int> order = P.linear_extension();
    std::vector<std::uint32_t> chosen(n, 0);
    auto in = [&](int q, Mask S) { return (chosen[q] >> position[q][F.id(S)]) & 1u; };

    // Stability and transitivity at p only involve elements below p, which
    // the linear extension has already fixed.
    auto locally_valid = [&](int p) {
        const auto& sieves = F.sieves(p);
        for (int a = 0; a < static_cast<int>(sieves.size()); ++a) {
            if (!((chosen[p] >> a) & 1u)) continue;
            Mask S = F.at(sieves[a]);
            for (int q : members(P.down(p)))
                if (!in(q, S & P.down(q))) return false;
        }
        for (int r = 0; r < static_cast<int>(sieves.size()); ++r) {
            if ((chosen[p] >> r) & 1u) continue;
            Mask R = F.at(sieves[r]);
            for (int a = 0; a < static_cast<int>(sieves.size()); ++a) {
                if (!((chosen[p] >> a) & 1u)) continue;
                bool locally = true;
                for (int q : members(F.at(sieves[a])))
                    if (!in(q, R & P.down(q))) {
                        locally = false;
                        break;
                    }
                if (locally) return false;
            }
        }
        return true;
    };

    std::vector<Topology> out;
    std::vector<std::size_t> choice(n, 0);
    int depth = 0;
    if (n == 0) {
        out.emplace_back(frame, CoverFamily{});
        return out;
    }
    choice[0] = 0;
    while (depth >= 0) {
        int p = order[depth];
        if (choice[depth] >= filters[p].size()) {
            choice[depth] = 0;
            --depth;
            if (depth >= 0) ++choice[depth];
            continue;
        }
        chosen[p] = filters[p][choice[depth]];
        if (!locally_valid(p)) {
            ++choice[depth];
            continue;
        }
        if (depth + 1 == n) {
            CoverFamily covers(n);
            for (int q = 0; q < n; ++q)
                for (int i = 0; i < static_cast<int>(F.sieves(q).size()); ++i)
                    if ((chosen[q] >> i) & 1u) covers[q].push_back(F.sieves(q)[i]);
            out.push_back(validate_topology(frame, std::move(covers)));
            ++choice[depth];
        } else {
            ++depth;
            choice[depth] = 0;
        }
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

SiteMorphismReport site_morphism_report(const OrderMorphism& phi, const Topology& J, const Topology& K) {
    require_order_morphism(phi);
    if (!(phi.source == J.poset()) || !(phi.target == K.poset()))
        fail("PosetMismatchError", "morphism endpoints do not match the sites");
    const FinitePoset& P = J.poset();
    const FinitePoset& Q = K.poset();
    SiteMorphismReport report;
    for (int p = 0; p < P.size(); ++p) {
        for (int id : J.covers(p)) {
            Mask S = J.frame().at(id);
            if (!K.is_cover(phi.map[p], Q.down_closure(phi.image(S)))) {
                report.preserves_covers = false;
                report.preserve_witnesses.push_back({{"p", P.label(p)}, {"sieve", mask_to_json(P, S)}});
            }
        }
        for (int id : K.covers(phi.map[p])) {
            Mask S = K.frame().at(id);
            bool lifted = false;
            for (int rid : J.covers(p))
                if (subset_of(phi.image(J.frame().at(rid)), S)) {
                    lifted = true;
                    break;
                }
            if (!lifted) {
                report.has_clp = false;
                report.clp_witnesses.push_back({{"p", P.label(p)}, {"sieve", mask_to_json(Q, S)}});
            }
        }
    }
    return report;
}

bool preserves_covers(const OrderMorphism& phi, const Topology& J, const Topology& K) {
    return site_morphism_report(phi, J, K).preserves_covers;
}

bool has_clp(const OrderMorphism& phi, const Topology& J, const Topology& K) {
    return site_morphism_report(phi, J, K).has_clp;
}

bool is_site_isomorphism(const OrderMorphism& phi, const Topology& J, const Topology& K) {
    require_order_morphism(phi);
    if (!phi.is_order_isomorphism()) fail("NotOrderIsomorphismError", "map is not an order isomorphism");
    auto report = site_morphism_report(phi, J, K);
    return report.preserves_covers && report.has_clp;
}

bool representable_is_sheaf(const Topology& J, int p, RepresentableWitness* witness) {
    const FinitePoset& P = J.poset();
    for (int q = 0; q < P.size(); ++q) {
        if (P.leq(q, p)) continue;
        for (int id : J.covers(q)) {
            Mask S = J.frame().at(id);
            if (subset_of(S, P.down(p))) {
                if (witness) *witness = {p, q, S};
                return false;
            }
        }
    }
    return true;
}

bool is_subcanonical(const Topology& J, RepresentableWitness* witness) {
    for (int p = 0; p < J.size(); ++p)
        if (!representable_is_sheaf(J, p, witness)) return false;
    return true;
}

bool heyting_subcanonical(const FinitePoset& P, Mask X, int* failing_p) {
    for (int p = 0; p < P.size(); ++p)
        if (heyting_implication(P, X, P.down(p)) != P.down(p)) {
            if (failing_p) *failing_p = p;
            return false;
        }
    return true;
}

CanonicalSearch canonical_topology_search(const FinitePoset& P) {
    const int n = P.size();
    if (n > 20) fail("TooLargeError", "canonical search is limited to 20 elements", {{"n", n}});
    std::vector<Mask> valid;
    for (Mask X = 0; X <= P.all(); ++X)
        if (heyting_subcanonical(P, X)) valid.push_back(X);
    CanonicalSearch out;
    for (Mask X : valid) {
        bool minimal = true;
        for (Mask Y : valid)
            if (Y != X && subset_of(Y, X)) {
                minimal = false;
                break;
            }
        if (minimal) out.minimal_subsets.push_back(X);
    }
    out.unique = out.minimal_subsets.size() == 1;
    return out;
}

} // namespace sitecalc

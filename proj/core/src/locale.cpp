#include "sitecalc/locale.hpp"

#include <algorithm>
#include <map>

namespace sitecalc {

namespace {

json set_json(const DownSetFrame& F, int id) { return mask_to_json(F.poset(), F.at(id)); }

} // namespace

int Congruence::class_count() const {
    int m = 0;
    for (int c : class_of) m = std::max(m, c + 1);
    return m;
}

std::vector<std::vector<int>> Congruence::classes() const {
    std::vector<std::vector<int>> out(class_count());
    for (int a = 0; a < static_cast<int>(class_of.size()); ++a) out[class_of[a]].push_back(a);
    return out;
}

bool Sublocale::contains(int id) const { return std::binary_search(members.begin(), members.end(), id); }

Congruence make_congruence(const FramePtr& frame, const std::vector<int>& labels) {
    std::map<int, int> renumber;
    Congruence theta{frame, std::vector<int>(labels.size())};
    for (std::size_t a = 0; a < labels.size(); ++a) {
        auto [it, fresh] = renumber.emplace(labels[a], static_cast<int>(renumber.size()));
        theta.class_of[a] = it->second;
    }
    return theta;
}

Congruence congruence_from_classes(const FramePtr& frame, const std::vector<std::vector<int>>& classes) {
    std::vector<int> labels(frame->size(), -1);
    for (int c = 0; c < static_cast<int>(classes.size()); ++c)
        for (int id : classes[c]) {
            if (id < 0 || id >= frame->size())
                fail("NotACongruenceError", "class member is not a down-set id", {{"id", id}});
            if (labels[id] != -1)
                fail("NotACongruenceError", "classes overlap", {{"id", id}});
            labels[id] = c;
        }
    for (int id = 0; id < frame->size(); ++id)
        if (labels[id] == -1) fail("NotACongruenceError", "classes do not cover D(P)", {{"id", id}});
    return make_congruence(frame, labels);
}

Sublocale make_sublocale(const FramePtr& frame, std::vector<int> ids) {
    std::sort(ids.begin(), ids.end());
    ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
    for (int id : ids)
        if (id < 0 || id >= frame->size()) fail("NotASublocaleError", "member is not a down-set id", {{"id", id}});
    return {frame, std::move(ids)};
}

std::optional<json> nucleus_violation(const Nucleus& j) {
    const DownSetFrame& F = *j.frame;
    if (static_cast<int>(j.table.size()) != F.size()) return json{{"law", "table size"}};
    for (int v : j.table)
        if (v < 0 || v >= F.size()) return json{{"law", "table range"}, {"value", v}};
    for (int a = 0; a < F.size(); ++a) {
        if (!subset_of(F.at(a), F.at(j.table[a])))
            return json{{"law", "inflationary"}, {"A", set_json(F, a)}};
        if (j.table[j.table[a]] != j.table[a]) return json{{"law", "idempotent"}, {"A", set_json(F, a)}};
    }
    for (int a = 0; a < F.size(); ++a)
        for (int b = a + 1; b < F.size(); ++b)
            if (F.at(j.table[F.id(F.at(a) & F.at(b))]) != (F.at(j.table[a]) & F.at(j.table[b])))
                return json{{"law", "meet"}, {"A", set_json(F, a)}, {"B", set_json(F, b)}};
    return std::nullopt;
}

std::optional<json> congruence_violation(const Congruence& theta) {
    const DownSetFrame& F = *theta.frame;
    if (static_cast<int>(theta.class_of.size()) != F.size()) return json{{"law", "partition size"}};
    // Compatibility with binary meets and joins covers all finite families.
    for (int a = 0; a < F.size(); ++a)
        for (int b = a + 1; b < F.size(); ++b) {
            if (!theta.related(a, b)) continue;
            for (int c = 0; c < F.size(); ++c) {
                if (!theta.related(F.id(F.at(a) & F.at(c)), F.id(F.at(b) & F.at(c))))
                    return json{{"law", "meet"}, {"A", set_json(F, a)}, {"B", set_json(F, b)}, {"C", set_json(F, c)}};
                if (!theta.related(F.id(F.at(a) | F.at(c)), F.id(F.at(b) | F.at(c))))
                    return json{{"law", "join"}, {"A", set_json(F, a)}, {"B", set_json(F, b)}, {"C", set_json(F, c)}};
            }
        }
    return std::nullopt;
}

std::vector<json> sublocale_violations(const Sublocale& M) {
    const DownSetFrame& F = *M.frame;
    const FinitePoset& P = F.poset();
    std::vector<json> out;
    if (!M.contains(F.top())) out.push_back({{"law", "empty meet"}, {"missing", set_json(F, F.top())}});
    for (std::size_t i = 0; i < M.members.size(); ++i)
        for (std::size_t k = i + 1; k < M.members.size(); ++k) {
            int m = F.id(F.at(M.members[i]) & F.at(M.members[k]));
            if (!M.contains(m))
                out.push_back({{"law", "meet"},
                               {"M1", set_json(F, M.members[i])},
                               {"M2", set_json(F, M.members[k])},
                               {"missing", set_json(F, m)}});
        }
    for (int a = 0; a < F.size(); ++a)
        for (int m : M.members) {
            Mask imp = heyting_implication(P, F.at(a), F.at(m));
            if (!M.contains(F.id(imp)))
                out.push_back({{"law", "implication"},
                               {"A", set_json(F, a)},
                               {"M", set_json(F, m)},
                               {"implication", mask_to_json(P, imp)}});
        }
    return out;
}

void require_nucleus(const Nucleus& j) {
    if (auto v = nucleus_violation(j)) fail("NotANucleusError", "nucleus law fails: " + (*v)["law"].get<std::string>(), *v);
}

void require_congruence(const Congruence& theta) {
    if (auto v = congruence_violation(theta))
        fail("NotACongruenceError", "congruence law fails: " + (*v)["law"].get<std::string>(), *v);
}

void require_sublocale(const Sublocale& M) {
    auto v = sublocale_violations(M);
    if (!v.empty()) {
        json witness = v.front();
        witness["all"] = v;
        fail("NotASublocaleError", "sublocale law fails: " + v.front()["law"].get<std::string>(), witness);
    }
}

Nucleus nucleus_from_topology(const Topology& J) {
    const DownSetFrame& F = J.frame();
    const FinitePoset& P = J.poset();
    Nucleus j{J.frame_ptr(), std::vector<int>(F.size())};
    for (int a = 0; a < F.size(); ++a) {
        Mask U = 0;
        for (int p = 0; p < P.size(); ++p)
            if (J.is_cover(p, F.at(a) & P.down(p))) U |= bit(p);
        j.table[a] = F.id(U);
    }
    return j;
}

Topology topology_from_nucleus(const Nucleus& j) {
    require_nucleus(j);
    const DownSetFrame& F = *j.frame;
    CoverFamily covers(F.poset().size());
    for (int p = 0; p < F.poset().size(); ++p)
        for (int id : F.sieves(p))
            if (has(F.at(j.table[id]), p)) covers[p].push_back(id);
    return Topology(j.frame, std::move(covers));
}

Congruence congruence_from_nucleus(const Nucleus& j) {
    require_nucleus(j);
    return make_congruence(j.frame, j.table);
}

Nucleus nucleus_from_congruence(const Congruence& theta) {
    require_congruence(theta);
    const DownSetFrame& F = *theta.frame;
    std::vector<Mask> unions(theta.class_count(), 0);
    for (int a = 0; a < F.size(); ++a) unions[theta.class_of[a]] |= F.at(a);
    Nucleus j{theta.frame, std::vector<int>(F.size())};
    for (int a = 0; a < F.size(); ++a) j.table[a] = F.id(unions[theta.class_of[a]]);
    return j;
}

Sublocale sublocale_from_nucleus(const Nucleus& j) {
    require_nucleus(j);
    std::vector<int> ids;
    for (int a = 0; a < j.frame->size(); ++a)
        if (j.table[a] == a) ids.push_back(a);
    return {j.frame, ids};
}

Nucleus nucleus_from_sublocale(const Sublocale& M) {
    require_sublocale(M);
    const DownSetFrame& F = *M.frame;
    Nucleus j{M.frame, std::vector<int>(F.size())};
    for (int a = 0; a < F.size(); ++a) {
        Mask meet = F.poset().all();
        for (int m : M.members)
            if (subset_of(F.at(a), F.at(m))) meet &= F.at(m);
        j.table[a] = F.id(meet);
    }
    return j;
}

Congruence congruence_from_topology(const Topology& J) {
    const DownSetFrame& F = J.frame();
    const FinitePoset& P = J.poset();
    // A and B are related iff they are covering on exactly the same elements.
    std::vector<int> signature(F.size());
    std::map<Mask, int> seen;
    for (int a = 0; a < F.size(); ++a) {
        Mask sig = 0;
        for (int p = 0; p < P.size(); ++p)
            if (J.is_cover(p, F.at(a) & P.down(p))) sig |= bit(p);
        signature[a] = seen.emplace(sig, static_cast<int>(seen.size())).first->second;
    }
    return make_congruence(J.frame_ptr(), signature);
}

Topology topology_from_congruence(const Congruence& theta) {
    require_congruence(theta);
    const DownSetFrame& F = *theta.frame;
    const FinitePoset& P = F.poset();
    CoverFamily covers(P.size());
    for (int p = 0; p < P.size(); ++p)
        for (int id : F.sieves(p))
            if (theta.related(id, F.id(P.down(p)))) covers[p].push_back(id);
    return Topology(theta.frame, std::move(covers));
}

Sublocale sublocale_from_topology(const Topology& J) {
    const DownSetFrame& F = J.frame();
    const FinitePoset& P = J.poset();
    std::vector<int> ids;
    for (int a = 0; a < F.size(); ++a) {
        bool closed = true;
        for (int p = 0; p < P.size() && closed; ++p)
            if (J.is_cover(p, F.at(a) & P.down(p)) && !has(F.at(a), p)) closed = false;
        if (closed) ids.push_back(a);
    }
    return {J.frame_ptr(), ids};
}

Topology topology_from_sublocale(const Sublocale& M) {
    require_sublocale(M);
    const DownSetFrame& F = *M.frame;
    const FinitePoset& P = F.poset();
    CoverFamily covers(P.size());
    for (int p = 0; p < P.size(); ++p)
        for (int id : F.sieves(p)) {
            bool covering = true;
            for (int m : M.members)
                if (subset_of(F.at(id), F.at(m)) && !has(F.at(m), p)) {
                    covering = false;
                    break;
                }
            if (covering) covers[p].push_back(id);
        }
    return Topology(M.frame, std::move(covers));
}

bool nucleus_leq(const Nucleus& j, const Nucleus& k) {
    for (std::size_t a = 0; a < j.table.size(); ++a)
        if (!subset_of(j.frame->at(j.table[a]), k.frame->at(k.table[a]))) return false;
    return true;
}

bool congruence_leq(const Congruence& a, const Congruence& b) {
    for (std::size_t x = 0; x < a.class_of.size(); ++x)
        for (std::size_t y = x + 1; y < a.class_of.size(); ++y)
            if (a.related(x, y) && !b.related(x, y)) return false;
    return true;
}

bool sublocale_leq(const Sublocale& a, const Sublocale& b) {
    return std::includes(b.members.begin(), b.members.end(), a.members.begin(), a.members.end());
}

bool is_complete(const Nucleus& j) {
    const DownSetFrame& F = *j.frame;
    if (j.table[F.top()] != F.top()) return false;
    for (int a = 0; a < F.size(); ++a)
        for (int b = a + 1; b < F.size(); ++b)
            if (F.at(j.table[F.id(F.at(a) & F.at(b))]) != (F.at(j.table[a]) & F.at(j.table[b]))) return false;
    return true;
}

bool is_complete(const Congruence& theta) {
    const DownSetFrame& F = *theta.frame;
    for (int a = 0; a < F.size(); ++a)
        for (int b = 0; b < F.size(); ++b) {
            if (!theta.related(a, b)) continue;
            for (int c = 0; c < F.size(); ++c)
                for (int d = 0; d < F.size(); ++d)
                    if (theta.related(c, d) &&
                        !theta.related(F.id(F.at(a) & F.at(c)), F.id(F.at(b) & F.at(d))))
                        return false;
        }
    return true;
}

SubsetForms subset_forms(const FramePtr& frame, Mask X) {
    const DownSetFrame& F = *frame;
    const FinitePoset& P = F.poset();
    Nucleus j{frame, std::vector<int>(F.size())};
    std::vector<int> labels(F.size());
    std::map<Mask, int> seen;
    std::vector<int> fixed;
    for (int a = 0; a < F.size(); ++a) {
        j.table[a] = F.id(heyting_implication(P, X, F.at(a)));
        labels[a] = seen.emplace(F.at(a) & X, static_cast<int>(seen.size())).first->second;
        if (j.table[a] == a) fixed.push_back(a);
    }
    return {j, make_congruence(frame, labels), {frame, fixed}};
}

Nucleus subset_nucleus_via_adjoint(const FramePtr& frame, Mask X) {
    FrameMap f = restriction_map(frame, X);
    FrameMap g = upper_adjoint(f);
    Nucleus j{frame, std::vector<int>(frame->size())};
    for (int a = 0; a < frame->size(); ++a) j.table[a] = g.table[f.table[a]];
    return j;
}

std::optional<std::string> check_subset_sublocale_iso(const FramePtr& frame, Mask X) {
    const DownSetFrame& F = *frame;
    const FinitePoset& P = F.poset();
    SubsetForms forms = subset_forms(frame, X);
    Subposet sub = induced(P, X);
    DownSetFrame local(sub.poset);
    const auto& M = forms.sublocale.members;
    if (static_cast<int>(M.size()) != local.size()) return "sizes differ";
    auto down = [&](int m) { return local.id(sub.lower(F.at(m))); };
    auto up = [&](int y) { return F.id(heyting_implication(P, X, sub.lift(local.at(y)))); };
    for (int y = 0; y < local.size(); ++y)
        if (down(up(y)) != y) return "Y -> X→Y is not a section";
    for (int m : M) {
        if (up(down(m)) != m) return "A -> A∩X is not injective on M_X";
        for (int k : M) {
            int meet = F.id(F.at(m) & F.at(k));
            int join = forms.nucleus.table[F.id(F.at(m) | F.at(k))];
            if (down(meet) != local.id(local.at(down(m)) & local.at(down(k)))) return "meet not preserved";
            if (down(join) != local.id(local.at(down(m)) | local.at(down(k)))) return "join not preserved";
        }
    }
    return std::nullopt;
}

Nucleus double_negation_nucleus(const FramePtr& frame) {
    Nucleus j{frame, std::vector<int>(frame->size())};
    for (int a = 0; a < frame->size(); ++a) j.table[a] = frame->id(double_negation(frame->poset(), frame->at(a)));
    return j;
}

QuotientFrame quotient_frame(const Congruence& theta) {
    const DownSetFrame& F = *theta.frame;
    const int m = theta.class_count();
    QuotientFrame q{theta, std::vector<std::vector<int>>(m, std::vector<int>(m, -1)),
                    std::vector<std::vector<int>>(m, std::vector<int>(m, -1))};
    for (int a = 0; a < F.size(); ++a)
        for (int b = 0; b < F.size(); ++b) {
            int ca = theta.class_of[a], cb = theta.class_of[b];
            int meet = theta.class_of[F.id(F.at(a) & F.at(b))];
            int join = theta.class_of[F.id(F.at(a) | F.at(b))];
            if ((q.meet[ca][cb] != -1 && q.meet[ca][cb] != meet) || (q.join[ca][cb] != -1 && q.join[ca][cb] != join))
                fail("NotACongruenceError", "operations are not well defined on classes",
                     {{"A", set_json(F, a)}, {"B", set_json(F, b)}});
            q.meet[ca][cb] = meet;
            q.join[ca][cb] = join;
        }
    return q;
}

Factorization homomorphism_factorization(const FrameMap& f) {
    require_frame_morphism(f);
    const DownSetFrame& dst = *f.target;
    std::vector<char> hit(dst.size(), 0);
    for (int t : f.table) hit[t] = 1;
    for (int b = 0; b < dst.size(); ++b)
        if (!hit[b]) fail("NotSurjectiveError", "frame map is not surjective", {{"missing", set_json(dst, b)}});
    Factorization out{make_congruence(f.source, f.table), {}};
    out.k.assign(out.kernel.class_count(), -1);
    for (int a = 0; a < f.source->size(); ++a) out.k[out.kernel.class_of[a]] = f.table[a];
    return out;
}

Mask extract_subset(const Congruence& theta) {
    const DownSetFrame& F = *theta.frame;
    const FinitePoset& P = F.poset();
    Mask out = 0;
    for (int p = 0; p < P.size(); ++p)
        if (!theta.related(F.id(P.down(p)), F.id(P.down(p) & ~bit(p)))) out |= bit(p);
    return out;
}

json DiagramReport::to_json() const {
    json checks_json = json::array();
    for (const auto& c : checks)
        checks_json.push_back({{"name", c.name}, {"variance", c.variance}, {"passed", c.passed}, {"failed", c.failed}});
    return {{"topologies", topologies}, {"ok", ok()}, {"checks", checks_json}, {"failures", failures}};
}

DiagramReport verify_commuting_diagram(const std::vector<Topology>& topologies) {
    DiagramReport report;
    report.topologies = static_cast<int>(topologies.size());
    std::map<std::string, std::size_t> index;
    auto record = [&](const std::string& name, const std::string& variance, bool ok, const std::string& detail) {
        auto [it, fresh] = index.emplace(name, report.checks.size());
        if (fresh) report.checks.push_back({name, variance, 0, 0});
        auto& c = report.checks[it->second];
        if (ok) {
            ++c.passed;
        } else {
            ++c.failed;
            report.failures.push_back(name + ": " + detail);
        }
    };

    struct Presentations {
        Nucleus j;
        Congruence theta;
        Sublocale M;
        Mask X;
    };
    std::vector<Presentations> all;
    for (std::size_t t = 0; t < topologies.size(); ++t) {
        const Topology& J = topologies[t];
        const std::string tag = "topology #" + std::to_string(t);
        Nucleus j = nucleus_from_topology(J);
        record("nucleus laws", "", !nucleus_violation(j).has_value(), tag);
        Congruence theta = congruence_from_nucleus(j);
        Sublocale M = sublocale_from_nucleus(j);
        record("topology <-> nucleus", "", topology_from_nucleus(j) == J && nucleus_from_topology(topology_from_nucleus(j)) == j, tag);
        record("nucleus <-> congruence", "",
               nucleus_from_congruence(theta) == j && congruence_from_nucleus(nucleus_from_congruence(theta)) == theta, tag);
        record("nucleus <-> sublocale", "",
               nucleus_from_sublocale(M) == j && sublocale_from_nucleus(nucleus_from_sublocale(M)) == M, tag);
        record("congruence <-> topology", "",
               topology_from_congruence(theta) == J && congruence_from_topology(J) == theta, tag);
        record("sublocale <-> topology", "", topology_from_sublocale(M) == J && sublocale_from_topology(J) == M, tag);
        record("composite via congruence", "", topology_from_congruence(congruence_from_nucleus(j)) == topology_from_nucleus(j), tag);
        record("composite via sublocale", "", topology_from_sublocale(sublocale_from_nucleus(j)) == topology_from_nucleus(j), tag);

        Mask X = generating_subset(J);
        SubsetForms forms = subset_forms(J.frame_ptr(), X);
        record("subset forms", "", subset_topology(J.frame_ptr(), X) == J && forms.nucleus == j &&
                                       forms.congruence == theta && forms.sublocale == M, tag);
        bool cj = is_complete(J), cn = is_complete(j), cc = is_complete(theta);
        record("completeness preserved", "", cj && cn && cc, tag);
        all.push_back({j, theta, M, X});
    }

    for (std::size_t a = 0; a < topologies.size(); ++a)
        for (std::size_t b = 0; b < topologies.size(); ++b) {
            const std::string tag = "pair #" + std::to_string(a) + ",#" + std::to_string(b);
            bool base = leq(topologies[a], topologies[b]);
            record("J -> j_J", "monotone: G(P) pointwise inclusion to Nuc pointwise inclusion",
                   base == nucleus_leq(all[a].j, all[b].j), tag);
            record("j -> theta_j", "monotone: Nuc to Con ordered by inclusion of relations",
                   nucleus_leq(all[a].j, all[b].j) == congruence_leq(all[a].theta, all[b].theta), tag);
            record("j -> M_j", "antitone: Nuc to Sub ordered by inclusion (monotone into Sub^op)",
                   nucleus_leq(all[a].j, all[b].j) == sublocale_leq(all[b].M, all[a].M), tag);
            record("theta -> J_theta", "monotone: Con to G(P)",
                   congruence_leq(all[a].theta, all[b].theta) == base, tag);
            record("M -> J_M", "antitone: Sub ordered by inclusion to G(P)",
                   sublocale_leq(all[b].M, all[a].M) == base, tag);
            record("X -> J_X", "antitone: subsets ordered by inclusion to G(P)",
                   subset_of(all[b].X, all[a].X) == base, tag);
        }
    return report;
}

json nucleus_to_json(const Nucleus& j) {
    json out = json::array();
    for (int a = 0; a < static_cast<int>(j.table.size()); ++a) out.push_back({a, j.table[a]});
    return out;
}

json congruence_to_json(const Congruence& theta) { return theta.classes(); }

json sublocale_to_json(const Sublocale& M) { return M.members; }

Nucleus nucleus_from_json(const FramePtr& frame, const json& j) {
    if (!j.is_array()) fail("ParseError", "nucleus must be an array of id pairs");
    Nucleus n{frame, std::vector<int>(frame->size(), -1)};
    for (const auto& pair : j) {
        if (!pair.is_array() || pair.size() != 2 || !pair[0].is_number_integer() || !pair[1].is_number_integer())
            fail("ParseError", "nucleus entries must be [id, id] pairs");
        int a = pair[0].get<int>(), b = pair[1].get<int>();
        if (a < 0 || a >= frame->size() || b < 0 || b >= frame->size())
            fail("NotANucleusError", "id out of range", {{"pair", pair}});
        n.table[a] = b;
    }
    for (int a = 0; a < frame->size(); ++a)
        if (n.table[a] == -1) fail("NotANucleusError", "nucleus table is missing an id", {{"id", a}});
    require_nucleus(n);
    return n;
}

Congruence congruence_from_json(const FramePtr& frame, const json& j) {
    if (!j.is_array()) fail("ParseError", "congruence must be an array of classes");
    std::vector<std::vector<int>> classes;
    for (const auto& c : j) {
        if (!c.is_array()) fail("ParseError", "congruence classes must be arrays of ids");
        classes.push_back({});
        for (const auto& id : c) {
            if (!id.is_number_integer()) fail("ParseError", "congruence classes must be arrays of ids");
            classes.back().push_back(id.get<int>());
        }
    }
    Congruence theta = congruence_from_classes(frame, classes);
    require_congruence(theta);
    return theta;
}

Sublocale sublocale_from_json(const FramePtr& frame, const json& j) {
    if (!j.is_array()) fail("ParseError", "sublocale must be an array of ids");
    std::vector<int> ids;
    for (const auto& id : j) {
        if (!id.is_number_integer()) fail("ParseError", "sublocale must be an array of ids");
        ids.push_back(id.get<int>());
    }
    Sublocale M = make_sublocale(frame, ids);
    require_sublocale(M);
    return M;
}

} // namespace sitecalc

#include "sitecalc/sheaf.hpp"

#include <algorithm>
#include <numeric>
#include <set>

namespace sitecalc {

namespace {

std::vector<int> identity_table(int m) {
    std::vector<int> id(m);
    std::iota(id.begin(), id.end(), 0);
    return id;
}

json family_json(const FinitePoset& P, const Family& fam) {
    json out = json::object();
    for (int x = 0; x < static_cast<int>(fam.size()); ++x)
        if (fam[x] >= 0) out[P.label(x)] = fam[x];
    return out;
}

void require_poset(const FinitePoset& a, const FinitePoset& b, const char* what) {
    if (!(a == b)) fail("PosetMismatchError", what);
}

} // namespace

Presheaf::Presheaf(FinitePoset P, std::vector<int> sizes, std::map<std::pair<int, int>, std::vector<int>> maps)
    : poset_(std::move(P)), sizes_(std::move(sizes)), maps_(std::move(maps)) {
    sizes_.resize(poset_.size(), 0);
    for (int p = 0; p < poset_.size(); ++p) maps_[{p, p}] = identity_table(sizes_[p]);
}

const std::vector<int>& Presheaf::restriction(int q, int p) const {
    auto it = maps_.find({q, p});
    if (it == maps_.end()) throw std::out_of_range("no restriction map for the pair");
    return it->second;
}

Presheaf presheaf_from_partial(FinitePoset P, std::vector<int> sizes,
                               std::map<std::pair<int, int>, std::vector<int>> maps) {
    const int n = P.size();
    sizes.resize(n, 0);
    for (int s : sizes)
        if (s < 0) fail("ParseError", "value sizes must be non-negative");
    for (const auto& [key, table] : maps) {
        auto [q, p] = key;
        if (q < 0 || p < 0 || q >= n || p >= n || !P.leq(q, p))
            fail("ParseError", "restriction given for a pair that is not ordered");
        if (static_cast<int>(table.size()) != sizes[p])
            fail("RestrictionError", "restriction table has the wrong length",
                 {{"q", P.label(q)}, {"p", P.label(p)}});
        for (int v : table)
            if (v < 0 || v >= sizes[q])
                fail("RestrictionError", "restriction value out of range", {{"q", P.label(q)}, {"p", P.label(p)}});
    }
    const auto covers = P.covers();
    for (int p : P.linear_extension()) {
        for (int q : P.linear_extension()) {
            if (!P.lt(q, p) || maps.count({q, p})) continue;
            auto is_cover = std::find(covers.begin(), covers.end(), std::make_pair(q, p)) != covers.end();
            if (is_cover) {
                if (sizes[p] != 0)
                    fail("ParseError", "missing restriction map " + P.label(q) + "<=" + P.label(p));
                maps[{q, p}] = {};
                continue;
            }
            // Compose through the first cover c of p lying above q.
            for (auto [c, top] : covers) {
                if (top != p || !P.leq(q, c)) continue;
                const auto& upper = maps.at({c, p});
                const auto& lower = q == c ? identity_table(sizes[c]) : maps.at({q, c});
                std::vector<int> composite(sizes[p]);
                for (int a = 0; a < sizes[p]; ++a) composite[a] = lower[upper[a]];
                maps[{q, p}] = composite;
                break;
            }
        }
    }
    return Presheaf(std::move(P), std::move(sizes), std::move(maps));
}

std::optional<json> functoriality_violation(const Presheaf& F) {
    const FinitePoset& P = F.poset();
    for (int p = 0; p < P.size(); ++p)
        for (int q : members(P.down(p))) {
            auto it = F.maps().find({q, p});
            if (it == F.maps().end()) return json{{"missing", {P.label(q), P.label(p)}}};
            if (static_cast<int>(it->second.size()) != F.size(p)) return json{{"length", {P.label(q), P.label(p)}}};
            for (int v : it->second)
                if (v < 0 || v >= F.size(q)) return json{{"range", {P.label(q), P.label(p)}}};
            if (q == p && it->second != identity_table(F.size(p))) return json{{"identity", P.label(p)}};
        }
    for (int p = 0; p < P.size(); ++p)
        for (int q : members(P.down(p)))
            for (int r : members(P.down(q)))
                for (int a = 0; a < F.size(p); ++a)
                    if (F.restrict(r, q, F.restrict(q, p, a)) != F.restrict(r, p, a))
                        return json{{"r", P.label(r)}, {"q", P.label(q)}, {"p", P.label(p)}};
    return std::nullopt;
}

void validate_presheaf(const Presheaf& F) {
    if (auto v = functoriality_violation(F)) {
        if (v->contains("r")) fail("FunctorialityError", "restriction maps do not compose", *v);
        fail("RestrictionError", "restriction maps are malformed", *v);
    }
}

std::vector<Family> matching_families(const Presheaf& F, Mask S) {
    const FinitePoset& P = F.poset();
    std::vector<int> order;
    for (int x : P.linear_extension())
        if (has(S, x)) order.push_back(x);
    std::reverse(order.begin(), order.end());

    std::vector<Family> out;
    Family fam(P.size(), -1);
    auto rec = [&](auto&& self, std::size_t i) -> void {
        if (i == order.size()) {
            out.push_back(fam);
            return;
        }
        int x = order[i];
        int forced = -1;
        for (std::size_t j = 0; j < i; ++j) {
            int y = order[j];
            if (!P.leq(x, y)) continue;
            int v = F.restrict(x, y, fam[y]);
            if (forced == -1) {
                forced = v;
            } else if (forced != v) {
                return;
            }
        }
        if (forced != -1) {
            fam[x] = forced;
            self(self, i + 1);
        } else {
            for (int a = 0; a < F.size(x); ++a) {
                fam[x] = a;
                self(self, i + 1);
            }
        }
        fam[x] = -1;
    };
    rec(rec, 0);
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<int> amalgamations(const Presheaf& F, int p, Mask S, const Family& family) {
    const FinitePoset& P = F.poset();
    if (!subset_of(S, P.down(p)) || !P.is_downset(S))
        fail("NotASieveError", "cover is not a sieve on " + P.label(p), {{"sieve", mask_to_json(P, S)}});
    for (int x : members(S)) {
        if (static_cast<int>(family.size()) <= x || family[x] < 0 || family[x] >= F.size(x))
            fail("NotMatchingError", "family has no valid value at " + P.label(x), {{"x", P.label(x)}});
        for (int y : members(P.down(x) & S))
            if (F.restrict(y, x, family[x]) != family[y])
                fail("NotMatchingError", "family does not match along " + P.label(y) + "<=" + P.label(x),
                     {{"y", P.label(y)}, {"x", P.label(x)}});
    }
    std::vector<int> out;
    for (int a = 0; a < F.size(p); ++a) {
        bool ok = true;
        for (int x : members(S))
            if (F.restrict(x, p, a) != family[x]) {
                ok = false;
                break;
            }
        if (ok) out.push_back(a);
    }
    return out;
}

SheafCheck is_sheaf(const Presheaf& F, const Topology& J) {
    require_poset(F.poset(), J.poset(), "presheaf and topology live on different posets");
    const FinitePoset& P = F.poset();
    for (int p = 0; p < P.size(); ++p)
        for (int id : J.covers(p)) {
            Mask S = J.frame().at(id);
            for (const Family& fam : matching_families(F, S)) {
                auto amal = amalgamations(F, p, S, fam);
                if (amal.size() != 1)
                    return {false,
                            {{"p", P.label(p)},
                             {"sieve", mask_to_json(P, S)},
                             {"family", family_json(P, fam)},
                             {"amalgamations", amal.size()}}};
            }
        }
    return {};
}

Presheaf restrict_presheaf(const Presheaf& F, Mask X) {
    Subposet sub = induced(F.poset(), X);
    const int m = static_cast<int>(sub.embed.size());
    std::vector<int> sizes(m);
    std::map<std::pair<int, int>, std::vector<int>> maps;
    for (int i = 0; i < m; ++i) {
        sizes[i] = F.size(sub.embed[i]);
        for (int j = 0; j < m; ++j)
            if (i != j && sub.poset.leq(i, j)) maps[{i, j}] = F.restriction(sub.embed[i], sub.embed[j]);
    }
    return Presheaf(sub.poset, sizes, maps);
}

ExtendedPresheaf extend_presheaf(const Presheaf& F, const FinitePoset& P, Mask X) {
    Subposet sub = induced(P, X);
    require_poset(F.poset(), sub.poset, "presheaf is not defined on the induced subposet");
    const int n = P.size();
    ExtendedPresheaf out;
    out.elements.assign(n, {});
    std::vector<std::map<std::vector<int>, int>> lookup(n);
    std::vector<int> sizes(n);
    for (int p = 0; p < n; ++p) {
        std::vector<int> support = members(sub.lower(X & P.down(p)));
        for (const Family& fam : matching_families(F, sub.lower(X & P.down(p)))) {
            std::vector<int> tuple;
            for (int i : support) tuple.push_back(fam[i]);
            lookup[p].emplace(tuple, static_cast<int>(out.elements[p].size()));
            out.elements[p].push_back(std::move(tuple));
        }
        sizes[p] = static_cast<int>(out.elements[p].size());
    }
    std::map<std::pair<int, int>, std::vector<int>> maps;
    for (int p = 0; p < n; ++p) {
        std::vector<int> support = members(X & P.down(p));
        for (int q : members(P.down(p) & ~bit(p))) {
            std::vector<int> table;
            for (const auto& tuple : out.elements[p]) {
                std::vector<int> restricted;
                for (std::size_t i = 0; i < support.size(); ++i)
                    if (P.leq(support[i], q)) restricted.push_back(tuple[i]);
                table.push_back(lookup[q].at(restricted));
            }
            maps[{q, p}] = std::move(table);
        }
    }
    out.presheaf = Presheaf(P, sizes, maps);
    return out;
}

Presheaf yoneda_presheaf(const FinitePoset& P, int p) {
    std::vector<int> sizes(P.size(), 0);
    std::map<std::pair<int, int>, std::vector<int>> maps;
    for (int q : members(P.down(p))) sizes[q] = 1;
    for (int b = 0; b < P.size(); ++b)
        for (int a : members(P.down(b) & ~bit(b))) maps[{a, b}] = std::vector<int>(sizes[b], 0);
    return Presheaf(P, sizes, maps);
}

std::vector<Presheaf> enumerate_presheaves(const FinitePoset& P, int k, PresheafCaps caps) {
    const int n = P.size();
    if (n > caps.max_elements || k > caps.max_value || k < 0)
        fail("TooLargeError", "presheaf enumeration exceeds the configured caps",
             {{"n", n}, {"k", k}, {"max_elements", caps.max_elements}, {"max_value", caps.max_value}});
    const auto covers = P.covers();
    std::vector<Presheaf> out;
    std::vector<int> sizes(n, 0);
    while (true) {
        // Odometer over functions on the cover pairs; skip shapes with no function into ∅.
        bool possible = true;
        for (auto [q, p] : covers)
            if (sizes[q] == 0 && sizes[p] > 0) possible = false;
        if (possible) {
            std::vector<std::vector<int>> tables;
            for (auto [q, p] : covers) tables.emplace_back(sizes[p], 0);
            while (true) {
                std::map<std::pair<int, int>, std::vector<int>> maps;
                for (std::size_t c = 0; c < covers.size(); ++c) maps[covers[c]] = tables[c];
                Presheaf F = presheaf_from_partial(P, sizes, maps);
                if (!functoriality_violation(F)) out.push_back(std::move(F));
                std::size_t c = 0;
                bool carry = true;
                for (; c < tables.size() && carry; ++c) {
                    auto& t = tables[c];
                    int base = sizes[covers[c].first];
                    std::size_t i = 0;
                    for (; i < t.size(); ++i) {
                        if (++t[i] < base) break;
                        t[i] = 0;
                    }
                    carry = i == t.size();
                }
                if (carry) break;
            }
        }
        int i = 0;
        for (; i < n; ++i) {
            if (++sizes[i] <= k) break;
            sizes[i] = 0;
        }
        if (i == n) break;
    }
    return out;
}

bool is_natural(const Presheaf& F, const Presheaf& G, const Transformation& alpha) {
    const FinitePoset& P = F.poset();
    if (static_cast<int>(alpha.size()) != P.size()) return false;
    for (int p = 0; p < P.size(); ++p) {
        if (static_cast<int>(alpha[p].size()) != F.size(p)) return false;
        for (int v : alpha[p])
            if (v < 0 || v >= G.size(p)) return false;
    }
    for (int p = 0; p < P.size(); ++p)
        for (int q : members(P.down(p) & ~bit(p)))
            for (int a = 0; a < F.size(p); ++a)
                if (G.restrict(q, p, alpha[p][a]) != alpha[q][F.restrict(q, p, a)]) return false;
    return true;
}

bool is_bijective(const Transformation& alpha, const Presheaf& F, const Presheaf& G) {
    for (int p = 0; p < F.poset().size(); ++p) {
        if (F.size(p) != G.size(p)) return false;
        std::vector<int> sorted = alpha[p];
        std::sort(sorted.begin(), sorted.end());
        if (sorted != identity_table(G.size(p))) return false;
    }
    return true;
}

std::vector<Transformation> natural_transformations(const Presheaf& F, const Presheaf& G) {
    const int n = F.poset().size();
    std::vector<Transformation> out;
    Transformation alpha(n);
    for (int p = 0; p < n; ++p) {
        if (F.size(p) > 0 && G.size(p) == 0) return out;
        alpha[p].assign(F.size(p), 0);
    }
    while (true) {
        if (is_natural(F, G, alpha)) out.push_back(alpha);
        int p = 0;
        bool carry = true;
        for (; p < n && carry; ++p) {
            std::size_t i = 0;
            for (; i < alpha[p].size(); ++i) {
                if (++alpha[p][i] < G.size(p)) break;
                alpha[p][i] = 0;
            }
            carry = i == alpha[p].size();
        }
        if (carry) break;
    }
    return out;
}

Transformation psi_component(const ExtendedPresheaf& E, const FinitePoset& P, Mask X) {
    Subposet sub = induced(P, X);
    Transformation psi(sub.embed.size());
    for (std::size_t i = 0; i < sub.embed.size(); ++i) {
        int x = sub.embed[i];
        std::vector<int> support = members(X & P.down(x));
        auto pos = std::find(support.begin(), support.end(), x) - support.begin();
        for (const auto& tuple : E.elements[x]) psi[i].push_back(tuple[pos]);
    }
    return psi;
}

Transformation phi_by_search(const Presheaf& G, const ExtendedPresheaf& E, Mask X) {
    const FinitePoset& P = G.poset();
    Transformation phi(P.size());
    for (int p = 0; p < P.size(); ++p) {
        std::vector<int> support = members(X & P.down(p));
        for (const auto& tuple : E.elements[p]) {
            int found = -1, count = 0;
            for (int a = 0; a < G.size(p); ++a) {
                bool ok = true;
                for (std::size_t i = 0; i < support.size() && ok; ++i)
                    ok = G.restrict(support[i], p, a) == tuple[i];
                if (ok) {
                    found = a;
                    ++count;
                }
            }
            phi[p].push_back(count == 1 ? found : -1);
        }
    }
    return phi;
}

Transformation phi_by_recipe(const Presheaf& G, const ExtendedPresheaf& E, Mask X) {
    const FinitePoset& P = G.poset();
    Transformation phi(P.size());
    for (int p = 0; p < P.size(); ++p) {
        std::vector<int> support = members(X & P.down(p));
        Mask S = P.down_closure(X & P.down(p));
        for (const auto& tuple : E.elements[p]) {
            Family fam(P.size(), -1);
            for (int y : members(S))
                for (std::size_t i = 0; i < support.size(); ++i)
                    if (P.leq(y, support[i])) {
                        fam[y] = G.restrict(y, support[i], tuple[i]);
                        break;
                    }
            int value = -1;
            try {
                auto amal = amalgamations(G, p, S, fam);
                if (amal.size() == 1) value = amal[0];
            } catch (const Error&) {
                value = -1;
            }
            phi[p].push_back(value);
        }
    }
    return phi;
}

namespace {

// E(α) for α : F -> F' on X, acting on compatible functions pointwise.
Transformation extend_transformation(const ExtendedPresheaf& EF, const ExtendedPresheaf& EG,
                                     const Transformation& alpha, const FinitePoset& P, Mask X) {
    Subposet sub = induced(P, X);
    Transformation out(P.size());
    for (int p = 0; p < P.size(); ++p) {
        std::vector<int> support = members(X & P.down(p));
        std::map<std::vector<int>, int> lookup;
        for (std::size_t e = 0; e < EG.elements[p].size(); ++e) lookup.emplace(EG.elements[p][e], static_cast<int>(e));
        for (const auto& tuple : EF.elements[p]) {
            std::vector<int> image;
            for (std::size_t i = 0; i < support.size(); ++i) {
                int local = static_cast<int>(std::find(sub.embed.begin(), sub.embed.end(), support[i]) - sub.embed.begin());
                image.push_back(alpha[local][tuple[i]]);
            }
            out[p].push_back(lookup.at(image));
        }
    }
    return out;
}

Transformation restrict_transformation(const Transformation& beta, const Subposet& sub) {
    Transformation out;
    for (int g : sub.embed) out.push_back(beta[g]);
    return out;
}

bool compose_equal(const Transformation& first_then, const Transformation& then_second,
                   const Transformation& alt_first, const Transformation& alt_second) {
    for (std::size_t p = 0; p < first_then.size(); ++p)
        for (std::size_t a = 0; a < first_then[p].size(); ++a)
            if (then_second[p][first_then[p][a]] != alt_second[p][alt_first[p][a]]) return false;
    return true;
}

} // namespace

ComparisonReport comparison_check(const Topology& J, Mask X, const std::vector<Presheaf>& on_X,
                                  const std::vector<Presheaf>& on_P, bool morphisms) {
    const FinitePoset& P = J.poset();
    RestrictedTopology bar = restrict_topology(J, X);
    ComparisonReport report;
    auto failure = [&](const std::string& what, std::size_t idx) {
        report.failures.push_back(what + " (sample #" + std::to_string(idx) + ")");
    };

    struct XCase {
        const Presheaf* F;
        ExtendedPresheaf E;
        Transformation psi;
    };
    std::vector<XCase> xcases;
    for (std::size_t i = 0; i < on_X.size(); ++i) {
        const Presheaf& F = on_X[i];
        require_poset(F.poset(), bar.sub.poset, "presheaf is not defined on the induced subposet");
        if (!is_sheaf(F, bar.topology).ok) {
            ++report.presheaves_skipped;
            continue;
        }
        ++report.presheaves_checked;
        ExtendedPresheaf E = extend_presheaf(F, P, X);
        if (functoriality_violation(E.presheaf)) failure("E(F) is not a presheaf", i);
        if (!is_sheaf(E.presheaf, J).ok) failure("E(F) is not a sheaf", i);
        Transformation psi = psi_component(E, P, X);
        Presheaf IE = restrict_presheaf(E.presheaf, X);
        if (!is_natural(IE, F, psi)) failure("psi is not natural", i);
        else if (!is_bijective(psi, IE, F)) failure("psi is not bijective", i);
        xcases.push_back({&F, std::move(E), std::move(psi)});
    }

    struct PCase {
        const Presheaf* G;
        Presheaf IG;
        ExtendedPresheaf E;
        Transformation phi;
    };
    std::vector<PCase> pcases;
    for (std::size_t i = 0; i < on_P.size(); ++i) {
        const Presheaf& G = on_P[i];
        require_poset(G.poset(), P, "presheaf is not defined on the poset of the topology");
        if (!is_sheaf(G, J).ok) {
            ++report.sheaves_skipped;
            continue;
        }
        ++report.sheaves_checked;
        Presheaf IG = restrict_presheaf(G, X);
        if (!is_sheaf(IG, bar.topology).ok) failure("I*(G) is not a sheaf", i);
        ExtendedPresheaf E = extend_presheaf(IG, P, X);
        Transformation search = phi_by_search(G, E, X);
        Transformation recipe = phi_by_recipe(G, E, X);
        if (search != recipe) failure("phi recipe disagrees with direct search", i);
        if (!is_natural(E.presheaf, G, search)) failure("phi is not natural", i);
        else if (!is_bijective(search, E.presheaf, G)) failure("phi is not bijective", i);
        pcases.push_back({&G, std::move(IG), std::move(E), std::move(search)});
    }

    if (morphisms) {
        Subposet sub = induced(P, X);
        for (const auto& a : xcases)
            for (const auto& b : xcases)
                for (const auto& alpha : natural_transformations(*a.F, *b.F)) {
                    ++report.morphisms_checked;
                    Transformation Ealpha = extend_transformation(a.E, b.E, alpha, P, X);
                    Transformation IEalpha = restrict_transformation(Ealpha, sub);
                    // ψ_b ∘ I*E(α) = α ∘ ψ_a
                    if (!compose_equal(IEalpha, b.psi, a.psi, alpha)) failure("psi is not natural in F", 0);
                }
        for (const auto& a : pcases)
            for (const auto& b : pcases)
                for (const auto& beta : natural_transformations(*a.G, *b.G)) {
                    ++report.morphisms_checked;
                    Transformation Ibeta = restrict_transformation(beta, sub);
                    Transformation EIbeta = extend_transformation(a.E, b.E, Ibeta, P, X);
                    // φ_b ∘ E(I*β) = β ∘ φ_a
                    if (!compose_equal(EIbeta, b.phi, a.phi, beta)) failure("phi is not natural in G", 0);
                }
    }
    return report;
}

int base_point(const FinitePoset& P, Mask X) {
    Mask outside = P.all() & ~P.up_closure(X);
    if (outside == 0) fail("BasePointError", "the up-closure of X is the whole poset; no base point exists");
    return members(outside).front();
}

Presheaf extend_to_zero(const Presheaf& F, Mask X) {
    const FinitePoset& P = F.poset();
    if (!P.is_downward_directed())
        fail("NotDownwardsDirectedError", "poset is not downwards directed");
    const int p0 = base_point(P, X);
    const int n = P.size();
    FinitePoset P0 = adjoin_zero(P);
    std::vector<int> sizes = F.sizes();
    sizes.push_back(F.size(p0));
    std::map<std::pair<int, int>, std::vector<int>> maps;
    for (const auto& [key, table] : F.maps())
        if (key.first != key.second) maps[key] = table;
    for (int p = 0; p < n; ++p) {
        std::optional<std::vector<int>> chosen;
        for (int r : members(P.down(p) & P.down(p0))) {
            const auto& to_base = F.restriction(r, p0);
            std::vector<int> inverse(F.size(r), -1);
            if (F.size(r) != F.size(p0))
                fail("NotASheafError", "restriction to a point below the base point is not bijective",
                     {{"r", P.label(r)}, {"p0", P.label(p0)}});
            for (int a = 0; a < F.size(p0); ++a) {
                if (inverse[to_base[a]] != -1)
                    fail("NotASheafError", "restriction to a point below the base point is not bijective",
                         {{"r", P.label(r)}, {"p0", P.label(p0)}});
                inverse[to_base[a]] = a;
            }
            std::vector<int> table(F.size(p));
            for (int a = 0; a < F.size(p); ++a) table[a] = inverse[F.restrict(r, p, a)];
            if (chosen && *chosen != table)
                fail("WellDefinednessError", "restriction to the new bottom depends on the chosen r",
                     {{"p", P.label(p)}, {"r", P.label(r)}});
            chosen = table;
        }
        maps[{n, p}] = *chosen;
    }
    return Presheaf(P0, sizes, maps);
}

Transformation beta_component(const Presheaf& F, int p0) {
    const int n = F.poset().size() - 1;
    Transformation beta(n + 1);
    for (int p = 0; p < n; ++p) beta[p] = identity_table(F.size(p));
    beta[n] = F.restriction(n, p0);
    return beta;
}

std::vector<int> canonical_form(const Presheaf& F) {
    const int n = F.poset().size();
    long total = 1;
    for (int p = 0; p < n; ++p) {
        for (int i = 2; i <= F.size(p); ++i) total *= i;
        if (total > 1000000) fail("TooLargeError", "too many relabelings for a canonical form");
    }
    std::vector<std::vector<int>> perm(n);
    for (int p = 0; p < n; ++p) perm[p] = identity_table(F.size(p));
    std::vector<int> best;
    while (true) {
        std::vector<int> code = F.sizes();
        for (const auto& [key, table] : F.maps()) {
            auto [q, p] = key;
            if (q == p) continue;
            std::vector<int> relabeled(table.size());
            for (std::size_t a = 0; a < table.size(); ++a) relabeled[perm[p][a]] = perm[q][table[a]];
            code.insert(code.end(), relabeled.begin(), relabeled.end());
        }
        if (best.empty() || code < best) best = code;
        int p = 0;
        for (; p < n; ++p)
            if (std::next_permutation(perm[p].begin(), perm[p].end())) break;
        if (p == n) break;
    }
    return best;
}

KxReport kx_sheaf_equivalence_check(const FramePtr& frame, Mask X, int k) {
    const FinitePoset& P = frame->poset();
    const int n = P.size();
    Topology K = derived_topology(frame, X);
    KxReport report;
    PresheafCaps caps{n + 1, k};

    std::set<std::vector<int>> classes;
    for (const Presheaf& F : enumerate_presheaves(P, k, caps))
        if (is_sheaf(F, K).ok) {
            ++report.sheaves;
            classes.insert(canonical_form(F));
        }
    report.sheaf_classes = static_cast<long>(classes.size());

    auto count_y_classes = [&](const FinitePoset& Q, Mask Y, Mask keep) {
        std::set<std::vector<int>> ys;
        for (const Presheaf& H : enumerate_presheaves(induced(Q, Y).poset, k, caps)) {
            ExtendedPresheaf E = extend_presheaf(H, Q, Y);
            bool small = true;
            for (int p : members(keep)) small = small && E.presheaf.size(p) <= k;
            if (small) ys.insert(canonical_form(H));
        }
        return static_cast<long>(ys.size());
    };

    report.up_closure_is_everything = P.up_closure(X) == P.all();
    if (report.up_closure_is_everything) {
        report.Y = X;
        if (!(K == subset_topology(frame, X))) report.failures.push_back("K_X differs from J_X although the up-closure of X is P");
        report.comparison = comparison_check(K, X, enumerate_presheaves(induced(P, X).poset, k, caps),
                                             enumerate_presheaves(P, k, caps));
        report.y_classes = count_y_classes(P, X, P.all());
    } else {
        const int p0 = base_point(P, X);
        report.base_point = p0;
        FramePtr frame0 = make_frame(adjoin_zero(P));
        const FinitePoset& P0 = frame0->poset();
        Topology K0 = derived_topology(frame0, X);
        report.Y = X | bit(n);
        if (!(K0 == subset_topology(frame0, report.Y))) report.failures.push_back("K_X on P_0 differs from J_{X_0}");

        for (const Presheaf& F : enumerate_presheaves(P, k, caps)) {
            if (!is_sheaf(F, K).ok) continue;
            Presheaf Fbar = extend_to_zero(F, X);
            if (functoriality_violation(Fbar)) report.failures.push_back("E_0(F) is not a presheaf");
            else if (!is_sheaf(Fbar, K0).ok) report.failures.push_back("E_0(F) is not a sheaf on P_0");
            if (!(restrict_presheaf(Fbar, P.all()) == F)) report.failures.push_back("I_0*(E_0(F)) differs from F");
        }
        for (const Presheaf& G : enumerate_presheaves(P0, k, caps)) {
            if (!is_sheaf(G, K0).ok) continue;
            Presheaf IG = restrict_presheaf(G, P.all());
            if (!is_sheaf(IG, K).ok) {
                report.failures.push_back("I_0*(G) is not a sheaf");
                continue;
            }
            Presheaf Gbar = extend_to_zero(IG, X);
            Transformation beta = beta_component(G, p0);
            if (!is_natural(Gbar, G, beta) || !is_bijective(beta, Gbar, G))
                report.failures.push_back("beta is not a natural bijection");
        }
        report.comparison = comparison_check(K0, report.Y, enumerate_presheaves(induced(P0, report.Y).poset, k, caps),
                                             enumerate_presheaves(P0, k, caps));
        report.y_classes = count_y_classes(P0, report.Y, P.all());
    }
    if (report.sheaf_classes != report.y_classes)
        report.failures.push_back("sheaf classes (" + std::to_string(report.sheaf_classes) +
                                  ") differ from presheaf classes on Y (" + std::to_string(report.y_classes) + ")");
    return report;
}

json presheaf_to_json(const Presheaf& F) {
    const FinitePoset& P = F.poset();
    json values = json::object();
    for (int p = 0; p < P.size(); ++p) values[P.label(p)] = F.size(p);
    json maps = json::object();
    for (const auto& [key, table] : F.maps())
        if (key.first != key.second) maps[P.label(key.first) + "<=" + P.label(key.second)] = table;
    return {{"values", values}, {"maps", maps}};
}

Presheaf presheaf_from_json(const FinitePoset& P, const json& j) {
    if (!j.is_object() || !j.contains("values") || !j["values"].is_object())
        fail("ParseError", "presheaf must be an object with a \"values\" object");
    std::vector<int> sizes(P.size(), -1);
    for (const auto& [name, value] : j["values"].items()) {
        int p = P.index_of(name);
        if (p < 0) fail("ParseError", "unknown element in presheaf values: " + name);
        if (!value.is_number_integer() || value.get<int>() < 0)
            fail("ParseError", "presheaf value sizes must be non-negative integers");
        sizes[p] = value.get<int>();
    }
    for (int p = 0; p < P.size(); ++p)
        if (sizes[p] < 0) fail("ParseError", "presheaf has no value for " + P.label(p));
    std::map<std::pair<int, int>, std::vector<int>> maps;
    if (j.contains("maps")) {
        if (!j["maps"].is_object()) fail("ParseError", "presheaf maps must be an object");
        for (const auto& [key, table] : j["maps"].items()) {
            auto sep = key.find("<=");
            if (sep == std::string::npos) fail("ParseError", "map keys must look like q<=p: " + key);
            int q = P.index_of(key.substr(0, sep));
            int p = P.index_of(key.substr(sep + 2));
            if (q < 0 || p < 0) fail("ParseError", "unknown element in map key: " + key);
            if (!table.is_array()) fail("ParseError", "map tables must be arrays");
            std::vector<int> values;
            for (const auto& v : table) {
                if (!v.is_number_integer()) fail("ParseError", "map tables must hold integers");
                values.push_back(v.get<int>());
            }
            if (q == p) {
                if (values != identity_table(sizes[p]))
                    fail("FunctorialityError", "identity restriction is not the identity", {{"p", P.label(p)}});
                continue;
            }
            maps[{q, p}] = std::move(values);
        }
    }
    Presheaf F = presheaf_from_partial(P, sizes, maps);
    validate_presheaf(F);
    return F;
}

} // namespace sitecalc

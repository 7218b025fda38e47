#include "sitecalc/poset.hpp"

#include <algorithm>
#include <bit>
#include <sstream>

#include "sitecalc/error.hpp"

namespace sitecalc {

int popcount(Mask m) { return std::popcount(m); }

std::vector<int> members(Mask m) {
    std::vector<int> out;
    while (m) {
        out.push_back(std::countr_zero(m));
        m &= m - 1;
    }
    return out;
}

FinitePoset FinitePoset::from_relation(std::vector<std::string> labels,
                                       const std::vector<std::pair<int, int>>& pairs) {
    const int n = static_cast<int>(labels.size());
    if (n > kMaxElements)
        fail("TooLargeError", "posets are limited to 64 elements", {{"n", n}});

    FinitePoset P;
    P.labels_ = std::move(labels);
    P.down_.assign(n, 0);
    for (int p = 0; p < n; ++p) P.down_[p] = bit(p);
    for (auto [a, b] : pairs) {
        if (a < 0 || b < 0 || a >= n || b >= n)
            fail("ParseError", "relation pair out of range", {{"pair", {a, b}}});
        P.down_[b] |= bit(a);
    }
    // Warshall on bit rows: if k <= p then everything below k is below p.
    for (int k = 0; k < n; ++k)
        for (int p = 0; p < n; ++p)
            if (has(P.down_[p], k)) P.down_[p] |= P.down_[k];

    for (int a = 0; a < n; ++a)
        for (int b = a + 1; b < n; ++b)
            if (has(P.down_[b], a) && has(P.down_[a], b))
                fail("CycleError", "order relation is not antisymmetric: " + P.labels_[a] +
                                       " <= " + P.labels_[b] + " <= " + P.labels_[a],
                     {{"elements", {P.labels_[a], P.labels_[b]}}});

    P.up_.assign(n, 0);
    for (int p = 0; p < n; ++p)
        for (int q : members(P.down_[p])) P.up_[q] |= bit(p);
    return P;
}

Mask FinitePoset::down_closure(Mask s) const {
    Mask out = 0;
    for (int p : members(s)) out |= down_[p];
    return out;
}

Mask FinitePoset::up_closure(Mask s) const {
    Mask out = 0;
    for (int p : members(s)) out |= up_[p];
    return out;
}

int FinitePoset::index_of(const std::string& name) const {
    auto it = std::find(labels_.begin(), labels_.end(), name);
    return it == labels_.end() ? -1 : static_cast<int>(it - labels_.begin());
}

Mask FinitePoset::minimal(Mask s) const {
    Mask out = 0;
    for (int p : members(s))
        if ((down_[p] & s) == bit(p)) out |= bit(p);
    return out;
}

Mask FinitePoset::maximal(Mask s) const {
    Mask out = 0;
    for (int p : members(s))
        if ((up_[p] & s) == bit(p)) out |= bit(p);
    return out;
}

std::vector<std::pair<int, int>> FinitePoset::covers() const {
    std::vector<std::pair<int, int>> out;
    for (int p = 0; p < size(); ++p) {
        Mask below = down_[p] & ~bit(p);
        for (int q : members(maximal(below))) out.emplace_back(q, p);
    }
    std::sort(out.begin(), out.end());
    return out;
}

bool FinitePoset::is_downward_directed(Mask s) const {
    for (int a : members(s))
        for (int b : members(s))
            if ((down_[a] & down_[b] & s) == 0) return false;
    return true;
}

int FinitePoset::least() const {
    for (int p = 0; p < size(); ++p)
        if (up_[p] == all()) return p;
    return -1;
}

bool FinitePoset::is_chain() const {
    for (int a = 0; a < size(); ++a)
        for (int b = 0; b < size(); ++b)
            if (!leq(a, b) && !leq(b, a)) return false;
    return true;
}

std::vector<int> FinitePoset::linear_extension() const {
    std::vector<int> order(size());
    for (int p = 0; p < size(); ++p) order[p] = p;
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
        return popcount(down_[a]) < popcount(down_[b]);
    });
    return order;
}

Mask Subposet::lift(Mask local) const {
    Mask out = 0;
    for (int i : members(local)) out |= bit(embed[i]);
    return out;
}

Mask Subposet::lower(Mask global) const {
    Mask out = 0;
    for (int i = 0; i < static_cast<int>(embed.size()); ++i)
        if (has(global, embed[i])) out |= bit(i);
    return out;
}

Subposet induced(const FinitePoset& P, Mask X) {
    Subposet sub;
    sub.support = X & P.all();
    sub.embed = members(sub.support);
    std::vector<std::string> labels;
    std::vector<std::pair<int, int>> pairs;
    for (int i = 0; i < static_cast<int>(sub.embed.size()); ++i) {
        labels.push_back(P.label(sub.embed[i]));
        for (int j = 0; j < static_cast<int>(sub.embed.size()); ++j)
            if (P.leq(sub.embed[i], sub.embed[j])) pairs.emplace_back(i, j);
    }
    sub.poset = FinitePoset::from_relation(std::move(labels), pairs);
    return sub;
}

FinitePoset adjoin_zero(const FinitePoset& P) {
    std::vector<std::string> labels = P.labels();
    std::string zero = "0";
    while (P.index_of(zero) >= 0) zero += "'";
    labels.push_back(zero);
    const int n = P.size();
    std::vector<std::pair<int, int>> pairs;
    for (int p = 0; p < n; ++p) {
        pairs.emplace_back(n, p);
        for (int q : members(P.down(p))) pairs.emplace_back(q, p);
    }
    return FinitePoset::from_relation(std::move(labels), pairs);
}

Mask OrderMorphism::image(Mask s) const {
    Mask out = 0;
    for (int p : members(s)) out |= bit(map[p]);
    return out;
}

bool OrderMorphism::is_monotone() const {
    for (int a = 0; a < source.size(); ++a)
        for (int b : members(source.up(a)))
            if (!target.leq(map[a], map[b])) return false;
    return true;
}

bool OrderMorphism::is_order_isomorphism() const {
    if (source.size() != target.size() || image(source.all()) != target.all()) return false;
    for (int a = 0; a < source.size(); ++a)
        for (int b = 0; b < source.size(); ++b)
            if (source.leq(a, b) != target.leq(map[a], map[b])) return false;
    return true;
}

void require_order_morphism(const OrderMorphism& f) {
    if (static_cast<int>(f.map.size()) != f.source.size())
        fail("NotOrderMorphismError", "map size does not match the source poset");
    for (int v : f.map)
        if (v < 0 || v >= f.target.size())
            fail("NotOrderMorphismError", "map value outside the target poset", {{"value", v}});
    for (int a = 0; a < f.source.size(); ++a)
        for (int b : members(f.source.up(a)))
            if (!f.target.leq(f.map[a], f.map[b]))
                fail("NotOrderMorphismError", "map is not monotone",
                     {{"le", {f.source.label(a), f.source.label(b)}}});
}

std::vector<OrderMorphism> all_order_morphisms(const FinitePoset& P, const FinitePoset& Q) {
    std::vector<OrderMorphism> out;
    const int n = P.size();
    const int m = Q.size();
    if (m == 0 && n > 0) return out;
    std::vector<int> map(n, 0);
    // Odometer over Q^n; monotonicity checked against already-fixed lower digits.
    auto consistent = [&](int upto) {
        for (int a = 0; a <= upto; ++a)
            for (int b = 0; b <= upto; ++b)
                if (P.leq(a, b) && !Q.leq(map[a], map[b])) return false;
        return true;
    };
    int pos = 0;
    if (n == 0) {
        out.push_back({P, Q, {}});
        return out;
    }
    map[0] = -1;
    while (pos >= 0) {
        if (++map[pos] >= m) {
            --pos;
            continue;
        }
        if (!consistent(pos)) continue;
        if (pos + 1 == n) {
            out.push_back({P, Q, map});
        } else {
            ++pos;
            map[pos] = -1;
        }
    }
    return out;
}

namespace {

std::string quoted(const std::string& s) {
    std::string out = "\"";
    for (char c : s) {
        if (c == '"' || c == '\\') out += '\\';
        out += c;
    }
    return out + "\"";
}

} // namespace

std::string export_dot(const FinitePoset& P) {
    std::ostringstream os;
    os << "digraph P {\n";
    for (int p = 0; p < P.size(); ++p) os << "  " << quoted(P.label(p)) << ";\n";
    for (auto [q, p] : P.covers())
        os << "  " << quoted(P.label(q)) << " -> " << quoted(P.label(p)) << ";\n";
    os << "}\n";
    return os.str();
}

} // namespace sitecalc

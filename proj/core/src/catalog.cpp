#include "sitecalc/catalog.hpp"

#include "sitecalc/error.hpp"

namespace sitecalc {

namespace {

std::vector<std::string> numbered(int n) {
    std::vector<std::string> out;
    for (int i = 0; i < n; ++i) out.push_back(std::to_string(i));
    return out;
}

} // namespace

FinitePoset chain(int n) {
    std::vector<std::pair<int, int>> pairs;
    for (int i = 0; i + 1 < n; ++i) pairs.emplace_back(i, i + 1);
    return FinitePoset::from_relation(numbered(n), pairs);
}

FinitePoset antichain(int n) { return FinitePoset::from_relation(numbered(n), {}); }

const std::vector<CatalogEntry>& catalog() {
    static const std::vector<CatalogEntry> entries = [] {
        std::vector<CatalogEntry> out;
        out.push_back({"point", FinitePoset::from_relation({"a"}, {})});
        out.push_back({"chain2", chain(2)});
        out.push_back({"chain3", chain(3)});
        out.push_back({"chain4", chain(4)});
        out.push_back({"antichain2", antichain(2)});
        out.push_back({"antichain3", antichain(3)});
        // y <= x, z <= x
        out.push_back({"V", FinitePoset::from_relation({"x", "y", "z"}, {{1, 0}, {2, 0}})});
        // x <= y, x <= z
        out.push_back({"Λ", FinitePoset::from_relation({"x", "y", "z"}, {{0, 1}, {0, 2}})});
        out.push_back({"diamond", FinitePoset::from_relation({"0", "a", "b", "1"}, {{0, 1}, {0, 2}, {1, 3}, {2, 3}})});
        return out;
    }();
    return entries;
}

const FinitePoset& catalog_poset(const std::string& name) {
    std::string key = name;
    if (key == "Lambda" || key == "P_xyz") key = "Λ";
    if (key == "P3") key = "V";
    for (const auto& e : catalog())
        if (e.name == key) return e.poset;
    fail("UnknownPosetError", "no catalog poset named " + name, {{"name", name}});
}

} // namespace sitecalc

#pragma once

#include <string>
#include <vector>

#include "sitecalc/poset.hpp"

namespace sitecalc {

struct CatalogEntry {
    std::string name;
    FinitePoset poset;
};

// point, chain2..chain4, antichain2, antichain3, V, Λ, diamond.
const std::vector<CatalogEntry>& catalog();
// Also accepts the aliases "Lambda", "P3" (= V) and "P_xyz" (= Λ); throws UnknownPosetError.
const FinitePoset& catalog_poset(const std::string& name);

FinitePoset chain(int n);
FinitePoset antichain(int n);

} // namespace sitecalc

#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "sitecalc/error.hpp"
#include "sitecalc/topology.hpp"

namespace sitecalc {

// F(p) = {0..sizes[p]-1}; restriction(q, p) is the image table of F(q <= p).
class Presheaf {
public:
    Presheaf() = default;
    // maps holds F(q<=p) for q < p; identities are filled in.
    Presheaf(FinitePoset P, std::vector<int> sizes, std::map<std::pair<int, int>, std::vector<int>> maps);

    const FinitePoset& poset() const { return poset_; }
    int size(int p) const { return sizes_[p]; }
    const std::vector<int>& sizes() const { return sizes_; }
    const std::vector<int>& restriction(int q, int p) const;
    int restrict(int q, int p, int a) const { return restriction(q, p)[a]; }
    const std::map<std::pair<int, int>, std::vector<int>>& maps() const { return maps_; }

    bool operator==(const Presheaf& o) const {
        return poset_ == o.poset_ && sizes_ == o.sizes_ && maps_ == o.maps_;
    }

private:
    FinitePoset poset_;
    std::vector<int> sizes_;
    std::map<std::pair<int, int>, std::vector<int>> maps_; // includes (p, p)
};

// Builds F from maps on the cover pairs (and optionally more), composing the rest.
// Throws ParseError when a needed cover map is missing.
Presheaf presheaf_from_partial(FinitePoset P, std::vector<int> sizes,
                               std::map<std::pair<int, int>, std::vector<int>> maps);

std::optional<json> functoriality_violation(const Presheaf& F);
// Throws FunctorialityError {r, q, p} or RestrictionError.
void validate_presheaf(const Presheaf& F);

// A family is indexed by element; entries outside the sieve are -1.
using Family = std::vector<int>;

// All matching families over the down-set S, in lexicographic order.
std::vector<Family> matching_families(const Presheaf& F, Mask S);
// Throws NotMatchingError.
std::vector<int> amalgamations(const Presheaf& F, int p, Mask S, const Family& family);

struct SheafCheck {
    bool ok = true;
    json witness; // p, sieve, family, amalgamation count
};

SheafCheck is_sheaf(const Presheaf& F, const Topology& J);

// I*: the presheaf reindexed along the inclusion of X.
Presheaf restrict_presheaf(const Presheaf& F, Mask X);

struct ExtendedPresheaf {
    Presheaf presheaf;
    // elements[p][e]: compatible function on X ∩ ↓p, listed in the order of members(X ∩ ↓p)
    std::vector<std::vector<std::vector<int>>> elements;
};

// E: F on the subposet X of P to the presheaf of compatible functions on X ∩ ↓p.
ExtendedPresheaf extend_presheaf(const Presheaf& F, const FinitePoset& P, Mask X);

Presheaf yoneda_presheaf(const FinitePoset& P, int p);

struct PresheafCaps {
    int max_elements = 3;
    int max_value = 2;
};

// Every functor with value sets {0..m-1}, m <= k; throws TooLargeError.
std::vector<Presheaf> enumerate_presheaves(const FinitePoset& P, int k, PresheafCaps caps = {});

// Components per element; each component is a table F(p) -> G(p).
using Transformation = std::vector<std::vector<int>>;

std::vector<Transformation> natural_transformations(const Presheaf& F, const Presheaf& G);
bool is_natural(const Presheaf& F, const Presheaf& G, const Transformation& alpha);
bool is_bijective(const Transformation& alpha, const Presheaf& F, const Presheaf& G);

// ψ_F : I*(E(F)) -> F, f ↦ f(x)
Transformation psi_component(const ExtendedPresheaf& E, const FinitePoset& P, Mask X);
// φ_G : E(I*(G)) -> G by direct search; -1 where no unique amalgamation exists.
Transformation phi_by_search(const Presheaf& G, const ExtendedPresheaf& E, Mask X);
// φ_G by extending each family to ↓(X ∩ ↓p) and amalgamating there.
Transformation phi_by_recipe(const Presheaf& G, const ExtendedPresheaf& E, Mask X);

struct ComparisonReport {
    long presheaves_checked = 0;
    long presheaves_skipped = 0; // not sheaves for the restricted topology
    long sheaves_checked = 0;
    long sheaves_skipped = 0;    // not sheaves for J
    long morphisms_checked = 0;
    std::vector<std::string> failures;
    bool ok() const { return failures.empty(); }
};

// J must contain J_X (throws NotDenseError). on_X are presheaves on the subposet X,
// on_P are presheaves on P. With morphisms set, naturality in F and G is checked
// over all natural transformations between sample members.
ComparisonReport comparison_check(const Topology& J, Mask X, const std::vector<Presheaf>& on_X,
                                  const std::vector<Presheaf>& on_P, bool morphisms = false);

// Smallest-index element outside ↑X; throws BasePointError if ↑X = P.
int base_point(const FinitePoset& P, Mask X);
// E_0 on a presheaf over the directed poset P; the new bottom has index |P|.
// Every choice of r is compared; throws NotASheafError if a needed map is not bijective.
Presheaf extend_to_zero(const Presheaf& F, Mask X);
// β_F : E_0(I_0*(F)) -> F for F on P_0
Transformation beta_component(const Presheaf& F, int p0);

// Canonical representative under relabeling of each value set.
std::vector<int> canonical_form(const Presheaf& F);

struct KxReport {
    bool up_closure_is_everything = false;
    int base_point = -1;
    Mask Y = 0;               // generating subset on P or on P_0
    long sheaves = 0;         // K_X-sheaves on P with values <= k
    long sheaf_classes = 0;
    long y_classes = 0;       // classes of presheaves on Y whose sheaf has values <= k
    ComparisonReport comparison;
    std::vector<std::string> failures;
    bool ok() const { return failures.empty() && comparison.ok(); }
};

// Throws NotDownwardsDirectedError.
KxReport kx_sheaf_equivalence_check(const FramePtr& frame, Mask X, int k);

json presheaf_to_json(const Presheaf& F);
Presheaf presheaf_from_json(const FinitePoset& P, const json& j);

} // namespace sitecalc

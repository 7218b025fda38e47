#pragma once

#include <string>
#include <vector>

#include "sitecalc/error.hpp"
#include "sitecalc/frame.hpp"

namespace sitecalc {

// Per element p, the sorted ids of the sieves on p that cover p.
using CoverFamily = std::vector<std::vector<int>>;

class Topology {
public:
    // Stores the families as given (sorted); use validate_topology for checked input.
    Topology(FramePtr frame, CoverFamily covers);

    const FramePtr& frame_ptr() const { return frame_; }
    const DownSetFrame& frame() const { return *frame_; }
    const FinitePoset& poset() const { return frame_->poset(); }
    int size() const { return poset().size(); }

    const std::vector<int>& covers(int p) const { return covers_[p]; }
    const CoverFamily& families() const { return covers_; }
    bool is_cover(int p, Mask S) const;
    bool is_cover_id(int p, int id) const;
    // Intersection of all covers of p.
    Mask minimum_cover(int p) const;

    bool operator==(const Topology& other) const {
        return frame_->poset() == other.frame_->poset() && covers_ == other.covers_;
    }
    bool operator<(const Topology& other) const { return covers_ < other.covers_; }

private:
    FramePtr frame_;
    CoverFamily covers_;
};

struct AxiomViolation {
    std::string axiom; // "sieve", "maximality", "stability" or "transitivity"
    int p = -1;
    Mask sieve = 0;
    int q = -1;      // stability: the element below p
    Mask other = 0;  // stability: S ∩ ↓q; transitivity: the covering sieve S
    json to_json(const FinitePoset& P) const;
};

// All violations in a fixed order: sieve, maximality, stability, transitivity,
// each by increasing p, then sieve id, then q.
std::vector<AxiomViolation> axiom_violations(const DownSetFrame& frame, const CoverFamily& covers,
                                             bool first_only = false);
// Throws AxiomViolation carrying the first violation and the full list.
Topology validate_topology(const FramePtr& frame, CoverFamily covers);
CoverFamily covers_from_masks(const DownSetFrame& frame, const std::vector<std::vector<Mask>>& sieves);
json mask_to_json(const FinitePoset& P, Mask m);

Topology subset_topology(const FramePtr& frame, Mask X);
Mask generating_subset(const Topology& J);
Topology indiscrete_topology(const FramePtr& frame);
Topology discrete_topology(const FramePtr& frame);
// Throws NotDownwardsDirectedError.
Topology atomic_topology(const FramePtr& frame);
Topology dense_topology(const FramePtr& frame);
// K_X = J_X \ {∅}; throws NotDownwardsDirectedError.
Topology derived_topology(const FramePtr& frame, Mask X);

struct RestrictedTopology {
    Subposet sub;
    Topology topology;
};

// Topology on the subposet X; throws NotDenseError unless ↓(X ∩ ↓p) ∈ J(p) for all p.
RestrictedTopology restrict_topology(const Topology& J, Mask X);
// Both defining forms of the restriction, without the density precondition.
CoverFamily restriction_by_intersection(const Topology& J, const Subposet& sub, const DownSetFrame& local);
CoverFamily restriction_by_closure(const Topology& J, const Subposet& sub, const DownSetFrame& local);
// J_K on P for a topology K on the subposet X; throws InvalidInnerTopologyError.
Topology extend_topology(const FramePtr& frame, Mask X, const Topology& K);
Topology lx_topology(const FramePtr& frame, Mask X);
// Extension of K_Y on the directed subposet X; throws NotDownwardsDirectedError.
Topology lxy_topology(const FramePtr& frame, Mask X, Mask Y);

// Throws PosetMismatchError.
Topology meet(const Topology& J, const Topology& K);
Topology join(const Topology& J, const Topology& K);
bool leq(const Topology& J, const Topology& K);
bool is_complete(const Topology& J);

constexpr int kDefaultBruteForceCap = 4;

// Exhaustive search over per-element filters of sieves; sorted, duplicate free.
// Throws TooLargeForBruteForceError.
std::vector<Topology> enumerate_all_topologies(const FramePtr& frame, int cap = kDefaultBruteForceCap);

struct SiteMorphismReport {
    bool preserves_covers = true;
    bool has_clp = true;
    json preserve_witnesses = json::array(); // (p, S) with ↓φ[S] ∉ K(φ(p))
    json clp_witnesses = json::array();      // (p, S) with S ∈ K(φ(p)) not lifted
};

// φ : (P, J) -> (Q, K)
SiteMorphismReport site_morphism_report(const OrderMorphism& phi, const Topology& J, const Topology& K);
bool preserves_covers(const OrderMorphism& phi, const Topology& J, const Topology& K);
bool has_clp(const OrderMorphism& phi, const Topology& J, const Topology& K);
// Throws NotOrderIsomorphismError.
bool is_site_isomorphism(const OrderMorphism& phi, const Topology& J, const Topology& K);

struct RepresentableWitness {
    int p = -1;
    int q = -1;
    Mask sieve = 0;
};

// y(p) is a sheaf iff no q ≰ p has a cover inside ↓p.
bool representable_is_sheaf(const Topology& J, int p, RepresentableWitness* witness = nullptr);
bool is_subcanonical(const Topology& J, RepresentableWitness* witness = nullptr);
// X → ↓p = ↓p for all p
bool heyting_subcanonical(const FinitePoset& P, Mask X, int* failing_p = nullptr);

struct CanonicalSearch {
    std::vector<Mask> minimal_subsets;
    bool unique = false;
};

// Minimal X with X → ↓p = ↓p for all p; J_X for such X is the largest subcanonical subset topology.
CanonicalSearch canonical_topology_search(const FinitePoset& P);

} // namespace sitecalc

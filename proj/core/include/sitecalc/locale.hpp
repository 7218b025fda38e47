#pragma once

#include <optional>
#include <string>
#include <vector>

#include "sitecalc/frame.hpp"
#include "sitecalc/topology.hpp"

namespace sitecalc {

// Endomap of D(P) as a table over down-set ids.
struct Nucleus {
    FramePtr frame;
    std::vector<int> table;

    Mask apply(Mask A) const { return frame->at(table[frame->id(A)]); }
    bool operator==(const Nucleus& o) const { return table == o.table; }
};

// Partition of D(P); class ids are numbered by first occurrence.
struct Congruence {
    FramePtr frame;
    std::vector<int> class_of;

    int class_count() const;
    std::vector<std::vector<int>> classes() const;
    bool related(int a, int b) const { return class_of[a] == class_of[b]; }
    bool operator==(const Congruence& o) const { return class_of == o.class_of; }
};

struct Sublocale {
    FramePtr frame;
    std::vector<int> members; // sorted ids

    bool contains(int id) const;
    bool operator==(const Sublocale& o) const { return members == o.members; }
};

// Relabels classes by first occurrence.
Congruence make_congruence(const FramePtr& frame, const std::vector<int>& labels);
Congruence congruence_from_classes(const FramePtr& frame, const std::vector<std::vector<int>>& classes);
Sublocale make_sublocale(const FramePtr& frame, std::vector<int> ids);

// Law checks: empty optional when the law holds, otherwise the first witness.
std::optional<json> nucleus_violation(const Nucleus& j);
std::optional<json> congruence_violation(const Congruence& theta);
std::vector<json> sublocale_violations(const Sublocale& M);

// Throw NotANucleusError / NotACongruenceError / NotASublocaleError.
void require_nucleus(const Nucleus& j);
void require_congruence(const Congruence& theta);
void require_sublocale(const Sublocale& M);

Nucleus nucleus_from_topology(const Topology& J);
Topology topology_from_nucleus(const Nucleus& j);
Congruence congruence_from_nucleus(const Nucleus& j);
Nucleus nucleus_from_congruence(const Congruence& theta);
Sublocale sublocale_from_nucleus(const Nucleus& j);
Nucleus nucleus_from_sublocale(const Sublocale& M);

// Direct forms between topologies and the other two presentations.
Congruence congruence_from_topology(const Topology& J);
Topology topology_from_congruence(const Congruence& theta);
Sublocale sublocale_from_topology(const Topology& J);
Topology topology_from_sublocale(const Sublocale& M);

bool nucleus_leq(const Nucleus& j, const Nucleus& k);
bool congruence_leq(const Congruence& a, const Congruence& b);
bool sublocale_leq(const Sublocale& a, const Sublocale& b);

// Arbitrary meets on a finite frame reduce to the empty meet and binary meets.
bool is_complete(const Nucleus& j);
bool is_complete(const Congruence& theta);

struct SubsetForms {
    Nucleus nucleus;
    Congruence congruence;
    Sublocale sublocale;
};

SubsetForms subset_forms(const FramePtr& frame, Mask X);
// j_X as the composite of A ↦ A∩X with its upper adjoint.
Nucleus subset_nucleus_via_adjoint(const FramePtr& frame, Mask X);
// Checks A ↦ A∩X, Y ↦ X→Y is a frame isomorphism M_X ≅ D(X); returns a failure description.
std::optional<std::string> check_subset_sublocale_iso(const FramePtr& frame, Mask X);

Nucleus double_negation_nucleus(const FramePtr& frame);

struct QuotientFrame {
    Congruence theta;
    std::vector<std::vector<int>> meet; // class x class -> class
    std::vector<std::vector<int>> join;
    int size() const { return static_cast<int>(meet.size()); }
};

// Throws NotACongruenceError if the operations are not well defined on classes.
QuotientFrame quotient_frame(const Congruence& theta);

struct Factorization {
    Congruence kernel;
    std::vector<int> k; // class id -> target id, with f = k ∘ q
};

// Throws NotAFrameMorphismError / NotSurjectiveError.
Factorization homomorphism_factorization(const FrameMap& f);

// {p : class(↓p) ≠ class(↓p \ {p})}
Mask extract_subset(const Congruence& theta);

struct DiagramCheck {
    std::string name;
    std::string variance; // label of the map relative to inclusion orders
    long passed = 0;
    long failed = 0;
};

struct DiagramReport {
    int topologies = 0;
    std::vector<DiagramCheck> checks;
    std::vector<std::string> failures;
    bool ok() const { return failures.empty(); }
    json to_json() const;
};

// Round trips, both composites, subset forms, completeness and variance for every topology given.
DiagramReport verify_commuting_diagram(const std::vector<Topology>& topologies);

json nucleus_to_json(const Nucleus& j);
json congruence_to_json(const Congruence& theta);
json sublocale_to_json(const Sublocale& M);
Nucleus nucleus_from_json(const FramePtr& frame, const json& j);
Congruence congruence_from_json(const FramePtr& frame, const json& j);
Sublocale sublocale_from_json(const FramePtr& frame, const json& j);

} // namespace sitecalc

#pragma once

#include <cstddef>
#include <memory>
#include <unordered_map>
#include <vector>

#include "sitecalc/poset.hpp"

namespace sitecalc {

constexpr std::size_t kDefaultFrameCap = std::size_t{1} << 20;

// D(P): all down-sets, ids ordered by the integer value of the mask.
class DownSetFrame {
public:
    explicit DownSetFrame(FinitePoset P, std::size_t cap = kDefaultFrameCap);

    const FinitePoset& poset() const { return poset_; }
    int size() const { return static_cast<int>(sets_.size()); }
    Mask at(int id) const { return sets_[id]; }
    const std::vector<Mask>& sets() const { return sets_; }
    bool contains(Mask m) const { return index_.count(m) != 0; }
    // Throws NotADownSetError if m is not down-closed.
    int id(Mask m) const;
    int bottom() const { return 0; }
    int top() const { return size() - 1; }
    // Ids of the down-sets of the principal ideal of p, i.e. the sieves on p.
    const std::vector<int>& sieves(int p) const { return sieves_[p]; }

private:
    FinitePoset poset_;
    std::vector<Mask> sets_;
    std::unordered_map<Mask, int> index_;
    std::vector<std::vector<int>> sieves_;
};

using FramePtr = std::shared_ptr<const DownSetFrame>;

FramePtr make_frame(FinitePoset P, std::size_t cap = kDefaultFrameCap);

// {p : ↓p ∩ X ⊆ Y}
Mask heyting_implication(const FinitePoset& P, Mask X, Mask Y);
Mask negation(const FinitePoset& P, Mask A);
Mask double_negation(const FinitePoset& P, Mask A);

// A frame map D(P) -> D(Q) given as a table of target ids indexed by source id.
struct FrameMap {
    FramePtr source;
    FramePtr target;
    std::vector<int> table;
};

// Throws NotAFrameMorphismError with a witness if f does not preserve
// finite meets and all joins.
void require_frame_morphism(const FrameMap& f);

// g(B) = ⋃{A : f(A) ⊆ B}; the adjunction is checked exhaustively.
FrameMap upper_adjoint(const FrameMap& f);

// The restriction A ↦ A ∩ X as a map D(P) -> D(X).
FrameMap restriction_map(const FramePtr& frame, Mask X);

Mask upper_bounds(const FinitePoset& P, Mask A);
Mask lower_bounds(const FinitePoset& P, Mask A);
// A^{ul}
Mask dm_closure(const FinitePoset& P, Mask A);
// Ids of the c-closed down-sets.
std::vector<int> dm_completion(const DownSetFrame& frame);

} // namespace sitecalc

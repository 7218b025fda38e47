#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace sitecalc {

// Subsets of a poset with at most 64 elements, bit i = element i.
using Mask = std::uint64_t;

constexpr int kMaxElements = 64;

inline Mask bit(int i) { return Mask{1} << i; }
inline bool has(Mask m, int i) { return (m >> i) & 1u; }
inline bool subset_of(Mask a, Mask b) { return (a & ~b) == 0; }
inline Mask full_mask(int n) { return n >= 64 ? ~Mask{0} : (Mask{1} << n) - 1; }
int popcount(Mask m);
std::vector<int> members(Mask m);

class FinitePoset {
public:
    FinitePoset() = default;

    // pairs (a,b) mean a <= b; the reflexive-transitive closure is taken.
    // Throws CycleError if the closure is not antisymmetric.
    static FinitePoset from_relation(std::vector<std::string> labels,
                                     const std::vector<std::pair<int, int>>& pairs);

    int size() const { return static_cast<int>(labels_.size()); }
    Mask all() const { return full_mask(size()); }
    bool leq(int a, int b) const { return has(down_[b], a); }
    bool lt(int a, int b) const { return a != b && leq(a, b); }
    Mask down(int p) const { return down_[p]; }
    Mask up(int p) const { return up_[p]; }
    Mask down_closure(Mask s) const;
    Mask up_closure(Mask s) const;
    bool is_downset(Mask s) const { return down_closure(s) == s; }
    bool is_upset(Mask s) const { return up_closure(s) == s; }

    const std::string& label(int p) const { return labels_[p]; }
    const std::vector<std::string>& labels() const { return labels_; }
    // -1 when absent
    int index_of(const std::string& name) const;

    Mask minimal(Mask s) const;
    Mask maximal(Mask s) const;
    // Cover pairs (q, p) with q < p and nothing strictly between.
    std::vector<std::pair<int, int>> covers() const;
    // Every pair of elements of s has a lower bound inside s.
    bool is_downward_directed(Mask s) const;
    bool is_downward_directed() const { return is_downward_directed(all()); }
    // -1 when there is no least element
    int least() const;
    bool is_chain() const;
    // Elements sorted so that q < p implies q precedes p.
    std::vector<int> linear_extension() const;

    bool operator==(const FinitePoset& other) const {
        return labels_ == other.labels_ && down_ == other.down_;
    }

private:
    std::vector<std::string> labels_;
    std::vector<Mask> down_;
    std::vector<Mask> up_;
};

// The subposet induced on a subset, with elements kept in index order.
struct Subposet {
    FinitePoset poset;
    std::vector<int> embed; // local index -> global index
    Mask support = 0;

    Mask lift(Mask local) const;
    Mask lower(Mask global) const;
};

Subposet induced(const FinitePoset& P, Mask X);

// P with a new least element appended at index |P|.
FinitePoset adjoin_zero(const FinitePoset& P);

struct OrderMorphism {
    FinitePoset source;
    FinitePoset target;
    std::vector<int> map;

    Mask image(Mask s) const;
    bool is_monotone() const;
    bool is_order_isomorphism() const;
};

// Throws NotOrderMorphismError with the offending pair.
void require_order_morphism(const OrderMorphism& f);

// All monotone maps P -> Q, in lexicographic order of the image vector.
std::vector<OrderMorphism> all_order_morphisms(const FinitePoset& P, const FinitePoset& Q);

std::string export_dot(const FinitePoset& P);

} // namespace sitecalc

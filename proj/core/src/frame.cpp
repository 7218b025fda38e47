#include "sitecalc/frame.hpp"

#include <algorithm>

#include "sitecalc/error.hpp"

namespace sitecalc {

namespace {

json mask_json(const FinitePoset& P, Mask m) {
    json out = json::array();
    for (int p : members(m)) out.push_back(P.label(p));
    return out;
}

} // namespace

DownSetFrame::DownSetFrame(FinitePoset P, std::size_t cap) : poset_(std::move(P)) {
    const std::vector<int> order = poset_.linear_extension();
    const int n = poset_.size();

    // Decide elements bottom-up: p may join only once all of ↓p \ {p} is in.
    std::vector<Mask> stack{0};
    std::vector<int> depth{0};
    while (!stack.empty()) {
        Mask cur = stack.back();
        int d = depth.back();
        stack.pop_back();
        depth.pop_back();
        if (d == n) {
            sets_.push_back(cur);
            if (sets_.size() > cap)
                fail("FrameTooLargeError", "down-set frame exceeds the configured cap",
                     {{"cap", cap}});
            continue;
        }
        int p = order[d];
        stack.push_back(cur);
        depth.push_back(d + 1);
        if (subset_of(poset_.down(p) & ~bit(p), cur)) {
            stack.push_back(cur | bit(p));
            depth.push_back(d + 1);
        }
    }
    std::sort(sets_.begin(), sets_.end());
    index_.reserve(sets_.size());
    for (int i = 0; i < size(); ++i) index_.emplace(sets_[i], i);

    sieves_.assign(n, {});
    for (int i = 0; i < size(); ++i)
        for (int p = 0; p < n; ++p)
            if (subset_of(sets_[i], poset_.down(p))) sieves_[p].push_back(i);
}

int DownSetFrame::id(Mask m) const {
    auto it = index_.find(m);
    if (it == index_.end())
        fail("NotADownSetError", "subset is not a down-set", {{"subset", mask_json(poset_, m)}});
    return it->second;
}

FramePtr make_frame(FinitePoset P, std::size_t cap) {
    return std::make_shared<const DownSetFrame>(std::move(P), cap);
}

Mask heyting_implication(const FinitePoset& P, Mask X, Mask Y) {
    Mask out = 0;
    for (int p = 0; p < P.size(); ++p)
        if (subset_of(P.down(p) & X, Y)) out |= bit(p);
    return out;
}

Mask negation(const FinitePoset& P, Mask A) { return heyting_implication(P, A, 0); }

Mask double_negation(const FinitePoset& P, Mask A) { return negation(P, negation(P, A)); }

void require_frame_morphism(const FrameMap& f) {
    const DownSetFrame& src = *f.source;
    const DownSetFrame& dst = *f.target;
    if (static_cast<int>(f.table.size()) != src.size())
        fail("NotAFrameMorphismError", "table size does not match the source frame");
    auto image = [&](int id) { return dst.at(f.table[id]); };
    auto set_json = [&](const DownSetFrame& fr, int id) { return mask_json(fr.poset(), fr.at(id)); };

    if (image(src.top()) != dst.poset().all())
        fail("NotAFrameMorphismError", "top is not preserved",
             {{"law", "empty meet"}, {"image", set_json(dst, f.table[src.top()])}});
    if (image(src.bottom()) != 0)
        fail("NotAFrameMorphismError", "bottom is not preserved",
             {{"law", "empty join"}, {"image", set_json(dst, f.table[src.bottom()])}});
    // On a finite frame, binary meets and joins plus the empty cases suffice.
    for (int a = 0; a < src.size(); ++a)
        for (int b = a + 1; b < src.size(); ++b) {
            int meet = src.id(src.at(a) & src.at(b));
            int join = src.id(src.at(a) | src.at(b));
            if (image(meet) != (image(a) & image(b)))
                fail("NotAFrameMorphismError", "binary meet is not preserved",
                     {{"law", "meet"}, {"a", set_json(src, a)}, {"b", set_json(src, b)}});
            if (image(join) != (image(a) | image(b)))
                fail("NotAFrameMorphismError", "binary join is not preserved",
                     {{"law", "join"}, {"a", set_json(src, a)}, {"b", set_json(src, b)}});
        }
}

FrameMap upper_adjoint(const FrameMap& f) {
    require_frame_morphism(f);
    const DownSetFrame& src = *f.source;
    const DownSetFrame& dst = *f.target;
    FrameMap g{f.target, f.source, std::vector<int>(dst.size())};
    for (int b = 0; b < dst.size(); ++b) {
        Mask join = 0;
        for (int a = 0; a < src.size(); ++a)
            if (subset_of(dst.at(f.table[a]), dst.at(b))) join |= src.at(a);
        g.table[b] = src.id(join);
    }
    for (int a = 0; a < src.size(); ++a)
        for (int b = 0; b < dst.size(); ++b)
            if (subset_of(dst.at(f.table[a]), dst.at(b)) != subset_of(src.at(a), src.at(g.table[b])))
                throw std::logic_error("upper adjoint fails the adjunction");
    return g;
}

FrameMap restriction_map(const FramePtr& frame, Mask X) {
    Subposet sub = induced(frame->poset(), X);
    FramePtr target = make_frame(sub.poset);
    FrameMap f{frame, target, std::vector<int>(frame->size())};
    for (int a = 0; a < frame->size(); ++a) f.table[a] = target->id(sub.lower(frame->at(a)));
    return f;
}

Mask upper_bounds(const FinitePoset& P, Mask A) {
    Mask out = P.all();
    for (int a : members(A)) out &= P.up(a);
    return out;
}

Mask lower_bounds(const FinitePoset& P, Mask A) {
    Mask out = P.all();
    for (int a : members(A)) out &= P.down(a);
    return out;
}

Mask dm_closure(const FinitePoset& P, Mask A) { return lower_bounds(P, upper_bounds(P, A)); }

std::vector<int> dm_completion(const DownSetFrame& frame) {
    std::vector<int> out;
    for (int i = 0; i < frame.size(); ++i)
        if (dm_closure(frame.poset(), frame.at(i)) == frame.at(i)) out.push_back(i);
    return out;
}

} // namespace sitecalc

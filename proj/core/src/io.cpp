#include "sitecalc/io.hpp"

#include <fstream>
#include <set>
#include <sstream>

namespace sitecalc {

namespace {

std::vector<std::string> split(const std::string& line) {
    std::istringstream in(line);
    std::vector<std::string> out;
    for (std::string w; in >> w;) out.push_back(w);
    return out;
}

} // namespace

FinitePoset parse_poset(const std::string& text) {
    std::istringstream in(text);
    std::vector<std::string> labels;
    std::vector<std::pair<std::string, std::string>> le;
    bool seen_elements = false;
    int lineno = 0;
    for (std::string line; std::getline(in, line);) {
        ++lineno;
        if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        auto words = split(line);
        if (words.empty()) continue;
        const std::string where = "line " + std::to_string(lineno);
        if (words[0] == "elements:") {
            if (seen_elements) fail("ParseError", where + ": second elements: line");
            seen_elements = true;
            std::set<std::string> seen;
            for (std::size_t i = 1; i < words.size(); ++i) {
                if (!seen.insert(words[i]).second)
                    fail("DuplicateElementError", where + ": duplicate element " + words[i], {{"element", words[i]}});
                labels.push_back(words[i]);
            }
        } else if (words[0] == "le:") {
            if (words.size() != 3) fail("ParseError", where + ": le: takes exactly two elements");
            le.emplace_back(words[1], words[2]);
        } else {
            fail("ParseError", where + ": expected elements: or le:");
        }
    }
    if (!seen_elements) fail("ParseError", "missing elements: line");
    auto index = [&](const std::string& name) {
        for (std::size_t i = 0; i < labels.size(); ++i)
            if (labels[i] == name) return static_cast<int>(i);
        fail("ParseError", "unknown element " + name, {{"element", name}});
    };
    std::vector<std::pair<int, int>> pairs;
    for (const auto& [a, b] : le) pairs.emplace_back(index(a), index(b));
    return FinitePoset::from_relation(labels, pairs);
}

std::string format_poset(const FinitePoset& P) {
    std::string out = "elements:";
    for (const auto& l : P.labels()) out += " " + l;
    out += "\n";
    for (auto [q, p] : P.covers()) out += "le: " + P.label(q) + " " + P.label(p) + "\n";
    return out;
}

json poset_to_json(const FinitePoset& P) {
    json pairs = json::array();
    for (int a = 0; a < P.size(); ++a)
        for (int b = 0; b < P.size(); ++b)
            if (P.leq(a, b)) pairs.push_back({a, b});
    return {{"elements", P.labels()}, {"le_pairs", pairs}};
}

FinitePoset poset_from_json(const json& j) {
    if (!j.is_object() || !j.contains("elements") || !j["elements"].is_array())
        fail("ParseError", "poset must be an object with an \"elements\" array");
    std::vector<std::string> labels;
    std::set<std::string> seen;
    for (const auto& e : j["elements"]) {
        if (!e.is_string()) fail("ParseError", "element names must be strings");
        if (!seen.insert(e.get<std::string>()).second)
            fail("DuplicateElementError", "duplicate element " + e.get<std::string>(), {{"element", e}});
        labels.push_back(e.get<std::string>());
    }
    std::vector<std::pair<int, int>> pairs;
    if (j.contains("le_pairs")) {
        for (const auto& pr : j["le_pairs"]) {
            if (!pr.is_array() || pr.size() != 2 || !pr[0].is_number_integer() || !pr[1].is_number_integer())
                fail("ParseError", "le_pairs entries must be [i, j] index pairs");
            pairs.emplace_back(pr[0].get<int>(), pr[1].get<int>());
        }
    }
    return FinitePoset::from_relation(labels, pairs);
}

Mask parse_subset(const FinitePoset& P, const std::string& text) {
    std::string spaced = text;
    for (char& c : spaced)
        if (c == ',') c = ' ';
    Mask X = 0;
    for (const auto& name : split(spaced)) {
        int i = P.index_of(name);
        if (i < 0) fail("ParseError", "unknown element " + name, {{"element", name}});
        X |= bit(i);
    }
    return X;
}

json topology_to_json(const Topology& J) {
    const FinitePoset& P = J.poset();
    json covers = json::object();
    for (int p = 0; p < P.size(); ++p) {
        json list = json::array();
        for (int id : J.covers(p)) list.push_back(mask_to_json(P, J.frame().at(id)));
        covers[P.label(p)] = list;
    }
    return {{"poset", poset_to_json(P)}, {"covers", covers}};
}

Topology topology_from_json(const FramePtr& frame, const json& j) {
    const FinitePoset& P = frame->poset();
    if (!j.is_object() || !j.contains("covers") || !j["covers"].is_object())
        fail("ParseError", "topology must be an object with a \"covers\" object");
    if (j.contains("poset") && !(poset_from_json(j["poset"]) == P))
        fail("PosetMismatchError", "topology was written for a different poset");
    std::vector<std::vector<Mask>> sieves(P.size());
    for (const auto& [name, list] : j["covers"].items()) {
        int p = P.index_of(name);
        if (p < 0) fail("ParseError", "unknown element " + name, {{"element", name}});
        if (!list.is_array()) fail("ParseError", "covers of " + name + " must be an array");
        for (const auto& sieve : list) {
            if (!sieve.is_array()) fail("ParseError", "a sieve must be an array of element names");
            Mask S = 0;
            for (const auto& e : sieve) {
                if (!e.is_string()) fail("ParseError", "a sieve must be an array of element names");
                int q = P.index_of(e.get<std::string>());
                if (q < 0) fail("ParseError", "unknown element " + e.get<std::string>(), {{"element", e}});
                S |= bit(q);
            }
            sieves[p].push_back(S);
        }
    }
    return validate_topology(frame, covers_from_masks(*frame, sieves));
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail("IOError", "cannot read " + path, {{"path", path}});
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

} // namespace sitecalc

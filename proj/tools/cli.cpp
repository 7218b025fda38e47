#include "cli.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <filesystem>
#include <ostream>

#include "sitecalc/catalog.hpp"
#include "sitecalc/io.hpp"
#include "sitecalc/locale.hpp"
#include "sitecalc/sheaf.hpp"

namespace sitecalc::cli {

namespace {

// A poset argument is a file (text or JSON) or "catalog:NAME".
FinitePoset load_poset(const std::string& arg) {
    if (arg.rfind("catalog:", 0) == 0) return catalog_poset(arg.substr(8));
    std::string text = read_file(arg);
    auto first = text.find_first_not_of(" \t\r\n");
    if (first != std::string::npos && text[first] == '{') {
        json j;
        try {
            j = json::parse(text);
        } catch (const json::parse_error& e) {
            fail("ParseError", e.what());
        }
        return poset_from_json(j);
    }
    return parse_poset(text);
}

json load_json(const std::string& path) {
    try {
        return json::parse(read_file(path));
    } catch (const json::parse_error& e) {
        fail("ParseError", path + ": " + e.what());
    }
}

json frame_legend(const DownSetFrame& F) {
    json out = json::array();
    for (int id = 0; id < F.size(); ++id) out.push_back(mask_to_json(F.poset(), F.at(id)));
    return out;
}

void emit(std::ostream& out, const json& j) { out << j.dump(2) << "\n"; }

} // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Grothendieck topologies on finite posets", "sitecalc"};
    app.require_subcommand(1);

    std::string poset_arg, topology_arg, presheaf_arg, input_arg;
    std::string subset, kind, derived, lx, to, from, name;
    int cap = kDefaultBruteForceCap;

    auto* validate = app.add_subcommand("validate", "Parse and validate a poset");
    validate->add_option("--poset", poset_arg, "Poset file or catalog:NAME")->required();

    auto* topology = app.add_subcommand("topology", "Construct a topology");
    topology->add_option("--poset", poset_arg)->required();
    auto* o_subset = topology->add_option("--subset", subset, "J_X for the listed elements");
    auto* o_kind = topology->add_option("--kind", kind)->check(CLI::IsMember({"indiscrete", "discrete", "atomic", "dense"}));
    auto* o_derived = topology->add_option("--derived", derived, "K_X");
    auto* o_lx = topology->add_option("--lx", lx, "L_X");
    for (auto* o : {o_subset, o_kind, o_derived, o_lx})
        for (auto* other : {o_subset, o_kind, o_derived, o_lx})
            if (o != other) o->excludes(other);

    auto* enumerate = app.add_subcommand("enumerate", "Enumerate all topologies by brute force");
    enumerate->add_option("--poset", poset_arg)->required();
    enumerate->add_option("--cap", cap, "Largest poset size accepted")->check(CLI::NonNegativeNumber);

    auto* convert = app.add_subcommand("convert", "Convert between topologies, nuclei, congruences and sublocales");
    convert->add_option("--poset", poset_arg)->required();
    auto* o_topology = convert->add_option("--topology", topology_arg);
    auto* o_input = convert->add_option("--input", input_arg, "Nucleus, congruence or sublocale file for --from");
    auto* o_to = convert->add_option("--to", to)->check(CLI::IsMember({"nucleus", "congruence", "sublocale"}));
    auto* o_from = convert->add_option("--from", from)->check(CLI::IsMember({"nucleus", "congruence", "sublocale"}));
    o_to->excludes(o_from)->needs(o_topology);
    o_from->excludes(o_to)->needs(o_input);
    o_input->needs(o_from);

    auto* sheaf = app.add_subcommand("sheaf", "Sheaf operations");
    sheaf->require_subcommand(1);
    auto* sheaf_check = sheaf->add_subcommand("check", "Check the sheaf condition");
    sheaf_check->add_option("--poset", poset_arg)->required();
    sheaf_check->add_option("--topology", topology_arg)->required();
    sheaf_check->add_option("--presheaf", presheaf_arg)->required();

    auto* subcanonical = app.add_subcommand("subcanonical", "Decide subcanonicity");
    subcanonical->add_option("--poset", poset_arg)->required();
    subcanonical->add_option("--topology", topology_arg)->required();

    auto* cat = app.add_subcommand("catalog", "List built-in posets");
    cat->add_option("--name", name, "Print a single catalog poset");

    auto* exp = app.add_subcommand("export", "Export");
    exp->require_subcommand(1);
    auto* dot = exp->add_subcommand("dot", "Hasse diagram in DOT");
    dot->add_option("--poset", poset_arg)->required();

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "usage error: " << e.what() << "\n";
        if (!app.get_subcommands().empty()) err << app.get_subcommands().back()->help();
        return 2;
    }

    if (topology->parsed() && !*o_subset && !*o_kind && !*o_derived && !*o_lx) {
        err << "usage error: topology needs one of --subset, --kind, --derived, --lx\n" << topology->help();
        return 2;
    }

    try {
        if (validate->parsed()) {
            FinitePoset P = load_poset(poset_arg);
            emit(out, {{"valid", true}, {"poset", poset_to_json(P)}});
        } else if (topology->parsed()) {
            FramePtr frame = make_frame(load_poset(poset_arg));
            const FinitePoset& P = frame->poset();
            std::optional<Topology> J;
            if (*o_subset) J = subset_topology(frame, parse_subset(P, subset));
            else if (*o_derived) J = derived_topology(frame, parse_subset(P, derived));
            else if (*o_lx) J = lx_topology(frame, parse_subset(P, lx));
            else if (kind == "indiscrete") J = indiscrete_topology(frame);
            else if (kind == "discrete") J = discrete_topology(frame);
            else if (kind == "atomic") J = atomic_topology(frame);
            else J = dense_topology(frame);
            emit(out, topology_to_json(*J));
        } else if (enumerate->parsed()) {
            FramePtr frame = make_frame(load_poset(poset_arg));
            const FinitePoset& P = frame->poset();
            json list = json::array();
            auto all = enumerate_all_topologies(frame, cap);
            std::stable_sort(all.begin(), all.end(), [](const Topology& a, const Topology& b) {
                return generating_subset(a) < generating_subset(b);
            });
            for (const Topology& J : all) {
                json t = topology_to_json(J);
                list.push_back({{"generating_subset", mask_to_json(P, generating_subset(J))}, {"covers", t["covers"]}});
            }
            emit(out, {{"poset", poset_to_json(P)}, {"count", all.size()}, {"topologies", list}});
        } else if (convert->parsed()) {
            FramePtr frame = make_frame(load_poset(poset_arg));
            json result = {{"poset", poset_to_json(frame->poset())}, {"down_sets", frame_legend(*frame)}};
            if (*o_to) {
                Topology J = topology_from_json(frame, load_json(topology_arg));
                Nucleus j = nucleus_from_topology(J);
                if (to == "nucleus") result["nucleus"] = nucleus_to_json(j);
                else if (to == "congruence") result["congruence"] = congruence_to_json(congruence_from_nucleus(j));
                else result["sublocale"] = sublocale_to_json(sublocale_from_nucleus(j));
            } else {
                json in = load_json(input_arg);
                // Accept either the bare value or the object written by --to.
                const json& value = in.is_object() && in.contains(from) ? in[from] : in;
                Topology J = from == "nucleus"      ? topology_from_nucleus(nucleus_from_json(frame, value))
                             : from == "congruence" ? topology_from_congruence(congruence_from_json(frame, value))
                                                    : topology_from_sublocale(sublocale_from_json(frame, value));
                result = topology_to_json(J);
            }
            emit(out, result);
        } else if (sheaf_check->parsed()) {
            FramePtr frame = make_frame(load_poset(poset_arg));
            Topology J = topology_from_json(frame, load_json(topology_arg));
            Presheaf F = presheaf_from_json(frame->poset(), load_json(presheaf_arg));
            SheafCheck res = is_sheaf(F, J);
            json result = {{"sheaf", res.ok}};
            if (!res.ok) result["witness"] = res.witness;
            emit(out, result);
        } else if (subcanonical->parsed()) {
            FramePtr frame = make_frame(load_poset(poset_arg));
            const FinitePoset& P = frame->poset();
            Topology J = topology_from_json(frame, load_json(topology_arg));
            json witnesses = json::array();
            for (int p = 0; p < P.size(); ++p) {
                RepresentableWitness w;
                if (!representable_is_sheaf(J, p, &w))
                    witnesses.push_back({{"p", P.label(w.p)}, {"q", P.label(w.q)}, {"sieve", mask_to_json(P, w.sieve)}});
            }
            emit(out, {{"subcanonical", witnesses.empty()}, {"non_sheaf_representables", witnesses}});
        } else if (cat->parsed()) {
            if (!name.empty()) {
                emit(out, poset_to_json(catalog_poset(name)));
            } else {
                json list = json::array();
                for (const auto& e : catalog()) list.push_back({{"name", e.name}, {"poset", poset_to_json(e.poset)}});
                emit(out, list);
            }
        } else if (dot->parsed()) {
            out << export_dot(load_poset(poset_arg));
        }
    } catch (const Error& e) {
        emit(out, e.to_json());
        return 1;
    }
    return 0;
}

} // namespace sitecalc::cli

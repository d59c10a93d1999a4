// mackey-lab: compute with cohomological Mackey functors over finite p-groups
// and finite-stage approximations of pro-p groups.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "mlab/errors.hpp"
#include "mlab/homology.hpp"
#include "mlab/io.hpp"
#include "mlab/seco.hpp"

using namespace mlab;

namespace {

struct LoadedInput {
    std::string path;
    std::string bytes;
    Json json;
};

LoadedInput load_input(const std::string& path) {
    LoadedInput in;
    in.path = path;
    in.bytes = read_file_bytes(path);
    try {
        in.json = Json::parse(in.bytes);
    } catch (const nlohmann::json::exception& e) {
        throw SchemaError(path + ": " + e.what());
    }
    return in;
}

std::string base_dir_of(const std::string& path) {
    auto pos = path.find_last_of('/');
    return pos == std::string::npos ? std::string(".") : path.substr(0, pos);
}

Json digest_inputs(const std::vector<const LoadedInput*>& ins) {
    Json out;
    for (const LoadedInput* in : ins) out[in->path] = fnv1a64_hex(in->bytes);
    return out;
}

void write_report(const Json& report, const std::string& out_path) {
    std::string text = report.dump(2);
    text.push_back('\n');
    if (out_path.empty()) {
        std::cout << text;
        return;
    }
    std::string tmp = out_path + ".tmp";
    {
        std::ofstream f(tmp, std::ios::binary);
        if (!f) throw Error("cannot write " + tmp);
        f << text;
    }
    if (std::rename(tmp.c_str(), out_path.c_str()) != 0) throw Error("cannot move report into place");
}

Json subgroup_json(const Subgroup& s) {
    Json elems = Json::array();
    for (unsigned e : s.elements()) elems.push_back(e);
    return elems;
}

Subgroup subgroup_from_flag(const std::string& text, const PGroupPtr& g) {
    if (!text.empty() && text.front() == '[') return parse_subgroup(Json::parse(text), g);
    Json arr = Json::array();
    std::size_t pos = 0;
    while (pos < text.size()) {
        std::size_t comma = text.find(',', pos);
        std::string tok = text.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
        if (!tok.empty()) arr.push_back(std::stoul(tok));
        if (comma == std::string::npos) break;
        pos = comma + 1;
    }
    return parse_subgroup(arr, g);
}

Json seco_section_json(const Cmf& x, std::size_t u, std::size_t v) {
    SectionCohomology sc = section_cohomology(x, u, v);
    SixTermReport six = six_term_check(x, u, v);
    Json out;
    out["upper"] = subgroup_json(x.system->members[u]);
    out["lower"] = subgroup_json(x.system->members[v]);
    out["k0"] = sc.k0.dim();
    out["k1"] = sc.k1.dim();
    out["c0"] = sc.c0.dim();
    out["c1"] = sc.c1.dim();
    out["tate_minus1"] = six.dims[1];
    out["tate_0"] = six.dims[4];
    out["six_term_exact"] = six.exact;
    return out;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"computational lab for cohomological Mackey functors of finite p-groups"};
    app.require_subcommand(1);
    app.fallthrough();  // global flags may follow the subcommand

    IoCaps caps;
    std::string out_path;
    app.add_option("--order-cap", caps.order_cap, "largest allowed group order")->capture_default_str();
    app.add_option("--degree-cap", caps.degree_cap, "largest homological degree")->capture_default_str();
    app.add_option("--axiom-budget", caps.axiom_budget, "axiom instances before sampling")
        ->capture_default_str();
    app.add_option("--seed", caps.seed, "seed for deterministic sampling")->capture_default_str();
    app.add_option("--out", out_path, "write the report to this path instead of stdout");

    std::string group_path, module_path, functor_path, tower_path;
    std::string subgroup_text, upper_text, lower_text, kind_text = "all";
    std::size_t degree = 0, stage = 0, cap_flag = 0, max_degree = 0;
    bool all_sections = false;
    bool have_degree = false, have_max_degree = false, have_stage = false, have_cap = false;

    auto* cmd_group_info = app.add_subcommand("group-info", "basic invariants of a group");
    cmd_group_info->add_option("--group", group_path, "group JSON (path or -)")->required();

    auto* cmd_subgroups = app.add_subcommand("subgroups", "subgroup lattice");
    cmd_subgroups->add_option("--group", group_path)->required();
    cmd_subgroups->add_option("--kind", kind_text, "all|normal")->capture_default_str();

    auto* cmd_resolve = app.add_subcommand("resolve", "minimal projective resolution");
    cmd_resolve->add_option("--module", module_path)->required();
    cmd_resolve->add_option("--cap", cap_flag)->each([&](const std::string&) { have_cap = true; });

    auto* cmd_homology = app.add_subcommand("homology", "group homology dims over F_p");
    cmd_homology->add_option("--module", module_path)->required();
    cmd_homology->add_option("--degree", degree)->each([&](const std::string&) { have_degree = true; });
    cmd_homology->add_option("--max-degree", max_degree)->each([&](const std::string&) {
        have_max_degree = true;
    });

    auto* cmd_cores = app.add_subcommand("cores", "corestriction H_d(G,M) -> H_d(U, res M)");
    cmd_cores->add_option("--module", module_path)->required();
    cmd_cores->add_option("--subgroup", subgroup_text, "element indices, e.g. 0,2 or [0,2]")->required();
    cmd_cores->add_option("--degree", degree)->required();
    cmd_cores->add_option("--cap", cap_flag)->each([&](const std::string&) { have_cap = true; });

    auto* cmd_tate = app.add_subcommand("tate", "Tate cohomology in degrees -1 and 0");
    cmd_tate->add_option("--module", module_path)->required();

    auto* cmd_build = app.add_subcommand("mackey-build", "build a functor and emit its JSON");
    cmd_build->add_option("--functor", functor_path)->required();

    auto* cmd_check = app.add_subcommand("mackey-check", "verify the seven axioms");
    cmd_check->add_option("--functor", functor_path)->required();

    auto* cmd_seco = app.add_subcommand("seco", "section cohomology of a functor");
    cmd_seco->add_option("--functor", functor_path)->required();
    cmd_seco->add_option("--upper", upper_text);
    cmd_seco->add_option("--lower", lower_text);
    cmd_seco->add_flag("--all-sections", all_sections);

    auto* cmd_pred = app.add_subcommand("predicates", "structural predicates of a functor");
    cmd_pred->add_option("--functor", functor_path)->required();

    auto* cmd_tval = app.add_subcommand("tower-validate", "verify a tower of p-groups");
    cmd_tval->add_option("--tower", tower_path)->required();

    auto* cmd_free = app.add_subcommand("free-test", "finite-stage freeness evidence");
    cmd_free->add_option("--tower", tower_path)->required();
    cmd_free->add_option("--stage", stage)->required();

    auto* cmd_d1 = app.add_subcommand("d1", "transfer chain certificate for D_1(F_p)");
    cmd_d1->add_option("--tower", tower_path)->required();
    cmd_d1->add_option("--stage", stage)->required();

    auto* cmd_ends = app.add_subcommand("ends", "number of F_p-ends evidence");
    cmd_ends->add_option("--tower", tower_path)->required();
    cmd_ends->add_option("--stage", stage)->each([&](const std::string&) { have_stage = true; });

    auto* cmd_dir = app.add_subcommand("direction", "F_p-direction witness check");
    cmd_dir->add_option("--tower", tower_path)->required();
    cmd_dir->add_option("--stage", stage)->each([&](const std::string&) { have_stage = true; });

    CLI11_PARSE(app, argc, argv);

    try {
        Json params;
        params["order_cap"] = caps.order_cap;
        params["degree_cap"] = caps.degree_cap;
        params["axiom_budget"] = caps.axiom_budget;
        params["seed"] = caps.seed;

        int exit_code = 0;
        Json report;

        if (cmd_group_info->parsed()) {
            LoadedInput in = load_input(group_path);
            PGroupPtr g = parse_group(in.json, caps);
            report = report_envelope("group-info", digest_inputs({&in}), params);
            ElAbQuotient el = frattini_and_elab(Subgroup::whole(g));
            unsigned exponent = 1;
            bool abelian = true;
            for (unsigned a = 0; a < g->order(); ++a) {
                exponent = std::max(exponent, g->element_order(a));
                for (unsigned b = 0; b < g->order(); ++b)
                    if (g->mul(a, b) != g->mul(b, a)) abelian = false;
            }
            report["results"] =
                Json{{"p", g->p()},          {"order", g->order()},
                     {"generators", g->generators().size()},
                     {"exponent", exponent}, {"abelian", abelian},
                     {"elab_rank", el.rank}, {"frattini_order", el.frattini.order()}};
        } else if (cmd_subgroups->parsed()) {
            LoadedInput in = load_input(group_path);
            PGroupPtr g = parse_group(in.json, caps);
            params["kind"] = kind_text;
            report = report_envelope("subgroups", digest_inputs({&in}), params);
            SubgroupKind kind = kind_text == "normal" ? SubgroupKind::Normal : SubgroupKind::All;
            if (kind_text != "normal" && kind_text != "all")
                throw SchemaError("unknown subgroup kind: " + kind_text);
            std::vector<Subgroup> subs = subgroups(g, kind);
            Subgroup whole = Subgroup::whole(g);
            Json list = Json::array();
            for (const Subgroup& s : subs)
                list.push_back(Json{{"order", s.order()},
                                    {"elements", subgroup_json(s)},
                                    {"normal", s.normal_in(whole)}});
            report["results"] = Json{{"count", subs.size()}, {"subgroups", std::move(list)}};
        } else if (cmd_resolve->parsed()) {
            LoadedInput in = load_input(module_path);
            FpGModule m = parse_module(in.json, caps, base_dir_of(module_path));
            std::size_t cap = have_cap ? cap_flag : caps.degree_cap;
            params["cap"] = cap;
            report = report_envelope("resolve", digest_inputs({&in}), params);
            Resolution r = minimal_resolution(m, cap);
            // over a nontrivial finite p-group a nonprojective module never has
            // a finite projective dimension
            Json pdim = is_projective(m)
                            ? Json(0)
                            : Json("inf (truncated at " + std::to_string(cap) + ")");
            report["results"] = Json{{"dim", m.dim()},        {"ranks", r.ranks},
                                     {"length", r.length()},  {"truncated", r.truncated},
                                     {"projective", is_projective(m)}, {"pdim", std::move(pdim)}};
        } else if (cmd_homology->parsed()) {
            LoadedInput in = load_input(module_path);
            FpGModule m = parse_module(in.json, caps, base_dir_of(module_path));
            std::size_t hi = have_max_degree ? max_degree : (have_degree ? degree : caps.degree_cap);
            std::size_t lo = have_degree && !have_max_degree ? degree : 0;
            params["degree_from"] = lo;
            params["degree_to"] = hi;
            report = report_envelope("homology", digest_inputs({&in}), params);
            Json dims = Json::array();
            for (std::size_t k = lo; k <= hi; ++k) dims.push_back(homology(m, k, hi + 1).dims);
            report["results"] = Json{{"dims", std::move(dims)}};
        } else if (cmd_cores->parsed()) {
            LoadedInput in = load_input(module_path);
            FpGModule m = parse_module(in.json, caps, base_dir_of(module_path));
            Subgroup u = subgroup_from_flag(subgroup_text, m.group());
            std::size_t cap = have_cap ? cap_flag : std::max(degree + 1, caps.degree_cap);
            params["degree"] = degree;
            params["cap"] = cap;
            params["subgroup"] = subgroup_json(u);
            report = report_envelope("cores", digest_inputs({&in}), params);
            FpMatrix c = corestriction(m, u, degree, cap);
            report["results"] = Json{{"matrix", matrix_to_json(c)},
                                     {"injective", kernel_basis(c).rows() == 0},
                                     {"domain_dim", c.cols()},
                                     {"codomain_dim", c.rows()}};
        } else if (cmd_tate->parsed()) {
            LoadedInput in = load_input(module_path);
            FpGModule m = parse_module(in.json, caps, base_dir_of(module_path));
            report = report_envelope("tate", digest_inputs({&in}), params);
            TatePair t = tate(m);
            report["results"] = Json{{"h_minus1", t.hm1.dim()}, {"h_0", t.h0.dim()}};
        } else if (cmd_build->parsed()) {
            LoadedInput in = load_input(functor_path);
            Cmf x = parse_functor(in.json, caps, base_dir_of(functor_path));
            report = report_envelope("mackey-build", digest_inputs({&in}), params);
            report["results"] = Json{{"dims", x.dims}, {"cmf", cmf_to_json(x)}};
        } else if (cmd_check->parsed()) {
            LoadedInput in = load_input(functor_path);
            Cmf x = parse_functor(in.json, caps, base_dir_of(functor_path));
            report = report_envelope("mackey-check", digest_inputs({&in}), params);
            CmfCheckReport rep = cmf_check(x, caps.axiom_budget, caps.seed);
            Json viols = Json::array();
            for (const CmfViolation& v : rep.violations)
                viols.push_back(Json{{"axiom", v.axiom}, {"instance", v.instance}});
            report["results"] = Json{{"violations", std::move(viols)},
                                     {"instances_total", rep.instances_total},
                                     {"instances_checked", rep.instances_checked},
                                     {"exhaustive", rep.exhaustive}};
            if (!rep.ok()) exit_code = 2;
        } else if (cmd_seco->parsed()) {
            LoadedInput in = load_input(functor_path);
            Cmf x = parse_functor(in.json, caps, base_dir_of(functor_path));
            report = report_envelope("seco", digest_inputs({&in}), params);
            Json sections = Json::array();
            bool all_exact = true;
            if (all_sections || upper_text.empty()) {
                for (auto [u, v] : normal_sections(*x.system)) {
                    Json s = seco_section_json(x, u, v);
                    all_exact = all_exact && s["six_term_exact"].get<bool>();
                    sections.push_back(std::move(s));
                }
            } else {
                Subgroup u = subgroup_from_flag(upper_text, x.system->group);
                Subgroup v = subgroup_from_flag(lower_text, x.system->group);
                Json s = seco_section_json(x, x.system->index_of(u), x.system->index_of(v));
                all_exact = s["six_term_exact"].get<bool>();
                sections.push_back(std::move(s));
            }
            report["results"] = Json{{"sections", std::move(sections)}, {"all_exact", all_exact}};
            if (!all_exact) exit_code = 2;
        } else if (cmd_pred->parsed()) {
            LoadedInput in = load_input(functor_path);
            Cmf x = parse_functor(in.json, caps, base_dir_of(functor_path));
            report = report_envelope("predicates", digest_inputs({&in}), params);
            CmfPredicates p = predicates(x);
            report["results"] = Json{{"i_injective", p.i_injective},
                                     {"t_surjective", p.t_surjective},
                                     {"type_H0", p.type_h0},
                                     {"type_H_0", p.type_h_0},
                                     {"terminally_i_injective", p.terminally_i_injective},
                                     {"terminally_type_H0", p.terminally_type_h0},
                                     {"hilbert90", p.hilbert90}};
        } else if (cmd_tval->parsed()) {
            LoadedInput in = load_input(tower_path);
            Tower t = parse_tower(in.json, caps);
            report = report_envelope("tower-validate", digest_inputs({&in}), params);
            TowerValidation v = tower_validate(t);
            Json res = Json{{"depth", t.depth()}, {"orders", v.orders}, {"elab_dims", v.elab_dims}};
            if (v.elab_stable_at)
                res["elab_stable_at"] = *v.elab_stable_at;
            else
                res["elab_stable_at"] = nullptr;
            report["results"] = std::move(res);
        } else if (cmd_free->parsed()) {
            LoadedInput in = load_input(tower_path);
            Tower t = parse_tower(in.json, caps);
            params["stage"] = stage;
            report = report_envelope("free-test", digest_inputs({&in}), params);
            FreeTestReport rep = free_test(t, stage);
            Json entries = Json::array();
            for (const FreeTestEntry& e : rep.entries)
                entries.push_back(Json{
                    {"j", e.j},
                    {"kernel_dim", e.kernel_dim},
                    {"verdict", e.verdict == Verdict::SoundPositive ? "sound_positive" : "inconclusive"}});
            Json stability_stages = Json::array();
            if (stage >= 2) {
                stability_stages.push_back(stage - 1);
                stability_stages.push_back(stage);
            }
            report["results"] =
                Json{{"semantics",
                      "positive verdicts certify transfer injectivity at this stage; negative "
                      "verdicts are inconclusive, never a freeness refutation"},
                     {"abelianization_stable", rep.abelianization_stable},
                     {"stability_stages", std::move(stability_stages)},
                     {"entries", std::move(entries)},
                     {"all_sound_positive", rep.all_sound_positive()}};
        } else if (cmd_d1->parsed()) {
            LoadedInput in = load_input(tower_path);
            Tower t = parse_tower(in.json, caps);
            params["stage"] = stage;
            report = report_envelope("d1", digest_inputs({&in}), params);
            D1Report rep = d1_report(t, stage);
            report["results"] = Json{{"chain_dims", rep.chain_dims},
                                     {"step_ranks", rep.step_ranks},
                                     {"composite_ranks", rep.composite_ranks},
                                     {"certificate", rep.certificate}};
        } else if (cmd_ends->parsed()) {
            LoadedInput in = load_input(tower_path);
            Tower t = parse_tower(in.json, caps);
            std::size_t m = have_stage ? stage : t.depth();
            params["stage"] = m;
            report = report_envelope("ends", digest_inputs({&in}), params);
            EndsReport rep = ends_classify(t, m);
            Json res;
            switch (rep.kind) {
                case EndsReport::Kind::Finite:
                    res = Json{{"E", 0}, {"kind", "finite"}, {"detail", rep.detail}};
                    break;
                case EndsReport::Kind::TwoEnds:
                    res = Json{{"E", 2}, {"kind", "consistent-with-virtually-Zp"}, {"detail", rep.detail}};
                    break;
                case EndsReport::Kind::LowerBound:
                    res = Json{{"E_lower_bound", rep.value}, {"kind", "evidence"}, {"detail", rep.detail}};
                    break;
            }
            report["results"] = std::move(res);
        } else if (cmd_dir->parsed()) {
            LoadedInput in = load_input(tower_path);
            Tower t = parse_tower(in.json, caps);
            if (!tower_has_witness(in.json))
                throw SchemaError("direction: the tower file carries no tau/sigma witness");
            DirectionWitnessData w = parse_witness(in.json, t);
            std::size_t m = have_stage ? stage : t.depth();
            params["stage"] = m;
            report = report_envelope("direction", digest_inputs({&in}), params);
            DirectionReport rep = direction_check(t, w, m);
            report["results"] = Json{{"splitting_verified", rep.splitting_verified},
                                     {"j_el_nonzero", rep.j_el_nonzero},
                                     {"n_dim", rep.n_dim},
                                     {"quotient_order", rep.quotient_order},
                                     {"head_dim", rep.head_dim},
                                     {"n_evidence", rep.n_evidence},
                                     {"semantics",
                                      "sound-positive at a finite stage; disagreement is "
                                      "inconclusive, the pro-p statement concerns the limit"}};
        }

        write_report(report, out_path);
        return exit_code;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}

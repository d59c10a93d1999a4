#include "mlab/io.hpp"

#include <fstream>
#include <iostream>
#include <sstream>

#include "mlab/errors.hpp"

namespace mlab {

namespace {

const Json& need(const Json& j, const char* field, const char* what) {
    auto it = j.find(field);
    if (it == j.end())
        throw SchemaError(std::string(what) + ": missing field \"" + field + "\"");
    return *it;
}

void check_schema_tag(const Json& j, const char* what) {
    if (j.contains("schema") && j["schema"] != kSchemaVersion)
        throw SchemaError(std::string(what) + ": unsupported schema version " +
                          j["schema"].dump());
}

std::string join_path(const std::string& dir, const std::string& rel) {
    if (rel.empty() || rel.front() == '/' || dir.empty()) return rel;
    return dir + "/" + rel;
}

std::string dirname_of(const std::string& path) {
    auto pos = path.find_last_of('/');
    return pos == std::string::npos ? std::string(".") : path.substr(0, pos);
}

}  // namespace

std::string read_file_bytes(const std::string& path) {
    if (path == "-") {
        std::ostringstream ss;
        ss << std::cin.rdbuf();
        return ss.str();
    }
    std::ifstream in(path, std::ios::binary);
    if (!in) throw SchemaError("cannot open file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

Json load_json(const std::string& path) {
    std::string bytes = read_file_bytes(path);
    try {
        return Json::parse(bytes);
    } catch (const nlohmann::json::exception& e) {
        throw SchemaError(path + ": " + e.what());
    }
}

std::uint64_t fnv1a64(const std::string& bytes) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::string fnv1a64_hex(const std::string& bytes) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fnv1a64(bytes)));
    return std::string("fnv1a64:") + buf;
}

PGroupPtr parse_group(const Json& j, const IoCaps& caps) {
    if (j.is_string()) return parse_group(load_json(j.get<std::string>()), caps);
    if (!j.is_object()) throw SchemaError("group: expected an object");
    check_schema_tag(j, "group");
    std::string kind = need(j, "kind", "group").get<std::string>();
    if (kind == "perm") {
        std::uint32_t p = need(j, "p", "group").get<std::uint32_t>();
        std::size_t degree = need(j, "degree", "group").get<std::size_t>();
        std::vector<std::vector<unsigned>> gens;
        for (const Json& perm : need(j, "generators", "group"))
            gens.push_back(perm.get<std::vector<unsigned>>());
        return PGroup::from_generators(p, degree, gens, caps.order_cap);
    }
    if (kind == "family") {
        std::string family = need(j, "family", "group").get<std::string>();
        const Json& params = need(j, "params", "group");
        if (family == "cyclic")
            return cyclic_group(need(params, "p", "cyclic").get<std::uint32_t>(),
                                need(params, "k", "cyclic").get<unsigned>(), caps.order_cap);
        if (family == "elem-abelian")
            return elem_abelian_group(need(params, "p", "elem-abelian").get<std::uint32_t>(),
                                      need(params, "rank", "elem-abelian").get<unsigned>(),
                                      caps.order_cap);
        if (family == "dihedral")
            return dihedral_group(need(params, "k", "dihedral").get<unsigned>(), caps.order_cap);
        if (family == "quaternion")
            return quaternion_group(need(params, "k", "quaternion").get<unsigned>(), caps.order_cap);
        if (family == "product") {
            const Json& factors = need(params, "factors", "product");
            if (!factors.is_array() || factors.size() < 2)
                throw SchemaError("product family needs at least two factors");
            PGroupPtr acc = parse_group(factors[0], caps);
            for (std::size_t i = 1; i < factors.size(); ++i)
                acc = product_group(acc, parse_group(factors[i], caps), caps.order_cap);
            return acc;
        }
        if (family == "free")
            throw SchemaError(
                "free pro-p families of rank >= 2 require nilpotent-quotient algorithms and are "
                "out of scope");
        throw SchemaError("unknown group family: " + family);
    }
    throw SchemaError("unknown group kind: " + kind);
}

FpGModule parse_module(const Json& j, const IoCaps& caps, const std::string& base_dir) {
    if (j.is_string()) {
        std::string path = join_path(base_dir, j.get<std::string>());
        return parse_module(load_json(path), caps, dirname_of(path));
    }
    if (!j.is_object()) throw SchemaError("module: expected an object");
    check_schema_tag(j, "module");

    const Json& gj = need(j, "group", "module");
    PGroupPtr g;
    if (gj.is_string()) {
        std::string path = join_path(base_dir, gj.get<std::string>());
        g = parse_group(load_json(path), caps);
    } else {
        g = parse_group(gj, caps);
    }

    if (j.contains("builtin")) {
        std::string b = j["builtin"].get<std::string>();
        if (b == "trivial") return trivial_module(g);
        if (b == "regular") return regular_module(g);
        if (b == "permutation")
            return permutation_module(g, parse_subgroup(need(j, "subgroup", "module"), g));
        throw SchemaError("unknown builtin module: " + b);
    }

    std::size_t dim = need(j, "dim", "module").get<std::size_t>();
    const Json& action = need(j, "action", "module");
    std::vector<FpMatrix> gen_action;
    for (std::size_t gi = 0; gi < g->generators().size(); ++gi) {
        std::string key = "g" + std::to_string(gi);
        if (!action.contains(key))
            throw SchemaError("module: action is missing generator \"" + key + "\"");
        FpMatrix m = matrix_from_json(action[key], g->p());
        if (m.rows() != dim || m.cols() != dim)
            throw SchemaError("module: action of " + key + " is not " + std::to_string(dim) + "x" +
                              std::to_string(dim));
        gen_action.push_back(std::move(m));
    }
    try {
        return FpGModule(g, dim, std::move(gen_action));
    } catch (const InvariantError& e) {
        throw InvariantError(std::string("module: ") + e.what());
    }
}

Subgroup parse_subgroup(const Json& j, const PGroupPtr& g) {
    if (!j.is_array()) throw SchemaError("subgroup: expected an array of element indices");
    std::vector<bool> bits(g->order(), false);
    bits[0] = true;
    for (const Json& e : j) {
        unsigned idx = e.get<unsigned>();
        if (idx >= g->order()) throw SchemaError("subgroup: element index out of range");
        bits[idx] = true;
    }
    try {
        return Subgroup(g, std::move(bits));
    } catch (const InvariantError& e) {
        throw InvariantError(std::string("subgroup: ") + e.what());
    }
}

unsigned eval_word(const PGroupPtr& g, const std::string& word) {
    unsigned acc = 0;
    std::size_t pos = 0;
    auto skip_ws = [&] {
        while (pos < word.size() && (word[pos] == ' ' || word[pos] == '\t')) ++pos;
    };
    skip_ws();
    if (pos >= word.size()) return 0;
    if (word.substr(pos) == "e" || word.substr(pos) == "1") return 0;
    while (pos < word.size()) {
        skip_ws();
        if (pos < word.size() && word[pos] == '*') {
            ++pos;
            skip_ws();
        }
        if (pos >= word.size()) break;
        if (word[pos] != 'g') throw SchemaError("word: expected generator token in \"" + word + "\"");
        ++pos;
        std::size_t start = pos;
        while (pos < word.size() && std::isdigit(static_cast<unsigned char>(word[pos]))) ++pos;
        if (start == pos) throw SchemaError("word: malformed generator index in \"" + word + "\"");
        std::size_t gi = std::stoul(word.substr(start, pos - start));
        if (gi >= g->generators().size())
            throw SchemaError("word: generator g" + std::to_string(gi) + " does not exist");
        long exp = 1;
        if (pos < word.size() && word[pos] == '^') {
            ++pos;
            std::size_t estart = pos;
            if (pos < word.size() && word[pos] == '-') ++pos;
            while (pos < word.size() && std::isdigit(static_cast<unsigned char>(word[pos]))) ++pos;
            if (estart == pos) throw SchemaError("word: malformed exponent in \"" + word + "\"");
            exp = std::stol(word.substr(estart, pos - estart));
        }
        unsigned gen = g->generators()[gi];
        unsigned factor = exp >= 0 ? gen : g->inv(gen);
        for (long k = 0; k < (exp >= 0 ? exp : -exp); ++k) acc = g->mul(acc, factor);
    }
    return acc;
}

Tower parse_tower(const Json& j, const IoCaps& caps) {
    if (!j.is_object()) throw SchemaError("tower: expected an object");
    check_schema_tag(j, "tower");
    std::vector<PGroupPtr> stages;
    for (const Json& gj : need(j, "stages", "tower")) stages.push_back(parse_group(gj, caps));
    if (stages.empty()) throw SchemaError("tower: needs at least one stage");

    std::vector<std::vector<unsigned>> projections;
    const Json& projs = need(j, "projections", "tower");
    if (projs.size() + 1 != stages.size())
        throw SchemaError("tower: needs exactly one projection per consecutive stage pair");
    for (std::size_t k = 0; k < projs.size(); ++k) {
        const PGroupPtr& from = stages[k + 1];
        const PGroupPtr& to = stages[k];
        // generator images as words in the target generators
        std::vector<unsigned> gen_img(from->generators().size());
        for (std::size_t gi = 0; gi < gen_img.size(); ++gi) {
            std::string key = "g" + std::to_string(gi);
            if (!projs[k].contains(key))
                throw SchemaError("tower: projection " + std::to_string(k + 1) +
                                  " is missing generator \"" + key + "\"");
            gen_img[gi] = eval_word(to, projs[k][key].get<std::string>());
        }
        // extend along BFS words; make_tower re-verifies the result
        std::vector<unsigned> full(from->order(), 0);
        for (unsigned e = 0; e < from->order(); ++e) {
            unsigned img = 0;
            for (unsigned letter : from->word_of(e)) img = to->mul(img, gen_img[letter]);
            full[e] = img;
        }
        projections.push_back(std::move(full));
    }
    std::string name = j.contains("name") ? j["name"].get<std::string>() : std::string("tower");
    return make_tower(std::move(stages), std::move(projections), std::move(name));
}

bool tower_has_witness(const Json& j) { return j.contains("tau") && j.contains("sigma"); }

DirectionWitnessData parse_witness(const Json& j, const Tower& t) {
    DirectionWitnessData w;
    const Json& tau = need(j, "tau", "tower witness");
    const Json& sigma = need(j, "sigma", "tower witness");
    if (tau.size() != t.depth() || sigma.size() != t.depth())
        throw SchemaError("tower witness: tau and sigma need one entry per stage");
    for (std::size_t k = 0; k < t.depth(); ++k) {
        const PGroupPtr& g = t.stages[k];
        std::size_t modk = 1;
        for (std::size_t i = 0; i <= k; ++i) modk *= g->p();
        // generator images -> full element table along BFS words
        std::vector<unsigned> gen_img(g->generators().size());
        for (std::size_t gi = 0; gi < gen_img.size(); ++gi) {
            std::string key = "g" + std::to_string(gi);
            if (!tau[k].contains(key))
                throw SchemaError("tower witness: tau stage " + std::to_string(k + 1) +
                                  " is missing \"" + key + "\"");
            gen_img[gi] = tau[k][key].get<unsigned>() % modk;
        }
        std::vector<unsigned> table(g->order(), 0);
        for (unsigned e = 0; e < g->order(); ++e) {
            unsigned acc = 0;
            for (unsigned letter : g->word_of(e)) acc = static_cast<unsigned>((acc + gen_img[letter]) % modk);
            table[e] = acc;
        }
        w.tau.push_back(std::move(table));
        w.sigma.push_back(eval_word(g, sigma[k].get<std::string>()));
    }
    return w;
}

namespace {

MackeySystemPtr parse_system(const Json& j, const PGroupPtr& g, const IoCaps& caps,
                             const Json* seeds_json) {
    std::string kind = j.is_string() ? j.get<std::string>() : std::string("all");
    if (kind == "all") return mackey_system(g, SystemKind::All, {}, caps.order_cap * 32);
    if (kind == "normal") return mackey_system(g, SystemKind::Normal, {}, caps.order_cap * 32);
    if (kind == "closure") {
        if (!seeds_json) throw SchemaError("system: closure kind needs \"seeds\"");
        std::vector<Subgroup> seeds;
        for (const Json& s : *seeds_json) seeds.push_back(parse_subgroup(s, g));
        return mackey_system(g, SystemKind::Closure, seeds, caps.order_cap * 32);
    }
    throw SchemaError("unknown system kind: " + kind);
}

}  // namespace

Cmf parse_functor(const Json& j, const IoCaps& caps, const std::string& base_dir) {
    if (j.is_string()) {
        std::string path = join_path(base_dir, j.get<std::string>());
        return parse_functor(load_json(path), caps, dirname_of(path));
    }
    if (!j.is_object()) throw SchemaError("functor: expected an object");
    check_schema_tag(j, "functor");
    std::string kind = need(j, "kind", "functor").get<std::string>();

    auto system_for = [&](const PGroupPtr& g) {
        const Json* seeds = j.contains("seeds") ? &j["seeds"] : nullptr;
        return parse_system(j.contains("system") ? j["system"] : Json("all"), g, caps, seeds);
    };

    if (kind == "T" || kind == "upsilon") {
        PGroupPtr g = parse_group(need(j, "group", "functor"), caps);
        std::size_t n = j.contains("n") ? j["n"].get<std::size_t>() : 1;
        return constant_functor(system_for(g), n,
                                kind == "T" ? ConstantKind::T : ConstantKind::Upsilon);
    }
    if (kind == "h0") {
        FpGModule m = parse_module(need(j, "module", "functor"), caps, base_dir);
        return h0_functor(m, system_for(m.group()));
    }
    if (kind == "h-lower") {
        FpGModule m = parse_module(need(j, "module", "functor"), caps, base_dir);
        std::size_t k = need(j, "k", "functor").get<std::size_t>();
        std::size_t cap = j.contains("cap") ? j["cap"].get<std::size_t>()
                                            : std::max<std::size_t>(k + 1, caps.degree_cap);
        return h_lower_functor(m, k, system_for(m.group()), cap);
    }
    if (kind == "el") {
        PGroupPtr g = parse_group(need(j, "group", "functor"), caps);
        return el_functor(system_for(g));
    }
    if (kind == "induced") {
        PGroupPtr g = parse_group(need(j, "group", "functor"), caps);
        Subgroup h = parse_subgroup(need(j, "subgroup", "functor"), g);
        std::string flavor = need(j, "flavor", "functor").get<std::string>();
        if (flavor != "T" && flavor != "upsilon") throw SchemaError("induced: unknown flavor");
        return induced_functor(h, flavor == "T" ? ConstantKind::T : ConstantKind::Upsilon,
                               system_for(g));
    }
    if (kind == "dual") return dual_functor(parse_functor(need(j, "of", "functor"), caps, base_dir));
    if (kind == "cmf") return cmf_from_json(j, caps);
    throw SchemaError("unknown functor kind: " + kind);
}

Json matrix_to_json(const FpMatrix& m) {
    Json rows = Json::array();
    for (std::size_t r = 0; r < m.rows(); ++r) {
        Json row = Json::array();
        for (std::size_t c = 0; c < m.cols(); ++c) row.push_back(m.at(r, c));
        rows.push_back(std::move(row));
    }
    Json out;
    out["rows"] = m.rows();
    out["cols"] = m.cols();
    out["entries"] = std::move(rows);
    return out;
}

FpMatrix matrix_from_json(const Json& j, std::uint32_t p) {
    if (j.is_array()) {  // plain row-major nested arrays
        std::vector<std::vector<std::uint32_t>> rows;
        for (const Json& row : j) rows.push_back(row.get<std::vector<std::uint32_t>>());
        for (const auto& row : rows)
            for (std::uint32_t v : row)
                if (v >= p) throw SchemaError("matrix entry out of range [0, p)");
        return rows.empty() ? FpMatrix(p, 0, 0) : FpMatrix::from_rows(p, rows);
    }
    std::size_t r = need(j, "rows", "matrix").get<std::size_t>();
    std::size_t c = need(j, "cols", "matrix").get<std::size_t>();
    FpMatrix m(p, r, c);
    const Json& entries = need(j, "entries", "matrix");
    if (entries.size() != r) throw SchemaError("matrix: row count mismatch");
    for (std::size_t i = 0; i < r; ++i) {
        if (entries[i].size() != c) throw SchemaError("matrix: column count mismatch");
        for (std::size_t k = 0; k < c; ++k) {
            std::uint32_t v = entries[i][k].get<std::uint32_t>();
            if (v >= p) throw SchemaError("matrix entry out of range [0, p)");
            m.set(i, k, v);
        }
    }
    return m;
}

Json cmf_to_json(const Cmf& x) {
    const MackeySystem& sys = *x.system;
    Json out;
    out["schema"] = kSchemaVersion;
    out["kind"] = "cmf";
    out["p"] = x.p;
    out["group"] = Json{{"order", sys.group->order()}};

    // The group itself, as a permutation realization on its own elements.
    Json gens = Json::array();
    for (unsigned gen : sys.group->generators()) {
        Json perm = Json::array();
        for (unsigned e = 0; e < sys.group->order(); ++e) perm.push_back(sys.group->mul(gen, e));
        gens.push_back(std::move(perm));
    }
    out["group"] = Json{{"schema", kSchemaVersion},
                        {"p", x.p},
                        {"kind", "perm"},
                        {"degree", sys.group->order()},
                        {"generators", std::move(gens)}};

    Json members = Json::array();
    for (const Subgroup& s : sys.members) {
        Json elems = Json::array();
        for (unsigned e : s.elements()) elems.push_back(e);
        members.push_back(std::move(elems));
    }
    out["members"] = std::move(members);
    out["dims"] = x.dims;

    Json iedges = Json::array(), tedges = Json::array();
    for (auto [u, w] : sys.cover_edges) {
        iedges.push_back(Json{{"upper", u}, {"lower", w}, {"matrix", matrix_to_json(x.i_edge.at({u, w}))}});
        tedges.push_back(Json{{"upper", u}, {"lower", w}, {"matrix", matrix_to_json(x.t_edge.at({u, w}))}});
    }
    out["i_edges"] = std::move(iedges);
    out["t_edges"] = std::move(tedges);

    Json cgens = Json::array();
    for (const auto& [key, mat] : x.c_gen)
        cgens.push_back(Json{{"gen", key.first}, {"member", key.second}, {"matrix", matrix_to_json(mat)}});
    out["c_gen"] = std::move(cgens);
    return out;
}

Cmf cmf_from_json(const Json& j, const IoCaps& caps) {
    check_schema_tag(j, "cmf");
    std::uint32_t p = need(j, "p", "cmf").get<std::uint32_t>();
    PGroupPtr g = parse_group(need(j, "group", "cmf"), caps);
    if (g->p() != p) throw SchemaError("cmf: group modulus mismatch");

    std::vector<Subgroup> members;
    for (const Json& elems : need(j, "members", "cmf")) members.push_back(parse_subgroup(elems, g));
    MackeySystemPtr sys = mackey_system(g, SystemKind::Closure, members, caps.order_cap * 32);
    if (sys->size() != members.size())
        throw SchemaError("cmf: member list is not conjugation/intersection closed");

    Cmf x;
    x.system = sys;
    x.p = p;
    x.dims = need(j, "dims", "cmf").get<std::vector<std::size_t>>();
    if (x.dims.size() != sys->size()) throw SchemaError("cmf: dims length mismatch");

    auto parse_edges = [&](const Json& arr, bool is_i) {
        for (const Json& e : arr) {
            std::size_t u = need(e, "upper", "cmf edge").get<std::size_t>();
            std::size_t w = need(e, "lower", "cmf edge").get<std::size_t>();
            FpMatrix m = matrix_from_json(need(e, "matrix", "cmf edge"), p);
            if (is_i) {
                if (m.rows() != x.dims[w] || m.cols() != x.dims[u])
                    throw SchemaError("cmf: i edge shape mismatch");
                x.i_edge[{u, w}] = std::move(m);
            } else {
                if (m.rows() != x.dims[u] || m.cols() != x.dims[w])
                    throw SchemaError("cmf: t edge shape mismatch");
                x.t_edge[{u, w}] = std::move(m);
            }
        }
    };
    parse_edges(need(j, "i_edges", "cmf"), true);
    parse_edges(need(j, "t_edges", "cmf"), false);
    for (auto [u, w] : sys->cover_edges) {
        if (!x.i_edge.count({u, w})) throw SchemaError("cmf: missing i edge for a cover pair");
        if (!x.t_edge.count({u, w})) throw SchemaError("cmf: missing t edge for a cover pair");
    }

    for (const Json& e : need(j, "c_gen", "cmf")) {
        std::size_t gi = need(e, "gen", "cmf c_gen").get<std::size_t>();
        std::size_t u = need(e, "member", "cmf c_gen").get<std::size_t>();
        if (gi >= g->generators().size() || u >= sys->size())
            throw SchemaError("cmf: c_gen index out of range");
        FpMatrix m = matrix_from_json(need(e, "matrix", "cmf c_gen"), p);
        std::size_t cu = sys->conj_member(g->generators()[gi], u);
        if (m.rows() != x.dims[cu] || m.cols() != x.dims[u])
            throw SchemaError("cmf: c_gen shape mismatch");
        x.c_gen[{gi, u}] = std::move(m);
    }
    for (std::size_t gi = 0; gi < g->generators().size(); ++gi)
        for (std::size_t u = 0; u < sys->size(); ++u)
            if (!x.c_gen.count({gi, u})) throw SchemaError("cmf: missing c_gen entry");
    return x;
}

Json report_envelope(const std::string& command, const Json& inputs, const Json& params) {
    Json out;
    out["schema"] = kSchemaVersion;
    out["tool"] = Json{{"name", "mackey-lab"}, {"version", "0.1.0"}, {"command", command}};
    out["inputs"] = inputs;
    out["params"] = params;
    return out;
}

}  // namespace mlab

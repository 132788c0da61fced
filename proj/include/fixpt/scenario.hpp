#pragma once

// Scenario files (JSON, integers only) and the reports produced by running
// them. A Scenario is plain data: parsing validates it against the schema,
// serializing writes it back in canonical form, and run() builds the
// library objects and evaluates them.

#include "fixpt/equivariant.hpp"
#include "fixpt/periodic.hpp"

#include "json.hpp"

#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace fixpt::scenario {

using Json = nlohmann::json;

/// Malformed scenario text: syntax, schema, or an unresolvable reference.
class ScenarioError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// ---------------------------------------------------------------- data

/// {"cyclic": n}, {"symmetric": k} or {"table": [[...]], "names": [...]}.
struct FiniteGroupSpec {
    std::string preset; // "cyclic", "symmetric" or "table"
    std::size_t n = 1;
    std::vector<std::vector<std::size_t>> table;
    std::vector<std::string> names;

    FiniteGroup build() const {
        if (preset == "cyclic")
            return FiniteGroup::cyclic(n);
        if (preset == "symmetric")
            return FiniteGroup::symmetric(n);
        return names.empty() ? FiniteGroup(table) : FiniteGroup(table, names);
    }
    friend bool operator==(const FiniteGroupSpec&, const FiniteGroupSpec&) = default;
};

struct GroupSpec {
    std::string kind; // "free_abelian", "finite" or "free"
    std::size_t rank = 0;
    std::size_t radius = 0;
    FiniteGroupSpec finite;

    GroupModel build() const {
        if (kind == "free_abelian")
            return GroupModel::free_abelian(rank);
        if (kind == "finite")
            return GroupModel::finite(finite.build());
        return GroupModel::free(rank, radius);
    }
    friend bool operator==(const GroupSpec&, const GroupSpec&) = default;
};

/// How the acting group moves classes. The acting group comes from context:
/// Z/l for a periodic component, the Weyl group for an equivariant one,
/// Z/order for a presentation.
struct ActionSpec {
    std::string kind = "trivial"; // "trivial", "endomorphism" or "permutation"
    std::optional<std::size_t> order;
    Endomorphism images;       // endomorphism: the map rho
    std::size_t generator = 1; // endomorphism: group element acting as rho
    std::vector<std::vector<std::pair<GroupWord, GroupWord>>> maps; // permutation: per group element
    friend bool operator==(const ActionSpec&, const ActionSpec&) = default;
};

struct ComponentSpec {
    std::string name; // equivariant components
    std::size_t l = 0; // periodic components
    GroupSpec group;
    Endomorphism phi;
    std::vector<FixedPointRecord> records;
    ActionSpec action;
    friend bool operator==(const ComponentSpec&, const ComponentSpec&) = default;
};

struct TorusSpec {
    IntMatrix matrix;
    std::optional<std::size_t> n;
    friend bool operator==(const TorusSpec&, const TorusSpec&) = default;
};

struct PresentationSpec {
    ComponentSpec component;
    bool has_action = false;
    friend bool operator==(const PresentationSpec&, const PresentationSpec&) = default;
};

struct PeriodicSpec {
    std::size_t n = 1;
    std::vector<ComponentSpec> components;
    friend bool operator==(const PeriodicSpec&, const PeriodicSpec&) = default;
};

struct SubgroupSpec {
    std::vector<std::size_t> elements;
    std::vector<ComponentSpec> components;
    friend bool operator==(const SubgroupSpec&, const SubgroupSpec&) = default;
};

struct EquivariantSpec {
    FiniteGroupSpec group;
    std::vector<SubgroupSpec> subgroups;
    friend bool operator==(const EquivariantSpec&, const EquivariantSpec&) = default;
};

struct FullerGapSpec {
    Int dim = 0;
    std::size_t n = 1;
    friend bool operator==(const FullerGapSpec&, const FullerGapSpec&) = default;
};

struct GapSpec {
    std::vector<Stratum> strata;
    std::vector<Inclusion> inclusions;
    std::optional<FullerGapSpec> fuller;
    friend bool operator==(const GapSpec&, const GapSpec&) = default;
};

using Body = std::variant<TorusSpec, PresentationSpec, PeriodicSpec, EquivariantSpec, GapSpec>;

struct Scenario {
    std::string description;
    Body body;

    std::string kind() const {
        static const char* names[] = {"torus", "presentation", "periodic", "equivariant", "gap"};
        return names[body.index()];
    }
    friend bool operator==(const Scenario&, const Scenario&) = default;
};

// ---------------------------------------------------------------- parsing

namespace detail {

[[noreturn]] inline void fail(const std::string& path, const std::string& what) {
    throw ScenarioError(path + ": " + what);
}

inline std::string at(const std::string& path, const std::string& key) { return path + "." + key; }
inline std::string at(const std::string& path, std::size_t i) { return path + "[" + std::to_string(i) + "]"; }

inline void reject_floats(const Json& j, const std::string& path) {
    if (j.is_number_float())
        fail(path, "non-integer number " + j.dump() + " (scenarios are integer-only)");
    if (j.is_object())
        for (const auto& [k, v] : j.items())
            reject_floats(v, at(path, k));
    if (j.is_array())
        for (std::size_t i = 0; i < j.size(); ++i)
            reject_floats(j[i], at(path, i));
}

inline const Json& object(const Json& j, const std::string& path, std::initializer_list<const char*> allowed) {
    if (!j.is_object())
        fail(path, "expected an object");
    for (const auto& [k, v] : j.items()) {
        bool ok = false;
        for (const char* a : allowed)
            ok |= k == a;
        if (!ok)
            fail(at(path, k), "unknown field");
    }
    return j;
}

inline const Json& field(const Json& j, const std::string& path, const char* key) {
    auto it = j.find(key);
    if (it == j.end())
        fail(path, std::string("missing field \"") + key + "\"");
    return *it;
}

inline Int integer(const Json& j, const std::string& path) {
    if (!j.is_number_integer())
        fail(path, "expected an integer");
    if (j.is_number_unsigned() && j.get<std::uint64_t>() > static_cast<std::uint64_t>(INT64_MAX))
        fail(path, "integer out of 64-bit range");
    return j.get<Int>();
}

inline std::size_t count(const Json& j, const std::string& path, std::size_t min = 0) {
    Int v = integer(j, path);
    if (v < static_cast<Int>(min))
        fail(path, "expected an integer >= " + std::to_string(min));
    return static_cast<std::size_t>(v);
}

inline std::string text(const Json& j, const std::string& path) {
    if (!j.is_string())
        fail(path, "expected a string");
    return j.get<std::string>();
}

inline const Json& array(const Json& j, const std::string& path) {
    if (!j.is_array())
        fail(path, "expected an array");
    return j;
}

inline IntMatrix matrix(const Json& j, const std::string& path) {
    array(j, path);
    std::vector<std::vector<Int>> rows;
    for (std::size_t i = 0; i < j.size(); ++i) {
        array(j[i], at(path, i));
        std::vector<Int> row;
        for (std::size_t c = 0; c < j[i].size(); ++c)
            row.push_back(integer(j[i][c], at(at(path, i), c)));
        if (!rows.empty() && row.size() != rows[0].size())
            fail(at(path, i), "ragged matrix row");
        rows.push_back(std::move(row));
    }
    if (rows.empty() || rows.size() != rows[0].size())
        fail(path, "expected a nonempty square matrix");
    return IntMatrix::from_rows(rows);
}

inline FiniteGroupSpec finite_group(const Json& j, const std::string& path) {
    object(j, path, {"cyclic", "symmetric", "table", "names"});
    FiniteGroupSpec g;
    if (j.contains("cyclic")) {
        g.preset = "cyclic";
        g.n = count(j["cyclic"], at(path, "cyclic"), 1);
    } else if (j.contains("symmetric")) {
        g.preset = "symmetric";
        g.n = count(j["symmetric"], at(path, "symmetric"), 1);
        if (g.n > 5)
            fail(at(path, "symmetric"), "symmetric groups above S5 exceed the subgroup search bound");
    } else if (j.contains("table")) {
        g.preset = "table";
        const auto& t = array(j["table"], at(path, "table"));
        for (std::size_t i = 0; i < t.size(); ++i) {
            array(t[i], at(at(path, "table"), i));
            std::vector<std::size_t> row;
            for (std::size_t c = 0; c < t[i].size(); ++c)
                row.push_back(count(t[i][c], at(at(at(path, "table"), i), c)));
            g.table.push_back(std::move(row));
        }
        if (j.contains("names"))
            for (std::size_t i = 0; i < array(j["names"], at(path, "names")).size(); ++i)
                g.names.push_back(text(j["names"][i], at(at(path, "names"), i)));
    } else {
        fail(path, "finite group needs one of \"cyclic\", \"symmetric\", \"table\"");
    }
    if (j.size() > (j.contains("names") ? 2u : 1u))
        fail(path, "finite group takes exactly one of \"cyclic\", \"symmetric\", \"table\"");
    try {
        g.build();
    } catch (const std::invalid_argument& e) {
        fail(path, e.what());
    }
    return g;
}

inline GroupSpec group(const Json& j, const std::string& path) {
    object(j, path, {"kind", "rank", "radius", "group"});
    GroupSpec g;
    g.kind = text(field(j, path, "kind"), at(path, "kind"));
    if (g.kind == "free_abelian") {
        object(j, path, {"kind", "rank"});
        g.rank = count(field(j, path, "rank"), at(path, "rank"), 1);
    } else if (g.kind == "finite") {
        object(j, path, {"kind", "group"});
        g.finite = finite_group(field(j, path, "group"), at(path, "group"));
    } else if (g.kind == "free") {
        g.rank = count(field(j, path, "rank"), at(path, "rank"), 1);
        g.radius = count(field(j, path, "radius"), at(path, "radius"), 1);
        if (g.rank > 26)
            fail(at(path, "rank"), "free rank above 26 has no letter names");
    } else {
        fail(at(path, "kind"), "expected \"free_abelian\", \"finite\" or \"free\"");
    }
    return g;
}

inline GroupWord word(const Json& j, const std::string& path, const GroupModel& model) {
    try {
        GroupWord w;
        if (model.is_free_abelian()) {
            array(j, path);
            AbelianVector v;
            for (std::size_t i = 0; i < j.size(); ++i)
                v.coords.push_back(integer(j[i], at(path, i)));
            w = v;
        } else if (model.is_finite()) {
            if (j.is_string()) {
                const auto& names = model.finite_group().names();
                auto it = std::find(names.begin(), names.end(), j.get<std::string>());
                if (it == names.end())
                    fail(path, "no group element named \"" + j.get<std::string>() + "\"");
                w = FiniteElement{static_cast<std::size_t>(it - names.begin())};
            } else {
                w = FiniteElement{count(j, path)};
            }
        } else {
            w = parse_free_word(text(j, path), model.rank());
        }
        model.check_word(w);
        return w;
    } catch (const ScenarioError&) {
        throw;
    } catch (const std::invalid_argument& e) {
        fail(path, e.what());
    }
}

inline Endomorphism endomorphism(const Json& j, const std::string& path, const GroupModel& model) {
    try {
        Endomorphism e;
        if (model.is_free_abelian()) {
            e = MatrixEndo{matrix(j, path)};
        } else if (model.is_finite()) {
            array(j, path);
            IndexMapEndo m;
            for (std::size_t i = 0; i < j.size(); ++i)
                m.images.push_back(count(j[i], at(path, i)));
            e = m;
        } else {
            array(j, path);
            GeneratorImagesEndo g;
            for (std::size_t i = 0; i < j.size(); ++i)
                g.images.push_back(parse_free_word(text(j[i], at(path, i)), model.rank()));
            e = g;
        }
        model.check_endomorphism(e);
        return e;
    } catch (const ScenarioError&) {
        throw;
    } catch (const std::invalid_argument& e) {
        fail(path, e.what());
    }
}

inline FixedPointRecord record(const Json& j, const std::string& path, const GroupModel& model) {
    object(j, path, {"id", "index", "class_word", "orbit"});
    FixedPointRecord r;
    r.id = text(field(j, path, "id"), at(path, "id"));
    r.index = integer(field(j, path, "index"), at(path, "index"));
    r.class_word = word(field(j, path, "class_word"), at(path, "class_word"), model);
    if (j.contains("orbit"))
        for (std::size_t i = 0; i < array(j["orbit"], at(path, "orbit")).size(); ++i)
            r.orbit_labels.push_back(text(j["orbit"][i], at(at(path, "orbit"), i)));
    return r;
}

inline ActionSpec action(const Json& j, const std::string& path, const GroupModel& model) {
    object(j, path, {"kind", "order", "images", "generator", "maps"});
    ActionSpec a;
    a.kind = text(field(j, path, "kind"), at(path, "kind"));
    if (j.contains("order"))
        a.order = count(j["order"], at(path, "order"), 1);
    if (a.kind == "trivial") {
        object(j, path, {"kind", "order"});
    } else if (a.kind == "endomorphism") {
        object(j, path, {"kind", "order", "images", "generator"});
        a.images = endomorphism(field(j, path, "images"), at(path, "images"), model);
        if (j.contains("generator"))
            a.generator = count(j["generator"], at(path, "generator"));
    } else if (a.kind == "permutation") {
        object(j, path, {"kind", "order", "maps"});
        const std::string mp = at(path, "maps");
        const auto& maps = array(field(j, path, "maps"), mp);
        for (std::size_t g = 0; g < maps.size(); ++g) {
            std::vector<std::pair<GroupWord, GroupWord>> m;
            const auto& pairs = array(maps[g], at(mp, g));
            for (std::size_t i = 0; i < pairs.size(); ++i) {
                const std::string pp = at(at(mp, g), i);
                if (!pairs[i].is_array() || pairs[i].size() != 2)
                    fail(pp, "expected a [from, to] pair of class words");
                m.emplace_back(word(pairs[i][0], at(pp, 0), model), word(pairs[i][1], at(pp, 1), model));
            }
            a.maps.push_back(std::move(m));
        }
    } else {
        fail(at(path, "kind"), "expected \"trivial\", \"endomorphism\" or \"permutation\"");
    }
    return a;
}

inline ComponentSpec component(const Json& j, const std::string& path, std::initializer_list<const char*> allowed) {
    object(j, path, allowed);
    ComponentSpec c;
    c.group = group(field(j, path, "group"), at(path, "group"));
    GroupModel model = c.group.build();
    c.phi = endomorphism(field(j, path, "phi"), at(path, "phi"), model);
    if (j.contains("records"))
        for (std::size_t i = 0; i < array(j["records"], at(path, "records")).size(); ++i)
            c.records.push_back(record(j["records"][i], at(at(path, "records"), i), model));
    if (j.contains("action"))
        c.action = action(j["action"], at(path, "action"), model);
    return c;
}

inline Body body(const Json& j, const std::string& kind) {
    const std::string root = "$";
    if (kind == "torus") {
        object(j, root, {"kind", "description", "matrix", "n"});
        TorusSpec t{matrix(field(j, root, "matrix"), "$.matrix"), std::nullopt};
        if (j.contains("n"))
            t.n = count(j["n"], "$.n", 1);
        return t;
    }
    if (kind == "presentation") {
        object(j, root, {"kind", "description", "group", "phi", "records", "action"});
        PresentationSpec p;
        p.component = component(j, root, {"kind", "description", "group", "phi", "records", "action"});
        p.has_action = j.contains("action");
        return p;
    }
    if (kind == "periodic") {
        object(j, root, {"kind", "description", "n", "components"});
        PeriodicSpec p;
        p.n = count(field(j, root, "n"), "$.n", 1);
        const auto& comps = array(field(j, root, "components"), "$.components");
        std::set<std::size_t> seen;
        for (std::size_t i = 0; i < comps.size(); ++i) {
            const std::string path = at("$.components", i);
            ComponentSpec c = component(comps[i], path, {"l", "group", "phi", "records", "action"});
            c.l = count(field(comps[i], path, "l"), at(path, "l"), 1);
            if (p.n % c.l != 0)
                fail(at(path, "l"), "l = " + std::to_string(c.l) + " does not divide n = " + std::to_string(p.n));
            if (!seen.insert(c.l).second)
                fail(at(path, "l"), "duplicate component for divisor l = " + std::to_string(c.l));
            p.components.push_back(std::move(c));
        }
        for (std::size_t l : divisors(p.n))
            if (!seen.count(l))
                fail("$.components", "missing component for divisor l = " + std::to_string(l));
        return p;
    }
    if (kind == "equivariant") {
        object(j, root, {"kind", "description", "group", "subgroups"});
        EquivariantSpec e;
        e.group = finite_group(field(j, root, "group"), "$.group");
        const auto& subs = array(field(j, root, "subgroups"), "$.subgroups");
        for (std::size_t i = 0; i < subs.size(); ++i) {
            const std::string path = at("$.subgroups", i);
            object(subs[i], path, {"elements", "components"});
            SubgroupSpec s;
            const auto& el = array(field(subs[i], path, "elements"), at(path, "elements"));
            for (std::size_t k = 0; k < el.size(); ++k)
                s.elements.push_back(count(el[k], at(at(path, "elements"), k)));
            if (subs[i].contains("components")) {
                const auto& cs = array(subs[i]["components"], at(path, "components"));
                for (std::size_t k = 0; k < cs.size(); ++k) {
                    const std::string cp = at(at(path, "components"), k);
                    ComponentSpec c = component(cs[k], cp, {"name", "group", "phi", "records", "action"});
                    c.name = text(field(cs[k], cp, "name"), at(cp, "name"));
                    s.components.push_back(std::move(c));
                }
            }
            e.subgroups.push_back(std::move(s));
        }
        return e;
    }
    if (kind == "gap") {
        object(j, root, {"kind", "description", "strata", "inclusions", "fuller"});
        GapSpec g;
        if (j.contains("fuller")) {
            if (j.contains("strata") || j.contains("inclusions"))
                fail("$.fuller", "give either \"fuller\" or explicit strata, not both");
            const auto& f = object(j["fuller"], "$.fuller", {"dim", "n"});
            g.fuller = FullerGapSpec{integer(field(f, "$.fuller", "dim"), "$.fuller.dim"),
                                     count(field(f, "$.fuller", "n"), "$.fuller.n", 1)};
            return g;
        }
        const auto& st = array(field(j, root, "strata"), "$.strata");
        for (std::size_t i = 0; i < st.size(); ++i) {
            const std::string path = at("$.strata", i);
            object(st[i], path, {"name", "dim"});
            g.strata.push_back(Stratum{text(field(st[i], path, "name"), at(path, "name")),
                                       integer(field(st[i], path, "dim"), at(path, "dim"))});
        }
        if (j.contains("inclusions")) {
            const auto& inc = array(j["inclusions"], "$.inclusions");
            for (std::size_t i = 0; i < inc.size(); ++i) {
                const std::string path = at("$.inclusions", i);
                object(inc[i], path, {"smaller", "larger"});
                g.inclusions.push_back(Inclusion{text(field(inc[i], path, "smaller"), at(path, "smaller")),
                                                 text(field(inc[i], path, "larger"), at(path, "larger"))});
            }
        }
        return g;
    }
    fail("$.kind", "unknown scenario kind \"" + kind + "\"");
}

} // namespace detail

inline Scenario from_json(const Json& j) {
    detail::reject_floats(j, "$");
    detail::object(j, "$", {"kind", "description", "matrix", "n", "group", "phi", "records", "action", "components",
                            "subgroups", "strata", "inclusions", "fuller"});
    Scenario s;
    const std::string kind = detail::text(detail::field(j, "$", "kind"), "$.kind");
    if (j.contains("description"))
        s.description = detail::text(j["description"], "$.description");
    s.body = detail::body(j, kind);
    return s;
}

inline Scenario parse_scenario(const std::string& text) {
    Json j;
    try {
        j = Json::parse(text);
    } catch (const Json::parse_error& e) {
        throw ScenarioError(std::string("JSON syntax: ") + e.what());
    }
    return from_json(j);
}

// ---------------------------------------------------------------- serializing

namespace detail {

inline Json finite_group_json(const FiniteGroupSpec& g) {
    if (g.preset == "cyclic")
        return {{"cyclic", g.n}};
    if (g.preset == "symmetric")
        return {{"symmetric", g.n}};
    Json j{{"table", g.table}};
    if (!g.names.empty())
        j["names"] = g.names;
    return j;
}

inline Json group_json(const GroupSpec& g) {
    if (g.kind == "free_abelian")
        return {{"kind", g.kind}, {"rank", g.rank}};
    if (g.kind == "finite")
        return {{"kind", g.kind}, {"group", finite_group_json(g.finite)}};
    return {{"kind", g.kind}, {"rank", g.rank}, {"radius", g.radius}};
}

inline Json word_json(const GroupWord& w) {
    if (auto* v = std::get_if<AbelianVector>(&w))
        return v->coords;
    if (auto* e = std::get_if<FiniteElement>(&w))
        return e->index;
    return format_free_word(std::get<FreeWord>(w));
}

inline Json endo_json(const Endomorphism& e) {
    if (auto* m = std::get_if<MatrixEndo>(&e))
        return m->matrix.to_rows();
    if (auto* i = std::get_if<IndexMapEndo>(&e))
        return i->images;
    Json out = Json::array();
    for (const auto& w : std::get<GeneratorImagesEndo>(e).images)
        out.push_back(format_free_word(w));
    return out;
}

inline Json action_json(const ActionSpec& a) {
    Json j{{"kind", a.kind}};
    if (a.order)
        j["order"] = *a.order;
    if (a.kind == "endomorphism") {
        j["images"] = endo_json(a.images);
        j["generator"] = a.generator;
    }
    if (a.kind == "permutation") {
        Json maps = Json::array();
        for (const auto& m : a.maps) {
            Json pairs = Json::array();
            for (const auto& [from, to] : m)
                pairs.push_back(Json::array({word_json(from), word_json(to)}));
            maps.push_back(pairs);
        }
        j["maps"] = maps;
    }
    return j;
}

inline Json record_json(const FixedPointRecord& r) {
    Json j{{"id", r.id}, {"index", r.index}, {"class_word", word_json(r.class_word)}};
    if (!r.orbit_labels.empty())
        j["orbit"] = r.orbit_labels;
    return j;
}

inline void component_fields(Json& j, const ComponentSpec& c, bool with_action) {
    j["group"] = group_json(c.group);
    j["phi"] = endo_json(c.phi);
    Json recs = Json::array();
    for (const auto& r : c.records)
        recs.push_back(record_json(r));
    j["records"] = recs;
    if (with_action)
        j["action"] = action_json(c.action);
}

} // namespace detail

inline Json to_json(const Scenario& s) {
    using namespace detail;
    Json j{{"kind", s.kind()}};
    if (!s.description.empty())
        j["description"] = s.description;
    std::visit(
        [&](const auto& b) {
            using T = std::decay_t<decltype(b)>;
            if constexpr (std::is_same_v<T, TorusSpec>) {
                j["matrix"] = b.matrix.to_rows();
                if (b.n)
                    j["n"] = *b.n;
            } else if constexpr (std::is_same_v<T, PresentationSpec>) {
                component_fields(j, b.component, b.has_action);
            } else if constexpr (std::is_same_v<T, PeriodicSpec>) {
                j["n"] = b.n;
                Json comps = Json::array();
                for (const auto& c : b.components) {
                    Json cj{{"l", c.l}};
                    component_fields(cj, c, true);
                    comps.push_back(cj);
                }
                j["components"] = comps;
            } else if constexpr (std::is_same_v<T, EquivariantSpec>) {
                j["group"] = finite_group_json(b.group);
                Json subs = Json::array();
                for (const auto& sg : b.subgroups) {
                    Json comps = Json::array();
                    for (const auto& c : sg.components) {
                        Json cj{{"name", c.name}};
                        component_fields(cj, c, true);
                        comps.push_back(cj);
                    }
                    subs.push_back(Json{{"elements", sg.elements}, {"components", comps}});
                }
                j["subgroups"] = subs;
            } else {
                if (b.fuller) {
                    j["fuller"] = Json{{"dim", b.fuller->dim}, {"n", b.fuller->n}};
                } else {
                    Json st = Json::array(), inc = Json::array();
                    for (const auto& x : b.strata)
                        st.push_back(Json{{"name", x.name}, {"dim", x.dim}});
                    for (const auto& x : b.inclusions)
                        inc.push_back(Json{{"smaller", x.smaller}, {"larger", x.larger}});
                    j["strata"] = st;
                    j["inclusions"] = inc;
                }
            }
        },
        s.body);
    return j;
}

inline std::string serialize_scenario(const Scenario& s) { return to_json(s).dump(2) + "\n"; }

// ---------------------------------------------------------------- building

namespace detail {

// an endomorphism action also records rho on the class set, so its orbit classes are available
inline std::shared_ptr<const ReidemeisterClassSet> build_classes(const ComponentSpec& c) {
    std::optional<Endomorphism> rho;
    if (c.action.kind == "endomorphism")
        rho = c.action.images;
    return std::make_shared<const ReidemeisterClassSet>(c.group.build(), c.phi, ExtraRelations::TwistedOnly, rho);
}

/// The action of `group` described by `spec`, checked against the group order.
inline ClassAction build_action(const ActionSpec& spec, const FiniteGroup& group,
                                const std::shared_ptr<const ReidemeisterClassSet>& classes, const std::string& where) {
    if (spec.order && *spec.order != group.order())
        throw ScenarioError(where + ": action order " + std::to_string(*spec.order) + " but the acting group has order " +
                            std::to_string(group.order()));
    if (spec.kind == "trivial")
        return ClassAction::trivial(group);
    if (spec.kind == "endomorphism") {
        // element generator^k acts as rho^k
        std::vector<std::size_t> power_of(group.order(), group.order());
        std::size_t p = 0;
        for (std::size_t k = 0; k < group.order(); ++k) {
            if (power_of[p] != group.order())
                break;
            power_of[p] = k;
            p = group.mul(p, spec.generator % std::max<std::size_t>(group.order(), 1));
        }
        for (auto k : power_of)
            if (k == group.order())
                throw ScenarioError(where + ": element " + std::to_string(spec.generator) +
                                    " does not generate the acting group");
        auto base = ClassAction::from_endomorphism(classes, spec.images, group.order());
        return ClassAction(group, [base, power_of](std::size_t g, const ClassId& c) { return base.apply(power_of.at(g), c); });
    }
    if (spec.maps.size() != group.order())
        throw ScenarioError(where + ": permutation action needs " + std::to_string(group.order()) +
                            " maps, one per group element");
    std::vector<std::map<ClassId, ClassId>> maps(group.order());
    for (std::size_t g = 0; g < spec.maps.size(); ++g)
        for (const auto& [from, to] : spec.maps[g]) {
            auto a = classes->class_of(from), b = classes->class_of(to);
            if (!a || !b)
                throw ScenarioError(where + ": permutation names a class word outside the search radius");
            maps[g][*a] = *b;
        }
    return ClassAction::from_permutations(group, std::move(maps));
}

} // namespace detail

// ---------------------------------------------------------------- reports

struct Report {
    Json json;
    std::vector<std::string> failed_checks;
    bool ok() const { return failed_checks.empty(); }
};

namespace detail {

inline std::string class_label(const ReidemeisterClassSet& classes, const ClassId& c) {
    const auto& m = classes.model();
    if (m.is_free_abelian())
        return format_class_id(c);
    if (m.is_finite())
        return m.finite_group().names().at(static_cast<std::size_t>(c.key.at(0)));
    return format_word(classes.representative(c));
}

inline Json trace_json(const Trace& t, const std::vector<FixedPointRecord>& records,
                       const ReidemeisterClassSet& classes) {
    Json out = Json::array();
    for (const auto& [c, v] : t.coefficients()) {
        Json pts = Json::array();
        for (const auto& r : records)
            if (classes.class_of(r.class_word) == std::optional<ClassId>(c))
                pts.push_back(r.id);
        out.push_back(Json{{"class", class_label(classes, c)}, {"coefficient", v}, {"points", pts}});
    }
    return out;
}

inline Json reduced_json(const ReducedTrace& r, const ClassAction& action, const ReidemeisterClassSet& classes) {
    Json out = Json::array();
    for (const auto& [c, v] : r.orbit_coefficients) {
        Json orbit = Json::array();
        for (const auto& x : action.orbit(c))
            orbit.push_back(class_label(classes, x));
        out.push_back(Json{{"orbit", orbit}, {"size", r.orbit_sizes.at(c)}, {"coefficient", v}});
    }
    return out;
}

inline bool has_nontrivial_orbit(const ReducedTrace& r) {
    for (const auto& [c, s] : r.orbit_sizes)
        if (s > 1)
            return true;
    return false;
}

inline void check(Report& rep, Json& checks, const std::string& name, bool ok) {
    checks[name] = ok;
    if (!ok)
        rep.failed_checks.push_back(name);
}

inline const char* kCoinvariantNote =
    "orbit coefficients are |orbit| x index: each orbit term sums the coefficients of its classes";

inline Json periodic_json(Report& rep, Json& checks, Json& notes, const PeriodicObstruction& ob,
                          const std::vector<ClassAction>& actions, const std::map<std::size_t, std::size_t>& nielsen) {
    Json comps = Json::array();
    bool orbit_constant = true, conclusive = true, merged = false;
    for (std::size_t i = 0; i < ob.components.size(); ++i) {
        const auto& c = ob.components[i];
        orbit_constant &= c.orbit_constant;
        conclusive &= c.trace.conclusive();
        merged |= has_nontrivial_orbit(c.reduced);
        Json cj{{"l", c.l},
                {"k", c.k},
                {"nielsen", c.nielsen()},
                {"count", c.count},
                {"orbit_constant", c.orbit_constant},
                {"trace", trace_json(c.trace, c.records, *c.classes)},
                {"reduced", reduced_json(c.reduced, actions[i], *c.classes)},
                {"unresolved", c.trace.unresolved()}};
        comps.push_back(cj);
    }
    auto conj = conjecture_comparison(ob, nielsen);
    Json rows = Json::array();
    for (const auto& r : conj.rows) {
        rows.push_back(Json{{"l", r.l},
                            {"k", r.k},
                            {"count", r.reduced_count},
                            {"nielsen", r.nielsen},
                            {"equal", r.equal},
                            {"biconditional", r.biconditional}});
        if (r.reduced_count < r.nielsen)
            notes.push_back("l = " + std::to_string(r.l) + ": " + std::to_string(r.reduced_count) +
                            " nonzero orbit terms against N(f^l) = " + std::to_string(r.nielsen) +
                            "; the count is strictly smaller than the Nielsen number");
    }
    if (merged)
        notes.push_back(kCoinvariantNote);
    check(rep, checks, "biconditional", conj.biconditional_holds());
    check(rep, checks, "orbit_constant", orbit_constant);
    check(rep, checks, "conclusive", conclusive);
    return Json{{"n", ob.n}, {"components", comps}, {"conjecture", rows}, {"vanishes", ob.vanishes()}};
}

inline void run_torus(Report& rep, Json& out, Json& checks, Json& notes, const TorusSpec& t) {
    TorusMap f(t.matrix);
    auto fp = torus_fixed_points(f);
    out["lefschetz"] = fp.lefschetz;
    out["generic"] = fp.generic;
    if (!fp.generic) {
        notes.push_back("det(I - A) = 0: fixed points are not isolated, no trace computed");
        if (t.n)
            throw Degenerate("iterate l = 1 has det(I - A^l) = 0");
        return;
    }
    Json pts = Json::array();
    for (const auto& p : fp.points)
        pts.push_back(format_point(p));
    out["fixed_points"] = pts;
    auto tt = torus_trace(f);
    out["trace"] = trace_json(tt.trace, tt.records, *tt.classes);
    out["nielsen"] = tt.nielsen;
    out["classes"] = Json{{"count", *tt.classes->class_count()}};
    std::vector<Int> factors;
    for (Int d : tt.classes->smith().diagonal())
        if (d > 1)
            factors.push_back(d);
    out["classes"]["invariant_factors"] = factors;
    const std::size_t abs_l = static_cast<std::size_t>(fp.lefschetz < 0 ? -fp.lefschetz : fp.lefschetz);
    check(rep, checks, "bijection", torus_class_bijection_check(f));
    check(rep, checks, "nielsen_equals_abs_lefschetz", tt.nielsen == abs_l && fp.points.size() == abs_l);
    if (t.n) {
        auto ob = periodic_obstruction_torus(f, *t.n);
        std::vector<ClassAction> actions;
        for (const auto& c : ob.components)
            actions.push_back(ClassAction::from_endomorphism(c.classes, f.induced(), c.l));
        out["periodic"] = periodic_json(rep, checks, notes, ob, actions, torus_iterate_nielsen_numbers(f, *t.n));
    }
}

inline void run_presentation(Report& rep, Json& out, Json& checks, Json& notes, const PresentationSpec& p) {
    const auto& c = p.component;
    auto classes = build_classes(c);
    Trace t = reidemeister_trace(c.records, *classes);
    out["trace"] = trace_json(t, c.records, *classes);
    out["nielsen"] = nielsen_number(t);
    out["unresolved"] = t.unresolved();
    check(rep, checks, "conclusive", t.conclusive());
    if (p.has_action) {
        FiniteGroup g = FiniteGroup::cyclic(c.action.order.value_or(1));
        auto action = build_action(c.action, g, classes, "$.action");
        std::vector<ClassId> support;
        for (const auto& [id, v] : t.coefficients())
            support.push_back(id);
        if (!action.satisfies_laws(support))
            throw ScenarioError("$.action: class action violates the group action laws");
        auto r = reduce_trace(t, action);
        out["reduced"] = reduced_json(r, action, *classes);
        out["reduced_count"] = r.nonzero_terms();
        check(rep, checks, "orbit_constant", check_orbit_index_constancy(t, action));
        check(rep, checks, "vanishing_equivalence", vanishing_equivalence(t, action));
        if (has_nontrivial_orbit(r))
            notes.push_back(kCoinvariantNote);
    }
}

inline void run_periodic(Report& rep, Json& out, Json& checks, Json& notes, const PeriodicSpec& p) {
    std::vector<PeriodicComponentInput> inputs;
    std::vector<ClassAction> actions;
    for (std::size_t i = 0; i < p.components.size(); ++i) {
        const auto& c = p.components[i];
        auto classes = build_classes(c);
        auto action = build_action(c.action, FiniteGroup::cyclic(c.l), classes,
                                   "$.components[" + std::to_string(i) + "].action");
        inputs.push_back(PeriodicComponentInput{c.l, classes, c.records, action});
    }
    auto ob = periodic_obstruction_presentation(p.n, inputs);
    std::map<std::size_t, std::size_t> nielsen;
    for (const auto& c : ob.components) {
        nielsen[c.l] = c.nielsen();
        for (const auto& in : inputs)
            if (in.l == c.l)
                actions.push_back(in.action);
    }
    out["periodic"] = periodic_json(rep, checks, notes, ob, actions, nielsen);
}

inline void run_equivariant(Report& rep, Json& out, Json& checks, Json& notes, const EquivariantSpec& e) {
    FiniteGroup g = e.group.build();
    auto classes = subgroup_conjugacy_classes(g);
    struct Built {
        std::shared_ptr<const ReidemeisterClassSet> classes;
        const ComponentSpec* spec;
        ClassAction action;
    };
    std::vector<SubgroupInput> data;
    std::map<std::pair<std::size_t, std::string>, Built> built; // (lattice class, component name)
    for (std::size_t i = 0; i < e.subgroups.size(); ++i) {
        const auto& s = e.subgroups[i];
        const std::string path = "$.subgroups[" + std::to_string(i) + "]";
        if (!is_subgroup(g, s.elements))
            throw ScenarioError(path + ".elements: not a subgroup");
        std::size_t idx = *find_subgroup_class(classes, s.elements);
        SubgroupInput in{s.elements, {}};
        for (std::size_t k = 0; k < s.components.size(); ++k) {
            const auto& c = s.components[k];
            auto cs = build_classes(c);
            auto action = build_action(c.action, classes[idx].weyl, cs,
                                       path + ".components[" + std::to_string(k) + "].action");
            built.insert_or_assign({idx, c.name}, Built{cs, &c, action});
            in.components.push_back(FixedComponentInput{c.name, cs, c.records, action});
        }
        data.push_back(std::move(in));
    }
    auto inv = assemble_equivariant_invariant(g, data);
    auto verdict = invariant_vanishes(inv);
    Json summands = Json::array();
    bool merged = false;
    for (std::size_t i = 0; i < inv.summands.size(); ++i) {
        const auto& s = inv.summands[i];
        Json comps = Json::array();
        for (const auto& c : s.components) {
            const Built& b = built.at({i, c.name});
            merged |= has_nontrivial_orbit(c.reduced);
            comps.push_back(Json{{"name", c.name},
                                 {"nielsen", nielsen_number(c.trace)},
                                 {"trace", trace_json(c.trace, b.spec->records, *b.classes)},
                                 {"reduced", reduced_json(c.reduced, b.action, *b.classes)},
                                 {"reduced_count", c.reduced.nonzero_terms()}});
        }
        summands.push_back(Json{{"subgroup", s.subgroup.representative},
                                {"conjugates", s.subgroup.conjugates.size()},
                                {"weyl_order", s.subgroup.weyl.order()},
                                {"nielsen", s.nielsen()},
                                {"components", comps}});
    }
    if (merged)
        notes.push_back(kCoinvariantNote);
    out["group_order"] = g.order();
    out["summands"] = summands;
    out["vanishes"] = verdict.vanishes;
    out["per_class_nielsen"] = verdict.per_class_nielsen;
    check(rep, checks, "vanishing_equivalence", true); // invariant_vanishes throws on disagreement
}

inline void run_gap(Json& out, const GapSpec& g) {
    auto [strata, inclusions] = g.fuller ? fuller_strata(g.fuller->dim, g.fuller->n)
                                         : std::make_pair(g.strata, g.inclusions);
    auto rep = gap_condition_report(strata, inclusions);
    Json st = Json::array();
    for (const auto& s : rep.strata) {
        Json codim = Json::array();
        for (const auto& c : s.codim)
            codim.push_back(Json{{"smaller", c.smaller}, {"dim_smaller", c.dim_smaller}, {"ok", c.ok}});
        st.push_back(Json{{"name", s.name}, {"dim", s.dim}, {"min_dim", s.min_dim}, {"codim", codim}});
    }
    out["strata"] = st;
    out["pass"] = rep.pass();
}

} // namespace detail

/// Evaluates a scenario. Library errors propagate; failed internal
/// consistency checks are listed in the report.
inline Report run(const Scenario& s) {
    Report rep;
    Json out{{"kind", s.kind()}, {"scenario", to_json(s)}};
    Json checks = Json::object();
    Json notes = Json::array();
    std::visit(
        [&](const auto& b) {
            using T = std::decay_t<decltype(b)>;
            if constexpr (std::is_same_v<T, TorusSpec>)
                detail::run_torus(rep, out, checks, notes, b);
            else if constexpr (std::is_same_v<T, PresentationSpec>)
                detail::run_presentation(rep, out, checks, notes, b);
            else if constexpr (std::is_same_v<T, PeriodicSpec>)
                detail::run_periodic(rep, out, checks, notes, b);
            else if constexpr (std::is_same_v<T, EquivariantSpec>)
                detail::run_equivariant(rep, out, checks, notes, b);
            else
                detail::run_gap(out, b);
        },
        s.body);
    out["checks"] = checks;
    out["notes"] = notes;
    rep.json = std::move(out);
    return rep;
}

// ---------------------------------------------------------------- human output

namespace detail {

inline std::string terms(const Json& trace) {
    if (trace.empty())
        return "0";
    std::string s;
    for (const auto& t : trace) {
        Int v = t["coefficient"].get<Int>();
        std::string cls = t.contains("class") ? t["class"].get<std::string>() : [&] {
            std::string o = "{";
            for (std::size_t i = 0; i < t["orbit"].size(); ++i)
                o += (i ? "," : "") + t["orbit"][i].get<std::string>();
            return o + "}";
        }();
        if (s.empty())
            s += (v < 0 ? "-" : "");
        else
            s += (v < 0 ? " - " : " + ");
        s += std::to_string(v < 0 ? -v : v) + "*" + cls;
    }
    return s;
}

inline void periodic_human(std::ostringstream& os, const Json& p) {
    os << "periodic obstruction, n = " << p["n"].get<std::size_t>() << "\n";
    for (const auto& c : p["components"]) {
        os << "  l = " << c["l"].get<std::size_t>() << " (k = " << c["k"].get<std::size_t>() << ")\n";
        os << "    R(f^l)   = " << terms(c["trace"]) << "\n";
        os << "    reduced  = " << terms(c["reduced"]) << "\n";
    }
    os << "  l    k    N_l  N(f^l)  equal  iff\n";
    for (const auto& r : p["conjecture"]) {
        char line[96];
        std::snprintf(line, sizeof line, "  %-4zu %-4zu %-4zu %-7zu %-6s %s\n", r["l"].get<std::size_t>(),
                      r["k"].get<std::size_t>(), r["count"].get<std::size_t>(), r["nielsen"].get<std::size_t>(),
                      r["equal"].get<bool>() ? "yes" : "no", r["biconditional"].get<bool>() ? "holds" : "FAILS");
        os << line;
    }
    os << "  obstruction " << (p["vanishes"].get<bool>() ? "vanishes" : "does not vanish") << "\n";
}

} // namespace detail

inline std::string format_human(const Report& rep) {
    const Json& j = rep.json;
    std::ostringstream os;
    const std::string kind = j["kind"];
    os << kind << " scenario";
    if (j["scenario"].contains("description"))
        os << ": " << j["scenario"]["description"].get<std::string>();
    os << "\n";
    if (kind == "torus") {
        os << "det(I - A) = " << j["lefschetz"].get<Int>() << "\n";
        if (j["generic"].get<bool>()) {
            os << "fixed points:";
            for (const auto& p : j["fixed_points"])
                os << " " << p.get<std::string>();
            os << "\nR(f) = " << detail::terms(j["trace"]) << "\nN(f) = " << j["nielsen"].get<std::size_t>() << "\n";
        }
        if (j.contains("periodic"))
            detail::periodic_human(os, j["periodic"]);
    } else if (kind == "presentation") {
        os << "R(f) = " << detail::terms(j["trace"]) << "\nN(f) = " << j["nielsen"].get<std::size_t>() << "\n";
        if (j.contains("reduced"))
            os << "reduced = " << detail::terms(j["reduced"]) << " (" << j["reduced_count"].get<std::size_t>()
               << " terms)\n";
        for (const auto& u : j["unresolved"])
            os << "unresolved record: " << u.get<std::string>() << "\n";
    } else if (kind == "periodic") {
        detail::periodic_human(os, j["periodic"]);
    } else if (kind == "equivariant") {
        os << "|G| = " << j["group_order"].get<std::size_t>() << "\n";
        for (const auto& s : j["summands"]) {
            os << "  (H) = {";
            for (std::size_t i = 0; i < s["subgroup"].size(); ++i)
                os << (i ? "," : "") << s["subgroup"][i].get<std::size_t>();
            os << "}  |WH| = " << s["weyl_order"].get<std::size_t>() << "  N = " << s["nielsen"].get<std::size_t>()
               << "\n";
            for (const auto& c : s["components"])
                os << "    " << c["name"].get<std::string>() << ": reduced = " << detail::terms(c["reduced"]) << "\n";
        }
        os << "invariant " << (j["vanishes"].get<bool>() ? "vanishes" : "does not vanish") << "\n";
    } else {
        os << "stratum  dim  dim>=3  codim>=2\n";
        for (const auto& s : j["strata"]) {
            bool codim = true;
            for (const auto& c : s["codim"])
                codim &= c["ok"].get<bool>();
            char line[96];
            std::snprintf(line, sizeof line, "%-8s %-4lld %-7s %s\n", s["name"].get<std::string>().c_str(),
                          static_cast<long long>(s["dim"].get<Int>()), s["min_dim"].get<bool>() ? "yes" : "no",
                          codim ? "yes" : "no");
            os << line;
        }
        os << "gap conditions " << (j["pass"].get<bool>() ? "hold" : "fail") << "\n";
    }
    for (const auto& [name, ok] : j["checks"].items())
        os << "check " << name << ": " << (ok.get<bool>() ? "ok" : "FAILED") << "\n";
    for (const auto& n : j["notes"])
        os << "note: " << n.get<std::string>() << "\n";
    return os.str();
}

inline std::string format_json(const Report& rep) { return rep.json.dump(2) + "\n"; }

} // namespace fixpt::scenario

#include "swarmstab/config_io.hpp"

#include <fstream>
#include <limits>
#include <set>
#include <sstream>

#include "swarmstab/errors.hpp"

namespace swarmstab {

namespace fs = std::filesystem;

namespace {

// Typed access to one JSON object; remembers which keys were read so that
// leftovers can be reported as unknown fields.
class Fields {
public:
    Fields(const Json& j, std::string where) : j_(j), where_(std::move(where)) {
        if (!j_.is_object()) throw ConfigError(where_, "expected a JSON object");
    }

    std::string path(const std::string& key) const { return where_.empty() ? key : where_ + "." + key; }

    bool has(const std::string& key) const { return j_.contains(key); }

    const Json* find(const std::string& key) {
        used_.insert(key);
        auto it = j_.find(key);
        return it == j_.end() ? nullptr : &*it;
    }

    const Json& require(const std::string& key) {
        const Json* v = find(key);
        if (!v) throw ConfigError(path(key), "is required");
        return *v;
    }

    void number(const std::string& key, double& out, bool required = false) {
        const Json* v = required ? &require(key) : find(key);
        if (v) out = as_number(*v, path(key));
    }

    void optional_number(const std::string& key, std::optional<double>& out) {
        const Json* v = find(key);
        if (!v) return;
        if (v->is_null()) out.reset();
        else out = as_number(*v, path(key));
    }

    void count(const std::string& key, std::size_t& out) {
        if (const Json* v = find(key)) out = static_cast<std::size_t>(as_unsigned(*v, path(key)));
    }

    void optional_count(const std::string& key, std::optional<std::size_t>& out) {
        const Json* v = find(key);
        if (!v) return;
        if (v->is_null()) out.reset();
        else out = static_cast<std::size_t>(as_unsigned(*v, path(key)));
    }

    void seed(const std::string& key, std::uint64_t& out) {
        if (const Json* v = find(key)) out = as_unsigned(*v, path(key));
    }

    void boolean(const std::string& key, bool& out) {
        const Json* v = find(key);
        if (!v) return;
        if (!v->is_boolean()) throw ConfigError(path(key), "expected true or false");
        out = v->get<bool>();
    }

    void string(const std::string& key, std::string& out, bool required = false) {
        const Json* v = required ? &require(key) : find(key);
        if (!v) return;
        if (!v->is_string()) throw ConfigError(path(key), "expected a string");
        out = v->get<std::string>();
    }

    /// A number broadcasts; an array is taken element-wise.
    void vector(const std::string& key, VectorX<double>& out) {
        const Json* v = find(key);
        if (v) out = as_vector(*v, path(key));
    }

    void optional_vector(const std::string& key, std::optional<VectorX<double>>& out) {
        const Json* v = find(key);
        if (!v) return;
        if (v->is_null()) out.reset();
        else out = as_vector(*v, path(key));
    }

    void done() const {
        for (const auto& item : j_.items())
            if (!used_.count(item.key())) throw ConfigError(path(item.key()), "unknown field");
    }

    static double as_number(const Json& v, const std::string& where) {
        if (!v.is_number()) throw ConfigError(where, "expected a number");
        return v.get<double>();
    }

    static std::uint64_t as_unsigned(const Json& v, const std::string& where) {
        if (v.is_number_unsigned()) return v.get<std::uint64_t>();
        if (v.is_number_integer()) {
            if (v.get<std::int64_t>() >= 0) return static_cast<std::uint64_t>(v.get<std::int64_t>());
            throw ConfigError(where, "must not be negative");
        }
        throw ConfigError(where, "expected a non-negative integer");
    }

    static VectorX<double> as_vector(const Json& v, const std::string& where) {
        if (v.is_number()) return VectorX<double>::Constant(1, v.get<double>());
        if (!v.is_array() || v.empty()) throw ConfigError(where, "expected a number or a non-empty array of numbers");
        VectorX<double> out(static_cast<Eigen::Index>(v.size()));
        for (std::size_t i = 0; i < v.size(); ++i)
            out(static_cast<Eigen::Index>(i)) = as_number(v[i], where + "[" + std::to_string(i) + "]");
        return out;
    }

private:
    const Json& j_;
    std::string where_;
    std::set<std::string> used_;
};

std::complex<double> complex_from_json(const Json& j, const std::string& where) {
    Fields f(j, where);
    double re = 0, im = 0;
    f.number("re", re, true);
    f.number("im", im, true);
    f.done();
    return {re, im};
}

Json complex_to_json(std::complex<double> z) { return Json{{"re", z.real()}, {"im", z.imag()}}; }

Json vector_to_json(const VectorX<double>& v) {
    Json a = Json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v(i));
    return a;
}

Json optional_to_json(const std::optional<double>& v) { return v ? Json(*v) : Json(nullptr); }

fs::path resolve(const fs::path& base_dir, const std::string& ref) {
    const fs::path p(ref);
    return p.is_absolute() ? p : base_dir / p;
}

DisturbanceKind parse_kind(const std::string& s, const std::string& where) {
    if (s == "step") return DisturbanceKind::step;
    if (s == "pulse") return DisturbanceKind::pulse;
    if (s == "initial_condition") return DisturbanceKind::initial_condition;
    throw ConfigError(where, "expected step, pulse or initial_condition (got '" + s + "')");
}

std::string kind_name(DisturbanceKind k) {
    switch (k) {
        case DisturbanceKind::step: return "step";
        case DisturbanceKind::pulse: return "pulse";
        case DisturbanceKind::initial_condition: return "initial_condition";
    }
    return "step";
}

void read_baseline(const Json& j, const std::string& where, PidGains& pid, StabilizerParams& stab) {
    Fields f(j, where);
    if (!f.has("pid") && !f.has("stabilizer")) throw ConfigError(where, "needs pid or stabilizer");
    if (const Json* p = f.find("pid")) pid = pid_from_json(*p, f.path("pid"));
    if (const Json* st = f.find("stabilizer")) stab = stabilizer_from_json(*st, f.path("stabilizer"));
    f.done();
}

}  // namespace

Algorithm parse_algorithm(const std::string& s) {
    if (s == "pso") return Algorithm::pso;
    if (s == "bfo") return Algorithm::bfo;
    if (s == "none") return Algorithm::none;
    throw ConfigError("optimizer", "expected pso, bfo or none (got '" + s + "')");
}

std::string to_string(Algorithm a) {
    switch (a) {
        case Algorithm::pso: return "pso";
        case Algorithm::bfo: return "bfo";
        case Algorithm::none: return "none";
    }
    return "none";
}

BfoConfig tuning_bfo_defaults() {
    BfoConfig c;
    c.s_pop = 10;
    c.n_c = 20;
    c.n_s = 3;
    c.n_re = 2;
    c.n_ed = 2;
    c.p_ed = 0.25;
    c.step_size.resize(decision_dim);
    c.step_size << 2.0, 5.0, 0.5, 2.0, 0.02, 0.02;
    c.max_evaluations = 2000;
    return c;
}

Json read_json_file(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError(path.string(), "cannot open file");
    try {
        return Json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw ConfigError(path.string(), std::string("invalid JSON: ") + e.what());
    }
}

// ---------------------------------------------------------------------------
// Readers

PlantConfig plant_from_json(const Json& j, const std::string& where) {
    PlantConfig c;
    Fields f(j, where);
    f.string("name", c.name);

    Fields m(f.require("machine"), f.path("machine"));
    auto& mc = c.machine;
    for (auto [key, ref] : {std::pair<const char*, double*>{"m_inertia", &mc.m_inertia}, {"d_damping", &mc.d_damping},
                            {"omega_b", &mc.omega_b}, {"t_do_prime", &mc.t_do_prime}, {"k1", &mc.k1}, {"k2", &mc.k2},
                            {"k3", &mc.k3}, {"k4", &mc.k4}, {"k5", &mc.k5}, {"k6", &mc.k6}})
        m.number(key, *ref, true);
    m.done();

    Fields e(f.require("exciter"), f.path("exciter"));
    e.number("ka", c.exciter.ka, true);
    e.number("ta", c.exciter.ta, true);
    e.done();

    Fields s(f.require("statcom"), f.path("statcom"));
    auto& st = c.statcom;
    for (auto [key, ref] : {std::pair<const char*, double*>{"k7", &st.k7}, {"k8", &st.k8}, {"k9", &st.k9},
                            {"kp_dc", &st.kp_dc}, {"kq_dc", &st.kq_dc}, {"kv_dc", &st.kv_dc}, {"kp_c", &st.kp_c},
                            {"kq_c", &st.kq_c}, {"kv_c", &st.kv_c}, {"kd_c", &st.kd_c}, {"kp_phi", &st.kp_phi},
                            {"kq_phi", &st.kq_phi}, {"kv_phi", &st.kv_phi}, {"kd_phi", &st.kd_phi},
                            {"c_dc", &st.c_dc}, {"c_ratio", &st.c_ratio}, {"v_dc0", &st.v_dc0}, {"phi0", &st.phi0}})
        s.number(key, *ref, true);
    s.done();

    if (const Json* nj = f.find("network")) {
        Fields n(*nj, f.path("network"));
        if (const Json* z = n.find("z1")) c.network.z1 = complex_from_json(*z, n.path("z1"));
        if (const Json* z = n.find("z2")) c.network.z2 = complex_from_json(*z, n.path("z2"));
        if (const Json* z = n.find("y_l")) c.network.y_l = complex_from_json(*z, n.path("y_l"));
        n.number("x_l", c.network.x_l);
        n.done();
    }

    Fields op(f.require("operating_point"), f.path("operating_point"));
    op.number("p", c.operating_point.p, true);
    op.number("q", c.operating_point.q, true);
    op.number("v", c.operating_point.v, true);
    op.done();
    f.done();
    return c;
}

PidGains pid_from_json(const Json& j, const std::string& where) {
    PidGains g;
    Fields f(j, where);
    f.number("kp", g.kp, true);
    f.number("ki", g.ki, true);
    f.number("kd", g.kd, true);
    f.number("n_filter", g.n_filter);
    f.done();
    try {
        check(g);
    } catch (const ConfigError& e) {
        throw ConfigError(where + e.field().substr(e.field().find('.')), e.message());
    }
    return g;
}

StabilizerParams stabilizer_from_json(const Json& j, const std::string& where) {
    StabilizerParams s;
    Fields f(j, where);
    f.number("kc", s.kc, true);
    f.number("tw", s.tw);
    f.number("t1c", s.t1c, true);
    f.number("t2c", s.t2c);
    f.number("t3c", s.t3c, true);
    f.number("t4c", s.t4c);
    f.done();
    try {
        check(s);
    } catch (const ConfigError& e) {
        throw ConfigError(where + e.field().substr(e.field().find('.')), e.message());
    }
    return s;
}

LoopWiring wiring_from_json(const Json& j, const std::string& where) {
    LoopWiring w;
    Fields f(j, where);
    f.string("pid_input", w.pid_input);
    f.string("stabilizer_input", w.stabilizer_input);
    f.string("pid_drives", w.pid_drives);
    f.string("stabilizer_drives", w.stabilizer_drives);
    f.number("stabilizer_sign", w.stabilizer_sign);
    f.boolean("stabilizer_first", w.stabilizer_first);
    f.done();
    return w;
}

ControlLimits limits_from_json(const Json& j, const std::string& where) {
    ControlLimits l;
    Fields f(j, where);
    f.optional_number("pid", l.pid);
    f.optional_number("stabilizer", l.stabilizer);
    f.done();
    if (l.pid && !(*l.pid > 0.0)) throw ConfigError(f.path("pid"), "must be positive or null");
    if (l.stabilizer && !(*l.stabilizer > 0.0)) throw ConfigError(f.path("stabilizer"), "must be positive or null");
    return l;
}

Disturbance disturbance_from_json(const Json& j, const std::string& where) {
    Disturbance d;
    Fields f(j, where);
    std::string kind = kind_name(d.kind);
    f.string("kind", kind);
    d.kind = parse_kind(kind, f.path("kind"));
    f.string("channel", d.channel);
    f.number("magnitude", d.magnitude);
    f.number("start", d.start);
    f.number("duration", d.duration);
    f.string("state", d.state);
    f.done();
    try {
        check(d);
    } catch (const ConfigError& e) {
        throw ConfigError(where + e.field().substr(e.field().find('.')), e.message());
    }
    return d;
}

ObjectiveWeights weights_from_json(const Json& j, const std::string& where) {
    ObjectiveWeights w;
    Fields f(j, where);
    f.number("gamma1", w.gamma1);
    f.number("gamma2", w.gamma2);
    f.number("t_sim", w.t_sim);
    f.done();
    try {
        check(w);
    } catch (const ConfigError& e) {
        throw ConfigError(where + e.field().substr(e.field().find('.')), e.message());
    }
    return w;
}

Bounds bounds_from_json(const Json& j, const std::string& where) {
    Bounds b;
    Fields f(j, where);
    f.vector("lo", b.lo);
    f.vector("hi", b.hi);
    if (!f.has("lo") || !f.has("hi")) throw ConfigError(where, "needs both lo and hi");
    f.done();
    try {
        check(b);
    } catch (const ConfigError& e) {
        throw ConfigError(where + e.field().substr(std::string("bounds").size()), e.message());
    }
    return b;
}

PsoConfig pso_from_json(const Json& j, const std::string& where) {
    PsoConfig c;
    Fields f(j, where);
    f.count("n_particles", c.n_particles);
    f.count("n_iters", c.n_iters);
    f.optional_number("w", c.w);
    f.number("w_start", c.w_start);
    f.number("w_end", c.w_end);
    f.number("c1", c.c1);
    f.number("c2", c.c2);
    f.optional_vector("v_max", c.v_max);
    f.optional_vector("initial_velocity", c.initial_velocity);
    f.seed("seed", c.seed);
    f.done();
    return c;
}

BfoConfig bfo_from_json(const Json& j, const std::string& where, const BfoConfig& base) {
    BfoConfig c = base;
    Fields f(j, where);
    f.count("s_pop", c.s_pop);
    f.count("n_c", c.n_c);
    f.count("n_s", c.n_s);
    f.count("n_re", c.n_re);
    f.count("n_ed", c.n_ed);
    f.number("p_ed", c.p_ed);
    f.vector("step_size", c.step_size);
    if (const Json* sj = f.find("swarming")) {
        Fields s(*sj, f.path("swarming"));
        s.boolean("enabled", c.swarming.enabled);
        s.number("d_attract", c.swarming.d_attract);
        s.number("w_attract", c.swarming.w_attract);
        s.number("h_repel", c.swarming.h_repel);
        s.number("w_repel", c.swarming.w_repel);
        s.done();
    }
    f.optional_number("j_min", c.j_min);
    f.optional_count("max_evaluations", c.max_evaluations);
    f.seed("seed", c.seed);
    f.done();
    return c;
}

Scenario scenario_from_json(const Json& j, const fs::path& base_dir) {
    Scenario s;
    Fields f(j, "");
    f.string("label", s.label);
    // An inline plant wins; the reference is then only recorded (resolved configs carry both).
    const Json* ref = f.find("plant_config_ref");
    if (ref && !ref->is_string()) throw ConfigError("plant_config_ref", "expected a file path");
    if (ref) s.plant_config_ref = ref->get<std::string>();
    if (const Json* p = f.find("plant")) {
        s.plant = plant_from_json(*p, "plant");
    } else if (ref) {
        s.plant = load_plant_config(resolve(base_dir, s.plant_config_ref));
    } else {
        throw ConfigError("plant_config_ref", "is required");
    }
    if (const Json* d = f.find("disturbance")) s.disturbance = disturbance_from_json(*d);
    if (const Json* w = f.find("weights")) s.weights = weights_from_json(*w);
    f.number("dt", s.dt);
    if (const Json* p = f.find("pid")) s.pid = pid_from_json(*p);
    if (const Json* st = f.find("stabilizer")) s.stabilizer = stabilizer_from_json(*st);
    if (const Json* w = f.find("wiring")) s.wiring = wiring_from_json(*w);
    if (const Json* l = f.find("limits")) s.limits = limits_from_json(*l);
    f.done();
    if (s.label.empty()) s.label = s.plant.name;
    check(s);
    build_plant(s.plant);
    return s;
}

RunConfig run_config_from_json(const Json& j, const fs::path& base_dir) {
    RunConfig r;
    Fields f(j, "");
    const Json& sj = f.require("scenario");
    if (sj.is_string()) {
        r.scenario_ref = sj.get<std::string>();
        r.scenario = load_scenario(resolve(base_dir, r.scenario_ref));
    } else {
        r.scenario = scenario_from_json(sj, base_dir);
        // written configs record where an inline scenario came from
        f.string("scenario_ref", r.scenario_ref);
    }

    std::string optimizer = "none";
    f.string("optimizer", optimizer);
    r.optimizer = parse_algorithm(optimizer);

    r.bfo = tuning_bfo_defaults();
    if (const Json* p = f.find("pso")) r.pso = pso_from_json(*p, "pso");
    if (const Json* b = f.find("bfo")) r.bfo = bfo_from_json(*b, "bfo", r.bfo);
    if (const Json* oc = f.find("optimizer_config")) {
        switch (r.optimizer) {
            case Algorithm::pso: r.pso = pso_from_json(*oc, "optimizer_config"); break;
            case Algorithm::bfo: r.bfo = bfo_from_json(*oc, "optimizer_config", tuning_bfo_defaults()); break;
            case Algorithm::none: throw ConfigError("optimizer_config", "given but optimizer is none");
        }
    }

    r.baseline_pid = r.scenario.pid;
    r.baseline_stabilizer = r.scenario.stabilizer;
    if (const Json* bj = f.find("baseline_gains")) {
        if (bj->is_string()) {
            r.baseline_ref = bj->get<std::string>();
            read_baseline(read_json_file(resolve(base_dir, r.baseline_ref)), "baseline_gains", r.baseline_pid,
                          r.baseline_stabilizer);
        } else {
            read_baseline(*bj, "baseline_gains", r.baseline_pid, r.baseline_stabilizer);
            f.string("baseline_gains_ref", r.baseline_ref);
        }
    }

    if (const Json* b = f.find("bounds")) r.bounds = bounds_from_json(*b);
    if (r.bounds.size() != decision_dim) throw ConfigError("bounds", "must have 6 entries (kp, ki, kd, kc, t1c, t3c)");
    if (r.bounds.lo(4) <= 0.0 || r.bounds.lo(5) <= 0.0)
        throw ConfigError("bounds.lo", "time-constant bounds must be positive");

    if (const Json* o = f.find("output_dir")) {
        if (!o->is_string()) throw ConfigError("output_dir", "expected a path");
        r.output_dir = o->get<std::string>();
    }
    f.number("dt", r.scenario.dt);
    f.number("t_sim", r.scenario.weights.t_sim);
    if (f.has("seed")) {
        f.seed("seed", r.seed);
        r.pso.seed = r.bfo.seed = r.seed;
    } else {
        r.seed = r.optimizer == Algorithm::bfo ? r.bfo.seed : r.pso.seed;
    }
    f.boolean("parallel", r.parallel);
    f.done();

    check(r.scenario);
    check(r.pso, r.bounds);
    check(r.bfo, r.bounds);
    return r;
}

CompareConfig compare_config_from_json(const Json& j, const fs::path& base_dir) {
    CompareConfig c;
    Fields f(j, "");
    const Json& runs = f.require("runs");
    if (!runs.is_array() || runs.empty()) throw ConfigError("runs", "expected a non-empty array");
    for (std::size_t i = 0; i < runs.size(); ++i) {
        const auto& r = runs[i];
        const std::string where = "runs[" + std::to_string(i) + "]";
        try {
            c.runs.push_back(r.is_string() ? load_run_config(resolve(base_dir, r.get<std::string>()))
                                           : run_config_from_json(r, base_dir));
        } catch (const ConfigError& e) {
            throw ConfigError(where + "." + e.field(), e.message());
        }
    }
    if (const Json* o = f.find("output_dir")) {
        if (!o->is_string()) throw ConfigError("output_dir", "expected a path");
        c.output_dir = o->get<std::string>();
    }
    f.done();
    return c;
}

ConfigKind detect_kind(const Json& j) {
    if (!j.is_object()) throw ConfigError("", "expected a JSON object at the top level");
    if (j.contains("runs")) return ConfigKind::compare;
    if (j.contains("machine")) return ConfigKind::plant;
    if (j.contains("scenario") || j.contains("optimizer")) return ConfigKind::run;
    return ConfigKind::scenario;
}

namespace {

template <typename F>
auto with_file(const fs::path& path, F&& f) {
    const Json j = read_json_file(path);
    try {
        return f(j, path.parent_path());
    } catch (const ConfigError& e) {
        // Prefix the file so nested references stay traceable.
        if (e.field().rfind(path.string(), 0) == 0) throw;
        const std::string msg = e.message();
        throw ConfigError(path.string() + ": " + e.field(), msg);
    }
}

}  // namespace

PlantConfig load_plant_config(const fs::path& path) {
    return with_file(path, [](const Json& j, const fs::path&) { return plant_from_json(j, ""); });
}

Scenario load_scenario(const fs::path& path) {
    return with_file(path, [](const Json& j, const fs::path& dir) { return scenario_from_json(j, dir); });
}

RunConfig load_run_config(const fs::path& path) {
    return with_file(path, [](const Json& j, const fs::path& dir) {
        if (detect_kind(j) == ConfigKind::scenario) {
            Json wrapped = Json::object();
            wrapped["scenario"] = j;
            return run_config_from_json(wrapped, dir);
        }
        return run_config_from_json(j, dir);
    });
}

CompareConfig load_compare_config(const fs::path& path) {
    const Json j = read_json_file(path);
    if (detect_kind(j) == ConfigKind::compare)
        return with_file(path, [](const Json& jj, const fs::path& dir) { return compare_config_from_json(jj, dir); });
    CompareConfig c;
    c.runs.push_back(load_run_config(path));
    c.output_dir = c.runs.front().output_dir;
    return c;
}

// ---------------------------------------------------------------------------
// Writers

Json to_json(const PlantConfig& c) {
    const auto& m = c.machine;
    const auto& s = c.statcom;
    Json j;
    j["name"] = c.name;
    j["machine"] = {{"m_inertia", m.m_inertia}, {"d_damping", m.d_damping}, {"omega_b", m.omega_b},
                    {"t_do_prime", m.t_do_prime}, {"k1", m.k1}, {"k2", m.k2}, {"k3", m.k3},
                    {"k4", m.k4}, {"k5", m.k5}, {"k6", m.k6}};
    j["exciter"] = {{"ka", c.exciter.ka}, {"ta", c.exciter.ta}};
    j["statcom"] = {{"k7", s.k7}, {"k8", s.k8}, {"k9", s.k9}, {"kp_dc", s.kp_dc}, {"kq_dc", s.kq_dc},
                    {"kv_dc", s.kv_dc}, {"kp_c", s.kp_c}, {"kq_c", s.kq_c}, {"kv_c", s.kv_c},
                    {"kd_c", s.kd_c}, {"kp_phi", s.kp_phi}, {"kq_phi", s.kq_phi}, {"kv_phi", s.kv_phi},
                    {"kd_phi", s.kd_phi}, {"c_dc", s.c_dc}, {"c_ratio", s.c_ratio}, {"v_dc0", s.v_dc0},
                    {"phi0", s.phi0}};
    j["network"] = {{"z1", complex_to_json(c.network.z1)}, {"z2", complex_to_json(c.network.z2)},
                    {"y_l", complex_to_json(c.network.y_l)}, {"x_l", c.network.x_l}};
    j["operating_point"] = {{"p", c.operating_point.p}, {"q", c.operating_point.q}, {"v", c.operating_point.v}};
    return j;
}

Json to_json(const PidGains& g) {
    return {{"kp", g.kp}, {"ki", g.ki}, {"kd", g.kd}, {"n_filter", g.n_filter}};
}

Json to_json(const StabilizerParams& s) {
    return {{"kc", s.kc}, {"tw", s.tw}, {"t1c", s.t1c}, {"t2c", s.t2c}, {"t3c", s.t3c}, {"t4c", s.t4c}};
}

Json to_json(const LoopWiring& w) {
    return {{"pid_input", w.pid_input},
            {"stabilizer_input", w.stabilizer_input},
            {"pid_drives", w.pid_drives},
            {"stabilizer_drives", w.stabilizer_drives},
            {"stabilizer_sign", w.stabilizer_sign},
            {"stabilizer_first", w.stabilizer_first}};
}

Json to_json(const ControlLimits& l) {
    return {{"pid", optional_to_json(l.pid)}, {"stabilizer", optional_to_json(l.stabilizer)}};
}

Json to_json(const Disturbance& d) {
    return {{"kind", kind_name(d.kind)}, {"channel", d.channel}, {"magnitude", d.magnitude},
            {"start", d.start}, {"duration", d.duration}, {"state", d.state}};
}

Json to_json(const ObjectiveWeights& w) {
    return {{"gamma1", w.gamma1}, {"gamma2", w.gamma2}, {"t_sim", w.t_sim}};
}

Json to_json(const Bounds& b) { return {{"lo", vector_to_json(b.lo)}, {"hi", vector_to_json(b.hi)}}; }

Json to_json(const Scenario& s) {
    Json j;
    j["label"] = s.label;
    j["plant_config_ref"] = s.plant_config_ref;
    j["plant"] = to_json(s.plant);
    j["disturbance"] = to_json(s.disturbance);
    j["weights"] = to_json(s.weights);
    j["dt"] = s.dt;
    j["pid"] = to_json(s.pid);
    j["stabilizer"] = to_json(s.stabilizer);
    j["wiring"] = to_json(s.wiring);
    j["limits"] = to_json(s.limits);
    return j;
}

Json to_json(const PsoConfig& c) {
    Json j;
    j["n_particles"] = c.n_particles;
    j["n_iters"] = c.n_iters;
    j["w"] = optional_to_json(c.w);
    j["w_start"] = c.w_start;
    j["w_end"] = c.w_end;
    j["c1"] = c.c1;
    j["c2"] = c.c2;
    j["v_max"] = c.v_max ? vector_to_json(*c.v_max) : Json(nullptr);
    j["initial_velocity"] = c.initial_velocity ? vector_to_json(*c.initial_velocity) : Json(nullptr);
    return j;
}

Json to_json(const BfoConfig& c) {
    Json j;
    j["s_pop"] = c.s_pop;
    j["n_c"] = c.n_c;
    j["n_s"] = c.n_s;
    j["n_re"] = c.n_re;
    j["n_ed"] = c.n_ed;
    j["p_ed"] = c.p_ed;
    j["step_size"] = vector_to_json(c.step_size);
    j["swarming"] = {{"enabled", c.swarming.enabled},
                     {"d_attract", c.swarming.d_attract},
                     {"w_attract", c.swarming.w_attract},
                     {"h_repel", c.swarming.h_repel},
                     {"w_repel", c.swarming.w_repel}};
    j["j_min"] = optional_to_json(c.j_min);
    j["max_evaluations"] = c.max_evaluations ? Json(*c.max_evaluations) : Json(nullptr);
    return j;
}

Json to_json(const RunConfig& c) {
    Json j;
    j["scenario_ref"] = c.scenario_ref;
    j["scenario"] = to_json(c.scenario);
    j["optimizer"] = to_string(c.optimizer);
    j["pso"] = to_json(c.pso);
    j["bfo"] = to_json(c.bfo);
    j["baseline_gains_ref"] = c.baseline_ref;
    j["baseline_gains"] = {{"pid", to_json(c.baseline_pid)}, {"stabilizer", to_json(c.baseline_stabilizer)}};
    j["bounds"] = to_json(c.bounds);
    j["seed"] = c.seed;
    return j;
}

}  // namespace swarmstab

#include "geoweb/config.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "geoweb/errors.hpp"
#include "geoweb/expr.hpp"

namespace geoweb {

namespace {

using njson = nlohmann::json;

[[noreturn]] void bad(const std::string& where, const std::string& what) {
    throw MalformedArtifact(where + ": " + what);
}

const njson& need(const njson& o, const char* key, const std::string& where) {
    if (!o.is_object()) bad(where, "expected an object");
    if (!o.contains(key)) bad(where, std::string("missing key \"") + key + "\"");
    return o.at(key);
}

void reject_unknown(const njson& o, std::initializer_list<const char*> allowed,
                    const std::string& where) {
    if (!o.is_object()) bad(where, "expected an object");
    for (const auto& item : o.items()) {
        bool known = false;
        for (const char* a : allowed) known = known || item.key() == a;
        if (!known) bad(where, "unknown key \"" + item.key() + "\"");
    }
}

double num(const njson& v, const std::string& where) {
    if (!v.is_number()) bad(where, "expected a number");
    return v.get<double>();
}

int integer(const njson& v, const std::string& where) {
    if (!v.is_number_integer()) bad(where, "expected an integer");
    return v.get<int>();
}

bool boolean(const njson& v, const std::string& where) {
    if (!v.is_boolean()) bad(where, "expected true or false");
    return v.get<bool>();
}

std::string text(const njson& v, const std::string& where) {
    if (!v.is_string()) bad(where, "expected a string");
    return v.get<std::string>();
}

Eigen::Vector4d covector(const njson& v, const std::string& where) {
    if (!v.is_array() || v.size() != 4) bad(where, "expected an array of 4 numbers");
    Eigen::Vector4d out;
    for (int i = 0; i < 4; ++i) out[i] = num(v.at(i), where);
    if (out.norm() == 0) bad(where, "covector must be nonzero");
    return out;
}

Chart parse_chart(const njson& o, const std::string& where) {
    reject_unknown(o, {"u_min", "u_max", "v_min", "v_max", "v_period"}, where);
    Chart c{num(need(o, "u_min", where), where + ".u_min"),
            num(need(o, "u_max", where), where + ".u_max"),
            num(need(o, "v_min", where), where + ".v_min"),
            num(need(o, "v_max", where), where + ".v_max"), std::nullopt};
    if (o.contains("v_period")) {
        double p = num(o.at("v_period"), where + ".v_period");
        if (!(p > 0)) bad(where + ".v_period", "period must be positive");
        c.v_period = p;
    }
    if (!(c.u_min < c.u_max)) bad(where, "u_min must be below u_max");
    if (!(c.v_min < c.v_max)) bad(where, "v_min must be below v_max");
    return c;
}

SurfaceSpec parse_surface(const njson& o, const std::string& where) {
    SurfaceSpec s;
    std::string type = text(need(o, "type", where), where + ".type");
    if (type == "liouville") {
        reject_unknown(o, {"type", "a", "b", "chart"}, where);
        s.type = SurfaceSpec::Type::Liouville;
        s.a = text(need(o, "a", where), where + ".a");
        s.b = text(need(o, "b", where), where + ".b");
        s.chart = parse_chart(need(o, "chart", where), where + ".chart");
    } else if (type == "epsilon") {
        reject_unknown(o, {"type", "epsilon", "z_min"}, where);
        s.type = SurfaceSpec::Type::Epsilon;
        s.epsilon = integer(need(o, "epsilon", where), where + ".epsilon");
        if (s.epsilon != 1 && s.epsilon != -1) bad(where + ".epsilon", "must be 1 or -1");
        if (o.contains("z_min")) {
            s.z_min = num(o.at("z_min"), where + ".z_min");
            if (!(s.z_min > 0)) bad(where + ".z_min", "must be positive");
        }
    } else {
        bad(where + ".type", "unknown surface type \"" + type + "\"");
    }
    return s;
}

WallSpec parse_wall(const njson& o, const std::string& where) {
    reject_unknown(o, {"axis", "value", "side", "mirror"}, where);
    WallSpec w;
    std::string axis = text(need(o, "axis", where), where + ".axis");
    if (axis == "u") {
        w.axis = Axis::U;
    } else if (axis == "v") {
        w.axis = Axis::V;
    } else {
        bad(where + ".axis", "axis must be \"u\" or \"v\"");
    }
    w.value = num(need(o, "value", where), where + ".value");
    w.side = integer(need(o, "side", where), where + ".side");
    if (w.side != 1 && w.side != -1) bad(where + ".side", "side must be 1 or -1");
    if (o.contains("mirror")) w.mirror = boolean(o.at("mirror"), where + ".mirror");
    return w;
}

BilliardExperiment parse_billiard(const njson& o, const std::string& where) {
    reject_unknown(o, {"type", "wall", "bounces", "start"}, where);
    BilliardExperiment e;
    e.wall = parse_wall(need(o, "wall", where), where + ".wall");
    e.bounces = integer(need(o, "bounces", where), where + ".bounces");
    if (e.bounces < 0) bad(where + ".bounces", "must be nonnegative");
    const njson& start = need(o, "start", where);
    if (start.is_string()) {
        if (start.get<std::string>() != "random")
            bad(where + ".start", "string start must be \"random\"");
        e.random_start = true;
    } else {
        reject_unknown(start, {"foot", "angle_deg", "sign"}, where + ".start");
        e.foot = num(need(start, "foot", where + ".start"), where + ".start.foot");
        e.angle_deg =
            num(need(start, "angle_deg", where + ".start"), where + ".start.angle_deg");
        if (!(e.angle_deg > 0 && e.angle_deg < 90))
            bad(where + ".start.angle_deg", "must lie strictly between 0 and 90");
        if (start.contains("sign")) {
            e.sign = integer(start.at("sign"), where + ".start.sign");
            if (e.sign != 1 && e.sign != -1)
                bad(where + ".start.sign", "sign must be 1 or -1");
        }
    }
    return e;
}

WebCheckExperiment parse_web_check(const njson& o, const std::string& where) {
    reject_unknown(o, {"type", "web", "delta", "grid", "box", "margin"}, where);
    WebCheckExperiment e;
    e.web = text(need(o, "web", where), where + ".web");
    if (e.web != "liouville" && e.web != "perturbed" && e.web != "rebisected")
        bad(where + ".web", "web must be liouville, perturbed or rebisected");
    if (e.web == "liouville") {
        if (o.contains("delta")) bad(where + ".delta", "only control webs take a delta");
    } else {
        e.delta = num(need(o, "delta", where), where + ".delta");
    }
    if (o.contains("grid")) {
        const njson& g = o.at("grid");
        reject_unknown(g, {"nx", "ny"}, where + ".grid");
        e.nx = integer(need(g, "nx", where + ".grid"), where + ".grid.nx");
        e.ny = integer(need(g, "ny", where + ".grid"), where + ".grid.ny");
    }
    if (e.nx < 2 || e.ny < 2) bad(where + ".grid", "grid needs at least 2 x 2 samples");
    if (o.contains("box")) {
        if (o.contains("margin")) bad(where, "give either box or margin, not both");
        const njson& b = o.at("box");
        if (!b.is_array() || b.size() != 4)
            bad(where + ".box", "expected [x0, x1, y0, y1]");
        std::array<double, 4> box{};
        for (int i = 0; i < 4; ++i) box[i] = num(b.at(i), where + ".box");
        if (!(box[0] < box[1] && box[2] < box[3]))
            bad(where + ".box", "box edges must be ordered");
        e.box = box;
    } else if (o.contains("margin")) {
        e.margin = num(o.at("margin"), where + ".margin");
        if (!(e.margin >= 0)) bad(where + ".margin", "must be nonnegative");
    }
    return e;
}

PonceletExperiment parse_poncelet(const njson& o, const std::string& where) {
    reject_unknown(o, {"type", "c_I", "c_w", "starts", "start_count", "steps", "orient",
                       "closure_period"},
                   where);
    PonceletExperiment e;
    e.c_I = covector(need(o, "c_I", where), where + ".c_I");
    e.c_w = covector(need(o, "c_w", where), where + ".c_w");
    if (o.contains("starts") == o.contains("start_count"))
        bad(where, "give exactly one of starts and start_count");
    if (o.contains("starts")) {
        const njson& s = o.at("starts");
        if (!s.is_array() || s.empty()) bad(where + ".starts", "expected a nonempty array");
        for (const njson& v : s) e.starts.push_back(num(v, where + ".starts"));
    } else {
        int n = integer(o.at("start_count"), where + ".start_count");
        if (n < 1) bad(where + ".start_count", "must be positive");
        for (int j = 0; j < n; ++j)
            e.starts.push_back(n == 1 ? 0.1 : 0.1 + 2.8 * j / (n - 1.0));
    }
    if (o.contains("steps")) e.steps = integer(o.at("steps"), where + ".steps");
    if (e.steps < 100) bad(where + ".steps", "rotation numbers need at least 100 steps");
    if (o.contains("orient")) {
        e.orient = integer(o.at("orient"), where + ".orient");
        if (e.orient != 0 && e.orient != 1) bad(where + ".orient", "orient must be 0 or 1");
    }
    if (o.contains("closure_period")) {
        e.closure_period = integer(o.at("closure_period"), where + ".closure_period");
        if (e.closure_period < 0) bad(where + ".closure_period", "must be nonnegative");
    }
    return e;
}

CausticsExperiment parse_caustics(const njson& o, const std::string& where) {
    reject_unknown(o, {"type", "wall", "mu"}, where);
    CausticsExperiment e;
    e.wall = parse_wall(need(o, "wall", where), where + ".wall");
    const njson& mu = need(o, "mu", where);
    if (!mu.is_array() || mu.empty()) bad(where + ".mu", "expected a nonempty array");
    for (const njson& v : mu) e.mu.push_back(num(v, where + ".mu"));
    return e;
}

RenderExperiment parse_render(const njson& o, const std::string& where) {
    reject_unknown(o, {"type", "picture", "artifact", "wall"}, where);
    RenderExperiment e;
    e.picture = text(need(o, "picture", where), where + ".picture");
    if (e.picture == "plane" || e.picture == "chart") {
        e.artifact = text(need(o, "artifact", where), where + ".artifact");
        e.wall = parse_wall(need(o, "wall", where), where + ".wall");
    } else if (e.picture == "web") {
        if (o.contains("artifact") || o.contains("wall"))
            bad(where, "the web picture is drawn from the surface alone");
    } else {
        bad(where + ".picture", "picture must be plane, chart or web");
    }
    return e;
}

} // namespace

LiouvilleMetric SurfaceSpec::metric() const {
    if (type != Type::Liouville)
        throw MalformedArtifact("this experiment needs a liouville surface");
    return LiouvilleMetric(Expr::parse(a, "u"), Expr::parse(b, "v"), chart);
}

EpsSurface SurfaceSpec::eps_surface() const {
    if (type != Type::Epsilon)
        throw MalformedArtifact("this experiment needs an epsilon surface");
    return EpsSurface(epsilon, z_min);
}

SceneConfig parse_scene_config(const std::string& doc, const std::string& origin) {
    njson root;
    try {
        root = njson::parse(doc);
    } catch (const njson::parse_error& e) {
        throw MalformedArtifact(origin + ": " + e.what());
    }
    reject_unknown(root, {"surface", "experiment", "tolerance", "out"}, origin);

    SceneConfig cfg;
    cfg.surface = parse_surface(need(root, "surface", origin), origin + ".surface");

    const njson& exp = need(root, "experiment", origin);
    const std::string where = origin + ".experiment";
    std::string type = text(need(exp, "type", where), where + ".type");
    if (type == "billiard") {
        cfg.experiment = parse_billiard(exp, where);
    } else if (type == "web-check") {
        cfg.experiment = parse_web_check(exp, where);
    } else if (type == "poncelet") {
        cfg.experiment = parse_poncelet(exp, where);
    } else if (type == "caustics") {
        cfg.experiment = parse_caustics(exp, where);
    } else if (type == "render") {
        cfg.experiment = parse_render(exp, where);
    } else {
        bad(where + ".type", "unknown experiment type \"" + type + "\"");
    }

    // the dual-quadric experiment is the only one living on the epsilon
    // surface; everything else needs a chart with a metric
    bool wants_eps = std::holds_alternative<PonceletExperiment>(cfg.experiment);
    if (wants_eps != (cfg.surface.type == SurfaceSpec::Type::Epsilon))
        bad(origin, wants_eps ? "a poncelet experiment runs on an epsilon surface"
                              : "this experiment runs on a liouville surface");

    if (root.contains("tolerance")) {
        const njson& tol = root.at("tolerance");
        reject_unknown(tol, {"abs", "rel"}, origin + ".tolerance");
        if (tol.contains("abs")) cfg.ode.abs_tol = num(tol.at("abs"), origin + ".tolerance.abs");
        if (tol.contains("rel")) cfg.ode.rel_tol = num(tol.at("rel"), origin + ".tolerance.rel");
        if (!(cfg.ode.abs_tol > 0) || !(cfg.ode.rel_tol > 0))
            bad(origin + ".tolerance", "tolerances must be positive");
    }
    if (root.contains("out")) cfg.out = text(root.at("out"), origin + ".out");
    return cfg;
}

SceneConfig load_scene_config(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw MalformedArtifact("config file not found: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_scene_config(buf.str(), path);
}

} // namespace geoweb

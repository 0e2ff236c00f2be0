#include "omegalab/scenario.hpp"

#include <algorithm>
#include <array>
#include <fstream>

namespace omegalab::harness {

using spaces::CantorWord;
using spaces::DendritePoint;
using spaces::EuclidPoint;
using spaces::EuclidTag;
using spaces::Point;
using spaces::ProductPoint;
using spaces::Rational;

namespace {

Rational rational_from(const json& j, const char* what) {
    if (j.is_string()) return spaces::parse_rational(j.get<std::string>());
    if (j.is_number_integer()) return Rational(j.get<long long>());
    throw ConfigError(std::string(what) + ": expected a rational as a \"p/q\" string or an integer");
}

std::vector<double> coords_from(const json& j, const char* what) {
    if (!j.is_array()) throw ConfigError(std::string(what) + ": expected an array of numbers");
    std::vector<double> out;
    for (const auto& c : j) {
        if (!c.is_number()) throw ConfigError(std::string(what) + ": expected numbers");
        out.push_back(c.get<double>());
    }
    return out;
}

std::array<double, 2> pair_from(const json& j, const char* what) {
    const auto v = coords_from(j, what);
    if (v.size() != 2) throw ConfigError(std::string(what) + ": expected two numbers");
    return {v[0], v[1]};
}

template <class T>
T get_or(const json& j, const char* key, T fallback) {
    if (!j.contains(key)) return fallback;
    try {
        return j.at(key).get<T>();
    } catch (const json::exception& e) {
        throw ConfigError(std::string("field '") + key + "': " + e.what());
    }
}

}  // namespace

const std::vector<std::string>& check_registry() {
    static const std::vector<std::string> names{
        "thm12",        "cor13",        "lemma23",   "dendrite_counterexample", "disk_coverage",  "s1_fixed",
        "monotone_r",   "theta_relation", "suspension", "square_extension",     "prop18",         "cantor_negative",
    };
    return names;
}

void ScenarioConfig::validate() const {
    if (id.empty()) throw ConfigError("scenario id must be non-empty");
    if (steps == 0) throw ConfigError("N must be >= 1");
    if (burn_in >= steps) throw ConfigError("B must be < N");
    if (!(eps_net > 0.0) || !(eps_comp > 0.0)) throw ConfigError("epsilons must be positive");
    if (slack < 0.0) throw ConfigError("slack must be non-negative");
    if (n_max == 0) throw ConfigError("n_max must be >= 1");
    if (tol < 0.0) throw ConfigError("tol must be non-negative");
    if (!spaces::belongs(start, map.space())) {
        throw ConfigError("start point " + spaces::describe(start) + " is not in " + spaces::describe(map.space()));
    }
    if (net_override) {
        if (net_override->empty()) throw ConfigError("net_override must be non-empty");
        for (const auto& p : *net_override) {
            if (!spaces::belongs(p, map.space())) throw ConfigError("net_override point outside the map's space");
        }
    }
    const auto& reg = check_registry();
    for (const auto& c : checks) {
        if (std::find(reg.begin(), reg.end(), c.name) == reg.end()) throw ConfigError("unknown check '" + c.name + "'");
    }
}

// ---------------------------------------------------------------------------

json point_to_json(const Point& p) {
    return std::visit(
        [](const auto& v) -> json {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, DendritePoint>) {
                if (v.on_baseline()) return json{{"baseline", v.value().str()}};
                return json{{"arc", v.arc_index()}, {"height", v.value().str()}};
            } else if constexpr (std::is_same_v<T, EuclidPoint>) {
                switch (v.tag) {
                    case EuclidTag::interval:
                        if (v.exact) return json{{"interval", v.exact->str()}};
                        return json{{"interval", v.coords[0]}};
                    case EuclidTag::circle:
                        if (v.exact) return json{{"turn", v.exact->str()}};
                        return json{{"angle", v.coords[0]}};
                    default:
                        return json{{spaces::tag_name(v.tag), v.coords}};
                }
            } else if constexpr (std::is_same_v<T, CantorWord>) {
                return json{{"cantor", v.str()}};
            } else {
                json factors = json::array();
                for (const auto& f : v.factors) factors.push_back(point_to_json(f));
                return json{{"product", factors}};
            }
        },
        p);
}

Point point_from_json(const json& j) {
    if (!j.is_object()) throw ConfigError("point: expected an object");
    try {
        if (j.contains("baseline")) return DendritePoint::baseline(rational_from(j["baseline"], "baseline"));
        if (j.contains("arc")) {
            const auto k = j["arc"].get<std::uint64_t>();
            if (!j.contains("height")) return DendritePoint::arc_tip(k);
            return DendritePoint::arc(k, rational_from(j["height"], "height"));
        }
        if (j.contains("interval")) {
            const auto& v = j["interval"];
            if (v.is_number_float()) return EuclidPoint::interval(v.get<double>());
            return EuclidPoint::interval(rational_from(v, "interval"));
        }
        if (j.contains("turn")) return EuclidPoint::circle_turn(rational_from(j["turn"], "turn"));
        if (j.contains("angle")) return EuclidPoint::circle_angle(j["angle"].get<double>());
        if (j.contains("disk")) {
            const auto c = pair_from(j["disk"], "disk");
            return EuclidPoint::disk(c[0], c[1]);
        }
        if (j.contains("square")) {
            const auto c = pair_from(j["square"], "square");
            return EuclidPoint::square(c[0], c[1]);
        }
        if (j.contains("ball")) return EuclidPoint::ball(coords_from(j["ball"], "ball"));
        if (j.contains("cantor")) {
            CantorWord w = CantorWord::parse(j["cantor"].get<std::string>());
            const auto depth = get_or<std::size_t>(j, "depth", w.depth());
            if (depth < w.depth()) throw ConfigError("cantor: depth shorter than the given bits");
            w.bits.resize(depth, false);
            return w;
        }
        if (j.contains("product")) {
            std::vector<Point> factors;
            for (const auto& f : j["product"]) factors.push_back(point_from_json(f));
            return spaces::make_product(std::move(factors));
        }
    } catch (const ConfigError&) {
        throw;
    } catch (const std::exception& e) {
        throw ConfigError(std::string("point: ") + e.what());
    }
    throw ConfigError("point: unrecognized encoding " + j.dump());
}

flows::IntegratorConfig integrator_from_json(const json& j) {
    flows::IntegratorConfig cfg;
    if (j.is_null()) return cfg;
    cfg.rel_tol = get_or(j, "rel_tol", cfg.rel_tol);
    cfg.abs_tol = get_or(j, "abs_tol", cfg.abs_tol);
    cfg.max_step = get_or(j, "max_step", cfg.max_step);
    cfg.min_step = get_or(j, "min_step", cfg.min_step);
    try {
        cfg.validate();
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
    return cfg;
}

dynamics::DynamicalMap map_from_json(const json& j) {
    using dynamics::DynamicalMap;
    if (!j.is_object() || !j.contains("type")) throw ConfigError("map: expected an object with a \"type\"");
    const auto type = j["type"].get<std::string>();
    const auto integrator = integrator_from_json(j.value("integrator", json()));
    try {
        if (type == "dendrite_f0") return DynamicalMap::dendrite_f0();
        if (type == "disk_time_one") return DynamicalMap::disk_time_one(integrator);
        if (type == "ball") return DynamicalMap::ball(get_or<std::size_t>(j, "dimension", 3), integrator);
        if (type == "square_extension") {
            const auto c = pair_from(j.value("center", json::array({0.5, 0.5})), "center");
            return DynamicalMap::square_extension(EuclidPoint{{c[0], c[1]}, EuclidTag::square, std::nullopt},
                                                  get_or(j, "radius", 0.4), integrator);
        }
        if (type == "piecewise_linear") {
            dynamics::PiecewiseLinearSpec spec;
            for (const auto& bp : j.at("breakpoints")) {
                if (!bp.is_array() || bp.size() != 2) throw ConfigError("breakpoints: expected [x, y] pairs");
                spec.breakpoints.emplace_back(rational_from(bp[0], "breakpoint x"), rational_from(bp[1], "breakpoint y"));
            }
            return DynamicalMap::piecewise_linear(std::move(spec));
        }
        if (type == "rotation") {
            if (j.contains("turn")) return DynamicalMap::rotation(rational_from(j["turn"], "turn"));
            return DynamicalMap::rotation_angle(j.at("angle").get<double>());
        }
        if (type == "odometer") return DynamicalMap::odometer(get_or<std::size_t>(j, "depth", spaces::kDefaultCantorDepth));
        if (type == "product") {
            std::vector<DynamicalMap> factors;
            for (const auto& f : j.at("factors")) factors.push_back(map_from_json(f));
            return DynamicalMap::product(std::move(factors));
        }
    } catch (const ConfigError&) {
        throw;
    } catch (const std::exception& e) {
        throw ConfigError("map '" + type + "': " + e.what());
    }
    throw ConfigError("map: unknown type '" + type + "'");
}

ScenarioConfig scenario_from_json(const json& j) {
    if (!j.is_object()) throw ConfigError("scenario: expected a JSON object");
    ScenarioConfig cfg;
    try {
        cfg.id = j.at("id").get<std::string>();
        cfg.map_spec = j.at("map");
        cfg.map = map_from_json(cfg.map_spec);
        cfg.start = point_from_json(j.at("start"));
        cfg.steps = j.at("N").get<std::size_t>();
        cfg.burn_in = get_or<std::size_t>(j, "B", 0);
        cfg.eps_net = get_or(j, "eps_net", cfg.eps_net);
        cfg.eps_comp = get_or(j, "eps_comp", cfg.eps_comp);
        cfg.slack = get_or(j, "slack", cfg.slack);
        cfg.n_max = get_or(j, "n_max", cfg.n_max);
        cfg.tol = get_or(j, "tol", cfg.tol);
        cfg.sampling = get_or(j, "sampling", cfg.sampling);
        if (j.contains("target")) {
            const auto& t = j["target"];
            if (t.contains("segment")) {
                const auto& s = t["segment"];
                if (!s.is_array() || s.size() != 2) throw ConfigError("target.segment: expected two endpoints");
                cfg.target = omega::Segment{pair_from(s[0], "segment"), pair_from(s[1], "segment")};
            } else if (t.contains("circle")) {
                const auto& c = t["circle"];
                cfg.target = omega::CircleTarget{pair_from(c.at("center"), "circle.center"), c.at("radius").get<double>()};
            } else {
                throw ConfigError("target: expected \"segment\" or \"circle\"");
            }
        }
        if (j.contains("net_override")) {
            std::vector<Point> pts;
            for (const auto& p : j["net_override"]) pts.push_back(point_from_json(p));
            cfg.net_override = std::move(pts);
        }
        for (const auto& c : j.value("checks", json::array())) {
            CheckSpec spec;
            if (c.is_string()) {
                spec.name = c.get<std::string>();
            } else if (c.is_object()) {
                spec.name = c.at("name").get<std::string>();
                spec.params = c;
                const auto expect = c.value("expect", std::string("pass"));
                if (expect != "pass" && expect != "fail") throw ConfigError("check expect must be \"pass\" or \"fail\"");
                spec.expect_pass = expect == "pass";
            } else {
                throw ConfigError("checks: expected names or objects");
            }
            cfg.checks.push_back(std::move(spec));
        }
    } catch (const ConfigError&) {
        throw;
    } catch (const json::exception& e) {
        throw ConfigError(std::string("scenario: ") + e.what());
    }
    cfg.validate();
    return cfg;
}

ScenarioConfig load_scenario(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open scenario file " + path.string());
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw ConfigError(path.string() + ": " + e.what());
    }
    return scenario_from_json(j);
}

}  // namespace omegalab::harness

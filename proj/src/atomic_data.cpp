#include "ionstark/atomic_data.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <regex>
#include <sstream>

#include <nlohmann/json.hpp>

#include "ionstark/builtin_species_data.hpp"
#include "ionstark/constants.hpp"
#include "ionstark/errors.hpp"

namespace ionstark {

using nlohmann::ordered_json;

const char* to_string(QubitKind k) {
    return k == QubitKind::optical_sd ? "optical_SD" : "zeeman_ground";
}

const char* to_string(Polarization p) {
    switch (p) {
        case Polarization::linear_pi: return "pi";
        case Polarization::sigma_plus: return "sigma_plus";
        default: return "sigma_minus";
    }
}

LevelLabel parse_level_label(const std::string& text) {
    // e.g. "4S1/2", "3D5/2(mJ=+5/2)", "7F7/2"
    static const std::regex re(
        R"(^(\d+)([SPDF])(\d+)/2(?:\(mJ=([+-]\d+)/2\))?$)");
    std::smatch m;
    if (!std::regex_match(text, m, re))
        throw ValidationError("malformed level label '" + text + "'");
    LevelLabel lv;
    lv.raw = text;
    lv.n = std::stoi(m[1]);
    lv.l = m[2].str()[0];
    lv.two_j = std::stoi(m[3]);
    if (m[4].matched) {
        lv.has_mj = true;
        lv.two_mj = std::stoi(m[4]);
        if (std::abs(lv.two_mj) > lv.two_j)
            throw ValidationError("|mJ| exceeds J in level label '" + text + "'");
    }
    return lv;
}

double TransitionLine::weight(Polarization p) const {
    switch (p) {
        case Polarization::linear_pi: return pi_weight;
        case Polarization::sigma_plus: return sigma_plus_weight;
        default: return sigma_minus_weight;
    }
}

std::vector<const TransitionLine*> IonSpecies::lines(LineRole role) const {
    std::vector<const TransitionLine*> out;
    for (const auto& t : transitions)
        if (t.role == role) out.push_back(&t);
    return out;
}

const TransitionLine* IonSpecies::qubit_line() const {
    for (const auto& t : transitions)
        if (t.role == LineRole::qubit_e2) return &t;
    return nullptr;
}

namespace {

LineRole classify(const TransitionLine& t, const std::string& ctx) {
    if (t.lower.l == 'S' && t.upper.l == 'P') return LineRole::sp_dipole;
    if (t.lower.l == 'D' && t.upper.l == 'F') return LineRole::df_dipole;
    if (t.lower.l == 'S' && t.upper.l == 'D') return LineRole::qubit_e2;
    throw ValidationError(ctx + ": unsupported transition topology " +
                          t.lower.raw + " -> " + t.upper.raw);
}

const ordered_json& require_key(const ordered_json& j, const char* key,
                                const std::string& ctx) {
    auto it = j.find(key);
    if (it == j.end())
        throw ValidationError(ctx + ": missing key '" + key + "'");
    return *it;
}

double require_number(const ordered_json& j, const char* key,
                      const std::string& ctx) {
    const auto& v = require_key(j, key, ctx);
    if (!v.is_number())
        throw ValidationError(ctx + ": key '" + key + "' must be a number");
    return v.get<double>();
}

std::string require_string(const ordered_json& j, const char* key,
                           const std::string& ctx) {
    const auto& v = require_key(j, key, ctx);
    if (!v.is_string())
        throw ValidationError(ctx + ": key '" + key + "' must be a string");
    return v.get<std::string>();
}

double optional_weight(const ordered_json& j, const char* key,
                       const std::string& ctx) {
    auto it = j.find(key);
    if (it == j.end()) return 0.0;
    if (!it->is_number())
        throw ValidationError(ctx + ": key '" + key + "' must be a number");
    double w = it->get<double>();
    if (w < 0.0 || w > 1.0)
        throw ValidationError(ctx + ": key '" + key + "' outside [0, 1]");
    return w;
}

IonSpecies parse_one(const ordered_json& j) {
    IonSpecies s;
    s.name = require_string(j, "name", "species");
    const std::string ctx = "species '" + s.name + "'";

    double mass_amu = require_number(j, "mass_amu", ctx);
    if (!(mass_amu > 0))
        throw ValidationError(ctx + ": key 'mass_amu' must be positive");
    s.mass = mass_amu * constants::amu;

    if (auto it = j.find("charge"); it != j.end()) s.charge = it->get<int>();
    if (s.charge < 1)
        throw ValidationError(ctx + ": key 'charge' must be >= 1");

    std::string kind = require_string(j, "qubit_kind", ctx);
    if (kind == "optical_SD")
        s.qubit_kind = QubitKind::optical_sd;
    else if (kind == "zeeman_ground")
        s.qubit_kind = QubitKind::zeeman_ground;
    else
        throw ValidationError(ctx + ": key 'qubit_kind' has unknown value '" +
                              kind + "'");

    if (auto it = j.find("series_truncation"); it != j.end())
        s.series_truncation = it->get<int>();
    if (auto it = j.find("notes"); it != j.end())
        s.notes = it->get<std::string>();

    const auto& lines = require_key(j, "lines", ctx);
    if (!lines.is_array() || lines.empty())
        throw ValidationError(ctx + ": key 'lines' must be a non-empty array");

    for (const auto& lj : lines) {
        TransitionLine t;
        t.lower = parse_level_label(require_string(lj, "lower", ctx));
        t.upper = parse_level_label(require_string(lj, "upper", ctx));

        bool has_wl = lj.contains("wavelength_nm");
        bool has_om = lj.contains("omega_rad_s");
        if (has_wl == has_om)
            throw ValidationError(ctx +
                                  ": each line needs exactly one of "
                                  "'wavelength_nm' or 'omega_rad_s'");
        if (has_wl) {
            double wl = require_number(lj, "wavelength_nm", ctx);
            if (!(wl > 0))
                throw ValidationError(ctx + ": key 'wavelength_nm' must be positive");
            t.angular_frequency = 2.0 * constants::pi * constants::c / (wl * 1e-9);
        } else {
            t.angular_frequency = require_number(lj, "omega_rad_s", ctx);
            if (!(t.angular_frequency > 0))
                throw ValidationError(ctx + ": key 'omega_rad_s' must be positive");
        }

        t.decay_rate = require_number(lj, "gamma_rad_s", ctx);
        if (!(t.decay_rate > 0))
            throw ValidationError(ctx + ": key 'gamma_rad_s' must be positive");

        t.pi_weight = optional_weight(lj, "pi_weight", ctx);
        t.sigma_plus_weight = optional_weight(lj, "sigma_plus_weight", ctx);
        t.sigma_minus_weight = optional_weight(lj, "sigma_minus_weight", ctx);
        if (auto it = lj.find("source_citation"); it != lj.end())
            t.source_citation = it->get<std::string>();

        t.role = classify(t, ctx);
        s.transitions.push_back(std::move(t));
    }

    // Lifetime of the shelved level, recomputed from its decay channels.
    double gamma_out = 0;
    for (const auto& t : s.transitions)
        if (t.role == LineRole::qubit_e2) gamma_out += t.decay_rate;
    if (gamma_out > 0) s.d52_lifetime = 1.0 / gamma_out;

    if (auto it = j.find("d52_lifetime_s"); it != j.end()) {
        double declared = it->get<double>();
        if (s.d52_lifetime <= 0)
            throw ValidationError(ctx +
                                  ": 'd52_lifetime_s' declared but no decay "
                                  "channel out of the D level is listed");
        if (std::abs(s.d52_lifetime - declared) > 0.10 * declared)
            throw ValidationError(
                ctx + ": declared 'd52_lifetime_s' disagrees with the listed "
                      "decay channels by more than 10%");
    }

    validate_species(s);
    return s;
}

}  // namespace

void validate_species(const IonSpecies& s) {
    const std::string ctx = "species '" + s.name + "'";
    if (!(s.mass > 0)) throw ValidationError(ctx + ": non-positive mass");

    // Completeness of the branch weights, per (lower sublevel, upper nL)
    // group. Pi columns always close to 1; so do sigma columns rooted in a
    // J=1/2 level. Sigma columns rooted in D5/2 may sum below 1 because the
    // J'=3/2 partner of an F-multiplet is dipole-inaccessible from J=5/2's
    // stretched sublevel, not because lines are missing.
    struct Sums { double pi = 0, sp = 0, sm = 0; int lower_two_j = 0; };
    std::map<std::string, Sums> groups;
    int sp_groups = 0, df_lines = 0;
    for (const auto& t : s.transitions) {
        if (t.role == LineRole::qubit_e2) continue;
        std::string key = t.lower.raw + "->" + std::to_string(t.upper.n) + t.upper.l;
        auto& g = groups[key];
        g.pi += t.pi_weight;
        g.sp += t.sigma_plus_weight;
        g.sm += t.sigma_minus_weight;
        g.lower_two_j = t.lower.two_j;
        if (t.role == LineRole::df_dipole) ++df_lines;
    }
    {
        std::map<std::string, bool> sp_seen;
        for (const auto& t : s.transitions)
            if (t.role == LineRole::sp_dipole)
                sp_seen[t.lower.raw + "->" + std::to_string(t.upper.n) + "P"] = true;
        sp_groups = static_cast<int>(sp_seen.size());
    }

    constexpr double tol = 1e-12;
    for (const auto& [key, g] : groups) {
        if (std::abs(g.pi - 1.0) > tol)
            throw ValidationError(ctx + ": pi branch weights of group " + key +
                                  " do not sum to 1");
        if (g.lower_two_j == 1) {
            if (std::abs(g.sp - 1.0) > tol || std::abs(g.sm - 1.0) > tol)
                throw ValidationError(ctx + ": sigma branch weights of group " +
                                      key + " do not sum to 1");
        } else {
            if (g.sp > 1.0 + tol || g.sm > 1.0 + tol)
                throw ValidationError(ctx + ": sigma branch weights of group " +
                                      key + " exceed 1");
        }
    }

    if (sp_groups != 1)
        throw ValidationError(ctx + ": expected exactly one S->P group, found " +
                              std::to_string(sp_groups));
    if (s.qubit_kind == QubitKind::optical_sd) {
        if (df_lines < 1)
            throw ValidationError(ctx + ": optical_SD qubit needs at least one "
                                        "D->F line");
        if (s.qubit_line() == nullptr)
            throw ValidationError(ctx + ": optical_SD qubit needs its S->D line");
        if (!(s.d52_lifetime > 0))
            throw ValidationError(ctx + ": missing decay rate out of the D level");
    }
}

std::vector<IonSpecies> load_species(const std::string& document) {
    ordered_json j;
    try {
        j = ordered_json::parse(document);
    } catch (const nlohmann::json::parse_error& e) {
        throw ValidationError(std::string("species document is not valid JSON: ") +
                              e.what());
    }
    std::vector<IonSpecies> out;
    if (j.is_array())
        for (const auto& el : j) out.push_back(parse_one(el));
    else
        out.push_back(parse_one(j));
    return out;
}

std::vector<IonSpecies> load_species_file(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw NotFoundError("cannot open species file '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return load_species(ss.str());
}

std::string serialize_species(const IonSpecies& s) {
    ordered_json j;
    j["name"] = s.name;
    j["mass_amu"] = s.mass / constants::amu;
    j["charge"] = s.charge;
    j["qubit_kind"] = to_string(s.qubit_kind);
    j["series_truncation"] = s.series_truncation;
    if (s.d52_lifetime > 0) j["d52_lifetime_s"] = s.d52_lifetime;
    if (!s.notes.empty()) j["notes"] = s.notes;
    j["lines"] = ordered_json::array();
    for (const auto& t : s.transitions) {
        ordered_json lj;
        lj["lower"] = t.lower.raw;
        lj["upper"] = t.upper.raw;
        lj["omega_rad_s"] = t.angular_frequency;
        lj["gamma_rad_s"] = t.decay_rate;
        lj["pi_weight"] = t.pi_weight;
        lj["sigma_plus_weight"] = t.sigma_plus_weight;
        lj["sigma_minus_weight"] = t.sigma_minus_weight;
        if (!t.source_citation.empty()) lj["source_citation"] = t.source_citation;
        j["lines"].push_back(std::move(lj));
    }
    return j.dump(2);
}

const IonSpecies& builtin_species(const std::string& name) {
    static const std::map<std::string, IonSpecies> registry = [] {
        std::map<std::string, IonSpecies> m;
        for (const char* doc : {detail::ca40p_json, detail::sr88p_json,
                                detail::ba138p_json}) {
            auto v = load_species(doc);
            for (auto& s : v) m.emplace(s.name, std::move(s));
        }
        return m;
    }();
    auto it = registry.find(name);
    if (it == registry.end()) {
        std::string known;
        for (const auto& [k, _] : registry) known += (known.empty() ? "" : ", ") + k;
        throw NotFoundError("unknown species '" + name + "' (built in: " + known +
                            ")");
    }
    return it->second;
}

std::vector<std::string> builtin_species_names() {
    std::vector<std::string> names;
    for (const char* doc :
         {detail::ca40p_json, detail::sr88p_json, detail::ba138p_json})
        for (const auto& s : load_species(doc)) names.push_back(s.name);
    std::sort(names.begin(), names.end());
    return names;
}

IonSpecies as_zeeman_qubit(const IonSpecies& s) {
    IonSpecies z;
    z.name = s.name;
    z.mass = s.mass;
    z.charge = s.charge;
    z.qubit_kind = QubitKind::zeeman_ground;
    z.series_truncation = 0;
    z.notes = s.notes;
    for (const auto& t : s.transitions)
        if (t.role == LineRole::sp_dipole) z.transitions.push_back(t);
    validate_species(z);
    return z;
}

}  // namespace ionstark

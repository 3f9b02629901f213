#include "ionstark/cli.hpp"

#include <cmath>
#include <fstream>
#include <iostream>
#include <limits>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "ionstark/constants.hpp"
#include "ionstark/errors.hpp"
#include "ionstark/planner.hpp"
#include "ionstark/report.hpp"
#include "ionstark/sweep.hpp"

namespace ionstark {

namespace {

constexpr double two_pi = 2.0 * constants::pi;

struct CommonArgs {
    std::string species = "Ca40+";
    std::string species_file;
    double omega_z_mhz = 1.0;
    int n_ions = 2;
    double waist_um = 30.0;
    double wavelength_nm = 1064.0;
    std::string target = "half-hbar-omega";
    std::string mode = "fine";
    std::string format = "human";
    std::string out_path;
};

void add_common(CLI::App* cmd, CommonArgs& a, bool with_beam = true) {
    cmd->add_option("--species", a.species, "built-in species name")
        ->capture_default_str();
    cmd->add_option("--species-file", a.species_file,
                    "JSON species document to use instead of a built-in");
    cmd->add_option("--omega-z-mhz", a.omega_z_mhz,
                    "axial frequency, MHz (omega_z = 2 pi x this)")
        ->capture_default_str();
    cmd->add_option("--n", a.n_ions, "number of ions")->capture_default_str();
    if (with_beam) {
        cmd->add_option("--waist-um", a.waist_um, "beam waist, um")
            ->capture_default_str();
        cmd->add_option("--wavelength-nm", a.wavelength_nm,
                        "beam wavelength, nm")
            ->capture_default_str();
        cmd->add_option("--target-e", a.target,
                        "target splitting: half-hbar-omega, quanta:X or "
                        "joules:X")
            ->capture_default_str();
        cmd->add_option("--mode", a.mode, "line treatment: fine or coarse")
            ->capture_default_str();
    }
    cmd->add_option("--format", a.format, "output: human, csv or json")
        ->capture_default_str();
    cmd->add_option("--out", a.out_path, "write the report here, not stdout");
}

TargetSplitting parse_target(const std::string& text) {
    TargetSplitting t;
    if (text == "half-hbar-omega") return t;
    if (text.rfind("quanta:", 0) == 0) {
        t.quanta = std::stod(text.substr(7));
        if (!(t.quanta > 0)) throw ValidationError("target must be positive");
        return t;
    }
    if (text.rfind("joules:", 0) == 0) {
        t.absolute = true;
        t.joules = std::stod(text.substr(7));
        if (!(t.joules > 0)) throw ValidationError("target must be positive");
        return t;
    }
    throw ValidationError("cannot parse --target-e '" + text +
                          "' (half-hbar-omega, quanta:X or joules:X)");
}

IonSpecies resolve_species(const CommonArgs& a) {
    if (!a.species_file.empty()) {
        auto all = load_species_file(a.species_file);
        for (auto& s : all)
            if (s.name == a.species) return s;
        if (all.size() == 1 && a.species == "Ca40+") return all[0];
        throw NotFoundError("species '" + a.species + "' not found in " +
                            a.species_file);
    }
    return builtin_species(a.species);
}

Scenario make_scenario(const CommonArgs& a) {
    Scenario sc;
    sc.species = resolve_species(a);
    sc.omega_z = two_pi * a.omega_z_mhz * 1e6;
    sc.n_ions = a.n_ions;
    sc.waist = a.waist_um * 1e-6;
    sc.wavelength = a.wavelength_nm * 1e-9;
    sc.target = parse_target(a.target);
    sc.mode = psi_mode_from_string(a.mode);
    return sc;
}

void echo_scenario(Report& r, const Scenario& sc) {
    auto& e = r.doc["scenario"];
    e["species"] = sc.species.name;
    e["n_ions"] = sc.n_ions;
    e["omega_z_mhz"] = sc.omega_z / two_pi / 1e6;
    e["waist_um"] = sc.waist * 1e6;
    e["wavelength_nm"] = sc.wavelength * 1e9;
    e["target_e_joules"] = sc.target.resolve(sc.omega_z);
    e["mode"] = to_string(sc.mode);
}

int emit(const Report& r, const CommonArgs& a) {
    std::string text = render(r, report_format_from_string(a.format));
    if (a.out_path.empty()) {
        std::cout << text;
    } else {
        std::ofstream out(a.out_path);
        if (!out) throw ValidationError("cannot write '" + a.out_path + "'");
        out << text;
    }
    return 0;
}

ReportJson num_or_null(double v) {
    if (std::isnan(v) || std::isinf(v)) return nullptr;
    return v;
}

int cmd_species_list(const CommonArgs& a) {
    Report r = make_report("species list");
    std::vector<std::vector<ReportJson>> rows;
    for (const auto& name : builtin_species_names()) {
        const auto& s = builtin_species(name);
        rows.push_back({name, s.mass / constants::amu, to_string(s.qubit_kind),
                        static_cast<int>(s.transitions.size()),
                        s.d52_lifetime});
    }
    set_table(r, {"name", "mass_amu", "qubit_kind", "lines", "d_lifetime_s"},
              rows);
    add_provenance(r, nullptr);
    return emit(r, a);
}

int cmd_species_validate(const std::string& path, const CommonArgs& a) {
    auto all = load_species_file(path);
    Report r = make_report("species validate");
    r.doc["results"]["file"] = path;
    r.doc["results"]["valid_species"] = static_cast<int>(all.size());
    std::vector<std::vector<ReportJson>> rows;
    for (const auto& s : all) {
        // serialized form must reload to the same record
        auto back = load_species(serialize_species(s));
        rows.push_back({s.name, to_string(s.qubit_kind),
                        static_cast<int>(s.transitions.size()),
                        back.size() == 1 && back[0].name == s.name});
    }
    set_table(r, {"name", "qubit_kind", "lines", "round_trip"}, rows);
    add_provenance(r, all.empty() ? nullptr : &all[0]);
    return emit(r, a);
}

int cmd_chain(const CommonArgs& a) {
    Scenario sc = make_scenario(a);
    TrapConfig trap{sc.omega_z, sc.n_ions, &sc.species};
    ChainGeometry g = equilibrium_positions(trap);

    Report r = make_report("chain");
    echo_scenario(r, sc);
    r.doc["scenario"].erase("waist_um");
    r.doc["scenario"].erase("wavelength_nm");
    r.doc["scenario"].erase("target_e_joules");
    r.doc["scenario"].erase("mode");

    auto& res = r.doc["results"];
    res["length_scale_um"] = g.length_scale * 1e6;
    if (g.n() >= 2) res["min_spacing_um"] = g.min_spacing * 1e6;
    res["sigma_z_nm"] = g.sigma_z * 1e9;
    res["mode_frequencies_mhz"] = ReportJson::array();
    res["mode_frequency_over_omega_z"] = ReportJson::array();
    for (double nu : g.mode_frequencies) {
        res["mode_frequencies_mhz"].push_back(nu / two_pi / 1e6);
        res["mode_frequency_over_omega_z"].push_back(nu / g.omega_z);
    }

    std::vector<std::vector<ReportJson>> rows;
    for (int i = 0; i < g.n(); ++i)
        rows.push_back({i + 1, g.positions[i] * 1e6});
    set_table(r, {"ion", "position_um"}, rows);
    add_warnings(r, g.warnings);
    add_provenance(r, &sc.species);
    return emit(r, a);
}

int cmd_sweep(const CommonArgs& a, const std::string& var, double from,
              double to, int points, const std::string& spacing) {
    SweepSpec spec;
    spec.variable = sweep_variable_from_string(var);
    spec.points = points;
    if (spacing == "log")
        spec.log_spacing = true;
    else if (spacing != "linear")
        throw ValidationError("spacing must be linear or log");
    spec.scenario = make_scenario(a);

    // CLI ranges arrive in display units
    double unit = 1.0;
    std::string x_name;
    switch (spec.variable) {
        case SweepVariable::wavelength: unit = 1e-9; x_name = "wavelength_nm"; break;
        case SweepVariable::waist: unit = 1e-6; x_name = "waist_um"; break;
        case SweepVariable::omega_z: unit = two_pi * 1e6; x_name = "omega_z_mhz"; break;
        case SweepVariable::offset: unit = 1e-6; x_name = "offset_um"; break;
    }
    spec.min = from * unit;
    spec.max = to * unit;

    auto rows = run_sweep(spec);

    Report r = make_report("sweep");
    echo_scenario(r, spec.scenario);
    r.doc["scenario"]["sweep_variable"] = to_string(spec.variable);
    r.doc["scenario"]["points"] = points;
    r.doc["scenario"]["spacing"] = spec.log_spacing ? "log" : "linear";

    std::vector<std::string> cols;
    if (spec.variable != SweepVariable::wavelength) cols.push_back(x_name);
    cols.insert(cols.end(), {"wavelength_nm", "power_w", "scatter_per_s",
                             "coherence_s", "kappa", "psi", "warnings"});
    std::vector<std::vector<ReportJson>> table;
    int gaps = 0;
    for (const auto& row : rows) {
        std::vector<ReportJson> cells;
        if (spec.variable != SweepVariable::wavelength)
            cells.push_back(row.x / unit);
        if (row.gap) {
            ++gaps;
            cells.push_back(row.wavelength * 1e9);
            for (int k = 0; k < 5; ++k) cells.push_back(nullptr);
            cells.push_back(row.warnings);
        } else {
            cells.push_back(row.wavelength * 1e9);
            cells.push_back(row.power);
            cells.push_back(row.scatter);
            cells.push_back(num_or_null(row.coherence));
            cells.push_back(row.kappa_eff);
            cells.push_back(row.psi);
            cells.push_back(row.warnings);
        }
        table.push_back(std::move(cells));
    }
    set_table(r, cols, table);
    r.doc["results"]["rows"] = static_cast<int>(rows.size());
    r.doc["results"]["gap_rows"] = gaps;
    add_provenance(r, &spec.scenario.species);
    return emit(r, a);
}

void put_plan(Report& r, const AddressingPlan& plan) {
    auto& p = r.doc["results"]["plan"];
    p["regime"] = to_string(plan.regime);
    p["gamma_res_hz"] = plan.gamma_res / two_pi;
    p["selectivity_margin_hz"] = num_or_null(plan.selectivity_margin / two_pi);
    p["crosstalk_bound"] = plan.crosstalk_bound;
    p["mode_collisions_mhz"] = ReportJson::array();
    for (double nu : plan.mode_collision_flags)
        p["mode_collisions_mhz"].push_back(nu / two_pi / 1e6);
    r.doc["verdict"] = plan.feasible ? "feasible" : "infeasible";
}

void put_mechanical(Report& r, const MechanicalCheck& mc) {
    auto& m = r.doc["results"]["mechanical"];
    m["f_grad_estimate_n"] = mc.f_grad_estimate;
    m["f_grad_exact_n"] = mc.f_grad_exact;
    m["trap_force_n"] = mc.trap_force;
    m["force_ratio"] = mc.force_ratio;
    m["delta_z_shift_m"] = mc.delta_z_shift;
    m["spread_ratio"] = mc.spread_ratio;
    m["min_rise_time_s"] = mc.min_rise_time;
    m["pass"] = mc.pass;
}

int cmd_address(const CommonArgs& a, const std::string& regime,
                double gamma_res_hz, double pulse_us, double rise_ns,
                int max_order, int thermal_n) {
    Scenario sc = make_scenario(a);
    TrapConfig trap{sc.omega_z, sc.n_ions, &sc.species};
    ChainGeometry g = equilibrium_positions(trap);
    double gamma_res = two_pi * gamma_res_hz;

    PowerSolve solve =
        required_power(sc.species, trap, sc.waist, sc.wavelength,
                       sc.target.resolve(sc.omega_z), sc.mode);
    solve.beam.rise_time = rise_ns * 1e-9;
    StarkProfile profile = solve.profile;

    AddressingPlan plan;
    if (regime == "A") {
        plan = plan_case_a(profile, g, gamma_res);
    } else if (regime == "B") {
        const TransitionLine* qubit = sc.species.qubit_line();
        if (qubit == nullptr)
            throw ValidationError("species has no qubit line to probe");
        double k_probe = qubit->angular_frequency / constants::c;
        plan = plan_case_b(profile, g, gamma_res, k_probe, max_order,
                           thermal_n);
    } else {
        throw ValidationError("--case must be A or B");
    }

    MechanicalCheck mc = mechanical_check(profile, g, solve.beam, trap);
    PhaseLedger ledger = phase_ledger(profile, pulse_us * 1e-6);

    Report r = make_report("address");
    echo_scenario(r, sc);
    r.doc["scenario"]["case"] = regime;
    r.doc["scenario"]["gamma_res_hz"] = gamma_res_hz;
    r.doc["scenario"]["pulse_us"] = pulse_us;

    auto& res = r.doc["results"];
    res["power_w"] = solve.power;
    res["kappa"] = solve.kappa_used;
    res["psi"] = solve.response.psi;
    res["up_shifted_ion"] = solve.up_shifted_ion + 1;
    res["total_scatter_per_s"] = profile.total_scatter;
    res["coherence_s"] = num_or_null(profile.coherence_time);
    put_plan(r, plan);
    put_mechanical(r, mc);

    std::vector<std::vector<ReportJson>> rows;
    for (int i = 0; i < g.n(); ++i)
        rows.push_back({i + 1, g.positions[i] * 1e6,
                        profile.per_ion_shift[i] / two_pi,
                        profile.per_ion_scatter[i], ledger.phase[i],
                        ledger.phase_mod_2pi[i]});
    set_table(r, {"ion", "position_um", "shift_hz", "scatter_per_s",
                  "phase_rad", "phase_mod_2pi"},
              rows);
    add_warnings(r, profile.warnings);
    add_warnings(r, plan.warnings);
    add_provenance(r, &sc.species);
    int rc = emit(r, a);
    return rc == 0 && !plan.feasible ? 2 : rc;
}

int cmd_pair(const CommonArgs& a, int ion_i, int ion_j, double gamma_res_hz,
             double max_power_w) {
    Scenario sc = make_scenario(a);
    TrapConfig trap{sc.omega_z, sc.n_ions, &sc.species};
    ChainGeometry g = equilibrium_positions(trap);

    BeamConfig tmpl = BeamConfig::from_power(sc.wavelength, sc.waist,
                                             max_power_w);
    PairGatePlan pg = pair_gate_plan(g, sc.species, tmpl, ion_i - 1, ion_j - 1,
                                     two_pi * gamma_res_hz, sc.mode);

    Report r = make_report("pair");
    echo_scenario(r, sc);
    r.doc["scenario"].erase("target_e_joules");
    r.doc["scenario"]["ions"] = ReportJson::array({ion_i, ion_j});
    r.doc["scenario"]["gamma_res_hz"] = gamma_res_hz;
    r.doc["scenario"]["max_power_w"] = max_power_w;

    auto& res = r.doc["results"];
    res["beam_center_um"] = pg.beam.center_offset * 1e6;
    res["power_w"] = pg.beam.power;
    res["common_shift_hz"] = pg.common_shift / two_pi;
    res["residual_mismatch_hz"] = pg.residual_mismatch / two_pi;
    res["margin_hz"] = num_or_null(pg.best_margin / two_pi);
    put_plan(r, pg.plan);

    std::vector<std::vector<ReportJson>> rows;
    for (int i = 0; i < g.n(); ++i)
        rows.push_back({i + 1, g.positions[i] * 1e6,
                        pg.plan.per_ion_resonance[i] / two_pi,
                        i == ion_i - 1 || i == ion_j - 1});
    set_table(r, {"ion", "position_um", "shift_hz", "addressed"}, rows);
    add_warnings(r, pg.plan.warnings);
    add_provenance(r, &sc.species);
    int rc = emit(r, a);
    return rc == 0 && !pg.plan.feasible ? 2 : rc;
}

int cmd_zeeman(const CommonArgs& a, const std::string& pol_name,
               bool fixed_wavelength) {
    CommonArgs args = a;
    Scenario sc = make_scenario(args);
    IonSpecies zs = sc.species.qubit_kind == QubitKind::zeeman_ground
                        ? sc.species
                        : as_zeeman_qubit(sc.species);
    TrapConfig trap{sc.omega_z, sc.n_ions, &zs};
    double target = sc.target.resolve(sc.omega_z);

    Polarization pol;
    if (pol_name == "sigma+")
        pol = Polarization::sigma_plus;
    else if (pol_name == "sigma-")
        pol = Polarization::sigma_minus;
    else
        throw ValidationError("--polarization must be sigma+ or sigma-");

    Report r = make_report("zeeman");
    echo_scenario(r, sc);
    r.doc["scenario"]["polarization"] = pol_name;
    r.doc["scenario"]["qubit"] = "ground-state Zeeman pair";

    ZeemanOptimum opt;
    if (fixed_wavelength) {
        ChainGeometry g = equilibrium_positions(trap);
        int ca = (g.n() - 1) / 2, cb = ca + 1;
        double mid = 0.5 * (g.positions[ca] + g.positions[cb]);
        double dz = g.positions[cb] - g.positions[ca];
        StarkResponse resp = zeeman_response(
            zs, two_pi * constants::c / sc.wavelength, pol);
        double k = kappa(dz, sc.waist);
        double i0 = target / (constants::hbar * k * std::abs(resp.psi));
        opt.wavelength = sc.wavelength;
        opt.beam = BeamConfig::from_peak_intensity(sc.wavelength, sc.waist, i0,
                                                   mid + 0.5 * sc.waist, pol);
        opt.power = opt.beam.power;
        opt.profile = zeeman_qubit_shift(zs, g, opt.beam);
    } else {
        r.doc["scenario"].erase("wavelength_nm");
        opt = zeeman_optimum(zs, trap, sc.waist, target, pol);
    }

    auto& res = r.doc["results"];
    res["wavelength_nm"] = opt.wavelength * 1e9;
    res["power_mw"] = opt.power * 1e3;
    res["total_scatter_per_s"] = opt.profile.total_scatter;
    res["coherence_s"] = num_or_null(opt.profile.coherence_time);
    res["psi_differential"] = opt.profile.response.psi;

    std::vector<std::vector<ReportJson>> rows;
    for (const auto& line : opt.profile.response.per_line)
        rows.push_back({line.label, line.shift_coefficient,
                        line.scatter_coefficient});
    set_table(r, {"line", "shift_coeff_rad_s_per_w_m2",
                  "scatter_coeff_per_s_per_w_m2"},
              rows);
    add_warnings(r, opt.profile.warnings);
    add_provenance(r, &zs);
    return emit(r, args);
}

}  // namespace

int run_cli(int argc, const char* const* argv) {
    CLI::App app{"position-dependent ac Stark shift designer for trapped-ion "
                 "qubit addressing"};
    app.require_subcommand(1);

    CommonArgs a;

    auto* species = app.add_subcommand("species", "species data utilities");
    species->require_subcommand(1);
    auto* sp_list = species->add_subcommand("list", "list built-in species");
    add_common(sp_list, a, false);
    std::string validate_path;
    auto* sp_val =
        species->add_subcommand("validate", "validate a species JSON file");
    sp_val->add_option("--file", validate_path, "species document")->required();
    add_common(sp_val, a, false);

    auto* chain =
        app.add_subcommand("chain", "equilibrium positions and normal modes");
    add_common(chain, a, false);

    auto* sweep = app.add_subcommand(
        "sweep", "required power and scattering across a parameter range");
    add_common(sweep, a);
    std::string var = "wavelength", spacing = "linear";
    double from = 500, to = 12000;
    int points = 100;
    sweep->add_option("--var", var,
                      "swept variable: wavelength, waist, omega_z or offset")
        ->capture_default_str();
    sweep->add_option("--from", from,
                      "range start (nm, um or MHz per --var)")
        ->capture_default_str();
    sweep->add_option("--to", to, "range end")->capture_default_str();
    sweep->add_option("--points", points, "sample count")
        ->capture_default_str();
    sweep->add_option("--spacing", spacing, "linear or log")
        ->capture_default_str();

    auto* address = app.add_subcommand(
        "address", "per-ion addressing plan with safety checks");
    add_common(address, a);
    std::string regime = "A";
    double gamma_res_hz = 1000.0, pulse_us = 1.0, rise_ns = 1000.0;
    int max_order = 50, thermal_n = 0;
    address->add_option("--case", regime, "addressing regime: A or B")
        ->capture_default_str();
    address->add_option("--gamma-res-hz", gamma_res_hz,
                        "probe spectral resolution, Hz")
        ->capture_default_str();
    address->add_option("--pulse-us", pulse_us, "pulse duration, us")
        ->capture_default_str();
    address->add_option("--rise-time-ns", rise_ns, "beam rise time, ns")
        ->capture_default_str();
    address->add_option("--max-sideband-order", max_order,
                        "sideband enumeration cap")
        ->capture_default_str();
    address->add_option("--thermal-n", thermal_n, "motional occupation")
        ->capture_default_str();

    auto* pair = app.add_subcommand(
        "pair", "shared-resonance beam placement for a two-ion gate");
    add_common(pair, a);
    std::vector<int> ions{1, 2};
    double max_power_w = 20.0;
    double pair_gamma_hz = 1000.0;
    pair->add_option("--ions", ions, "1-based target pair, e.g. --ions 1 3")
        ->expected(2);
    pair->add_option("--gamma-res-hz", pair_gamma_hz,
                     "probe spectral resolution, Hz")
        ->capture_default_str();
    pair->add_option("--max-power-w", max_power_w, "available beam power cap")
        ->capture_default_str();

    auto* zeeman = app.add_subcommand(
        "zeeman", "ground-state Zeeman qubit: scattering-optimal wavelength");
    add_common(zeeman, a);
    std::string pol_name = "sigma+";
    zeeman->add_option("--polarization", pol_name, "sigma+ or sigma-")
        ->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1;
    }

    try {
        if (sp_list->parsed()) return cmd_species_list(a);
        if (sp_val->parsed()) return cmd_species_validate(validate_path, a);
        if (chain->parsed()) return cmd_chain(a);
        if (sweep->parsed())
            return cmd_sweep(a, var, from, to, points, spacing);
        if (address->parsed())
            return cmd_address(a, regime, gamma_res_hz, pulse_us, rise_ns,
                               max_order, thermal_n);
        if (pair->parsed())
            return cmd_pair(a, ions[0], ions[1], pair_gamma_hz, max_power_w);
        if (zeeman->parsed())
            return cmd_zeeman(a, pol_name,
                              zeeman->count("--wavelength-nm") > 0);
    } catch (const RegimeError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const NumericError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}

}  // namespace ionstark

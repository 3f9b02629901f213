#pragma once

// Ion species registry: qubit level definitions and dipole-transition tables
// (angular frequencies, decay rates, polarization branch weights), with
// ingestion from JSON documents, validation, and unit normalization.

#include <string>
#include <vector>

namespace ionstark {

enum class QubitKind { optical_sd, zeeman_ground };
enum class Polarization { linear_pi, sigma_plus, sigma_minus };

const char* to_string(QubitKind k);
const char* to_string(Polarization p);

// Term-symbol label, e.g. "4P3/2", "3D5/2(mJ=+5/2)".
struct LevelLabel {
    std::string raw;
    int n = 0;         // principal quantum number
    char l = '?';      // 'S', 'P', 'D', 'F'
    int two_j = 0;     // 2J
    bool has_mj = false;
    int two_mj = 0;    // 2 mJ when labeled

    bool operator==(const LevelLabel& o) const { return raw == o.raw; }
};

LevelLabel parse_level_label(const std::string& text);

// How a line participates in the shift/scattering sums:
//   sp_dipole  S1/2 -> nP_J   shifts the lower qubit state
//   df_dipole  D5/2 -> n'F_J  shifts the upper qubit state
//   qubit_e2   S1/2 -> D5/2   the qubit transition itself; feeds only the
//                             D5/2 lifetime and the probe wavevector
enum class LineRole { sp_dipole, df_dipole, qubit_e2 };

struct TransitionLine {
    LevelLabel lower;
    LevelLabel upper;
    double angular_frequency = 0;  // rad/s
    double decay_rate = 0;         // rad/s, Einstein A of this line
    double pi_weight = 0;          // squared Clebsch-Gordan factors for the
    double sigma_plus_weight = 0;  // labeled qubit sublevel and each beam
    double sigma_minus_weight = 0; // polarization
    std::string source_citation;
    LineRole role = LineRole::sp_dipole;

    double weight(Polarization p) const;
};

struct IonSpecies {
    std::string name;
    double mass = 0;  // kg
    int charge = 1;   // elementary charges
    QubitKind qubit_kind = QubitKind::optical_sd;
    int series_truncation = 0;  // highest n' included in the D-F series
    double d52_lifetime = 0;    // s, cached as 1/sum(decay channels out of D5/2)
    std::string notes;
    std::vector<TransitionLine> transitions;

    std::vector<const TransitionLine*> lines(LineRole role) const;
    // The electric-quadrupole qubit line (optical_SD); nullptr if absent.
    const TransitionLine* qubit_line() const;
};

// Parses one JSON species document or an array of them; validates and caches
// derived quantities. Throws ValidationError naming the offending key.
std::vector<IonSpecies> load_species(const std::string& document);
std::vector<IonSpecies> load_species_file(const std::string& path);

// Canonical JSON form; load_species(serialize_species(s)) == s field-wise.
std::string serialize_species(const IonSpecies& s);

void validate_species(const IonSpecies& s);

// Embedded, pre-validated records (Ca40+, Sr88+, Ba138+).
const IonSpecies& builtin_species(const std::string& name);
std::vector<std::string> builtin_species_names();

// Same atom viewed as a ground-state Zeeman qubit (mJ = +-1/2). Requires a
// valid S-P group with sigma weights.
IonSpecies as_zeeman_qubit(const IonSpecies& s);

}  // namespace ionstark

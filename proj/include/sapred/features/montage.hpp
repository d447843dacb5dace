#pragma once

#include <array>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "sapred/common.hpp"
#include "sapred/csv.hpp"

namespace sapred {

enum class Region { Frontal, Medial, Parietal, Occipital };

inline const char* region_name(Region r) {
    switch (r) {
        case Region::Frontal: return "frontal";
        case Region::Medial: return "medial";
        case Region::Parietal: return "parietal";
        case Region::Occipital: return "occipital";
    }
    return "?";
}

inline std::optional<Region> region_from_name(std::string_view s) {
    if (s == "frontal") return Region::Frontal;
    if (s == "medial" || s == "central") return Region::Medial;
    if (s == "parietal") return Region::Parietal;
    if (s == "occipital") return Region::Occipital;
    return std::nullopt;
}

struct FnirsChannelDef {
    std::string name;  // e.g. S1D2
    int source = 0, detector = 0;
    double distance_mm = 30.0;
    double wavelength1_nm = 760.0, wavelength2_nm = 850.0;
};

struct ExtinctionRow {
    double wavelength_nm = 0;
    double eps_hbo = 0, eps_hbr = 0;  // 1/(uM*cm), decadic
};

// Sensor geometry and optical constants, normally loaded from the dataset's
// montage file. FRP electrodes are fixed to O1/O2/POz; the connectivity
// reference is the montage's occipital-tagged electrodes.
struct Montage {
    std::vector<std::pair<std::string, Region>> electrodes;
    std::vector<FnirsChannelDef> fnirs_channels;
    std::vector<ExtinctionRow> extinction;
    double dpf = 6.0;

    static constexpr std::array<const char*, 3> frp_electrodes = {"O1", "O2", "POz"};

    std::vector<std::string> electrodes_in(Region r) const {
        std::vector<std::string> out;
        for (const auto& [label, region] : electrodes)
            if (region == r) out.push_back(label);
        return out;
    }

    const ExtinctionRow* extinction_at(double wavelength_nm) const {
        for (const auto& row : extinction)
            if (std::abs(row.wavelength_nm - wavelength_nm) < 0.5) return &row;
        return nullptr;
    }

    void validate() const {
        for (const char* frp : frp_electrodes) {
            bool found = false;
            for (const auto& [label, region] : electrodes)
                if (label == frp) found = true;
            if (!found) throw Error(std::string("montage lacks FRP electrode ") + frp);
        }
    }
};

// Plain key-value montage file:
//   electrode <label> <region>
//   fnirs <name> <source> <detector> <distance_mm> <wl1_nm> <wl2_nm>
//   extinction <wavelength_nm> <eps_hbo> <eps_hbr>
//   dpf <value>
inline Montage parse_montage(const std::string& content) {
    Montage m;
    for_each_line(content, [&](std::size_t lineno, std::string_view line) {
        std::string text(line);
        auto hash = text.find('#');
        if (hash != std::string::npos) text.resize(hash);
        std::istringstream ss(text);
        std::string key;
        if (!(ss >> key)) return;
        auto ctx = "montage line " + std::to_string(lineno);
        if (key == "electrode") {
            std::string label, region;
            if (!(ss >> label >> region)) throw Error(ctx + ": expected label and region");
            auto r = region_from_name(region);
            if (!r) throw Error(ctx + ": unknown region '" + region + "'");
            m.electrodes.emplace_back(label, *r);
        } else if (key == "fnirs") {
            FnirsChannelDef def;
            if (!(ss >> def.name >> def.source >> def.detector >> def.distance_mm >>
                  def.wavelength1_nm >> def.wavelength2_nm))
                throw Error(ctx + ": expected name source detector distance wl1 wl2");
            m.fnirs_channels.push_back(def);
        } else if (key == "extinction") {
            ExtinctionRow row;
            if (!(ss >> row.wavelength_nm >> row.eps_hbo >> row.eps_hbr))
                throw Error(ctx + ": expected wavelength eps_hbo eps_hbr");
            m.extinction.push_back(row);
        } else if (key == "dpf") {
            if (!(ss >> m.dpf)) throw Error(ctx + ": expected value");
        } else {
            throw Error(ctx + ": unknown key '" + key + "'");
        }
    });
    m.validate();
    return m;
}

inline Montage load_montage(const std::string& path) { return parse_montage(read_file(path)); }

inline std::string montage_to_string(const Montage& m) {
    std::string out;
    out += "# electrode <label> <region>\n";
    for (const auto& [label, region] : m.electrodes)
        out += "electrode " + label + " " + region_name(region) + "\n";
    out += "# fnirs <name> <source> <detector> <distance_mm> <wl1_nm> <wl2_nm>\n";
    for (const auto& f : m.fnirs_channels)
        out += "fnirs " + f.name + " " + std::to_string(f.source) + " " +
               std::to_string(f.detector) + " " + format_double(f.distance_mm) + " " +
               format_double(f.wavelength1_nm) + " " + format_double(f.wavelength2_nm) + "\n";
    out += "# extinction <wavelength_nm> <eps_hbo_per_uM_cm> <eps_hbr_per_uM_cm>\n";
    for (const auto& e : m.extinction)
        out += "extinction " + format_double(e.wavelength_nm) + " " + format_double(e.eps_hbo) +
               " " + format_double(e.eps_hbr) + "\n";
    out += "dpf " + format_double(m.dpf) + "\n";
    return out;
}

// 16-electrode cap with the O1/O2/POz trio tagged occipital, plus the
// optode pairs referenced by the packaged coefficient tables. Extinction
// values are the Gratzer/Cope compilation at 760/850 nm, converted to
// 1/(uM*cm).
inline Montage default_paper_montage() {
    Montage m;
    const char* frontal[] = {"Fp1", "Fp2", "F7", "F3", "Fz", "F4", "F8"};
    const char* medial[] = {"C3", "Cz", "C4"};
    const char* parietal[] = {"P3", "Pz", "P4"};
    const char* occipital[] = {"O1", "O2", "POz"};
    for (auto e : frontal) m.electrodes.emplace_back(e, Region::Frontal);
    for (auto e : medial) m.electrodes.emplace_back(e, Region::Medial);
    for (auto e : parietal) m.electrodes.emplace_back(e, Region::Parietal);
    for (auto e : occipital) m.electrodes.emplace_back(e, Region::Occipital);

    const std::pair<int, int> pairs[] = {{1, 2}, {2, 1}, {2, 3}, {3, 1}, {3, 4}, {4, 2},
                                         {4, 4}, {4, 5}, {5, 3}, {5, 6}, {6, 4}, {6, 6},
                                         {6, 7}, {7, 5}, {7, 7}, {8, 6}, {8, 7}};
    for (auto [s, d] : pairs) {
        FnirsChannelDef def;
        def.name = "S" + std::to_string(s) + "D" + std::to_string(d);
        def.source = s;
        def.detector = d;
        m.fnirs_channels.push_back(def);
    }
    m.extinction.push_back({760.0, 1486.5865e-6, 3843.707e-6});
    m.extinction.push_back({850.0, 2526.391e-6, 1798.643e-6});
    m.dpf = 6.0;
    return m;
}

// Reduced optode set used by the synthetic benchmark datasets to keep the
// feature space small; EEG side is identical to the paper montage.
inline Montage default_synth_montage() {
    Montage m = default_paper_montage();
    m.fnirs_channels.resize(2);
    return m;
}

}  // namespace sapred

#pragma once

// Source-description files and CSV figure output. The config format is a
// flat `key = value` text file (a TOML-compatible subset): one assignment
// per line, `#` starts a comment, keys name PhysicalSource fields directly,
// plus one convenience spelling `pump_bw_fwhm` for the pump bandwidth as an
// intensity FWHM. CSV files are written atomically (temp + rename) with all
// floats at nine significant digits.

#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <istream>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "spdc/constants.hpp"
#include "spdc/errors.hpp"
#include "spdc/model.hpp"

namespace spdc {

namespace detail {

inline std::string trim(std::string_view s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return std::string(s.substr(b, e - b));
}

inline double parse_number(const std::string& text, const std::string& where) {
    const std::string tok = trim(text);
    if (tok.empty()) throw ValidationError("config: missing value " + where);
    char* end = nullptr;
    const double v = std::strtod(tok.c_str(), &end);
    if (end != tok.c_str() + tok.size() || !std::isfinite(v))
        throw ValidationError("config: '" + tok + "' is not a finite number " + where);
    return v;
}

// Every assignable key. m_qpm and pump_bw_fwhm need bespoke handling, so the
// pointer is null for those; the map still serves as the known-key registry.
inline const std::map<std::string, double PhysicalSource::*>& source_keys() {
    static const std::map<std::string, double PhysicalSource::*> keys = {
        {"lambda_p", &PhysicalSource::lambda_p},
        {"lambda_s", &PhysicalSource::lambda_s},
        {"lambda_i", &PhysicalSource::lambda_i},
        {"n_p", &PhysicalSource::n_p},
        {"n_s", &PhysicalSource::n_s},
        {"n_i", &PhysicalSource::n_i},
        {"np_g", &PhysicalSource::np_g},
        {"ns_g", &PhysicalSource::ns_g},
        {"ni_g", &PhysicalSource::ni_g},
        {"L", &PhysicalSource::L},
        {"Lambda", &PhysicalSource::Lambda},
        {"m_qpm", nullptr},
        {"chi_eff", &PhysicalSource::chi_eff},
        {"epsilon", &PhysicalSource::epsilon},
        {"N_p", &PhysicalSource::N_p},
        {"w_p", &PhysicalSource::w_p},
        {"w_s", &PhysicalSource::w_s},
        {"w_i", &PhysicalSource::w_i},
        {"pump_bw", &PhysicalSource::pump_bw},
        {"pump_bw_fwhm", nullptr},
    };
    return keys;
}

inline void apply_key(PhysicalSource& src, const std::string& key, double value) {
    if (key == "m_qpm") {
        const double r = std::round(value);
        if (std::abs(value - r) > 1e-9 || r < 0.0)
            throw ValidationError("config: m_qpm must be a nonnegative integer");
        src.m_qpm = static_cast<int>(r);
        return;
    }
    if (key == "pump_bw_fwhm") {
        src.pump_bw = value / fwhm_per_rms;
        return;
    }
    src.*(source_keys().at(key)) = value;
}

// Splits "key = value" (or "key=value" from a --set override), checks the key
// against the registry, and stages the assignment. Duplicates within one
// layer are rejected; an override replaces whatever the file said, and an
// override of either pump-bandwidth spelling retires the other.
inline void stage_assignment(std::map<std::string, double>& staged, const std::string& line,
                             const std::string& where, bool is_override) {
    const std::size_t eq = line.find('=');
    if (eq == std::string::npos)
        throw ValidationError("config: expected key = value " + where);
    const std::string key = trim(line.substr(0, eq));
    if (key.empty()) throw ValidationError("config: missing key " + where);
    if (source_keys().find(key) == source_keys().end())
        throw ValidationError("config: unknown key '" + key + "' " + where);
    const double value = parse_number(line.substr(eq + 1), where);
    if (is_override) {
        if (key == "pump_bw") staged.erase("pump_bw_fwhm");
        if (key == "pump_bw_fwhm") staged.erase("pump_bw");
        staged[key] = value;
        return;
    }
    if (!staged.emplace(key, value).second)
        throw ValidationError("config: duplicate key '" + key + "' " + where);
}

}  // namespace detail

// Parses a source description from a stream; `name` labels error messages.
// Overrides are "key=value" strings applied on top of the file, in order.
inline PhysicalSource parse_source(std::istream& in, const std::string& name,
                                   const std::vector<std::string>& overrides = {}) {
    std::map<std::string, double> staged;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (const std::size_t hash = line.find('#'); hash != std::string::npos)
            line.erase(hash);
        line = detail::trim(line);
        if (line.empty()) continue;
        detail::stage_assignment(staged, line, "at " + name + ":" + std::to_string(lineno),
                                 /*is_override=*/false);
    }
    if (staged.count("pump_bw") && staged.count("pump_bw_fwhm"))
        throw ValidationError("config: pump_bw and pump_bw_fwhm are mutually exclusive in " +
                              name);
    for (const std::string& ov : overrides)
        detail::stage_assignment(staged, ov, "in override '" + ov + "'", /*is_override=*/true);

    PhysicalSource src;
    for (const auto& [key, value] : staged) detail::apply_key(src, key, value);
    src.validate();
    return src;
}

inline PhysicalSource load_source(const std::filesystem::path& path,
                                  const std::vector<std::string>& overrides = {}) {
    std::ifstream in(path);
    if (!in) throw ValidationError("config: cannot open '" + path.string() + "'");
    return parse_source(in, path.filename().string(), overrides);
}

// Nine significant digits: enough to round-trip the physically meaningful
// part of every quantity while keeping files diffable.
inline std::string format_g9(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.9g", v);
    return buf;
}

// Writes header + rows, landing the bytes in a sibling temporary first and
// renaming into place so readers never observe a partial file.
inline void write_csv(const std::filesystem::path& path, const std::string& header,
                      const std::vector<std::vector<std::string>>& rows) {
    const std::filesystem::path tmp = path.string() + ".tmp";
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw ValidationError("csv: cannot write '" + tmp.string() + "'");
    out << header << '\n';
    for (const auto& row : rows) {
        for (std::size_t k = 0; k < row.size(); ++k) {
            if (k > 0) out << ',';
            out << row[k];
        }
        out << '\n';
    }
    out.flush();
    const bool ok = static_cast<bool>(out);
    out.close();
    if (!ok) {
        std::error_code ec;
        std::filesystem::remove(tmp, ec);
        throw ValidationError("csv: write failed for '" + tmp.string() + "'");
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) {
        std::error_code ec2;
        std::filesystem::remove(tmp, ec2);
        throw ValidationError("csv: cannot replace '" + path.string() + "': " + ec.message());
    }
}

}  // namespace spdc

#include "qkerr/device.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "qkerr/errors.hpp"

namespace qkerr {

namespace {

enum class Kind { freq, angular, real, integer, length, volume, path };

struct KeySpec {
    const char* key;
    Kind kind;
    bool required;
    double lo, hi;        // closed bounds unless excl flags set
    bool lo_excl, hi_excl;
};

constexpr double kInf = 1e308;

// Keys accepted on every platform.
constexpr KeySpec kCommonKeys[] = {
    {"measured_chi", Kind::freq, false, -kInf, kInf, false, false},
    {"measured_chi_unc", Kind::freq, false, 0.0, kInf, false, false},
    {"kappa", Kind::freq, false, 0.0, kInf, true, false},
    {"reference_deviation_pct", Kind::real, false, 0.0, kInf, false, false},
    {"eta_kernel", Kind::real, false, 0.0, kInf, false, false},
    {"E4", Kind::freq, false, 0.0, kInf, false, false},
    {"rel_unc_E4", Kind::real, false, 0.0, kInf, false, false},
    {"rel_unc_eta", Kind::real, false, 0.0, kInf, false, false},
};

constexpr KeySpec kQuartonKeys[] = {
    {"EJ", Kind::freq, true, 0.0, kInf, true, false},
    {"EC", Kind::freq, true, 0.0, kInf, true, false},
    {"p_A", Kind::real, true, 0.0, 1.0, false, false},
    {"p_B", Kind::real, true, 0.0, 1.0, false, false},
    {"omega_A", Kind::freq, true, 0.0, kInf, true, false},
    {"omega_B", Kind::freq, true, 0.0, kInf, true, false},
    {"rel_unc_EJ", Kind::real, false, 0.0, kInf, false, false},
    {"rel_unc_EC", Kind::real, false, 0.0, kInf, false, false},
};

constexpr KeySpec kSnailKeys[] = {
    {"N", Kind::integer, true, 2.0, 1e6, false, false},
    {"alpha", Kind::real, true, 0.0, kInf, true, false},
    {"EJ", Kind::freq, true, 0.0, kInf, true, false},
    {"flux", Kind::real, true, -kInf, kInf, false, false},
    {"omega", Kind::freq, false, 0.0, kInf, true, false},
};

constexpr KeySpec kSquidKeys[] = {
    {"EJ", Kind::freq, true, 0.0, kInf, true, false},
    {"EC", Kind::freq, true, 0.0, kInf, true, false},
    {"omega_A", Kind::freq, false, 0.0, kInf, true, false},
    {"omega_B", Kind::freq, false, 0.0, kInf, true, false},
    {"rel_unc_EJ", Kind::real, false, 0.0, kInf, false, false},
    {"rel_unc_EC", Kind::real, false, 0.0, kInf, false, false},
};

constexpr KeySpec kFluxoniumKeys[] = {
    {"EJ", Kind::freq, true, 0.0, kInf, true, false},
    {"p", Kind::real, true, 0.0, 1.0, false, false},
    {"phi_zpf", Kind::real, true, 0.0, kInf, false, false},
    {"omega", Kind::freq, false, 0.0, kInf, true, false},
};

constexpr KeySpec kPhotonicKeys[] = {
    {"lambda", Kind::length, true, 0.0, kInf, true, false},
    {"n0", Kind::real, true, 0.0, kInf, true, false},
    {"V_eff", Kind::volume, false, 0.0, kInf, true, false},
    {"chi3", Kind::real, false, 0.0, kInf, false, false},
    {"n2", Kind::real, false, -kInf, kInf, false, false},
    {"Gamma0", Kind::real, false, 0.0, kInf, true, false},
    {"overlap", Kind::real, false, 0.0, kInf, false, false},
    {"field_grid_A", Kind::path, false, 0, 0, false, false},
    {"field_grid_B", Kind::path, false, 0, 0, false, false},
};

constexpr KeySpec kEnzKeys[] = {
    {"omega_p", Kind::angular, false, 0.0, kInf, true, false},
    {"gamma", Kind::angular, false, 0.0, kInf, false, false},
    {"eps_inf", Kind::real, false, 0.0, kInf, true, false},
    {"chi3_eff", Kind::real, false, 0.0, kInf, false, false},
    {"V_eff", Kind::volume, false, 0.0, kInf, true, false},
    {"omega", Kind::angular, false, 0.0, kInf, true, false},
};

std::pair<const KeySpec*, std::size_t> platform_keys(Platform p) {
    switch (p) {
        case Platform::quarton: return {kQuartonKeys, std::size(kQuartonKeys)};
        case Platform::snail: return {kSnailKeys, std::size(kSnailKeys)};
        case Platform::squid: return {kSquidKeys, std::size(kSquidKeys)};
        case Platform::fluxonium: return {kFluxoniumKeys, std::size(kFluxoniumKeys)};
        case Platform::photonic: return {kPhotonicKeys, std::size(kPhotonicKeys)};
        case Platform::enz: return {kEnzKeys, std::size(kEnzKeys)};
    }
    return {nullptr, 0};
}

const KeySpec* find_key(Platform p, const std::string& key) {
    for (const auto& k : kCommonKeys)
        if (key == k.key) return &k;
    auto [keys, n] = platform_keys(p);
    for (std::size_t i = 0; i < n; ++i)
        if (key == keys[i].key) return &keys[i];
    return nullptr;
}

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return {};
    const auto b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

std::vector<std::string> split_ws(const std::string& s) {
    std::vector<std::string> out;
    std::istringstream ss(s);
    std::string tok;
    while (ss >> tok) out.push_back(tok);
    return out;
}

bool parse_number(const std::string& tok, double& out) {
    const char* begin = tok.c_str();
    char* end = nullptr;
    out = std::strtod(begin, &end);
    return end == begin + tok.size() && std::isfinite(out);
}

std::optional<double> unit_multiplier(Kind kind, const std::string& unit) {
    switch (kind) {
        case Kind::freq:
            if (unit == "Hz") return 1.0;
            if (unit == "kHz") return 1e3;
            if (unit == "MHz") return 1e6;
            if (unit == "GHz") return 1e9;
            if (unit == "THz") return 1e12;
            return std::nullopt;
        case Kind::angular:
            if (unit == "rad/s") return 1.0;
            return std::nullopt;
        case Kind::length:
            if (unit == "m") return 1.0;
            if (unit == "mm") return 1e-3;
            if (unit == "um") return 1e-6;
            if (unit == "nm") return 1e-9;
            return std::nullopt;
        case Kind::volume:
            if (unit == "m3") return 1.0;
            if (unit == "um3") return 1e-18;
            if (unit == "nm3") return 1e-27;
            return std::nullopt;
        default:
            return std::nullopt;
    }
}

std::optional<Provenance> provenance_from_token(const std::string& tok) {
    if (tok == "measured") return Provenance::measured;
    if (tok == "paper-kernel") return Provenance::paper_kernel;
    if (tok == "assumed") return Provenance::assumed;
    return std::nullopt;
}

struct RawLine {
    std::string key;
    std::string rest;
    int line;
};

void check_range(const KeySpec& spec, double v, const std::string& path, int line) {
    const bool lo_ok = spec.lo_excl ? v > spec.lo : v >= spec.lo;
    const bool hi_ok = spec.hi_excl ? v < spec.hi : v <= spec.hi;
    if (!lo_ok || !hi_ok) {
        std::ostringstream msg;
        msg << "key '" << spec.key << "' = " << v << " is out of range "
            << (spec.lo_excl ? "(" : "[") << (spec.lo <= -kInf ? "-inf" : std::to_string(spec.lo))
            << ", " << (spec.hi >= kInf ? "inf" : std::to_string(spec.hi))
            << (spec.hi_excl ? ")" : "]");
        throw ParseError(path, line, msg.str());
    }
}

void post_validate(const DeviceFile& dev) {
    const auto& path = dev.path;
    switch (dev.platform) {
        case Platform::photonic:
            if (!dev.has("chi3") && !dev.has("n2"))
                throw ParseError(path, "photonic device needs 'chi3' or 'n2'");
            if (!dev.has("V_eff") && dev.paths.count("field_grid_A") == 0)
                throw ParseError(path, "photonic device needs 'V_eff' or 'field_grid_A'");
            break;
        case Platform::enz: {
            const bool drude = dev.has("omega_p") && dev.has("chi3_eff") && dev.has("V_eff");
            if (!dev.has("E4") && !drude)
                throw ParseError(path, "enz device needs 'E4' or the Drude set "
                                       "{omega_p, chi3_eff, V_eff}");
            if (!dev.has("eta_kernel"))
                throw ParseError(path, "enz device needs a stored 'eta_kernel' "
                                       "(no analytic enz projection is defined)");
            break;
        }
        default:
            break;
    }
}

} // namespace

const char* to_string(Platform p) {
    switch (p) {
        case Platform::quarton: return "quarton";
        case Platform::snail: return "snail";
        case Platform::squid: return "squid";
        case Platform::fluxonium: return "fluxonium";
        case Platform::photonic: return "photonic";
        case Platform::enz: return "enz";
    }
    return "?";
}

Platform platform_from_string(const std::string& s) {
    if (s == "quarton") return Platform::quarton;
    if (s == "snail") return Platform::snail;
    if (s == "squid") return Platform::squid;
    if (s == "fluxonium") return Platform::fluxonium;
    if (s == "photonic") return Platform::photonic;
    if (s == "enz") return Platform::enz;
    throw DomainError("unknown platform '" + s + "'");
}

const char* to_string(Provenance p) {
    switch (p) {
        case Provenance::measured: return "measured";
        case Provenance::paper_kernel: return "paper-kernel";
        case Provenance::assumed: return "assumed";
        case Provenance::computed: return "computed";
    }
    return "?";
}

double DeviceFile::get(const std::string& key) const {
    auto it = params.find(key);
    if (it == params.end())
        throw DomainError("device '" + path + "' has no key '" + key + "'");
    return it->second.value;
}

std::optional<double> DeviceFile::maybe(const std::string& key) const {
    auto it = params.find(key);
    if (it == params.end()) return std::nullopt;
    return it->second.value;
}

Provenance DeviceFile::provenance(const std::string& key) const {
    auto it = params.find(key);
    if (it == params.end())
        throw DomainError("device '" + path + "' has no key '" + key + "'");
    return it->second.prov;
}

double parse_frequency_hz(const std::string& text) {
    const auto toks = split_ws(trim(text));
    if (toks.empty() || toks.size() > 2)
        throw DomainError("cannot parse frequency '" + text + "'");
    double v = 0.0;
    if (!parse_number(toks[0], v))
        throw DomainError("cannot parse frequency '" + text + "'");
    if (toks.size() == 2) {
        const auto mult = unit_multiplier(Kind::freq, toks[1]);
        if (!mult)
            throw DomainError("unknown frequency unit '" + toks[1] + "'");
        v *= *mult;
    }
    return v;
}

DeviceFile parse_device_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError(path, "cannot open device file");

    std::vector<RawLine> raw;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ParseError(path, lineno, "expected 'key = value', got '" + line + "'");
        RawLine r;
        r.key = trim(line.substr(0, eq));
        r.rest = trim(line.substr(eq + 1));
        r.line = lineno;
        if (r.key.empty())
            throw ParseError(path, lineno, "empty key");
        if (r.rest.empty())
            throw ParseError(path, lineno, "key '" + r.key + "' has no value");
        raw.push_back(std::move(r));
    }

    DeviceFile dev;
    dev.path = path;

    // The platform key fixes the schema; find it first.
    bool have_platform = false;
    for (const auto& r : raw) {
        if (r.key != "platform") continue;
        if (have_platform)
            throw ParseError(path, r.line, "duplicate 'platform' key");
        try {
            dev.platform = platform_from_string(r.rest);
        } catch (const DomainError&) {
            throw ParseError(path, r.line, "unknown platform '" + r.rest + "'");
        }
        have_platform = true;
    }
    if (!have_platform)
        throw ParseError(path, "missing required key 'platform'");

    for (const auto& r : raw) {
        if (r.key == "platform") continue;
        const KeySpec* spec = find_key(dev.platform, r.key);
        if (!spec)
            throw ParseError(path, r.line, "unknown key '" + r.key + "' for platform " +
                             to_string(dev.platform));
        if (spec->kind == Kind::path) {
            if (!dev.paths.emplace(r.key, r.rest).second)
                throw ParseError(path, r.line, "duplicate key '" + r.key + "'");
            continue;
        }

        auto toks = split_ws(r.rest);
        DeviceValue dv;
        dv.line = r.line;
        // Trailing provenance tag, if any.
        if (!toks.empty()) {
            if (auto prov = provenance_from_token(toks.back())) {
                dv.prov = *prov;
                toks.pop_back();
            }
        }
        if (toks.empty() || toks.size() > 2)
            throw ParseError(path, r.line, "cannot parse value for key '" + r.key + "'");
        if (!parse_number(toks[0], dv.value))
            throw ParseError(path, r.line, "key '" + r.key + "': expected a number, got '" +
                             toks[0] + "'");
        if (toks.size() == 2) {
            const auto mult = unit_multiplier(spec->kind, toks[1]);
            if (!mult)
                throw ParseError(path, r.line, "key '" + r.key + "': unit '" + toks[1] +
                                 "' is not valid here");
            dv.value *= *mult;
        }
        if (spec->kind == Kind::integer &&
            dv.value != std::floor(dv.value))
            throw ParseError(path, r.line, "key '" + r.key + "' must be an integer");
        check_range(*spec, dv.value, path, r.line);
        if (!dev.params.emplace(r.key, dv).second)
            throw ParseError(path, r.line, "duplicate key '" + r.key + "'");
    }

    // Missing required keys, reported by name.
    {
        auto [keys, n] = platform_keys(dev.platform);
        for (std::size_t i = 0; i < n; ++i)
            if (keys[i].required && keys[i].kind != Kind::path && !dev.has(keys[i].key))
                throw ParseError(path, std::string("missing required key '") + keys[i].key +
                                 "' for platform " + to_string(dev.platform));
    }
    post_validate(dev);
    return dev;
}

std::vector<std::string> sweepable_keys(Platform p) {
    switch (p) {
        case Platform::quarton:
            return {"EJ", "EC", "p_A", "p_B", "omega_A", "omega_B"};
        case Platform::snail:
            return {"flux", "alpha", "EJ"};
        case Platform::squid:
            return {"EJ", "EC"};
        case Platform::fluxonium:
            return {"EJ", "p", "phi_zpf"};
        case Platform::photonic:
            return {"lambda", "n0", "chi3", "n2", "V_eff", "Gamma0", "overlap"};
        case Platform::enz:
            return {"omega", "omega_p", "gamma", "eps_inf", "chi3_eff", "V_eff"};
    }
    return {};
}

} // namespace qkerr

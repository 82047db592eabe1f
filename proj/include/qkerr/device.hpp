#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "qkerr/core.hpp"

namespace qkerr {

enum class Platform { quarton, snail, squid, fluxonium, photonic, enz };

const char* to_string(Platform p);
Platform platform_from_string(const std::string& s);

enum class Provenance { measured, paper_kernel, assumed, computed };

const char* to_string(Provenance p);

struct DeviceValue {
    double value = 0.0;
    Provenance prov = Provenance::assumed;
    int line = 0;
};

// Flat key-value device description. Frequencies are stored normalized to
// Hz, lengths to meters, volumes to m^3; unit suffixes are consumed by the
// parser.
struct DeviceFile {
    Platform platform = Platform::quarton;
    std::string path;
    std::map<std::string, DeviceValue> params;
    std::map<std::string, std::string> paths; // field-grid references

    bool has(const std::string& key) const { return params.count(key) != 0; }
    double get(const std::string& key) const;
    std::optional<double> maybe(const std::string& key) const;
    Provenance provenance(const std::string& key) const;
};

// Parse and validate against the platform schema. Unknown keys, missing
// required keys, range violations and malformed lines all raise ParseError
// with the offending key and line.
DeviceFile parse_device_file(const std::string& path);

// Numeric keys that `sweep` may vary for a platform.
std::vector<std::string> sweepable_keys(Platform p);

// "14.8 GHz" -> 1.48e10; accepts Hz, kHz, MHz, GHz, THz.
double parse_frequency_hz(const std::string& text);

} // namespace qkerr

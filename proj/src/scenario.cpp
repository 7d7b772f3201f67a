// SPDX-License-Identifier: Apache-2.0
//
// nrsense: delay/Doppler sensing with 5G NR OFDM waveforms
// Copyright (C) 2026 nrsense authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#include "nrsense/scenario.hpp"

#include "nrsense/errors.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <numbers>
#include <sstream>

namespace nrsense {

std::string_view to_string(Algorithm algorithm) {
    switch (algorithm) {
    case Algorithm::Periodogram:
        return "periodogram";
    case Algorithm::Music:
        return "music";
    case Algorithm::Esprit:
        return "esprit";
    }
    return "unknown";
}

namespace {

std::string lower(std::string_view text) {
    std::string out(text);
    std::transform(out.begin(), out.end(), out.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return out;
}

std::string_view trim(std::string_view text) {
    const auto first = text.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) {
        return {};
    }
    const auto last = text.find_last_not_of(" \t\r");
    return text.substr(first, last - first + 1);
}

std::vector<std::string> split_list(std::string_view text) {
    std::vector<std::string> items;
    std::string current;
    for (char c : text) {
        if (c == ',' || c == ' ' || c == '\t') {
            if (!current.empty()) {
                items.push_back(current);
                current.clear();
            }
        } else {
            current.push_back(c);
        }
    }
    if (!current.empty()) {
        items.push_back(current);
    }
    return items;
}

struct Located {
    std::string value;
    int line = 0;
};

[[noreturn]] void fail(int line, const std::string& message) {
    throw ScenarioError("line " + std::to_string(line) + ": " + message);
}

double to_double(const Located& entry, std::string_view key) {
    const std::string_view text = trim(entry.value);
    double value = 0.0;
    const auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc{} || end != text.data() + text.size() || !std::isfinite(value)) {
        fail(entry.line, std::string(key) + " expects a finite number, got '" + entry.value + "'");
    }
    return value;
}

template <typename Int>
Int to_integer(const Located& entry, std::string_view key) {
    const std::string_view text = trim(entry.value);
    Int value{};
    const auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc{} || end != text.data() + text.size()) {
        fail(entry.line, std::string(key) + " expects an integer, got '" + entry.value + "'");
    }
    return value;
}

bool to_bool(const Located& entry, std::string_view key) {
    const std::string text = lower(trim(entry.value));
    if (text == "true" || text == "yes" || text == "1") {
        return true;
    }
    if (text == "false" || text == "no" || text == "0") {
        return false;
    }
    fail(entry.line, std::string(key) + " expects true or false, got '" + entry.value + "'");
}

using Section = std::map<std::string, Located>;

bool same_value(double a, double b) {
    return std::abs(a - b) <= 1e-9 * std::max(std::abs(a), std::abs(b)) + 1e-300;
}

ScenarioTarget resolve_target(const Section& raw, int index, int line, const Numerology& num) {
    static const std::vector<std::string> known{"distance_m", "delay_s", "velocity_mps",
                                                "doppler_hz", "alpha", "alpha_phase_deg"};
    for (const auto& [key, entry] : raw) {
        if (std::find(known.begin(), known.end(), key) == known.end()) {
            fail(entry.line, "unknown target key '" + key + "'");
        }
    }
    const auto get = [&](const std::string& key) -> std::optional<double> {
        const auto it = raw.find(key);
        if (it == raw.end()) {
            return std::nullopt;
        }
        return to_double(it->second, key);
    };
    const std::string label = "target " + std::to_string(index);

    ScenarioTarget t;
    const auto distance = get("distance_m");
    const auto delay = get("delay_s");
    if (!distance && !delay) {
        fail(line, label + ": missing field distance_m or delay_s");
    }
    t.delay_s = delay ? *delay : num.distance_to_delay(*distance);
    t.distance_m = distance ? *distance : num.delay_to_distance(*delay);
    if (distance && delay && !same_value(num.distance_to_delay(*distance), *delay)) {
        fail(line, label + ": distance_m and delay_s disagree");
    }

    const auto velocity = get("velocity_mps");
    const auto doppler = get("doppler_hz");
    if (!velocity && !doppler) {
        fail(line, label + ": missing field velocity_mps or doppler_hz");
    }
    t.doppler_hz = doppler ? *doppler : num.velocity_to_doppler(*velocity);
    t.velocity_mps = velocity ? *velocity : num.doppler_to_velocity(*doppler);
    if (velocity && doppler && !same_value(num.velocity_to_doppler(*velocity), *doppler)) {
        fail(line, label + ": velocity_mps and doppler_hz disagree");
    }

    const double magnitude = get("alpha").value_or(1.0);
    const double phase = get("alpha_phase_deg").value_or(0.0) * std::numbers::pi / 180.0;
    t.alpha = std::polar(magnitude, phase);
    return t;
}

} // namespace

Algorithm parse_algorithm(std::string_view text) {
    const std::string key = lower(trim(text));
    if (key == "periodogram") {
        return Algorithm::Periodogram;
    }
    if (key == "music") {
        return Algorithm::Music;
    }
    if (key == "esprit") {
        return Algorithm::Esprit;
    }
    throw ScenarioError("unknown algorithm '" + std::string(text) + "'");
}

Numerology Scenario::numerology() const { return Numerology(mu, n_rb, carrier_hz, long_cp, c0); }

TargetSet Scenario::target_set() const {
    TargetSet set;
    for (const auto& t : targets) {
        set.targets.push_back(Target{t.alpha, t.delay_s, t.doppler_hz});
    }
    return set;
}

std::vector<double> Scenario::truths() const {
    std::vector<double> out;
    for (const auto& t : targets) {
        out.push_back(axis == Axis::Doppler ? t.doppler_hz : t.delay_s);
    }
    return out;
}

double Scenario::effective_gate() const {
    if (gate) {
        return *gate;
    }
    auto values = truths();
    std::sort(values.begin(), values.end());
    double separation = std::numeric_limits<double>::infinity();
    for (std::size_t i = 1; i < values.size(); ++i) {
        separation = std::min(separation, values[i] - values[i - 1]);
    }
    return separation / 2.0;
}

void apply_full_size(Scenario& scenario) {
    scenario.full_size = true;
    scenario.n_rb = 264;
    scenario.n_symbols = Numerology(scenario.mu).n_symb();
}

void validate(const Scenario& s) {
    const auto require = [](bool ok, const std::string& message) {
        if (!ok) {
            throw ScenarioError(message);
        }
    };
    require(!s.targets.empty(), "scenario has no targets");
    require(s.trials >= 1, "trials must be at least 1");
    require(!s.algorithms.empty(), "no algorithms selected");
    require(s.axis == Axis::Delay || !s.methods.empty(), "no CP methods selected");
    require(!s.snr_db.empty(), "snr_db list is empty");
    for (const auto& snr : s.snr_db) {
        require(!snr || std::isfinite(*snr), "snr_db entries must be finite or none");
    }
    require(s.rho > 0.0 && s.rho < 1.0, "rho must lie in (0, 1)");
    require(!s.gate || *s.gate > 0.0, "gate must be positive");
    require(s.music_step_hz >= 0.0 && s.music_window_hz >= 0.0 && s.music_step_s >= 0.0 &&
                s.music_window_s >= 0.0,
            "MUSIC search settings must be non-negative");
    Numerology num = [&] {
        try {
            return s.numerology();
        } catch (const std::exception& e) {
            throw ScenarioError(std::string("invalid numerology: ") + e.what());
        }
    }();
    require(s.n_symbols >= 2 && s.n_symbols <= num.n_symb(),
            "n_symbols must lie in [2, " + std::to_string(num.n_symb()) + "]");
    for (std::size_t i = 0; i < s.targets.size(); ++i) {
        const auto& t = s.targets[i];
        const std::string label = "target " + std::to_string(i) + ": ";
        require(same_value(num.distance_to_delay(t.distance_m), t.delay_s),
                label + "distance and delay disagree");
        require(same_value(num.velocity_to_doppler(t.velocity_mps), t.doppler_hz),
                label + "velocity and Doppler disagree");
    }
    try {
        s.target_set().validate(num);
    } catch (const ModelViolation& e) {
        throw ScenarioError(e.what());
    }
}

Scenario parse_scenario_text(std::string_view text) {
    Section top;
    std::vector<std::pair<int, Section>> target_sections;
    std::istringstream in{std::string(text)};
    std::string raw_line;
    int line_no = 0;
    while (std::getline(in, raw_line)) {
        ++line_no;
        std::string_view line = raw_line;
        if (const auto hash = line.find('#'); hash != std::string_view::npos) {
            line = line.substr(0, hash);
        }
        line = trim(line);
        if (line.empty()) {
            continue;
        }
        if (line.front() == '[') {
            if (lower(line) != "[target]") {
                fail(line_no, "unknown section '" + std::string(line) + "'");
            }
            target_sections.emplace_back(line_no, Section{});
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string_view::npos) {
            fail(line_no, "expected 'key = value'");
        }
        const std::string key = lower(trim(line.substr(0, eq)));
        const std::string value(trim(line.substr(eq + 1)));
        if (key.empty() || value.empty()) {
            fail(line_no, "empty key or value");
        }
        Section& section = target_sections.empty() ? top : target_sections.back().second;
        if (!section.emplace(key, Located{value, line_no}).second) {
            fail(line_no, "duplicate key '" + key + "'");
        }
    }

    Scenario s;
    bool full_size = false;
    for (const auto& [key, entry] : top) {
        if (key == "name") {
            s.name = entry.value;
        } else if (key == "mu") {
            s.mu = to_integer<int>(entry, key);
        } else if (key == "n_rb") {
            s.n_rb = to_integer<int>(entry, key);
        } else if (key == "n_symbols") {
            s.n_symbols = to_integer<int>(entry, key);
        } else if (key == "carrier_hz") {
            s.carrier_hz = to_double(entry, key);
        } else if (key == "c0") {
            s.c0 = to_double(entry, key);
        } else if (key == "long_cp") {
            s.long_cp = to_bool(entry, key);
        } else if (key == "full_size") {
            full_size = to_bool(entry, key);
        } else if (key == "axis") {
            try {
                s.axis = parse_axis(lower(entry.value));
            } catch (const std::invalid_argument& e) {
                fail(entry.line, e.what());
            }
        } else if (key == "snr_db") {
            s.snr_db.clear();
            for (const auto& item : split_list(entry.value)) {
                if (lower(item) == "none") {
                    s.snr_db.emplace_back(std::nullopt);
                } else {
                    s.snr_db.emplace_back(to_double(Located{item, entry.line}, key));
                }
            }
        } else if (key == "algorithms") {
            s.algorithms.clear();
            for (const auto& item : split_list(entry.value)) {
                try {
                    s.algorithms.push_back(parse_algorithm(item));
                } catch (const ScenarioError& e) {
                    fail(entry.line, e.what());
                }
            }
        } else if (key == "methods") {
            s.methods.clear();
            for (const auto& item : split_list(entry.value)) {
                try {
                    s.methods.push_back(parse_cp_method(item));
                } catch (const std::invalid_argument& e) {
                    fail(entry.line, e.what());
                }
            }
        } else if (key == "trials") {
            s.trials = to_integer<int>(entry, key);
        } else if (key == "seed") {
            s.seed = to_integer<std::uint64_t>(entry, key);
        } else if (key == "output_dir") {
            s.output_dir = entry.value;
        } else if (key == "rho") {
            s.rho = to_double(entry, key);
        } else if (key == "forward_backward") {
            s.forward_backward = to_bool(entry, key);
        } else if (key == "gate") {
            s.gate = to_double(entry, key);
        } else if (key == "doppler_fft") {
            s.doppler_fft = to_integer<std::size_t>(entry, key);
        } else if (key == "delay_fft") {
            s.delay_fft = to_integer<std::size_t>(entry, key);
        } else if (key == "music_step_hz") {
            s.music_step_hz = to_double(entry, key);
        } else if (key == "music_window_hz") {
            s.music_window_hz = to_double(entry, key);
        } else if (key == "music_step_s") {
            s.music_step_s = to_double(entry, key);
        } else if (key == "music_window_s") {
            s.music_window_s = to_double(entry, key);
        } else {
            fail(entry.line, "unknown key '" + key + "'");
        }
    }
    if (full_size) {
        apply_full_size(s);
    }
    if (target_sections.empty()) {
        throw ScenarioError("scenario has no [target] sections");
    }
    Numerology num = [&] {
        try {
            return s.numerology();
        } catch (const std::exception& e) {
            throw ScenarioError(std::string("invalid numerology: ") + e.what());
        }
    }();
    for (std::size_t i = 0; i < target_sections.size(); ++i) {
        const auto& [line, section] = target_sections[i];
        s.targets.push_back(resolve_target(section, static_cast<int>(i), line, num));
    }
    validate(s);
    return s;
}

Scenario parse_scenario(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw ScenarioError("cannot open scenario file " + path.string());
    }
    std::ostringstream text;
    text << in.rdbuf();
    Scenario s = parse_scenario_text(text.str());
    return s;
}

} // namespace nrsense

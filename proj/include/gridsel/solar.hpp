#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace gridsel {

inline constexpr int kSlotsPerDay = 96;      // 15-minute resolution
inline constexpr int kSlotMinutes = 15;
// Usable generation window 05:45 .. 18:15 inclusive: 51 instants per day.
inline constexpr int kFirstDaylightSlot = 23;
inline constexpr int kLastDaylightSlot = 73;

struct SolarProfile {
    int generator = 0;            // 0-based position among the network's solar units
    std::vector<double> samples;  // MW, kSlotsPerDay per day

    int days() const { return static_cast<int>(samples.size()) / kSlotsPerDay; }
    double at(int day, int slot) const { return samples.at(static_cast<std::size_t>(day) * kSlotsPerDay + slot); }
};

/// Cosine-squared bell between 05:00 and 19:00 peaking at noon, scaled by a
/// per-day weather factor in [0.4, 1.0], plus clamped Gaussian noise.
/// Identical seeds produce bit-identical profiles.
std::vector<SolarProfile> synth_solar(int days, const std::vector<double>& peak_mw, std::uint64_t seed);

class SolarCsvError : public std::runtime_error {
public:
    enum class Kind { Parse, NonUniformInterval, NegativePower };
    SolarCsvError(Kind kind, std::size_t line, const std::string& what);
    Kind kind() const { return kind_; }
    std::size_t line() const { return line_; }

private:
    Kind kind_;
    std::size_t line_;
};

/// Reads `timestamp,gen1_mw,gen2_mw,gen3_mw` with ISO-8601 timestamps at strict
/// 15-minute spacing, starting at midnight and covering whole days.
std::vector<SolarProfile> parse_solar_csv(const std::string& content);
std::vector<SolarProfile> load_solar_csv(const std::string& path);

/// Writes the same format, with day 0 starting on `start_date` (YYYY-MM-DD).
std::string format_solar_csv(const std::vector<SolarProfile>& profiles, const std::string& start_date = "2017-03-01");

/// Global sample indices (day * 96 + slot) of the usable instants of `day`.
std::vector<int> daylight_instants(int day);

/// Per-slot mean over every day strictly before `horizon_day`.
/// Throws std::invalid_argument when there is no prior day or the history is too short.
std::vector<double> predicted_solar(const SolarProfile& history, int horizon_day);

/// Profiles whose day d holds predicted_solar(history, d) for d >= first_day.
/// Days before first_day are left zero.
std::vector<SolarProfile> predicted_profiles(const std::vector<SolarProfile>& history, int first_day);

}  // namespace gridsel

#include "gridsel/solar.hpp"

#include <algorithm>
#include <cmath>
#include <ctime>
#include <iomanip>
#include <numbers>
#include <random>
#include <sstream>

#include "gridsel/text.hpp"

namespace gridsel {

namespace {

constexpr double kSunrise = 5.0;
constexpr double kSunset = 19.0;
constexpr double kNoiseFraction = 0.03;

double bell(double hour) {
    if (hour <= kSunrise || hour >= kSunset) return 0.0;
    const double c = std::cos(std::numbers::pi * (hour - 12.0) / (kSunset - kSunrise));
    return c * c;
}

// Seconds since the epoch, or nullopt for anything that is not
// YYYY-MM-DDTHH:MM[:SS][Z].
std::optional<long long> parse_timestamp(std::string_view s) {
    if (!s.empty() && s.back() == 'Z') s.remove_suffix(1);
    std::tm tm{};
    std::istringstream in{std::string(s)};
    in >> std::get_time(&tm, s.size() > 16 ? "%Y-%m-%dT%H:%M:%S" : "%Y-%m-%dT%H:%M");
    if (in.fail()) return std::nullopt;
    in.peek();
    if (!in.eof()) return std::nullopt;
    return static_cast<long long>(timegm(&tm));
}

}  // namespace

std::vector<SolarProfile> synth_solar(int days, const std::vector<double>& peak_mw, std::uint64_t seed) {
    if (days < 1) throw std::invalid_argument("synth_solar: days must be >= 1");
    for (double p : peak_mw) {
        if (!(p > 0)) throw std::invalid_argument("synth_solar: peak_mw must be positive");
    }

    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> weather(0.4, 1.0);
    std::normal_distribution<double> noise(0.0, 1.0);

    std::vector<SolarProfile> out(peak_mw.size());
    for (std::size_t g = 0; g < peak_mw.size(); ++g) {
        out[g].generator = static_cast<int>(g);
        out[g].samples.assign(static_cast<std::size_t>(days) * kSlotsPerDay, 0.0);
    }
    // Draw order is day-major so adding generators does not reshuffle earlier days.
    for (int d = 0; d < days; ++d) {
        for (std::size_t g = 0; g < peak_mw.size(); ++g) {
            const double factor = weather(rng);
            for (int k = 0; k < kSlotsPerDay; ++k) {
                const double shape = bell(k * kSlotMinutes / 60.0);
                const double eps = noise(rng);
                if (shape == 0.0) continue;
                const double mw = peak_mw[g] * (factor * shape + kNoiseFraction * eps);
                out[g].samples[static_cast<std::size_t>(d) * kSlotsPerDay + k] = std::clamp(mw, 0.0, peak_mw[g]);
            }
        }
    }
    return out;
}

SolarCsvError::SolarCsvError(Kind kind, std::size_t line, const std::string& what)
    : std::runtime_error("solar csv line " + std::to_string(line) + ": " + what), kind_(kind), line_(line) {}

std::vector<SolarProfile> parse_solar_csv(const std::string& content) {
    using Kind = SolarCsvError::Kind;
    std::istringstream in(content);
    std::string line;
    std::size_t line_no = 0;

    std::vector<SolarProfile> out;
    std::optional<long long> previous;
    while (std::getline(in, line)) {
        ++line_no;
        const auto trimmed = text::trim(line);
        if (trimmed.empty()) continue;
        const auto fields = text::split(trimmed, ',');
        if (out.empty()) {
            if (fields.size() < 2 || fields[0] != "timestamp") {
                throw SolarCsvError(Kind::Parse, line_no, "expected header timestamp,gen1_mw,...");
            }
            for (std::size_t g = 1; g < fields.size(); ++g) {
                if (fields[g] != "gen" + std::to_string(g) + "_mw") {
                    throw SolarCsvError(Kind::Parse, line_no, "unexpected column '" + std::string(fields[g]) + "'");
                }
                out.push_back({static_cast<int>(g - 1), {}});
            }
            continue;
        }
        if (fields.size() != out.size() + 1) {
            throw SolarCsvError(Kind::Parse, line_no, "wrong number of fields");
        }
        const auto ts = parse_timestamp(fields[0]);
        if (!ts) throw SolarCsvError(Kind::Parse, line_no, "bad timestamp '" + std::string(fields[0]) + "'");
        if (!previous) {
            if (*ts % 86400 != 0) throw SolarCsvError(Kind::NonUniformInterval, line_no, "first sample must be at 00:00");
        } else if (*ts - *previous != kSlotMinutes * 60) {
            throw SolarCsvError(Kind::NonUniformInterval, line_no, "samples must be exactly 15 minutes apart");
        }
        previous = ts;
        for (std::size_t g = 0; g < out.size(); ++g) {
            const auto v = text::parse_double(fields[g + 1]);
            if (!v || !std::isfinite(*v)) throw SolarCsvError(Kind::Parse, line_no, "bad power value");
            if (*v < 0) throw SolarCsvError(Kind::NegativePower, line_no, "negative power " + std::string(fields[g + 1]));
            out[g].samples.push_back(*v);
        }
    }
    if (out.empty()) throw SolarCsvError(Kind::Parse, line_no, "missing header");
    if (out.front().samples.empty() || out.front().samples.size() % kSlotsPerDay != 0) {
        throw SolarCsvError(Kind::NonUniformInterval, line_no, "file must cover whole days of 96 samples");
    }
    return out;
}

std::vector<SolarProfile> load_solar_csv(const std::string& path) {
    return parse_solar_csv(text::read_file(path));
}

std::string format_solar_csv(const std::vector<SolarProfile>& profiles, const std::string& start_date) {
    std::ostringstream out;
    out << "timestamp";
    for (std::size_t g = 0; g < profiles.size(); ++g) out << ",gen" << g + 1 << "_mw";
    out << '\n';
    const auto start = parse_timestamp(start_date + "T00:00");
    if (!start) throw std::invalid_argument("format_solar_csv: bad start date " + start_date);
    const std::size_t n = profiles.empty() ? 0 : profiles.front().samples.size();
    for (std::size_t k = 0; k < n; ++k) {
        const std::time_t t = static_cast<std::time_t>(*start + static_cast<long long>(k) * kSlotMinutes * 60);
        std::tm tm{};
        gmtime_r(&t, &tm);
        out << std::put_time(&tm, "%Y-%m-%dT%H:%M");
        for (const auto& p : profiles) out << ',' << text::format_double(p.samples[k]);
        out << '\n';
    }
    return out.str();
}

std::vector<int> daylight_instants(int day) {
    std::vector<int> out;
    for (int k = kFirstDaylightSlot; k <= kLastDaylightSlot; ++k) out.push_back(day * kSlotsPerDay + k);
    return out;
}

std::vector<double> predicted_solar(const SolarProfile& history, int horizon_day) {
    if (horizon_day < 1) throw std::invalid_argument("predicted_solar: empty history");
    if (history.days() < horizon_day) throw std::invalid_argument("predicted_solar: history shorter than horizon");
    std::vector<double> mean(kSlotsPerDay, 0.0);
    for (int k = 0; k < kSlotsPerDay; ++k) {
        double sum = 0.0;
        for (int d = 0; d < horizon_day; ++d) sum += history.at(d, k);
        mean[k] = sum / horizon_day;
    }
    return mean;
}

std::vector<SolarProfile> predicted_profiles(const std::vector<SolarProfile>& history, int first_day) {
    if (first_day < 1) throw std::invalid_argument("predicted_profiles: need at least one day of history");
    std::vector<SolarProfile> out;
    for (const auto& h : history) {
        SolarProfile p{h.generator, std::vector<double>(h.samples.size(), 0.0)};
        for (int d = first_day; d < h.days(); ++d) {
            const auto day = predicted_solar(h, d);
            std::copy(day.begin(), day.end(), p.samples.begin() + static_cast<std::ptrdiff_t>(d) * kSlotsPerDay);
        }
        out.push_back(std::move(p));
    }
    return out;
}

}  // namespace gridsel

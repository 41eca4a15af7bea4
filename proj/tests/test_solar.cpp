#include <gtest/gtest.h>

#include <algorithm>
#include <sstream>

#include "gridsel/solar.hpp"

using namespace gridsel;

namespace {

std::string one_day_csv(int skip_slot = -1, double negative_at = -1) {
    std::ostringstream o;
    o << "timestamp,gen1_mw,gen2_mw,gen3_mw\n";
    for (int s = 0; s < kSlotsPerDay; ++s) {
        if (s == skip_slot) continue;
        char ts[32];
        std::snprintf(ts, sizeof ts, "2017-03-01T%02d:%02d:00", s / 4, (s % 4) * 15);
        const double v = s == negative_at ? -5.0 : (s >= 24 && s <= 72 ? 10.0 + s : 0.0);
        o << ts << ',' << v << ',' << v / 2 << ',' << 0 << '\n';
    }
    return o.str();
}

}  // namespace

TEST(SynthSolar, ShapeAndLength) {
    const auto p = synth_solar(14, {100, 90, 90}, 1);
    ASSERT_EQ(p.size(), 3u);
    for (const auto& g : p) {
        EXPECT_EQ(g.samples.size(), 1344u);
        EXPECT_EQ(g.days(), 14);
        for (double v : g.samples) EXPECT_GE(v, 0.0);
        for (int d = 0; d < 14; ++d) {
            EXPECT_EQ(g.at(d, 8), 0.0);  // 02:00
            for (int s = 0; s <= 20; ++s) EXPECT_EQ(g.at(d, s), 0.0) << s;   // before 05:15
            for (int s = 76; s < 96; ++s) EXPECT_EQ(g.at(d, s), 0.0) << s;   // after 18:45
        }
    }
}

TEST(SynthSolar, PeaksNearNoonAndRespectsCapacity) {
    const auto p = synth_solar(5, {100, 90, 90}, 3);
    for (std::size_t g = 0; g < 3; ++g) {
        for (int d = 0; d < 5; ++d) {
            double best = -1;
            int arg = 0;
            for (int s = 0; s < 96; ++s) {
                EXPECT_LE(p[g].at(d, s), g == 0 ? 100.0 : 90.0);
                if (p[g].at(d, s) > best) {
                    best = p[g].at(d, s);
                    arg = s;
                }
            }
            EXPECT_NEAR(arg, 48, 6);
        }
    }
}

TEST(SynthSolar, SeedDeterminism) {
    const auto a = synth_solar(3, {100, 90, 90}, 99);
    const auto b = synth_solar(3, {100, 90, 90}, 99);
    const auto c = synth_solar(3, {100, 90, 90}, 100);
    for (std::size_t g = 0; g < 3; ++g) EXPECT_EQ(a[g].samples, b[g].samples);
    EXPECT_NE(a[0].samples, c[0].samples);
}

TEST(SolarCsv, OneDayFile) {
    const auto p = parse_solar_csv(one_day_csv());
    ASSERT_EQ(p.size(), 3u);
    EXPECT_EQ(p[0].samples.size(), 96u);
    EXPECT_DOUBLE_EQ(p[0].at(0, 40), 50.0);
    EXPECT_DOUBLE_EQ(p[1].at(0, 40), 25.0);
}

TEST(SolarCsv, NegativePower) {
    try {
        parse_solar_csv(one_day_csv(-1, 30));
        FAIL();
    } catch (const SolarCsvError& e) {
        EXPECT_EQ(e.kind(), SolarCsvError::Kind::NegativePower);
        EXPECT_EQ(e.line(), 32u);
    }
}

TEST(SolarCsv, MissingSlot) {
    try {
        parse_solar_csv(one_day_csv(17));
        FAIL();
    } catch (const SolarCsvError& e) {
        EXPECT_EQ(e.kind(), SolarCsvError::Kind::NonUniformInterval);
    }
}

TEST(SolarCsv, MalformedTimestamp) {
    auto text = one_day_csv();
    text.replace(text.find("2017-03-01T00:15"), 16, "yesterday-ish...");
    try {
        parse_solar_csv(text);
        FAIL();
    } catch (const SolarCsvError& e) {
        EXPECT_EQ(e.kind(), SolarCsvError::Kind::Parse);
        EXPECT_EQ(e.line(), 3u);
    }
}

TEST(SolarCsv, FormatRoundTrip) {
    const auto p = synth_solar(2, {100, 90, 90}, 5);
    const auto q = parse_solar_csv(format_solar_csv(p));
    for (std::size_t g = 0; g < 3; ++g) EXPECT_EQ(p[g].samples, q[g].samples);
}

TEST(Daylight, InstantsPerDay) {
    const auto d0 = daylight_instants(0);
    EXPECT_EQ(d0.size(), 51u);
    EXPECT_EQ(std::count(d0.begin(), d0.end(), 12), 0);  // 03:00
    EXPECT_EQ(std::count(d0.begin(), d0.end(), 48), 1);  // 12:00
    for (int s : d0) {
        EXPECT_GT(s, 20);  // strictly after 05:00
        EXPECT_LT(s, 76);  // strictly before 19:00
    }
    const auto d3 = daylight_instants(3);
    EXPECT_EQ(d3.front(), 3 * 96 + d0.front());
}

TEST(PredictedSolar, MeanOfPriorDays) {
    SolarProfile h{0, std::vector<double>(4 * 96, 0.0)};
    h.samples[0 * 96 + 40] = 100;
    h.samples[1 * 96 + 40] = 110;
    h.samples[2 * 96 + 40] = 120;
    h.samples[3 * 96 + 40] = 999;
    const auto p = predicted_solar(h, 3);
    EXPECT_DOUBLE_EQ(p[40], 110.0);
    EXPECT_DOUBLE_EQ(p[8], 0.0);
    const auto one = predicted_solar(h, 1);
    for (int s = 0; s < 96; ++s) EXPECT_EQ(one[s], h.samples[s]);
    EXPECT_THROW(predicted_solar(h, 0), std::invalid_argument);
    EXPECT_THROW(predicted_solar(h, 5), std::invalid_argument);
}

TEST(PredictedSolar, ProfilesFillFromFirstDay) {
    const auto p = synth_solar(4, {100, 90, 90}, 8);
    const auto f = predicted_profiles(p, 2);
    for (int s = 0; s < 96; ++s) {
        EXPECT_EQ(f[0].at(1, s), 0.0);
        EXPECT_DOUBLE_EQ(f[0].at(2, s), (p[0].at(0, s) + p[0].at(1, s)) / 2);
    }
}

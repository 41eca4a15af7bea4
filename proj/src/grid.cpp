#include "gridsel/grid.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <sstream>

#include "gridsel/text.hpp"
#include "reference_grid_text.hpp"

namespace gridsel {

namespace {

enum class Section { None, Meta, Buses, Branches, Generators, Loads };

class Reader {
public:
    Reader(std::size_t line, std::vector<std::string_view> fields)
        : line_(line), fields_(std::move(fields)) {}

    void expect_count(std::size_t n, const char* record) const {
        if (fields_.size() != n) {
            fail(std::string(record) + " record needs " + std::to_string(n) + " fields, got " +
                 std::to_string(fields_.size()));
        }
    }

    double real(std::size_t i, const char* name) const {
        const auto v = text::parse_double(fields_[i]);
        if (!v || !std::isfinite(*v)) fail(std::string("bad number for ") + name + ": '" + std::string(fields_[i]) + "'");
        return *v;
    }

    // 1-based in the file, 0-based in memory.
    int bus_ref(std::size_t i, const char* name) const {
        const auto v = text::parse_int(fields_[i]);
        if (!v || *v < 1 || *v > std::numeric_limits<int>::max()) {
            fail(std::string("bad bus id for ") + name + ": '" + std::string(fields_[i]) + "'");
        }
        return static_cast<int>(*v - 1);
    }

    bool flag(std::size_t i, const char* name) const {
        const auto f = fields_[i];
        if (f == "1" || f == "true" || f == "yes") return true;
        if (f == "0" || f == "false" || f == "no") return false;
        fail(std::string("bad flag for ") + name + ": '" + std::string(f) + "'");
    }

    std::string_view word(std::size_t i) const { return fields_[i]; }

    [[noreturn]] void fail(const std::string& msg) const { throw ParseError(line_, msg); }

private:
    std::size_t line_;
    std::vector<std::string_view> fields_;
};

BusKind parse_bus_kind(const Reader& r, std::string_view w) {
    if (w == "Slack" || w == "slack") return BusKind::Slack;
    if (w == "PV" || w == "pv") return BusKind::PV;
    if (w == "PQ" || w == "pq") return BusKind::PQ;
    r.fail("unknown bus kind '" + std::string(w) + "'");
}

GenSource parse_source(const Reader& r, std::string_view w) {
    if (w == "Solar" || w == "solar") return GenSource::Solar;
    if (w == "Coal" || w == "coal") return GenSource::Coal;
    r.fail("unknown generator source '" + std::string(w) + "'");
}

const char* to_string(BusKind k) {
    switch (k) {
    case BusKind::Slack: return "Slack";
    case BusKind::PV: return "PV";
    case BusKind::PQ: return "PQ";
    }
    return "?";
}

bool bus_exists(const Network& net, int id) {
    return id >= 0 && static_cast<std::size_t>(id) < net.buses.size();
}

bool connected(const Network& net) {
    const auto n = net.buses.size();
    if (n == 0) return false;
    std::vector<std::vector<int>> adj(n);
    for (const auto& br : net.branches) {
        if (!bus_exists(net, br.from_bus) || !bus_exists(net, br.to_bus)) continue;
        adj[br.from_bus].push_back(br.to_bus);
        adj[br.to_bus].push_back(br.from_bus);
    }
    std::vector<bool> seen(n, false);
    std::queue<int> q;
    q.push(0);
    seen[0] = true;
    std::size_t count = 1;
    while (!q.empty()) {
        const int b = q.front();
        q.pop();
        for (int nb : adj[b]) {
            if (!seen[nb]) {
                seen[nb] = true;
                ++count;
                q.push(nb);
            }
        }
    }
    return count == n;
}

}  // namespace

ParseError::ParseError(std::size_t line, const std::string& what)
    : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}

int Network::slack_bus() const {
    for (const auto& b : buses) {
        if (b.kind == BusKind::Slack) return b.id;
    }
    return -1;
}

std::vector<std::size_t> Network::solar_generators() const {
    std::vector<std::size_t> out;
    for (std::size_t g = 0; g < generators.size(); ++g) {
        if (generators[g].source == GenSource::Solar) out.push_back(g);
    }
    return out;
}

std::size_t Network::tie_line_count() const {
    return static_cast<std::size_t>(
        std::count_if(branches.begin(), branches.end(), [](const Branch& b) { return b.is_tie_line; }));
}

std::vector<InvariantCheck> check_network(const Network& net) {
    std::vector<InvariantCheck> checks;
    auto add = [&](std::string name, bool ok, std::string detail = {}) {
        checks.push_back({std::move(name), ok, std::move(detail)});
    };

    add("positive base quantities", net.base_mva > 0 && net.base_frequency > 0);
    add("nonempty bus set", !net.buses.empty());

    bool ids_ok = true;
    for (std::size_t i = 0; i < net.buses.size(); ++i) ids_ok = ids_ok && net.buses[i].id == static_cast<int>(i);
    add("sequential bus ids", ids_ok);

    const auto slacks = std::count_if(net.buses.begin(), net.buses.end(),
                                      [](const Bus& b) { return b.kind == BusKind::Slack; });
    add("exactly one slack bus", slacks == 1,
        slacks == 0 ? "no slack bus" : (slacks > 1 ? "multiple slack buses" : ""));

    std::string bad_v;
    for (const auto& b : net.buses) {
        if (!(b.voltage_mag > 0)) bad_v = "bus " + std::to_string(b.id + 1);
    }
    add("positive voltage magnitudes", bad_v.empty(), bad_v);

    std::string bad_ends, self_loop, zero_z, bad_rating;
    for (std::size_t i = 0; i < net.branches.size(); ++i) {
        const auto& br = net.branches[i];
        const auto tag = "branch " + std::to_string(i + 1);
        if (!bus_exists(net, br.from_bus) || !bus_exists(net, br.to_bus)) bad_ends = tag;
        if (br.from_bus == br.to_bus) self_loop = tag;
        if (br.resistance == 0.0 && br.reactance == 0.0) zero_z = tag;
        if (!(br.mva_rating > 0)) bad_rating = tag;
    }
    add("branch endpoints exist", bad_ends.empty(), bad_ends);
    add("branch endpoints distinct", self_loop.empty(), self_loop);
    add("nonzero series impedance", zero_z.empty(), zero_z);
    add("positive branch ratings", bad_rating.empty(), bad_rating);

    std::string bad_gen_bus, bad_limits;
    double cheapest_coal = std::numeric_limits<double>::infinity();
    double dearest_solar = -std::numeric_limits<double>::infinity();
    for (std::size_t g = 0; g < net.generators.size(); ++g) {
        const auto& gen = net.generators[g];
        const auto tag = "generator " + std::to_string(g + 1);
        if (!bus_exists(net, gen.bus)) bad_gen_bus = tag;
        if (gen.online && !(gen.p_min <= gen.p_set && gen.p_set <= gen.p_max)) bad_limits = tag;
        if (gen.source == GenSource::Coal) cheapest_coal = std::min(cheapest_coal, gen.marginal_cost);
        else dearest_solar = std::max(dearest_solar, gen.marginal_cost);
    }
    add("generator buses exist", bad_gen_bus.empty(), bad_gen_bus);
    add("generator limits", bad_limits.empty(), bad_limits);
    add("solar cheaper than coal", dearest_solar < cheapest_coal,
        dearest_solar < cheapest_coal ? "" : "a solar unit costs at least as much as a coal unit");

    std::string bad_load_bus, neg_load;
    for (std::size_t l = 0; l < net.loads.size(); ++l) {
        const auto& ld = net.loads[l];
        const auto tag = "load " + std::to_string(l + 1);
        if (!bus_exists(net, ld.bus)) bad_load_bus = tag;
        if (ld.p_base < 0) neg_load = tag;
    }
    add("load buses exist", bad_load_bus.empty(), bad_load_bus);
    add("nonnegative loads", neg_load.empty(), neg_load);

    add("connected network", connected(net));
    return checks;
}

void validate_network(const Network& net) {
    for (const auto& c : check_network(net)) {
        if (!c.ok) {
            throw ValidationError(c.detail.empty() ? c.name : c.name + ": " + c.detail);
        }
    }
}

Network parse_network(std::string_view source) {
    Network net;
    Section section = Section::None;
    std::size_t line_no = 0;
    std::size_t pos = 0;

    while (pos <= source.size()) {
        auto end = source.find('\n', pos);
        if (end == std::string_view::npos) end = source.size();
        auto line = source.substr(pos, end - pos);
        pos = end + 1;
        ++line_no;

        if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
        line = text::trim(line);
        if (line.empty()) continue;

        if (line.front() == '[') {
            if (line == "[meta]") section = Section::Meta;
            else if (line == "[buses]") section = Section::Buses;
            else if (line == "[branches]") section = Section::Branches;
            else if (line == "[generators]") section = Section::Generators;
            else if (line == "[loads]") section = Section::Loads;
            else throw ParseError(line_no, "unknown section " + std::string(line));
            continue;
        }

        const Reader r(line_no, text::split(line, ','));
        switch (section) {
        case Section::None:
            r.fail("record outside of any section");
        case Section::Meta: {
            r.expect_count(2, "meta");
            const auto key = r.word(0);
            if (key == "base_mva") net.base_mva = r.real(1, "base_mva");
            else if (key == "base_frequency") net.base_frequency = r.real(1, "base_frequency");
            else r.fail("unknown meta key '" + std::string(key) + "'");
            break;
        }
        case Section::Buses: {
            r.expect_count(5, "bus");
            Bus b;
            b.id = r.bus_ref(0, "bus id");
            b.kind = parse_bus_kind(r, r.word(1));
            b.voltage_mag = r.real(2, "voltage_mag");
            b.voltage_ang = r.real(3, "voltage_ang");
            b.shunt_susceptance = r.real(4, "shunt_susceptance");
            if (b.id != static_cast<int>(net.buses.size())) {
                r.fail("bus ids must be listed in order starting at 1; expected " +
                       std::to_string(net.buses.size() + 1));
            }
            net.buses.push_back(b);
            break;
        }
        case Section::Branches: {
            r.expect_count(7, "branch");
            Branch br;
            br.from_bus = r.bus_ref(0, "from_bus");
            br.to_bus = r.bus_ref(1, "to_bus");
            br.resistance = r.real(2, "resistance");
            br.reactance = r.real(3, "reactance");
            br.charging_susceptance = r.real(4, "charging_susceptance");
            br.mva_rating = r.real(5, "mva_rating");
            br.is_tie_line = r.flag(6, "is_tie_line");
            net.branches.push_back(br);
            break;
        }
        case Section::Generators: {
            r.expect_count(8, "generator");
            Generator g;
            g.bus = r.bus_ref(0, "bus");
            g.source = parse_source(r, r.word(1));
            g.p_set = r.real(2, "p_set");
            g.p_min = r.real(3, "p_min");
            g.p_max = r.real(4, "p_max");
            g.v_set = r.real(5, "v_set");
            g.marginal_cost = r.real(6, "marginal_cost");
            g.online = r.flag(7, "online");
            net.generators.push_back(g);
            break;
        }
        case Section::Loads: {
            r.expect_count(3, "load");
            Load l;
            l.bus = r.bus_ref(0, "bus");
            l.p_base = r.real(1, "p_base");
            l.q_base = r.real(2, "q_base");
            net.loads.push_back(l);
            break;
        }
        }
    }

    return net;
}

Network load_network(std::string_view source) {
    Network net = parse_network(source);
    validate_network(net);
    return net;
}

Network load_network_file(const std::string& path) {
    return load_network(text::read_file(path));
}

std::string serialize_network(const Network& net) {
    using text::format_double;
    std::ostringstream out;
    out << "[meta]\n"
        << "base_mva, " << format_double(net.base_mva) << '\n'
        << "base_frequency, " << format_double(net.base_frequency) << "\n\n";

    out << "[buses]\n# id, kind, voltage_mag, voltage_ang, shunt_susceptance\n";
    for (const auto& b : net.buses) {
        out << b.id + 1 << ", " << to_string(b.kind) << ", " << format_double(b.voltage_mag) << ", "
            << format_double(b.voltage_ang) << ", " << format_double(b.shunt_susceptance) << '\n';
    }

    out << "\n[branches]\n# from, to, resistance, reactance, charging_susceptance, mva_rating, is_tie_line\n";
    for (const auto& br : net.branches) {
        out << br.from_bus + 1 << ", " << br.to_bus + 1 << ", " << format_double(br.resistance) << ", "
            << format_double(br.reactance) << ", " << format_double(br.charging_susceptance) << ", "
            << format_double(br.mva_rating) << ", " << (br.is_tie_line ? 1 : 0) << '\n';
    }

    out << "\n[generators]\n# bus, source, p_set, p_min, p_max, v_set, marginal_cost, online\n";
    for (const auto& g : net.generators) {
        out << g.bus + 1 << ", " << (g.source == GenSource::Solar ? "Solar" : "Coal") << ", "
            << format_double(g.p_set) << ", " << format_double(g.p_min) << ", " << format_double(g.p_max)
            << ", " << format_double(g.v_set) << ", " << format_double(g.marginal_cost) << ", "
            << (g.online ? 1 : 0) << '\n';
    }

    out << "\n[loads]\n# bus, p_base, q_base\n";
    for (const auto& l : net.loads) {
        out << l.bus + 1 << ", " << format_double(l.p_base) << ", " << format_double(l.q_base) << '\n';
    }
    return out.str();
}

Network reference_network() {
    return load_network(kReferenceGridText);
}

ComplexMatrix admittance_matrix(const Network& net) {
    const auto n = static_cast<Eigen::Index>(net.buses.size());
    ComplexMatrix y = ComplexMatrix::Zero(n, n);
    for (std::size_t i = 0; i < net.branches.size(); ++i) {
        const auto& br = net.branches[i];
        if (br.resistance == 0.0 && br.reactance == 0.0) {
            throw SingularBranchError("branch " + std::to_string(i + 1) + " has zero series impedance");
        }
        const Complex series = 1.0 / Complex(br.resistance, br.reactance);
        const Complex half_charging(0.0, br.charging_susceptance / 2.0);
        const auto f = br.from_bus;
        const auto t = br.to_bus;
        y(f, f) += series + half_charging;
        y(t, t) += series + half_charging;
        y(f, t) -= series;
        y(t, f) -= series;
    }
    for (const auto& b : net.buses) y(b.id, b.id) += Complex(0.0, b.shunt_susceptance);
    return y;
}

}  // namespace gridsel

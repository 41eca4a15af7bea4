#pragma once

#include <complex>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

namespace gridsel {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;

enum class BusKind { Slack, PV, PQ };
enum class GenSource { Solar, Coal };

// All electrical quantities below are per-unit on Network::base_mva unless the
// field name carries a unit (MW, MVAr, MVA).

struct Bus {
    int id = 0;  // 0-based
    BusKind kind = BusKind::PQ;
    double voltage_mag = 1.0;  // setpoint for Slack/PV buses
    double voltage_ang = 0.0;  // radians
    double shunt_susceptance = 0.0;
};

struct Branch {
    int from_bus = 0;
    int to_bus = 0;
    double resistance = 0.0;
    double reactance = 0.0;
    double charging_susceptance = 0.0;  // total line charging
    double mva_rating = 0.0;
    bool is_tie_line = false;
};

struct Generator {
    int bus = 0;
    GenSource source = GenSource::Coal;
    double p_set = 0.0;  // MW
    double p_min = 0.0;  // MW
    double p_max = 0.0;  // MW
    double v_set = 1.0;
    double marginal_cost = 0.0;  // currency/MWh
    bool online = true;
};

struct Load {
    int bus = 0;
    double p_base = 0.0;  // MW
    double q_base = 0.0;  // MVAr
};

struct Network {
    double base_mva = 100.0;
    double base_frequency = 50.0;
    std::vector<Bus> buses;
    std::vector<Branch> branches;
    std::vector<Generator> generators;
    std::vector<Load> loads;

    std::size_t bus_count() const { return buses.size(); }
    int slack_bus() const;
    /// Indices into `generators` of the solar units, in file order.
    std::vector<std::size_t> solar_generators() const;
    std::size_t tie_line_count() const;
};

class ParseError : public std::runtime_error {
public:
    ParseError(std::size_t line, const std::string& what);
    std::size_t line() const { return line_; }

private:
    std::size_t line_;
};

class ValidationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class SingularBranchError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// One entry per checked invariant, in a fixed order. Used by the CLI's
/// `grid validate` to print per-invariant results.
struct InvariantCheck {
    std::string name;
    bool ok = true;
    std::string detail;
};

std::vector<InvariantCheck> check_network(const Network& net);

/// Throws ValidationError naming the first violated invariant.
void validate_network(const Network& net);

/// Parse grid-file text (sections [meta] [buses] [branches] [generators]
/// [loads], comma-separated records, `#` comments, 1-based bus ids).
/// Throws ParseError for malformed text, ValidationError for a parsed network
/// that breaks an invariant.
Network load_network(std::string_view text);
/// load_network without the invariant checks.
Network parse_network(std::string_view text);
Network load_network_file(const std::string& path);

/// Inverse of load_network (shortest round-trip number formatting).
std::string serialize_network(const Network& net);

/// Canonical 20-bus grid: 3 coal units in the generation area, 3 solar units
/// and most of the demand in the load area, two rated tie-lines between them.
Network reference_network();

/// Dense bus admittance matrix in per-unit.
ComplexMatrix admittance_matrix(const Network& net);

}  // namespace gridsel

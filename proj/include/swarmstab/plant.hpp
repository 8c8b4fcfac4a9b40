#ifndef SWARMSTAB_PLANT_HPP
#define SWARMSTAB_PLANT_HPP

// Linearized single-machine infinite-bus system with a shunt STATCOM.
//
// States  [x_delta, x_omega, x_eq, x_efd, x_vdc]
// Inputs  [delta_pm, delta_vref, delta_c, delta_phi]
// Outputs [delta_omega, delta_vm, delta_vdc, delta_delta]
//
// All quantities are per-unit deviations from the operating point. The rows
// follow the extended Heffron-Phillips form; the K-constants are inputs and
// are produced offline (tools/derive_plant_constants.py).

#include <complex>
#include <string>
#include <vector>

#include "swarmstab/lti.hpp"

namespace swarmstab {

struct OperatingPoint {
    double p = 0.0;  ///< real power, pu
    double q = 0.0;  ///< reactive power, pu
    double v = 1.0;  ///< terminal voltage, pu
};

struct MachineParams {
    double m_inertia = 0.0;   ///< M = 2H, s
    double d_damping = 0.0;
    double omega_b = 0.0;     ///< rad/s
    double t_do_prime = 0.0;  ///< s
    double k1 = 0.0, k2 = 0.0, k3 = 0.0, k4 = 0.0, k5 = 0.0, k6 = 0.0;
};

struct ExciterParams {
    double ka = 0.0;
    double ta = 0.0;  ///< s
};

struct StatcomParams {
    double k7 = 0.0, k8 = 0.0, k9 = 0.0;
    double kp_dc = 0.0, kq_dc = 0.0, kv_dc = 0.0;
    double kp_c = 0.0, kq_c = 0.0, kv_c = 0.0, kd_c = 0.0;
    double kp_phi = 0.0, kq_phi = 0.0, kv_phi = 0.0, kd_phi = 0.0;
    double c_dc = 0.0;     ///< dc capacitance, pu
    double c_ratio = 0.0;  ///< C = m k at the operating point
    double v_dc0 = 0.0;    ///< pu
    double phi0 = 0.0;     ///< rad
};

/// Carried for reporting; the linear model only consumes the K-constants.
struct NetworkParams {
    std::complex<double> z1{0.0, 0.0};
    std::complex<double> z2{0.0, 0.0};
    std::complex<double> y_l{0.0, 0.0};
    double x_l = 0.0;
};

struct PlantConfig {
    std::string name;
    MachineParams machine;
    ExciterParams exciter;
    StatcomParams statcom;
    NetworkParams network;
    OperatingPoint operating_point;
};

struct Phasor {
    double magnitude = 0.0;
    double angle = 0.0;  ///< rad
};

/// v_s = C V_dc at angle phi.
Phasor statcom_output_voltage(double c_ratio, double v_dc, double phi);

/// Averaged dc-link charging law (i_sd cos phi + i_sq sin phi) / c_dc.
double dc_link_derivative(double i_sd, double i_sq, double phi, double c_dc);

/// Assembles the 5-state model. Throws ConfigError naming the first invalid field.
StateSpace<double> build_plant(const PlantConfig& cfg);

struct Diagnostic {
    enum class Severity { error, warning };
    Severity severity = Severity::error;
    std::string field;
    std::string message;

    std::string to_string() const;
};

/// Empty when the config is usable and open-loop stable.
std::vector<Diagnostic> validate_config(const PlantConfig& cfg);

bool has_errors(const std::vector<Diagnostic>& diagnostics);

namespace plant_signals {
inline constexpr const char* delta_pm = "delta_pm";
inline constexpr const char* delta_vref = "delta_vref";
inline constexpr const char* delta_c = "delta_c";
inline constexpr const char* delta_phi = "delta_phi";
inline constexpr const char* delta_omega = "delta_omega";
inline constexpr const char* delta_vm = "delta_vm";
inline constexpr const char* delta_vdc = "delta_vdc";
inline constexpr const char* delta_delta = "delta_delta";
}  // namespace plant_signals

}  // namespace swarmstab

#endif  // SWARMSTAB_PLANT_HPP

#include "swarmstab/plant.hpp"

#include <cmath>
#include <utility>

#include "swarmstab/errors.hpp"

namespace swarmstab {

Phasor statcom_output_voltage(double c_ratio, double v_dc, double phi) {
    return {c_ratio * v_dc, phi};
}

double dc_link_derivative(double i_sd, double i_sq, double phi, double c_dc) {
    return (i_sd * std::cos(phi) + i_sq * std::sin(phi)) / c_dc;
}

std::string Diagnostic::to_string() const {
    return std::string(severity == Severity::error ? "error" : "warning") + ": " + field + ": " + message;
}

bool has_errors(const std::vector<Diagnostic>& diagnostics) {
    for (const auto& d : diagnostics)
        if (d.severity == Diagnostic::Severity::error) return true;
    return false;
}

namespace {

std::vector<std::pair<const char*, double>> numeric_fields(const PlantConfig& cfg) {
    const auto& m = cfg.machine;
    const auto& e = cfg.exciter;
    const auto& s = cfg.statcom;
    const auto& op = cfg.operating_point;
    return {
        {"machine.m_inertia", m.m_inertia}, {"machine.d_damping", m.d_damping},
        {"machine.omega_b", m.omega_b},     {"machine.t_do_prime", m.t_do_prime},
        {"machine.k1", m.k1},               {"machine.k2", m.k2},
        {"machine.k3", m.k3},               {"machine.k4", m.k4},
        {"machine.k5", m.k5},               {"machine.k6", m.k6},
        {"exciter.ka", e.ka},               {"exciter.ta", e.ta},
        {"statcom.k7", s.k7},               {"statcom.k8", s.k8},
        {"statcom.k9", s.k9},               {"statcom.kp_dc", s.kp_dc},
        {"statcom.kq_dc", s.kq_dc},         {"statcom.kv_dc", s.kv_dc},
        {"statcom.kp_c", s.kp_c},           {"statcom.kq_c", s.kq_c},
        {"statcom.kv_c", s.kv_c},           {"statcom.kd_c", s.kd_c},
        {"statcom.kp_phi", s.kp_phi},       {"statcom.kq_phi", s.kq_phi},
        {"statcom.kv_phi", s.kv_phi},       {"statcom.kd_phi", s.kd_phi},
        {"statcom.c_dc", s.c_dc},           {"statcom.c_ratio", s.c_ratio},
        {"statcom.v_dc0", s.v_dc0},         {"statcom.phi0", s.phi0},
        {"operating_point.p", op.p},        {"operating_point.q", op.q},
        {"operating_point.v", op.v},
    };
}

std::vector<Diagnostic> structural_diagnostics(const PlantConfig& cfg) {
    std::vector<Diagnostic> out;
    auto error = [&](std::string field, std::string msg) {
        out.push_back({Diagnostic::Severity::error, std::move(field), std::move(msg)});
    };
    for (const auto& [field, value] : numeric_fields(cfg))
        if (!std::isfinite(value)) error(field, "must be finite");
    if (!out.empty()) return out;

    const std::pair<const char*, double> positive[] = {
        {"machine.m_inertia", cfg.machine.m_inertia},
        {"machine.t_do_prime", cfg.machine.t_do_prime},
        {"machine.omega_b", cfg.machine.omega_b},
        {"machine.k3", cfg.machine.k3},
        {"exciter.ta", cfg.exciter.ta},
        {"statcom.c_dc", cfg.statcom.c_dc},
        {"statcom.v_dc0", cfg.statcom.v_dc0},
        {"operating_point.v", cfg.operating_point.v},
    };
    for (const auto& [field, value] : positive)
        if (!(value > 0.0)) error(field, "must be positive (got " + std::to_string(value) + ")");
    return out;
}

StateSpace<double> assemble(const PlantConfig& cfg) {
    namespace sig = plant_signals;
    const auto& mc = cfg.machine;
    const auto& ex = cfg.exciter;
    const auto& st = cfg.statcom;
    enum { delta, omega, eq, efd, vdc };
    enum { pm, vref, dc, dphi };

    // Terminal-voltage deviation as a function of state and control.
    Eigen::RowVectorXd vm_x(5), vm_u(4);
    vm_x << mc.k5, 0.0, mc.k6, 0.0, st.kv_dc;
    vm_u << 0.0, 0.0, st.kv_c, st.kv_phi;

    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(5, 5);
    Eigen::MatrixXd b = Eigen::MatrixXd::Zero(5, 4);

    a(delta, omega) = mc.omega_b;

    const double m = mc.m_inertia;
    a(omega, delta) = -mc.k1 / m;
    a(omega, omega) = -mc.d_damping / m;
    a(omega, eq) = -mc.k2 / m;
    a(omega, vdc) = -st.kp_dc / m;
    b(omega, pm) = 1.0 / m;
    b(omega, dc) = -st.kp_c / m;
    b(omega, dphi) = -st.kp_phi / m;

    const double tdo = mc.t_do_prime;
    a(eq, delta) = -mc.k4 / tdo;
    a(eq, eq) = -1.0 / (mc.k3 * tdo);
    a(eq, efd) = 1.0 / tdo;
    a(eq, vdc) = -st.kq_dc / tdo;
    b(eq, dc) = -st.kq_c / tdo;
    b(eq, dphi) = -st.kq_phi / tdo;

    a.row(efd) = -(ex.ka / ex.ta) * vm_x;
    a(efd, efd) -= 1.0 / ex.ta;
    b.row(efd) = -(ex.ka / ex.ta) * vm_u;
    b(efd, vref) = ex.ka / ex.ta;

    a(vdc, delta) = st.k7;
    a(vdc, eq) = st.k8;
    a(vdc, vdc) = -st.k9;
    b(vdc, dc) = st.kd_c;
    b(vdc, dphi) = st.kd_phi;

    Eigen::MatrixXd c = Eigen::MatrixXd::Zero(4, 5);
    Eigen::MatrixXd d = Eigen::MatrixXd::Zero(4, 4);
    c(0, omega) = 1.0;
    c.row(1) = vm_x;
    d.row(1) = vm_u;
    c(2, vdc) = 1.0;
    c(3, delta) = 1.0;

    return make_state_space<double>(std::move(a), std::move(b), std::move(c), std::move(d),
                                    {"x_delta", "x_omega", "x_eq", "x_efd", "x_vdc"},
                                    {sig::delta_pm, sig::delta_vref, sig::delta_c, sig::delta_phi},
                                    {sig::delta_omega, sig::delta_vm, sig::delta_vdc, sig::delta_delta});
}

}  // namespace

StateSpace<double> build_plant(const PlantConfig& cfg) {
    const auto diags = structural_diagnostics(cfg);
    if (!diags.empty()) throw ConfigError(diags.front().field, diags.front().message);
    return assemble(cfg);
}

std::vector<Diagnostic> validate_config(const PlantConfig& cfg) {
    auto out = structural_diagnostics(cfg);
    if (!out.empty()) return out;
    const auto plant = assemble(cfg);
    const double abscissa = spectral_abscissa(plant.a, "plant state matrix");
    if (abscissa >= 0.0) {
        std::string hint = cfg.machine.k1 < 0.0 ? " (negative synchronizing torque, k1 < 0)" : "";
        out.push_back({Diagnostic::Severity::warning, "plant",
                       "open-loop unstable: max Re(eig) = " + std::to_string(abscissa) + hint});
    }
    return out;
}

}  // namespace swarmstab

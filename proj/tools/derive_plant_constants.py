#!/usr/bin/env python3
"""Offline derivation of the linearized SMIB + STATCOM plant constants.

The C++ library consumes only the linear coefficients stored in
config/nominal.json and config/heavy.json. This script regenerates them from
the machine/network dataset below by solving the steady state at a given
generator operating point (P, Q, V) and linearizing the algebraic network by
central differences.

Network (all reactances in pu on machine base):

    generator --Z1-- bus m --Z2-- infinite bus
                       |  \
                      Y_L  x_l (STATCOM coupling transformer)
                             \
                          v_s = c * V_dc at angle phi

Machine: one-axis model (E'q behind X'd, saliency through Xq), static
exciter regulating |V_m|. The converter is synchronized to the bus m voltage,
so phi is the PWM phase of v_s measured from the angle of V_m. The dc link
loses G_dc * V_dc through converter and capacitor losses, and an inner
proportional regulator adds k_dc_reg * (V_dc - V_dc0) to the commanded phase.
Both are absorbed into the linear coefficients, so the exported rows keep the
same structure with or without them.

Usage: python3 tools/derive_plant_constants.py [--out config]
"""

import argparse
import cmath
import json
import math
import os

import numpy as np
from scipy.optimize import fsolve

MACHINE = dict(
    m_inertia=8.0,      # 2H, s
    d_damping=6.0,      # pu torque / pu speed
    omega_b=2.0 * math.pi * 50.0,
    t_do_prime=5.044,
    xd=1.0,
    xq=0.6,
    xd_prime=0.3,
)
EXCITER = dict(ka=50.0, ta=0.05)
NETWORK = dict(z1=complex(0.0, 0.1), z2=complex(0.0, 0.3), y_l=complex(0.05, 0.0), x_l=0.15)
STATCOM = dict(c_dc=1.0, v_dc0=1.0, g_dc=0.02, k_dc_reg=0.2)

SCENARIOS = {
    "nominal": dict(p=0.7, q=0.3, v=1.0),
    "heavy": dict(p=1.2, q=0.4, v=1.15),
}


def _linear_network(delta, eq_prime, vs, vb):
    xq, xdp = MACHINE["xq"], MACHINE["xd_prime"]
    z1, z2, y_l, x_l = NETWORK["z1"], NETWORK["z2"], NETWORK["y_l"], NETWORK["x_l"]
    rot = cmath.exp(1j * (delta - math.pi / 2.0))

    def residual(u):
        i_d, i_q = u[0], u[1]
        vm = complex(u[2], u[3])
        i_s = complex(u[4], u[5])
        vt = rot * complex(xq * i_q, eq_prime - xdp * i_d)
        it = rot * complex(i_d, i_q)
        ra = vt - vm - z1 * it
        rb = vm - vb - z2 * (it - i_s - y_l * vm)
        rc = vm - vs - 1j * x_l * i_s
        return np.array([ra.real, ra.imag, rb.real, rb.imag, rc.real, rc.imag])

    # Residual is affine in the unknowns: recover the matrix column by column.
    r0 = residual(np.zeros(6))
    mat = np.column_stack([residual(e) - r0 for e in np.eye(6)])
    u = np.linalg.solve(mat, -r0)
    i_d, i_q = u[0], u[1]
    vt = rot * complex(xq * i_q, eq_prime - xdp * i_d)
    it = rot * complex(i_d, i_q)
    return vt, it, complex(u[2], u[3]), complex(u[4], u[5]), i_d, i_q


def network_solution(delta, eq_prime, v_dc, c, phi, vb):
    """Solve the network for the given machine/STATCOM state.

    phi is relative to the bus m angle, which itself depends on the solution,
    so iterate on that angle. Returns (vt, it, vm, i_s, id, iq, vs) as
    network-frame phasors (vb real)."""
    theta = 0.0
    for _ in range(200):
        vs = c * v_dc * cmath.exp(1j * (theta + phi))
        sol = _linear_network(delta, eq_prime, vs, vb)
        new_theta = cmath.phase(sol[2])
        if abs(new_theta - theta) < 1e-15:
            break
        theta = new_theta
    else:
        raise RuntimeError("bus angle iteration did not converge")
    return sol + (vs,)


def algebraic_outputs(x, vb):
    """x = (delta, E'q, V_dc, c, phi) -> (P_e, E_q, |V_m|, dV_dc/dt)."""
    delta, eq_prime, v_dc, c, phi = x
    phi = phi + STATCOM["k_dc_reg"] * (v_dc - STATCOM["v_dc0"])
    vt, it, vm, i_s, i_d, _, vs = network_solution(delta, eq_prime, v_dc, c, phi, vb)
    p_e = (vt * it.conjugate()).real
    e_q = eq_prime + (MACHINE["xd"] - MACHINE["xd_prime"]) * i_d
    # power balance across the converter: V_dc * I_dc = Re(v_s conj(i_s))
    i_dc = (vs * i_s.conjugate()).real / v_dc
    vdc_dot = (i_dc - STATCOM["g_dc"] * v_dc) / STATCOM["c_dc"]
    return np.array([p_e, e_q, abs(vm), vdc_dot])


def steady_state(p, q, v):
    z1, z2, y_l, x_l = NETWORK["z1"], NETWORK["z2"], NETWORK["y_l"], NETWORK["x_l"]
    v_dc0 = STATCOM["v_dc0"]
    vt = complex(v, 0.0)
    it = ((p + 1j * q) / vt).conjugate()
    vm = vt - z1 * it

    def statcom_balance(u):
        c, phi = u
        vs = c * v_dc0 * cmath.exp(1j * phi)
        i_s = (vm - vs) / (1j * x_l)
        s_in = vs * i_s.conjugate()
        # dc power balance, and no net reactive exchange at the operating point
        return [s_in.real - STATCOM["g_dc"] * v_dc0 ** 2, s_in.imag]

    c0, phi0 = fsolve(statcom_balance, [abs(vm) / v_dc0, cmath.phase(vm)], xtol=1e-13)
    vs = c0 * v_dc0 * cmath.exp(1j * phi0)
    i_s = (vm - vs) / (1j * x_l)
    vb_ph = vm - z2 * (it - i_s - y_l * vm)
    ref = cmath.phase(vb_ph)
    back = cmath.exp(-1j * ref)
    phi0 -= cmath.phase(vm)
    vt, it, vm = vt * back, it * back, vm * back
    vb = abs(vb_ph)

    e_qq = vt + 1j * MACHINE["xq"] * it
    delta0 = cmath.phase(e_qq)
    rot = cmath.exp(-1j * (delta0 - math.pi / 2.0))
    idq = it * rot
    vdq = vt * rot
    i_d = idq.real
    eq_prime = vdq.imag + MACHINE["xd_prime"] * i_d
    return dict(delta=delta0, eq_prime=eq_prime, c0=c0, phi0=phi0, vb=vb, vm=abs(vm), pe=p)


def linearize(op):
    x0 = np.array([op["delta"], op["eq_prime"], STATCOM["v_dc0"], op["c0"], op["phi0"]])
    h = 1e-6
    jac = np.zeros((4, 5))
    for j in range(5):
        dx = np.zeros(5)
        dx[j] = h
        jac[:, j] = (algebraic_outputs(x0 + dx, op["vb"]) - algebraic_outputs(x0 - dx, op["vb"])) / (2 * h)
    return x0, jac


def plant_config(name):
    pt = SCENARIOS[name]
    op = steady_state(pt["p"], pt["q"], pt["v"])
    x0, jac = linearize(op)
    f0 = algebraic_outputs(x0, op["vb"])
    assert abs(f0[0] - pt["p"]) < 1e-9, "steady state does not reproduce P"
    assert abs(f0[3]) < 1e-9, "dc link not in equilibrium"
    pe, eq, vm, vdc = jac
    cfg = {
        "name": name,
        "machine": {
            "m_inertia": MACHINE["m_inertia"],
            "d_damping": MACHINE["d_damping"],
            "omega_b": MACHINE["omega_b"],
            "t_do_prime": MACHINE["t_do_prime"],
            "k1": pe[0], "k2": pe[1], "k3": 1.0 / eq[1],
            "k4": eq[0], "k5": vm[0], "k6": vm[1],
        },
        "exciter": dict(EXCITER),
        "statcom": {
            "k7": vdc[0], "k8": vdc[1], "k9": -vdc[2],
            "kp_dc": pe[2], "kq_dc": eq[2], "kv_dc": vm[2],
            "kp_c": pe[3], "kq_c": eq[3], "kv_c": vm[3], "kd_c": vdc[3],
            "kp_phi": pe[4], "kq_phi": eq[4], "kv_phi": vm[4], "kd_phi": vdc[4],
            "c_dc": STATCOM["c_dc"],
            "c_ratio": op["c0"],
            "v_dc0": STATCOM["v_dc0"],
            "phi0": op["phi0"],
        },
        "network": {
            "z1": {"re": NETWORK["z1"].real, "im": NETWORK["z1"].imag},
            "z2": {"re": NETWORK["z2"].real, "im": NETWORK["z2"].imag},
            "y_l": {"re": NETWORK["y_l"].real, "im": NETWORK["y_l"].imag},
            "x_l": NETWORK["x_l"],
        },
        "operating_point": dict(pt),
    }
    # Round to 12 significant digits so the files stay readable and stable.
    def tidy(obj):
        if isinstance(obj, dict):
            return {k: tidy(v) for k, v in obj.items()}
        if isinstance(obj, float):
            return float(f"{obj:.12g}")
        return obj
    return tidy(cfg), op


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--out", default=os.path.join(os.path.dirname(__file__), "..", "config"))
    args = ap.parse_args()
    for name in SCENARIOS:
        cfg, op = plant_config(name)
        path = os.path.join(args.out, f"{name}.json")
        with open(path, "w") as fh:
            json.dump(cfg, fh, indent=2)
            fh.write("\n")
        print(f"{name}: delta0={op['delta']:.4f} rad, E'q0={op['eq_prime']:.4f}, "
              f"Vb={op['vb']:.4f}, |Vm|={op['vm']:.4f}, c0={op['c0']:.4f} -> {path}")


if __name__ == "__main__":
    main()

"""Regenerates tests/oracle_values.hpp from closed forms and scipy root finding."""
import math
from pathlib import Path

import numpy as np
from scipy.optimize import brentq

out = []


def emit(name, value):
    out.append(f"inline constexpr double {name} = {value!r};")


def emit_array(name, values):
    body = ", ".join(repr(float(v)) for v in values)
    out.append(f"inline constexpr double {name}[] = {{{body}}};")


# waterfall p = 1, C = 1
c_phi = 5.0 * math.sqrt(2.0)
c_h = 4.0
emit("kWaterfallCphi", c_phi)
emit("kWaterfallCh", c_h)
emit("kWaterfallT1", min(c_phi / c_h, 1.0 / (15.0 * c_phi)))
harm = np.cumsum([1.0 / k for k in range(1, 7)])
emit_array("kWaterfallHarmonicT", harm / (15.0 * c_phi))
xs = [0.0, 0.5, 2.0, 9.0]
emit_array("kWaterfallX", xs)
emit_array("kWaterfallPhiMinus", [-4.0 * math.sqrt(1.0 + 1.0 / (1.0 + x)) for x in xs])
emit_array("kWaterfallDphiMinus", [2.0 / ((1.0 + x) ** 2 * math.sqrt(1.0 + 1.0 / (1.0 + x))) for x in xs])

# power law p = 2 at x = 1
emit("kPow2H", 2.0 ** -2)
emit("kPow2Dh", -2.0 * 2.0 ** -3)
emit("kPow2D2h", 6.0 * 2.0 ** -4)

# transform at x = 0.5, p = 1, u = -1, eta = 0.3
h = 1.0 / 1.5
emit("kTransformPlus", -1.0 + 2.0 * math.sqrt(h + 0.3))
emit("kTransformMinus", -1.0 - 2.0 * math.sqrt(h + 0.3))


def phi_lin(x):
    return -2.0 + 0.1 * min(x, 10.0)


def burgers(phi, t, x):
    return phi(brentq(lambda x0: x0 + 0.75 * phi(x0) * t - x, x - 10.0, x + 10.0, xtol=1e-15, rtol=1e-15))


bx = [0.0, 3.0, 9.5, 9.9, 10.0]
emit_array("kBurgersX", bx)
emit_array("kBurgersLinearT01", [burgers(phi_lin, 0.1, x) for x in bx])
emit_array("kBurgersLinearT005", [burgers(phi_lin, 0.05, x) for x in bx])


def phi_tanh(x):
    return -3.0 - math.tanh(x - 5.0)


emit_array("kBurgersTanhT1", [burgers(phi_tanh, 1.0, x) for x in bx])

# tanh front: min phi' = -1, so t_b = 4/3; |u| = 100 at the steepest foot when 1 - 0.75 t = 0.01
emit("kTanhBreakingTime", 4.0 / 3.0)
emit("kTanhThresholdTime", (1.0 - 0.01) / 0.75)

# linear data, minus characteristic reaching x = 0 at t = 0.05; u = 0.1 / (1 + 0.075 s) along it
foot = brentq(lambda x0: x0 + 0.75 * phi_lin(x0) * 0.05, 0.0, 1.0, xtol=1e-15, rtol=1e-15)
rt = [0.0, 0.01, 0.03, 0.05]
emit("kRiccatiFoot", foot)
emit_array("kRiccatiT", rt)
emit_array("kRiccatiU", [0.1 / (1.0 + 0.075 * t) for t in rt])
emit_array("kRiccatiEta", [foot + 0.75 * phi_lin(foot) * t for t in rt])

# one upwind step for the waterfall on x = 0, 0.1, ..., 1 (ghost = last value), dt = 0.01
dx, dt = 0.1, 0.01
x = np.arange(11) * dx
hx = 1.0 / (1.0 + x)
dh = -1.0 / (1.0 + x) ** 2
zp = np.zeros_like(x)
zm = -4.0 * np.sqrt(1.0 + hx)
cp = (3.0 * zp + zm) / 4.0
cm = (3.0 * zm + zp) / 4.0


def step(z, c):
    zr = np.append(z[1:], z[-1])
    return z - dt * c * (zr - z) / dx + dt * dh


emit_array("kUpwindZPlus", step(zp, cp))
emit_array("kUpwindZMinus", step(zm, cm))

header = Path(__file__).resolve().parent.parent / "oracle_values.hpp"
header.write_text(
    "#pragma once\n\n// Generated by tests/oracle/derive.py.\n\nnamespace oracle {\n\n"
    + "\n".join(out)
    + "\n\n}  // namespace oracle\n"
)

"""Independent reference values for the C++ unit and acceptance tests.

Plain numpy/scipy re-derivations; run `python3 oracle_values.py` to
regenerate the numbers frozen in tests/unit/*.cpp and tests/acceptance.
"""
import numpy as np
from scipy.optimize import brentq, minimize_scalar

PI = np.pi


def admittance(p, f):
    c0, cm, lm, rm, rs, r0 = p
    w = 2 * PI * f
    zs = r0 + 1 / (1j * w * c0)
    if cm > 0:
        zm = rm + 1j * w * lm + 1 / (1j * w * cm)
        zp = 1 / (1 / zs + 1 / zm)
    else:
        zp = zs
    return 1 / (rs + zp)


def from_targets(fr, k, q, c0, rs, r0):
    x = 8 / PI**2 * k
    cm = c0 * x / (1 - x)
    lm = 1 / ((2 * PI * fr) ** 2 * cm)
    rm = 2 * PI * fr * lm / q
    return (c0, cm, lm, rm, rs, r0)


def section(title):
    print(f"\n== {title}")


section("mbvd")
ex = (1250e-15, 300.3e-15, 2.992e-9, 0.7, 7.7, 1.5)
print("|Y(5.31 GHz)| example p      ", abs(admittance(ex, 5.31e9)))
print("|Y(1e13)| example p          ", abs(admittance(ex, 1e13)))
fs_ex = 1 / (2 * PI * np.sqrt(2.992e-9 * 300.3e-15))
print("fs(2.992 nH, 300.3 fF)       ", fs_ex)
print("kt2(5.310, 5.914)            ", PI**2 / 8 * (1 - (5.310 / 5.914) ** 2))
p = from_targets(5.31e9, 0.239, 101, 1250e-15, 7.7, 1.5)
print("from_targets cm lm rm        ", p[1], p[2], p[3])
fs = 1 / (2 * PI * np.sqrt(p[2] * p[1]))
fpl = fs * np.sqrt(1 + p[1] / p[0])
print("fp_lossless                  ", fpl)
r = minimize_scalar(lambda f: abs(admittance(p, f)), bounds=(fs * 1.001, 1.5 * fpl),
                    method="bounded", options={"xatol": 1e-2})
fpm = r.x
k = PI**2 / 8 * (1 - fs**2 / fpm**2)
print("fp_min kt2 fom_m fom         ", fpm, k, k * 101, 2 * PI * fpm * p[0] / abs(admittance(p, fpm)))
kr = 1 - fs**2 / fpm**2
pr = (p[0], p[0] * 0.239 / (1 - 0.239), 0, 0, 7.7, 1.5)
pr = (pr[0], pr[1], 1 / ((2 * PI * 5.31e9) ** 2 * pr[1]), 0, 7.7, 1.5)
pr = (pr[0], pr[1], pr[2], 2 * PI * 5.31e9 * pr[2] / 101, 7.7, 1.5)
fplr = 5.31e9 * np.sqrt(1 + pr[1] / pr[0])
rr = minimize_scalar(lambda f: abs(admittance(pr, f)), bounds=(5.31e9 * 1.001, 1.5 * fplr),
                     method="bounded", options={"xatol": 1e-2})
print("ratio-definition fom         ", 2 * PI * rr.x * pr[0] / abs(admittance(pr, rr.x)))

section("extraction")
print("s11=j -> Y                   ", (1 / 50) * (1 - 1j) / (1 + 1j))

section("ladder")
TAU = 1.5 * 1250e-15


def design(order, fser, k, q, r, z0, tau=TAU):
    x = 8 / PI**2 * k
    ratio = x / (1 - x)
    fp = fser * np.sqrt(1 + ratio)
    fc = np.sqrt(fser * fp)
    c0s = 1 / (2 * PI * fc * z0 * np.sqrt(r))
    c0p = r * c0s
    fsh = fser / np.sqrt(1 + ratio)
    out = []
    for i in range(order):
        series = i % 2 == 0
        c0 = c0s if series else c0p
        out.append((series, from_targets(fser if series else fsh, k, q, c0, 0.0, tau / c0)))
    return out, c0s, c0p


def s21(el, f, z0):
    m = np.eye(2, dtype=complex)
    for series, p in el:
        y = admittance(p, f)
        e = np.array([[1, 1 / y], [0, 1]]) if series else np.array([[1, 0], [y, 1]])
        m = m @ e
    a, b, c, d = m.ravel()
    return 2 / (a + b / z0 + c * z0 + d)


def metrics(fg, s, g=0.15):
    db = 20 * np.log10(np.abs(s))
    i = db.argmax()
    th = db[i] - 3
    idx = np.where(db >= th)[0]
    lo, hi = idx[0], idx[-1]
    cross = lambda a, b: fg[a] + (th - db[a]) * (fg[b] - fg[a]) / (db[b] - db[a])
    flo, fhi = cross(lo - 1, lo), cross(hi, hi + 1)
    fc = np.sqrt(flo * fhi)
    m = (fg < (1 - g) * fc) | (fg > (1 + g) * fc)
    return -db[i], (fhi - flo) / fc, -db[m].max(), flo, fhi


el, c0s, c0p = design(5, 5.31e9, 0.239, 101, 3, 50)
print("C0S C0P                      ", c0s, c0p)
fg = np.linspace(0.8 * 5.31e9, 1.2 * 5.31e9, 4001)
s = np.array([s21(el, f, 50) for f in fg])
print("IL BW REJ flo fhi            ", metrics(fg, s))
for k in [0.05, 0.10, 0.15, 0.20, 0.25, 0.30, 0.35]:
    el, _, _ = design(5, 5.31e9, k, 101, 3, 50)
    s = np.array([s21(el, f, 50) for f in fg])
    print(f"sweep kt2={k:.2f}              ", metrics(fg, s)[:3])

section("acoustic1d")
MAT = {"Ti": (4506, 6070), "Pt": (21450, 3960), "AlScN": (3500, 8800), "Al": (2700, 6420)}


def stack_m21(stack, f):
    m = np.eye(2, dtype=complex)
    for t, rho, v in stack:
        k = 2 * PI * f / v
        z = rho * v
        c, sn = np.cos(k * t), np.sin(k * t)
        m = m @ np.array([[c, 1j * sn / z], [1j * z * sn, c]])
    return m[1, 0].imag


rod = [(20e-9,) + MAT["Ti"], (50e-9,) + MAT["Pt"], (500e-9,) + MAT["AlScN"], (110e-9,) + MAT["Al"]]
grid = np.linspace(1e9, 30e9, 400001)
vals = np.array([stack_m21(rod, f) for f in grid])
i = np.where(np.sign(vals[1:]) != np.sign(vals[:-1]))[0][0]
fte = brentq(lambda f: stack_m21(rod, f), grid[i], grid[i + 1], xtol=1e-3)
print("rod stack TE                 ", fte)
z1, z2 = 1.0, 2.0
print("Bragg tr/2                   ", -(z1 / z2 + z2 / z1) / 2)

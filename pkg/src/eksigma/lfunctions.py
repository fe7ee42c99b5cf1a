"""Digamma, Stieltjes, Hurwitz zeta, and Dirichlet L-values.

Every special function on the value path is built here from Euler-Maclaurin
expansions, so the numeric core has no dependency beyond numpy. Absolute
error targets: digamma 2e-13 on (0,1], first generalized Stieltjes constant
1e-12 plus 1e-15 relative, Hurwitz zeta pair ~1e-14 relative for s in
[2, 60], direct summation beyond.

L-functions for characters mod q come in two evaluation regimes:

  s = 1   finite sums of digamma / Stieltjes values at a/q
  s >= 2  finite sums of Hurwitz zeta pairs at a/q, switching to plain
          Dirichlet / von Mangoldt series once s >= 30 where three terms
          already reach full precision and q^s would overflow
"""

import math
from dataclasses import dataclass

import numpy as np

from .errors import CapacityError, DomainError

EULER_GAMMA = 0.5772156649015329
CATALAN = 0.9159655941772190

PSI_ABS_ERR = 2e-13
G1_ABS_ERR = 1e-12

_PSI_SHIFT = 14
_G1_N = 512
_HZ_N = 48
_SERIES_S_MIN = 30.0
_DIRECT_S_MIN = 60.0

# B_{2k} / (2k)! for k = 1..8
_HZ_BERN = (
    1.0 / 12.0,
    -1.0 / 720.0,
    1.0 / 30240.0,
    -1.0 / 1209600.0,
    1.0 / 47900160.0,
    -691.0 / 1307674368000.0,
    1.0 / 74724249600.0,
    -3617.0 / 10670622842880000.0,
)


def _psi_tail(x, logx):
    """Asymptotic digamma tail, valid once x >= 14."""
    z = 1.0 / (x * x)
    poly = 1.0 / 12.0 - z * (1.0 / 120.0 - z * (1.0 / 252.0 - z * (1.0 / 240.0)))
    return logx - 0.5 / x - z * poly


def digamma(x):
    """psi(x) for x > 0 by recurrence into the asymptotic range."""
    x = float(x)
    if x <= 0.0:
        raise DomainError(f"digamma needs x > 0, got {x}")
    acc = 0.0
    while x < _PSI_SHIFT:
        acc -= 1.0 / x
        x += 1.0
    return acc + _psi_tail(x, math.log(x))


def _digamma_unit_vec(x):
    """Vector digamma for every component in (0, 1)."""
    acc = np.zeros_like(x)
    xx = x.astype(np.float64, copy=True)
    for _ in range(_PSI_SHIFT):
        acc -= 1.0 / xx
        xx += 1.0
    return acc + _psi_tail(xx, np.log(xx))


def _gamma1_tail(y, logy):
    """Euler-Maclaurin closure for sum of log(t)/t from t = y on,
    folded with the -log(M)^2/2 renormalization; terms through B8."""
    y2 = y * y
    y4 = y2 * y2
    f1 = (1.0 - logy) / y2
    f3 = (11.0 - 6.0 * logy) / y4
    f5 = (274.0 - 120.0 * logy) / (y4 * y2)
    f7 = (13068.0 - 5040.0 * logy) / (y4 * y4)
    return (
        -0.5 * logy * logy
        + 0.5 * logy / y
        - f1 / 12.0
        + f3 / 720.0
        - f5 / 30240.0
        + f7 / 1209600.0
    )


def stieltjes1(x):
    """First generalized Stieltjes constant gamma_1(x), x > 0.

    gamma_1(x) = lim_M [ sum_{n=0..M} log(n+x)/(n+x) - log(M+x)^2 / 2 ].
    """
    x = float(x)
    if x <= 0.0:
        raise DomainError(f"stieltjes1 needs x > 0, got {x}")
    y = np.arange(_G1_N, dtype=np.float64) + x
    head = math.fsum(np.log(y) / y)
    top = _G1_N + x
    return head + _gamma1_tail(top, math.log(top))


def _stieltjes1_unit_vec(x):
    """Vector gamma_1 for components in (0, 1), chunked to bound memory."""
    out = np.empty_like(x)
    n = np.arange(_G1_N, dtype=np.float64)
    step = max(16, (1 << 20) // _G1_N)
    for lo in range(0, x.size, step):
        xs = x[lo : lo + step]
        y = xs[:, None] + n[None, :]
        out[lo : lo + step] = np.sum(np.log(y) / y, axis=1)
    top = x + _G1_N
    return out + _gamma1_tail(top, np.log(top))


def _hz_direct(s, x):
    """(zeta(s,x), d/ds) by raw summation; only sane for large s."""
    v = []
    d = []
    n = 0
    while n < 400:
        lu = math.log(n + x)
        e = -s * lu
        t = math.exp(e) if e > -745.0 else 0.0
        v.append(t)
        d.append(-lu * t)
        n += 1
        if n >= 4 and t <= 1e-22 * abs(v[0]):
            break
    return math.fsum(v), math.fsum(d)


def hurwitz_zeta_pair(s, x):
    """(zeta(s, x), d/ds zeta(s, x)) for real s >= 2 and x > 0."""
    s = float(s)
    x = float(x)
    if s < 2.0:
        raise DomainError(f"expansion needs s >= 2, got {s}")
    if x <= 0.0:
        raise DomainError(f"x must be positive, got {x}")
    if x < 1.0 and -s * math.log(x) > 700.0:
        raise CapacityError(f"x^-s overflows float64 at s={s}, x={x}")
    if s >= _DIRECT_S_MIN:
        return _hz_direct(s, x)
    vterms = []
    dterms = []
    for n in range(_HZ_N):
        lu = math.log(n + x)
        t = math.exp(-s * lu)
        vterms.append(t)
        dterms.append(-lu * t)
    y = _HZ_N + x
    ly = math.log(y)
    integ = math.exp((1.0 - s) * ly) / (s - 1.0)
    vterms.append(integ)
    dterms.append(-integ * (ly + 1.0 / (s - 1.0)))
    half = 0.5 * math.exp(-s * ly)
    vterms.append(half)
    dterms.append(-ly * half)
    y2 = y * y
    ypow = math.exp((-s - 1.0) * ly)
    prod = s
    psum = 1.0 / s
    for k, c in enumerate(_HZ_BERN):
        t = c * prod * ypow
        vterms.append(t)
        dterms.append(t * (psum - ly))
        prod *= (s + 2 * k + 1) * (s + 2 * k + 2)
        psum += 1.0 / (s + 2 * k + 1) + 1.0 / (s + 2 * k + 2)
        ypow /= y2
    return math.fsum(vterms), math.fsum(dterms)


def zeta_pair(s):
    """(zeta(s), zeta'(s)) for real s >= 2."""
    return hurwitz_zeta_pair(s, 1.0)


def zeta_value(s):
    return zeta_pair(s)[0]


def zeta_logderiv(s):
    """zeta'/zeta(s) for s >= 2."""
    v, d = zeta_pair(s)
    return d / v


def log_gamma_quarter():
    """log Gamma(1/4) through the arithmetic-geometric mean.

    Gamma(1/4)^2 = 2 sqrt(2 pi) * pi / agm(1, sqrt 2).
    """
    a, b = 1.0, math.sqrt(2.0)
    for _ in range(6):
        a, b = 0.5 * (a + b), math.sqrt(a * b)
    lemniscate = math.pi / (0.5 * (a + b))
    return 0.5 * (math.log(2.0) + 0.5 * math.log(2.0 * math.pi) + math.log(lemniscate))


def chi_minus4_value_at1():
    """L(1, chi_-4) = pi/4."""
    return 0.25 * math.pi


def chi_minus4_logderiv_at1():
    """L'/L(1, chi_-4) in closed form via log Gamma(1/4)."""
    return (
        EULER_GAMMA
        + 2.0 * math.log(2.0)
        + 3.0 * math.log(math.pi)
        - 4.0 * log_gamma_quarter()
    )


def chi_minus4_logderiv_at1_stieltjes():
    """Same quantity from digamma / Stieltjes values; cross-check route."""
    lq = math.log(4.0)
    value = -(digamma(0.25) - digamma(0.75)) / 4.0
    deriv = -lq * value - (stieltjes1(0.25) - stieltjes1(0.75)) / 4.0
    return deriv / value


def chi_minus4_pair(s):
    """(L(s, chi_-4), L'(s, chi_-4)) for s >= 2."""
    s = float(s)
    if s < 2.0:
        raise DomainError(f"need s >= 2, got {s}")
    if s >= _SERIES_S_MIN:
        v = []
        d = []
        for n in range(1, 40, 2):
            sign = 1.0 if n % 4 == 1 else -1.0
            t = sign * math.exp(-s * math.log(n)) if n > 1 else sign
            v.append(t)
            d.append(-math.log(n) * t)
        return math.fsum(v), math.fsum(d)
    va, da = hurwitz_zeta_pair(s, 0.25)
    vb, db = hurwitz_zeta_pair(s, 0.75)
    scale = math.exp(-s * math.log(4.0))
    value = scale * (va - vb)
    deriv = -math.log(4.0) * value + scale * (da - db)
    return value, deriv


def chi_minus4_logderiv(s):
    v, d = chi_minus4_pair(s)
    return d / v


def _cfsum(arr):
    """Compensated sum of a complex array."""
    return complex(math.fsum(arr.real), math.fsum(arr.imag))


@dataclass(frozen=True)
class LValue:
    """An L-function value with derivative and a log-derivative error bound."""

    s: float
    value: complex
    deriv: complex
    ld_err: float

    @property
    def logderiv(self):
        return self.deriv / self.value


def at1_arrays(table):
    """Cached (psi(a/q), gamma_1(a/q)) arrays for a = 1..q-1."""

    def build():
        a = np.arange(1, table.q, dtype=np.float64) / table.q
        return _digamma_unit_vec(a), _stieltjes1_unit_vec(a)

    return table.cache("at1", build)


def _component_errs(psi, g1, q):
    ep = 1e-15 * float(np.sum(np.abs(psi))) + (q - 1) * PSI_ABS_ERR
    eg = 1e-15 * float(np.sum(np.abs(g1))) + (q - 1) * G1_ABS_ERR
    return ep, eg


def L_at1(table, j):
    """L(1, chi_j) and L'(1, chi_j) for a nonprincipal character mod q.

    L(1, chi)  = -(1/q) sum_a chi(a) psi(a/q)
    L'(1, chi) = -log(q) L(1, chi) - (1/q) sum_a chi(a) gamma_1(a/q)
    """
    q = table.q
    if j % (q - 1) == 0:
        raise DomainError("principal character has a pole at s = 1")
    psi, g1 = at1_arrays(table)
    chi = table.char_vector(j)
    spsi = _cfsum(chi * psi)
    sg1 = _cfsum(chi * g1)
    value = -spsi / q
    deriv = -math.log(q) * value - sg1 / q
    ep, eg = _component_errs(psi, g1, q)
    errv = ep / q
    errd = math.log(q) * errv + eg / q
    ld = abs(deriv / value)
    ld_err = (errd + ld * errv) / abs(value)
    return LValue(s=1.0, value=value, deriv=deriv, ld_err=ld_err)


def logderiv_sweep_at1(table):
    """All of L'/L(1, chi_j) at once via one FFT over the dlog permutation.

    Returns (ld, lvalue, err) arrays indexed by j; slot 0 (principal) holds
    nan / inf. Output is identical in meaning to L_at1 called per j, but the
    rounding profile differs, so callers must pick one route per q.
    """

    def build():
        q = table.q
        n = q - 1
        psi, g1 = at1_arrays(table)
        vp = psi[table.powers - 1]
        vg = g1[table.powers - 1]
        sp = np.fft.ifft(vp) * n
        sg = np.fft.ifft(vg) * n
        with np.errstate(invalid="ignore", divide="ignore"):
            ld = -math.log(q) + sg / sp
        lvalue = -sp / q
        ep, eg = _component_errs(psi, g1, q)
        lg2 = math.log2(max(n, 2))
        fp = 8e-16 * float(np.linalg.norm(vp)) * lg2
        fg = 8e-16 * float(np.linalg.norm(vg)) * lg2
        num_err = eg + fg
        den_err = ep + fp
        mag = np.abs(sp)
        with np.errstate(invalid="ignore", divide="ignore"):
            err = (num_err + np.abs(sg / sp) * den_err) / mag
        ld[0] = complex("nan")
        err[0] = math.inf
        return ld, lvalue, err

    return table.cache("sweep1", build)


def L_at(table, j, s):
    """(value, derivative) record of L(s, chi_j) for real s >= 2."""
    q = table.q
    s = float(s)
    if s < 2.0:
        raise DomainError(f"L_at needs s >= 2, got {s}; use L_at1 at s = 1")
    lq = math.log(q)
    if j % (q - 1) == 0:
        zv, zd = zeta_pair(s)
        qs = math.exp(-s * lq)
        value = zv * (1.0 - qs)
        deriv = zd * (1.0 - qs) + zv * lq * qs
        return LValue(s=s, value=complex(value), deriv=complex(deriv), ld_err=4e-15 * (1.0 + abs(zd / zv)))
    if s >= _SERIES_S_MIN:
        vterms = [complex(1.0)]
        dterms = [complex(0.0)]
        for m in range(2, 65):
            ln = math.log(m)
            e = -s * ln
            t = math.exp(e) if e > -745.0 else 0.0
            if t == 0.0:
                break
            c = table.char_value(j, m)
            vterms.append(c * t)
            dterms.append(-ln * c * t)
        value = complex(math.fsum(x.real for x in vterms), math.fsum(x.imag for x in vterms))
        deriv = complex(math.fsum(x.real for x in dterms), math.fsum(x.imag for x in dterms))
        tail = math.exp(-(s - 1.0) * math.log(64.0)) / (s - 1.0)
        return LValue(s=s, value=value, deriv=deriv, ld_err=2.0 * tail + 1e-15)

    def build():
        zv = np.empty(q - 1, dtype=np.float64)
        zd = np.empty(q - 1, dtype=np.float64)
        for a in range(1, q):
            zv[a - 1], zd[a - 1] = hurwitz_zeta_pair(s, a / q)
        return zv, zd

    zv, zd = table.cache(("hz", s), build)
    chi = table.char_vector(j)
    den = _cfsum(chi * zv)
    num = _cfsum(chi * zd)
    qs = math.exp(-s * lq)
    value = qs * den
    deriv = -lq * value + qs * num
    rel = 2e-15 * (q - 1)
    ld_err = rel * (1.0 + abs(num / den)) * max(1.0, float(np.max(np.abs(zv))) / max(abs(den), 1e-300))
    return LValue(s=s, value=value, deriv=deriv, ld_err=ld_err)

"""Pure-Python versions of the compiled kernels in ``_cext.pyx``.

Same signatures and string formats; selected when the extension is missing or
``GAUSSAIM_PURE=1`` is set.
"""

from __future__ import annotations

import gmpy2

from .polynomial import LaurentPoly, Representation


def _parse(text: str, precision: int):
    return gmpy2.mpfr(text, precision, 16)


def _format(value) -> str:
    if value == 0:
        return "0"
    if gmpy2.is_nan(value):
        raise FloatingPointError("NaN produced in AIM recurrence")
    digits, exp, _ = value.digits(16)
    if digits.startswith("-"):
        return f"-0.{digits[1:]}@{exp}"
    return f"0.{digits}@{exp}"


def aim_values(lambda0: dict, s0: dict, k_max: int, x0: str, precision: int):
    if k_max < 0:
        raise ValueError("k_max must be non-negative")
    rep = Representation.floating(precision)
    lam0 = LaurentPoly({e: _parse(t, precision) for e, t in lambda0.items()}, rep)
    sig0 = LaurentPoly({e: _parse(t, precision) for e, t in s0.items()}, rep)
    x = _parse(x0, precision)
    if x == 0:
        raise ZeroDivisionError("evaluation point is zero")
    lam, s = lam0, sig0
    lam_vals = [_format(lam.evaluate(x))]
    s_vals = [_format(s.evaluate(x))]
    for _ in range(k_max):
        lam, s = lam.derivative() + s + lam0 * lam, s.derivative() + sig0 * lam
        lam_vals.append(_format(lam.evaluate(x)))
        s_vals.append(_format(s.evaluate(x)))
    return lam_vals, s_vals


def numerov_outward(g, h, i0, ua, ub, stop):
    n = len(g)
    if i0 < 1 or stop < i0 or stop + 1 >= n:
        raise ValueError("start/stop index out of range")
    c = h * h / 12.0
    um, u, up = float(ua), float(ub), 0.0
    fm, f = 1.0 - c * g[i0 - 1], 1.0 - c * g[i0]
    nodes = 1 if (um < 0.0 < u) or (um > 0.0 > u) else 0
    for i in range(i0, stop + 1):
        fp = 1.0 - c * g[i + 1]
        if um == 0.0:
            up = (12.0 - 10.0 * f) * u / fp
        else:
            up = ((12.0 - 10.0 * f) * u - fm * um) / fp
        if i < stop and ((up < 0.0 < u) or (up > 0.0 > u)):
            nodes += 1
        if abs(up) > 1e150:
            um, u, up = um * 1e-150, u * 1e-150, up * 1e-150
        if i == stop:
            break
        um, u, fm, f = u, up, f, fp
    return um, u, up, nodes


def numerov_inward(g, h, u_last, u_prev, stop):
    n = len(g)
    if stop < 1 or stop + 2 >= n:
        raise ValueError("stop index out of range")
    c = h * h / 12.0
    up, u = float(u_last), float(u_prev)
    fp, f = 1.0 - c * g[n - 1], 1.0 - c * g[n - 2]
    nodes = 0
    um = u
    for i in range(n - 2, stop - 1, -1):
        fm = 1.0 - c * g[i - 1]
        um = ((12.0 - 10.0 * f) * u - fp * up) / fm
        if i > stop and ((um < 0.0 < u) or (um > 0.0 > u)):
            nodes += 1
        if abs(um) > 1e150:
            um, u, up = um * 1e-150, u * 1e-150, up * 1e-150
        if i == stop:
            break
        up, u, fp, f = u, um, f, fm
    return um, u, up, nodes

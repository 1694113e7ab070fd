# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels: the AIM recurrence on dense MPFR arrays and Numerov sweeps.

Coefficients cross the Python/C boundary as base-16 MPFR strings
(``[-]0.<hexdigits>@<exp>``), which is exact in both directions.
"""

from libc.stdlib cimport malloc, free
from libc.math cimport fabs

cdef extern from "mpfr.h":
    ctypedef long mpfr_prec_t
    ctypedef long mpfr_exp_t
    ctypedef struct __mpfr_struct:
        pass
    ctypedef __mpfr_struct mpfr_t[1]
    ctypedef __mpfr_struct *mpfr_ptr
    ctypedef enum mpfr_rnd_t:
        MPFR_RNDN

    void mpfr_init2(mpfr_ptr x, mpfr_prec_t prec)
    void mpfr_clear(mpfr_ptr x)
    int mpfr_set(mpfr_ptr rop, mpfr_ptr op, mpfr_rnd_t rnd)
    int mpfr_set_si(mpfr_ptr rop, long op, mpfr_rnd_t rnd)
    int mpfr_set_str(mpfr_ptr rop, const char *s, int base, mpfr_rnd_t rnd)
    char *mpfr_get_str(char *s, mpfr_exp_t *e, int base, size_t n, mpfr_ptr op, mpfr_rnd_t rnd)
    void mpfr_free_str(char *s)
    int mpfr_add(mpfr_ptr rop, mpfr_ptr a, mpfr_ptr b, mpfr_rnd_t rnd)
    int mpfr_sub(mpfr_ptr rop, mpfr_ptr a, mpfr_ptr b, mpfr_rnd_t rnd)
    int mpfr_mul(mpfr_ptr rop, mpfr_ptr a, mpfr_ptr b, mpfr_rnd_t rnd)
    int mpfr_mul_si(mpfr_ptr rop, mpfr_ptr a, long b, mpfr_rnd_t rnd)
    int mpfr_fma(mpfr_ptr rop, mpfr_ptr a, mpfr_ptr b, mpfr_ptr c, mpfr_rnd_t rnd)
    int mpfr_ui_div(mpfr_ptr rop, unsigned long op1, mpfr_ptr op2, mpfr_rnd_t rnd)
    int mpfr_zero_p(mpfr_ptr x)
    int mpfr_nan_p(mpfr_ptr x)


cdef class _DenseLaurent:
    """Dense MPFR coefficient buffer covering exponents ``lo .. lo + size - 1``."""

    cdef mpfr_t *c
    cdef Py_ssize_t size
    cdef long lo
    cdef long first   # lowest exponent possibly nonzero
    cdef long last    # highest exponent possibly nonzero

    def __cinit__(self, Py_ssize_t size, long lo, mpfr_prec_t prec):
        cdef Py_ssize_t i
        self.c = <mpfr_t *> malloc(size * sizeof(mpfr_t))
        if self.c == NULL:
            raise MemoryError()
        self.size = size
        self.lo = lo
        for i in range(size):
            mpfr_init2(self.c[i], prec)
            mpfr_set_si(self.c[i], 0, MPFR_RNDN)
        self.first = 1
        self.last = 0

    def __dealloc__(self):
        cdef Py_ssize_t i
        if self.c != NULL:
            for i in range(self.size):
                mpfr_clear(self.c[i])
            free(self.c)

    cdef void clear(self):
        cdef long e
        for e in range(self.first, self.last + 1):
            mpfr_set_si(self.c[e - self.lo], 0, MPFR_RNDN)
        self.first = 1
        self.last = 0


cdef int _load(_DenseLaurent dst, dict terms) except -1:
    cdef long e
    cdef bytes s
    dst.clear()
    for key, text in terms.items():
        e = key
        if e < dst.lo or e >= dst.lo + dst.size:
            raise ValueError("exponent outside kernel buffer")
        s = text.encode("ascii")
        if mpfr_set_str(dst.c[e - dst.lo], s, 16, MPFR_RNDN) != 0:
            raise ValueError(f"bad coefficient string {text!r}")
        if dst.first > dst.last:
            dst.first = e
            dst.last = e
        else:
            dst.first = min(dst.first, e)
            dst.last = max(dst.last, e)
    return 0


cdef str _dump(mpfr_ptr x):
    cdef mpfr_exp_t exp
    cdef char *raw
    if mpfr_zero_p(x):
        return "0"
    if mpfr_nan_p(x):
        raise FloatingPointError("NaN produced in AIM recurrence")
    raw = mpfr_get_str(NULL, &exp, 16, 0, x, MPFR_RNDN)
    try:
        digits = (<bytes> raw).decode("ascii")
    finally:
        mpfr_free_str(raw)
    if digits.startswith("-"):
        return f"-0.{digits[1:]}@{exp}"
    return f"0.{digits}@{exp}"


cdef void _horner(mpfr_ptr out, _DenseLaurent p, mpfr_ptr x, mpfr_ptr xinv, mpfr_ptr tmp):
    # nonnegative powers by Horner in x, negative powers by Horner in 1/x;
    # buffer slots outside [first, last] are zero
    cdef long e
    mpfr_set_si(out, 0, MPFR_RNDN)
    if p.first > p.last:
        return
    for e in range(p.last, -1, -1):
        mpfr_fma(out, out, x, p.c[e - p.lo], MPFR_RNDN)
    if p.first < 0:
        mpfr_set_si(tmp, 0, MPFR_RNDN)
        for e in range(p.first, 0):
            mpfr_fma(tmp, tmp, xinv, p.c[e - p.lo], MPFR_RNDN)
        mpfr_mul(tmp, tmp, xinv, MPFR_RNDN)
        mpfr_add(out, out, tmp, MPFR_RNDN)


cdef void _step(_DenseLaurent out_l, _DenseLaurent out_s,
                _DenseLaurent lam, _DenseLaurent s,
                _DenseLaurent lam0, _DenseLaurent s0, mpfr_ptr tmp):
    """lam' + s + lam0*lam -> out_l ;  s' + s0*lam -> out_s."""
    cdef long e, a, b
    out_l.clear()
    out_s.clear()
    out_l.first = min(lam.first - 1, s.first, lam0.first + lam.first)
    out_l.last = max(lam.last - 1, s.last, lam0.last + lam.last)
    out_s.first = min(s.first - 1, s0.first + lam.first)
    out_s.last = max(s.last - 1, s0.last + lam.last)
    for e in range(lam.first, lam.last + 1):
        if e != 0 and not mpfr_zero_p(lam.c[e - lam.lo]):
            mpfr_mul_si(tmp, lam.c[e - lam.lo], e, MPFR_RNDN)
            mpfr_add(out_l.c[e - 1 - out_l.lo], out_l.c[e - 1 - out_l.lo], tmp, MPFR_RNDN)
    for e in range(s.first, s.last + 1):
        if not mpfr_zero_p(s.c[e - s.lo]):
            mpfr_add(out_l.c[e - out_l.lo], out_l.c[e - out_l.lo], s.c[e - s.lo], MPFR_RNDN)
            if e != 0:
                mpfr_mul_si(tmp, s.c[e - s.lo], e, MPFR_RNDN)
                mpfr_add(out_s.c[e - 1 - out_s.lo], out_s.c[e - 1 - out_s.lo], tmp, MPFR_RNDN)
    for b in range(lam.first, lam.last + 1):
        if mpfr_zero_p(lam.c[b - lam.lo]):
            continue
        for a in range(lam0.first, lam0.last + 1):
            if not mpfr_zero_p(lam0.c[a - lam0.lo]):
                mpfr_fma(out_l.c[a + b - out_l.lo], lam0.c[a - lam0.lo], lam.c[b - lam.lo],
                         out_l.c[a + b - out_l.lo], MPFR_RNDN)
        for a in range(s0.first, s0.last + 1):
            if not mpfr_zero_p(s0.c[a - s0.lo]):
                mpfr_fma(out_s.c[a + b - out_s.lo], s0.c[a - s0.lo], lam.c[b - lam.lo],
                         out_s.c[a + b - out_s.lo], MPFR_RNDN)


def aim_values(dict lambda0, dict s0, int k_max, str x0, long precision):
    """Run the AIM recurrence and evaluate at ``x0``.

    ``lambda0`` and ``s0`` map exponents to base-16 MPFR strings; ``x0`` is a
    base-16 string.  Returns ``(lam_vals, s_vals)``: lists of length
    ``k_max + 1`` holding ``lambda_k(x0)`` and ``s_k(x0)`` as base-16 strings.
    """
    cdef long lo0 = min(min(lambda0), min(s0), 0)
    cdef long hi0 = max(max(lambda0), max(s0), 0)
    # per step the lowest exponent drops by at most max(1, -lo0) and the highest rises by at most hi0
    cdef long lo = lo0 + k_max * min(lo0, -1) - 1
    cdef long hi = hi0 + k_max * max(hi0, 1) + 1
    cdef Py_ssize_t size = hi - lo + 1
    cdef _DenseLaurent L0 = _DenseLaurent(size, lo, precision)
    cdef _DenseLaurent S0 = _DenseLaurent(size, lo, precision)
    cdef _DenseLaurent La = _DenseLaurent(size, lo, precision)
    cdef _DenseLaurent Sa = _DenseLaurent(size, lo, precision)
    cdef _DenseLaurent Lb = _DenseLaurent(size, lo, precision)
    cdef _DenseLaurent Sb = _DenseLaurent(size, lo, precision)
    cdef _DenseLaurent swap
    cdef mpfr_t x, xinv, tmp, tmp2, val
    cdef int k
    if k_max < 0:
        raise ValueError("k_max must be non-negative")
    _load(L0, lambda0)
    _load(S0, s0)
    _load(La, lambda0)
    _load(Sa, s0)
    mpfr_init2(x, precision)
    mpfr_init2(xinv, precision)
    mpfr_init2(tmp, precision)
    mpfr_init2(tmp2, precision)
    mpfr_init2(val, precision)
    lam_vals = []
    s_vals = []
    try:
        if mpfr_set_str(x, x0.encode("ascii"), 16, MPFR_RNDN) != 0:
            raise ValueError(f"bad evaluation point {x0!r}")
        if mpfr_zero_p(x):
            raise ZeroDivisionError("evaluation point is zero")
        mpfr_ui_div(xinv, 1, x, MPFR_RNDN)
        for k in range(k_max + 1):
            if k > 0:
                _step(Lb, Sb, La, Sa, L0, S0, tmp)
                swap = La; La = Lb; Lb = swap
                swap = Sa; Sa = Sb; Sb = swap
            _horner(val, La, x, xinv, tmp2)
            lam_vals.append(_dump(val))
            _horner(val, Sa, x, xinv, tmp2)
            s_vals.append(_dump(val))
    finally:
        mpfr_clear(x)
        mpfr_clear(xinv)
        mpfr_clear(tmp)
        mpfr_clear(tmp2)
        mpfr_clear(val)
    return lam_vals, s_vals


def numerov_outward(const double[::1] g, double h, Py_ssize_t i0, double ua, double ub,
                    Py_ssize_t stop):
    """Integrate ``u'' = g u`` from ``u[i0-1] = ua, u[i0] = ub`` up to index ``stop + 1``.

    Returns ``(u[stop-1], u[stop], u[stop+1], nodes)`` where ``nodes`` counts
    sign changes on indices ``i0 - 1 .. stop``.  Values share one arbitrary scale.
    """
    cdef double c = h * h / 12.0
    cdef double um = ua, u = ub, up = 0.0, fm, f, fp
    cdef Py_ssize_t i, nodes = 0
    cdef Py_ssize_t n = g.shape[0]
    if i0 < 1 or stop < i0 or stop + 1 >= n:
        raise ValueError("start/stop index out of range")
    fm = 1.0 - c * g[i0 - 1]
    f = 1.0 - c * g[i0]
    if (um < 0.0 and u > 0.0) or (um > 0.0 and u < 0.0):
        nodes += 1
    for i in range(i0, stop + 1):
        fp = 1.0 - c * g[i + 1]
        if um == 0.0:
            up = (12.0 - 10.0 * f) * u / fp
        else:
            up = ((12.0 - 10.0 * f) * u - fm * um) / fp
        if i < stop and ((up < 0.0 and u > 0.0) or (up > 0.0 and u < 0.0)):
            nodes += 1
        if fabs(up) > 1e150:
            um *= 1e-150
            u *= 1e-150
            up *= 1e-150
        if i == stop:
            break
        um = u
        u = up
        fm = f
        f = fp
    return um, u, up, nodes


def numerov_inward(const double[::1] g, double h, double u_last, double u_prev, Py_ssize_t stop):
    """Integrate ``u'' = g u`` downward from the last two grid points to ``stop - 1``.

    Returns ``(u[stop-1], u[stop], u[stop+1], nodes)``; ``nodes`` counts sign
    changes on indices ``stop .. len(g) - 1``.
    """
    cdef double c = h * h / 12.0
    cdef Py_ssize_t n = g.shape[0]
    cdef double up = u_last, u = u_prev, um, fp, f, fm
    cdef Py_ssize_t i, nodes = 0
    if stop < 1 or stop + 2 >= n:
        raise ValueError("stop index out of range")
    fp = 1.0 - c * g[n - 1]
    f = 1.0 - c * g[n - 2]
    for i in range(n - 2, stop - 1, -1):
        fm = 1.0 - c * g[i - 1]
        um = ((12.0 - 10.0 * f) * u - fp * up) / fm
        if i > stop and ((um < 0.0 and u > 0.0) or (um > 0.0 and u < 0.0)):
            nodes += 1
        if fabs(um) > 1e150:
            um *= 1e-150
            u *= 1e-150
            up *= 1e-150
        if i > stop:
            up = u
            u = um
            fp = f
            f = fm
    return um, u, up, nodes

import json
import math
from fractions import Fraction
from pathlib import Path

import gmpy2
import pytest
import sympy as sp
from hypothesis import given, settings, strategies as st

from gaussaim import kernels
from gaussaim.aim import (AimSeed, LevelFinder, aim_iterate, aim_levels, build_seed, delta,
                          delta_sequence, evaluation_point, find_eigenvalue, oscillator_seed,
                          seed_from_potential)
from gaussaim.errors import ContractError, FewerRootsError, PoleError
from gaussaim.models import (AimConfig, PotentialModel, QuantumNumbers,
                             truncated_potential_coefficients)
from gaussaim.polynomial import EXACT, LaurentPoly, Representation

GOLDEN = Path(__file__).parent / "golden" / "aim_lambda2_s2.json"
POT = PotentialModel()
CFG = AimConfig()


def P(terms, rep=EXACT):
    return LaurentPoly(terms, rep)


# ---- truncated potential ----

def test_truncated_coefficients_order4():
    assert truncated_potential_coefficients(400, 4) == [-400, 400, -200]


def test_truncated_coefficients_order2():
    assert truncated_potential_coefficients(1, 2) == [-1, 1]


def test_truncated_coefficients_order10_matches_closed_polynomial():
    got = truncated_potential_coefficients(Fraction(400), 10)
    # (A/120)(r^10 - 5 r^8 + 20 r^6 - 60 r^4 + 120 r^2 - 120)
    want = [Fraction(400, 120) * c for c in (-120, 120, -60, 20, -5, 1)]
    assert got == want


@pytest.mark.parametrize("order", [3, 0, 7, 2.5])
def test_truncated_coefficients_rejects_bad_order(order):
    with pytest.raises(ContractError):
        truncated_potential_coefficients(400, order)


# ---- seed ----

def test_seed_ground_state_constant_and_lambda0():
    seed = build_seed(POT, 0, CFG, EXACT)
    assert seed.s0_const.coefficient(0) == -340
    assert seed.lambda0 == P({1: 40, -1: -2})
    assert seed.s0_const.min_exponent == 0
    assert seed.s0_const.max_exponent == 10


def test_seed_beta_zero_is_bare_potential():
    seed = seed_from_potential(truncated_potential_coefficients(Fraction(7, 3), 2), 0, 0)
    assert seed.s0_const == P({0: Fraction(-7, 3), 2: Fraction(7, 3)})


def test_seed_float_matches_exact():
    exact = build_seed(POT, 2, CFG, EXACT)
    flt = build_seed(POT, 2, CFG)
    assert flt.s0_const == exact.s0_const.to_representation(flt.rep)


@settings(max_examples=25, deadline=None)
@given(st.lists(st.fractions(-5, 5, max_denominator=6), min_size=1, max_size=4),
       st.integers(0, 3), st.fractions(Fraction(1, 4), 4, max_denominator=4),
       st.fractions(-50, 0, max_denominator=8))
def test_seed_reproduces_radial_equation(fcoeffs, l, beta, eps):
    # R = r^(l+1) exp(-beta r^2) f solves R'' = [l(l+1)/r^2 + V - eps] R
    # exactly when f'' - lambda0 f' - s0 f = 0, for any polynomial f.
    r = sp.symbols("r", positive=True)
    seed = build_seed(PotentialModel(), l, CFG.with_(beta=beta, truncation_order=6), EXACT)

    def to_sym(p):
        return sum(sp.Rational(int(c.numerator), int(c.denominator)) * r ** e for e, c in p.terms.items())

    f = sum(sp.Rational(c.numerator, c.denominator) * r ** j for j, c in enumerate(fcoeffs))
    v = sum(sp.Rational(c) * r ** (2 * j)
            for j, c in enumerate(truncated_potential_coefficients(Fraction(400), 6)))
    b = sp.Rational(beta.numerator, beta.denominator)
    e = sp.Rational(eps.numerator, eps.denominator)
    R = r ** (l + 1) * sp.exp(-b * r ** 2) * f
    radial = sp.diff(R, r, 2) - (l * (l + 1) / r ** 2 + v - e) * R
    aim = sp.diff(f, r, 2) - to_sym(seed.lambda0) * sp.diff(f, r) - (to_sym(seed.s0_const) - e) * f
    assert sp.simplify(radial - r ** (l + 1) * sp.exp(-b * r ** 2) * aim) == 0


# ---- evaluation point ----

@pytest.mark.parametrize("l, beta, want", [(0, 10, math.sqrt(1 / 20)), (0, 0.5, 1.0), (3, 2, 1.0)])
def test_evaluation_point(l, beta, want):
    assert evaluation_point(l, beta) == pytest.approx(want, rel=1e-15)
    assert float(evaluation_point(l, beta, 256)) == pytest.approx(want, rel=1e-15)


def test_evaluation_point_rejects_nonpositive_beta():
    with pytest.raises(ContractError):
        evaluation_point(0, 0)


def test_evaluation_point_value_l0_beta10():
    assert f"{evaluation_point(0, 10):.10f}" == "0.2236067977"


# ---- recurrence ----

def test_iterate_first_step_unrolled():
    seed = build_seed(POT, 1, CFG, EXACT)
    eps = Fraction(-300)
    (lam0, s0), (lam1, s1) = aim_iterate(seed, eps, 1)
    assert lam1 == lam0.derivative() + s0 + lam0 * lam0
    assert s1 == s0.derivative() + s0 * lam0


def test_iterate_hand_example():
    seed = AimSeed(P({1: 1}), P({0: 1}), 0, 0)
    (_, _), (lam1, s1) = aim_iterate(seed, 0, 1)
    assert lam1 == P({2: 1, 0: 2})
    assert s1 == P({1: 1})


def test_iterate_golden_snapshot():
    data = json.loads(GOLDEN.read_text())
    seed = build_seed(POT, 0, CFG, EXACT)
    lam2, s2 = aim_iterate(seed, Fraction(data["setting"]["epsilon"]), 2)[2]
    assert [list(p) for p in lam2.debug_terms()] == data["lambda2"]
    assert [list(p) for p in s2.debug_terms()] == data["s2"]


def test_iterate_exponent_bounds():
    seed = build_seed(POT, 0, CFG, EXACT)
    for j, (lam, s) in enumerate(aim_iterate(seed, Fraction(-341), 6)):
        assert lam.min_exponent >= -2 * (j + 1)
        assert s.min_exponent >= -2 * (j + 1)
        assert lam.max_exponent <= 1 + 11 * j


# ---- delta ----

def test_delta_zero_when_s0_vanishes():
    seed = AimSeed(P({0: 3}), LaurentPoly.zero(), 0, 0)
    for k in range(1, 6):
        assert delta(seed, 0, k, Fraction(1, 3)) == 0


def test_delta_pole_at_origin():
    with pytest.raises(PoleError):
        delta(build_seed(POT, 0, CFG, EXACT), -341, 3, 0)


def test_delta_sign_change_brackets_ground_state():
    seed = build_seed(POT, 0, CFG)
    x0 = evaluation_point(0, 10, 256)
    assert delta(seed, -342, 15, x0) * delta(seed, -341, 15, x0) < 0


def test_delta_sign_change_wide_bracket_exact_crosscheck():
    x0 = Fraction(1, 4)
    flt = build_seed(POT, 0, CFG)
    ex = build_seed(POT, 0, CFG, EXACT)
    lo, hi = delta(ex, -350, 15, x0), delta(ex, -335, 15, x0)
    assert lo * hi < 0
    assert gmpy2.sign(delta(flt, -350, 15, x0)) == gmpy2.sign(lo)
    assert gmpy2.sign(delta(flt, -335, 15, x0)) == gmpy2.sign(hi)


@pytest.mark.parametrize("k", range(1, 11))
def test_delta_float_agrees_with_exact(k):
    x0 = Fraction(1, 4)
    ex = delta(build_seed(POT, 0, CFG, EXACT), -341, k, x0)
    fl = delta(build_seed(POT, 0, CFG), -341, k, x0)
    assert abs(fl / gmpy2.mpfr(ex, 256) - 1) < 1e-20


def test_compiled_and_python_kernels_agree():
    if kernels.compiled_kernels is None:
        pytest.skip("compiled extension not built")
    seed = build_seed(POT, 1, CFG)
    s0 = seed.s0(-300)
    from gaussaim._pykernels import _format
    lam = {e: _format(c) for e, c in seed.lambda0.terms.items()}
    s = {e: _format(c) for e, c in s0.terms.items()}
    x0 = _format(evaluation_point(1, 10, 256))
    a = kernels.compiled_kernels.aim_values(lam, s, 20, x0, 256)
    b = kernels.python_kernels.aim_values(lam, s, 20, x0, 256)
    for ta, tb in zip(a[0] + a[1], b[0] + b[1]):
        va, vb = gmpy2.mpfr(ta, 256, 16), gmpy2.mpfr(tb, 256, 16)
        # lambda_0(x0) vanishes for l=1, so compare on a mixed scale
        assert abs(va - vb) <= 1e-60 * (1 + abs(vb))


# ---- eigenvalues ----

@pytest.mark.parametrize("n", range(4))
@pytest.mark.parametrize("l", range(4))
def test_oscillator_quantization_is_exact(n, l):
    # f is a polynomial of degree 2n in r, so delta_k vanishes identically in x once k > 2n
    seed = oscillator_seed(l)
    eps = 4 * n + 2 * l + 3
    for k in (2 * n + 1, 2 * n + 3):
        for x in (Fraction(1, 2), Fraction(3, 7), Fraction(2)):
            assert delta(seed, eps, k, x) == 0
    assert delta(seed, eps + Fraction(1, 10), 2 * n + 1, Fraction(1, 2)) != 0


@pytest.mark.parametrize("l", range(4))
def test_oscillator_levels_from_root_finder(l):
    seed = oscillator_seed(l, rep=Representation.floating(256))
    cfg = CFG.with_(k_max=8, scan_step=0.5, root_tol=1e-12)
    finder = LevelFinder(seed, evaluation_point(l, seed.beta, 256), cfg, (0.25, 4 * 3 + 2 * l + 4))
    for n in range(4):
        eps, _ = finder.accepted_level(n)
        assert eps == pytest.approx(4 * n + 2 * l + 3, abs=1e-9)


def test_ground_state_binding_energy():
    e = find_eigenvalue(QuantumNumbers(0, 0), POT, CFG)
    assert e.binding_energy == pytest.approx(341.895, abs=5e-3)
    assert e.k_used is not None and e.k_used <= CFG.k_max
    assert e.diagnostics["precision_bits"] == 256


def test_beta_independence_of_ground_state():
    # beta=5 still wobbles by ~1e-4 between consecutive k up to k~35, so the
    # persistence tolerance must sit below the agreement tolerance
    cfg = CFG.with_(stability_tol=1e-5)
    a = find_eigenvalue(QuantumNumbers(0, 0), POT, cfg.with_(beta=5)).binding_energy
    b = find_eigenvalue(QuantumNumbers(0, 0), POT, cfg.with_(beta=10)).binding_energy
    assert abs(a - b) < 1e-4


def test_spectrum_monotone_in_n_and_l():
    grid = {}
    for l in range(3):
        for e in aim_levels(l, [0, 1], POT, CFG.with_(k_max=30)):
            assert e.ok, e
            grid[e.n, l] = e.binding_energy
    for l in range(3):
        assert grid[0, l] > grid[1, l]
    for n in range(2):
        assert grid[n, 0] > grid[n, 1] > grid[n, 2]


def test_shallow_well_reports_fewer_roots():
    with pytest.raises(FewerRootsError):
        find_eigenvalue(QuantumNumbers(0, 0), PotentialModel(depth=0.1), CFG.with_(k_max=10))


def test_failed_levels_become_entries():
    out = aim_levels(0, [0, 5], PotentialModel(depth=0.1), CFG.with_(k_max=8))
    assert [e.status for e in out] == ["FEWER-ROOTS", "FEWER-ROOTS"]
    assert all(e.binding_energy is None for e in out)


def test_delta_sequence_matches_single_delta():
    seed = build_seed(POT, 0, CFG)
    x0 = evaluation_point(0, 10, 256)
    seq = delta_sequence(seed, -341.5, 6, x0)
    assert seq[4] == delta(seed, -341.5, 5, x0)

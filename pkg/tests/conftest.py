"""Shared helpers: sympy conversion and hypothesis strategies."""

import os
import sys

import sympy
from hypothesis import settings, strategies as st

from lazcad.poly import Polynomial, parse_polynomial

FIXTURES = os.path.join(os.path.dirname(__file__), "..", "fixtures")

settings.register_profile("default", deadline=None, max_examples=50)
settings.load_profile("default")


def fixture(name):
    return os.path.join(FIXTURES, name)


def to_sympy(p):
    names = {v: sympy.Symbol(v) for v in p.ring.names}
    return sympy.sympify(str(p).replace("^", "**"), locals=names)


def from_sympy(expr, ring):
    return parse_polynomial(str(sympy.expand(expr)), ring)


def P(text, ring):
    return parse_polynomial(text, ring)


def polys(ring, max_deg=3, max_terms=5, coeff=5, nonzero=True):
    """Random polynomials with small integer coefficients."""
    exps = st.tuples(*[st.integers(0, max_deg) for _ in range(ring.n)]).filter(lambda e: sum(e) <= max_deg)
    terms = st.dictionaries(exps, st.integers(-coeff, coeff).filter(bool), min_size=1 if nonzero else 0,
                            max_size=max_terms)
    return terms.map(lambda d: Polynomial.from_dict(ring, d))


def random_poly(rng, ring, max_deg, max_terms=4, coeff=4):
    """Random polynomial from a ``random.Random``; may be constant."""
    d = {}
    for _ in range(rng.randint(1, max_terms)):
        e = [0] * ring.n
        for _ in range(rng.randint(0, max_deg)):
            e[rng.randrange(ring.n)] += 1
        d[tuple(e)] = rng.choice([c for c in range(-coeff, coeff + 1) if c])
    return Polynomial.from_dict(ring, d)


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    results = getattr(mod, "RESULTS", None)
    if results:
        terminalreporter.section("acceptance criteria")
        for n in sorted(results):
            terminalreporter.write_line(results[n])

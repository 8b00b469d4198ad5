"""q-identity and relation suites as pymeasure procedures.

The procedure walks a list of named checks over quantum integers,
factorials and binomials, and over the operator actions on Verma and
T-module shapes. Each check emits one results row.
"""

from __future__ import annotations

import logging
from typing import Callable, Iterator, List, NamedTuple

import numpy as np
from pymeasure.experiment import IntegerParameter, Parameter, Procedure

from qcompletion.algebra.actions import (
    Kashiwara,
    act,
    act_casimir,
    act_power,
    casimir_value,
    divided_power,
    kashiwara,
    ker_e,
)
from qcompletion.algebra.modules import AlgebraGen, ComponentShape, Element, ModuleShape
from qcompletion.algebra.qarith import ONE, Q, RatFunc, ord_q, q_binomial, q_factorial, q_int
from qcompletion.core.config import SuiteConfig

log = logging.getLogger(__name__)
log.addHandler(logging.NullHandler())

IDENTITY_NAMES = (
    "q_int_order",
    "q_factorial_order",
    "q_binomial_order",
    "divided_power_product",
    "negative_q_int",
    "negative_q_factorial",
    "defining_relations",
    "kashiwara_relation",
    "e_prime_f_power",
    "casimir_central",
    "t_module_relations",
    "kashiwara_inverse",
    "f_tilde_kernel_map",
)

_COEFFS = (ONE, -ONE, RatFunc.from_int(2), Q, ONE + Q, Q.inverse(), ONE / (ONE + Q * Q))


class Check(NamedTuple):
    """One named check, evaluated lazily."""

    name: str
    n: int
    m: int
    run: Callable[[], bool]


def relation_shapes() -> List[ModuleShape]:
    """Single-summand shapes M(r), -5 <= r <= 3, and T(n), 0 <= n <= 3."""
    shapes = [ModuleShape((ComponentShape.verma(r),)) for r in range(-5, 4)]
    shapes += [ModuleShape((ComponentShape.tmod(n),)) for n in range(4)]
    return shapes


def random_element(
    rng: np.random.Generator, shape: ModuleShape, terms: int = 3, max_k: int = 5
) -> Element:
    """A random nonzero element with a few terms on the strings of shape."""
    strings = shape.strings()
    x = Element.zero()
    while not x:
        for _ in range(terms):
            component, tag = strings[int(rng.integers(len(strings)))]
            top = shape[component].max_k(tag)
            bound = max_k if top is None else min(top, max_k)
            k = int(rng.integers(bound + 1))
            c = _COEFFS[int(rng.integers(len(_COEFFS)))]
            x = x + Element.of(component, tag, k, c)
    return x


# ----------------------------------------------------------------------
# q-combinatorics
# ----------------------------------------------------------------------


def _has_order(x: RatFunc, order: int) -> bool:
    report = ord_q(x)
    return report.ord == order and report.leading_coeff == 1


def _divided_power_product(n: int, m: int) -> bool:
    # f^n f^m / ([n]![m]!) against binom(n+m, n) f^(n+m) on a Verma string
    shape = ModuleShape((ComponentShape.verma(-1),))
    head = Element.of(0, "m")
    lhs = act_power(AlgebraGen.F, n + m, head, shape).scale(
        ONE / (q_factorial(n) * q_factorial(m))
    )
    rhs = divided_power(n, divided_power(m, head, shape), shape)
    expected = Element.of(0, "m", n + m, q_binomial(n + m, n))
    return lhs == expected and rhs == expected


def arithmetic_checks(max_n: int) -> Iterator[Check]:
    for n in range(1, max_n + 1):
        yield Check("q_int_order", n, 0, lambda n=n: _has_order(q_int(n), -n + 1))
        yield Check("negative_q_int", n, 0, lambda n=n: q_int(-n) == -q_int(n))
        yield Check(
            "negative_q_factorial",
            n,
            0,
            lambda n=n: q_factorial(-n) == RatFunc.from_int((-1) ** n) * q_factorial(n),
        )
    for n in range(max_n + 1):
        yield Check(
            "q_factorial_order", n, 0, lambda n=n: _has_order(q_factorial(n), -n * (n - 1) // 2)
        )
    for m in range(max_n + 1):
        for n in range(m + 1):
            yield Check(
                "q_binomial_order",
                n,
                m,
                lambda n=n, m=m: _has_order(q_binomial(m, n), -n * (m - n)),
            )
            yield Check(
                "divided_power_product", n, m, lambda n=n, m=m: _divided_power_product(n, m)
            )


# ----------------------------------------------------------------------
# Operator relations
# ----------------------------------------------------------------------


def _defining_relations(x: Element, shape: ModuleShape) -> bool:
    def a(g: AlgebraGen, y: Element) -> Element:
        return act(g, y, shape)

    T, T_INV, E, F = AlgebraGen.T, AlgebraGen.T_INV, AlgebraGen.E, AlgebraGen.F
    q2 = Q * Q
    if a(T, a(E, a(T_INV, x))) != a(E, x).scale(q2):
        return False
    if a(T, a(F, a(T_INV, x))) != a(F, x).scale(q2.inverse()):
        return False
    commutator = a(E, a(F, x)) - a(F, a(E, x))
    cartan = (a(T, x) - a(T_INV, x)).scale(ONE / (Q - Q.inverse()))
    return commutator == cartan


def _kashiwara_relation(x: Element, shape: ModuleShape) -> bool:
    lhs = act(AlgebraGen.E_PRIME, act(AlgebraGen.F, x, shape), shape)
    rhs = act(AlgebraGen.F, act(AlgebraGen.E_PRIME, x, shape), shape).scale(
        RatFunc.q_power(-2)
    )
    return lhs == rhs + x


def _casimir_central(x: Element, shape: ModuleShape) -> bool:
    for g in (AlgebraGen.E, AlgebraGen.F, AlgebraGen.T):
        if act_casimir(act(g, x, shape), shape) != act(g, act_casimir(x, shape), shape):
            return False
    return True


def _e_prime_f_power(m: Element, shape: ModuleShape, p: int) -> bool:
    fp = act_power(AlgebraGen.F, p, m, shape)
    lhs = act(AlgebraGen.E_PRIME, fp, shape)
    e_prime_m = act(AlgebraGen.E_PRIME, m, shape)
    first = act_power(AlgebraGen.F, p, e_prime_m, shape).scale(RatFunc.q_power(-2 * p))
    ratio = (ONE - RatFunc.q_power(-2 * p)) / (ONE - RatFunc.q_power(-2))
    second = act_power(AlgebraGen.F, p - 1, m, shape).scale(ratio)
    return lhs == first + second


def _t_module_relations(n: int) -> bool:
    shape = ModuleShape((ComponentShape.tmod(n),))
    z = Element.of(0, "z")
    if act_power(AlgebraGen.E, n + 2, z, shape):
        return False
    c_n = casimir_value(n)
    shifted = act_casimir(z, shape) - z.scale(c_n)
    if not shifted:
        return False
    return not (act_casimir(shifted, shape) - shifted.scale(c_n))


def _kashiwara_inverse(x: Element, shape: ModuleShape) -> bool:
    up = kashiwara(Kashiwara.F_TILDE, x, shape)
    return kashiwara(Kashiwara.E_TILDE, up, shape) == x


def _f_tilde_kernel_map(n: int, shape: ModuleShape) -> bool:
    # f~^(n+1) maps Ker e at weight n injectively into Ker e at weight -n-2
    for x in ker_e(shape, n):
        for _ in range(n + 1):
            x = kashiwara(Kashiwara.F_TILDE, x, shape)
        if not x or act(AlgebraGen.E, x, shape):
            return False
    return True


def relation_checks(suite: SuiteConfig, rng: np.random.Generator) -> Iterator[Check]:
    shapes = relation_shapes()
    for i in range(suite.random_elements):
        shape = shapes[int(rng.integers(len(shapes)))]
        x = random_element(rng, shape)
        yield Check("defining_relations", i, 0, lambda x=x, s=shape: _defining_relations(x, s))
        yield Check("kashiwara_relation", i, 0, lambda x=x, s=shape: _kashiwara_relation(x, s))
        yield Check("casimir_central", i, 0, lambda x=x, s=shape: _casimir_central(x, s))
        yield Check("kashiwara_inverse", i, 0, lambda x=x, s=shape: _kashiwara_inverse(x, s))
    for j, shape in enumerate(shapes):
        for component, tag in shape.strings():
            for k in range(3):
                m = Element.of(component, tag, k)
                for p in range(1, suite.lemma_max_p + 1):
                    yield Check(
                        "e_prime_f_power",
                        j,
                        p,
                        lambda m=m, s=shape, p=p: _e_prime_f_power(m, s, p),
                    )
    for n in range(4):
        yield Check("t_module_relations", n, 0, lambda n=n: _t_module_relations(n))
    for n in range(suite.completion_max_n + 1):
        for shape in (
            ModuleShape((ComponentShape.verma(n),)),
            ModuleShape((ComponentShape.tmod(n),)),
        ):
            yield Check("f_tilde_kernel_map", n, 0, lambda n=n, s=shape: _f_tilde_kernel_map(n, s))


def identity_checks(max_n: int, suite: SuiteConfig, seed: int) -> List[Check]:
    """Every check of the identity suite, in a fixed order for a given seed."""
    if not 0 <= max_n <= 50:
        raise ValueError(f"max_n must be in 0..50, got {max_n}")
    rng = np.random.default_rng(seed)
    return list(arithmetic_checks(max_n)) + list(relation_checks(suite, rng))


class QIdentityProcedure(Procedure):
    """Identity suite procedure.

    Runs the q-combinatorial identities up to max_n and the relations of
    e, f, t, e' and the Casimir on random elements. Setting ``corrupt`` to
    an identity name negates that identity's outcome, which must make the
    suite fail.
    """

    max_n = IntegerParameter("Largest n", default=12, minimum=0, maximum=50)
    random_elements = IntegerParameter("Random elements", default=100, minimum=1, maximum=10000)
    lemma_max_p = IntegerParameter("Largest power p", default=8, minimum=1, maximum=50)
    seed = IntegerParameter("Seed", default=SuiteConfig().seed)
    corrupt = Parameter("Negated identity", default="")

    DATA_COLUMNS = ["Identity", "n", "m", "Passed"]

    def startup(self):
        """Collect the checks."""
        if self.corrupt and self.corrupt not in IDENTITY_NAMES:
            raise ValueError(f"Unknown identity {self.corrupt!r}, expected one of {IDENTITY_NAMES}")
        self.failures = []
        suite = SuiteConfig(
            random_elements=int(self.random_elements), lemma_max_p=int(self.lemma_max_p)
        )
        self.checks = identity_checks(int(self.max_n), suite, int(self.seed))
        log.info(f"Identity suite: {len(self.checks)} checks, max_n={self.max_n}")

    def execute(self):
        """Evaluate every check."""
        total = len(self.checks)
        for i, check in enumerate(self.checks):
            if self.should_stop():
                log.warning("Identity suite aborted by user")
                return
            passed = check.run()
            if check.name == self.corrupt:
                passed = not passed
            if not passed:
                self.failures.append(f"{check.name}(n={check.n}, m={check.m})")
            self.emit(
                "results",
                {"Identity": check.name, "n": check.n, "m": check.m, "Passed": passed},
            )
            self.emit("progress", 100 * (i + 1) / total)

        log.info(f"Identity suite finished with {len(self.failures)} failures")

    def shutdown(self):
        """Nothing to release."""
        log.info("Identity suite shut down")

"""Randomized decomposition sweep.

Every run draws twisted presentations of one shape, recovers a standard
decomposition of each, checks its certificate and the recovered string
parameters, and compares the completions of two decompositions that
differ in the choice of the lowest Verma generator.
"""

from __future__ import annotations

import logging

import numpy as np
from pymeasure.experiment import IntegerParameter, Parameter, Procedure

from qcompletion.algebra.modules import TMOD, VERMA, parse_shape
from qcompletion.algebra.qarith import ONE, Q, RatFunc
from qcompletion.core.config import SuiteConfig
from qcompletion.crystal.lattice import lattice_equal
from qcompletion.decomp.decompose import (
    complete_decomposition,
    decompose,
    redecompose_lowest,
    verify_certificate,
)
from qcompletion.decomp.twisted import random_twist

log = logging.getLogger(__name__)
log.addHandler(logging.NullHandler())

_RING = (RatFunc.from_int(0), ONE, Q, ONE + Q, Q * Q)
_UNITS = (ONE, -ONE, RatFunc.from_int(2), ONE + Q)


def expected_parameters(shape_text: str):
    """Sorted ({r_i}, {n_j}) of the standard shape."""
    shape = parse_shape(shape_text)
    rs = sorted(c.parameter for c in shape.components if c.kind == VERMA)
    ns = sorted(c.parameter for c in shape.components if c.kind == TMOD)
    return rs, ns


class DecompositionSweepProcedure(Procedure):
    """Decomposition sweep procedure.

    Emits one row per random twist with the outcome of the certificate
    check, the parameter comparison and the completion uniqueness check.
    """

    shape = Parameter("Shape", default="M(1)+T(1)+M(-3)")
    twist_count = IntegerParameter("Twists", default=20, minimum=1, maximum=1000)
    seed = IntegerParameter("Seed", default=SuiteConfig().seed)
    window = IntegerParameter("Completion window", default=8, minimum=4, maximum=200)

    DATA_COLUMNS = ["Twist", "Certificate", "Parameters", "Unique_Completion", "Passed"]

    def startup(self):
        """Seed the generator."""
        self.failures = []
        self.rng = np.random.default_rng(int(self.seed))
        self.expected = expected_parameters(self.shape)
        log.info(f"Decomposition sweep: {self.twist_count} twists of {self.shape}")

    def execute(self):
        """Decompose every twist."""
        base = parse_shape(self.shape)
        window = int(self.window)
        for i in range(int(self.twist_count)):
            if self.should_stop():
                log.warning("Decomposition sweep aborted by user")
                return

            presentation = random_twist(self.rng, base)
            cert = decompose(presentation)
            certificate_ok = verify_certificate(cert).passed
            parameters_ok = cert.parameters == self.expected

            a = _RING[int(self.rng.integers(len(_RING)))]
            b = _UNITS[int(self.rng.integers(len(_UNITS)))]
            try:
                other = redecompose_lowest(cert, a, b)
            except ValueError:
                unique = True
            else:
                unique = lattice_equal(
                    complete_decomposition(cert, window), complete_decomposition(other, window)
                )

            passed = certificate_ok and parameters_ok and unique
            if not passed:
                log.debug(f"Twist {i} failed: {presentation}")
                self.failures.append(f"twist {i}")
            self.emit(
                "results",
                {
                    "Twist": i,
                    "Certificate": certificate_ok,
                    "Parameters": parameters_ok,
                    "Unique_Completion": unique,
                    "Passed": passed,
                },
            )
            self.emit("progress", 100 * (i + 1) / self.twist_count)

        log.info(f"Decomposition sweep finished with {len(self.failures)} failures")

"""Tests for QIdentityProcedure."""

from __future__ import annotations

import pytest


def _small_suite(**overrides):
    from qcompletion.procedures.identities import QIdentityProcedure

    proc = QIdentityProcedure()
    proc.max_n = 3
    proc.random_elements = 3
    proc.lemma_max_p = 2
    proc.seed = 5
    proc.corrupt = ""
    for name, value in overrides.items():
        setattr(proc, name, value)
    return proc


class TestQIdentityProcedureParameters:
    """Tests for QIdentityProcedure parameters."""

    def test_parameters_defined(self):
        """All suite parameters are defined."""
        from qcompletion.procedures.identities import QIdentityProcedure

        proc = QIdentityProcedure()

        assert hasattr(proc, "max_n")
        assert hasattr(proc, "random_elements")
        assert hasattr(proc, "lemma_max_p")
        assert hasattr(proc, "seed")
        assert hasattr(proc, "corrupt")

    def test_data_columns(self):
        """DATA_COLUMNS is correctly defined."""
        from qcompletion.procedures.identities import QIdentityProcedure

        assert QIdentityProcedure.DATA_COLUMNS == ["Identity", "n", "m", "Passed"]


class TestIdentityChecks:
    """Tests for the check list."""

    def test_every_identity_is_listed(self):
        """Each named identity has at least one check."""
        from qcompletion.core.config import SuiteConfig
        from qcompletion.procedures.identities import IDENTITY_NAMES, identity_checks

        suite = SuiteConfig(random_elements=2, lemma_max_p=1, completion_max_n=1)
        names = {check.name for check in identity_checks(2, suite, seed=1)}
        assert names == set(IDENTITY_NAMES)

    def test_same_seed_same_checks(self):
        """The check list is fixed for a seed."""
        from qcompletion.core.config import SuiteConfig
        from qcompletion.procedures.identities import identity_checks

        suite = SuiteConfig(random_elements=4, lemma_max_p=1, completion_max_n=0)
        first = [(c.name, c.n, c.m, c.run()) for c in identity_checks(2, suite, seed=9)]
        second = [(c.name, c.n, c.m, c.run()) for c in identity_checks(2, suite, seed=9)]
        assert first == second

    def test_max_n_range(self):
        """max_n must lie in 0..50."""
        from qcompletion.core.config import SuiteConfig
        from qcompletion.procedures.identities import identity_checks

        with pytest.raises(ValueError):
            identity_checks(51, SuiteConfig(), seed=0)

    def test_random_element_is_nonzero(self, shape_of):
        """Random elements live on the strings of the shape."""
        import numpy as np

        from qcompletion.procedures.identities import random_element

        shape = shape_of("T(2)")
        rng = np.random.default_rng(3)
        for _ in range(10):
            x = random_element(rng, shape)
            assert not x.is_zero
            assert {s.string for s in x.slots()} <= set(shape.strings())


class TestQIdentityProcedureExecute:
    """Tests for QIdentityProcedure.execute()."""

    def test_suite_passes(self, run_procedure):
        """A small suite passes every identity."""
        capture = run_procedure(_small_suite())

        assert capture.results
        assert capture.all_passed, capture.failing("Identity")
        assert capture.progress[-1] == 100

    def test_rows_have_columns(self, run_procedure):
        """Rows carry every data column."""
        from qcompletion.procedures.identities import QIdentityProcedure

        capture = run_procedure(_small_suite())
        for row in capture.results:
            assert list(row) == QIdentityProcedure.DATA_COLUMNS

    def test_corrupt_identity_fails(self, run_procedure):
        """Negating q_int_order makes exactly those rows fail."""
        proc = _small_suite(corrupt="q_int_order")
        capture = run_procedure(proc)

        assert not capture.all_passed
        assert set(capture.failing("Identity")) == {"q_int_order"}
        assert proc.failures

    def test_unknown_corrupt_rejected(self):
        """Only known identities can be negated."""
        proc = _small_suite(corrupt="no_such_identity")
        proc.should_stop = lambda: False

        with pytest.raises(ValueError):
            proc.startup()

    def test_respects_should_stop(self, event_capture):
        """Execute stops when should_stop returns True."""
        proc = _small_suite()
        proc.emit = event_capture.emit
        proc.should_stop = lambda: True

        proc.startup()
        proc.execute()

        assert len(event_capture.results) == 0
        proc.shutdown()

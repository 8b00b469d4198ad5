"""Tests for DecompositionSweepProcedure."""

from __future__ import annotations


def _small_sweep(shape: str = "M(1)+T(1)+M(-3)", count: int = 2):
    from qcompletion.procedures.decomposition import DecompositionSweepProcedure

    proc = DecompositionSweepProcedure()
    proc.shape = shape
    proc.twist_count = count
    proc.seed = 13
    proc.window = 8
    return proc


class TestDecompositionSweepProcedureParameters:
    """Tests for DecompositionSweepProcedure parameters."""

    def test_parameters_defined(self):
        """All sweep parameters are defined."""
        from qcompletion.procedures.decomposition import DecompositionSweepProcedure

        proc = DecompositionSweepProcedure()

        assert hasattr(proc, "shape")
        assert hasattr(proc, "twist_count")
        assert hasattr(proc, "seed")
        assert hasattr(proc, "window")

    def test_data_columns(self):
        """DATA_COLUMNS is correctly defined."""
        from qcompletion.procedures.decomposition import DecompositionSweepProcedure

        assert DecompositionSweepProcedure.DATA_COLUMNS == [
            "Twist",
            "Certificate",
            "Parameters",
            "Unique_Completion",
            "Passed",
        ]

    def test_expected_parameters(self):
        """Parameters are read off the base shape, sorted."""
        from qcompletion.procedures.decomposition import expected_parameters

        assert expected_parameters("T(2)+M(1)+M(-3)+T(0)") == ([-3, 1], [0, 2])


class TestDecompositionSweepProcedureExecute:
    """Tests for DecompositionSweepProcedure.execute()."""

    def test_sweep_passes(self, run_procedure):
        """Random twists of the default shape all pass."""
        proc = _small_sweep()
        capture = run_procedure(proc)

        assert len(capture.results) == 2
        assert capture.all_passed, capture.results
        assert [row["Twist"] for row in capture.results] == [0, 1]
        assert capture.progress[-1] == 100

    def test_shape_without_verma_pair(self, run_procedure):
        """Shapes without an M(n), M(-n-2) pair skip the redecomposition."""
        capture = run_procedure(_small_sweep("M(0)+T(0)", count=1))

        assert capture.all_passed
        assert capture.results[0]["Unique_Completion"] is True

    def test_respects_should_stop(self, event_capture):
        """Execute stops when should_stop returns True."""
        proc = _small_sweep()
        proc.emit = event_capture.emit
        proc.should_stop = lambda: True

        proc.startup()
        proc.execute()

        assert len(event_capture.results) == 0

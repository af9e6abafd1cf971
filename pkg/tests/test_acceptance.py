"""Exit criteria for the package, one test per criterion.

Each test records a PASS/FAIL line that is printed in the terminal summary.
"""

import contextlib
import itertools
import subprocess
import sys
import time

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from pagerank_steps.graph import MatrixMarketError, build_graph, generate_fixture, read_matrix_market
from pagerank_steps.harness import SweepConfig, sweep
from pagerank_steps.oracle import solve_exact
from pagerank_steps.pagerank import ConvergenceParams, iterate_once, l1_delta, pagerank, uniform_ranks
from pagerank_steps.schedule import estimate_iterations, make_schedule, round_half_away, run_scheduled

from conftest import ACCEPTANCE_LINES, random_graph

pytestmark = pytest.mark.acceptance


@contextlib.contextmanager
def criterion(number: int, title: str):
    start = time.perf_counter()
    try:
        yield
    except BaseException as exc:
        ACCEPTANCE_LINES.append(f"FAIL  {number}. {title} ({type(exc).__name__})")
        raise
    ACCEPTANCE_LINES.append(f"PASS  {number}. {title} [{time.perf_counter() - start:.2f}s]")


def test_1_estimate_regression():
    with criterion(1, "closed-form iteration estimates 85/269/48/128/43"):
        start = time.perf_counter()
        cases = [(1e-6, 0.85, 85), (1e-6, 0.95, 269), (1e-6, 0.75, 48), (1e-9, 0.85, 128), (1e-3, 0.85, 43)]
        for tol, alpha, shown in cases:
            assert round_half_away(estimate_iterations(tol, alpha)) == shown, (tol, alpha)
        assert time.perf_counter() - start < 1.0


def test_2_oracle_equivalence():
    with criterion(2, "power iteration at tol 1e-10 within 1e-8 L1 of dense solve, 24 graphs x 4 alphas"):
        start = time.perf_counter()
        params = ConvergenceParams(1e-10, 10_000)
        worst = 0.0
        for seed in range(24):
            n = 2 + (seed * 7) % 49
            g = random_graph(1000 + seed, n, mean_degree=1 + seed % 4, dangling_fraction=0.1 * (seed % 4))
            for alpha in (0.1, 0.5, 0.85, 0.95):
                out = pagerank(g, alpha, params)
                assert out.converged
                err = l1_delta(out.ranks, solve_exact(g, alpha))
                worst = max(worst, err)
                assert err <= 1e-8, (seed, n, alpha, err)
        assert time.perf_counter() - start < 10.0


def _check_mass_along_run(graph, alpha, tolerance=1e-5, max_iter=500):
    r = uniform_ranks(graph.vertex_count)
    for _ in range(max_iter):
        new = iterate_once(graph, r, alpha)
        assert abs(new.sum() - 1.0) <= 1e-9
        done = l1_delta(new, r) < tolerance
        r = new
        if done:
            return


@settings(max_examples=12, deadline=None)
@given(n=st.sampled_from([1, 2, 10, 1_000, 30_000, 100_000]), seed=st.integers(0, 2**32 - 1),
       alpha=st.sampled_from([0.1, 0.5, 0.85, 0.95]), dangling=st.floats(0.0, 0.9))
def _mass_property(n, seed, alpha, dangling):
    _check_mass_along_run(random_graph(seed, n, dangling_fraction=dangling), alpha)


def test_3_mass_conservation():
    with criterion(3, "every iterate sums to 1 within 1e-9, graphs up to n=1e5"):
        _mass_property()
        _check_mass_along_run(random_graph(7, 100_000), 0.85)
        for kind in ("preferential", "cycle", "chain"):
            g = build_graph(generate_fixture(kind, 1000, 42))
            for k, a0 in itertools.product(range(5), (0.1, 0.5, 0.8)):
                r = uniform_ranks(1000)
                for alpha in make_schedule(k, a0, 0.85).phases:
                    for _ in range(500):
                        new = iterate_once(g, r, alpha)
                        assert abs(new.sum() - 1.0) <= 1e-9
                        done = l1_delta(new, r) < 1e-5
                        r = new
                        if done:
                            break


def test_4_paper_direction():
    with criterion(4, "stepped totals >= fixed total on pa/cycle/chain n=1000 fixtures"):
        start = time.perf_counter()
        for kind, seed in (("preferential", 42), ("cycle", 0), ("chain", 0)):
            g = build_graph(generate_fixture(kind, 1000, seed))
            rows = sweep(g, SweepConfig(graph_name=kind, alpha_final=0.85, tolerance=1e-5))
            assert len(rows) == 33
            base = rows[0]
            assert base.steps == 0 and base.converged
            for row in rows[1:]:
                assert row.converged
                assert row.total_iterations >= base.total_iterations, (kind, row)
        assert time.perf_counter() - start < 30.0


def test_5_schedule_geometry():
    with criterion(5, "k+1 evenly spaced phases ending at 0.85; 0-step run bit-identical"):
        for k in range(1, 5):
            for i in range(1, 9):
                a0 = i / 10
                phases = make_schedule(k, a0, 0.85).phases
                assert len(phases) == k + 1
                assert phases[-1] == 0.85 and phases[0] == a0
                gap = (0.85 - a0) / k
                for j, p in enumerate(phases):
                    assert abs(p - (a0 + j * gap)) <= 1e-12
                assert np.ptp(np.diff(phases)) <= 1e-12
        params = ConvergenceParams(1e-5)
        for kind in ("preferential", "chain"):
            g = build_graph(generate_fixture(kind, 1000, 42))
            stepped = run_scheduled(g, make_schedule(0, None, 0.85), params)
            fixed = pagerank(g, 0.85, params)
            assert stepped.total_iterations == fixed.iterations
            assert stepped.final_ranks.tobytes() == fixed.ranks.tobytes()


def test_6_determinism(tmp_path):
    with criterion(6, "two sweep --csv --svg invocations give byte-identical files"):
        outputs = []
        for i in range(2):
            csv_path, svg_path = tmp_path / f"{i}.csv", tmp_path / f"{i}.svg"
            subprocess.run([sys.executable, "-m", "pagerank_steps", "sweep", "--fixture", "pa,1000,42",
                            "--csv", str(csv_path), "--svg", str(svg_path)], check=True)
            outputs.append((csv_path.read_bytes(), svg_path.read_bytes()))
        assert outputs[0] == outputs[1]
        assert outputs[0][0].count(b"\n") == 34


def test_7_parser_conformance(data_dir):
    with criterion(7, "bundled .mtx fixtures parse or fail as specified"):
        assert read_matrix_market(data_dir / "pattern_general.mtx").pairs() == [
            (0, 1), (0, 2), (1, 2), (2, 0), (2, 3)]
        assert read_matrix_market(data_dir / "pattern_symmetric.mtx").pairs() == [
            (0, 1), (0, 2), (1, 0), (1, 2), (2, 0), (2, 1), (2, 2)]
        assert read_matrix_market(data_dir / "real_general.mtx").pairs() == [(0, 1), (1, 2), (2, 0)]
        with pytest.raises(MatrixMarketError, match="unsupported format: array") as info:
            read_matrix_market(data_dir / "malformed_banner.mtx")
        assert info.value.line == 1
        with pytest.raises(MatrixMarketError, match="row index 4 out of bounds") as info:
            read_matrix_market(data_dir / "out_of_range.mtx")
        assert info.value.line == 4

"""Acceptance gate.

One test per shipped guarantee, each delegating to the package's own check
suite (gandyhyland check-all runs the same code). Every test prints a
PASS/FAIL line with the measured time and asserts both the property and
its time budget; run with -s to see the lines for passing tests too.
"""

from __future__ import annotations

from gandyhyland.cli.checks import (
    CheckResult,
    check_cross_coherence,
    check_fan_soundness,
    check_foundation_laws,
    check_gh_fixed_point,
    check_golden_values,
    check_herbrand_replay,
    check_mu_round_trips,
    check_scf,
)


def _gate(result: CheckResult, budget: float) -> None:
    mark = "PASS" if result.passed else "FAIL"
    print(f"{mark} {result.name} ({result.seconds:.3f}s, budget {budget:.0f}s): {result.detail}")
    assert result.passed, f"{result.name}: {result.detail}"
    assert result.seconds < budget, (
        f"{result.name} took {result.seconds:.2f}s, budget {budget:.0f}s"
    )


def test_golden_values_match_the_hand_computation():
    _gate(check_golden_values(), budget=1.0)


def test_fixed_point_equation_and_depth_invariance_on_the_grid():
    _gate(check_gh_fixed_point(), budget=10.0)


def test_covering_bound_holds_on_every_small_tree():
    _gate(check_scf(), budget=30.0)


def test_uniform_modulus_is_sound_and_minimal():
    _gate(check_fan_soundness(), budget=5.0)


def test_least_zero_round_trips_and_starves_honestly():
    _gate(check_mu_round_trips(), budget=5.0)


def test_traces_replay_and_tampering_is_detected():
    _gate(check_herbrand_replay(), budget=10.0)


def test_modulus_routes_cohere_and_certificates_dominate():
    _gate(check_cross_coherence(), budget=10.0)


def test_foundation_laws_hold_exhaustively():
    _gate(check_foundation_laws(), budget=5.0)

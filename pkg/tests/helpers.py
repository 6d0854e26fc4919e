"""Shared random-state builders and matchers for the test suite."""

import math

import numpy as np

from pathent.factorize import TargetSpec, _wrap_angle
from pathent.fock import FourModeState, TwoModeState, _basis2, dim2, dim4


def random_two_mode_state(rng, cutoff):
    v = rng.standard_normal(dim2(cutoff)) + 1j * rng.standard_normal(dim2(cutoff))
    return TwoModeState(cutoff, v / np.linalg.norm(v))


def random_four_mode_state(rng, cutoff):
    v = rng.standard_normal(dim4(cutoff)) + 1j * rng.standard_normal(dim4(cutoff))
    return FourModeState(cutoff, v / np.linalg.norm(v))


def random_eigenstate(rng, total):
    """Normalized state with every populated ket at the given total."""
    amps = np.zeros(dim2(total), dtype=complex)
    _, _, table = _basis2(total)
    idx = [table[na, total - na] for na in range(total + 1)]
    v = rng.standard_normal(len(idx)) + 1j * rng.standard_normal(len(idx))
    amps[idx] = v / np.linalg.norm(v)
    return TwoModeState(total, amps)


def random_target(rng, n):
    v = rng.standard_normal(n + 1) + 1j * rng.standard_normal(n + 1)
    return TargetSpec(n, v)


def angle_pair_distance(a, b):
    return abs(a[0] - b[0]) + abs(_wrap_angle(a[1] - b[1]))


def assert_angle_multisets_close(got, expected, tol=1e-7):
    """Greedy nearest-pair matching of (theta, phi) multisets."""
    assert len(got) == len(expected)
    remaining = list(expected)
    worst = 0.0
    for pair in got:
        dists = [angle_pair_distance(pair, r) for r in remaining]
        i = int(np.argmin(dists))
        worst = max(worst, dists[i])
        remaining.pop(i)
    assert worst < tol, f"angle multisets differ by {worst}"


def rel_err(value, reference):
    return abs(value - reference) / abs(reference)


TAU = 2.0 * math.pi

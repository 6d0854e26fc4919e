"""Exact Fock-space algebra for two- and four-mode photonic states.

Amplitudes are stored densely over the simplex of occupation tuples with
total photon number <= cutoff, in a fixed enumeration order shared by all
operations, so states with equal cutoffs can be compared entry by entry.
Everything is complex double precision and every operation is pure: inputs
are never mutated.

Beam-splitter convention: a mixing angle ``kappa`` generates
``exp(kappa (x† y - x y†))`` on the mode pair (x, y), whose single-photon
block is ``[[cos k, sin k], [-sin k, cos k]]`` in the basis (|1,0>, |0,1>).
A photon entering the second mode transfers to the first with probability
sin^2(kappa), the transmittance.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
import scipy.linalg

# The factored beam-splitter product divides by cos(kappa); below this the
# splitter is taken to be the exact mode swap instead.
_SWAP_EPS = 1e-12

# Beyond this mixing angle, |tan(kappa)| > 1 inflates intermediate series
# terms; the rotation is then applied as two half-angle rotations.
_HALF_ANGLE_LIMIT = math.pi / 4 + 1e-9


class CutoffOverflowError(ValueError):
    """A ladder operation would push amplitude past the stored cutoff."""


# ---------------------------------------------------------------------------
# basis bookkeeping


@lru_cache(maxsize=None)
def _basis2(cutoff: int):
    """Occupation arrays (n_a, n_b) and index lookup table for two modes."""
    pairs = [(a, b) for a in range(cutoff + 1) for b in range(cutoff + 1 - a)]
    na = np.array([p[0] for p in pairs], dtype=np.intp)
    nb = np.array([p[1] for p in pairs], dtype=np.intp)
    table = np.full((cutoff + 1, cutoff + 1), -1, dtype=np.intp)
    table[na, nb] = np.arange(len(pairs))
    return na, nb, table


@lru_cache(maxsize=None)
def _basis4(cutoff: int):
    """Occupation arrays and index lookup table for four modes."""
    quads = [
        (a, b, c, d)
        for a in range(cutoff + 1)
        for b in range(cutoff + 1 - a)
        for c in range(cutoff + 1 - a - b)
        for d in range(cutoff + 1 - a - b - c)
    ]
    occ = np.array(quads, dtype=np.intp).reshape(len(quads), 4)
    table = np.full((cutoff + 1,) * 4, -1, dtype=np.intp)
    table[occ[:, 0], occ[:, 1], occ[:, 2], occ[:, 3]] = np.arange(len(quads))
    return occ[:, 0], occ[:, 1], occ[:, 2], occ[:, 3], table


def dim2(cutoff: int) -> int:
    return (cutoff + 1) * (cutoff + 2) // 2


def dim4(cutoff: int) -> int:
    return math.comb(cutoff + 4, 4)


# ---------------------------------------------------------------------------
# state containers


@dataclass(frozen=True, eq=False)
class TwoModeState:
    """Two-mode Fock state: one complex amplitude per ket |n_a, n_b>.

    States may be unnormalized; conditional states carry their success
    probability in the squared norm.
    """

    cutoff: int
    amps: np.ndarray

    def __post_init__(self):
        if self.cutoff < 0:
            raise ValueError("cutoff must be non-negative")
        amps = np.asarray(self.amps, dtype=complex)
        if amps.shape != (dim2(self.cutoff),):
            raise ValueError(
                f"expected {dim2(self.cutoff)} amplitudes for cutoff "
                f"{self.cutoff}, got shape {amps.shape}"
            )
        object.__setattr__(self, "amps", amps)

    def norm_sq(self) -> float:
        return float(np.vdot(self.amps, self.amps).real)

    def norm(self) -> float:
        return math.sqrt(self.norm_sq())

    def normalized(self) -> "TwoModeState":
        n = self.norm()
        if n == 0.0:
            raise ValueError("cannot normalize the zero state")
        return TwoModeState(self.cutoff, self.amps / n)

    def amplitude(self, na: int, nb: int) -> complex:
        _, _, table = _basis2(self.cutoff)
        idx = table[na, nb]
        if idx < 0:
            raise ValueError(f"ket ({na}, {nb}) exceeds cutoff {self.cutoff}")
        return complex(self.amps[idx])

    def nonzero_amplitudes(self, tol: float = 1e-12):
        """Sorted list of (n_a, n_b, amplitude) with |amplitude| > tol."""
        na, nb, _ = _basis2(self.cutoff)
        out = []
        for i in np.flatnonzero(np.abs(self.amps) > tol):
            out.append((int(na[i]), int(nb[i]), complex(self.amps[i])))
        return out

    def __add__(self, other: "TwoModeState") -> "TwoModeState":
        if not isinstance(other, TwoModeState):
            return NotImplemented
        if other.cutoff != self.cutoff:
            raise ValueError("cutoff mismatch")
        return TwoModeState(self.cutoff, self.amps + other.amps)

    def __sub__(self, other: "TwoModeState") -> "TwoModeState":
        if not isinstance(other, TwoModeState):
            return NotImplemented
        if other.cutoff != self.cutoff:
            raise ValueError("cutoff mismatch")
        return TwoModeState(self.cutoff, self.amps - other.amps)

    def __mul__(self, scalar) -> "TwoModeState":
        return TwoModeState(self.cutoff, self.amps * complex(scalar))

    __rmul__ = __mul__

    def __truediv__(self, scalar) -> "TwoModeState":
        return TwoModeState(self.cutoff, self.amps / complex(scalar))


@dataclass(frozen=True, eq=False)
class FourModeState:
    """Joint Fock state of signal modes (a, b) and ancilla modes (c, d)."""

    cutoff: int
    amps: np.ndarray

    def __post_init__(self):
        if self.cutoff < 0:
            raise ValueError("cutoff must be non-negative")
        amps = np.asarray(self.amps, dtype=complex)
        if amps.shape != (dim4(self.cutoff),):
            raise ValueError(
                f"expected {dim4(self.cutoff)} amplitudes for cutoff "
                f"{self.cutoff}, got shape {amps.shape}"
            )
        object.__setattr__(self, "amps", amps)

    def norm_sq(self) -> float:
        return float(np.vdot(self.amps, self.amps).real)

    def norm(self) -> float:
        return math.sqrt(self.norm_sq())

    def amplitude(self, na: int, nb: int, nc: int, nd: int) -> complex:
        *_, table = _basis4(self.cutoff)
        idx = table[na, nb, nc, nd]
        if idx < 0:
            raise ValueError(
                f"ket ({na}, {nb}, {nc}, {nd}) exceeds cutoff {self.cutoff}"
            )
        return complex(self.amps[idx])


@dataclass(frozen=True, eq=False)
class TwoModeDensity:
    """Density matrix over the two-mode Fock basis."""

    cutoff: int
    mat: np.ndarray

    def __post_init__(self):
        mat = np.asarray(self.mat, dtype=complex)
        d = dim2(self.cutoff)
        if mat.shape != (d, d):
            raise ValueError(f"expected {d}x{d} matrix, got {mat.shape}")
        object.__setattr__(self, "mat", mat)

    @classmethod
    def from_state(cls, s: TwoModeState) -> "TwoModeDensity":
        return cls(s.cutoff, np.outer(s.amps, s.amps.conj()))

    def trace(self) -> float:
        return float(np.trace(self.mat).real)

    def sector(self, n: int) -> np.ndarray:
        """Matrix restricted to the total-photon-number-n subspace."""
        na, nb, _ = _basis2(self.cutoff)
        mask = (na + nb) == n
        out = np.zeros_like(self.mat)
        out[np.ix_(mask, mask)] = self.mat[np.ix_(mask, mask)]
        return out

    def sector_weight(self, n: int) -> float:
        na, nb, _ = _basis2(self.cutoff)
        mask = (na + nb) == n
        return float(np.trace(self.mat[np.ix_(mask, mask)]).real)

    def validate(self, herm_tol: float = 1e-12, eig_floor: float = -1e-9,
                 trace_tol: float = 1e-12) -> None:
        """Raise ValueError unless Hermitian, trace in [0, 1], and PSD."""
        if np.abs(self.mat - self.mat.conj().T).max() > herm_tol:
            raise ValueError("density matrix is not Hermitian")
        tr = self.trace()
        if not (-trace_tol <= tr <= 1.0 + trace_tol):
            raise ValueError(f"trace {tr} outside [0, 1]")
        eigs = np.linalg.eigvalsh(self.mat)
        if eigs.min() < eig_floor:
            raise ValueError(f"negative eigenvalue {eigs.min()}")


# ---------------------------------------------------------------------------
# constructors


def vacuum(cutoff: int) -> TwoModeState:
    """The two-mode vacuum |0, 0>."""
    amps = np.zeros(dim2(cutoff), dtype=complex)
    amps[_basis2(cutoff)[2][0, 0]] = 1.0
    return TwoModeState(cutoff, amps)


def zero_state(cutoff: int) -> TwoModeState:
    return TwoModeState(cutoff, np.zeros(dim2(cutoff), dtype=complex))


def basis_state(cutoff: int, na: int, nb: int) -> TwoModeState:
    if na < 0 or nb < 0 or na + nb > cutoff:
        raise ValueError(f"ket ({na}, {nb}) exceeds cutoff {cutoff}")
    amps = np.zeros(dim2(cutoff), dtype=complex)
    amps[_basis2(cutoff)[2][na, nb]] = 1.0
    return TwoModeState(cutoff, amps)


def noon_state(n: int, cutoff: int | None = None) -> TwoModeState:
    """The maximally path-entangled state (|n,0> + |0,n>)/sqrt(2)."""
    if n < 1:
        raise ValueError("n must be >= 1")
    cutoff = n if cutoff is None else cutoff
    inv = 1.0 / math.sqrt(2.0)
    s = basis_state(cutoff, n, 0) * inv + basis_state(cutoff, 0, n) * inv
    return s


def basis_state4(cutoff: int, na: int, nb: int, nc: int, nd: int) -> FourModeState:
    if min(na, nb, nc, nd) < 0 or na + nb + nc + nd > cutoff:
        raise ValueError(f"ket ({na}, {nb}, {nc}, {nd}) exceeds cutoff {cutoff}")
    amps = np.zeros(dim4(cutoff), dtype=complex)
    amps[_basis4(cutoff)[4][na, nb, nc, nd]] = 1.0
    return FourModeState(cutoff, amps)


def tensor(ab: TwoModeState, cd: TwoModeState,
           cutoff: int | None = None) -> FourModeState:
    """Embed ab (x) cd into a four-mode state."""
    if cutoff is None:
        cutoff = ab.cutoff + cd.cutoff
    na1, nb1, _ = _basis2(ab.cutoff)
    na2, nb2, _ = _basis2(cd.cutoff)
    *_, table4 = _basis4(cutoff)
    amps = np.zeros(dim4(cutoff), dtype=complex)
    for j in np.flatnonzero(cd.amps):
        room = cutoff - int(na2[j] + nb2[j])
        ok = (na1 + nb1) <= room
        if np.any(ab.amps[~ok] != 0):
            raise CutoffOverflowError("tensor product exceeds cutoff")
        if room < 0:
            continue
        idx = table4[na1[ok], nb1[ok], na2[j], nb2[j]]
        amps[idx] += ab.amps[ok] * cd.amps[j]
    return FourModeState(cutoff, amps)


def with_cutoff(s: TwoModeState, cutoff: int) -> TwoModeState:
    """Re-embed a state at a different cutoff (lossless, or raise)."""
    if cutoff == s.cutoff:
        return s
    na, nb, _ = _basis2(s.cutoff)
    keep = (na + nb) <= cutoff
    if np.any(s.amps[~keep] != 0):
        raise CutoffOverflowError("state does not fit in the requested cutoff")
    _, _, table = _basis2(cutoff)
    amps = np.zeros(dim2(cutoff), dtype=complex)
    amps[table[na[keep], nb[keep]]] = s.amps[keep]
    return TwoModeState(cutoff, amps)


# ---------------------------------------------------------------------------
# ladder operators and friends


def apply_creation(s: TwoModeState, mode: str) -> TwoModeState:
    """Apply the creation operator of the chosen mode ("a" or "b")."""
    na, nb, table = _basis2(s.cutoff)
    top = (na + nb) == s.cutoff
    if np.any(s.amps[top] != 0):
        raise CutoffOverflowError(
            f"creation on mode {mode} would exceed cutoff {s.cutoff}"
        )
    keep = ~top
    out = np.zeros_like(s.amps)
    if mode == "a":
        out[table[na[keep] + 1, nb[keep]]] = s.amps[keep] * np.sqrt(na[keep] + 1.0)
    elif mode == "b":
        out[table[na[keep], nb[keep] + 1]] = s.amps[keep] * np.sqrt(nb[keep] + 1.0)
    else:
        raise ValueError(f"unknown mode {mode!r}")
    return TwoModeState(s.cutoff, out)


def apply_annihilation(s: TwoModeState, mode: str) -> TwoModeState:
    """Apply the annihilation operator of the chosen mode ("a" or "b")."""
    na, nb, table = _basis2(s.cutoff)
    out = np.zeros_like(s.amps)
    if mode == "a":
        keep = na >= 1
        out[table[na[keep] - 1, nb[keep]]] = s.amps[keep] * np.sqrt(na[keep].astype(float))
    elif mode == "b":
        keep = nb >= 1
        out[table[na[keep], nb[keep] - 1]] = s.amps[keep] * np.sqrt(nb[keep].astype(float))
    else:
        raise ValueError(f"unknown mode {mode!r}")
    return TwoModeState(s.cutoff, out)


def apply_linear_factor(s: TwoModeState, theta: float, phi: float) -> TwoModeState:
    """Apply the photon-adding factor cos(theta) a† - e^{i phi} sin(theta) b†."""
    ca = apply_creation(s, "a")
    cb = apply_creation(s, "b")
    coeff_b = -np.exp(1j * phi) * math.sin(theta)
    return TwoModeState(s.cutoff, math.cos(theta) * ca.amps + coeff_b * cb.amps)


def phase_shift(s: TwoModeState, phi: float, mode: str = "b") -> TwoModeState:
    """Apply the phase shifter exp(i phi n_mode)."""
    na, nb, _ = _basis2(s.cutoff)
    n = na if mode == "a" else nb
    if mode not in ("a", "b"):
        raise ValueError(f"unknown mode {mode!r}")
    return TwoModeState(s.cutoff, s.amps * np.exp(1j * phi * n))


def inner_product(x: TwoModeState, y: TwoModeState) -> complex:
    """<x|y> with conjugation on x."""
    if x.cutoff != y.cutoff:
        raise ValueError("cutoff mismatch")
    return complex(np.vdot(x.amps, y.amps))


def overlap_fidelity(x: TwoModeState, y: TwoModeState) -> float:
    """|<x|y>| / (|x| |y|): phase-insensitive state agreement in [0, 1]."""
    nx, ny = x.norm(), y.norm()
    if nx == 0.0 or ny == 0.0:
        raise ValueError("fidelity of a zero state is undefined")
    return abs(inner_product(x, y)) / (nx * ny)


def is_photon_number_eigenstate(s: TwoModeState) -> int | None:
    """Total photon number if sharp, else None.

    A ket counts as populated when its amplitude exceeds 1e-12 of the
    largest amplitude.
    """
    mags = np.abs(s.amps)
    top = mags.max()
    if top == 0.0:
        raise ValueError("zero state has no photon-number eigenvalue")
    na, nb, _ = _basis2(s.cutoff)
    totals = np.unique((na + nb)[mags > 1e-12 * top])
    return int(totals[0]) if totals.size == 1 else None


# ---------------------------------------------------------------------------
# beam splitters

# A pair-hopping step x† y maps |.., n_x, .., n_y, ..> to
# sqrt((n_x + 1) n_y) |.., n_x + 1, .., n_y - 1, ..> and conserves the total
# photon number, so repeated application terminates within cutoff steps.


def _hop2(amps: np.ndarray, cutoff: int, create: str, lower: str) -> np.ndarray:
    na, nb, table = _basis2(cutoff)
    out = np.zeros_like(amps)
    if (create, lower) == ("a", "b"):
        keep = nb >= 1
        w = np.sqrt((na[keep] + 1.0) * nb[keep])
        out[table[na[keep] + 1, nb[keep] - 1]] = amps[keep] * w
    elif (create, lower) == ("b", "a"):
        keep = na >= 1
        w = np.sqrt((nb[keep] + 1.0) * na[keep])
        out[table[na[keep] - 1, nb[keep] + 1]] = amps[keep] * w
    else:
        raise ValueError(f"bad mode pair {(create, lower)}")
    return out


def _exp_hop2(amps: np.ndarray, cutoff: int, coef: complex,
              create: str, lower: str) -> np.ndarray:
    result = amps.copy()
    term = amps
    for m in range(1, cutoff + 1):
        term = (coef / m) * _hop2(term, cutoff, create, lower)
        if not term.any():
            break
        result = result + term
    return result


def _bs2_core(amps: np.ndarray, cutoff: int, kappa: float) -> np.ndarray:
    # exp(kappa (a†b - a b†)) = e^{-K a b†} cos(kappa)^{n_a - n_b} e^{K a†b},
    # K = tan(kappa); each exponential is an exactly terminating series.
    ck, K = math.cos(kappa), math.tan(kappa)
    na, nb, _ = _basis2(cutoff)
    v = _exp_hop2(amps, cutoff, K, "a", "b")
    v = v * ck ** (na - nb)
    return _exp_hop2(v, cutoff, -K, "b", "a")


def _swap2(amps: np.ndarray, cutoff: int, sgn: int) -> np.ndarray:
    # kappa -> +-pi/2 limit: a† -> -s b†, b† -> s a†  (s = sign of sin kappa)
    na, nb, table = _basis2(cutoff)
    out = np.zeros_like(amps)
    signs = np.where(na % 2 == 1, -1.0, 1.0)
    if sgn < 0:
        signs = signs * np.where((na + nb) % 2 == 1, -1.0, 1.0)
    out[table[nb, na]] = amps * signs
    return out


def beam_splitter(s: TwoModeState, kappa: float) -> TwoModeState:
    """Mix the two modes: |1,0> -> cos(kappa)|1,0> - sin(kappa)|0,1>."""
    ck = math.cos(kappa)
    if abs(ck) < _SWAP_EPS:
        sgn = 1 if math.sin(kappa) > 0 else -1
        return TwoModeState(s.cutoff, _swap2(s.amps, s.cutoff, sgn))
    halvings = 0
    while abs(kappa) / 2 ** halvings > _HALF_ANGLE_LIMIT:
        halvings += 1
    amps = s.amps
    step = kappa / 2 ** halvings
    for _ in range(2 ** halvings):
        amps = _bs2_core(amps, s.cutoff, step)
    return TwoModeState(s.cutoff, amps)


def _hop4(amps: np.ndarray, cutoff: int, create: str, lower: str) -> np.ndarray:
    na, nb, nc, nd, table = _basis4(cutoff)
    occ = {"a": na, "b": nb, "c": nc, "d": nd}
    n_cr, n_lo = occ[create], occ[lower]
    keep = n_lo >= 1
    w = np.sqrt((n_cr[keep] + 1.0) * n_lo[keep])
    new = {m: occ[m][keep].copy() for m in "abcd"}
    new[create] = new[create] + 1
    new[lower] = new[lower] - 1
    out = np.zeros_like(amps)
    out[table[new["a"], new["b"], new["c"], new["d"]]] = amps[keep] * w
    return out


def _exp_hop4(amps: np.ndarray, cutoff: int, coef: complex,
              create: str, lower: str) -> np.ndarray:
    result = amps.copy()
    term = amps
    for m in range(1, cutoff + 1):
        term = (coef / m) * _hop4(term, cutoff, create, lower)
        if not term.any():
            break
        result = result + term
    return result


def _bs_pair_core(amps: np.ndarray, cutoff: int, kappa: float) -> np.ndarray:
    # Factored product form of exp(kappa(a†c - ac†)) exp(kappa(b†d - bd†)):
    #   e^{-K a c†} e^{-K b d†} cos(kappa)^{n_ab - n_cd} e^{K a†c} e^{K b†d}
    ck, K = math.cos(kappa), math.tan(kappa)
    na, nb, nc, nd, _ = _basis4(cutoff)
    v = _exp_hop4(amps, cutoff, K, "b", "d")
    v = _exp_hop4(v, cutoff, K, "a", "c")
    v = v * ck ** ((na + nb) - (nc + nd))
    v = _exp_hop4(v, cutoff, -K, "d", "b")
    return _exp_hop4(v, cutoff, -K, "c", "a")


def _swap4(amps: np.ndarray, cutoff: int, sgn: int) -> np.ndarray:
    # kappa -> +-pi/2 limit: a† -> -s c†, c† -> s a†, likewise (b, d).
    na, nb, nc, nd, table = _basis4(cutoff)
    out = np.zeros_like(amps)
    signs = np.where((na + nb) % 2 == 1, -1.0, 1.0)
    if sgn < 0:
        total = na + nb + nc + nd
        signs = signs * np.where(total % 2 == 1, -1.0, 1.0)
    out[table[nc, nd, na, nb]] = amps * signs
    return out


def beam_splitter_pair_exact(s: FourModeState, kappa: float) -> FourModeState:
    """Identical beam splitters on (a, c) and (b, d), via the factored form.

    Photon number is conserved, the terminating series never truncate, and
    the kappa = pi/2 singularity of the factored form is handled as the
    exact mode swap it converges to.
    """
    ck = math.cos(kappa)
    if abs(ck) < _SWAP_EPS:
        sgn = 1 if math.sin(kappa) > 0 else -1
        return FourModeState(s.cutoff, _swap4(s.amps, s.cutoff, sgn))
    halvings = 0
    while abs(kappa) / 2 ** halvings > _HALF_ANGLE_LIMIT:
        halvings += 1
    amps = s.amps
    step = kappa / 2 ** halvings
    for _ in range(2 ** halvings):
        amps = _bs_pair_core(amps, s.cutoff, step)
    return FourModeState(s.cutoff, amps)


@lru_cache(maxsize=None)
def _pair_generator(cutoff: int) -> np.ndarray:
    """Dense matrix of a†c - ac† + b†d - bd† over the four-mode basis."""
    na, nb, nc, nd, table = _basis4(cutoff)
    d = dim4(cutoff)
    gen = np.zeros((d, d), dtype=complex)
    hops = [("a", "c"), ("c", "a"), ("b", "d"), ("d", "b")]
    signs = [1.0, -1.0, 1.0, -1.0]
    occ = {"a": na, "b": nb, "c": nc, "d": nd}
    for (create, lower), sign in zip(hops, signs):
        n_cr, n_lo = occ[create], occ[lower]
        keep = np.flatnonzero(n_lo >= 1)
        new = {m: occ[m][keep].copy() for m in "abcd"}
        new[create] = new[create] + 1
        new[lower] = new[lower] - 1
        rows = table[new["a"], new["b"], new["c"], new["d"]]
        w = sign * np.sqrt((n_cr[keep] + 1.0) * n_lo[keep])
        gen[rows, keep] += w
    return gen


@lru_cache(maxsize=None)
def _pair_unitary(cutoff: int, kappa: float) -> np.ndarray:
    return scipy.linalg.expm(kappa * _pair_generator(cutoff))


def beam_splitter_pair_oracle(s: FourModeState, kappa: float) -> FourModeState:
    """Brute-force route: dense matrix exponential of the pair generator."""
    return FourModeState(s.cutoff, _pair_unitary(s.cutoff, float(kappa)) @ s.amps)


# ---------------------------------------------------------------------------
# measurement and reduction of the ancilla modes


def project_outcome_cd(s: FourModeState, nc_out: int,
                       nd_out: int) -> tuple[TwoModeState, float]:
    """Project onto |nc_out, nd_out> in modes (c, d).

    Returns the unnormalized reduced two-mode state and the outcome
    probability (its squared norm).
    """
    na, nb, nc, nd, _ = _basis4(s.cutoff)
    rows = (nc == nc_out) & (nd == nd_out)
    _, _, table2 = _basis2(s.cutoff)
    amps = np.zeros(dim2(s.cutoff), dtype=complex)
    amps[table2[na[rows], nb[rows]]] = s.amps[rows]
    reduced = TwoModeState(s.cutoff, amps)
    return reduced, reduced.norm_sq()


def project_vacuum_cd(s: FourModeState) -> tuple[TwoModeState, float]:
    """Condition on zero photons in both ancilla modes."""
    return project_outcome_cd(s, 0, 0)


def trace_out_cd(s: FourModeState) -> TwoModeDensity:
    """Partial trace over modes (c, d); the trace equals |s|^2."""
    d = dim2(s.cutoff)
    rho = np.zeros((d, d), dtype=complex)
    for nc_out in range(s.cutoff + 1):
        for nd_out in range(s.cutoff + 1 - nc_out):
            piece, p = project_outcome_cd(s, nc_out, nd_out)
            if p > 0.0:
                rho += np.outer(piece.amps, piece.amps.conj())
    return TwoModeDensity(s.cutoff, rho)

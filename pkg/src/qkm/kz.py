"""Numeric parallel transport for the Knizhnik-Zamolodchikov system on
weight blocks of tensor powers of classical modules, braid monodromy, and
the comparison against the braiding built from the quantum R-matrix.

The connection is d F = (hbar / 2 pi i) sum_{i<j} Omega_ij d log(z_i - z_j) F
on configurations of k distinct points.  Transport matrices are integrated
with an adaptive Dormand-Prince 5(4) stepper whose step ceiling shrinks
with the distance to the nearest diagonal.  Monodromy is compared with the
sigma R representation only through conjugation-invariant data (traces of
braid words and generator eigenvalue multisets): the two representations
are isomorphic, not equal.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from itertools import product

import numpy as np

from .classical import CasimirEngine
from .qmodules import WeightModule, compare_characters
from .qpairing import DrinfeldPairing
from .rmatrix import BraidOperator, tensor_block_basis, total_offsets
from .scalars import evaluate_numeric


class DiagonalApproachError(RuntimeError):
    """The integration path came too close to a diagonal z_i = z_j."""


# counterclockwise half-turn for the exchange path; fixed so that the
# two-point monodromy matches sigma R at q = e^{hbar/2} (not its inverse)
EXCHANGE_ORIENTATION = +1


@dataclass
class KZSystem:
    """The KZ connection data on one total-weight block of V^(x k)."""

    k: int
    total_offset: tuple
    basis: tuple
    omegas: dict               # (i, j), i < j -> numpy matrix
    hbar: complex

    @property
    def dim(self) -> int:
        return len(self.basis)


def build_kz_system(V: WeightModule, k: int, total_offset, hbar,
                    engine: CasimirEngine | None = None) -> KZSystem:
    """Assemble the pairwise Casimir matrices on a block of V^(x k)."""
    if V.kind != "classical":
        raise ValueError("the KZ connection uses classical modules")
    engine = engine or CasimirEngine(V.cd, degree_cap=V.depth)
    total_offset = tuple(total_offset)
    basis = tuple(tensor_block_basis(V, k, total_offset))
    index = {tup: r for r, tup in enumerate(basis)}
    dim = len(basis)
    omegas = {}
    for i in range(k):
        for j in range(i + 1, k):
            mat = np.zeros((dim, dim), dtype=complex)
            for c, tup in enumerate(basis):
                mV, a = tup[i]
                mW, b = tup[j]
                for (tV, r_, tW, s_), val in engine.pair_action(V, V, mV, a, mW, b):
                    newtup = tup[:i] + ((tV, r_),) + tup[i + 1:j] \
                        + ((tW, s_),) + tup[j + 1:]
                    mat[index[newtup], c] += float(val)
            omegas[(i, j)] = mat
    return KZSystem(k=k, total_offset=total_offset, basis=basis,
                    omegas=omegas, hbar=complex(hbar))


def base_configuration(k: int):
    return np.array([complex(i + 1) for i in range(k)])


def exchange_segment(base, i: int):
    """Counterclockwise half-turn of points i and i+1 about their midpoint."""
    base = np.asarray(base, dtype=complex)
    mid = (base[i] + base[i + 1]) / 2
    off = base[i] - mid

    def seg(t: float):
        z = base.copy()
        phase = cmath.exp(EXCHANGE_ORIENTATION * 1j * math.pi * t)
        z[i] = mid + off * phase
        z[i + 1] = mid - off * phase
        zdot = np.zeros_like(base)
        vel = off * EXCHANGE_ORIENTATION * 1j * math.pi * phase
        zdot[i] = vel
        zdot[i + 1] = -vel
        return z, zdot

    return seg


def loop_segment(base, i: int, radius: float, turns: int = 1):
    """Point i travels a closed circle of the given radius; contractible as
    long as the circle encloses no other point."""
    base = np.asarray(base, dtype=complex)

    def seg(t: float):
        z = base.copy()
        phase = cmath.exp(2j * math.pi * turns * t)
        z[i] = base[i] + radius * (phase - 1)
        zdot = np.zeros_like(base)
        zdot[i] = radius * 2j * math.pi * turns * phase
        return z, zdot

    return seg


# Dormand-Prince 5(4) tableau
_DP_C = (0.0, 1 / 5, 3 / 10, 4 / 5, 8 / 9, 1.0, 1.0)
_DP_A = (
    (),
    (1 / 5,),
    (3 / 40, 9 / 40),
    (44 / 45, -56 / 15, 32 / 9),
    (19372 / 6561, -25360 / 2187, 64448 / 6561, -212 / 729),
    (9017 / 3168, -355 / 33, 46732 / 5247, 49 / 176, -5103 / 18656),
    (35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84),
)
_DP_B5 = (35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84, 0.0)
_DP_B4 = (5179 / 57600, 0.0, 7571 / 16695, 393 / 640, -92097 / 339200,
          187 / 2100, 1 / 40)


def _rhs(system: KZSystem, seg, t: float):
    z, zdot = seg(t)
    k = system.k
    dmin = min(abs(z[i] - z[j]) for i in range(k) for j in range(i + 1, k))
    scale = max(abs(x) for x in z) or 1.0
    if dmin < 1e-8 * scale:
        raise DiagonalApproachError(
            f"closest approach |z_i - z_j| = {dmin:.3e} at t = {t:.6f}")
    A = np.zeros((system.dim, system.dim), dtype=complex)
    coeff = system.hbar / (2j * math.pi)
    for (i, j), om in system.omegas.items():
        A = A + om * (coeff * (zdot[i] - zdot[j]) / (z[i] - z[j]))
    speed = max(abs(x) for x in zdot) or 1.0
    h_ceiling = 0.5 * dmin / speed
    return A, h_ceiling


def transport_segment(system: KZSystem, seg, Y, rtol: float):
    """Advance the fundamental solution along one smooth segment."""
    if system.hbar == 0:
        return Y
    t = 0.0
    A0, ceil0 = _rhs(system, seg, 0.0)
    h = min(0.05, ceil0, 1.0)
    while t < 1.0:
        h = min(h, 1.0 - t)
        ks = []
        ceiling = None
        for stage in range(7):
            ts = t + _DP_C[stage] * h
            Ys = Y
            for coef, kmat in zip(_DP_A[stage], ks):
                if coef:
                    Ys = Ys + (h * coef) * kmat
            A, ceil = _rhs(system, seg, ts)
            if stage == 0:
                ceiling = ceil
            ks.append(A @ Ys)
        Y5 = Y
        Y4 = Y
        for b5, b4, kmat in zip(_DP_B5, _DP_B4, ks):
            if b5:
                Y5 = Y5 + (h * b5) * kmat
            if b4:
                Y4 = Y4 + (h * b4) * kmat
        err = np.max(np.abs(Y5 - Y4))
        tol = rtol * max(1.0, float(np.max(np.abs(Y5))))
        if err <= tol:
            t += h
            Y = Y5
        factor = 0.9 * (tol / err) ** 0.2 if err > 0 else 5.0
        h = h * min(5.0, max(0.2, factor))
        h = min(h, ceiling if ceiling else h)
        if h <= 1e-14:
            raise DiagonalApproachError("step size underflow near a diagonal")
    return Y


def kz_transport(system: KZSystem, segments, rtol: float = 1e-9):
    """Transport matrix of the fundamental solution along a piecewise path."""
    Y = np.eye(system.dim, dtype=complex)
    for seg in segments:
        Y = transport_segment(system, seg, Y, rtol)
    return Y


def permutation_matrix(system: KZSystem, i: int):
    """The operator permuting tensor factors i and i+1 on the block basis."""
    index = {tup: r for r, tup in enumerate(system.basis)}
    P = np.zeros((system.dim, system.dim), dtype=complex)
    for c, tup in enumerate(system.basis):
        new = tup[:i] + (tup[i + 1], tup[i]) + tup[i + 2:]
        P[index[new], c] = 1.0
    return P


def braid_monodromy(system: KZSystem, i: int, rtol: float = 1e-9):
    """Monodromy of the braid generator b_i at the base point (1, ..., k):
    transport along the counterclockwise exchange of z_i and z_{i+1},
    composed with the permutation identification of the endpoint fiber."""
    base = base_configuration(system.k)
    T = kz_transport(system, [exchange_segment(base, i)], rtol)
    return permutation_matrix(system, i) @ T


def braid_words(num_generators: int, max_length: int):
    for length in range(1, max_length + 1):
        yield from product(range(num_generators), repeat=length)


@dataclass(frozen=True)
class BlockComparison:
    total_offset: tuple
    dim: int
    max_trace_deviation: float
    max_eigenvalue_deviation: float


@dataclass(frozen=True)
class MonodromyReport:
    strands: int
    hbar: complex
    word_length: int
    rtol: float
    blocks: tuple
    max_trace_deviation: float
    max_eigenvalue_deviation: float

    @property
    def max_deviation(self) -> float:
        return max(self.max_trace_deviation, self.max_eigenvalue_deviation)


def _eig_multiset_deviation(A, B) -> float:
    ea = sorted(np.linalg.eigvals(A), key=lambda z: (round(z.real, 6), round(z.imag, 6)))
    eb = sorted(np.linalg.eigvals(B), key=lambda z: (round(z.real, 6), round(z.imag, 6)))
    return max(abs(a - b) for a, b in zip(ea, eb)) if ea else 0.0


def drinfeld_kohno_compare(V_classical: WeightModule, V_quantum: WeightModule,
                           pairing: DrinfeldPairing, k: int, hbar,
                           word_length: int = 4, rtol: float = 1e-9,
                           totals=None, engine: CasimirEngine | None = None
                           ) -> MonodromyReport:
    """Conjugation-invariant comparison of the KZ monodromy with sigma R.

    Traces of all positive braid words up to the given length and the
    eigenvalue multisets of the generators are compared per total-weight
    block at q = e^{hbar/2}.
    """
    if not compare_characters(V_classical, V_quantum).equal:
        raise ValueError("classical and quantum modules must have equal "
                         "characters")
    hbar = complex(hbar)
    engine = engine or CasimirEngine(V_classical.cd, degree_cap=V_classical.depth)
    if totals is None:
        totals = [t for t in total_offsets(V_classical, k)]
    blocks = []
    worst_trace = 0.0
    worst_eig = 0.0
    ngen = k - 1
    for total in totals:
        system = build_kz_system(V_classical, k, total, hbar, engine)
        if system.dim == 0:
            continue
        kz_gens = [braid_monodromy(system, i, rtol) for i in range(ngen)]
        qr_gens = []
        for i in range(ngen):
            basis, mat = BraidOperator(V_quantum, k, i, pairing).block(total)
            num = np.array([[evaluate_numeric(x, hbar, pairing.D) for x in row]
                            for row in mat], dtype=complex)
            qr_gens.append(num)
        trace_dev = 0.0
        for word in braid_words(ngen, word_length):
            tk = np.eye(system.dim, dtype=complex)
            tq = np.eye(system.dim, dtype=complex)
            for g in word:
                tk = tk @ kz_gens[g]
                tq = tq @ qr_gens[g]
            trace_dev = max(trace_dev, abs(np.trace(tk) - np.trace(tq)))
        eig_dev = max(_eig_multiset_deviation(a, b)
                      for a, b in zip(kz_gens, qr_gens))
        blocks.append(BlockComparison(total, system.dim, trace_dev, eig_dev))
        worst_trace = max(worst_trace, trace_dev)
        worst_eig = max(worst_eig, eig_dev)
    return MonodromyReport(strands=k, hbar=hbar, word_length=word_length,
                           rtol=rtol, blocks=tuple(blocks),
                           max_trace_deviation=worst_trace,
                           max_eigenvalue_deviation=worst_eig)

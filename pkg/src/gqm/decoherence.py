"""Decoherence functionals, quantum measures, and the interference hierarchy.

A decoherence functional is stored as the Hermitian |G| x |G| matrix of its
values on singletons; set evaluation is biadditive.  Because the source
literature mixes several scalings of the same matrix, the scaling is always
an explicit tag:

  none            c = 1
  unit-events     c = 1/|events|            (unit values sum to 1)
  idempotent      c = |events|/|G|          (reproducing-state convention)
  per-transition  c = 1/|G|
  global          c such that D(G, G) = 1
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

import numpy as np

from .errors import GqmInputError, MathPropertyError
from .groupoid import FiniteGroupoid
from .states import (
    DEFAULT_TOL,
    CharacteristicFunction,
    invariance_matrix,
    is_positive_semidefinite,
)

NORMALIZATIONS = ("none", "unit-events", "idempotent", "per-transition",
                  "global")


def normalization_scale(tag, g: FiniteGroupoid, raw_matrix=None):
    if tag == "none":
        return 1.0
    if tag == "unit-events":
        return 1.0 / len(g.events)
    if tag == "idempotent":
        return len(g.events) / g.order
    if tag == "per-transition":
        return 1.0 / g.order
    if tag == "global":
        total = complex(np.sum(raw_matrix))
        if abs(total) <= DEFAULT_TOL:
            raise MathPropertyError(
                "global normalization impossible: D(G, G) = 0"
            )
        return 1.0 / total.real
    raise GqmInputError("unknown normalization tag %r (choose from %s)"
                        % (tag, ", ".join(NORMALIZATIONS)))


@dataclass(eq=False)
class DecoherenceFunctional:
    groupoid: FiniteGroupoid
    matrix: np.ndarray  # |G| x |G| complex, canonical transition order
    normalization: str = "none"

    def __post_init__(self):
        self.matrix = np.asarray(self.matrix, dtype=complex)
        n = self.groupoid.order
        if self.matrix.shape != (n, n):
            raise GqmInputError("decoherence matrix must be %d x %d" % (n, n))

    def entry(self, a, b):
        g = self.groupoid
        return complex(
            self.matrix[g.transition_index[g.resolve(a)],
                        g.transition_index[g.resolve(b)]]
        )


@dataclass
class QuantumMeasureReport:
    members: tuple[str, ...]
    value: float       # clamped to 0 when within tolerance below it
    raw_value: float
    normalization: str
    tolerance: float


def decoherence_from_characteristic(phi, normalization="none",
                                    tol=DEFAULT_TOL) -> DecoherenceFunctional:
    """D(alpha, beta) = c delta(t(alpha), t(beta)) phi(alpha^-1 ∘ beta)."""
    check = is_positive_semidefinite(phi, tol)
    if not check.ok:
        raise MathPropertyError(
            "cannot build a decoherence functional from a non-PSD function "
            "(min eigenvalue %.3e)" % check.min_eigenvalue,
            witness=check.witness,
        )
    raw = invariance_matrix(phi)
    scale = normalization_scale(normalization, phi.groupoid, raw)
    return DecoherenceFunctional(phi.groupoid, scale * raw, normalization)


def is_invariant(d: DecoherenceFunctional, tol=DEFAULT_TOL) -> bool:
    """Exhaustive check of D(alpha∘beta, alpha∘beta') = D(beta, beta')."""
    g = d.groupoid
    ix = g.transition_index
    for alpha in g.transitions:
        for beta in g.transitions:
            if not g.composable(alpha, beta):
                continue
            ab = g.composition[(alpha, beta)]
            for beta2 in g.transitions:
                if not g.composable(alpha, beta2):
                    continue
                ab2 = g.composition[(alpha, beta2)]
                if abs(d.matrix[ix[ab], ix[ab2]]
                       - d.matrix[ix[beta], ix[beta2]]) > tol:
                    return False
    return True


def characteristic_from_bivariate(d: DecoherenceFunctional,
                                  tol=DEFAULT_TOL) -> CharacteristicFunction:
    """Recover phi(alpha) = D(1_{t(alpha)}, alpha); requires invariance."""
    if not is_invariant(d, tol):
        raise MathPropertyError(
            "decoherence functional is not invariant; no characteristic "
            "function exists"
        )
    g = d.groupoid
    values = np.zeros(g.order, dtype=complex)
    for t in g.transitions:
        values[g.transition_index[t]] = d.entry(g.unit_of[g.target[t]], t)
    return CharacteristicFunction(g, values)


def _resolve_set(g, members):
    out = []
    seen = set()
    for m in members:
        lab = g.resolve(m)
        if lab not in seen:
            seen.add(lab)
            out.append(lab)
    return tuple(out)


def quantum_measure(d: DecoherenceFunctional, members,
                    tol=DEFAULT_TOL) -> QuantumMeasureReport:
    """mu(A) = D(A, A): the diagonal block sum, clamped at zero."""
    g = d.groupoid
    labels = _resolve_set(g, members)
    idx = [g.transition_index[t] for t in labels]
    total = complex(np.sum(d.matrix[np.ix_(idx, idx)])) if idx else 0j
    if abs(total.imag) > tol:
        raise MathPropertyError(
            "measure value is not real: %r (matrix is not Hermitian?)" % total
        )
    raw = total.real
    value = raw
    if -tol <= value < 0.0:
        value = 0.0
    return QuantumMeasureReport(
        members=labels, value=value, raw_value=raw,
        normalization=d.normalization, tolerance=tol,
    )


MAX_INTERFERENCE_ORDER = 6


def _check_disjoint(g, sets):
    resolved = [_resolve_set(g, s) for s in sets]
    seen = {}
    for k, labels in enumerate(resolved):
        for lab in labels:
            if lab in seen:
                raise GqmInputError(
                    "interference sets %d and %d overlap on %r"
                    % (seen[lab], k, lab)
                )
            seen[lab] = k
    return resolved


def interference(d: DecoherenceFunctional, sets, tol=DEFAULT_TOL) -> float:
    """The order-n inclusion-exclusion interference of pairwise disjoint
    sets: sum over non-empty subfamilies S of (-1)^(n-|S|) mu(union of S)."""
    n = len(sets)
    if not 1 <= n <= MAX_INTERFERENCE_ORDER:
        raise GqmInputError(
            "interference order must be between 1 and %d"
            % MAX_INTERFERENCE_ORDER
        )
    resolved = _check_disjoint(d.groupoid, sets)
    total = 0.0
    for k in range(1, n + 1):
        sign = (-1.0) ** (n - k)
        for combo in combinations(range(n), k):
            union = [lab for i in combo for lab in resolved[i]]
            total += sign * quantum_measure(d, union, tol).raw_value
    return total


def interference_recursive_check(d, sets, tol=1e-9) -> bool:
    """Self-test of the inclusion-exclusion implementation: I_{n+1} computed
    directly must equal the recursive combination of I_n terms."""
    if len(sets) < 2:
        raise GqmInputError("recursive check needs at least two sets")
    resolved = _check_disjoint(d.groupoid, sets)
    a0, a1, rest = resolved[0], resolved[1], list(resolved[2:])
    direct = interference(d, resolved, tol)
    merged = interference(d, [tuple(a0) + tuple(a1)] + rest, tol)
    drop0 = interference(d, [a0] + rest, tol)
    drop1 = interference(d, [a1] + rest, tol)
    return abs(direct - (merged - drop0 - drop1)) <= tol


def check_decoherence_axioms(d: DecoherenceFunctional, tol=DEFAULT_TOL):
    """Re-check hermiticity, positivity and target-block structure; raises
    MathPropertyError on the first violation."""
    g = d.groupoid
    m = d.matrix
    if np.max(np.abs(m - m.conj().T)) > tol:
        raise MathPropertyError("decoherence matrix is not Hermitian")
    eigvals = np.linalg.eigvalsh(0.5 * (m + m.conj().T))
    if eigvals[0] < -tol:
        raise MathPropertyError(
            "decoherence matrix is not PSD (min eigenvalue %.3e)" % eigvals[0]
        )
    for a in g.transitions:
        for b in g.transitions:
            if g.target[a] != g.target[b]:
                if abs(d.entry(a, b)) > tol:
                    raise MathPropertyError(
                        "entries with different targets must vanish: "
                        "(%r, %r)" % (a, b)
                    )

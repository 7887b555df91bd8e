"""Action functions and factorizable (dynamical) states.

An action is a real function on transitions that vanishes on units, adds
along compositions, and flips sign under inversion.  Exponentiating an
action gives a pure-phase characteristic function which is always PSD and,
with the idempotent scaling, reproducing.

For quiver-generated systems the action may be specified only on the
generating arrows.  Globally extending it can fail (the potential system
can be overdetermined on cycles); the pairwise decoherence matrix over the
arrows is well-defined regardless, and both routes are provided.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass

import numpy as np

from .decoherence import DecoherenceFunctional, normalization_scale
from .errors import ActionInconsistencyError, GqmInputError, MathPropertyError
from .groupoid import FiniteGroupoid, QuiverSpec, pair_label, unit_label
from .states import DEFAULT_TOL, CharacteristicFunction


@dataclass(eq=False)
class ActionFunction:
    groupoid: FiniteGroupoid
    values: np.ndarray  # real, canonical transition order

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=float)
        if self.values.shape != (self.groupoid.order,):
            raise GqmInputError("action vector length does not match |G|")

    @classmethod
    def from_dict(cls, g, values):
        vec = np.zeros(g.order, dtype=float)
        for label, value in values.items():
            vec[g.transition_index[g.resolve(label)]] = value
        return cls(g, vec)

    def value(self, label):
        g = self.groupoid
        return float(self.values[g.transition_index[g.resolve(label)]])


@dataclass
class GeneratorAction:
    """Action values on the arrows of a quiver only."""

    quiver: QuiverSpec
    values: dict[str, float]

    def validate(self):
        self.quiver.validate()
        labels = {a[0] for a in self.quiver.arrows}
        missing = labels - set(self.values)
        if missing:
            raise GqmInputError(
                "generator action misses arrows: %s" % ", ".join(sorted(missing))
            )
        extra = set(self.values) - labels
        if extra:
            raise GqmInputError(
                "generator action has unknown arrows: %s"
                % ", ".join(sorted(extra))
            )


def action_from_potential(g: FiniteGroupoid, potential) -> ActionFunction:
    """s(alpha) = u(target) - u(source); the canonical way of producing a
    valid action on a pair groupoid (every action there has this form)."""
    if not g.is_pair_groupoid():
        raise GqmInputError(
            "potentials define actions on pair groupoids only"
        )
    missing = set(g.events) - set(potential)
    if missing:
        raise GqmInputError("potential misses events: %s"
                            % ", ".join(sorted(missing)))
    values = np.zeros(g.order, dtype=float)
    for t in g.transitions:
        values[g.transition_index[t]] = (
            potential[g.target[t]] - potential[g.source[t]]
        )
    return ActionFunction(g, values)


def is_action(s: ActionFunction, tol=DEFAULT_TOL):
    """Exhaustive check of the three action laws; returns (ok, violations)."""
    g = s.groupoid
    violations = []
    for x in g.events:
        v = s.value(g.unit_of[x])
        if abs(v) > tol:
            violations.append("unit value s(%r) = %.17g != 0"
                              % (g.unit_of[x], v))
    for t in g.transitions:
        v = s.value(t) + s.value(g.inverse[t])
        if abs(v) > tol:
            violations.append(
                "inversion law fails: s(%r) + s(%r) = %.17g"
                % (t, g.inverse[t], v)
            )
    for o, i, r in g.composition_triples():
        dev = s.values[r] - s.values[o] - s.values[i]
        if abs(dev) > tol:
            violations.append(
                "additivity fails on (%r, %r): deviation %.17g"
                % (g.transitions[o], g.transitions[i], dev)
            )
    return (not violations), violations


def extend_generator_action(g: FiniteGroupoid,
                            ga: GeneratorAction) -> ActionFunction:
    """Propagate arrow values to the whole quiver-generated groupoid.

    Succeeds iff a potential u with u(target) - u(source) = value exists for
    every arrow on each component; otherwise raises
    ActionInconsistencyError carrying the obstructing cycle.
    """
    ga.validate()
    arrows = list(ga.quiver.arrows)
    for label, src, tgt in arrows:
        expected = unit_label(src) if src == tgt else pair_label(src, tgt)
        if g.aliases.get(label) != expected and label not in g.transition_index:
            raise GqmInputError(
                "groupoid was not generated from this quiver (arrow %r)"
                % label
            )

    # solve the potential system by BFS over the arrow graph
    edges = {x: [] for x in ga.quiver.events}
    for label, src, tgt in arrows:
        edges[src].append((label, tgt, +1))
        edges[tgt].append((label, src, -1))

    potential = {}
    parent = {}  # event -> (prev_event, arrow_label, sign)
    for root in ga.quiver.events:
        if root in potential:
            continue
        potential[root] = 0.0
        parent[root] = None
        queue = deque([root])
        while queue:
            v = queue.popleft()
            for label, w, sign in edges[v]:
                step = sign * ga.values[label]
                if w not in potential:
                    potential[w] = potential[v] + step
                    parent[w] = (v, label, sign)
                    queue.append(w)
                    continue
                residual = potential[v] + step - potential[w]
                if abs(residual) > DEFAULT_TOL:
                    cycle = [(label, sign)]
                    cycle += _tree_path(parent, w, root)
                    cycle += [(lab, -sg) for lab, sg in
                              reversed(_tree_path(parent, v, root))]
                    if residual < 0:  # orient the cycle positively
                        residual = -residual
                        cycle = [(lab, -sg) for lab, sg in reversed(cycle)]
                    raise ActionInconsistencyError(cycle, residual)

    values = {}
    for x in g.events:
        values[g.unit_of[x]] = 0.0
    for t in g.transitions:
        values[t] = potential[g.target[t]] - potential[g.source[t]]
    return ActionFunction.from_dict(g, values)


def _tree_path(parent, node, root):
    """Signed arrow path from ``node`` down to ``root`` along the BFS tree."""
    path = []
    while parent[node] is not None:
        prev, label, sign = parent[node]
        path.append((label, -sign))
        node = prev
    return path


def dynamical_state(s: ActionFunction, normalization="unit-events",
                    tol=DEFAULT_TOL) -> CharacteristicFunction:
    """phi(alpha) = c exp(i s(alpha)); idempotent scaling makes it
    reproducing, unit-events scaling makes it normalized."""
    ok, violations = is_action(s, tol)
    if not ok:
        raise MathPropertyError(
            "not a valid action:\n" + "\n".join(violations[:5])
        )
    scale = normalization_scale(normalization, s.groupoid)
    return CharacteristicFunction(s.groupoid, scale * np.exp(1j * s.values))


@dataclass
class FactorizabilityReport:
    ok: bool
    violations: list[str]
    unit_modulus: bool  # |phi(alpha)| = 1 corollary on the rescaled phase


def is_factorizable(phi: CharacteristicFunction,
                    tol=DEFAULT_TOL) -> FactorizabilityReport:
    """Check phi(outer∘inner) = phi(outer) phi(inner) and
    phi(alpha^-1) = conj(phi(alpha)) on the phase part (values rescaled so
    units sit at 1); a vanishing unit value is an immediate failure."""
    g = phi.groupoid
    for x in g.events:
        if abs(phi.value(g.unit_of[x])) == 0.0:
            return FactorizabilityReport(
                ok=False,
                violations=["phi(%r) = 0" % g.unit_of[x]],
                unit_modulus=False,
            )
    # factorizable functions are constant-modulus on units; rescale by the
    # value at the source unit of each transition
    unit_val = {x: phi.value(g.unit_of[x]) for x in g.events}
    rescaled = np.array([
        phi.value(t) / unit_val[g.source[t]] for t in g.transitions
    ])
    violations = []
    ix = g.transition_index
    for o, i, r in g.composition_triples():
        dev = abs(rescaled[r] - rescaled[o] * rescaled[i])
        if dev > tol:
            violations.append(
                "factorization fails on (%r, %r): |deviation| = %.3e"
                % (g.transitions[o], g.transitions[i], dev)
            )
    for t in g.transitions:
        dev = abs(rescaled[ix[g.inverse[t]]] - np.conj(rescaled[ix[t]]))
        if dev > tol:
            violations.append(
                "unitarity fails at %r: |deviation| = %.3e" % (t, dev)
            )
    unit_modulus = bool(np.max(np.abs(np.abs(rescaled) - 1.0)) <= tol)
    return FactorizabilityReport(
        ok=not violations, violations=violations, unit_modulus=unit_modulus
    )


@dataclass(eq=False)
class ArrowDecoherence:
    """Decoherence matrix restricted to the generating arrows of a quiver.

    Well-defined even when no global action extension exists: entries only
    use pairwise phase differences of composable-by-target arrow pairs.
    """

    arrows: tuple[str, ...]  # canonical order: (target idx, source idx, label)
    matrix: np.ndarray
    normalization: str

    def entry(self, a, b):
        return complex(self.matrix[self.arrows.index(a), self.arrows.index(b)])

    def measure(self, members, tol=DEFAULT_TOL):
        idx = [self.arrows.index(m) for m in members]
        total = complex(np.sum(self.matrix[np.ix_(idx, idx)]))
        if abs(total.imag) > tol:
            raise MathPropertyError("measure value is not real: %r" % total)
        raw = total.real
        value = 0.0 if -tol <= raw < 0.0 else raw
        return value, raw


def quiver_decoherence(ga: GeneratorAction,
                       normalization="per-transition") -> ArrowDecoherence:
    """Entry (a, b) = c delta(t(a), t(b)) exp(i (s(b) - s(a))), with c
    computed against the order of the quiver-generated groupoid."""
    ga.validate()
    q = ga.quiver
    ev_ix = {x: i for i, x in enumerate(q.events)}
    arrows = sorted(
        q.arrows, key=lambda a: (ev_ix[a[2]], ev_ix[a[1]], a[0])
    )
    labels = tuple(a[0] for a in arrows)
    scale = _quiver_scale(normalization, q)
    n = len(arrows)
    mat = np.zeros((n, n), dtype=complex)
    for i, (la, _, ta) in enumerate(arrows):
        for j, (lb, _, tb) in enumerate(arrows):
            if ta == tb:
                mat[i, j] = scale * np.exp(
                    1j * (ga.values[lb] - ga.values[la])
                )
    return ArrowDecoherence(arrows=labels, matrix=mat,
                            normalization=normalization)


def _quiver_scale(tag, q: QuiverSpec):
    """Scale factors relative to the groupoid the quiver generates."""
    adjacency = {x: set() for x in q.events}
    for _, src, tgt in q.arrows:
        adjacency[src].add(tgt)
        adjacency[tgt].add(src)
    seen, sizes = set(), []
    for x in q.events:
        if x in seen:
            continue
        comp, queue = set([x]), deque([x])
        while queue:
            v = queue.popleft()
            for w in adjacency[v]:
                if w not in comp:
                    comp.add(w)
                    queue.append(w)
        seen |= comp
        sizes.append(len(comp))
    order = sum(n * n for n in sizes)
    n_events = len(q.events)
    if tag == "none":
        return 1.0
    if tag == "unit-events":
        return 1.0 / n_events
    if tag == "idempotent":
        return n_events / order
    if tag == "per-transition":
        return 1.0 / order
    raise GqmInputError(
        "unknown normalization tag %r for quiver decoherence" % tag
    )


def is_reproducing_sweep_trial(trial):
    """One trial of the random-potential sweep: builds the dynamical state
    of a random potential on a pair groupoid and returns (min eigenvalue of
    its PSD matrix, max entrywise |phi*phi - phi| under the idempotent
    scaling).  Pure function of its argument, safe for worker pools."""
    from .algebra import multiply
    from .groupoid import pair_groupoid
    from .states import is_positive_semidefinite

    n_events, potential_values = trial
    g = pair_groupoid(["e%d" % k for k in range(n_events)])
    u = {x: potential_values[k] for k, x in enumerate(g.events)}
    s = action_from_potential(g, u)
    phi = dynamical_state(s, normalization="idempotent")
    check = is_positive_semidefinite(phi)
    elem = phi.as_algebra_element()
    square = multiply(elem, elem)
    deviation = float(np.max(np.abs(square.coeffs - elem.coeffs)))
    return check.min_eigenvalue, deviation


def recover_potential(s: ActionFunction, base_event=None):
    """On a pair groupoid, the potential u with u(x) = s(base -> x); the
    coboundary-completeness witness for `action_from_potential`."""
    g = s.groupoid
    if not g.is_pair_groupoid():
        raise GqmInputError("potential recovery needs a pair groupoid")
    base = base_event if base_event is not None else g.events[0]
    g.require_event(base)
    potential = {}
    for x in g.events:
        t = next(iter(g.hom_set(base, x)))
        potential[x] = s.value(t)
    return potential


__all__ = [
    "ActionFunction",
    "ArrowDecoherence",
    "FactorizabilityReport",
    "GeneratorAction",
    "action_from_potential",
    "dynamical_state",
    "extend_generator_action",
    "is_action",
    "is_factorizable",
    "is_reproducing_sweep_trial",
    "quiver_decoherence",
    "recover_potential",
]

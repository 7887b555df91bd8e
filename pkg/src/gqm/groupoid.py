"""Finite groupoids: construction, validation, and structural queries.

A groupoid here is a finite set of labelled transitions between labelled
events, with a partial composition, units and inverses.  Composition uses
the function-style convention: ``compose(outer, inner)`` is defined exactly
when ``target(inner) == source(outer)`` and realizes "inner first, then
outer".

Every constructor validates the axioms exhaustively before returning, so an
invalid groupoid cannot circulate.  Canonical transition ordering is: units
first (in event order), then non-units sorted by (target index, source
index, label).  This ordering is what makes matrix layouts reproducible and
matches the natural block structure of decoherence matrices (transitions
grouped by target).
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field

from .errors import GqmInputError, GroupoidValidationError


def _check_labels(labels, what):
    seen = set()
    for lab in labels:
        if not isinstance(lab, str) or not lab:
            raise GqmInputError("%s labels must be non-empty strings" % what)
        if lab in seen:
            raise GqmInputError("duplicate %s label %r" % (what, lab))
        seen.add(lab)


@dataclass
class QuiverSpec:
    """Events plus labelled arrows; generates a groupoid via `from_quiver`."""

    events: list[str]
    arrows: list[tuple[str, str, str]]  # (label, source, target)

    def validate(self):
        _check_labels(self.events, "event")
        _check_labels([a[0] for a in self.arrows], "arrow")
        evset = set(self.events)
        for label, src, tgt in self.arrows:
            if src not in evset or tgt not in evset:
                raise GqmInputError(
                    "arrow %r references undeclared event (%r -> %r)"
                    % (label, src, tgt)
                )


@dataclass
class ValidationReport:
    """Outcome of the exhaustive axiom check; empty violations means valid."""

    violations: list[str] = field(default_factory=list)
    checks: int = 0

    @property
    def ok(self):
        return not self.violations


@dataclass(eq=False)
class FiniteGroupoid:
    """Immutable-by-convention carrier of the groupoid structure.

    ``aliases`` maps external labels (e.g. quiver arrow names) onto
    transition labels; they are accepted anywhere a transition label is.
    """

    events: tuple[str, ...]
    transitions: tuple[str, ...]
    source: dict[str, str]
    target: dict[str, str]
    unit_of: dict[str, str]
    inverse: dict[str, str]
    composition: dict[tuple[str, str], str]  # (outer, inner) -> result
    aliases: dict[str, str] = field(default_factory=dict)

    def __post_init__(self):
        self.event_index = {x: i for i, x in enumerate(self.events)}
        self.transition_index = {t: i for i, t in enumerate(self.transitions)}
        self._comp_triples = None

    # -- label handling -------------------------------------------------

    def resolve(self, label):
        """Map a transition label or alias to the canonical label."""
        if label in self.transition_index:
            return label
        if label in self.aliases:
            return self.aliases[label]
        raise GqmInputError("unknown transition label %r" % label)

    def require_event(self, x):
        if x not in self.event_index:
            raise GqmInputError("unknown event label %r" % x)
        return x

    @property
    def order(self):
        return len(self.transitions)

    # -- composition ----------------------------------------------------

    def composable(self, outer, inner):
        return self.target[inner] == self.source[outer]

    def compose(self, outer, inner):
        """outer∘inner; raises if target(inner) != source(outer)."""
        try:
            return self.composition[(outer, inner)]
        except KeyError:
            raise GqmInputError(
                "transitions not composable: %r after %r" % (outer, inner)
            ) from None

    def composition_triples(self):
        """All (outer_idx, inner_idx, result_idx) with outer∘inner defined."""
        if self._comp_triples is None:
            tx = self.transition_index
            self._comp_triples = [
                (tx[o], tx[i], tx[r]) for (o, i), r in self.composition.items()
            ]
        return self._comp_triples

    # -- structural queries ---------------------------------------------

    def g_plus(self, x):
        self.require_event(x)
        return frozenset(t for t in self.transitions if self.source[t] == x)

    def g_minus(self, y):
        self.require_event(y)
        return frozenset(t for t in self.transitions if self.target[t] == y)

    def isotropy(self, x):
        return self.g_plus(x) & self.g_minus(x)

    def hom_set(self, x, y):
        """Transitions x -> y (the set G(y, x))."""
        self.require_event(x)
        self.require_event(y)
        return frozenset(
            t
            for t in self.transitions
            if self.source[t] == x and self.target[t] == y
        )

    def orbit(self, x):
        self.require_event(x)
        return frozenset(self.target[t] for t in self.transitions
                         if self.source[t] == x)

    def orbits(self):
        remaining = set(self.events)
        parts = []
        for x in self.events:
            if x in remaining:
                orb = self.orbit(x)
                parts.append(orb)
                remaining -= orb
        return parts

    def is_connected(self):
        return len(self.orbits()) == 1

    def is_pair_groupoid(self):
        """True iff there is exactly one transition per ordered event pair."""
        if self.order != len(self.events) ** 2:
            return False
        return all(
            len(self.hom_set(x, y)) == 1 for x in self.events for y in self.events
        )

    def units(self):
        return tuple(self.unit_of[x] for x in self.events)


# ---------------------------------------------------------------------------
# validation


def validate(g: FiniteGroupoid) -> ValidationReport:
    """Exhaustively check every groupoid axiom; violations carry witnesses."""
    rep = ValidationReport()

    def bad(msg):
        rep.violations.append(msg)

    tset = set(g.transitions)
    for t in g.transitions:
        rep.checks += 1
        if g.source.get(t) not in g.event_index:
            bad("transition %r has invalid source %r" % (t, g.source.get(t)))
        if g.target.get(t) not in g.event_index:
            bad("transition %r has invalid target %r" % (t, g.target.get(t)))
        if g.inverse.get(t) not in tset:
            bad("transition %r has no inverse" % t)
    if rep.violations:
        return rep

    for x in g.events:
        rep.checks += 1
        u = g.unit_of.get(x)
        if u not in tset:
            bad("event %r has no unit transition" % x)
        elif g.source[u] != x or g.target[u] != x:
            bad("unit %r of event %r is not a loop at it" % (u, x))
    if rep.violations:
        return rep

    # composition domain: defined iff composable
    for o in g.transitions:
        for i in g.transitions:
            rep.checks += 1
            defined = (o, i) in g.composition
            should = g.composable(o, i)
            if defined and not should:
                bad("compose(%r, %r) defined but endpoints mismatch" % (o, i))
            elif should and not defined:
                bad("compose(%r, %r) missing" % (o, i))
            elif defined:
                r = g.composition[(o, i)]
                if r not in tset:
                    bad("compose(%r, %r) = %r is not a transition" % (o, i, r))
                elif (g.source[r] != g.source[i]) or (g.target[r] != g.target[o]):
                    bad(
                        "compose(%r, %r) = %r has wrong endpoints" % (o, i, r)
                    )
    if rep.violations:
        return rep

    # unit laws
    for a in g.transitions:
        rep.checks += 2
        if g.composition[(a, g.unit_of[g.source[a]])] != a:
            bad("right unit law fails at %r" % a)
        if g.composition[(g.unit_of[g.target[a]], a)] != a:
            bad("left unit law fails at %r" % a)

    # inverse laws
    for a in g.transitions:
        rep.checks += 3
        inv = g.inverse[a]
        if g.source[inv] != g.target[a] or g.target[inv] != g.source[a]:
            bad("inverse of %r has wrong endpoints" % a)
            continue
        if g.composition[(inv, a)] != g.unit_of[g.source[a]]:
            bad("inverse law fails: %r^-1 o %r != unit at source" % (a, a))
        if g.composition[(a, inv)] != g.unit_of[g.target[a]]:
            bad("inverse law fails: %r o %r^-1 != unit at target" % (a, a))
        if g.inverse[inv] != a:
            bad("inverse is not involutive at %r" % a)

    # associativity on all composable triples
    for c in g.transitions:
        for b in g.transitions:
            if not g.composable(b, c):
                continue
            bc = g.composition[(b, c)]
            for a in g.transitions:
                if not g.composable(a, b):
                    continue
                rep.checks += 1
                ab = g.composition[(a, b)]
                if g.composition[(a, bc)] != g.composition[(ab, c)]:
                    bad(
                        "associativity fails on triple (%r, %r, %r)" % (a, b, c)
                    )
    return rep


def _canonical_order(events, transitions, source, target, units):
    """Units first in event order, then by (target idx, source idx, label)."""
    ev_ix = {x: i for i, x in enumerate(events)}
    unit_set = set(units)
    non_units = [t for t in transitions if t not in unit_set]
    non_units.sort(key=lambda t: (ev_ix[target[t]], ev_ix[source[t]], t))
    return tuple(list(units) + non_units)


def _build(events, transitions, source, target, unit_of, inverse, composition,
           aliases=None):
    order = _canonical_order(
        tuple(events), transitions, source, target,
        [unit_of[x] for x in events],
    )
    g = FiniteGroupoid(
        events=tuple(events),
        transitions=order,
        source=dict(source),
        target=dict(target),
        unit_of=dict(unit_of),
        inverse=dict(inverse),
        composition=dict(composition),
        aliases=dict(aliases or {}),
    )
    rep = validate(g)
    if not rep.ok:
        raise GroupoidValidationError(rep.violations)
    return g


# ---------------------------------------------------------------------------
# constructors


def unit_label(event):
    return "1_%s" % event


def pair_label(src, tgt):
    return "%s->%s" % (src, tgt)


def pair_groupoid(events) -> FiniteGroupoid:
    """The groupoid of ordered pairs over ``events``: |G| = |events|^2."""
    events = list(events)
    if not events:
        raise GqmInputError("pair groupoid needs at least one event")
    _check_labels(events, "event")

    source, target, unit_of, inverse = {}, {}, {}, {}
    by_pair = {}
    transitions = []
    for x in events:
        for y in events:
            lab = unit_label(x) if x == y else pair_label(x, y)
            transitions.append(lab)
            source[lab], target[lab] = x, y
            by_pair[(x, y)] = lab
    for x in events:
        unit_of[x] = by_pair[(x, x)]
    for (x, y), lab in by_pair.items():
        inverse[lab] = by_pair[(y, x)]

    composition = {}
    for o in transitions:
        for i in transitions:
            if target[i] == source[o]:
                composition[(o, i)] = by_pair[(source[i], target[o])]
    return _build(events, transitions, source, target, unit_of, inverse,
                  composition)


def group_as_groupoid(elements, table, identity, event="*") -> FiniteGroupoid:
    """Single-event groupoid from a finite group multiplication table.

    ``table`` maps (left, right) -> product; compose(outer, inner) is
    table[(outer, inner)].  Group axioms are re-checked by `validate`.
    """
    elements = list(elements)
    _check_labels(elements, "group element")
    if identity not in elements:
        raise GqmInputError("identity %r is not a listed element" % identity)
    elset = set(elements)
    for pair, res in table.items():
        if len(pair) != 2 or set(pair) - elset or res not in elset:
            raise GqmInputError("table entry %r -> %r is out of range"
                               % (pair, res))
    missing = [
        (a, b) for a in elements for b in elements if (a, b) not in table
    ]
    if missing:
        raise GqmInputError("multiplication table is incomplete: %r" % missing)

    inverse = {}
    for a in elements:
        invs = [b for b in elements if table[(a, b)] == identity]
        if len(invs) != 1 or table[(invs[0], a)] != identity:
            raise GqmInputError("element %r has no unique inverse" % a)
        inverse[a] = invs[0]

    source = {a: event for a in elements}
    target = {a: event for a in elements}
    try:
        return _build([event], elements, source, target, {event: identity},
                      inverse, dict(table))
    except GroupoidValidationError as exc:
        # an invalid table (e.g. broken associativity) is an input error
        raise GqmInputError(str(exc)) from None


def from_quiver(q: QuiverSpec) -> FiniteGroupoid:
    """Groupoid generated by a quiver: the pair groupoid of each connected
    component (undirected), disjointly unioned.

    All cycles the free construction would create are collapsed, so each
    ordered pair of events in one component carries exactly one transition.
    Arrow labels become aliases for their pair transitions.
    """
    q.validate()

    adjacency = {x: set() for x in q.events}
    for _, src, tgt in q.arrows:
        adjacency[src].add(tgt)
        adjacency[tgt].add(src)

    components = []
    remaining = set(q.events)
    for x in q.events:  # deterministic component order
        if x not in remaining:
            continue
        comp, queue = [], deque([x])
        remaining.discard(x)
        while queue:
            v = queue.popleft()
            comp.append(v)
            for w in sorted(adjacency[v]):
                if w in remaining:
                    remaining.discard(w)
                    queue.append(w)
        components.append(sorted(comp, key=q.events.index))

    source, target, unit_of, inverse, composition = {}, {}, {}, {}, {}
    transitions = []
    for comp in components:
        by_pair = {}
        for x in comp:
            for y in comp:
                lab = unit_label(x) if x == y else pair_label(x, y)
                transitions.append(lab)
                source[lab], target[lab] = x, y
                by_pair[(x, y)] = lab
        for x in comp:
            unit_of[x] = by_pair[(x, x)]
        for (x, y), lab in by_pair.items():
            inverse[lab] = by_pair[(y, x)]
        for o in [by_pair[p] for p in by_pair]:
            for i in [by_pair[p] for p in by_pair]:
                if target[i] == source[o]:
                    composition[(o, i)] = by_pair[(source[i], target[o])]

    aliases = {}
    tset = set(transitions)
    for label, src, tgt in q.arrows:
        pair = unit_label(src) if src == tgt else pair_label(src, tgt)
        if label in tset and label != pair:
            raise GqmInputError(
                "arrow label %r collides with a different transition" % label
            )
        aliases[label] = pair
    return _build(q.events, transitions, source, target, unit_of, inverse,
                  composition, aliases)


def from_explicit(events, transitions, source, target, unit_of, inverse,
                  composition) -> FiniteGroupoid:
    """Groupoid from fully explicit tables; rejects any axiom violation."""
    _check_labels(events, "event")
    _check_labels(transitions, "transition")
    return _build(events, list(transitions), source, target, unit_of, inverse,
                  composition)

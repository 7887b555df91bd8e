"""GNS construction, smeared characters, vector-valued measures, and frame
changes.

From a state the construction yields: the Gram matrix of the state-induced
inner product on coefficient vectors, the null space (Gelfand ideal), an
orthonormal basis of the quotient Hilbert space, representation matrices by
left multiplication, and the ground vector (the class of the algebra unit).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .algebra import (
    AlgebraElement,
    fundamental_rep,
    fundamental_rep_inverse,
    unit_element,
)
from .errors import GqmInputError, MathPropertyError
from .groupoid import FiniteGroupoid
from .states import (
    DEFAULT_TOL,
    CharacteristicFunction,
    assert_state,
    delta_state,
    invariance_matrix,
    is_positive_semidefinite,
)

RANK_TOL = 1e-10


def gram_matrix(phi: CharacteristicFunction, tol=DEFAULT_TOL) -> np.ndarray:
    """M(alpha, beta) = delta(t(alpha), t(beta)) phi(alpha^-1 ∘ beta); the
    inner product of basis-transition classes."""
    assert_state(phi, tol)
    return invariance_matrix(phi)


@dataclass(eq=False)
class GnsSpace:
    groupoid: FiniteGroupoid
    dim: int
    basis: np.ndarray       # |G| x dim, columns are coset representatives
    gram: np.ndarray        # |G| x |G|
    projector: np.ndarray   # dim x |G|: raw coordinates -> quotient coords


@dataclass(eq=False)
class GnsRepresentation:
    space: GnsSpace
    matrices: dict[str, np.ndarray]  # transition label -> dim x dim
    ground: np.ndarray               # quotient coordinates of [1]

    def matrix_of(self, a: AlgebraElement) -> np.ndarray:
        g = self.space.groupoid
        out = np.zeros((self.space.dim, self.space.dim), dtype=complex)
        for t in g.transitions:
            c = a.coeffs[g.transition_index[t]]
            if c != 0:
                out += c * self.matrices[t]
        return out


def _left_mult_matrix(g, label):
    """Regular-representation matrix of the basis transition ``label``."""
    i = g.transition_index[label]
    mat = np.zeros((g.order, g.order), dtype=complex)
    for o, j, r in g.composition_triples():
        if o == i:
            mat[r, j] = 1.0
    return mat


def gns_build(phi: CharacteristicFunction, tol=DEFAULT_TOL) -> GnsRepresentation:
    """Quotient by the Gelfand ideal (null eigenvectors of the Gram form),
    orthonormalize the rest, and represent by left multiplication."""
    g = phi.groupoid
    gram = gram_matrix(phi, tol)
    eigvals, eigvecs = np.linalg.eigh(0.5 * (gram + gram.conj().T))
    cutoff = RANK_TOL * max(float(eigvals[-1]), 1.0)
    keep = [k for k in range(len(eigvals)) if eigvals[k] > cutoff]
    keep.sort(key=lambda k: -eigvals[k])

    basis = np.zeros((g.order, len(keep)), dtype=complex)
    for col, k in enumerate(keep):
        v = eigvecs[:, k]
        nz = np.flatnonzero(np.abs(v) > 1e-10)
        if nz.size:  # deterministic phase: first sizable coordinate > 0
            v = v * (np.abs(v[nz[0]]) / v[nz[0]])
        basis[:, col] = v / np.sqrt(eigvals[k])

    projector = basis.conj().T @ gram
    space = GnsSpace(groupoid=g, dim=len(keep), basis=basis, gram=gram,
                     projector=projector)

    matrices = {}
    for t in g.transitions:
        matrices[t] = projector @ _left_mult_matrix(g, t) @ basis
    ground = projector @ unit_element(g).coeffs
    return GnsRepresentation(space=space, matrices=matrices, ground=ground)


def verify_reconstruction(phi: CharacteristicFunction,
                          tol=DEFAULT_TOL) -> float:
    """Max over transitions of |<0| pi(alpha) |0> - phi(alpha)|."""
    rep = gns_build(phi, tol)
    g = phi.groupoid
    worst = 0.0
    for t in g.transitions:
        amp = complex(rep.ground.conj() @ rep.matrices[t] @ rep.ground)
        worst = max(worst, abs(amp - phi.value(t)))
    return worst


# -- representations given as explicit matrices --------------------------


@dataclass(eq=False)
class RepMatrices:
    """A unitary representation presented by one matrix per transition."""

    groupoid: FiniteGroupoid
    matrices: dict[str, np.ndarray]
    dim: int

    def check(self, tol=DEFAULT_TOL):
        g = self.groupoid
        for t in g.transitions:
            m = self.matrices.get(t)
            if m is None or m.shape != (self.dim, self.dim):
                raise GqmInputError("representation misses transition %r" % t)
        for (o, i), r in g.composition.items():
            dev = np.max(np.abs(
                self.matrices[o] @ self.matrices[i] - self.matrices[r]
            ))
            if dev > tol:
                raise MathPropertyError(
                    "not a homomorphism on (%r, %r): defect %.3e" % (o, i, dev)
                )
        for t in g.transitions:
            dev = np.max(np.abs(
                self.matrices[g.inverse[t]] - self.matrices[t].conj().T
            ))
            if dev > tol:
                raise MathPropertyError(
                    "star-compatibility fails at %r: defect %.3e" % (t, dev)
                )
        unit_sum = sum(self.matrices[u] for u in g.units())
        if np.max(np.abs(unit_sum - np.eye(self.dim))) > tol:
            raise MathPropertyError("unit transitions do not sum to identity")

    def apply(self, members, psi):
        psi = np.asarray(psi, dtype=complex)
        if psi.shape != (self.dim,):
            raise GqmInputError("vector dimension does not match the "
                                "representation")
        out = np.zeros(self.dim, dtype=complex)
        for m in members:
            out += self.matrices[self.groupoid.resolve(m)] @ psi
        return out


def fundamental_matrices(g: FiniteGroupoid) -> RepMatrices:
    mats = {
        t: fundamental_rep(AlgebraElement.basis(g, t)) for t in g.transitions
    }
    return RepMatrices(groupoid=g, matrices=mats, dim=len(g.events))


def gns_matrices(rep: GnsRepresentation) -> RepMatrices:
    return RepMatrices(groupoid=rep.space.groupoid, matrices=rep.matrices,
                       dim=rep.space.dim)


def smeared_character(rep: RepMatrices, density,
                      tol=DEFAULT_TOL) -> CharacteristicFunction:
    """phi(alpha) = Tr(density . pi(alpha)); PSD by construction, which is
    re-checked before returning."""
    rep.check(tol)
    density = np.asarray(density, dtype=complex)
    if density.shape != (rep.dim, rep.dim):
        raise GqmInputError("density matrix dimension mismatch")
    if np.max(np.abs(density - density.conj().T)) > tol:
        raise GqmInputError("density matrix is not Hermitian")
    eigvals = np.linalg.eigvalsh(0.5 * (density + density.conj().T))
    if eigvals[0] < -tol:
        raise GqmInputError("density matrix is not PSD")
    if abs(np.trace(density).real - 1.0) > tol:
        raise GqmInputError("density matrix trace must be 1")

    g = rep.groupoid
    values = np.array([
        np.trace(density @ rep.matrices[t]) for t in g.transitions
    ])
    phi = CharacteristicFunction(g, values)
    check = is_positive_semidefinite(phi, tol)
    if not check.ok:
        raise MathPropertyError(
            "smeared character failed the PSD re-check "
            "(min eigenvalue %.3e)" % check.min_eigenvalue
        )
    return phi


def vector_valued_measure(rep: RepMatrices, psi, members) -> np.ndarray:
    """nu(A) = sum over alpha in A of pi(alpha) psi; finitely additive."""
    return rep.apply(members, psi)


# -- frame changes -------------------------------------------------------


@dataclass(eq=False)
class FrameChange:
    """A unitary on the event space, realizing an algebra automorphism of a
    connected pair groupoid through its fundamental representation."""

    unitary: np.ndarray

    def __post_init__(self):
        self.unitary = np.asarray(self.unitary, dtype=complex)
        n = self.unitary.shape[0]
        if self.unitary.shape != (n, n):
            raise GqmInputError("frame matrix must be square")
        if np.max(np.abs(self.unitary.conj().T @ self.unitary
                         - np.eye(n))) > DEFAULT_TOL:
            raise GqmInputError("frame matrix is not unitary")

    @property
    def dim(self):
        return self.unitary.shape[0]

    def adjoint(self):
        return FrameChange(self.unitary.conj().T)


def frame_compose(first: FrameChange, second: FrameChange) -> FrameChange:
    """The frame change realizing 'apply ``first``, then ``second``'."""
    if first.dim != second.dim:
        raise GqmInputError("frame dimensions do not match")
    return FrameChange(first.unitary @ second.unitary)


@dataclass
class TransformationResult:
    value: float                       # rho_a applied to the moved projector
    amplitude: complex                 # the GNS inner product <b|a> in H_a
    gns_basis: tuple[str, ...]         # transitions spanning H_a
    gns_vector: np.ndarray             # coordinates of |b> in that basis


def frame_transported_unit(g: FiniteGroupoid, fc: FrameChange,
                           b) -> AlgebraElement:
    """The algebra element whose fundamental matrix is U^dagger P_b U."""
    if not g.is_pair_groupoid() or not g.is_connected():
        raise GqmInputError(
            "frame changes require a connected pair groupoid"
        )
    if fc.dim != len(g.events):
        raise GqmInputError("frame dimension does not match |events|")
    g.require_event(b)
    n = len(g.events)
    proj = np.zeros((n, n), dtype=complex)
    bi = g.event_index[b]
    proj[bi, bi] = 1.0
    mat = fc.unitary.conj().T @ proj @ fc.unitary
    return fundamental_rep_inverse(g, mat)


def transformation_function(g: FiniteGroupoid, fc: FrameChange, a,
                            b) -> TransformationResult:
    """Statistical link between outcome ``b`` in the moved frame and the
    simple state at ``a``: evaluates delta_state(a) on the transported unit
    of ``b`` and exposes the corresponding vector in the GNS space of a."""
    moved = frame_transported_unit(g, fc, b)
    g.require_event(a)

    # evaluate rho_a: the coefficient of the unit at a
    value = moved.coeff(g.unit_of[a])
    if abs(value.imag) > DEFAULT_TOL:
        raise MathPropertyError("transported projector has non-real "
                                "diagonal: %r" % value)

    # H_a is the space of functions on the spray at a; the class of any
    # element is its coefficient restriction to that spray
    spray = sorted(
        g.g_plus(a), key=lambda t: g.transition_index[t]
    )
    vec = np.array([moved.coeff(t) for t in spray])
    ground = np.array([
        1.0 + 0j if t == g.unit_of[a] else 0.0 for t in spray
    ])
    amplitude = complex(np.vdot(vec, ground))
    return TransformationResult(
        value=value.real,
        amplitude=amplitude,
        gns_basis=tuple(spray),
        gns_vector=vec,
    )


def gns_report(phi: CharacteristicFunction, tol=DEFAULT_TOL) -> dict:
    """The summary emitted by the CLI: dimension, tolerance, reconstruction
    error and ground norm."""
    rep = gns_build(phi, tol)
    g = phi.groupoid
    worst = 0.0
    for t in g.transitions:
        amp = complex(rep.ground.conj() @ rep.matrices[t] @ rep.ground)
        worst = max(worst, abs(amp - phi.value(t)))
    return {
        "dim": rep.space.dim,
        "gram_rank_tolerance": RANK_TOL,
        "reconstruction_max_error": worst,
        "ground_norm": float(np.linalg.norm(rep.ground)),
    }


def delta_gns_dimension(g: FiniteGroupoid, x) -> int:
    """dim of the GNS space of the simple state at x (equals |spray(x)|)."""
    rep = gns_build(delta_state(g, x))
    return rep.space.dim

"""Structure-constant Leibniz algebras and their basic invariants.

A StructTensor stores the constants c[i][j][k] of a bilinear product
[e_i, e_j] = sum_k c_{ij}^k e_k.  Entries are either Scalar (exact field
elements) or PolyQ (symbolic parameters); one entry kind per tensor.
Whether the product satisfies the Leibniz identity is checked, never
assumed: leibniz_residual exposes the defect of each basis triple.

Subspaces are kept in reduced row echelon form so that equality of
subspaces is structural equality, and the series/annihilator operations
return canonical objects.
"""

from __future__ import annotations

from dataclasses import dataclass

from . import linalg
from .linalg import ShapeError
from .scalars import Scalar


class EntryKindError(TypeError):
    """Operation requires Scalar entries but the tensor is symbolic."""


class StructTensor:
    """Structure constants of a finite-dimensional bilinear product."""

    __slots__ = ("dim", "basis_labels", "c", "zero")

    def __init__(self, dim: int, c, basis_labels=None, zero=None):
        if dim < 1:
            raise ValueError(f"dimension must be positive, got {dim}")
        if basis_labels is None:
            basis_labels = tuple(f"e{i}" for i in range(dim))
        basis_labels = tuple(basis_labels)
        if len(basis_labels) != dim:
            raise ValueError("basis label count != dim")
        rows = tuple(
            tuple(tuple(entry for entry in vec) for vec in plane) for plane in c
        )
        if len(rows) != dim or any(
            len(plane) != dim or any(len(vec) != dim for vec in plane)
            for plane in rows
        ):
            raise ShapeError("structure constants must be dim x dim x dim")
        if zero is None:
            zero = Scalar.zero()
        object.__setattr__(self, "dim", dim)
        object.__setattr__(self, "basis_labels", basis_labels)
        object.__setattr__(self, "c", rows)
        object.__setattr__(self, "zero", zero)

    def __setattr__(self, name, value):
        raise AttributeError("StructTensor is immutable")

    @classmethod
    def from_constants(cls, dim, constants: dict, basis_labels=None, zero=None):
        """Build from a sparse {(i, j, k): entry} map of nonzero constants."""
        if zero is None:
            zero = Scalar.zero()
        c = [[[zero] * dim for _ in range(dim)] for _ in range(dim)]
        for (i, j, k), value in constants.items():
            c[i][j] = list(c[i][j])
            c[i][j][k] = value
        return cls(dim, c, basis_labels=basis_labels, zero=zero)

    def constants_dict(self) -> dict:
        """Sparse view {(i, j, k): entry} of the nonzero constants."""
        out = {}
        for i in range(self.dim):
            for j in range(self.dim):
                for k in range(self.dim):
                    entry = self.c[i][j][k]
                    if not entry.is_zero():
                        out[(i, j, k)] = entry
        return out

    def is_scalar(self) -> bool:
        return isinstance(self.zero, Scalar)

    def _require_scalar(self, what: str):
        if not self.is_scalar():
            raise EntryKindError(f"{what} requires Scalar entries")

    # -- products ------------------------------------------------------------

    def bracket(self, x, y) -> list:
        """[x, y] for coordinate vectors x, y; bilinear in both arguments."""
        if len(x) != self.dim or len(y) != self.dim:
            raise ShapeError(
                f"coordinate vectors must have length {self.dim}, got {len(x)}, {len(y)}"
            )
        out = [self.zero] * self.dim
        for i, xi in enumerate(x):
            if hasattr(xi, "is_zero") and xi.is_zero():
                continue
            for j, yj in enumerate(y):
                if hasattr(yj, "is_zero") and yj.is_zero():
                    continue
                coeff = xi * yj
                vec = self.c[i][j]
                for k in range(self.dim):
                    if not vec[k].is_zero():
                        out[k] = out[k] + coeff * vec[k]
        return out

    def _bracket_basis_left(self, i: int, w) -> list:
        """[e_i, w] for a coordinate vector w."""
        out = [self.zero] * self.dim
        for j, wj in enumerate(w):
            if wj.is_zero():
                continue
            vec = self.c[i][j]
            for k in range(self.dim):
                if not vec[k].is_zero():
                    out[k] = out[k] + wj * vec[k]
        return out

    def _bracket_basis_right(self, w, k: int) -> list:
        """[w, e_k] for a coordinate vector w."""
        out = [self.zero] * self.dim
        for i, wi in enumerate(w):
            if wi.is_zero():
                continue
            vec = self.c[i][k]
            for m in range(self.dim):
                if not vec[m].is_zero():
                    out[m] = out[m] + wi * vec[m]
        return out

    def leibniz_residual(self, i: int, j: int, k: int) -> list:
        """[e_i,[e_j,e_k]] - [[e_i,e_j],e_k] - [e_j,[e_i,e_k]]; zero iff the
        triple satisfies the Leibniz identity."""
        for idx in (i, j, k):
            if not 0 <= idx < self.dim:
                raise IndexError(f"basis index {idx} out of range")
        t1 = self._bracket_basis_left(i, self.c[j][k])
        t2 = self._bracket_basis_right(self.c[i][j], k)
        t3 = self._bracket_basis_left(j, self.c[i][k])
        return [a - b - c for a, b, c in zip(t1, t2, t3)]

    def leibniz_defects(self) -> list[tuple[int, int, int]]:
        """Triples whose residual is nonzero (empty iff Leibniz)."""
        bad = []
        for i in range(self.dim):
            for j in range(self.dim):
                for k in range(self.dim):
                    if any(not e.is_zero() for e in self.leibniz_residual(i, j, k)):
                        bad.append((i, j, k))
        return bad

    def is_leibniz(self) -> bool:
        return not self.leibniz_defects()

    def is_lie(self) -> bool:
        """Leibniz plus antisymmetry of the structure constants."""
        if not self.is_leibniz():
            return False
        for i in range(self.dim):
            for j in range(self.dim):
                for k in range(self.dim):
                    if not (self.c[i][j][k] + self.c[j][i][k]).is_zero():
                        return False
        return True

    # -- multiplication operators ---------------------------------------------

    def left_mult_matrix(self, x) -> list:
        """Matrix of L_x acting on coordinates: (L_x)_{kj} = sum_i x_i c_{ij}^k."""
        out = [[self.zero] * self.dim for _ in range(self.dim)]
        for i, xi in enumerate(x):
            if xi.is_zero():
                continue
            for j in range(self.dim):
                vec = self.c[i][j]
                for k in range(self.dim):
                    if not vec[k].is_zero():
                        out[k][j] = out[k][j] + xi * vec[k]
        return out

    def right_mult_matrix(self, x) -> list:
        """Matrix of R_x: (R_x)_{ki} = sum_j x_j c_{ij}^k."""
        out = [[self.zero] * self.dim for _ in range(self.dim)]
        for j, xj in enumerate(x):
            if xj.is_zero():
                continue
            for i in range(self.dim):
                vec = self.c[i][j]
                for k in range(self.dim):
                    if not vec[k].is_zero():
                        out[k][i] = out[k][i] + xj * vec[k]
        return out

    def unit_vector(self, i: int) -> list:
        v = [self.zero] * self.dim
        one = Scalar.one() if self.is_scalar() else None
        if one is None:
            raise EntryKindError("unit_vector on symbolic tensor: build explicitly")
        v[i] = one
        return v

    def __eq__(self, other) -> bool:
        if not isinstance(other, StructTensor):
            return NotImplemented
        return (
            self.dim == other.dim
            and self.basis_labels == other.basis_labels
            and self.c == other.c
        )

    def __hash__(self):
        return hash((self.dim, self.basis_labels))

    def __repr__(self):
        kind = "Scalar" if self.is_scalar() else "PolyQ"
        return f"StructTensor(dim={self.dim}, entries={kind})"


@dataclass(frozen=True)
class Subspace:
    """Subspace of F^n in reduced echelon form (canonical representative)."""

    ambient_dim: int
    rows: tuple

    @classmethod
    def span(cls, vectors, ambient_dim: int) -> Subspace:
        vectors = [list(v) for v in vectors]
        for v in vectors:
            if len(v) != ambient_dim:
                raise ShapeError("vector length != ambient dimension")
        if not vectors:
            return cls(ambient_dim, ())
        red, pivots = linalg.rref(vectors)
        rows = tuple(tuple(red[i]) for i in range(len(pivots)))
        return cls(ambient_dim, rows)

    @classmethod
    def zero(cls, ambient_dim: int) -> Subspace:
        return cls(ambient_dim, ())

    @classmethod
    def full(cls, ambient_dim: int) -> Subspace:
        return cls.span(linalg.identity(ambient_dim), ambient_dim)

    @property
    def dim(self) -> int:
        return len(self.rows)

    def basis_vectors(self) -> list:
        return [list(row) for row in self.rows]

    def contains(self, v) -> bool:
        if len(v) != self.ambient_dim:
            raise ShapeError("vector length != ambient dimension")
        if linalg.is_zero_vector(list(v)):
            return True
        stacked = self.basis_vectors() + [list(v)]
        return linalg.rank(stacked) == self.dim

    def is_contained_in(self, other: Subspace) -> bool:
        return all(other.contains(list(row)) for row in self.rows)

    def sum(self, other: Subspace) -> Subspace:
        if self.ambient_dim != other.ambient_dim:
            raise ShapeError("ambient dimension mismatch")
        return Subspace.span(
            self.basis_vectors() + other.basis_vectors(), self.ambient_dim
        )


@dataclass(frozen=True)
class ClosureChecks:
    is_subalgebra: bool
    is_left_ideal: bool
    is_two_sided_ideal: bool


@dataclass(frozen=True)
class Fingerprint:
    """Isomorphism-invariant summary; a necessary-condition separator only."""

    dim: int
    derived_dims: tuple
    lower_central_dims: tuple
    ann_left_dim: int
    center_dim: int
    is_lie: bool
    is_solvable: bool
    is_nilpotent: bool


def bracket_span(t: StructTensor, a: Subspace, b: Subspace) -> Subspace:
    """span([u, v] : u in basis(a), v in basis(b)); complete by bilinearity."""
    vectors = []
    for u in a.basis_vectors():
        for v in b.basis_vectors():
            w = t.bracket(u, v)
            if not linalg.is_zero_vector(w):
                vectors.append(w)
    return Subspace.span(vectors, t.dim)


def _series(t: StructTensor, step) -> list[Subspace]:
    """Shared shape of both series: iterate until zero or stabilization.

    The returned list starts at [L, L]; a stabilized nonzero term appears
    twice at the end, a vanishing series ends with the zero subspace.
    """
    t._require_scalar("series computation")
    full = Subspace.full(t.dim)
    current = bracket_span(t, full, full)
    terms = [current]
    while current.dim > 0:
        nxt = step(current)
        terms.append(nxt)
        if nxt == current:
            break
        current = nxt
    return terms


def derived_series(t: StructTensor) -> list[Subspace]:
    """[L,L], [[L,L],[L,L]], ...; reaches zero iff the algebra is solvable."""
    return _series(t, lambda w: bracket_span(t, w, w))


def lower_central_series(t: StructTensor) -> list[Subspace]:
    """[L,L], [L,[L,L]], ...; reaches zero iff the algebra is nilpotent."""
    full = Subspace.full(t.dim)
    return _series(t, lambda w: bracket_span(t, full, w))


def is_solvable(t: StructTensor) -> bool:
    return derived_series(t)[-1].dim == 0


def is_nilpotent_algebra(t: StructTensor) -> bool:
    return lower_central_series(t)[-1].dim == 0


def left_annihilator(t: StructTensor) -> Subspace:
    """{x : [x, y] = 0 for all y}, as the nullspace of x -> (sum_i x_i c_{ij}^k)."""
    t._require_scalar("left annihilator")
    rows = []
    for j in range(t.dim):
        for k in range(t.dim):
            rows.append([t.c[i][j][k] for i in range(t.dim)])
    return Subspace.span(linalg.nullspace(rows), t.dim)


def center(t: StructTensor) -> Subspace:
    """{x : [x, y] = 0 = [y, x] for all y}."""
    t._require_scalar("center")
    rows = []
    for j in range(t.dim):
        for k in range(t.dim):
            rows.append([t.c[i][j][k] for i in range(t.dim)])
            rows.append([t.c[j][i][k] for i in range(t.dim)])
    return Subspace.span(linalg.nullspace(rows), t.dim)


def element_nilpotent(t: StructTensor, x) -> bool:
    """True iff both multiplication operators L_x and R_x are nilpotent."""
    t._require_scalar("element nilpotency")
    from .certify import matrix_nilpotent

    return matrix_nilpotent(t.left_mult_matrix(x)) and matrix_nilpotent(
        t.right_mult_matrix(x)
    )


def change_basis(t: StructTensor, p, basis_labels=None) -> StructTensor:
    """Tensor of the same algebra under the coordinate map P.

    P sends old coordinates to new ones, so the defining property is
    bracket_new(Px, Py) = P bracket_old(x, y); equivalently the m-th new
    basis vector has old coordinates given by column m of P^{-1}.
    """
    t._require_scalar("change of basis")
    q = linalg.inverse(p)
    return _change_basis_with_inverse(t, p, q, basis_labels)


def _change_basis_with_inverse(t: StructTensor, p, q, basis_labels=None) -> StructTensor:
    n = t.dim
    if linalg.shape(p) != (n, n) or linalg.shape(q) != (n, n):
        raise ShapeError("change of basis matrix has wrong shape")
    cols = [[q[i][m] for i in range(n)] for m in range(n)]
    c = []
    for m in range(n):
        plane = []
        for l in range(n):
            w = t.bracket(cols[m], cols[l])
            plane.append(linalg.mat_vec(p, w))
        c.append(plane)
    return StructTensor(
        n, c, basis_labels=basis_labels or t.basis_labels, zero=t.zero
    )


def basis_rows_to_coordinate_map(rows) -> list:
    """Coordinate map P for a new basis given by rows (new basis in old
    coordinates): P = (M^T)^{-1}."""
    return linalg.inverse(linalg.transpose(rows))


def subspace_closure_checks(t: StructTensor, w: Subspace) -> ClosureChecks:
    """Subalgebra / left-ideal / two-sided-ideal membership checks."""
    t._require_scalar("closure checks")
    if w.ambient_dim != t.dim:
        raise ShapeError("subspace ambient dimension != tensor dimension")
    basis = w.basis_vectors()
    full = [t.unit_vector(i) for i in range(t.dim)]
    sub = all(w.contains(t.bracket(u, v)) for u in basis for v in basis)
    left = all(w.contains(t.bracket(x, v)) for x in full for v in basis)
    right = all(w.contains(t.bracket(v, x)) for v in basis for x in full)
    return ClosureChecks(
        is_subalgebra=sub,
        is_left_ideal=left,
        is_two_sided_ideal=left and right,
    )


def fingerprint(t: StructTensor) -> Fingerprint:
    """Invariant record; equal algebras in different bases get equal records."""
    derived = derived_series(t)
    lower = lower_central_series(t)
    return Fingerprint(
        dim=t.dim,
        derived_dims=tuple(s.dim for s in derived),
        lower_central_dims=tuple(s.dim for s in lower),
        ann_left_dim=left_annihilator(t).dim,
        center_dim=center(t).dim,
        is_lie=t.is_lie(),
        is_solvable=derived[-1].dim == 0,
        is_nilpotent=lower[-1].dim == 0,
    )

"""Heisenberg algebras H(n) and their solvable extensions.

H(n) is the (2n+1)-dimensional nilpotent Lie algebra with [P_i, B_j] =
-[B_j, P_i] = delta_ij H and central H.  An ExtensionSpec holds the data
(n, f, a, X, rho, r) of a solvable extension by elements S_1..S_f whose
left and right actions on H(n) are the block matrices

    L_S = diag(2a, aI + X),    R_S = ((-2a, 0), (rho, -aI - X)),

with X in sp(2n) (so X K + K X^T = 0 for K = ((0, I), (-I, 0))).  The
displayed action matrices multiply the basis column (H, P, B)^T: row i
lists the coefficients of the bracket of S with the i-th basis element.

Built tensors use the basis order (S_1..S_f, H, P_1..P_n, B_1..B_n).
build_extension validates every side condition eagerly and refuses
invalid data rather than assembling a non-Leibniz product.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

from . import linalg
from .algebra import StructTensor, Subspace
from .linalg import ShapeError
from .scalars import Scalar


class ExtensionValidationError(ValueError):
    """Base class for extension-data validation failures."""

    code = "validation-error"


class FBoundViolation(ExtensionValidationError):
    code = "f-bound-violation"


class SymplecticViolation(ExtensionValidationError):
    code = "symplectic-violation"


class CommutationViolation(ExtensionValidationError):
    code = "commutation-violation"


class ANormalizationViolation(ExtensionValidationError):
    code = "a-normalization-violation"


class NullspaceViolation(ExtensionValidationError):
    code = "nullspace-violation"


class NilindependenceViolation(ExtensionValidationError):
    code = "nilindependence-violation"


class NilindependenceUndecidedWarning(UserWarning):
    """Nilindependence could not be decided at the implemented scale."""


def heisenberg(n: int) -> StructTensor:
    """H(n) in the basis (H, P_1..P_n, B_1..B_n)."""
    if n < 1:
        raise ValueError(f"H(n) needs n >= 1, got {n}")
    dim = 2 * n + 1
    one = Scalar.one()
    constants = {}
    for i in range(n):
        p, b = 1 + i, 1 + n + i
        constants[(p, b, 0)] = one
        constants[(b, p, 0)] = -one
    labels = ["H"] + [f"P{i + 1}" for i in range(n)] + [f"B{i + 1}" for i in range(n)]
    return StructTensor.from_constants(dim, constants, basis_labels=labels)


def standard_symplectic_form(n: int):
    """K = ((0, I_n), (-I_n, 0))."""
    zero, one = Scalar.zero(), Scalar.one()
    k = [[zero] * (2 * n) for _ in range(2 * n)]
    for i in range(n):
        k[i][n + i] = one
        k[n + i][i] = -one
    return k


def symplectic_check(x, n: int) -> bool:
    """True iff X K + K X^T = 0, i.e. X lies in sp(2n)."""
    if linalg.shape(x) != (2 * n, 2 * n):
        raise ShapeError(f"expected a {2 * n}x{2 * n} matrix")
    k = standard_symplectic_form(n)
    residual = linalg.mat_add(
        linalg.mat_mul(x, k), linalg.mat_mul(k, linalg.transpose(x))
    )
    return linalg.is_zero_matrix(residual)


def eigenvector_check(x, rho, a) -> bool:
    """True iff X rho = a rho (vacuously true for rho = 0)."""
    if linalg.shape(x)[1] != len(rho):
        raise ShapeError("matrix and vector sizes disagree")
    a = linalg.to_scalar(a)
    image = linalg.mat_vec(x, list(rho))
    return all((u - a * v).is_zero() for u, v in zip(image, rho))


def max_extension_bound(n: int) -> int:
    """Largest number of appended generators: f <= n + 1."""
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    return n + 1


def extension_basis_labels(n: int, f: int) -> list[str]:
    return (
        [f"S{al + 1}" for al in range(f)]
        + ["H"]
        + [f"P{i + 1}" for i in range(n)]
        + [f"B{i + 1}" for i in range(n)]
    )


@dataclass(frozen=True)
class ExtensionSpec:
    """Data (n, f, a, X, rho, r) of a Heisenberg extension.

    a is the list of H-eigenvalue halves (the 2a entries), X the sp(2n)
    action matrices, rho the right-action columns (stored even when forced
    to zero), r the coefficients of [S_alpha, S_beta] = r_ab H.
    """

    n: int
    f: int
    a: tuple
    X: tuple
    rho: tuple
    r: tuple

    @classmethod
    def make(cls, n: int, f: int, a, X, rho=None, r=None) -> ExtensionSpec:
        a = tuple(linalg.to_scalar(v) for v in a)
        X = tuple(tuple(tuple(linalg.to_scalar(v) for v in row) for row in m) for m in X)
        if rho is None:
            rho = [[0] * (2 * n) for _ in range(f)]
        rho = tuple(tuple(linalg.to_scalar(v) for v in vec) for vec in rho)
        if r is None:
            r = [[0] * f for _ in range(f)]
        r = tuple(tuple(linalg.to_scalar(v) for v in row) for row in r)
        return cls(n=n, f=f, a=a, X=X, rho=rho, r=r)

    def x_matrix(self, al: int):
        return [list(row) for row in self.X[al]]

    def rho_vector(self, al: int):
        return list(self.rho[al])

    def r_matrix(self):
        return [list(row) for row in self.r]

    def dim(self) -> int:
        return 2 * self.n + 1 + self.f

    def _check_shapes(self) -> None:
        n, f = self.n, self.f
        if n < 1:
            raise ValueError(f"n must be >= 1, got {n}")
        if len(self.a) != f or len(self.X) != f or len(self.rho) != f:
            raise ShapeError("a, X, rho must each have f entries")
        for m in self.X:
            if len(m) != 2 * n or any(len(row) != 2 * n for row in m):
                raise ShapeError(f"X matrices must be {2 * n}x{2 * n}")
        for vec in self.rho:
            if len(vec) != 2 * n:
                raise ShapeError(f"rho vectors must have length {2 * n}")
        if len(self.r) != f or any(len(row) != f for row in self.r):
            raise ShapeError("r must be f x f")

    def validate(self) -> None:
        """Enforce every side condition; raises a named violation."""
        self._check_shapes()
        n, f = self.n, self.f
        if not 1 <= f <= max_extension_bound(n):
            raise FBoundViolation(f"f = {f} outside 1..{max_extension_bound(n)}")
        for al in range(f):
            if not symplectic_check(self.x_matrix(al), n):
                raise SymplecticViolation(f"X_{al + 1} is not in sp({2 * n})")
        for al in range(f):
            for be in range(al + 1, f):
                xa, xb = self.x_matrix(al), self.x_matrix(be)
                if not linalg.mat_eq(linalg.mat_mul(xa, xb), linalg.mat_mul(xb, xa)):
                    raise CommutationViolation(
                        f"X_{al + 1} and X_{be + 1} do not commute"
                    )
        zero, one = Scalar.zero(), Scalar.one()
        if self.a[0] not in (zero, one):
            raise ANormalizationViolation(f"a_1 must be 0 or 1, got {self.a[0]}")
        for al in range(1, f):
            if self.a[al] != zero:
                raise ANormalizationViolation(f"a_{al + 1} must be 0")
        if self.a[0] == one:
            if any(not v.is_zero() for vec in self.rho for v in vec):
                raise ANormalizationViolation("a_1 = 1 forces rho = 0")
            if any(not v.is_zero() for row in self.r for v in row):
                raise ANormalizationViolation("a_1 = 1 forces r = 0")
        else:
            # a = 0: left-right action commutation forces X_al rho_be = 0 for
            # every pair, not only the own-nullspace condition.
            for al in range(f):
                for be in range(f):
                    if not eigenvector_check(self.x_matrix(al), self.rho_vector(be), 0):
                        raise NullspaceViolation(
                            f"rho_{be + 1} is not in the nullspace of X_{al + 1}"
                        )
        self._validate_nilindependence()

    def _validate_nilindependence(self) -> None:
        from .certify import matrix_nilpotent, sp2_nilpotency_locus

        start = 1 if self.a[0] == Scalar.one() else 0
        needed = [self.x_matrix(al) for al in range(start, self.f)]
        names = [f"X_{al + 1}" for al in range(start, self.f)]
        for name, m in zip(names, needed):
            if matrix_nilpotent(m):
                raise NilindependenceViolation(
                    f"{name} is nilpotent, so the appended generators are not "
                    "linearly nilindependent and the nilradical would grow"
                )
        if len(needed) <= 1:
            return
        if len(needed) == 2 and self.n == 1:
            locus = sp2_nilpotency_locus(needed[0], needed[1])
            if not locus.nilindependent_over_R:
                raise NilindependenceViolation(
                    f"{names[0]}, {names[1]} admit the nilpotent combination "
                    f"{locus.witness}"
                )
            return
        warnings.warn(
            "nilindependence of more than one matrix is only decided at n = 1; "
            "single-matrix checks passed, completeness undecided at this scale",
            NilindependenceUndecidedWarning,
            stacklevel=3,
        )


def assemble_extension(spec: ExtensionSpec) -> StructTensor:
    """Assemble the tensor without validation (test hook; prefer
    build_extension)."""
    spec._check_shapes()
    n, f = spec.n, spec.f
    dim = spec.dim()
    idx_h = f

    def pb(u: int) -> int:
        return f + 1 + u

    one = Scalar.one()
    two = Scalar.rational(2)
    constants = {}
    for i in range(n):
        constants[(pb(i), pb(n + i), idx_h)] = one
        constants[(pb(n + i), pb(i), idx_h)] = -one
    for al in range(f):
        a = spec.a[al]
        x = spec.X[al]
        rho = spec.rho[al]
        if not a.is_zero():
            constants[(al, idx_h, idx_h)] = two * a
            constants[(idx_h, al, idx_h)] = -(two * a)
        for u in range(2 * n):
            for v in range(2 * n):
                entry = x[u][v] + (a if u == v else Scalar.zero())
                if not entry.is_zero():
                    constants[(al, pb(u), pb(v))] = entry
                    constants[(pb(u), al, pb(v))] = -entry
            if not rho[u].is_zero():
                constants[(pb(u), al, idx_h)] = rho[u]
        for be in range(f):
            if not spec.r[al][be].is_zero():
                constants[(al, be, idx_h)] = spec.r[al][be]
    return StructTensor.from_constants(
        dim, constants, basis_labels=extension_basis_labels(n, f)
    )


def build_extension(spec: ExtensionSpec) -> StructTensor:
    """Validate the spec and assemble its structure tensor."""
    spec.validate()
    return assemble_extension(spec)


def heisenberg_subspace(n: int, f: int) -> Subspace:
    """The H(n) subspace (span of H, P, B) inside a built extension."""
    dim = 2 * n + 1 + f
    rows = [linalg.identity(dim)[i] for i in range(f, dim)]
    return Subspace.span(rows, dim)


def left_action_display(t: StructTensor, n: int, f: int, al: int):
    """The (2n+1)x(2n+1) matrix of [S_al, -] in display form: row i holds the
    (H, P, B)-coefficients of the bracket with the i-th nilradical element."""
    return _action_display(t, n, f, al, left=True)


def right_action_display(t: StructTensor, n: int, f: int, al: int):
    return _action_display(t, n, f, al, left=False)


def _action_display(t: StructTensor, n: int, f: int, al: int, left: bool):
    if t.dim != 2 * n + 1 + f:
        raise ShapeError("tensor dimension does not match (n, f)")
    if not 0 <= al < f:
        raise IndexError(f"generator index {al} out of range")
    s = t.unit_vector(al)
    rows = []
    for i in range(f, t.dim):
        e = t.unit_vector(i)
        w = t.bracket(s, e) if left else t.bracket(e, s)
        if any(not w[j].is_zero() for j in range(f)):
            raise ValueError("bracket leaves the nilradical; not extension-shaped")
        rows.append(w[f:])
    return rows


def extract_extension_data(t: StructTensor, n: int, f: int) -> ExtensionSpec:
    """Recover (a, X, rho, r) from a built tensor (round-trip of the block
    forms)."""
    a, xs, rhos = [], [], []
    for al in range(f):
        disp = left_action_display(t, n, f, al)
        a_al = disp[0][0] / Scalar.rational(2)
        for j in range(1, 2 * n + 1):
            if not disp[0][j].is_zero() or not disp[j][0].is_zero():
                raise ValueError("left action is not in the block normal form")
        x = [[disp[1 + u][1 + v] - (a_al if u == v else Scalar.zero())
              for v in range(2 * n)] for u in range(2 * n)]
        rdisp = right_action_display(t, n, f, al)
        rho = [rdisp[1 + u][0] for u in range(2 * n)]
        a.append(a_al)
        xs.append(x)
        rhos.append(rho)
    r = []
    for al in range(f):
        row = []
        for be in range(f):
            w = t.bracket(t.unit_vector(al), t.unit_vector(be))
            if any(not w[j].is_zero() for j in list(range(f)) + list(range(f + 1, t.dim))):
                raise ValueError("[S,S] is not a multiple of H")
            row.append(w[f])
        r.append(row)
    return ExtensionSpec.make(n, f, a, xs, rhos, r)

"""Symbolic re-derivation of the extension constraints.

parametric_extension builds the fully generic extension of H(n) by f
elements: the Heisenberg products are numeric, every entry of the generic
left/right action matrices (a, b, sigma, tau, gamma, rho, A..N) and of
[S_a, S_b] = r H + mu P + nu B is its own indeterminate.  The cascade then
replays the derivation:

    gamma_eliminate -> jacobi table -> annihilator products -> commutation
    -> the S1-triple identity on r (arar)

Each stage computes residual polynomials, extracts the linearly forced
bindings (verified by re-substitution), and substitutes them into the
tensor.  Bilinear residuals (commutators of the X blocks, the eigenvector
system X rho = a rho, the arar combination) are reported as side
conditions, never solved.  Two normalizations the derivation states
without displaying are applied as explicit named binding steps, justified
by a symbolic change of basis that is performed and checked on the spot:
the a-vector normalization (a_1 in {0, 1}, a_2 = ... = 0) and, in the
a_1 = 1 branch, the H-shear that clears the leftover r_1b.

The Jacobi residual here is oriented as [[x,y],z] + [y,[x,z]] - [x,[y,z]]
so that reported polynomials carry the signs of the worked derivation
(the (S, P, H) residual is literally the monomial sigma2).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from . import linalg
from .algebra import StructTensor, _change_basis_with_inverse
from .heisenberg import extension_basis_labels
from .poly import PolyQ

HALF = Fraction(1, 2)


class CascadeError(ValueError):
    """Constraint-engine failure."""


class OrderingError(CascadeError):
    """A stage was invoked before its prerequisite stages."""


class InconsistencyError(CascadeError):
    """Extraction produced contradictory bindings."""


# Elimination preference: lower rank is bound first; survivors of the
# derivation (a, A, C, D, rho, r) rank last so bindings eliminate the
# right-action and auxiliary names the way the derivation does.
_PRIORITY = {
    "sigma1": 0, "sigma2": 0, "tau1": 0, "tau2": 0, "gamma1": 0, "gamma2": 0,
    "mu": 0, "nu": 0,
    "G": 1, "M": 1, "N": 2, "E": 3, "F": 4, "b": 5,
    "rho1": 6, "rho2": 6, "r": 7, "C": 8, "D": 8, "A": 9, "a": 10,
}


def _prefix(name: str) -> str:
    return name.split("_", 1)[0]


@dataclass(frozen=True)
class ConstraintReport:
    """Residual polynomials of one identity, with any forced bindings."""

    source: str
    residual_polys: tuple
    forced: tuple = ()

    def nonzero(self) -> bool:
        return any(not p.is_zero() for _, p in self.residual_polys)


@dataclass(frozen=True)
class StageRecord:
    name: str
    reports: tuple
    bindings: tuple


@dataclass(frozen=True)
class ParamAlgebra:
    """Parametric tensor plus the replayable history of applied bindings."""

    n: int
    f: int
    params: tuple
    tensor: StructTensor
    applied: tuple = ()

    def stage_names(self) -> tuple:
        return tuple(name for name, _ in self.applied)

    def bindings_in_order(self) -> list:
        out = []
        for _, bindings in self.applied:
            out.extend(bindings)
        return out

    def final_bindings(self) -> dict:
        """Accumulated bindings with later bindings substituted into earlier
        right-hand sides (the reduced, order-independent form)."""
        raw = dict(self.bindings_in_order())
        changed = True
        while changed:
            changed = False
            for name, rhs in raw.items():
                reduced = rhs.substitute(
                    {k: v for k, v in raw.items() if k != name}
                )
                if reduced != rhs:
                    raw[name] = reduced
                    changed = True
        return raw

    def free_params(self) -> tuple:
        bound = {name for name, _ in self.bindings_in_order()}
        return tuple(p for p in self.params if p not in bound)


def _param_names(n: int, f: int) -> tuple:
    names: list[str] = []
    for al in range(1, f + 1):
        names.append(f"a_{al}")
        names.append(f"b_{al}")
        for base in ("sigma1", "sigma2", "tau1", "tau2", "gamma1", "gamma2",
                     "rho1", "rho2"):
            for i in range(1, n + 1):
                names.append(f"{base}_{al}_{i}")
        for base in ("A", "C", "D", "E", "F", "G", "M", "N"):
            for i in range(1, n + 1):
                for j in range(1, n + 1):
                    names.append(f"{base}_{al}_{i}_{j}")
    for al in range(1, f + 1):
        for be in range(1, f + 1):
            names.append(f"r_{al}_{be}")
    for al in range(1, f + 1):
        for be in range(1, f + 1):
            for i in range(1, n + 1):
                names.append(f"mu_{al}_{be}_{i}")
                names.append(f"nu_{al}_{be}_{i}")
    return tuple(names)


def parametric_extension(n: int, f: int) -> ParamAlgebra:
    """The generic extension tensor of H(n) by S_1..S_f, all slots symbolic."""
    if n < 1:
        raise CascadeError(f"n must be >= 1, got {n}")
    if not 1 <= f <= n + 1:
        raise CascadeError(f"f = {f} outside 1..{n + 1}")
    names = _param_names(n, f)
    zero = PolyQ.zero(names)
    one = PolyQ.const(names, 1)

    def var(nm: str) -> PolyQ:
        return PolyQ.var(names, nm)

    dim = 2 * n + 1 + f
    idx_h = f

    def p_(i: int) -> int:  # i is 1-based
        return f + 1 + (i - 1)

    def b_(i: int) -> int:
        return f + 1 + n + (i - 1)

    constants: dict = {}
    for i in range(1, n + 1):
        constants[(p_(i), b_(i), idx_h)] = one
        constants[(b_(i), p_(i), idx_h)] = -one
    for al in range(1, f + 1):
        s = al - 1
        a = var(f"a_{al}")
        bvar = var(f"b_{al}")
        constants[(s, idx_h, idx_h)] = 2 * a
        constants[(idx_h, s, idx_h)] = 2 * bvar
        for j in range(1, n + 1):
            constants[(s, idx_h, p_(j))] = var(f"sigma1_{al}_{j}")
            constants[(s, idx_h, b_(j))] = var(f"sigma2_{al}_{j}")
            constants[(idx_h, s, p_(j))] = var(f"tau1_{al}_{j}")
            constants[(idx_h, s, b_(j))] = var(f"tau2_{al}_{j}")
        for i in range(1, n + 1):
            constants[(s, p_(i), idx_h)] = var(f"gamma1_{al}_{i}")
            constants[(s, b_(i), idx_h)] = var(f"gamma2_{al}_{i}")
            constants[(p_(i), s, idx_h)] = var(f"rho1_{al}_{i}")
            constants[(b_(i), s, idx_h)] = var(f"rho2_{al}_{i}")
            for j in range(1, n + 1):
                delta = one if i == j else zero
                constants[(s, p_(i), p_(j))] = a * delta + var(f"A_{al}_{i}_{j}")
                constants[(s, p_(i), b_(j))] = var(f"C_{al}_{i}_{j}")
                constants[(s, b_(i), p_(j))] = var(f"D_{al}_{i}_{j}")
                constants[(s, b_(i), b_(j))] = a * delta + var(f"E_{al}_{i}_{j}")
                constants[(p_(i), s, p_(j))] = bvar * delta + var(f"F_{al}_{i}_{j}")
                constants[(p_(i), s, b_(j))] = var(f"G_{al}_{i}_{j}")
                constants[(b_(i), s, p_(j))] = var(f"M_{al}_{i}_{j}")
                constants[(b_(i), s, b_(j))] = bvar * delta + var(f"N_{al}_{i}_{j}")
    for al in range(1, f + 1):
        for be in range(1, f + 1):
            constants[(al - 1, be - 1, idx_h)] = var(f"r_{al}_{be}")
            for i in range(1, n + 1):
                constants[(al - 1, be - 1, p_(i))] = var(f"mu_{al}_{be}_{i}")
                constants[(al - 1, be - 1, b_(i))] = var(f"nu_{al}_{be}_{i}")

    tensor = StructTensor.from_constants(
        dim, constants, basis_labels=extension_basis_labels(n, f), zero=zero
    )
    return ParamAlgebra(n=n, f=f, params=names, tensor=tensor)


def substitute_tensor(t: StructTensor, bindings: dict) -> StructTensor:
    c = [
        [[entry.substitute(bindings) for entry in vec] for vec in plane]
        for plane in t.c
    ]
    return StructTensor(t.dim, c, basis_labels=t.basis_labels, zero=t.zero)


def _reduce_binding_map(raw: dict) -> dict:
    """Substitute the bindings into each other's right-hand sides until no
    bound name remains on a right-hand side (the system is triangular)."""
    for _ in range(len(raw) + 1):
        changed = False
        for name, rhs in raw.items():
            reduced = rhs.substitute({k: v for k, v in raw.items() if k != name})
            if reduced != rhs:
                raw[name] = reduced
                changed = True
        if not changed:
            return raw
    raise InconsistencyError("cyclic bindings did not reduce")


def apply_bindings(pa: ParamAlgebra, stage: str, bindings) -> ParamAlgebra:
    bindings = tuple(bindings)
    if not bindings:
        return ParamAlgebra(
            n=pa.n, f=pa.f, params=pa.params, tensor=pa.tensor,
            applied=pa.applied + ((stage, ()),),
        )
    reduced = _reduce_binding_map(dict(bindings))
    bindings = tuple(sorted(reduced.items()))
    tensor = substitute_tensor(pa.tensor, reduced)
    return ParamAlgebra(
        n=pa.n, f=pa.f, params=pa.params, tensor=tensor,
        applied=pa.applied + ((stage, bindings),),
    )


def replay(pa: ParamAlgebra) -> ParamAlgebra:
    """Re-apply the recorded bindings to a fresh parametric extension."""
    fresh = parametric_extension(pa.n, pa.f)
    for stage, bindings in pa.applied:
        fresh = apply_bindings(fresh, stage, bindings)
    return fresh


# -- basis-index helpers ------------------------------------------------------


def _kind(pa: ParamAlgebra, i: int) -> str:
    if i < pa.f:
        return "S"
    if i == pa.f:
        return "H"
    if i <= pa.f + pa.n:
        return "P"
    return "B"


def _label(pa: ParamAlgebra, i: int) -> str:
    return pa.tensor.basis_labels[i]


def triple_label(pa: ParamAlgebra, i: int, j: int, k: int) -> str:
    return "{" + ",".join(_label(pa, x) for x in (i, j, k)) + "}"


def jacobi_vector(t: StructTensor, i: int, j: int, k: int) -> list:
    """[[e_i,e_j],e_k] + [e_j,[e_i,e_k]] - [e_i,[e_j,e_k]] componentwise."""
    t1 = t._bracket_basis_right(t.c[i][j], k)
    t2 = t._bracket_basis_left(j, t.c[i][k])
    t3 = t._bracket_basis_left(i, t.c[j][k])
    return [x + y - z for x, y, z in zip(t1, t2, t3)]


def _report_from_vector(pa: ParamAlgebra, source: str, vec) -> ConstraintReport:
    polys = tuple(
        (_label(pa, comp), p) for comp, p in enumerate(vec) if not p.is_zero()
    )
    return ConstraintReport(source=source, residual_polys=polys)


def jacobi_residual_system(pa: ParamAlgebra, triples=None) -> list:
    """Jacobi residual reports; all dim^3 basis triples by default."""
    t = pa.tensor
    if triples is None:
        triples = [
            (i, j, k)
            for i in range(t.dim)
            for j in range(t.dim)
            for k in range(t.dim)
        ]
    reports = []
    for (i, j, k) in triples:
        vec = jacobi_vector(t, i, j, k)
        if any(not p.is_zero() for p in vec):
            reports.append(
                _report_from_vector(pa, "jacobi " + triple_label(pa, i, j, k), vec)
            )
    return reports


_TABLE_ROWS = {
    ("S", "P", "H"): "sigma2=0",
    ("S", "B", "H"): "sigma1=0",
    ("P", "H", "S"): "tau2=0",
    ("B", "H", "S"): "tau1=0",
    ("S", "P", "P"): "C=C^T",
    ("S", "B", "B"): "D=D^T",
    ("S", "B", "P"): "E=-A^T",
    ("S", "S", "P"): "nu=0",
    ("S", "S", "B"): "mu=0",
}


def table_row(pa: ParamAlgebra, i: int, j: int, k: int) -> str | None:
    return _TABLE_ROWS.get((_kind(pa, i), _kind(pa, j), _kind(pa, k)))


def table_triples(pa: ParamAlgebra) -> list:
    dim = pa.tensor.dim
    return [
        (i, j, k)
        for i in range(dim)
        for j in range(dim)
        for k in range(dim)
        if table_row(pa, i, j, k) is not None
    ]


# -- extraction ---------------------------------------------------------------


def extract_forced_bindings(reports) -> list:
    """Linearly forced bindings from the reports' residual polynomials.

    A residual that is a nonzero rational multiple of one indeterminate
    forces that name to 0; a residual linear in several names binds the
    preferred name to minus the rest.  Every binding is verified by
    substitution into its source residual; contradictory bindings raise
    InconsistencyError.  Nonlinear residuals pass through untouched.
    """
    found: dict[str, PolyQ] = {}
    for report in reports:
        for _, raw in report.residual_polys:
            # reduce by the bindings already found in this pass, so that a
            # name determined twice through different routes refines the
            # system instead of reporting a spurious contradiction
            poly = raw.substitute(found) if found else raw
            if poly.is_zero():
                continue
            lin = poly.as_linear()
            if lin is None:
                continue
            const, coeffs = lin
            if not coeffs:
                raise InconsistencyError(
                    f"residual of {report.source} is the nonzero constant {const}"
                )
            name = min(
                coeffs, key=lambda nm: (_PRIORITY.get(_prefix(nm), 99), _neg_lex(nm))
            )
            pivot = coeffs[name]
            rhs_terms: dict = {}
            width = len(poly.names)
            zero_exp = (0,) * width
            if const != 0:
                rhs_terms[zero_exp] = -const / pivot
            for other, coeff in coeffs.items():
                if other == name:
                    continue
                exp = [0] * width
                exp[poly.names.index(other)] = 1
                rhs_terms[tuple(exp)] = -coeff / pivot
            rhs = PolyQ(poly.names, rhs_terms)
            if not poly.substitute({name: rhs}).is_zero():
                raise InconsistencyError(f"binding {name} failed re-substitution")
            found[name] = rhs
    return sorted(found.items())


def _neg_lex(name: str):
    # among equal-priority candidates prefer the lexicographically greatest
    # name (binds the lower-triangle entry of a symmetry constraint)
    return tuple(-ord(ch) for ch in name)


def annotate_forced(reports, bindings) -> list:
    """Attach to each report the bindings drawn from names its residuals
    mention; substituting the full binding set annihilates every linear
    residual of an annotated report."""
    bound = dict(bindings)
    out = []
    for report in reports:
        names = {
            name for _, poly in report.residual_polys for name in poly.used_names()
        }
        forced = tuple(sorted((nm, bound[nm]) for nm in names if nm in bound))
        out.append(
            ConstraintReport(
                source=report.source,
                residual_polys=report.residual_polys,
                forced=forced,
            )
        )
    return out


def _fixed_point(pa: ParamAlgebra, stage: str, residual_fn):
    """Extract-substitute until no linear residual remains; returns the new
    ParamAlgebra, the first-round reports (annotated with the bindings they
    forced), and all bindings found."""
    first = None
    all_bindings: list = []
    while True:
        reports = residual_fn(pa)
        if first is None:
            first = reports
        bindings = extract_forced_bindings(reports)
        if not bindings:
            break
        all_bindings.extend(bindings)
        pa = apply_bindings(pa, stage, bindings)
    if not all_bindings:
        pa = apply_bindings(pa, stage, ())
    return pa, annotate_forced(first, all_bindings), all_bindings


# -- gamma elimination --------------------------------------------------------


def gamma_eliminate(pa: ParamAlgebra) -> ParamAlgebra:
    """Change basis to S~ = S + sum(gamma1 B) - sum(gamma2 P), check that the
    H-components of [S~, P] and [S~, B] vanish identically, and return the
    generic form with gamma = 0 recorded as the stage's bindings.

    The shear coefficients are read from the tensor's current H-components,
    so a second call is the identity transformation.
    """
    n, f = pa.n, pa.f
    names = pa.params
    t = pa.tensor
    dim = t.dim
    zero = PolyQ.zero(names)
    one = PolyQ.const(names, 1)

    current = {}
    for al in range(1, f + 1):
        for i in range(1, n + 1):
            current[("gamma1", al, i)] = t.c[al - 1][f + 1 + (i - 1)][f]
            current[("gamma2", al, i)] = t.c[al - 1][f + 1 + n + (i - 1)][f]
    if all(p.is_zero() for p in current.values()):
        return apply_bindings(pa, "gamma_eliminate", ())
    for (base, al, i), p in current.items():
        if p != PolyQ.var(names, f"{base}_{al}_{i}"):
            raise CascadeError(
                "gamma elimination expects the generic tensor (H-components "
                "must be the free gamma indeterminates or zero)"
            )

    def rows_with(sign: int):
        rows = [[one if i == j else zero for j in range(dim)] for i in range(dim)]
        for al in range(1, f + 1):
            for i in range(1, n + 1):
                g1 = current[("gamma1", al, i)]
                g2 = current[("gamma2", al, i)]
                rows[al - 1][f + 1 + (i - 1)] = -sign * g2
                rows[al - 1][f + 1 + n + (i - 1)] = sign * g1
        return rows

    m = rows_with(+1)
    m_inv = rows_with(-1)  # the correction squares to zero
    p_coord = linalg.transpose(m_inv)
    p_inv = linalg.transpose(m)
    changed = _change_basis_with_inverse(t, p_coord, p_inv)
    for al in range(f):
        for u in range(2 * n):
            if not changed.c[al][f + 1 + u][f].is_zero():
                raise CascadeError(
                    "gamma elimination left an H-component in [S, nilradical]"
                )
    bindings = []
    for al in range(1, f + 1):
        for i in range(1, n + 1):
            bindings.append((f"gamma1_{al}_{i}", zero))
            bindings.append((f"gamma2_{al}_{i}", zero))
    direct = substitute_tensor(t, dict(bindings))
    renamed = substitute_tensor(changed, dict(bindings))
    if direct != renamed:
        raise CascadeError("gamma elimination is not a pure reparameterization")
    return apply_bindings(pa, "gamma_eliminate", bindings)


# -- annihilator products -----------------------------------------------------


def annihilator_residual_system(pa: ParamAlgebra) -> list:
    """Residuals of [[S,Y]+[Y,S], Z] over all basis Y, Z, plus the
    right-action closure triples {P_i, B_j, S} and {B_i, P_j, S} that pin
    the lower-right block of R_S."""
    if "jacobi" not in pa.stage_names():
        raise OrderingError("annihilator stage requires the jacobi stage first")
    t = pa.tensor
    f = pa.f
    reports = []
    for al in range(f):
        s = al
        for y in range(t.dim):
            u = [p + q for p, q in zip(t.c[s][y], t.c[y][s])]
            if all(p.is_zero() for p in u):
                continue
            for z in range(t.dim):
                vec = t._bracket_basis_right(u, z)
                if any(not p.is_zero() for p in vec):
                    source = (
                        f"[[{_label(pa, s)},{_label(pa, y)}]+"
                        f"[{_label(pa, y)},{_label(pa, s)}],{_label(pa, z)}]"
                    )
                    reports.append(_report_from_vector(pa, source, vec))
    for al in range(f):
        s = al
        for i in range(pa.n):
            for j in range(pa.n):
                p_i = f + 1 + i
                b_j = f + 1 + pa.n + j
                for (x, y) in ((p_i, b_j), (b_j, p_i)):
                    vec = jacobi_vector(t, x, y, s)
                    if any(not p.is_zero() for p in vec):
                        reports.append(
                            _report_from_vector(
                                pa,
                                "closure jacobi " + triple_label(pa, x, y, s),
                                vec,
                            )
                        )
    return reports


# -- commutation --------------------------------------------------------------


def _current_a(pa: ParamAlgebra, al: int) -> PolyQ:
    return pa.tensor.c[al][pa.f][pa.f] * HALF


def _current_x(pa: ParamAlgebra, al: int) -> list:
    """The sp-block of L_{S_al} read from the tensor: X = block - a I."""
    t = pa.tensor
    n, f = pa.n, pa.f
    a = _current_a(pa, al)
    x = []
    for u in range(2 * n):
        row = []
        for v in range(2 * n):
            entry = t.c[al][f + 1 + u][f + 1 + v]
            if u == v:
                entry = entry - a
            row.append(entry)
        x.append(row)
    return x


def _current_rho(pa: ParamAlgebra, al: int) -> list:
    t = pa.tensor
    return [t.c[pa.f + 1 + u][al][pa.f] for u in range(2 * pa.n)]


def _current_r(pa: ParamAlgebra, al: int, be: int) -> PolyQ:
    return pa.tensor.c[al][be][pa.f]


def _poly_unit(pa: ParamAlgebra, i: int) -> list:
    v = [PolyQ.zero(pa.params)] * pa.tensor.dim
    v[i] = PolyQ.const(pa.params, 1)
    return v


def commutation_residual_system(pa: ParamAlgebra) -> list:
    """Residuals of L_a L_b - L_b L_a and L_a R_b - R_b L_a, plus the
    extracted block forms: the X-commutators and the eigenvector system
    (X - aI) rho."""
    stages = pa.stage_names()
    if "jacobi" not in stages or "annihilator" not in stages:
        raise OrderingError("commutation stage requires jacobi and annihilator")
    t = pa.tensor
    f = pa.f
    reports = []
    lmats = [t.left_mult_matrix(_poly_unit(pa, al)) for al in range(f)]
    rmats = [t.right_mult_matrix(_poly_unit(pa, al)) for al in range(f)]
    for al in range(f):
        for be in range(al + 1, f):
            comm = linalg.mat_sub(
                linalg.mat_mul(lmats[al], lmats[be]),
                linalg.mat_mul(lmats[be], lmats[al]),
            )
            polys = tuple(
                (f"({u},{v})", comm[u][v])
                for u in range(t.dim)
                for v in range(t.dim)
                if not comm[u][v].is_zero()
            )
            if polys:
                reports.append(
                    ConstraintReport(
                        source=f"L_S{al + 1} L_S{be + 1} = L_S{be + 1} L_S{al + 1}",
                        residual_polys=polys,
                    )
                )
            xa, xb = _current_x(pa, al), _current_x(pa, be)
            xcomm = linalg.mat_sub(linalg.mat_mul(xa, xb), linalg.mat_mul(xb, xa))
            polys = tuple(
                (f"({u},{v})", xcomm[u][v])
                for u in range(2 * pa.n)
                for v in range(2 * pa.n)
                if not xcomm[u][v].is_zero()
            )
            if polys:
                reports.append(
                    ConstraintReport(
                        source=f"X{al + 1} X{be + 1} - X{be + 1} X{al + 1}",
                        residual_polys=polys,
                    )
                )
    for al in range(f):
        for be in range(f):
            comm = linalg.mat_sub(
                linalg.mat_mul(lmats[al], rmats[be]),
                linalg.mat_mul(rmats[be], lmats[al]),
            )
            polys = tuple(
                (f"({u},{v})", comm[u][v])
                for u in range(t.dim)
                for v in range(t.dim)
                if not comm[u][v].is_zero()
            )
            if polys:
                reports.append(
                    ConstraintReport(
                        source=f"L_S{al + 1} R_S{be + 1} = R_S{be + 1} L_S{al + 1}",
                        residual_polys=polys,
                    )
                )
            xa = _current_x(pa, al)
            a_al = _current_a(pa, al)
            rho_be = _current_rho(pa, be)
            eig = [
                sum(
                    (xa[u][v] * rho_be[v] for v in range(2 * pa.n)),
                    PolyQ.zero(pa.params),
                )
                - a_al * rho_be[u]
                for u in range(2 * pa.n)
            ]
            polys = tuple(
                (f"[{u}]", eig[u]) for u in range(2 * pa.n) if not eig[u].is_zero()
            )
            if polys:
                reports.append(
                    ConstraintReport(
                        source=f"(X{al + 1} - a_{al + 1} I) rho^{be + 1}",
                        residual_polys=polys,
                    )
                )
    return reports


# -- the S1 triple identity on r ---------------------------------------------


def verify_arar(pa: ParamAlgebra) -> list:
    """The H-coefficient of the Jacobi residual on (S_1, S_a, S_b) equals
    -2 (a_1 r_ab - a_a r_1b + a_b r_1a); verified as a PolyQ identity for
    every pair and reported in normalized form."""
    if pa.f < 2:
        raise CascadeError("the S1 triple identity needs f >= 2")
    stages = pa.stage_names()
    if "annihilator" not in stages:
        raise OrderingError("arar stage requires the annihilator stage first")
    t = pa.tensor
    reports = []
    for al in range(pa.f):
        for be in range(pa.f):
            vec = jacobi_vector(t, 0, al, be)
            raw = vec[pa.f]
            for comp, p in enumerate(vec):
                if comp != pa.f and not p.is_zero():
                    raise CascadeError(
                        "unexpected non-H component in the (S1,S,S) residual"
                    )
            expected = (
                _current_a(pa, 0) * _current_r(pa, al, be)
                - _current_a(pa, al) * _current_r(pa, 0, be)
                + _current_a(pa, be) * _current_r(pa, 0, al)
            )
            if raw != expected * (-2):
                raise CascadeError(
                    f"(S1,S{al + 1},S{be + 1}) residual does not match the "
                    "a-r combination identity"
                )
            normalized = raw * Fraction(-1, 2)
            reports.append(
                ConstraintReport(
                    source=f"arar (S1,S{al + 1},S{be + 1})",
                    residual_polys=(("H", normalized),) if not normalized.is_zero() else (),
                )
            )
    return reports


def _h_shear(pa: ParamAlgebra) -> list:
    """In the a_1 = 1 branch, clear the leftover r_1b by the basis change
    S~_b = S_b - (r_1b / 2) H; returns the resulting bindings r_1b := 0.

    The shear is performed symbolically and checked: it only moves the
    [S_1, S_b] and [S_b, S_1] entries, so recording the binding keeps the
    history replayable.
    """
    names = pa.params
    t = pa.tensor
    dim = t.dim
    zero = PolyQ.zero(names)
    one = PolyQ.const(names, 1)
    bindings = []
    todo = []
    for be in range(1, pa.f):
        r1b = _current_r(pa, 0, be)
        if not r1b.is_zero():
            todo.append((be, r1b))
    if not todo:
        return []

    def rows_with(sign: int):
        rows = [[one if i == j else zero for j in range(dim)] for i in range(dim)]
        for be, r1b in todo:
            rows[be][pa.f] = sign * r1b * Fraction(-1, 2)
        return rows

    m = rows_with(+1)
    m_inv = rows_with(-1)
    changed = _change_basis_with_inverse(t, linalg.transpose(m_inv), linalg.transpose(m))
    for be, _ in todo:
        if not changed.c[0][be][pa.f].is_zero() or not changed.c[be][0][pa.f].is_zero():
            raise CascadeError("H-shear failed to clear [S1, S_b]")
    for be, _ in todo:
        name = f"r_1_{be + 1}"
        bindings.append((name, zero))
    direct = substitute_tensor(t, dict(bindings))
    renamed = substitute_tensor(changed, dict(bindings))
    if direct != renamed:
        raise CascadeError("H-shear is not a pure reparameterization")
    return bindings


# -- cascade driver -----------------------------------------------------------


@dataclass(frozen=True)
class AuditResult:
    triples_checked: int
    zero_residuals: int
    matched: tuple
    unmatched: tuple

    def ok(self) -> bool:
        return not self.unmatched

    def all_zero(self) -> bool:
        return self.ok() and not self.matched


@dataclass(frozen=True)
class CascadeResult:
    n: int
    f: int
    branch: int | None
    pa: ParamAlgebra
    stages: tuple
    side_conditions: tuple
    audit: AuditResult | None

    def stage(self, name: str) -> StageRecord:
        for record in self.stages:
            if record.name == name:
                return record
        raise KeyError(name)

    def final_bindings(self) -> dict:
        return self.pa.final_bindings()


def _monic(p: PolyQ) -> PolyQ:
    lead = p.sorted_terms()[0][1]
    return p * (1 / lead)


def final_residual_audit(pa: ParamAlgebra, side_conditions) -> AuditResult:
    """Check every Jacobi residual of the constrained tensor against the
    side conditions: each nonzero residual polynomial must be a rational
    multiple of a reported side-condition polynomial, so that imposing the
    side conditions makes every residual the zero polynomial."""
    side = {}
    for label, p in side_conditions:
        if not p.is_zero():
            side[_monic(p)] = label
    t = pa.tensor
    matched = []
    unmatched = []
    zero_count = 0
    checked = 0
    for i in range(t.dim):
        for j in range(t.dim):
            for k in range(t.dim):
                checked += 1
                vec = jacobi_vector(t, i, j, k)
                for comp, p in enumerate(vec):
                    if p.is_zero():
                        continue
                    key = _monic(p)
                    label = side.get(key)
                    entry = (
                        triple_label(pa, i, j, k) + "/" + _label(pa, comp),
                        str(p),
                    )
                    if label is None:
                        unmatched.append(entry)
                    else:
                        matched.append(entry + (label,))
                if all(p.is_zero() for p in vec):
                    zero_count += 1
    return AuditResult(
        triples_checked=checked,
        zero_residuals=zero_count,
        matched=tuple(matched),
        unmatched=tuple(unmatched),
    )


def run_cascade(n: int, f: int, branch: int | None = 1) -> CascadeResult:
    """Full derivation: gamma elimination, jacobi table, a-normalization,
    annihilator products, commutation, and (f >= 2) the r identity.

    branch selects the a-normalization: 1 or 0 for a_1, None to keep the
    a's symbolic (then no normalization bindings are applied and the
    final audit is skipped).
    """
    if branch not in (1, 0, None):
        raise CascadeError("branch must be 1, 0, or None")
    pa = parametric_extension(n, f)
    stages: list[StageRecord] = []

    pa = gamma_eliminate(pa)
    stages.append(
        StageRecord(
            name="gamma_eliminate",
            reports=(),
            bindings=pa.applied[-1][1],
        )
    )

    first_full = tuple(jacobi_residual_system(pa))
    pa, _, jac_bindings = _fixed_point(
        pa, "jacobi", lambda q: jacobi_residual_system(q, table_triples(q))
    )
    stages.append(
        StageRecord(
            name="jacobi",
            reports=tuple(annotate_forced(first_full, jac_bindings)),
            bindings=tuple(jac_bindings),
        )
    )

    if branch is not None:
        zero = PolyQ.zero(pa.params)
        one = PolyQ.const(pa.params, 1)
        bindings = [("a_1", one if branch == 1 else zero)]
        for al in range(2, f + 1):
            bindings.append((f"a_{al}", zero))
        pa = apply_bindings(pa, "a_normalize", bindings)
        stages.append(
            StageRecord(name="a_normalize", reports=(), bindings=tuple(bindings))
        )

    ann_first = tuple(annihilator_residual_system(pa))
    pa, _, ann_bindings = _fixed_point(pa, "annihilator", annihilator_residual_system)
    stages.append(
        StageRecord(
            name="annihilator",
            reports=tuple(annotate_forced(ann_first, ann_bindings)),
            bindings=tuple(ann_bindings),
        )
    )

    comm_reports = tuple(commutation_residual_system(pa))
    comm_bindings = extract_forced_bindings(comm_reports)
    if comm_bindings:
        pa = apply_bindings(pa, "commutation", comm_bindings)
    else:
        pa = apply_bindings(pa, "commutation", ())
    stages.append(
        StageRecord(
            name="commutation", reports=comm_reports, bindings=tuple(comm_bindings)
        )
    )

    arar_reports: tuple = ()
    if f >= 2:
        arar_first = tuple(verify_arar(pa))
        pa, _, arar_bindings = _fixed_point(pa, "arar", verify_arar)
        shear = _h_shear(pa) if branch == 1 else []
        if shear:
            pa = apply_bindings(pa, "arar_h_shear", shear)
            arar_bindings = list(arar_bindings) + list(shear)
        arar_reports = tuple(annotate_forced(arar_first, arar_bindings))
        stages.append(
            StageRecord(name="arar", reports=arar_reports, bindings=tuple(arar_bindings))
        )

    side: list = []
    for report in commutation_residual_system(pa):
        if report.source.startswith("X") or report.source.startswith("(X"):
            for comp, p in report.residual_polys:
                side.append((f"{report.source}{comp}", p))
    for report in arar_reports:
        for comp, p in report.residual_polys:
            recomputed = p.substitute(dict(pa.bindings_in_order()))
            if not recomputed.is_zero():
                side.append((report.source, recomputed))

    audit = None
    if branch is not None:
        audit = final_residual_audit(pa, side)
    return CascadeResult(
        n=n,
        f=f,
        branch=branch,
        pa=pa,
        stages=tuple(stages),
        side_conditions=tuple(side),
        audit=audit,
    )


def instantiate(pa: ParamAlgebra, values: dict) -> "StructTensor":
    """Evaluate the parametric tensor at exact scalar values for its free
    parameters; bound parameters take their derived values automatically."""
    from .algebra import StructTensor
    from .linalg import to_scalar

    point = {name: to_scalar(v) for name, v in values.items()}
    missing = {
        name
        for plane in pa.tensor.c
        for vec in plane
        for entry in vec
        for name in entry.used_names()
        if name not in point
    }
    if missing:
        raise CascadeError(f"unbound free parameters: {sorted(missing)}")
    scalar_c = [
        [[entry.evaluate(point) for entry in vec] for vec in plane]
        for plane in pa.tensor.c
    ]
    return StructTensor(
        pa.tensor.dim, scalar_c, basis_labels=pa.tensor.basis_labels
    )


def a_normalize_basis(a_values, n: int):
    """Change-of-basis rows realizing the a-normalization for a concrete
    a-vector: Gaussian elimination on the S-block sends a to (1, 0, ..., 0)
    (or leaves it zero).  Rows are new basis vectors in old coordinates."""
    a = [linalg.to_scalar(v) for v in a_values]
    f = len(a)
    dim = 2 * n + 1 + f
    rows = linalg.identity(dim)
    pivot = next((i for i, v in enumerate(a) if not v.is_zero()), None)
    if pivot is None:
        return rows
    inv = a[pivot].inv()
    s_rows = linalg.identity(f)
    new_first = [x * inv for x in s_rows[pivot]]
    others = [
        [x - a[i] * inv * y for x, y in zip(s_rows[i], s_rows[pivot])]
        for i in range(f)
        if i != pivot
    ]
    block = [new_first] + others
    for i in range(f):
        for j in range(f):
            rows[i][j] = block[i][j]
    return rows

"""Finite groups of invertible rational matrices acting on the variables.

An element with matrix M acts on polynomials by substituting x -> M^{-1} x
and p -> M^T p, so that the pairing <p, x> is preserved.  Reflection data
(the rank of 1 - M and the twisted bivector) drives the smash-product seeds.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import ValidationError
from .poly import Terms, p_add, p_scale, p_subst, p_xvar, p_pvar

Matrix = tuple  # tuple of tuples of Fraction, immutable so it can key dicts


def mat_from_rows(rows) -> Matrix:
    try:
        return tuple(tuple(Fraction(v) for v in row) for row in rows)
    except (ValueError, TypeError) as exc:
        raise ValidationError(f"matrix entries must be rational: {exc}") from exc


def mat_identity(n: int) -> Matrix:
    return tuple(tuple(Fraction(1 if i == j else 0) for j in range(n)) for i in range(n))


def mat_mul(a: Matrix, b: Matrix) -> Matrix:
    n = len(a)
    return tuple(tuple(sum(a[i][k] * b[k][j] for k in range(n)) for j in range(n))
                 for i in range(n))


def mat_sub(a: Matrix, b: Matrix) -> Matrix:
    n = len(a)
    return tuple(tuple(a[i][j] - b[i][j] for j in range(n)) for i in range(n))


def mat_transpose(a: Matrix) -> Matrix:
    n = len(a)
    return tuple(tuple(a[j][i] for j in range(n)) for i in range(n))


def mat_inverse(a: Matrix) -> Matrix:
    n = len(a)
    aug = [list(a[i]) + [Fraction(1 if i == j else 0) for j in range(n)] for i in range(n)]
    for col in range(n):
        piv = next((r for r in range(col, n) if aug[r][col]), None)
        if piv is None:
            raise ValidationError("matrix is not invertible")
        aug[col], aug[piv] = aug[piv], aug[col]
        f = aug[col][col]
        aug[col] = [v / f for v in aug[col]]
        for r in range(n):
            if r != col and aug[r][col]:
                g = aug[r][col]
                aug[r] = [v - g * w for v, w in zip(aug[r], aug[col])]
    return tuple(tuple(row[n:]) for row in aug)


def mat_rank(a: Matrix) -> int:
    rows = [list(r) for r in a]
    n = len(rows)
    rank = 0
    for col in range(n):
        piv = next((r for r in range(rank, n) if rows[r][col]), None)
        if piv is None:
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        f = rows[rank][col]
        rows[rank] = [v / f for v in rows[rank]]
        for r in range(n):
            if r != rank and rows[r][col]:
                g = rows[r][col]
                rows[r] = [v - g * w for v, w in zip(rows[r], rows[rank])]
        rank += 1
    return rank


def check_antisymmetric(pi: Matrix) -> None:
    n = len(pi)
    for i in range(n):
        for j in range(n):
            if pi[i][j] != -pi[j][i]:
                raise ValidationError("bivector matrix must be antisymmetric")


# ---------------------------------------------------------------------------

class MatrixGroup:
    """Closure of rational generator matrices, with multiplication table,
    inverses, conjugacy classes, and a cached polynomial action."""

    def __init__(self, generators, dim: int, max_order: int = 1024):
        self.dim = dim
        gens = [mat_from_rows(g) for g in generators]
        for g in gens:
            if len(g) != dim or any(len(row) != dim for row in g):
                raise ValidationError(f"generator is not {dim}x{dim}")
            mat_inverse(g)  # raises if singular
        elems = {mat_identity(dim)}
        frontier = list(elems)
        while frontier:
            nxt = []
            for e in frontier:
                for g in gens:
                    x = mat_mul(e, g)
                    if x not in elems:
                        elems.add(x)
                        nxt.append(x)
            frontier = nxt
            if len(elems) > max_order:
                raise ValidationError(
                    f"group closure exceeds {max_order} elements; "
                    "infinite or too-large group")
        # canonical order: sort the full matrices; identity index is wherever it lands
        self.elements: list[Matrix] = sorted(elems)
        self.index = {m: i for i, m in enumerate(self.elements)}
        self.identity_index = self.index[mat_identity(dim)]
        self.inverse = [self.index[mat_inverse(m)] for m in self.elements]
        self.mult_table = [[self.index[mat_mul(a, b)] for b in self.elements]
                           for a in self.elements]
        self.inv_matrices = [mat_inverse(m) for m in self.elements]
        self.conjugacy_classes = self._classes()
        self.class_of = {}
        for rep, members in self.conjugacy_classes:
            for m in members:
                self.class_of[m] = rep
        self._act_cache: dict = {}
        self._check_table()

    def __len__(self) -> int:
        return len(self.elements)

    def _classes(self):
        """Brute-force orbits under conjugation; representative = lowest index."""
        seen = set()
        out = []
        for i in range(len(self.elements)):
            if i in seen:
                continue
            orbit = set()
            for a in range(len(self.elements)):
                orbit.add(self.mult_table[self.mult_table[a][i]][self.inverse[a]])
            members = sorted(orbit)
            seen.update(members)
            out.append((members[0], members))
        return out

    def _check_table(self) -> None:
        n = len(self.elements)
        e = self.identity_index
        for a in range(n):
            if self.mult_table[e][a] != a or self.mult_table[a][e] != a:
                raise ValidationError("multiplication table has no proper identity")
            if self.mult_table[a][self.inverse[a]] != e:
                raise ValidationError("multiplication table is missing an inverse")
        if n <= 128:
            for a in range(n):
                for b in range(n):
                    ab = self.mult_table[a][b]
                    for c in range(n):
                        if self.mult_table[ab][c] != self.mult_table[a][self.mult_table[b][c]]:
                            raise ValidationError("multiplication table not associative")

    def act_poly(self, gi: int, a: Terms) -> Terms:
        """Twist a polynomial by element gi: x -> M^{-1} x, p -> M^T p."""
        if gi == self.identity_index:
            return dict(a)
        n = self.dim
        out: Terms = {}
        for m, c in a.items():
            key = (gi, m)
            r = self._act_cache.get(key)
            if r is None:
                M = self.elements[gi]
                Mi = self.inv_matrices[gi]
                x_images = []
                p_images = []
                for i in range(n):
                    xi: Terms = {}
                    for j in range(n):
                        if Mi[i][j]:
                            xi = p_add(xi, p_scale(p_xvar(n, j), Mi[i][j]))
                    x_images.append(xi)
                    pi_: Terms = {}
                    for j in range(n):
                        if M[j][i]:
                            pi_ = p_add(pi_, p_scale(p_pvar(n, j), M[j][i]))
                    p_images.append(pi_)
                r = p_subst({m: Fraction(1)}, x_images, p_images)
                self._act_cache[key] = r
            out = p_add(out, p_scale(r, c))
        return out


def close_group(generators, dim: int, max_order: int = 1024) -> MatrixGroup:
    return MatrixGroup(generators, dim, max_order)


# ---------------------------------------------------------------------------
# reflection data

@dataclass(frozen=True)
class ReflectionData:
    l_gamma: tuple           # per element: rank of (1 - M)
    is_reflection: tuple     # per element: l == 2
    pi_gamma: tuple          # per element: twisted bivector matrix, or None off the reflection set

    def reflections(self):
        return [i for i, r in enumerate(self.is_reflection) if r]


def reflection_scan(group: MatrixGroup, pi) -> ReflectionData:
    """l, reflection flags, and twisted bivectors pi_gamma = (1-M)^T pi (1-M).

    Requires pi antisymmetric and nondegenerate, and every element to
    preserve it: M pi M^T = pi.
    """
    pi = mat_from_rows(pi)
    n = group.dim
    check_antisymmetric(pi)
    if mat_rank(pi) != n:
        raise ValidationError("bivector matrix is degenerate")
    ident = mat_identity(n)
    ls = []
    flags = []
    twisted = []
    for gi, M in enumerate(group.elements):
        if mat_mul(mat_mul(M, pi), mat_transpose(M)) != pi:
            raise ValidationError(f"group element {gi} does not preserve the bivector")
        one_minus = mat_sub(ident, M)
        l = mat_rank(one_minus)
        ls.append(l)
        flags.append(l == 2)
        twisted.append(mat_mul(mat_mul(mat_transpose(one_minus), pi), one_minus)
                       if l == 2 else None)
    return ReflectionData(tuple(ls), tuple(flags), tuple(twisted))


# ---------------------------------------------------------------------------
# class functions on the reflection set

@dataclass(frozen=True)
class ClassFunction:
    values: tuple  # pairs (class representative index, Fraction), reflections only

    def as_dict(self) -> dict:
        return dict(self.values)


def validate_class_function(group: MatrixGroup, refl: ReflectionData, raw: dict) -> ClassFunction:
    """Check constancy on conjugacy classes and support on reflections;
    normalize to class representatives.  Unassigned reflection classes get 0."""
    per_class: dict = {}
    for key, val in raw.items():
        gi = int(key)
        if not 0 <= gi < len(group.elements):
            raise ValidationError(f"element index {gi} out of range")
        if not refl.is_reflection[gi]:
            raise ValidationError(
                f"element {gi} is not a reflection (l = {refl.l_gamma[gi]}); "
                "coefficients live on the reflection set only")
        rep = group.class_of[gi]
        val = Fraction(val)
        if rep in per_class and per_class[rep] != val:
            raise ValidationError(
                f"conflicting values on conjugacy class of element {rep}: "
                f"{per_class[rep]} vs {val}")
        per_class[rep] = val
    values = []
    for rep, _members in group.conjugacy_classes:
        if refl.is_reflection[rep]:
            values.append((rep, per_class.get(rep, Fraction(0))))
    return ClassFunction(tuple(values))


def class_function_on_elements(group: MatrixGroup, cf: ClassFunction) -> dict:
    """Expand a class function to a per-element map over the reflection set."""
    by_rep = cf.as_dict()
    out = {}
    for rep, members in group.conjugacy_classes:
        if rep in by_rep and by_rep[rep]:
            for m in members:
                out[m] = by_rep[rep]
    return out

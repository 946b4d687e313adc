"""Symplectic and unitary similitude groups over small finite fields.

Family C is GSp_{2r}(GF(ell)) acting on a 2r-dimensional space with the
antidiagonal(1..1,-1..-1) symplectic Gram matrix.  Family A is the unitary
similitude group of the identity Hermitian form on GF(ell^2)^r, with
conjugation x -> x^ell; its natural GF(ell)-dimension is also 2r.

Each family carries an explicit maximally anisotropic maximal torus built by
embedding a field multiplication action and changing basis so the standard
form is preserved on the nose:

* family C and family A with r odd: the subgroup of GF(ell^(2r))* whose
  norm down the degree-2 step lands in the prime field, acting by
  multiplication in the regular representation (cyclic of order
  (ell^r + 1)(ell - 1));
* family A with r even: the dual-pair torus preserving a decomposition into
  two maximal isotropic subspaces in duality, one block acting through
  GF(ell^r)* and the other through the similitude-twisted inverse conjugate
  (order (ell^r - 1)(ell - 1), generated by two elements).

Classification of a group element x at level m asks whether x^m is regular
with maximally anisotropic connected centralizer.  The fast path reads this
off the characteristic polynomial; the definitional oracle enumerates the
centralizer and is used to certify the fast path wherever enumeration fits
the budget.  Exact operations never fall back to sampling: over-budget
requests raise BudgetExceeded.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import product
from math import gcd

from .finfield import FFElement, FieldMismatch, FiniteField, is_prime, make_field
from .intpoly import ModPoly, factor_mod, is_irreducible_mod, mod_gcd

MAX_GROUP_SIZE = 10**6
MAX_MATRIX_SPACE = 2 * 10**7
MAX_TORUS_SIZE = 10**7

_EXCEPTIONAL_PRIMES = (2, 3)  # base or quadratic extension lands in F2/F4/F3/F9


class BudgetExceeded(RuntimeError):
    """An exact enumeration would exceed its hard cap."""


class DimensionMismatch(ValueError):
    """Matrix dimensions do not match the group descriptor."""


@dataclass(frozen=True)
class GroupDescriptor:
    """Which finite similitude group a computation lives in.

    family 'C': GSp_{2r} over GF(ell); family 'A': unitary similitudes of
    rank r over GF(ell^2).
    """

    family: str
    r: int
    ell: int

    def __post_init__(self):
        if self.family not in ("A", "C"):
            raise ValueError(f"unknown family {self.family!r}")
        if self.r < 1:
            raise ValueError("rank must be at least 1")
        if not is_prime(self.ell):
            raise ValueError(f"{self.ell} is not prime")

    @property
    def matrix_field(self) -> FiniteField:
        return make_field(self.ell, 2 if self.family == "A" else 1)

    @property
    def matrix_dim(self) -> int:
        return self.r if self.family == "A" else 2 * self.r

    @property
    def natural_dim(self) -> int:
        return 2 * self.r

    @property
    def exceptional_field(self) -> bool:
        """Base field hits one of the small exceptional cases; flagged only."""
        return self.ell in _EXCEPTIONAL_PRIMES

    def __repr__(self):
        name = "GSp" if self.family == "C" else "GU"
        dim = 2 * self.r if self.family == "C" else self.r
        return f"{name}_{dim}(ell={self.ell})"


def group_order(desc: GroupDescriptor, part: str = "full") -> int:
    """Order of the group or one of its distinguished subgroups.

    part: 'full' similitude group, 'derived' (Sp / SU), and for family A
    also 'unitary' (similitude-1 isometries).
    """
    q, r = desc.ell, desc.r
    if desc.family == "C":
        sp = q ** (r * r)
        for i in range(1, r + 1):
            sp *= q ** (2 * i) - 1
        if part == "derived":
            return sp
        if part == "full":
            return sp * (q - 1)
        raise ValueError(f"family C has no part {part!r}")
    u = q ** (r * (r - 1) // 2)
    for i in range(1, r + 1):
        u *= q**i - (-1) ** i
    if part == "unitary":
        return u
    if part == "derived":
        return u // (q + 1)
    if part == "full":
        return u * (q - 1)
    raise ValueError(f"unknown part {part!r}")


def torus_order(desc: GroupDescriptor) -> int:
    q, r = desc.ell, desc.r
    if desc.family == "A" and r % 2 == 0:
        return (q**r - 1) * (q - 1)
    return (q**r + 1) * (q - 1)


# ---------------------------------------------------------------------------
# generic matrices of field elements


def mat_identity(field: FiniteField, n: int):
    return tuple(
        tuple(field.one() if i == j else field.zero() for j in range(n)) for i in range(n)
    )


def mat_mul(a, b):
    n = len(a)
    m = len(b[0])
    k = len(b)
    out = []
    for i in range(n):
        row = []
        for j in range(m):
            acc = a[i][0] * b[0][j]
            for t in range(1, k):
                acc = acc + a[i][t] * b[t][j]
            row.append(acc)
        out.append(tuple(row))
    return tuple(out)


def mat_conj_transpose(a, conjugate: bool):
    n, m = len(a), len(a[0])
    if conjugate:
        return tuple(tuple(a[j][i].frobenius() for j in range(n)) for i in range(m))
    return tuple(tuple(a[j][i] for j in range(n)) for i in range(m))


def mat_det(a):
    n = len(a)
    field = a[0][0].field
    work = [list(row) for row in a]
    det = field.one()
    for col in range(n):
        pivot = next((i for i in range(col, n) if not work[i][col].is_zero()), None)
        if pivot is None:
            return field.zero()
        if pivot != col:
            work[col], work[pivot] = work[pivot], work[col]
            det = -det
        det = det * work[col][col]
        inv = work[col][col].inverse()
        work[col] = [inv * x for x in work[col]]
        for i in range(col + 1, n):
            if not work[i][col].is_zero():
                c = work[i][col]
                work[i] = [x - c * y for x, y in zip(work[i], work[col])]
    return det


def mat_inverse(a):
    n = len(a)
    field = a[0][0].field
    work = [list(row) + [field.one() if i == j else field.zero() for j in range(n)] for i, row in enumerate(a)]
    for col in range(n):
        pivot = next((i for i in range(col, n) if not work[i][col].is_zero()), None)
        if pivot is None:
            raise ValueError("matrix is singular")
        work[col], work[pivot] = work[pivot], work[col]
        inv = work[col][col].inverse()
        work[col] = [inv * x for x in work[col]]
        for i in range(n):
            if i != col and not work[i][col].is_zero():
                c = work[i][col]
                work[i] = [x - c * y for x, y in zip(work[i], work[col])]
    return tuple(tuple(row[n:]) for row in work)


def mat_charpoly(a) -> ModPoly:
    """det(t*I - a) by cofactor expansion; fine for the small ranks here."""
    field = a[0][0].field
    n = len(a)
    entries = [
        [
            ModPoly.make(field, [-a[i][j], field.one()] if i == j else [-a[i][j]])
            for j in range(n)
        ]
        for i in range(n)
    ]
    return _poly_det(entries, field)


def _poly_det(rows, field) -> ModPoly:
    n = len(rows)
    if n == 1:
        return rows[0][0]
    acc = ModPoly.make(field, [])
    for j in range(n):
        if rows[0][j].is_zero():
            continue
        minor = [[rows[i][k] for k in range(n) if k != j] for i in range(1, n)]
        term = rows[0][j] * _poly_det(minor, field)
        acc = acc + (term if j % 2 == 0 else -term)
    return acc


def standard_gram(desc: GroupDescriptor):
    field = desc.matrix_field
    n = desc.matrix_dim
    if desc.family == "A":
        return mat_identity(field, n)
    one, mone, zero = field.one(), field.scalar(-1), field.zero()
    return tuple(
        tuple(
            (one if i < desc.r else mone) if j == n - 1 - i else zero for j in range(n)
        )
        for i in range(n)
    )


@dataclass(frozen=True)
class GroupElement:
    """A similitude with its multiplier (an integer mod ell)."""

    desc: GroupDescriptor
    matrix: tuple
    similitude: int

    def __mul__(self, other: "GroupElement") -> "GroupElement":
        if other.desc != self.desc:
            raise ValueError("elements of different groups")
        return GroupElement(
            self.desc,
            mat_mul(self.matrix, other.matrix),
            self.similitude * other.similitude % self.desc.ell,
        )

    def inverse(self) -> "GroupElement":
        return GroupElement(
            self.desc,
            mat_inverse(self.matrix),
            pow(self.similitude, -1, self.desc.ell),
        )

    def __pow__(self, e: int) -> "GroupElement":
        if e < 0:
            return self.inverse() ** (-e)
        result = identity_element(self.desc)
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result


def identity_element(desc: GroupDescriptor) -> GroupElement:
    return GroupElement(desc, mat_identity(desc.matrix_field, desc.matrix_dim), 1)


def contains(desc: GroupDescriptor, matrix) -> GroupElement | None:
    """The element with its similitude factor, or None if the form breaks."""
    n = desc.matrix_dim
    field = desc.matrix_field
    if len(matrix) != n or any(len(row) != n for row in matrix):
        raise DimensionMismatch(f"expected a {n}x{n} matrix")
    for row in matrix:
        for x in row:
            if not isinstance(x, FFElement) or x.field != field:
                raise FieldMismatch(f"entries must lie in {field}")
    gram = standard_gram(desc)
    s = mat_mul(mat_mul(mat_conj_transpose(matrix, desc.family == "A"), gram), matrix)
    # the standard grams have a nonzero entry in row 0
    j0 = next(j for j in range(n) if not gram[0][j].is_zero())
    lam = s[0][j0] / gram[0][j0]
    if lam.is_zero() or not lam.in_prime_field():
        return None
    for i in range(n):
        for j in range(n):
            if s[i][j] != lam * gram[i][j]:
                return None
    return GroupElement(desc, tuple(tuple(row) for row in matrix), lam.lift())


# ---------------------------------------------------------------------------
# field-level torus model


def _multiplicative_generator(field: FiniteField) -> FFElement:
    """Least-index generator of the multiplicative group; deterministic."""
    n = field.q - 1
    prime_divisors = _prime_divisors(n)
    for x in field.elements():
        if x.is_zero():
            continue
        if all(x ** (n // p) != field.one() for p in prime_divisors):
            return x
    raise AssertionError("no multiplicative generator found")


def _prime_divisors(n: int):
    out, d = [], 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


def _degree_from_order(order: int, base: int, top: int) -> int:
    """Smallest d | top with order dividing base^d - 1."""
    for d in range(1, top + 1):
        if top % d == 0 and (base**d - 1) % order == 0:
            return d
    raise AssertionError("order does not divide base^top - 1")


class _TorusModel:
    """Exponent-level model of the torus, enough for exact censuses."""

    def __init__(self, desc: GroupDescriptor):
        self.desc = desc
        q, r = desc.ell, desc.r
        self.order = torus_order(desc)
        if desc.family == "A" and r % 2 == 0:
            self.kind = "dual-pair"
            self.a_order = q**r - 1
        else:
            self.kind = "norm-line"
            self.big = q ** (2 * r) - 1
            self.step = (q**r - 1) // (q - 1)

    def is_regular(self, idx, m: int = 1) -> bool:
        q, r = self.desc.ell, self.desc.r
        if self.kind == "norm-line":
            j = idx * m % self.order
            exp = self.step * j % self.big
            ordx = self.big // gcd(self.big, exp)
            return _degree_from_order(ordx, q, 2 * r) == 2 * r
        i, w = idx
        n = self.a_order
        s = r // 2
        i = i * m % n
        w = w * m % (q - 1)
        ord_a = n // gcd(n, i)
        if _degree_from_order(ord_a, q * q, s) != s:
            return False
        lam_exp = w * (n // (q - 1)) % n
        for u in range(s):
            for v in range(s):
                if (i * (q ** (2 * u) + q ** (2 * v + 1)) - lam_exp) % n == 0:
                    return False
        return True

    def indices(self):
        if self.kind == "norm-line":
            return range(self.order)
        q = self.desc.ell
        return product(range(self.a_order), range(q - 1))

    def in_part(self, idx, part: str) -> bool:
        q, r = self.desc.ell, self.desc.r
        if part == "full":
            return True
        if self.kind == "norm-line":
            j = idx
            if self.desc.family == "C":
                if part == "derived":
                    return j % (q - 1) == 0
            else:
                if part == "unitary":
                    return j % (q - 1) == 0
                if part == "derived":
                    return j % (q - 1) == 0 and (self.step * j) % (q * q - 1) == 0
            raise ValueError(f"unknown part {part!r}")
        i, w = idx
        if part == "unitary":
            return w == 0
        if part == "derived":
            return w == 0 and i % (q + 1) == 0
        raise ValueError(f"unknown part {part!r}")

    def count_regular(self, m: int, part: str = "full") -> int:
        if self.order > MAX_TORUS_SIZE:
            raise BudgetExceeded(f"torus of order {self.order} exceeds the enumeration cap")
        return sum(1 for idx in self.indices() if self.in_part(idx, part) and self.is_regular(idx, m))

    def count_part(self, part: str) -> int:
        return sum(1 for idx in self.indices() if self.in_part(idx, part))

    def max_power_fiber(self, m: int) -> int:
        q = self.desc.ell
        if self.kind == "norm-line":
            return gcd(m, self.order)
        return gcd(m, self.a_order) * gcd(m, q - 1)


# ---------------------------------------------------------------------------
# matrix model of the torus


def _subfield_quadratic_image(big: FiniteField, element_maps_to: FiniteField):
    """Canonical copy of GF(ell^2) inside `big`, with the map to the
    standalone field: returns (w, w_std) where w generates the subfield."""
    zeta = _multiplicative_generator(big)
    w = zeta ** ((big.q - 1) // (element_maps_to.q - 1))
    from .finfield import minimal_polynomial

    mp = minimal_polynomial(w)
    for cand in element_maps_to.elements():
        acc = element_maps_to.zero()
        for i, c in enumerate(mp):
            acc = acc + element_maps_to.scalar(c) * cand**i
        if acc.is_zero():
            return zeta, w, cand
    raise AssertionError("no root of the subfield polynomial found")


def _k_linear_matrix(big: FiniteField, small: FiniteField, w: FFElement, w_std: FFElement, x: FFElement):
    """Matrix of multiplication by x on `big` viewed over the degree-2
    subfield generated by w, with entries mapped into `small`."""
    ell = big.p
    dim = big.k
    half = dim // 2
    tpows = [big.element([0] * i + [1]) for i in range(half)]
    basis = tpows + [w * t for t in tpows]
    cols = [list(b.coeffs) for b in basis]
    binv = _int_mat_inverse(cols, ell)  # columns indexed by basis members
    out = []
    for i in range(half):
        out.append([None] * half)
    for j in range(half):
        y = x * tpows[j]
        coords = _int_mat_apply(binv, list(y.coeffs), ell)
        for i in range(half):
            a, b = coords[i], coords[half + i]
            out[i][j] = small.scalar(a) + small.scalar(b) * w_std
    return tuple(tuple(row) for row in out)


def _int_mat_inverse(cols, p):
    """Inverse of the matrix whose columns are `cols`, over GF(p)."""
    n = len(cols)
    work = [[cols[j][i] % p for j in range(n)] + [1 if i == k else 0 for k in range(n)] for i in range(n)]
    for col in range(n):
        pivot = next(i for i in range(col, n) if work[i][col] % p)
        work[col], work[pivot] = work[pivot], work[col]
        inv = pow(work[col][col], -1, p)
        work[col] = [v * inv % p for v in work[col]]
        for i in range(n):
            if i != col and work[i][col]:
                c = work[i][col]
                work[i] = [(v - c * u) % p for v, u in zip(work[i], work[col])]
    return [row[n:] for row in work]


def _int_mat_apply(m, v, p):
    return [sum(m[i][j] * v[j] for j in range(len(v))) % p for i in range(len(m))]


def _symplectic_change_of_basis(gram, field):
    """P with P^T * gram * P equal to the standard antidiagonal form."""
    n = len(gram)
    r = n // 2
    basis = [tuple(field.one() if i == j else field.zero() for i in range(n)) for j in range(n)]
    pairs = []
    remaining = list(basis)

    def form(u, v):
        acc = field.zero()
        for i in range(n):
            if u[i].is_zero():
                continue
            for j in range(n):
                acc = acc + u[i] * gram[i][j] * v[j]
        return acc

    while remaining:
        u = remaining[0]
        v = next(x for x in remaining[1:] if not form(u, x).is_zero())
        v = tuple(c / form(u, v) for c in v)
        pairs.append((u, v))
        nxt = []
        for x in remaining:
            y = tuple(
                xi - form(x, v) * ui + form(x, u) * vi for xi, ui, vi in zip(x, u, v)
            )
            if any(not c.is_zero() for c in y):
                nxt.append(y)
        # keep only an independent spanning set of the orthogonal complement
        remaining = _independent_vectors(nxt, field)
    cols = [p[0] for p in pairs] + [p[1] for p in reversed(pairs)]
    assert len(pairs) == r
    return tuple(tuple(cols[j][i] for j in range(n)) for i in range(n))


def _independent_vectors(vectors, field):
    """A maximal linearly independent subset, by Gaussian elimination."""
    rows = []
    keep = []
    for v in vectors:
        cur = list(v)
        for lead, rv in rows:
            if not cur[lead].is_zero():
                c = cur[lead]
                cur = [a - c * b for a, b in zip(cur, rv)]
        lead = next((i for i, c in enumerate(cur) if not c.is_zero()), None)
        if lead is None:
            continue
        inv = cur[lead].inverse()
        rows.append((lead, [inv * c for c in cur]))
        keep.append(v)
    return keep


def _hermitian_change_of_basis(gram, field):
    """P with conj(P)^T * gram * P equal to the identity."""
    n = len(gram)

    def form(u, v):
        acc = field.zero()
        for i in range(n):
            if u[i].is_zero():
                continue
            ui = u[i].frobenius()
            for j in range(n):
                acc = acc + ui * gram[i][j] * v[j]
        return acc

    basis = [tuple(field.one() if i == j else field.zero() for i in range(n)) for j in range(n)]
    ortho = []
    remaining = list(basis)
    while remaining:
        u = next((x for x in remaining if not form(x, x).is_zero()), None)
        if u is None:
            # isotropic throughout: mix two vectors pairing nontrivially
            a = remaining[0]
            b = next(x for x in remaining[1:] if not form(a, x).is_zero())
            u = None
            for t in field.elements():
                cand = tuple(ai + t * bi for ai, bi in zip(a, b))
                if not form(cand, cand).is_zero():
                    u = cand
                    break
            assert u is not None
        norm = form(u, u)
        scale = next(s for s in field.elements() if not s.is_zero() and s.frobenius() * s * norm == field.one())
        u = tuple(scale * c for c in u)
        ortho.append(u)
        nxt = []
        for x in remaining:
            y = tuple(xi - form(u, x) * ui for xi, ui in zip(x, u))
            if any(not c.is_zero() for c in y):
                nxt.append(y)
        remaining = _independent_vectors(nxt, field)
    assert len(ortho) == n
    return tuple(tuple(ortho[j][i] for j in range(n)) for i in range(n))


@dataclass(frozen=True)
class AnisotropicTorus:
    """Matrix model of the maximally anisotropic maximal torus.

    generators[0] is the multiplication-by-primitive-element generator; the
    dual-pair torus (family A, even rank) is not cyclic and carries a second,
    similitude-direction generator, so the subgroup generated by all listed
    generators is the torus.
    """

    desc: GroupDescriptor
    generators: tuple
    order: int
    embedding_field: FiniteField

    @property
    def generator(self) -> GroupElement:
        return self.generators[0]


@lru_cache(maxsize=None)
def build_anisotropic_torus(desc: GroupDescriptor) -> AnisotropicTorus:
    q, r = desc.ell, desc.r
    field = desc.matrix_field
    if desc.family == "C":
        big = make_field(q, 2 * r)
        zeta = _multiplicative_generator(big)
        gen = zeta ** ((q**r - 1) // (q - 1))
        # alternating trace form Tr(c * x * y^sigma) with c anti-fixed by sigma
        sigma_pow = q**r
        c = next(
            x for x in big.elements() if not x.is_zero() and x**sigma_pow == -x
        )
        n = 2 * r
        tpows = [big.element([0] * i + [1]) for i in range(n)]

        def trace(x):
            acc = big.zero()
            y = x
            for _ in range(n):
                acc = acc + y
                y = y**q
            return acc.lift()

        gram = tuple(
            tuple(
                field.scalar(trace(c * tpows[i] * tpows[j] ** sigma_pow))
                for j in range(n)
            )
            for i in range(n)
        )
        mult = tuple(
            tuple(field.scalar((gen * tpows[j]).coeffs[i]) for j in range(n))
            for i in range(n)
        )
        p_mat = _symplectic_change_of_basis(gram, field)
        std = mat_mul(mat_mul(mat_inverse(p_mat), mult), p_mat)
        elt = contains(desc, std)
        assert elt is not None, "torus generator must preserve the standard form"
        return AnisotropicTorus(desc, (elt,), torus_order(desc), big)

    if r % 2 == 1:
        big = make_field(q, 2 * r)
        zeta, w, w_std = _subfield_quadratic_image(big, field)
        gen = zeta ** ((q**r - 1) // (q - 1))
        half = r
        tpows = [big.element([0] * i + [1]) for i in range(half)]
        sigma_pow = q**r

        def k_trace(x):
            # trace from the big field to the quadratic subfield
            acc = big.zero()
            y = x
            for _ in range(r):
                acc = acc + y
                y = y ** (q * q)
            return acc

        def to_std(x):
            # x lies in the quadratic subfield spanned by {1, w}
            coords = _k_coords(big, w, x)
            return field.scalar(coords[0]) + field.scalar(coords[1]) * w_std

        gram = tuple(
            tuple(to_std(k_trace(tpows[i] ** sigma_pow * tpows[j])) for j in range(half))
            for i in range(half)
        )
        mult = _k_linear_matrix(big, field, w, w_std, gen)
        p_mat = _hermitian_change_of_basis(gram, field)
        std = mat_mul(mat_mul(mat_inverse(p_mat), mult), p_mat)
        elt = contains(desc, std)
        assert elt is not None, "torus generator must preserve the standard form"
        return AnisotropicTorus(desc, (elt,), torus_order(desc), big)

    # family A, r even: dual-pair torus on two isotropic blocks
    s = r // 2
    big = make_field(q, r)
    if r == 2:
        gamma_std = _multiplicative_generator(field)
        a_block = ((gamma_std,),)
    else:
        zeta, w, w_std = _subfield_quadratic_image(big, field)
        gamma = _multiplicative_generator(big)
        a_block = _k_linear_matrix(big, field, w, w_std, gamma)
    dual = mat_inverse(mat_conj_transpose(a_block, True))
    zero = field.zero()
    gen1 = tuple(
        tuple(
            a_block[i][j] if i < s and j < s else (dual[i - s][j - s] if i >= s and j >= s else zero)
            for j in range(r)
        )
        for i in range(r)
    )
    lam0 = field.scalar(_least_primitive_root(q))
    gen2 = tuple(
        tuple(
            (field.one() if i < s else lam0) if i == j else zero for j in range(r)
        )
        for i in range(r)
    )
    hyper = tuple(
        tuple(field.one() if abs(i - j) == s else zero for j in range(r)) for i in range(r)
    )
    p_mat = _hermitian_from_gram(hyper, field)
    inv_p = mat_inverse(p_mat)
    elts = []
    for g in (gen1, gen2):
        std = mat_mul(mat_mul(inv_p, g), p_mat)
        elt = contains(desc, std)
        assert elt is not None, "torus generator must preserve the standard form"
        elts.append(elt)
    return AnisotropicTorus(desc, tuple(elts), torus_order(desc), big)


def _hermitian_from_gram(gram, field):
    """Basis change taking `gram` to the identity Hermitian form."""
    return _hermitian_change_of_basis(gram, field)


def _k_coords(big: FiniteField, w: FFElement, x: FFElement):
    """Coordinates of x in the basis {1, w} of the quadratic subfield."""
    p = big.p
    cols = [list(big.one().coeffs), list(w.coeffs)]
    # solve the 2-unknown system over GF(p) via two independent rows
    rows = [i for i in range(big.k)]
    for i in rows:
        for j in rows:
            if i == j:
                continue
            det = (cols[0][i] * cols[1][j] - cols[0][j] * cols[1][i]) % p
            if det:
                inv = pow(det, -1, p)
                a = (x.coeffs[i] * cols[1][j] - x.coeffs[j] * cols[1][i]) * inv % p
                b = (cols[0][i] * x.coeffs[j] - cols[0][j] * x.coeffs[i]) * inv % p
                # confirm consistency on the full coordinate vector
                ref = big.scalar(a) + big.scalar(b) * w
                assert ref == x, "element does not lie in the quadratic subfield"
                return a, b
    raise AssertionError("degenerate subfield basis")


def _least_primitive_root(p: int) -> int:
    divisors = _prime_divisors(p - 1)
    for g in range(2, p):
        if all(pow(g, (p - 1) // d, p) != 1 for d in divisors):
            return g
    raise AssertionError("no primitive root")


def torus_element_matrices(desc: GroupDescriptor):
    """All torus elements as GroupElements (budget-capped)."""
    torus = build_anisotropic_torus(desc)
    if torus.order > MAX_TORUS_SIZE:
        raise BudgetExceeded("torus too large to enumerate")
    if len(torus.generators) == 1:
        out = []
        g = identity_element(desc)
        for _ in range(torus.order):
            out.append(g)
            g = g * torus.generator
        return out
    g1, g2 = torus.generators
    q = desc.ell
    n1 = torus.order // (q - 1)
    out = []
    a = identity_element(desc)
    for _ in range(n1):
        b = a
        for _ in range(q - 1):
            out.append(b)
            b = b * g2
        a = a * g1
    return out


# ---------------------------------------------------------------------------
# packed fast layer


class _PackedField:
    """Index-coded field arithmetic with dense lookup tables."""

    def __init__(self, field: FiniteField):
        self.q = field.q
        self.p = field.p
        els = list(field.elements())
        q = field.q
        self.add = [[(els[a] + els[b]).index() for b in range(q)] for a in range(q)]
        self.mul = [[(els[a] * els[b]).index() for b in range(q)] for a in range(q)]
        self.neg = [(-els[a]).index() for a in range(q)]
        self.inv = [0] + [(els[a].inverse()).index() for a in range(1, q)]
        self.conj = [(els[a] ** field.p).index() for a in range(q)]


@lru_cache(maxsize=None)
def _packed_field(field: FiniteField) -> _PackedField:
    return _PackedField(field)


def pack_matrix(matrix) -> tuple:
    return tuple(x.index() for row in matrix for x in row)


def unpack_matrix(desc: GroupDescriptor, packed) -> tuple:
    n = desc.matrix_dim
    field = desc.matrix_field
    return tuple(
        tuple(field.from_index(packed[i * n + j]) for j in range(n)) for i in range(n)
    )


def _pmat_mul(pf: _PackedField, n: int):
    add, mul = pf.add, pf.mul

    def mm(a, b):
        out = []
        for i in range(n):
            base = i * n
            for j in range(n):
                acc = 0
                for k in range(n):
                    acc = add[acc][mul[a[base + k]][b[k * n + j]]]
                out.append(acc)
        return tuple(out)

    return mm


def _pmat_conj_transpose(pf: _PackedField, n: int, conjugate: bool):
    conj = pf.conj

    def ct(a):
        if conjugate:
            return tuple(conj[a[j * n + i]] for i in range(n) for j in range(n))
        return tuple(a[j * n + i] for i in range(n) for j in range(n))

    return ct


def _pmat_inverse(pf: _PackedField, n: int):
    add, mul, neg, inv = pf.add, pf.mul, pf.neg, pf.inv

    def mi(a):
        work = [[a[i * n + j] for j in range(n)] + [1 if i == j else 0 for j in range(n)] for i in range(n)]
        for col in range(n):
            pivot = next(i for i in range(col, n) if work[i][col])
            work[col], work[pivot] = work[pivot], work[col]
            s = inv[work[col][col]]
            work[col] = [mul[s][x] for x in work[col]]
            for i in range(n):
                c = work[i][col]
                if i != col and c:
                    nc = neg[c]
                    work[i] = [add[x][mul[nc][y]] for x, y in zip(work[i], work[col])]
        return tuple(work[i][n + j] for i in range(n) for j in range(n))

    return mi


class _PackedGroup:
    """Per-descriptor packed matrix toolkit."""

    def __init__(self, desc: GroupDescriptor):
        self.desc = desc
        self.n = desc.matrix_dim
        self.pf = _packed_field(desc.matrix_field)
        self.mm = _pmat_mul(self.pf, self.n)
        self.ct = _pmat_conj_transpose(self.pf, self.n, desc.family == "A")
        self.minv = _pmat_inverse(self.pf, self.n)
        self.gram = pack_matrix(standard_gram(desc))
        self.identity = pack_matrix(mat_identity(desc.matrix_field, self.n))
        n = self.n
        self._gram_anchor = next(j for j in range(n) if self.gram[j])

    def similitude(self, a) -> int | None:
        """Prime-field similitude index, or None if a is not in the group."""
        s = self.mm(self.mm(self.ct(a), self.gram), a)
        pf = self.pf
        j0 = self._gram_anchor
        lam = pf.mul[s[j0]][pf.inv[self.gram[j0]]]
        if lam == 0 or lam >= pf.p:
            return None
        for x, g in zip(s, self.gram):
            if x != pf.mul[lam][g]:
                return None
        return lam

    def det(self, a) -> int:
        pf, n = self.pf, self.n
        add, mul, neg, inv = pf.add, pf.mul, pf.neg, pf.inv
        work = [[a[i * n + j] for j in range(n)] for i in range(n)]
        d = 1
        for col in range(n):
            pivot = next((i for i in range(col, n) if work[i][col]), None)
            if pivot is None:
                return 0
            if pivot != col:
                work[col], work[pivot] = work[pivot], work[col]
                d = neg[d]
            d = mul[d][work[col][col]]
            s = inv[work[col][col]]
            work[col] = [mul[s][x] for x in work[col]]
            for i in range(col + 1, n):
                c = work[i][col]
                if c:
                    nc = neg[c]
                    work[i] = [add[x][mul[nc][y]] for x, y in zip(work[i], work[col])]
        return d

    def power(self, a, e: int):
        result = self.identity
        base = a
        while e:
            if e & 1:
                result = self.mm(result, base)
            base = self.mm(base, base)
            e >>= 1
        return result


@lru_cache(maxsize=None)
def _packed_group(desc: GroupDescriptor) -> _PackedGroup:
    return _PackedGroup(desc)


_ENUM_CACHE: dict = {}


def enumerate_group_packed(desc: GroupDescriptor, part: str = "full"):
    """All packed matrices of the requested subgroup, budget-capped."""
    key = (desc, part)
    if key in _ENUM_CACHE:
        return _ENUM_CACHE[key]
    pg = _packed_group(desc)
    space = pg.pf.q ** (pg.n * pg.n)
    if space > MAX_MATRIX_SPACE:
        raise BudgetExceeded(f"matrix space of size {space} exceeds the scan cap")
    expected = group_order(desc, part)
    if expected > MAX_GROUP_SIZE:
        raise BudgetExceeded(f"group of order {expected} exceeds the enumeration cap")
    out = []
    unitary = part in ("unitary", "derived")
    derived = part == "derived"
    for mat in product(range(pg.pf.q), repeat=pg.n * pg.n):
        lam = pg.similitude(mat)
        if lam is None:
            continue
        if unitary and lam != 1:
            continue
        if derived and pg.det(mat) != 1:
            continue
        out.append(mat)
    assert len(out) == expected, f"enumeration found {len(out)}, formula says {expected}"
    _ENUM_CACHE[key] = out
    return out


def enumerate_group(desc: GroupDescriptor, part: str = "full"):
    """All GroupElements of the requested subgroup (budget-capped)."""
    pg = _packed_group(desc)
    out = []
    for m in enumerate_group_packed(desc, part):
        lam = pg.similitude(m)
        out.append(GroupElement(desc, unpack_matrix(desc, m), lam))
    return out


# ---------------------------------------------------------------------------
# classification


def _charpoly_natural(x: GroupElement) -> ModPoly:
    """Characteristic polynomial on the natural 2r-dimensional prime-field
    space (for family A this is the norm of the GF(ell^2) charpoly)."""
    desc = x.desc
    prime = make_field(desc.ell, 1)
    cp = mat_charpoly(x.matrix)
    if desc.family == "C":
        return ModPoly.from_ints(prime, [c.lift() for c in cp.coeffs])
    full = cp * cp.frobenius_coeffs()
    return ModPoly.from_ints(prime, [c.lift() for c in full.coeffs])


def _dual_twist(g: ModPoly, lam: FFElement) -> ModPoly:
    """Monic polynomial whose roots are lam / beta^q over the conjugates."""
    gb = g.frobenius_coeffs()
    s = gb.degree
    field = g.field
    coeffs = [field.zero()] * (s + 1)
    for i, c in enumerate(gb.coeffs):
        coeffs[s - i] = c * lam**i
    out = ModPoly.make(field, coeffs)
    return out.monic()


def classify_element(x: GroupElement, m: int = 1) -> bool:
    """True iff x^m is regular with maximally anisotropic connected
    centralizer (fast path, read off characteristic polynomials)."""
    y = x**m
    desc = x.desc
    if desc.family == "C" or desc.r % 2 == 1:
        return is_irreducible_mod(_charpoly_natural(y))
    cp = mat_charpoly(y.matrix)
    if mod_gcd(cp, cp.derivative()).degree != 0:
        return False
    _, factors = factor_mod(cp)
    if len(factors) != 2:
        return False
    (g1, m1), (g2, m2) = factors
    s = desc.r // 2
    if m1 != 1 or m2 != 1 or g1.degree != s or g2.degree != s:
        return False
    lam = desc.matrix_field.scalar(y.similitude)
    return g2 == _dual_twist(g1, lam) and g1 != g2


def classify_element_oracle(x: GroupElement, m: int = 1) -> bool:
    """Definitional answer: enumerate the centralizer of x^m in the full
    group and test that it is abelian of the anisotropic-torus order."""
    desc = x.desc
    pg = _packed_group(desc)
    elements = enumerate_group_packed(desc, "full")
    y = pg.power(pack_matrix(x.matrix), m)
    target = torus_order(desc)
    mm = pg.mm
    cent = []
    for g in elements:
        if mm(g, y) == mm(y, g):
            cent.append(g)
            if len(cent) > target:
                return False
    if len(cent) != target:
        return False
    for i, a in enumerate(cent):
        for b in cent[i + 1 :]:
            if mm(a, b) != mm(b, a):
                return False
    return True


def exhaustive_classification(desc: GroupDescriptor, m: int = 1, part: str = "full"):
    """(count in the regular-anisotropic class, subgroup order) by direct
    classification of every element; the independent check on the census
    count identity."""
    pg = _packed_group(desc)
    count = 0
    elements = enumerate_group_packed(desc, part)
    for mat in elements:
        lam = pg.similitude(mat)
        elt = GroupElement(desc, unpack_matrix(desc, mat), lam)
        if classify_element(elt, m):
            count += 1
    return count, len(elements)


# ---------------------------------------------------------------------------
# censuses


@dataclass(frozen=True)
class NormalizerCensus:
    normalizer_order: int
    weyl_order: int
    stable_primes: tuple | None = None  # set when inferred by stability


def _normalizer_by_enumeration(desc: GroupDescriptor) -> NormalizerCensus:
    pg = _packed_group(desc)
    elements = enumerate_group_packed(desc, "full")
    torus = build_anisotropic_torus(desc)
    tset = frozenset(pack_matrix(t.matrix) for t in torus_element_matrices(desc))
    gens = [pack_matrix(g.matrix) for g in torus.generators]
    mm, minv = pg.mm, pg.minv
    count = 0
    for g in elements:
        gi = minv(g)
        if all(mm(mm(g, t), gi) in tset for t in gens):
            count += 1
    return NormalizerCensus(count, count // torus.order)


_STABILITY_PRIMES = (3, 5, 7, 11, 13, 17, 19, 23)


def normalizer_census(desc: GroupDescriptor) -> NormalizerCensus:
    """|N(T)| and |W| = |N|/|T|, enumerated when in budget.

    Out-of-budget descriptors fall back on the rank-stability of W: the Weyl
    order is enumerated at (at least three) small primes of the same family
    and rank, required to agree, and scaled by the torus order at the
    requested prime.
    """
    try:
        return _normalizer_by_enumeration(desc)
    except BudgetExceeded:
        pass
    weyls = []
    used = []
    for p in _STABILITY_PRIMES:
        if p == desc.ell:
            continue
        try:
            small = GroupDescriptor(desc.family, desc.r, p)
            weyls.append(_normalizer_by_enumeration(small).weyl_order)
            used.append(p)
        except BudgetExceeded:
            continue
        if len(weyls) >= 3:
            break
    if len(weyls) < 3 or len(set(weyls)) != 1:
        raise BudgetExceeded(
            f"normalizer of {desc} not enumerable and no stable Weyl order across {used}"
        )
    w = weyls[0]
    return NormalizerCensus(w * torus_order(desc), w, tuple(used))


@dataclass(frozen=True)
class TorusCensus:
    """Exact torus counts at one prime."""

    desc: GroupDescriptor
    m: int
    torus_order: int
    regular_count: int  # elements whose m-th power is regular
    regular_count_base: int  # the m = 1 count
    b_estimate: Fraction  # ell * (1 - regular_base/torus_order)
    subgroup_orders: dict
    normalizer_order: int | None
    weyl_order: int | None
    exceptional_field: bool
    weyl_stable_primes: tuple | None


def torus_census(desc: GroupDescriptor, m: int = 1) -> TorusCensus:
    model = _TorusModel(desc)
    if model.order > MAX_TORUS_SIZE:
        raise BudgetExceeded(f"torus of order {model.order} exceeds the enumeration cap")
    reg_m = model.count_regular(m)
    reg_1 = reg_m if m == 1 else model.count_regular(1)
    parts = ["full", "derived"] + (["unitary"] if desc.family == "A" else [])
    sub = {part: model.count_part(part) for part in parts}
    norm_order = weyl = stable = None
    try:
        nc = normalizer_census(desc)
        norm_order, weyl, stable = nc.normalizer_order, nc.weyl_order, nc.stable_primes
    except BudgetExceeded:
        pass
    return TorusCensus(
        desc=desc,
        m=m,
        torus_order=model.order,
        regular_count=reg_m,
        regular_count_base=reg_1,
        b_estimate=desc.ell * (1 - Fraction(reg_1, model.order)),
        subgroup_orders=sub,
        normalizer_order=norm_order,
        weyl_order=weyl,
        exceptional_field=desc.exceptional_field,
        weyl_stable_primes=stable,
    )


def regular_torus_count(desc: GroupDescriptor, m: int = 1, part: str = "full") -> int:
    """|{x in T ∩ part : x^m regular}| from the exponent-level model."""
    return _TorusModel(desc).count_regular(m, part)

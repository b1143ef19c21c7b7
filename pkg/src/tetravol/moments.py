"""Exact even moments of the pinned random simplex volume.

Let X1, X2, X3 be uniform in a tetrahedron T of volume one and c the centroid
of one facet.  The volume of conv(X1, X2, X3, c) is |det M|/6 for the usual
bordered 4x4 matrix M; by affine invariance everything reduces to integrals
over the standard tetrahedron T_o with c = (1/3, 1/3, 0).  Writing the
determinant polynomial as D, the even moments are

    E V^(2k) = 6^3 * int_{T_o^3} D^(2k),        D = (1/3) * (18 signed terms).

Two independent evaluation routes are implemented:

* `even_moment_direct` - the multinomial-theorem enumerator: a sum of
  closed-form integrals over all compositions of 2k into 18 parts.  Exact and
  simple, but the composition count C(2k+17, 17) explodes; capped by default
  at k = 5.

* `even_moment_fast` - a collapsed evaluation that never materializes the
  9-variable expansion.  Each of the 18 terms contains exactly one z
  coordinate, so 3D = z1*F1 + z2*F2 + z3*F3 where each F_i involves only the
  x/y coordinates of the other two points.  For each z-degree split
  (n1, n2, n3) the integral of the product factorizes per point into factorial
  weights, giving small exact-integer matrix sandwiches instead of a gigantic
  monomial dictionary.  All arithmetic stays in integers until the final
  division.

The two routes must agree bit-exactly wherever both run; `moment_table`
enforces that cross-check before trusting any cached values.
"""

from __future__ import annotations

import itertools
from concurrent.futures import ThreadPoolExecutor
from fractions import Fraction
from math import comb
from pathlib import Path
from typing import Iterator, NamedTuple, Sequence

from .rational import factorial
from .simplex_integrals import triple_integral

__all__ = [
    "TERMS_3D",
    "VAR_NAMES",
    "SparsePoly",
    "Abbreviations",
    "build_D",
    "poly_mul",
    "abbreviations",
    "enumerate_compositions",
    "composition_count",
    "even_moment_direct",
    "even_moment_expand",
    "even_moment_fast",
    "MomentTable",
    "moment_table",
    "MomentCacheError",
    "MomentIntegrityError",
]

#: variable order of the exponent 9-tuple (l1, m1, n1, l2, m2, n2, l3, m3, n3)
VAR_NAMES = ("x1", "y1", "z1", "x2", "y2", "z2", "x3", "y3", "z3")
_VAR_INDEX = {v: i for i, v in enumerate(VAR_NAMES)}

#: the 18 signed terms of 3*D, in the determinant-expansion order.  This is
#: the single source of truth: the composition enumerator, the sparse
#: expansion and the collapsed fast path are all derived from it.
TERMS_3D: tuple[tuple[int, tuple[str, ...]], ...] = (
    (+1, ("x1", "z2")),
    (-1, ("x1", "z3")),
    (-1, ("x2", "z1")),
    (+1, ("x2", "z3")),
    (+1, ("x3", "z1")),
    (-1, ("x3", "z2")),
    (-1, ("y1", "z2")),
    (+1, ("y1", "z3")),
    (+1, ("y2", "z1")),
    (-1, ("y2", "z3")),
    (-1, ("y3", "z1")),
    (+1, ("y3", "z2")),
    (+3, ("x1", "y2", "z3")),
    (-3, ("x1", "y3", "z2")),
    (-3, ("x2", "y1", "z3")),
    (+3, ("x2", "y3", "z1")),
    (+3, ("x3", "y1", "z2")),
    (-3, ("x3", "y2", "z1")),
)


def _term_exponents(vars_: tuple[str, ...]) -> tuple[int, ...]:
    e = [0] * 9
    for v in vars_:
        e[_VAR_INDEX[v]] += 1
    return tuple(e)

_TERM_EXPS = tuple(_term_exponents(vs) for _, vs in TERMS_3D)
_TERM_NEGATIVE = tuple(c < 0 for c, _ in TERMS_3D)
_TERM_CUBIC = tuple(abs(c) == 3 for c, _ in TERMS_3D)


class MomentCacheError(RuntimeError):
    """Moment cache file is malformed."""


class MomentIntegrityError(RuntimeError):
    """A cached or recomputed moment disagrees with the direct enumerator."""


# ---------------------------------------------------------------------------
# sparse 9-variable polynomials
# ---------------------------------------------------------------------------

_FIELD_BITS = 6
_FIELD_MASK = (1 << _FIELD_BITS) - 1
_EXP_MAX = _FIELD_MASK


def pack_monomial(exponents: Sequence[int]) -> int:
    """Pack a 9-tuple of exponents into one int key (x1 in the top field).

    Integer keys hash fast and order lexicographically like the tuples.
    """
    key = 0
    for e in exponents:
        if not 0 <= e <= _EXP_MAX:
            raise ValueError(f"exponent {e} out of range 0..{_EXP_MAX}")
        key = (key << _FIELD_BITS) | e
    return key


def unpack_monomial(key: int) -> tuple[int, ...]:
    out = [0] * 9
    for i in range(8, -1, -1):
        out[i] = key & _FIELD_MASK
        key >>= _FIELD_BITS
    return tuple(out)


class SparsePoly:
    """Integer-coefficient polynomial in the 9 coordinates times a power of 3.

    value = 3**scale_pow3 * sum(coeff * monomial).  Keys are packed exponent
    ints; zero coefficients are never stored.
    """

    __slots__ = ("terms", "scale_pow3")

    def __init__(self, terms: dict[int, int], scale_pow3: int = 0) -> None:
        self.terms = {k: c for k, c in terms.items() if c}
        self.scale_pow3 = scale_pow3

    @classmethod
    def from_exponent_terms(cls, items: Sequence[tuple[Sequence[int], int]],
                            scale_pow3: int = 0) -> "SparsePoly":
        d: dict[int, int] = {}
        for exps, coeff in items:
            key = pack_monomial(exps)
            d[key] = d.get(key, 0) + coeff
        return cls(d, scale_pow3)

    def __len__(self) -> int:
        return len(self.terms)

    def items(self) -> list[tuple[tuple[int, ...], int]]:
        """Terms as (exponent 9-tuple, coefficient), in canonical key order."""
        return [(unpack_monomial(k), self.terms[k]) for k in sorted(self.terms)]

    def coefficient(self, exponents: Sequence[int]) -> int:
        return self.terms.get(pack_monomial(exponents), 0)

    def eval_at(self, point: Sequence[Fraction]) -> Fraction:
        """Exact value at a 9-tuple of rationals (term-by-term)."""
        total = Fraction(0)
        for key in sorted(self.terms):
            exps = unpack_monomial(key)
            v = Fraction(self.terms[key])
            for x, e in zip(point, exps):
                if e:
                    v *= Fraction(x) ** e
            total += v
        return total * Fraction(3) ** self.scale_pow3


def build_D() -> SparsePoly:
    """The determinant polynomial D for T_o with c = (1/3, 1/3, 0).

    Returned as the integer polynomial 3*D with scale_pow3 = -1: coefficients
    are +-1 for the 12 quadratic terms and +-3 for the 6 cubic ones.
    """
    return SparsePoly.from_exponent_terms(
        [(exps, coeff) for (coeff, _), exps in zip(TERMS_3D, _TERM_EXPS)],
        scale_pow3=-1,
    )


def poly_mul(a: SparsePoly, b: SparsePoly) -> SparsePoly:
    """Exact product; scales add, cancelled terms drop out."""
    small, large = (a, b) if len(a) <= len(b) else (b, a)
    out: dict[int, int] = {}
    get = out.get
    for ks, cs in small.terms.items():
        for kl, cl in large.terms.items():
            key = ks + kl  # disjoint bit fields add like exponent vectors
            out[key] = get(key, 0) + cs * cl
    return SparsePoly(out, a.scale_pow3 + b.scale_pow3)


# ---------------------------------------------------------------------------
# composition enumeration and the printed abbreviation map
# ---------------------------------------------------------------------------

class Abbreviations(NamedTuple):
    """Derived quantities of one composition (k_1..k_18) of 2k."""

    k_prime: int                 # parity source of the sign
    k_double_prime: int          # count of cubic-term picks (power of 3)
    exponents: tuple[int, ...]   # (l1, m1, n1, l2, m2, n2, l3, m3, n3)


def abbreviations(composition: Sequence[int]) -> Abbreviations:
    """Apply the fixed linear map from a composition to its abbreviations."""
    if len(composition) != 18:
        raise ValueError(f"composition must have 18 parts, got {len(composition)}")
    kp = 0
    kpp = 0
    exps = [0] * 9
    for c, neg, cub, inc in zip(composition, _TERM_NEGATIVE, _TERM_CUBIC, _TERM_EXPS):
        if neg:
            kp += c
        if cub:
            kpp += c
        if c:
            for i in range(9):
                exps[i] += inc[i] * c
    return Abbreviations(kp, kpp, tuple(exps))


def enumerate_compositions(total: int, parts: int) -> Iterator[tuple[int, ...]]:
    """All compositions of `total` into `parts` nonnegative parts.

    Lexicographic order: (0, ..., 0, total) first.
    """
    if parts <= 0:
        raise ValueError("parts must be positive")
    if parts == 1:
        yield (total,)
        return
    for first in range(total + 1):
        for rest in enumerate_compositions(total - first, parts - 1):
            yield (first,) + rest


def composition_count(k: int) -> int:
    """Number of compositions of 2k into 18 parts: C(2k+17, 17)."""
    return comb(2 * k + 17, 17)


# ---------------------------------------------------------------------------
# direct enumerator
# ---------------------------------------------------------------------------

DIRECT_CAP_DEFAULT = 5


def even_moment_direct(k: int, cap: int = DIRECT_CAP_DEFAULT) -> Fraction:
    """E V^(2k) by direct summation over all compositions of 2k into 18 parts.

    The recursion walks the composition tree once, carrying the multinomial
    coefficient, the sign/power-of-3 counters and the exponent vector
    incrementally; each leaf costs a handful of integer multiplies.  The
    denominators (l+m+n+3)! all divide (2k+3)!, so the whole sum accumulates
    over the common denominator ((2k+3)!)^3 in pure integer arithmetic.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    if k > cap:
        raise ValueError(
            f"k={k} exceeds the direct-path cap {cap}: "
            f"{composition_count(k)} compositions of {2*k} into 18 parts")
    n2k = 2 * k
    fact = [factorial(i) for i in range(n2k + 4)]
    big = fact[n2k + 3]
    ratio = [big // fact[s + 3] for s in range(n2k + 1)]
    exps = [0] * 9
    total = 0

    def leaf(c: int, mult: int, kp: int, kpp: int, acc: int) -> None:
        nonlocal total
        mult *= comb(acc + c, c)
        if _TERM_NEGATIVE[17] and c % 2:
            kp += 1
        if _TERM_CUBIC[17]:
            kpp += c
        inc = _TERM_EXPS[17]
        for i in range(9):
            exps[i] += inc[i] * c
        l1, m1, n1, l2, m2, n2, l3, m3, n3 = exps
        term = (mult * 3 ** kpp
                * fact[l1] * fact[m1] * fact[n1] * ratio[l1 + m1 + n1]
                * fact[l2] * fact[m2] * fact[n2] * ratio[l2 + m2 + n2]
                * fact[l3] * fact[m3] * fact[n3] * ratio[l3 + m3 + n3])
        total += -term if kp % 2 else term
        for i in range(9):
            exps[i] -= inc[i] * c

    def walk(slot: int, rem: int, mult: int, kp: int, kpp: int, acc: int) -> None:
        if slot == 17:
            leaf(rem, mult, kp, kpp, acc)
            return
        neg = _TERM_NEGATIVE[slot]
        cub = _TERM_CUBIC[slot]
        inc = _TERM_EXPS[slot]
        for c in range(rem + 1):
            if c:
                for i in range(9):
                    exps[i] += inc[i]
            walk(slot + 1, rem - c,
                 mult * comb(acc + c, c),
                 kp + (c if neg else 0),
                 kpp + (c if cub else 0),
                 acc + c)
        for i in range(9):
            exps[i] -= inc[i] * rem

    walk(0, n2k, 1, 0, 0, 0)
    # E = 8/3^(2k-3) * total/((2k+3)!)^3 = 216 * total / (3^2k * ((2k+3)!)^3)
    return Fraction(216 * total, 3 ** n2k * big ** 3)


# ---------------------------------------------------------------------------
# sparse-expansion reference path
# ---------------------------------------------------------------------------

def power_of_three_d(power: int, check_z_degree: bool = True) -> SparsePoly:
    """(3D)^power as a sparse polynomial (scale_pow3 = -power).

    Every generator carries exactly one z coordinate, so each monomial of the
    result must have total z-degree equal to `power`; asserted during the
    expansion when `check_z_degree` is set.
    """
    d = build_D()
    acc = SparsePoly({0: 1}, 0)
    zmask_fields = (2, 5, 8)
    for step in range(1, power + 1):
        acc = poly_mul(acc, d)
        if check_z_degree:
            for key in acc.terms:
                exps = unpack_monomial(key)
                zdeg = sum(exps[i] for i in zmask_fields)
                assert zdeg == step, f"z-degree {zdeg} != {step}"
    return acc


def even_moment_expand(k: int) -> Fraction:
    """E V^(2k) by full 9-variable expansion plus term-by-term integration.

    Independent of the collapsed path; practical only for small k (the term
    count approaches C(2k+17, 17)).  Terms are summed in canonical key order
    so intermediate sums are reproducible.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    p = power_of_three_d(2 * k)
    total = Fraction(0)
    for exps, coeff in p.items():
        total += coeff * triple_integral(exps)
    # p = (3D)^(2k) with scale -2k relative to D^(2k)
    return 216 * total * Fraction(1, 3 ** (2 * k))


# ---------------------------------------------------------------------------
# collapsed fast path
# ---------------------------------------------------------------------------

def _z_split() -> tuple[dict, dict, dict, tuple]:
    """Group the 18 terms by their z variable.

    3D = z1*F1 + z2*F2 + z3*F3.  F1 involves only (x2, y2, x3, y3), F2 only
    (x1, y1, x3, y3), F3 only (x1, y1, x2, y2); each F_i is returned as a dict
    keyed by the 4-tuple of exponents in that variable order.
    """
    layouts = {
        1: ("x2", "y2", "x3", "y3"),
        2: ("x1", "y1", "x3", "y3"),
        3: ("x1", "y1", "x2", "y2"),
    }
    groups: dict[int, dict[tuple[int, int, int, int], int]] = {1: {}, 2: {}, 3: {}}
    for coeff, vars_ in TERMS_3D:
        zi = next(int(v[1]) for v in vars_ if v.startswith("z"))
        key = [0, 0, 0, 0]
        for v in vars_:
            if not v.startswith("z"):
                key[layouts[zi].index(v)] += 1
        kt = tuple(key)
        groups[zi][kt] = groups[zi].get(kt, 0) + coeff
    return groups[1], groups[2], groups[3], layouts


def _poly4_mul(p: dict, q: dict) -> dict:
    out: dict[tuple[int, int, int, int], int] = {}
    get = out.get
    for (a0, a1, a2, a3), ca in p.items():
        for (b0, b1, b2, b3), cb in q.items():
            key = (a0 + b0, a1 + b1, a2 + b2, a3 + b3)
            out[key] = get(key, 0) + ca * cb
    return {key: c for key, c in out.items() if c}


def _poly4_powers(f: dict, nmax: int) -> list[dict]:
    out = [{(0, 0, 0, 0): 1}]
    for _ in range(nmax):
        out.append(_poly4_mul(out[-1], f))
    return out


def _as_matrix(poly4: dict) -> tuple[list, list, list[list[int]]]:
    """Split the 4-tuple keys into (front pair) x (back pair) matrix form."""
    rows = sorted({(a, b) for (a, b, _, _) in poly4})
    cols = sorted({(c, d) for (_, _, c, d) in poly4})
    ri = {r: i for i, r in enumerate(rows)}
    ci = {c: i for i, c in enumerate(cols)}
    m = [[0] * len(cols) for _ in rows]
    for (a, b, c, d), coeff in poly4.items():
        m[ri[(a, b)]][ci[(c, d)]] = coeff
    return rows, cols, m


def _weight_kernel(row_pairs: list, col_pairs: list, nz: int,
                   fact: list[int], big: int) -> list[list[int]]:
    """K[u][v] = l! m! nz! (2k+3)!/(l+m+nz+3)! with (l, m) = pair_u + pair_v.

    This is the one-point monomial integral over T_o, scaled by (2k+3)! so it
    stays an integer (each l + m + nz is at most 2k).
    """
    fz = fact[nz]
    return [[fact[r0 + c0] * fact[r1 + c1] * fz * (big // fact[r0 + c0 + r1 + c1 + nz + 3])
             for (c0, c1) in col_pairs]
            for (r0, r1) in row_pairs]


def _matmul(a: list[list[int]], b: list[list[int]]) -> list[list[int]]:
    ncols = len(b[0])
    out = []
    for arow in a:
        acc = [0] * ncols
        for j, av in enumerate(arow):
            if av:
                brow = b[j]
                for t in range(ncols):
                    bv = brow[t]
                    if bv:
                        acc[t] += av * bv
        out.append(acc)
    return out


def _transpose(m: list[list[int]]) -> list[list[int]]:
    return [list(row) for row in zip(*m)]


def _triple_contribution(P1: list[dict], P2: list[dict], P3: list[dict],
                         split: tuple[int, int, int],
                         fact: list[int], big: int) -> int:
    """Scaled integral of z1^n1 z2^n2 z3^n3 F1^n1 F2^n2 F3^n3 over T_o^3.

    The per-point weight kernels absorb the full monomial integrals, so the
    result is the exact integral times ((2k+3)!)^3.
    """
    n1, n2, n3 = split
    p2_rows, p3u_cols, m1 = _as_matrix(P1[n1])
    p1_rows, p3v_cols, m2 = _as_matrix(P2[n2])
    p1v_rows, p2v_cols, m3 = _as_matrix(P3[n3])
    w3 = _weight_kernel(p3u_cols, p3v_cols, n3, fact, big)
    g3 = _matmul(_matmul(m1, w3), _transpose(m2))          # point2 x point1
    w1 = _weight_kernel(p1_rows, p1v_rows, n1, fact, big)
    w2 = _weight_kernel(p2_rows, p2v_cols, n2, fact, big)
    h = _matmul(_matmul(_transpose(w2), g3), w1)           # point2v x point1v
    j = 0
    for i, row in enumerate(m3):
        for jj, v in enumerate(row):
            if v:
                j += v * h[jj][i]
    return j


def even_moment_fast(k: int, threads: int = 1) -> Fraction:
    """E V^(2k) by the collapsed point-at-a-time evaluation.

    Swapping two random points permutes (F1, F2, F3) up to signs that cancel
    at even total degree, so only ordered z-degree splits n1 >= n2 >= n3 are
    evaluated, weighted by their orbit size.  Results are exact integers until
    the final division, hence bit-identical for any thread count.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    n2k = 2 * k
    f1, f2, f3, _ = _z_split()
    P1 = _poly4_powers(f1, n2k)
    P2 = _poly4_powers(f2, n2k)
    P3 = _poly4_powers(f3, n2k)
    fact = [factorial(i) for i in range(n2k + 4)]
    big = fact[n2k + 3]

    splits = []
    for n1 in range(n2k, -1, -1):
        for n2 in range(min(n1, n2k - n1), -1, -1):
            n3 = n2k - n1 - n2
            if n3 > n2:
                continue
            orbit = len({p for p in itertools.permutations((n1, n2, n3))})
            weight = orbit * (fact[n2k] // (fact[n1] * fact[n2] * fact[n3]))
            splits.append(((n1, n2, n3), weight))

    def contrib(item):
        split, weight = item
        return weight * _triple_contribution(P1, P2, P3, split, fact, big)

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            parts = list(pool.map(contrib, splits))
    else:
        parts = [contrib(item) for item in splits]
    total = sum(parts)
    return Fraction(216 * total, 3 ** n2k * big ** 3)


# ---------------------------------------------------------------------------
# moment table and cache file
# ---------------------------------------------------------------------------

CACHE_HEADER = "tetra-moments v1"

#: orders re-verified against the direct enumerator before a table is trusted
VERIFY_ORDER_MAX = 4


class MomentTable:
    """Map k -> E V^(2k) with a provenance tag per entry.

    Entries must be strictly positive, decreasing, and bounded by (1/3)^(2k)
    (the pinned simplex volume never exceeds 1/3).
    """

    def __init__(self, values: dict[int, Fraction],
                 provenance: dict[int, str] | None = None) -> None:
        self.values = dict(values)
        self.provenance = dict(provenance or {})
        self._validate()

    def _validate(self) -> None:
        prev = None
        for k in sorted(self.values):
            v = self.values[k]
            if v <= 0:
                raise MomentIntegrityError(f"moment k={k} is not positive: {v}")
            if v > Fraction(1, 3 ** (2 * k)):
                raise MomentIntegrityError(f"moment k={k} exceeds (1/3)^(2k): {v}")
            if prev is not None and v >= prev:
                raise MomentIntegrityError(f"moments not decreasing at k={k}")
            prev = v

    def __getitem__(self, k: int) -> Fraction:
        return self.values[k]

    def __contains__(self, k: int) -> bool:
        return k in self.values

    @property
    def order_max(self) -> int:
        return max(self.values) if self.values else 0

    def orders(self) -> list[int]:
        return sorted(self.values)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, MomentTable) and self.values == other.values

    def provenance_summary(self) -> str:
        """Compact per-source order ranges, e.g. 'direct:1-4 fast:5-13'."""
        by_tag: dict[str, list[int]] = {}
        for k in sorted(self.values):
            by_tag.setdefault(self.provenance.get(k, "unknown"), []).append(k)
        parts = []
        for tag in sorted(by_tag):
            ks = by_tag[tag]
            runs = []
            start = prev = ks[0]
            for k in ks[1:]:
                if k == prev + 1:
                    prev = k
                    continue
                runs.append((start, prev))
                start = prev = k
            runs.append((start, prev))
            spans = ",".join(f"{a}-{b}" if a != b else f"{a}" for a, b in runs)
            parts.append(f"{tag}:{spans}")
        return " ".join(parts)

    def write(self, path: str | Path) -> None:
        lines = [CACHE_HEADER]
        for k in sorted(self.values):
            v = self.values[k]
            lines.append(f"{k}\t{v.numerator}\t{v.denominator}")
        Path(path).write_text("\n".join(lines) + "\n", newline="\n")

    @classmethod
    def read(cls, path: str | Path) -> "MomentTable":
        text = Path(path).read_text()
        lines = text.split("\n")
        if not lines or lines[0] != CACHE_HEADER:
            raise MomentCacheError(f"{path}: missing header {CACHE_HEADER!r}")
        values: dict[int, Fraction] = {}
        for ln, line in enumerate(lines[1:], start=2):
            if not line:
                continue
            fields = line.split("\t")
            if len(fields) != 3:
                raise MomentCacheError(f"{path}:{ln}: expected k<TAB>num<TAB>den")
            try:
                k, num, den = (int(f) for f in fields)
            except ValueError as exc:
                raise MomentCacheError(f"{path}:{ln}: non-integer field") from exc
            if k in values:
                raise MomentCacheError(f"{path}:{ln}: duplicate order {k}")
            if den <= 0:
                raise MomentCacheError(f"{path}:{ln}: denominator must be positive")
            frac = Fraction(num, den)
            if frac.numerator != num or frac.denominator != den:
                raise MomentCacheError(f"{path}:{ln}: fraction {num}/{den} not reduced")
            values[k] = frac
        return cls(values, {k: "file" for k in values})


def moment_table(k_max: int, cache_path: str | Path | None = None,
                 threads: int = 1, verify: bool = True) -> MomentTable:
    """Moments 1..k_max, from cache where available, fast path otherwise.

    Orders up to min(4, k_max) are recomputed with the direct enumerator and
    compared bit-exactly before the table is trusted; any mismatch is a hard
    integrity failure, whether the suspect value came from a file or from the
    fast engine.  When a cache path is given, each newly computed moment is
    flushed to it immediately, so an interrupted run resumes where it left
    off.
    """
    values: dict[int, Fraction] = {}
    provenance: dict[int, str] = {}
    if cache_path is not None and Path(cache_path).exists():
        cached = MomentTable.read(cache_path)
        for k, v in cached.values.items():
            if k <= k_max:
                values[k] = v
                provenance[k] = "file"

    changed = False
    for k in range(1, k_max + 1):
        if k not in values:
            values[k] = even_moment_fast(k, threads=threads)
            provenance[k] = "fast"
            changed = True
            if cache_path is not None:
                MomentTable(values, provenance).write(cache_path)

    if verify:
        for k in range(1, min(VERIFY_ORDER_MAX, k_max) + 1):
            direct = even_moment_direct(k)
            if values[k] != direct:
                raise MomentIntegrityError(
                    f"moment k={k}: {provenance[k]} value {values[k]} != "
                    f"direct value {direct}")
            provenance[k] = "direct"

    table = MomentTable(values, provenance)
    if cache_path is not None and changed:
        table.write(cache_path)
    return table

"""Assembly and rigorous verification of the counterexample certificate.

The chain being certified, entirely in exact arithmetic:

    E V <= E P(V) = B < 13/720 - pi^2/15015

where V is the volume of the simplex of three uniform points and a facet
centroid in a unit-volume tetrahedron, P is the even Hermite majorant built
on a node set, B is its exact expected value, and the right-hand side is the
expected volume with all four points random.  Since V never exceeds 1/3, the
majorant property is only needed on [0, 1/3].

Dominance of P over |x| is not taken on faith from the interpolation
construction: P(x) - x is deflated by the known double roots at the nodes and
the quotient is proven positive on [0, 1/3] by a Sturm-sequence root count
plus boundary signs.  A corrupted node file or a buggy interpolation breaks
the deflation or the root count, never the verdict's soundness.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .majorant import EvenPoly, NodeSet, expected_value, hermite_onesided
from .moments import MomentTable
from .rational import RationalInterval, fraction_to_decimal, target_enclosure

__version__ = "0.1.0"

#: upper end of the interval on which dominance is verified (V <= 1/3)
DOMAIN_MAX = Fraction(1, 3)

#: the published seven-node set whose certificate reproduces the bound
#: 0.0173791...; kept as the reference input for reproduction tests
REFERENCE_NODES = (
    Fraction(1, 83), Fraction(1, 22), Fraction(1, 11), Fraction(2, 15),
    Fraction(2, 11), Fraction(5, 22), Fraction(4, 15),
)

VERDICT_TRUE = "COUNTEREXAMPLE CERTIFIED"
VERDICT_FALSE = "NOT CERTIFIED"

_NOTE = (
    "A strict bound below 13/720 - pi^2/15015 exhibits a boundary point z "
    "(a facet centroid) with E|conv(X1,X2,X3,z)| < E|conv(X1,X2,X3,X4)| for "
    "uniform points in a tetrahedron; by Rademacher's equivalence between "
    "inclusion-monotonicity of the expected hull volume and the boundary-point "
    "inequality, the expected volume of the sample range is therefore not "
    "monotone under inclusion in dimension three. The equivalence itself is "
    "cited, not machine-checked."
)


class ReportFormatError(ValueError):
    """Certificate report text does not parse."""


# ---------------------------------------------------------------------------
# dense exact polynomial helpers (coefficients ascending in x)
# ---------------------------------------------------------------------------

def _trim(p: list[Fraction]) -> list[Fraction]:
    while len(p) > 1 and p[-1] == 0:
        p.pop()
    return p


def _poly_mul(p: Sequence[Fraction], q: Sequence[Fraction]) -> list[Fraction]:
    out = [Fraction(0)] * (len(p) + len(q) - 1)
    for i, a in enumerate(p):
        if a:
            for j, b in enumerate(q):
                if b:
                    out[i + j] += a * b
    return _trim(out)


def _poly_divmod(p: Sequence[Fraction], d: Sequence[Fraction]
                 ) -> tuple[list[Fraction], list[Fraction]]:
    rem = list(p)
    dn = len(d) - 1
    lead = d[-1]
    if len(rem) - 1 < dn:
        return [Fraction(0)], _trim(rem)
    quot = [Fraction(0)] * (len(rem) - dn)
    for i in range(len(rem) - 1, dn - 1, -1):
        c = rem[i] / lead
        quot[i - dn] = c
        if c:
            for j in range(dn + 1):
                rem[i - dn + j] -= c * d[j]
    return _trim(quot), _trim(rem)


def _poly_deriv(p: Sequence[Fraction]) -> list[Fraction]:
    if len(p) == 1:
        return [Fraction(0)]
    return [i * c for i, c in enumerate(p)][1:]


def _poly_eval(p: Sequence[Fraction], x: Fraction) -> Fraction:
    s = Fraction(0)
    for c in reversed(p):
        s = s * x + c
    return s


def _is_zero(p: Sequence[Fraction]) -> bool:
    return all(c == 0 for c in p)


def _primitive(p: Sequence[Fraction]) -> list[Fraction]:
    """Scale by a positive rational to integer coefficients with gcd 1.

    Positive scaling preserves every sign, so Sturm chains may use it freely;
    it keeps the numerators from snowballing along the chain.
    """
    from math import gcd
    den = 1
    for c in p:
        den = den * c.denominator // gcd(den, c.denominator)
    ints = [int(c * den) for c in p]
    g = 0
    for v in ints:
        g = gcd(g, abs(v))
    if g > 1:
        ints = [v // g for v in ints]
    return [Fraction(v) for v in ints]


def sturm_root_count(p: Sequence[Fraction], a: Fraction, b: Fraction) -> int:
    """Number of distinct real roots of p in the open interval (a, b).

    Classical Sturm chain p, p', then negated euclidean remainders; requires
    p(a) != 0 and p(b) != 0 (the count is then exact, multiple roots counted
    once).
    """
    p = _primitive(_trim(list(p)))
    if len(p) == 1:
        if p[0] == 0:
            raise ValueError("zero polynomial")
        return 0
    if _poly_eval(p, a) == 0 or _poly_eval(p, b) == 0:
        raise ValueError("Sturm endpoints must not be roots")
    chain = [p, _primitive(_poly_deriv(p))]
    while len(chain[-1]) > 1:
        _, rem = _poly_divmod(chain[-2], chain[-1])
        if _is_zero(rem):
            break
        chain.append(_primitive([-c for c in rem]))
    if len(chain[-1]) == 1 and chain[-1][0] == 0:
        chain.pop()

    def variations(x: Fraction) -> int:
        signs = []
        for q in chain:
            v = _poly_eval(q, x)
            if v != 0:
                signs.append(1 if v > 0 else -1)
        return sum(1 for s, t in zip(signs, signs[1:]) if s != t)

    return variations(a) - variations(b)


# ---------------------------------------------------------------------------
# dominance proof
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class DominanceProof:
    """Machine check that P(x) - x = prod_j (x - x_j)^2 * R(x) >= 0 on [0, 1/3].

    Valid iff the deflation remainder vanishes, R has no root in (0, 1/3),
    and R is positive at both endpoints.
    """

    quotient: tuple[Fraction, ...]
    remainder_is_zero: bool
    interior_root_count: int
    sign_at_zero: int
    sign_at_end: int

    @property
    def valid(self) -> bool:
        return (self.remainder_is_zero and self.interior_root_count == 0
                and self.sign_at_zero > 0 and self.sign_at_end > 0)


def verify_dominance(poly: EvenPoly, nodes: NodeSet) -> DominanceProof:
    """Deflate P(x) - x by the squared node factors and certify positivity.

    A nonzero remainder means the polynomial was not built from these nodes;
    a root of the quotient inside (0, 1/3) or a nonpositive boundary value
    means dominance fails.  All arithmetic is exact.
    """
    n = poly.degree
    diff = [Fraction(0)] * max(n + 1, 2)
    for i, a in enumerate(poly.coeffs):
        diff[2 * i] = a
    diff[1] -= 1
    diff = _trim(diff)

    divisor = [Fraction(1)]
    for x in nodes:
        divisor = _poly_mul(divisor, [x * x, -2 * x, Fraction(1)])

    quotient, remainder = _poly_divmod(diff, divisor)
    remainder_is_zero = _is_zero(remainder)
    if not remainder_is_zero:
        return DominanceProof(tuple(quotient), False, -1, 0, 0)

    r0 = _poly_eval(quotient, Fraction(0))
    r1 = _poly_eval(quotient, DOMAIN_MAX)
    sign0 = 0 if r0 == 0 else (1 if r0 > 0 else -1)
    sign1 = 0 if r1 == 0 else (1 if r1 > 0 else -1)
    if sign0 == 0 or sign1 == 0:
        return DominanceProof(tuple(quotient), True, -1, sign0, sign1)
    count = sturm_root_count(quotient, Fraction(0), DOMAIN_MAX)
    return DominanceProof(tuple(quotient), True, count, sign0, sign1)


# ---------------------------------------------------------------------------
# certificate
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Certificate:
    nodes: tuple[Fraction, ...]
    p_cert: EvenPoly
    bound: Fraction
    target: RationalInterval
    dominance: DominanceProof
    verdict: bool
    metadata: dict = field(default_factory=dict)

    @property
    def margin(self) -> Fraction:
        """target.lo - bound; positive exactly when the comparison certifies."""
        return self.target.lo - self.bound


def certify(nodes: NodeSet, moments: MomentTable,
            metadata: dict | None = None) -> Certificate:
    """Build the majorant on `nodes` and verify the full chain exactly.

    Missing moment orders raise (no verdict is rendered from incomplete
    data); a failed dominance proof or a non-strict comparison yields a
    verdict-false certificate with full diagnostics.
    """
    p_cert = hermite_onesided(nodes)
    bound = expected_value(p_cert, moments)
    dominance = verify_dominance(p_cert, nodes)
    target = target_enclosure()
    verdict = dominance.valid and bound < target.lo
    meta = {"tool": f"tetravol {__version__}",
            "moments": moments.provenance_summary()}
    meta.update(metadata or {})
    return Certificate(
        nodes=tuple(nodes),
        p_cert=p_cert,
        bound=bound,
        target=target,
        dominance=dominance,
        verdict=verdict,
        metadata=meta,
    )


# ---------------------------------------------------------------------------
# report rendering and parsing
# ---------------------------------------------------------------------------

_REPORT_HEADER = "tetravol-certificate v1"


def _frac_str(x: Fraction) -> str:
    return f"{x.numerator}/{x.denominator}"


def render_report(cert: Certificate) -> str:
    """Line-oriented report with every field as an exact fraction.

    The decimal expansions are informational; parsing reads only the exact
    fields, and `parse_report(render_report(c))` reproduces `c` exactly.
    """
    lines = [_REPORT_HEADER]
    for key in sorted(cert.metadata):
        lines.append(f"meta {key}: {cert.metadata[key]}")
    lines.append("nodes: " + " ".join(_frac_str(x) for x in cert.nodes))
    for i, c in enumerate(cert.p_cert.coeffs):
        lines.append(f"coefficient {i}: {_frac_str(c)}")
    lines.append(f"bound: {_frac_str(cert.bound)}")
    lines.append(f"bound-decimal: {fraction_to_decimal(cert.bound, 20)}")
    lines.append(f"target-lo: {_frac_str(cert.target.lo)}")
    lines.append(f"target-hi: {_frac_str(cert.target.hi)}")
    lines.append(f"margin: {_frac_str(cert.margin)}")
    if not cert.verdict and cert.margin < 0:
        lines.append(f"deficit: {_frac_str(-cert.margin)}")
    d = cert.dominance
    lines.append("dominance-quotient: " + " ".join(_frac_str(c) for c in d.quotient))
    lines.append(f"dominance-remainder-zero: {'yes' if d.remainder_is_zero else 'no'}")
    lines.append(f"dominance-root-count: {d.interior_root_count}")
    lines.append(f"dominance-sign-at-0: {d.sign_at_zero:+d}")
    lines.append(f"dominance-sign-at-end: {d.sign_at_end:+d}")
    lines.append(f"dominance-valid: {'yes' if d.valid else 'no'}")
    lines.append(f"verdict: {VERDICT_TRUE if cert.verdict else VERDICT_FALSE}")
    lines.append(f"note: {_NOTE}")
    return "\n".join(lines) + "\n"


def parse_report(text: str) -> Certificate:
    lines = [ln for ln in text.split("\n") if ln]
    if not lines or lines[0] != _REPORT_HEADER:
        raise ReportFormatError(f"missing header {_REPORT_HEADER!r}")
    fields: dict[str, str] = {}
    metadata: dict[str, str] = {}
    coeffs: dict[int, Fraction] = {}
    for line in lines[1:]:
        key, _, value = line.partition(": ")
        if not _:
            raise ReportFormatError(f"unparseable line: {line!r}")
        if key.startswith("meta "):
            metadata[key[5:]] = value
        elif key.startswith("coefficient "):
            coeffs[int(key.split()[1])] = Fraction(value)
        else:
            fields[key] = value
    try:
        nodes = tuple(Fraction(tok) for tok in fields["nodes"].split())
        poly = EvenPoly(tuple(coeffs[i] for i in sorted(coeffs)))
        bound = Fraction(fields["bound"])
        target = RationalInterval(Fraction(fields["target-lo"]),
                                  Fraction(fields["target-hi"]))
        quotient = tuple(Fraction(tok) for tok in fields["dominance-quotient"].split())
        dominance = DominanceProof(
            quotient=quotient,
            remainder_is_zero=fields["dominance-remainder-zero"] == "yes",
            interior_root_count=int(fields["dominance-root-count"]),
            sign_at_zero=int(fields["dominance-sign-at-0"]),
            sign_at_end=int(fields["dominance-sign-at-end"]),
        )
        verdict = fields["verdict"] == VERDICT_TRUE
    except KeyError as exc:
        raise ReportFormatError(f"missing field {exc}") from exc
    return Certificate(nodes, poly, bound, target, dominance, verdict, metadata)

"""
The generic twisted Hall algebra in the PBW basis {e_M}.

Scalars are exact Laurent polynomials in v with q = v^2.  Structure
constants:

    e_M e_N = sum_X v^(end M + end N + <dim M, dim N> - end X) F^X_{M,N}(v^2) e_X

and the bar involution is read off from

    Omega-bar_{M,N}(q) = F^M_{N_nu..N_1}(q) prod_s a_{N_s}(q) / a_M(q),
    omega_{M,N} = v^(end N - end M) * bar(Omega-bar_{M,N}(v^2)),

so that bar(e_M) = sum_N omega_{M,N} e_N.
"""

import logging
from typing import Dict, Iterable, List, Mapping, Sequence, Tuple

import attrs
from sympy import Integer, cancel

from .errors import DimensionMismatchError, InexactDivisionError
from .hall_numbers import HallCounter
from .orbits import OrbitCatalog, OrbitLabel
from .polynomials import IntPolyQ, LaurentPolyV, V
from .quiver import DimVector, euler_form

__all__ = ["HallElement", "HallAlgebra", "BarMatrix", "InvolutionReport"]

logger = logging.getLogger(__name__)


def _terms_converter(terms) -> Tuple[Tuple[OrbitLabel, LaurentPolyV], ...]:
    if isinstance(terms, Mapping):
        terms = terms.items()
    return tuple(sorted((label, c) for label, c in terms if not c.is_zero()))


@attrs.frozen
class HallElement:
    """Finite combination sum_M c_M e_M, all labels of dimension type ``dim``."""

    dim: DimVector = attrs.field(converter=tuple)
    terms: Tuple[Tuple[OrbitLabel, LaurentPolyV], ...] = attrs.field(converter=_terms_converter, default=())

    def coefficient(self, label: OrbitLabel) -> LaurentPolyV:
        return dict(self.terms).get(label, LaurentPolyV())

    def as_dict(self) -> Dict[OrbitLabel, LaurentPolyV]:
        return dict(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def __add__(self, other: "HallElement") -> "HallElement":
        if other.dim != self.dim:
            raise DimensionMismatchError(f"adding elements of dimension types {self.dim} and {other.dim}")
        out = self.as_dict()
        for label, c in other.terms:
            out[label] = out.get(label, LaurentPolyV()) + c
        return HallElement(self.dim, out)

    def scale(self, c: LaurentPolyV) -> "HallElement":
        return HallElement(self.dim, {label: c * x for label, x in self.terms})


@attrs.frozen
class BarMatrix:
    """Omega-bar over the sorted labels of one dimension type; rows M, columns N."""

    dim: DimVector
    labels: Tuple[OrbitLabel, ...]
    end_dims: Tuple[int, ...]
    entries: Tuple[Tuple[IntPolyQ, ...], ...]

    def index(self, label: OrbitLabel) -> int:
        return self.labels.index(label)

    def omega_bar(self, M: OrbitLabel, N: OrbitLabel) -> IntPolyQ:
        return self.entries[self.index(M)][self.index(N)]

    def omega(self, M: OrbitLabel, N: OrbitLabel) -> LaurentPolyV:
        """e_N-coefficient of bar(e_M)."""
        i, j = self.index(M), self.index(N)
        return self.entries[i][j].to_laurent().bar().shift(self.end_dims[j] - self.end_dims[i])

    def big_omega(self, M: OrbitLabel, N: OrbitLabel) -> LaurentPolyV:
        """v^(end M - end N) omega_{M,N}, a polynomial in v^-2."""
        i, j = self.index(M), self.index(N)
        return self.omega(M, N).shift(self.end_dims[i] - self.end_dims[j])


@attrs.frozen
class InvolutionReport:
    dim: DimVector
    checked: int
    failures: Tuple[str, ...] = ()

    @property
    def ok(self) -> bool:
        return not self.failures


class HallAlgebra:
    """
    PBW arithmetic over the Hall polynomials of a :class:`HallCounter`.

    Basis products and bar matrices are memoized per instance.
    """

    def __init__(self, counter: HallCounter):
        self.counter = counter
        self.catalog: OrbitCatalog = counter.catalog
        self._products: Dict[Tuple[OrbitLabel, OrbitLabel], HallElement] = {}
        self._bar: Dict[DimVector, BarMatrix] = {}

    # -- basis ---------------------------------------------------------------

    def basis_element(self, label: OrbitLabel) -> HallElement:
        return HallElement(self.catalog.dim_vector(label), {label: LaurentPolyV.one()})

    def unit(self) -> HallElement:
        return self.basis_element(self.catalog.zero())

    def zero(self, d: Sequence[int]) -> HallElement:
        return HallElement(tuple(d))

    def dual_basis_element(self, label: OrbitLabel) -> HallElement:
        """e_M* = v^(-2 end M) a_M(v^2) e_M."""
        scalar = self.catalog.aut_order_poly(label).to_laurent().shift(-2 * self.catalog.end_dim(label))
        return HallElement(self.catalog.dim_vector(label), {label: scalar})

    # -- products --------------------------------------------------------------

    def _basis_product(self, M: OrbitLabel, N: OrbitLabel) -> HallElement:
        key = (M, N)
        if key not in self._products:
            cat = self.catalog
            dm, dn = cat.dim_vector(M), cat.dim_vector(N)
            d = tuple(a + b for a, b in zip(dm, dn))
            base = cat.end_dim(M) + cat.end_dim(N) + euler_form(cat.quiver, dm, dn)
            terms = {}
            for X in cat.labels(d):
                poly = self.counter.hall_polynomial(X, M, N)
                if not poly.is_zero():
                    terms[X] = poly.to_laurent().shift(base - cat.end_dim(X))
            self._products[key] = HallElement(d, terms)
        return self._products[key]

    def pbw_product(self, x: HallElement, y: HallElement) -> HallElement:
        d = tuple(a + b for a, b in zip(x.dim, y.dim))
        out = HallElement(d)
        for M, a in x.terms:
            for N, b in y.terms:
                out = out + self._basis_product(M, N).scale(a * b)
        return out

    def product(self, factors: Iterable[HallElement]) -> HallElement:
        out = self.unit()
        for f in factors:
            out = self.pbw_product(out, f)
        return out

    def green_form(self, x: HallElement, y: HallElement):
        """(e_M, e_N) = v^(2 end N) / a_M(v^2) delta_{M,N}, extended bilinearly; a sympy expression."""
        if x.dim != y.dim:
            return Integer(0)
        ys = y.as_dict()
        total = Integer(0)
        for M, a in x.terms:
            if M in ys:
                aut = self.catalog.aut_order_poly(M).to_laurent().to_expr()
                pairing = V ** (2 * self.catalog.end_dim(M)) / aut
                total += a.to_expr() * ys[M].to_expr() * pairing
        return cancel(total)

    # -- bar involution --------------------------------------------------------

    def bar_coefficient_bar(self, M: OrbitLabel, N: OrbitLabel) -> IntPolyQ:
        """
        Omega-bar_{M,N}(q).

        :raises InexactDivisionError: if a_M does not divide the numerator in Z[q].
        """
        cat = self.catalog
        if cat.dim_vector(M) != cat.dim_vector(N):
            raise DimensionMismatchError(f"{cat.name(M)} and {cat.name(N)} have different dimension types")
        numerator = self.counter.generalized_hall_polynomial(M, N)
        if numerator.is_zero():
            return numerator
        for layer in N.layers():
            if not layer.is_zero():
                numerator = numerator * cat.aut_order_poly(layer)
        try:
            return numerator.exact_div(cat.aut_order_poly(M))
        except InexactDivisionError as exc:
            raise InexactDivisionError(f"Omega-bar_{{{cat.name(M)},{cat.name(N)}}}: {exc}") from exc

    def bar_matrix(self, d: Sequence[int]) -> BarMatrix:
        d = tuple(d)
        if d not in self._bar:
            labels = tuple(self.catalog.labels(d))
            entries = tuple(tuple(self.bar_coefficient_bar(M, N) for N in labels) for M in labels)
            self._bar[d] = BarMatrix(d, labels, tuple(self.catalog.end_dim(L) for L in labels), entries)
            logger.info("bar matrix for d=%s: %d orbits", d, len(labels))
        return self._bar[d]

    def bar(self, x: HallElement) -> HallElement:
        """The ring involution fixing the e_{S_i} and sending v to v^-1."""
        matrix = self.bar_matrix(x.dim)
        out = HallElement(x.dim)
        for M, c in x.terms:
            row = {N: matrix.omega(M, N) for N in matrix.labels}
            out = out + HallElement(x.dim, row).scale(c.bar())
        return out

    def verify_involution(self, d: Sequence[int]) -> InvolutionReport:
        """
        Exact checks on dimension type d: sum_N bar(omega_{M,N}) omega_{N,P} = delta_{M,P};
        bar(e_A e_B) = bar(e_A) bar(e_B) whenever dim A + dim B = d; bar(e_{S_i^n}) = e_{S_i^n}.
        """
        cat = self.catalog
        d = tuple(d)
        matrix = self.bar_matrix(d)
        failures: List[str] = []
        checked = 0
        for M in matrix.labels:
            for P in matrix.labels:
                total = LaurentPolyV()
                for N in matrix.labels:
                    total = total + matrix.omega(M, N).bar() * matrix.omega(N, P)
                expected = LaurentPolyV.one() if M == P else LaurentPolyV()
                checked += 1
                if total != expected:
                    failures.append(f"involution: ({cat.name(M)}, {cat.name(P)}) entry is {total}")
        for e in _sub_dims(d):
            f = tuple(a - b for a, b in zip(d, e))
            if not any(e) or not any(f):
                continue
            for A in cat.labels(e):
                for B in cat.labels(f):
                    ea, eb = self.basis_element(A), self.basis_element(B)
                    lhs = self.bar(self.pbw_product(ea, eb))
                    rhs = self.pbw_product(self.bar(ea), self.bar(eb))
                    checked += 1
                    if lhs != rhs:
                        failures.append(f"multiplicativity: bar(e_{cat.name(A)} e_{cat.name(B)}) differs")
        support = [i for i, x in enumerate(d) if x]
        if len(support) == 1:
            label = cat.labels(d)[0]
            checked += 1
            if self.bar(self.basis_element(label)) != self.basis_element(label):
                failures.append(f"simple power {cat.name(label)} is not bar-invariant")
        report = InvolutionReport(d, checked, tuple(failures))
        logger.info("involution checks on d=%s: %d checked, %d failed", d, checked, len(failures))
        return report


def _sub_dims(d: Sequence[int]) -> List[DimVector]:
    out: List[DimVector] = [()]
    for x in d:
        out = [prefix + (k,) for prefix in out for k in range(x + 1)]
    return out

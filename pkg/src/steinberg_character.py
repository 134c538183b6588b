"""
Steinberg character on split very regular and topologically unipotent elements

Every evaluation returns an exact LaurentPoly in v = q^(1/2). The alternating sum
over pairs (J, w) with w a minimal coset representative is tabulated once per
root datum; evaluating it at a cocharacter is then a vectorised pairing.
"""

from dataclasses import dataclass, field
from enum import Enum
from functools import lru_cache
from itertools import combinations
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple

import numpy as np
import pandas as pd
from loguru import logger

from src.errors import CalculatorError, NotDominantError, ParseError
from src.exact_ring import LaurentPoly
from src.root_datum import Cochar, RootDatum
from src.weyl_group import WeylElt, WeylGroup, weyl_group


class CharMethod(Enum):
    """How a character value was obtained"""
    CLOSED_FORM = "closed-form"
    ALTERNATING_SUM = "alternating-sum"
    XW_COLLAPSE = "xw-collapse"
    THM43 = "thm43"
    COROLLARY34 = "cor34"


@dataclass(frozen=True)
class CharResult:
    value: LaurentPoly
    method: CharMethod
    datum: str
    y: Cochar
    dominant_y: Optional[Cochar] = None

    def to_dict(self) -> Dict:
        record = {
            "datum": self.datum,
            "y": list(self.y),
            "method": self.method.value,
            "value": str(self.value),
            "terms": self.value.to_json(),
        }
        if self.dominant_y is not None and self.dominant_y != self.y:
            record["dominant_y"] = list(self.dominant_y)
        return record


@dataclass(frozen=True)
class UnipotentData:
    """Valuations n_alpha >= 1 on the positive roots, extended by n_-alpha = n_alpha"""
    datum: RootDatum
    n: Tuple[int, ...]

    def __post_init__(self):
        if len(self.n) != self.datum.num_positive:
            raise ParseError("n_alpha", f"expected {self.datum.num_positive} values, got {len(self.n)}")
        if any(int(value) < 1 for value in self.n):
            raise ParseError("n_alpha", f"every n_alpha must be >= 1, got {list(self.n)}")

    def n_of(self, root_index: int) -> int:
        return self.n[root_index % self.datum.num_positive]

    @property
    def total(self) -> int:
        """Sum of n_alpha over all of R"""
        return 2 * sum(self.n)

    @classmethod
    def constant(cls, datum: RootDatum, value: int) -> "UnipotentData":
        return cls(datum, tuple([value] * datum.num_positive))

    @classmethod
    def from_mapping(cls, datum: RootDatum, mapping: Mapping) -> "UnipotentData":
        """Keys are 1-based positive-root indices as in the root dump"""
        values = [None] * datum.num_positive
        for key, value in mapping.items():
            try:
                index, value = int(key), int(value)
            except (TypeError, ValueError):
                raise ParseError("n_alpha", f"bad entry {key!r}: {value!r}")
            if not 1 <= index <= datum.num_positive:
                raise ParseError("n_alpha", f"root index {index} outside 1..{datum.num_positive}")
            values[index - 1] = value
        missing = [k + 1 for k, value in enumerate(values) if value is None]
        if missing:
            raise ParseError("n_alpha", f"no value for positive roots {missing}")
        return cls(datum, tuple(values))

    @classmethod
    def random(cls, datum: RootDatum, rng: np.random.Generator, max_n: int = 4) -> "UnipotentData":
        return cls(datum, tuple(int(v) for v in rng.integers(1, max_n + 1, size=datum.num_positive)))


@dataclass
class TermTable:
    """Per-(J, w) data of the alternating sum"""
    subsets: List[Tuple[int, ...]] = field(default_factory=list)
    elements: List[WeylElt] = field(default_factory=list)
    signs: np.ndarray = None
    delta_vectors: np.ndarray = None
    d_vectors: np.ndarray = None
    x_vectors: np.ndarray = None
    unipotent_counts: np.ndarray = None

    def __len__(self) -> int:
        return len(self.elements)


def all_subsets(indices: Sequence[int]) -> List[Tuple[int, ...]]:
    return [subset for size in range(len(indices) + 1) for subset in combinations(indices, size)]


class SteinbergCharacter:
    """Character formulas for one root datum"""

    def __init__(self, datum: RootDatum):
        self.datum = datum
        self.weyl: WeylGroup = weyl_group(datum)
        self.n_pos = datum.num_positive
        self._table: Optional[TermTable] = None
        self._w0 = self.weyl.longest_element()

    # -- x_w and c_w --------------------------------------------------------

    def x_w(self, w: WeylElt) -> Tuple[int, ...]:
        """2 * sum of w^-1(alpha) over positive alpha with w^-1(alpha) negative"""
        inverse = w.inverse_perm
        images = [inverse[k] for k in range(self.n_pos) if inverse[k] >= self.n_pos]
        total = self.datum.root_array[images].sum(axis=0) if images else np.zeros(self.datum.rank, dtype=np.int64)
        return tuple(int(2 * c) for c in total)

    def x_wj(self, w: WeylElt, subset: Iterable[int]) -> Tuple[int, ...]:
        """2 * sum of w^-1(alpha) over alpha in R+ - R_J+ with w^-1(alpha) negative"""
        in_j = set(self.weyl.parabolic_roots(subset).positive)
        inverse = w.inverse_perm
        images = [inverse[k] for k in range(self.n_pos) if k not in in_j and inverse[k] >= self.n_pos]
        total = self.datum.root_array[images].sum(axis=0) if images else np.zeros(self.datum.rank, dtype=np.int64)
        return tuple(int(2 * c) for c in total)

    def c_w(self, w: WeylElt) -> int:
        """Sum of (-1)^|J| over J contained in L(w)"""
        ascents = sorted(self.weyl.descent_set(w))
        return sum((-1) ** len(subset) for subset in all_subsets(ascents))

    # -- term table ---------------------------------------------------------

    def terms(self) -> TermTable:
        if self._table is None:
            self._table = self._build_table()
        return self._table

    def _build_table(self) -> TermTable:
        logger.info(f"Tabulating alternating-sum terms for {self.datum.descriptor}")
        roots = self.datum.root_array
        table = TermTable()
        signs, deltas, ds, xs, counts = [], [], [], [], []

        for subset in all_subsets(self.datum.simple_indices):
            parabolic = self.weyl.parabolic_roots(subset)
            in_j = np.zeros(2 * self.n_pos, dtype=bool)
            in_j[list(parabolic.roots)] = True
            outside_positive = np.array([k for k in range(self.n_pos) if not in_j[k]], dtype=np.int64)
            outside_all = np.flatnonzero(~in_j)
            j_roots = np.array(parabolic.roots, dtype=np.int64)

            for w in self.weyl.min_coset_reps(subset):
                inverse = np.asarray(w.inverse_perm, dtype=np.int64)
                # delta_J^(1/2): alpha in R+ - R_J+
                delta = roots[inverse[outside_positive]].sum(axis=0) if len(outside_positive) else np.zeros(self.datum.rank, dtype=np.int64)
                # D_{I,J}^(-1/2): alpha in R - R_J with w^-1(alpha) positive
                images = inverse[outside_all]
                kept = images[images < self.n_pos]
                d = roots[kept].sum(axis=0) if len(kept) else np.zeros(self.datum.rank, dtype=np.int64)

                x = np.array(self.x_wj(w, subset), dtype=np.int64)
                if not np.array_equal(delta - d, x):
                    raise CalculatorError(f"x_(w,J) mismatch at J={subset}, w={w}")
                if tuple(int(c) for c in x) != self.x_w(w):
                    raise CalculatorError(f"x_(w,J) != x_w at J={subset}, w={w}")

                count = np.zeros(self.n_pos, dtype=np.int64)
                if len(j_roots):
                    np.add.at(count, inverse[j_roots] % self.n_pos, 1)

                table.subsets.append(tuple(subset))
                table.elements.append(w)
                signs.append((-1) ** len(subset))
                deltas.append(delta)
                ds.append(d)
                xs.append(x)
                counts.append(count)

        table.signs = np.array(signs, dtype=np.int64)
        table.delta_vectors = np.array(deltas, dtype=np.int64)
        table.d_vectors = np.array(ds, dtype=np.int64)
        table.x_vectors = np.array(xs, dtype=np.int64)
        table.unipotent_counts = np.array(counts, dtype=np.int64)
        logger.debug(f"{len(table)} terms for {self.datum.descriptor}")
        return table

    def terms_frame(self, y: Sequence[int]) -> pd.DataFrame:
        """One row per (J, w) with the sign, x_(w,J) and v-exponent at y"""
        y = self._require_dominant(y)
        table = self.terms()
        exponents = self._exponents(y)
        return pd.DataFrame({
            "J": [",".join(map(str, subset)) or "-" for subset in table.subsets],
            "w": [str(w) for w in table.elements],
            "sign": table.signs,
            "x_wJ": [tuple(int(c) for c in x) for x in table.x_vectors],
            "v_exponent": exponents,
        })

    # -- evaluations --------------------------------------------------------

    def _require_dominant(self, y: Sequence[int]) -> Cochar:
        y = self.datum.check_cochar(y)
        if not self.datum.is_dominant(y):
            raise NotDominantError(f"y = {y} is not dominant for {self.datum.descriptor}")
        return y

    def _exponents(self, y: Cochar) -> np.ndarray:
        table = self.terms()
        y_prime = self.weyl.act_on_cochar(self._w0, y)
        pairing_row = np.asarray(y_prime, dtype=np.int64) @ self.datum.pairing_matrix
        delta_exponent = -(table.delta_vectors @ pairing_row)
        d_exponent = table.d_vectors @ pairing_row
        exponents = delta_exponent + d_exponent
        if not np.array_equal(exponents, -(table.x_vectors @ pairing_row)):
            raise CalculatorError(f"Exponent mismatch against -<y', x_(w,J)> at y = {y}")
        return exponents

    @staticmethod
    def _collect(exponents: np.ndarray, signs: np.ndarray) -> LaurentPoly:
        terms: Dict[int, int] = {}
        for exponent, sign in zip(exponents.tolist(), signs.tolist()):
            terms[exponent] = terms.get(exponent, 0) + sign
        return LaurentPoly(terms)

    def alternating_sum(self, y: Sequence[int], conjugate: bool = False) -> CharResult:
        original = self.datum.check_cochar(y)
        dominant = original
        if conjugate:
            _, dominant = self.datum.dominant_conjugate_word(original)
        dominant = self._require_dominant(dominant)
        value = self._collect(self._exponents(dominant), self.terms().signs)
        return CharResult(value, CharMethod.ALTERNATING_SUM, self.datum.descriptor, original, dominant)

    def xw_collapse(self, y: Sequence[int]) -> CharResult:
        """Sum over all of W of c_w v^(-<y', x_w>)"""
        y = self._require_dominant(y)
        y_prime = self.weyl.act_on_cochar(self._w0, y)
        terms: Dict[int, int] = {}
        for w in self.weyl.elements:
            c = self.c_w(w)
            if c:
                exponent = -self.datum.pairing(y_prime, self.x_w(w))
                terms[exponent] = terms.get(exponent, 0) + c
        return CharResult(LaurentPoly(terms), CharMethod.XW_COLLAPSE, self.datum.descriptor, y, y)

    def closed_form(self, y: Sequence[int]) -> CharResult:
        """q^(-<y+, 2 rho>) with y+ the dominant conjugate of y"""
        original = self.datum.check_cochar(y)
        _, dominant = self.datum.dominant_conjugate_word(original)
        value = LaurentPoly.q_power(-self.datum.pairing(dominant, self.datum.two_rho))
        return CharResult(value, CharMethod.CLOSED_FORM, self.datum.descriptor, original, dominant)

    def d_i_exponent(self, y: Sequence[int]) -> int:
        """v-exponent of D_I(t'), the (J, w) = (empty, 1) specialization"""
        y = self._require_dominant(y)
        y_prime = self.weyl.act_on_cochar(self._w0, y)
        return -2 * self.datum.pairing(y_prime, self.datum.two_rho)

    def unipotent_expansion(self, data: UnipotentData) -> LaurentPoly:
        """Sum over (J, w) of (-1)^|J| v^(sum_R n_alpha - sum_{R_J} n_{w^-1 alpha})"""
        if data.datum != self.datum:
            raise CalculatorError(f"Unipotent data for {data.datum.descriptor} used with {self.datum.descriptor}")
        table = self.terms()
        n = np.asarray(data.n, dtype=np.int64)
        exponents = data.total - table.unipotent_counts @ n
        return self._collect(exponents, table.signs)

    def corollary34_split(self, y: Sequence[int]) -> CharResult:
        """Split-case sign times delta of the standard parabolic of type J(y+)"""
        original = self.datum.check_cochar(y)
        _, dominant = self.datum.dominant_conjugate_word(original)
        zeros = [i for i, p in enumerate(self.datum.simple_pairings(dominant), start=1) if p == 0]
        in_j = set(self.weyl.parabolic_roots(zeros).positive)
        pairings = self.datum.root_pairings(dominant)
        exponent = sum(int(pairings[k]) for k in range(self.n_pos) if k not in in_j)
        sign = cvr_sign(self.datum.rank, self.datum.rank)
        value = LaurentPoly.q_power(-exponent, sign)
        return CharResult(value, CharMethod.COROLLARY34, self.datum.descriptor, original, dominant)

    # -- facets -------------------------------------------------------------

    def facet_euler_check(self, cross_check: bool = False) -> "EulerReport":
        """Signed count of standard facets by type J against (-1)^rank"""
        rank = self.datum.rank
        order = self.weyl.order_formula()
        rows = []
        for subset in all_subsets(self.datum.simple_indices):
            sub_order = self.weyl.order_formula(subset)
            if cross_check and len(self.weyl.parabolic_subgroup(subset)) != sub_order:
                raise CalculatorError(f"|W_J| formula disagrees with enumeration for J={subset}")
            sign = (-1) ** (rank - len(subset))
            rows.append({
                "J": ",".join(map(str, subset)) or "-",
                "size": len(subset),
                "order_WJ": sub_order,
                "facets": order // sub_order,
                "dim_A": rank - len(subset),
                "signed": sign * (order // sub_order),
            })
        signed_count = sum(row["signed"] for row in rows)
        expected = (-1) ** rank
        return EulerReport(
            datum=self.datum.descriptor,
            rows=rows,
            signed_count=signed_count,
            expected=expected,
            holds=signed_count == expected,
            character_value=(-1) ** rank * signed_count,
        )


@dataclass
class EulerReport:
    datum: str
    rows: List[Dict]
    signed_count: int
    expected: int
    holds: bool
    character_value: int

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame(self.rows)

    def to_dict(self) -> Dict:
        return {
            "datum": self.datum,
            "signed_count": self.signed_count,
            "expected": self.expected,
            "holds": self.holds,
            "character_value": self.character_value,
            "rows": self.rows,
        }


def cvr_sign(dim_t: int, dim_a_prime: int) -> int:
    """(-1)^(dim T - dim A')"""
    if not 0 <= dim_a_prime <= dim_t:
        raise CalculatorError(f"need 0 <= dim A' <= dim T, got dim T = {dim_t}, dim A' = {dim_a_prime}")
    return -1 if (dim_t - dim_a_prime) % 2 else 1


@lru_cache(maxsize=64)
def steinberg_character(datum: RootDatum) -> SteinbergCharacter:
    return SteinbergCharacter(datum)


def x_w(datum: RootDatum, w: WeylElt) -> Tuple[int, ...]:
    return steinberg_character(datum).x_w(w)


def c_w(datum: RootDatum, w: WeylElt) -> int:
    return steinberg_character(datum).c_w(w)


def steinberg_alternating_sum(datum: RootDatum, y: Sequence[int], conjugate: bool = False) -> CharResult:
    return steinberg_character(datum).alternating_sum(y, conjugate)


def steinberg_closed_form(datum: RootDatum, y: Sequence[int]) -> CharResult:
    return steinberg_character(datum).closed_form(y)


def xw_collapse(datum: RootDatum, y: Sequence[int]) -> CharResult:
    return steinberg_character(datum).xw_collapse(y)


def unipotent_expansion(data: UnipotentData) -> LaurentPoly:
    return steinberg_character(data.datum).unipotent_expansion(data)


def facet_euler_check(datum: RootDatum, cross_check: bool = False) -> EulerReport:
    return steinberg_character(datum).facet_euler_check(cross_check)


def corollary34_split(datum: RootDatum, y: Sequence[int]) -> CharResult:
    return steinberg_character(datum).corollary34_split(y)


def d_i_exponent(datum: RootDatum, y: Sequence[int]) -> int:
    return steinberg_character(datum).d_i_exponent(y)

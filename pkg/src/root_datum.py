"""
Split root data of almost simple groups

A RootDatum carries the Cartan matrix of an irreducible type A-G, the full root
system generated from the simple roots, the matching coroots, and a lattice Y of
cocharacters sitting between the coroot lattice Y' and the coweight lattice.

Conventions:
- roots (elements of X) are integer vectors in the basis of simple roots;
- cocharacters are integer vectors in the chosen basis of Y;
- the Cartan matrix entry C[i][j] is <alpha_i^vee, alpha_j>;
- simple indices are 1-based in every public interface (I0 = {1, ..., rank}).
"""

from collections import deque
from enum import Enum
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple, Union

import numpy as np
import sympy
from loguru import logger

from config import DEFAULT_MAX_RANK
from src.errors import CapExceededError, DatumMismatchError, ParseError, RootDatumError

Cochar = Tuple[int, ...]
RootVector = Tuple[int, ...]

VALID_RANKS = {
    "A": lambda n: n >= 1,
    "B": lambda n: n >= 2,
    "C": lambda n: n >= 2,
    "D": lambda n: n >= 4,
    "E": lambda n: n in (6, 7, 8),
    "F": lambda n: n == 4,
    "G": lambda n: n == 2,
}

POSITIVE_ROOT_COUNTS = {
    "A": lambda n: n * (n + 1) // 2,
    "B": lambda n: n * n,
    "C": lambda n: n * n,
    "D": lambda n: n * (n - 1),
    "E": lambda n: {6: 36, 7: 63, 8: 120}[n],
    "F": lambda n: 24,
    "G": lambda n: 6,
}


class Dominance(Enum):
    """Position of a cocharacter relative to the dominant chamber"""
    STRICTLY_DOMINANT = "strictly-dominant"
    DOMINANT = "dominant"
    NON_DOMINANT = "non-dominant"


def cartan_matrix(cartan_type: str, rank: int) -> List[List[int]]:
    """Cartan matrix in Bourbaki numbering, C[i][j] = <alpha_i^vee, alpha_j>"""
    cartan_type = cartan_type.upper()
    if cartan_type not in VALID_RANKS or not VALID_RANKS[cartan_type](rank):
        raise RootDatumError(f"Invalid type/rank pair: {cartan_type}{rank}")

    n = rank
    c = [[2 if i == j else 0 for j in range(n)] for i in range(n)]

    def link(i: int, j: int, a_ij: int = -1, a_ji: int = -1):
        c[i][j] = a_ij
        c[j][i] = a_ji

    if cartan_type in "ABC":
        for i in range(n - 1):
            link(i, i + 1)
        if cartan_type == "B":
            # alpha_n short
            c[n - 1][n - 2] = -2
        elif cartan_type == "C":
            # alpha_n long
            c[n - 2][n - 1] = -2
    elif cartan_type == "D":
        for i in range(n - 2):
            link(i, i + 1)
        link(n - 3, n - 1)
    elif cartan_type == "E":
        # 1-3-4-5-6(-7-8) with 2 attached to 4
        for i, j in [(0, 2), (2, 3), (3, 4), (4, 5), (5, 6), (6, 7)]:
            if j < n:
                link(i, j)
        link(1, 3)
    elif cartan_type == "F":
        link(0, 1)
        link(1, 2, a_ij=-1, a_ji=-2)
        link(2, 3)
    elif cartan_type == "G":
        # alpha_1 short, alpha_2 long
        link(0, 1, a_ij=-3, a_ji=-1)
    return c


def _to_sympy_matrix(rows) -> sympy.Matrix:
    try:
        return sympy.Matrix([[sympy.Rational(str(entry)) for entry in row] for row in rows])
    except (TypeError, ValueError, sympy.SympifyError) as exc:
        raise RootDatumError(f"Lattice basis is not a rational matrix: {exc}")


class RootDatum:
    """Immutable split root datum of an almost simple group"""

    def __init__(self, cartan_type: str, rank: int, lattice: str = "sc",
                 lattice_basis: Optional[Sequence[Sequence]] = None,
                 max_rank: Optional[int] = None):
        max_rank = DEFAULT_MAX_RANK if max_rank is None else max_rank
        if rank > max_rank:
            raise CapExceededError("rank", rank, max_rank)

        self.cartan_type = cartan_type.upper()
        self.rank = rank
        self.cartan = cartan_matrix(self.cartan_type, rank)
        self.cartan_array = np.array(self.cartan, dtype=np.int64)

        self.lattice = lattice
        basis = self._lattice_basis_matrix(lattice, lattice_basis)
        self.lattice_basis: Tuple[Tuple[Fraction, ...], ...] = tuple(
            tuple(Fraction(int(entry.p), int(entry.q)) for entry in basis.row(i))
            for i in range(rank)
        )
        self._validate_lattice(basis)

        self._generate_roots()
        self._verify_invariants()
        logger.debug(f"Built root datum {self.descriptor} with {self.num_positive} positive roots")

    # -- construction -----------------------------------------------------

    def _lattice_basis_matrix(self, lattice: str, rows) -> sympy.Matrix:
        c = sympy.Matrix(self.cartan)
        if lattice == "sc":
            return sympy.eye(self.rank)
        if lattice == "adjoint":
            # fundamental coweights in coroot coordinates
            return c.inv()
        if lattice == "basis":
            if rows is None:
                raise RootDatumError("lattice 'basis' requires a basis matrix")
            basis = _to_sympy_matrix(rows)
            if basis.shape != (self.rank, self.rank):
                raise RootDatumError(f"Lattice basis must be {self.rank}x{self.rank}, got {basis.shape}")
            if basis.det() == 0:
                raise RootDatumError("Lattice basis is singular")
            return basis
        raise RootDatumError(f"Unknown lattice choice: {lattice}")

    def _validate_lattice(self, basis: sympy.Matrix):
        c = sympy.Matrix(self.cartan)
        pairing = basis * c
        inverse = basis.inv()
        if any(not entry.is_integer for entry in pairing):
            raise RootDatumError("Lattice basis not integral against the roots (Y exceeds the coweight lattice)")
        if any(not entry.is_integer for entry in inverse):
            raise RootDatumError("Lattice basis does not contain the coroot lattice Y'")
        # <y, x> = y @ P @ x for y in Y-coordinates, x in simple-root coordinates
        self.pairing_matrix = np.array(pairing.tolist(), dtype=np.int64)
        # rows are the simple coroots in Y-coordinates
        self.coroot_to_y = np.array(inverse.tolist(), dtype=np.int64)
        self._basis_fraction = np.array(
            [[Fraction(int(e.p), int(e.q)) for e in basis.row(i)] for i in range(self.rank)],
            dtype=object,
        )

    def _generate_roots(self):
        """Orbit closure of the simple roots under the simple reflections"""
        n = self.rank
        simple = [tuple(int(i == j) for j in range(n)) for i in range(n)]

        # root -> (coroot in coroot coordinates, simple index, word with root = s_word(alpha_i))
        found: Dict[RootVector, Tuple[RootVector, int, Tuple[int, ...]]] = {}
        queue = deque()
        for i, root in enumerate(simple):
            found[root] = (root, i + 1, ())
            queue.append(root)

        while queue:
            root = queue.popleft()
            coroot, index, word = found[root]
            for i in range(n):
                image = self.reflect_root(i + 1, root)
                if image not in found:
                    found[image] = (self._reflect_coroot(i + 1, coroot), index, (i + 1,) + word)
                    queue.append(image)

        positives = sorted(
            (root for root in found if all(c >= 0 for c in root)),
            key=lambda r: (sum(r), tuple(-c for c in r)),
        )
        if len(positives) * 2 != len(found):
            raise RootDatumError("Root system is not symmetric under negation")
        negatives = [tuple(-c for c in root) for root in positives]

        self.roots: Tuple[RootVector, ...] = tuple(positives + negatives)
        self.coroots: Tuple[RootVector, ...] = tuple(found[root][0] for root in self.roots)
        self.root_origin: Tuple[Tuple[int, Tuple[int, ...]], ...] = tuple(
            found[root][1:] for root in self.roots
        )
        self.num_positive = len(positives)
        self.root_index: Dict[RootVector, int] = {root: k for k, root in enumerate(self.roots)}
        self.root_array = np.array(self.roots, dtype=np.int64)
        self.two_rho: RootVector = tuple(int(c) for c in self.root_array[: self.num_positive].sum(axis=0))

    def _verify_invariants(self):
        expected = POSITIVE_ROOT_COUNTS[self.cartan_type](self.rank)
        if self.num_positive != expected:
            raise RootDatumError(f"{self.descriptor}: found {self.num_positive} positive roots, expected {expected}")
        for i in range(self.rank):
            if self.coroot_pairing(self.coroots[i], self.roots[i]) != 2:
                raise RootDatumError(f"Coroot of alpha_{i + 1} does not pair to 2")
            for j in range(self.rank):
                if self.coroot_pairing(self.coroots[i], self.roots[j]) != self.cartan[i][j]:
                    raise RootDatumError(f"<alpha_{i + 1}^vee, alpha_{j + 1}> differs from the Cartan entry")
        recomputed = tuple(sum(root[k] for root in self.positive_roots) for k in range(self.rank))
        if recomputed != self.two_rho:
            raise RootDatumError("2rho differs from the sum of the positive roots")
        for i in range(self.rank):
            if self.coroot_pairing(self.coroots[i], self.two_rho) != 2:
                raise RootDatumError(f"<alpha_{i + 1}^vee, 2rho> != 2")
        for coroot in self.coroots:
            if self.coroot_pairing(coroot, self.two_rho) % 2:
                raise RootDatumError(f"<{coroot}, 2rho> is odd")

    # -- identity ---------------------------------------------------------

    @property
    def label(self) -> str:
        return f"{self.cartan_type}{self.rank}"

    @property
    def descriptor(self) -> str:
        if self.lattice == "sc":
            return self.label
        if self.lattice == "adjoint":
            return f"{self.label}:adjoint"
        rows = ",".join("[" + ",".join(str(e) for e in row) + "]" for row in self.lattice_basis)
        return f"{self.label}:basis=[{rows}]"

    def _key(self):
        return self.cartan_type, self.rank, self.lattice_basis

    def __eq__(self, other) -> bool:
        if not isinstance(other, RootDatum):
            return NotImplemented
        return self._key() == other._key()

    def __hash__(self) -> int:
        return hash(self._key())

    def __repr__(self) -> str:
        return f"RootDatum({self.descriptor!r})"

    # -- roots ------------------------------------------------------------

    @property
    def simple_indices(self) -> Tuple[int, ...]:
        return tuple(range(1, self.rank + 1))

    @property
    def positive_roots(self) -> Tuple[RootVector, ...]:
        return self.roots[: self.num_positive]

    def is_positive(self, root_index: int) -> bool:
        return root_index < self.num_positive

    def negate_index(self, root_index: int) -> int:
        return (root_index + self.num_positive) % (2 * self.num_positive)

    def simple_root_index(self, i: int) -> int:
        """Position of alpha_i in the root list"""
        return i - 1

    def height(self, root: RootVector) -> int:
        return sum(root)

    @property
    def highest_root_index(self) -> int:
        return max(range(self.num_positive), key=lambda k: self.height(self.roots[k]))

    def reflect_root(self, i: int, x: Sequence[int]) -> RootVector:
        """s_i(x) = x - <alpha_i^vee, x> alpha_i for x in simple-root coordinates"""
        coefficient = sum(self.cartan[i - 1][j] * x[j] for j in range(self.rank))
        image = list(x)
        image[i - 1] -= coefficient
        return tuple(image)

    def _reflect_coroot(self, i: int, d: Sequence[int]) -> RootVector:
        """s_i on coroot coordinates: d - <d, alpha_i> alpha_i^vee"""
        coefficient = sum(d[k] * self.cartan[k][i - 1] for k in range(self.rank))
        image = list(d)
        image[i - 1] -= coefficient
        return tuple(image)

    def coroot_pairing(self, coroot: Sequence[int], x: Sequence[int]) -> int:
        """<d, x> for d in coroot coordinates and x in simple-root coordinates"""
        return int(np.asarray(coroot, dtype=np.int64) @ self.cartan_array @ np.asarray(x, dtype=np.int64))

    def coroot_in_y(self, root_index: int) -> Cochar:
        """The coroot of roots[root_index] expressed in the Y-basis"""
        d = np.asarray(self.coroots[root_index], dtype=np.int64)
        return tuple(int(c) for c in d @ self.coroot_to_y)

    # -- cocharacters -----------------------------------------------------

    def check_cochar(self, y: Sequence[int]) -> Cochar:
        if len(y) != self.rank:
            raise DatumMismatchError(f"Cocharacter {tuple(y)} has {len(y)} coordinates, datum {self.descriptor} has rank {self.rank}")
        return tuple(int(c) for c in y)

    def pairing(self, y: Sequence[int], x: Sequence[int]) -> int:
        """<y, x> for y in Y-coordinates and x in X (simple-root coordinates)"""
        y = self.check_cochar(y)
        if len(x) != self.rank:
            raise DatumMismatchError(f"Character {tuple(x)} has {len(x)} coordinates, expected {self.rank}")
        return int(np.asarray(y, dtype=np.int64) @ self.pairing_matrix @ np.asarray(x, dtype=np.int64))

    def simple_pairings(self, y: Sequence[int]) -> Tuple[int, ...]:
        """(<y, alpha_1>, ..., <y, alpha_r>)"""
        y = self.check_cochar(y)
        return tuple(int(c) for c in np.asarray(y, dtype=np.int64) @ self.pairing_matrix)

    def root_pairings(self, y: Sequence[int]) -> np.ndarray:
        """<y, alpha> for every root in storage order"""
        return self.root_array @ (self.pairing_matrix.T @ np.asarray(self.check_cochar(y), dtype=np.int64))

    def reflect_cochar(self, i: int, y: Sequence[int]) -> Cochar:
        """s_i(y) = y - <y, alpha_i> alpha_i^vee in Y-coordinates"""
        y = np.asarray(self.check_cochar(y), dtype=np.int64)
        image = y - (y @ self.pairing_matrix[:, i - 1]) * self.coroot_to_y[i - 1]
        return tuple(int(c) for c in image)

    def dominance(self, y: Sequence[int]) -> Dominance:
        pairings = self.simple_pairings(y)
        if all(p > 0 for p in pairings):
            return Dominance.STRICTLY_DOMINANT
        if all(p >= 0 for p in pairings):
            return Dominance.DOMINANT
        return Dominance.NON_DOMINANT

    def is_dominant(self, y: Sequence[int]) -> bool:
        return self.dominance(y) is not Dominance.NON_DOMINANT

    def dominant_conjugate_word(self, y: Sequence[int]) -> Tuple[Tuple[int, ...], Cochar]:
        """
        Reduced word of the shortest w with w(y) dominant, and w(y)

        Repeatedly reflects in the smallest simple root pairing negatively with
        the current vector; each step crosses exactly one wall separating y
        from the dominant chamber, so the word is reduced and minimal.
        """
        current = self.check_cochar(y)
        applied: List[int] = []
        while True:
            pairings = self.simple_pairings(current)
            negative = [i + 1 for i, p in enumerate(pairings) if p < 0]
            if not negative:
                break
            i = negative[0]
            current = self.reflect_cochar(i, current)
            applied.append(i)
        # w = s_{i_k} ... s_{i_1}
        return tuple(reversed(applied)), current

    def cochar_to_coroot_coords(self, y: Sequence[int]) -> Tuple[Fraction, ...]:
        y = self.check_cochar(y)
        return tuple(sum((Fraction(y[k]) * self._basis_fraction[k][j] for k in range(self.rank)), Fraction(0))
                     for j in range(self.rank))

    def coset_label(self, y: Sequence[int]) -> Tuple[Fraction, ...]:
        """Class of y in Y/Y': fractional parts of its coroot coordinates"""
        return tuple(c - (c.numerator // c.denominator) for c in self.cochar_to_coroot_coords(y))

    def coweight_to_cochar(self, pairings: Sequence[int]) -> Optional[Cochar]:
        """The y with <y, alpha_i> = pairings[i], or None if it is not in Y"""
        p = sympy.Matrix(self.pairing_matrix.tolist())
        solution = sympy.Matrix([list(pairings)]) * p.inv()
        if any(not entry.is_integer for entry in solution):
            return None
        return tuple(int(entry) for entry in solution)

    # -- export -----------------------------------------------------------

    def to_dict(self) -> Dict:
        """JSON-ready dump of roots and coroots"""
        return {
            "descriptor": self.descriptor,
            "cartan_matrix": self.cartan,
            "lattice_basis": [[str(e) for e in row] for row in self.lattice_basis],
            "two_rho": list(self.two_rho),
            "roots": [
                {
                    "index": k + 1,
                    "root": list(root),
                    "coroot": list(self.coroots[k]),
                    "positive": self.is_positive(k),
                }
                for k, root in enumerate(self.roots)
            ],
        }


def build_root_datum(cartan_type: str, rank: int, lattice: str = "sc",
                     lattice_basis: Optional[Sequence[Sequence]] = None,
                     max_rank: Optional[int] = None) -> RootDatum:
    """Construct and validate a split root datum"""
    logger.info(f"Building root datum {cartan_type}{rank} ({lattice})")
    return RootDatum(cartan_type, rank, lattice, lattice_basis, max_rank)


def parse_datum_descriptor(text: str, max_rank: Optional[int] = None) -> RootDatum:
    """
    Parse descriptors such as 'A2', 'A1:adjoint', 'B3:sc' or 'C2:basis=[[1,0],[1/2,1/2]]'
    """
    head, _, lattice_part = text.strip().partition(":")
    if len(head) < 2 or not head[0].isalpha() or not head[1:].isdigit():
        raise ParseError("datum", f"expected a descriptor like 'A2', got {text!r}")
    cartan_type, rank = head[0].upper(), int(head[1:])
    lattice_part = lattice_part.strip() or "sc"

    if lattice_part in ("sc", "adjoint"):
        return build_root_datum(cartan_type, rank, lattice_part, max_rank=max_rank)
    if lattice_part.startswith("basis="):
        try:
            rows = sympy.sympify(lattice_part[len("basis="):])
            rows = [list(row) for row in rows]
        except (sympy.SympifyError, TypeError) as exc:
            raise ParseError("datum", f"bad lattice basis in {text!r}: {exc}")
        return build_root_datum(cartan_type, rank, "basis", rows, max_rank=max_rank)
    raise ParseError("datum", f"unknown lattice choice {lattice_part!r} (use sc, adjoint or basis=...)")


def pairing(datum: RootDatum, y: Sequence[int], x: Sequence[int]) -> int:
    return datum.pairing(y, x)


def dominance(datum: RootDatum, y: Sequence[int]) -> Dominance:
    return datum.dominance(y)

"""
Iwahori-Hecke algebra of the extended affine Weyl group over Z[v, v^-1]

HeckeElt holds coordinates in the T-basis. ModuleSpec is a finite-dimensional
module given by one matrix per affine simple reflection and one per nontrivial
length-zero element, every entry a LaurentPoly.
"""

from dataclasses import dataclass, field
from itertools import product
from typing import Dict, Iterable, Mapping, Optional, Sequence, Tuple, Union

import numpy as np
from loguru import logger

from src.affine_weyl import AffineElt, AffineWeylGroup, affine_weyl_group
from src.errors import DatumMismatchError, ModuleValidationError, NotDominantError, ParseError
from src.exact_ring import ONE, Q, ZERO, LaurentPoly
from src.root_datum import RootDatum

Scalar = Union[int, LaurentPoly]


class HeckeElt:
    """Finite combination sum c_x T_x with LaurentPoly coefficients"""

    __slots__ = ("group", "_coefficients")

    def __init__(self, group: AffineWeylGroup, coefficients: Optional[Mapping[AffineElt, Scalar]] = None):
        self.group = group
        canonical: Dict[AffineElt, LaurentPoly] = {}
        for element, coeff in (coefficients or {}).items():
            coeff = LaurentPoly.coerce(coeff)
            if not coeff.is_zero():
                canonical[element] = coeff
        self._coefficients = canonical

    @classmethod
    def basis(cls, group: AffineWeylGroup, element: AffineElt) -> "HeckeElt":
        return cls(group, {element: ONE})

    @property
    def support(self) -> Tuple[AffineElt, ...]:
        return tuple(self._coefficients)

    def coefficient(self, element: AffineElt) -> LaurentPoly:
        return self._coefficients.get(element, ZERO)

    def items(self):
        return self._coefficients.items()

    def is_zero(self) -> bool:
        return not self._coefficients

    def _same_group(self, other: "HeckeElt"):
        if self.group.datum != other.group.datum:
            raise DatumMismatchError(
                f"Hecke elements over {self.group.datum.descriptor} and {other.group.datum.descriptor}"
            )

    def __add__(self, other: "HeckeElt") -> "HeckeElt":
        self._same_group(other)
        result = dict(self._coefficients)
        for element, coeff in other._coefficients.items():
            result[element] = result.get(element, ZERO) + coeff
        return HeckeElt(self.group, result)

    def __neg__(self) -> "HeckeElt":
        return HeckeElt(self.group, {x: -c for x, c in self._coefficients.items()})

    def __sub__(self, other: "HeckeElt") -> "HeckeElt":
        return self + (-other)

    def scale(self, scalar: Scalar) -> "HeckeElt":
        scalar = LaurentPoly.coerce(scalar)
        return HeckeElt(self.group, {x: scalar * c for x, c in self._coefficients.items()})

    def __mul__(self, other):
        if isinstance(other, HeckeElt):
            return HeckeAlgebra(self.group).multiply(self, other)
        if isinstance(other, (int, LaurentPoly)):
            return self.scale(other)
        return NotImplemented

    def __rmul__(self, other):
        if isinstance(other, (int, LaurentPoly)):
            return self.scale(other)
        return NotImplemented

    def __eq__(self, other) -> bool:
        if not isinstance(other, HeckeElt):
            return NotImplemented
        return self.group.datum == other.group.datum and self._coefficients == other._coefficients

    def __hash__(self):
        return hash(frozenset(self._coefficients.items()))

    def __str__(self) -> str:
        if not self._coefficients:
            return "0"
        pieces = []
        for element, coeff in sorted(self._coefficients.items(), key=lambda item: str(item[0])):
            pieces.append(f"({coeff})*T[{element}]")
        return " + ".join(pieces)

    def to_dict(self):
        return [
            {"element": str(element), "coefficient": coeff.to_json(), "text": str(coeff)}
            for element, coeff in sorted(self._coefficients.items(), key=lambda item: str(item[0]))
        ]


class HeckeAlgebra:
    """Products in the T-basis driven by the quadratic and length-additive relations"""

    def __init__(self, group: AffineWeylGroup):
        self.group = group

    def basis(self, element: AffineElt) -> HeckeElt:
        return HeckeElt.basis(self.group, element)

    def one(self) -> HeckeElt:
        return self.basis(self.group.identity)

    def generator(self, i: int) -> HeckeElt:
        return self.basis(self.group.simple_reflection(i))

    def left_multiply_simple(self, i: int, h: HeckeElt) -> HeckeElt:
        """T_s T_z = T_sz if l(sz) > l(z), else q T_sz + (q - 1) T_z"""
        s = self.group.simple_reflection(i)
        result: Dict[AffineElt, LaurentPoly] = {}
        for z, coeff in h.items():
            sz = self.group.multiply(s, z)
            if self.group.length(sz) > self.group.length(z):
                result[sz] = result.get(sz, ZERO) + coeff
            else:
                result[sz] = result.get(sz, ZERO) + Q * coeff
                result[z] = result.get(z, ZERO) + (Q - 1) * coeff
        return HeckeElt(self.group, result)

    def left_multiply_omega(self, omega: AffineElt, h: HeckeElt) -> HeckeElt:
        """T_omega T_z = T_{omega z} for omega of length zero"""
        return HeckeElt(self.group, {self.group.multiply(omega, z): c for z, c in h.items()})

    def left_multiply_basis(self, x: AffineElt, h: HeckeElt) -> HeckeElt:
        decomposition = self.group.decompose(x)
        result = self.left_multiply_omega(decomposition.omega, h)
        for i in reversed(decomposition.word):
            result = self.left_multiply_simple(i, result)
        return result

    def multiply(self, a: HeckeElt, b: HeckeElt) -> HeckeElt:
        """Bilinear product; each T_x is expanded along a reduced word of x"""
        a._same_group(b)
        if a.group.datum != self.group.datum:
            raise DatumMismatchError("Hecke elements belong to another algebra")
        total = HeckeElt(self.group)
        for x, coeff in a.items():
            total = total + self.left_multiply_basis(x, b).scale(coeff)
        return total


def hecke_mul(a: HeckeElt, b: HeckeElt) -> HeckeElt:
    return HeckeAlgebra(a.group).multiply(a, b)


# -- modules ---------------------------------------------------------------


def to_matrix(rows: Sequence[Sequence]) -> np.ndarray:
    """Object matrix of LaurentPoly entries from nested lists"""
    entries = [[LaurentPoly.coerce(entry) for entry in row] for row in rows]
    if not entries or len({len(row) for row in entries}) != 1:
        raise ParseError("matrix", "rows must be non-empty and of equal length")
    matrix = np.empty((len(entries), len(entries[0])), dtype=object)
    for i, row in enumerate(entries):
        for j, entry in enumerate(row):
            matrix[i, j] = entry
    return matrix


def identity_matrix(dim: int) -> np.ndarray:
    matrix = np.full((dim, dim), ZERO, dtype=object)
    for k in range(dim):
        matrix[k, k] = ONE
    return matrix


def matmul(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    # numpy leaves int 0 in empty sums; normalize back to LaurentPoly
    result = np.empty((a.shape[0], b.shape[1]), dtype=object)
    for i in range(a.shape[0]):
        for j in range(b.shape[1]):
            total = ZERO
            for k in range(a.shape[1]):
                total = total + a[i, k] * b[k, j]
            result[i, j] = total
    return result


def matrices_equal(a: np.ndarray, b: np.ndarray) -> bool:
    return a.shape == b.shape and all(x == y for x, y in zip(a.flat, b.flat))


def trace(matrix: np.ndarray) -> LaurentPoly:
    total = ZERO
    for k in range(matrix.shape[0]):
        total = total + matrix[k, k]
    return total


def generator_name(i: int) -> str:
    return f"s{i}"


def omega_name(k: int) -> str:
    return f"omega_{k}"


@dataclass(frozen=True, eq=False)
class ModuleSpec:
    """Finite-dimensional H-module; generators maps 's0'.. and 'omega_1'.. to matrices"""
    datum: RootDatum
    dim: int
    generators: Dict[str, np.ndarray]
    name: str = "custom"
    validated: bool = field(default=False)

    def matrix(self, key: str) -> np.ndarray:
        if key == omega_name(0):
            return identity_matrix(self.dim)
        return self.generators[key]

    def omega_matrix(self, k: int) -> np.ndarray:
        return self.matrix(omega_name(k))

    def to_dict(self) -> Dict:
        """Module file layout: {dim, generators: {name: [[poly, ...], ...]}}"""
        return {
            "dim": self.dim,
            "datum": self.datum.descriptor,
            "name": self.name,
            "generators": {
                key: [[entry.to_json() for entry in row] for row in matrix.tolist()]
                for key, matrix in self.generators.items()
            },
        }


class ModuleValidator:
    """Checks the defining relations of an H-module exactly"""

    def __init__(self, group: AffineWeylGroup):
        self.group = group

    def expected_keys(self) -> Tuple[str, ...]:
        keys = [generator_name(i) for i in self.group.simple_indices]
        keys += [omega_name(k) for k in range(1, len(self.group.omega_elements))]
        return tuple(keys)

    def validate(self, dim: int, generators: Mapping[str, np.ndarray]):
        self._check_shapes(dim, generators)
        self._check_quadratic(dim, generators)
        self._check_braids(generators)
        self._check_omega(dim, generators)
        logger.debug(f"Module of dimension {dim} passed all relations for {self.group.datum.descriptor}")

    def _check_shapes(self, dim: int, generators: Mapping[str, np.ndarray]):
        if dim < 1:
            raise ModuleValidationError("dimension", f"dimension must be positive, got {dim}")
        expected = set(self.expected_keys())
        missing = expected - set(generators)
        unknown = set(generators) - expected
        if missing:
            raise ModuleValidationError("generators", f"missing matrices for {sorted(missing)}")
        if unknown:
            raise ModuleValidationError("generators", f"unknown generators {sorted(unknown)}")
        for key, matrix in generators.items():
            if matrix.shape != (dim, dim):
                raise ModuleValidationError("shape", f"{key} has shape {matrix.shape}, expected {(dim, dim)}")

    def _check_quadratic(self, dim: int, generators: Mapping[str, np.ndarray]):
        unit = identity_matrix(dim)
        for i in self.group.simple_indices:
            key = generator_name(i)
            m = generators[key]
            product_matrix = matmul(m + unit, m - unit * Q)
            if any(not entry.is_zero() for entry in product_matrix.flat):
                raise ModuleValidationError(f"(T_{key} + 1)(T_{key} - q) = 0")

    def _check_braids(self, generators: Mapping[str, np.ndarray]):
        coxeter = self.group.coxeter_matrix
        for s, t in product(self.group.simple_indices, repeat=2):
            m = coxeter[s][t]
            if s >= t or m == 0:
                continue
            left, right = generators[generator_name(s)], generators[generator_name(t)]
            if not matrices_equal(_alternating_product(left, right, m), _alternating_product(right, left, m)):
                raise ModuleValidationError(f"braid s{s} s{t} (m={m})")

    def _check_omega(self, dim: int, generators: Mapping[str, np.ndarray]):
        count = len(self.group.omega_elements)

        def omega(k: int) -> np.ndarray:
            return identity_matrix(dim) if k == 0 else generators[omega_name(k)]

        for j, k in product(range(1, count), repeat=2):
            target = self.group.omega_product_index(j, k)
            if not matrices_equal(matmul(omega(j), omega(k)), omega(target)):
                raise ModuleValidationError(f"omega_{j} omega_{k} = omega_{target}")
        for k in range(1, count):
            for i, image in self.group.omega_permutation(k).items():
                lhs = matmul(omega(k), generators[generator_name(i)])
                rhs = matmul(generators[generator_name(image)], omega(k))
                if not matrices_equal(lhs, rhs):
                    raise ModuleValidationError(f"omega_{k} T_s{i} = T_s{image} omega_{k}")


def _alternating_product(a: np.ndarray, b: np.ndarray, factors: int) -> np.ndarray:
    result = a
    for k in range(1, factors):
        result = matmul(result, b if k % 2 else a)
    return result


def load_module(datum: RootDatum, matrices: Mapping[str, Sequence[Sequence]], name: str = "custom") -> ModuleSpec:
    """Build a module from raw matrices and verify every relation"""
    group = affine_weyl_group(datum)
    generators = {key: value if isinstance(value, np.ndarray) else to_matrix(value)
                  for key, value in matrices.items()}
    dims = {matrix.shape[0] for matrix in generators.values()}
    if len(dims) != 1:
        raise ModuleValidationError("shape", f"matrices of differing sizes {sorted(dims)}")
    dim = dims.pop()
    ModuleValidator(group).validate(dim, generators)
    return ModuleSpec(datum, dim, dict(generators), name, validated=True)


def omega_sign(datum: RootDatum, y) -> int:
    """(-1)^<y, 2 rho>, constant on classes of Y/Y'"""
    return -1 if datum.pairing(y, datum.two_rho) % 2 else 1


def steinberg_module(datum: RootDatum) -> ModuleSpec:
    """Sign module: T_s -> -1 and omega -> (-1)^<y_omega, 2 rho>"""
    group = affine_weyl_group(datum)
    matrices = {generator_name(i): [[-1]] for i in group.simple_indices}
    for k, omega in enumerate(group.omega_elements[1:], start=1):
        matrices[omega_name(k)] = [[omega_sign(datum, omega.y)]]
    return load_module(datum, matrices, name="sign")


def trivial_module(datum: RootDatum) -> ModuleSpec:
    """T_s -> q and omega -> 1"""
    group = affine_weyl_group(datum)
    matrices = {generator_name(i): [[Q]] for i in group.simple_indices}
    for k in range(1, len(group.omega_elements)):
        matrices[omega_name(k)] = [[1]]
    return load_module(datum, matrices, name="trivial")


def direct_sum(first: ModuleSpec, second: ModuleSpec) -> ModuleSpec:
    """Block-diagonal sum of two modules over the same datum"""
    if first.datum != second.datum:
        raise DatumMismatchError(f"Cannot add modules over {first.datum.descriptor} and {second.datum.descriptor}")
    dim = first.dim + second.dim
    matrices = {}
    for key in first.generators:
        block = np.full((dim, dim), ZERO, dtype=object)
        block[: first.dim, : first.dim] = first.generators[key]
        block[first.dim:, first.dim:] = second.generators[key]
        matrices[key] = block
    return load_module(first.datum, matrices, name=f"{first.name}+{second.name}")


def trace_along_word(module: ModuleSpec, word: Iterable[int], omega_index: int) -> LaurentPoly:
    matrix = identity_matrix(module.dim)
    for i in word:
        matrix = matmul(matrix, module.matrix(generator_name(i)))
    return trace(matmul(matrix, module.omega_matrix(omega_index)))


def represent(h: HeckeElt, module: ModuleSpec) -> np.ndarray:
    """Matrix of a Hecke element acting on the module"""
    if h.group.datum != module.datum:
        raise DatumMismatchError("Hecke element and module use different root data")
    total = np.full((module.dim, module.dim), ZERO, dtype=object)
    for x, coeff in h.items():
        decomposition = h.group.decompose(x)
        matrix = identity_matrix(module.dim)
        for i in decomposition.word:
            matrix = matmul(matrix, module.matrix(generator_name(i)))
        matrix = matmul(matrix, module.omega_matrix(decomposition.omega_index))
        total = total + matrix * coeff
    return total


def trace_T(a: AffineElt, module: ModuleSpec, prefer: str = "first") -> LaurentPoly:
    """tr(T_a) on the module, multiplying generator matrices along a reduced word"""
    decomposition = affine_weyl_group(module.datum).decompose(a, prefer)
    return trace_along_word(module, decomposition.word, decomposition.omega_index)


def char_thm43(y, module: ModuleSpec) -> LaurentPoly:
    """q^(-<y, 2 rho>) tr(T_y) for dominant y"""
    datum = module.datum
    if not datum.is_dominant(y):
        raise NotDominantError(f"y = {tuple(y)} is not dominant for {datum.descriptor}")
    group = affine_weyl_group(datum)
    exponent = datum.pairing(y, datum.two_rho)
    return LaurentPoly.q_power(-exponent) * trace_T(group.translation(y), module)


def char_thm43_volume_form(y, module: ModuleSpec) -> LaurentPoly:
    """tr(T_y) / q^l(y); the translation length l(y) equals <y, 2 rho> on Y+"""
    datum = module.datum
    if not datum.is_dominant(y):
        raise NotDominantError(f"y = {tuple(y)} is not dominant for {datum.descriptor}")
    group = affine_weyl_group(datum)
    translation = group.translation(y)
    return LaurentPoly.q_power(-group.length(translation)) * trace_T(translation, module)

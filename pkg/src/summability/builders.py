"""Constructors turning concrete linear/multilinear data into instances.

Exactness policy: for sup-norm domains the dual unit ball is the one-norm
ball, whose extreme points are the signed basis vectors; since only
absolute values of functionals enter the tables, the signs collapse and the
atom set is exactly the basis.  Non-polyhedral duals are sampled
(``build_sampled_dual``) and the resulting instances are flagged
approximate.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import NamedTuple, Sequence

import numpy as np

from .core import HarmonicExponents, conjugate_exponent, harmonic_combine
from .errors import OutOfRange, ShapeMismatch, UnsupportedDomainNorm
from .inclusion import MultiplicativeInstance
from .instance import SummingInstance
from .pdt import PdtInstance

__all__ = [
    "OperatorSpec",
    "TensorSpec",
    "LinftyBuild",
    "SemiIntegralBuild",
    "default_grid",
    "build_linfty_linear",
    "build_sampled_dual",
    "build_semi_integral",
    "build_cohen",
    "build_weighted_dominated",
    "build_strongly_summing_sampled",
    "build_random_summing",
]

_NORMS = ("sup", "one", "two")
DEFAULT_SCALAR_GRID = (0.25, 0.5, 1.0, 2.0, 4.0)


def _vec_norm(x: np.ndarray, kind: str) -> float:
    if kind == "sup":
        return float(np.abs(x).max())
    if kind == "one":
        return float(np.abs(x).sum())
    if kind == "two":
        return float(np.sqrt((x * x).sum()))
    raise OutOfRange(f"unknown norm {kind!r}; use one of {_NORMS}")


def _dual_norm_kind(kind: str) -> str:
    return {"sup": "one", "one": "sup", "two": "two"}[kind]


def default_grid(d: int, cap: int = 64) -> tuple[tuple[float, ...], ...]:
    """Basis vectors followed by all +-1 sign vectors, capped at ``cap``.

    Sign vectors are the extreme points of the sup-norm ball, where summing
    ratios are attained in the classical cases; the basis vectors come first
    so they survive the cap.
    """
    grid: list[tuple[float, ...]] = []
    for i in range(d):
        e = [0.0] * d
        e[i] = 1.0
        grid.append(tuple(e))
    for signs in itertools.product((1.0, -1.0), repeat=d):
        if len(grid) >= cap:
            break
        grid.append(signs)
    return tuple(grid)


@dataclass(frozen=True)
class OperatorSpec:
    """A linear map with chosen domain/target norms and test points."""

    matrix: tuple[tuple[float, ...], ...]
    domain_norm: str = "sup"
    target_norm: str = "two"
    test_grid: tuple[tuple[float, ...], ...] | None = None

    def __post_init__(self):
        M = np.asarray(self.matrix, dtype=float)
        if M.ndim != 2 or not np.isfinite(M).all():
            raise ShapeMismatch("matrix must be a finite 2-D table")
        if self.domain_norm not in _NORMS or self.target_norm not in _NORMS:
            raise OutOfRange(f"norms must be one of {_NORMS}")
        grid = self.test_grid
        if grid is None:
            grid = default_grid(M.shape[1])
        grid = tuple(tuple(float(c) for c in x) for x in grid)
        if len(grid) == 0:
            raise ShapeMismatch("test_grid must be nonempty")
        for x in grid:
            if len(x) != M.shape[1]:
                raise ShapeMismatch(
                    f"grid point of dimension {len(x)} for a {M.shape[1]}-column matrix"
                )
        object.__setattr__(self, "matrix", tuple(tuple(float(v) for v in row) for row in M))
        object.__setattr__(self, "test_grid", grid)

    def matrix_array(self) -> np.ndarray:
        return np.asarray(self.matrix, dtype=float)

    def grid_array(self) -> np.ndarray:
        return np.asarray(self.test_grid, dtype=float)


@dataclass(frozen=True)
class TensorSpec:
    """An n-linear map given by its coefficient table, plus test grids.

    ``coefficients`` has shape dims for a scalar-valued map or dims + (k,)
    for a map into a k-dimensional target.  ``anchor`` shifts evaluation to
    the translated differences f(a + x) - f(a).  ``y_grid`` supplies target
    functionals where a build needs them.
    """

    order: int
    dims: tuple[int, ...]
    coefficients: tuple
    target_norm: str = "two"
    test_grids: tuple[tuple[tuple[float, ...], ...], ...] | None = None
    anchor: tuple[tuple[float, ...], ...] | None = None
    y_grid: tuple[tuple[float, ...], ...] | None = None

    def __post_init__(self):
        dims = tuple(int(d) for d in self.dims)
        if self.order != len(dims) or any(d < 1 for d in dims):
            raise ShapeMismatch(f"order {self.order} with dims {dims}")
        coef = np.asarray(self.coefficients, dtype=float)
        if coef.shape[: len(dims)] != dims or coef.ndim not in (len(dims), len(dims) + 1):
            raise ShapeMismatch(
                f"coefficients shape {coef.shape} does not extend dims {dims}"
            )
        if not np.isfinite(coef).all():
            raise ShapeMismatch("coefficients must be finite")
        if self.target_norm not in _NORMS:
            raise OutOfRange(f"norms must be one of {_NORMS}")
        grids = self.test_grids
        if grids is None:
            grids = tuple(default_grid(d) for d in dims)
        grids = tuple(
            tuple(tuple(float(c) for c in x) for x in g) for g in grids
        )
        if len(grids) != len(dims):
            raise ShapeMismatch(f"{len(grids)} grids for {len(dims)} factors")
        for l, g in enumerate(grids):
            if len(g) == 0 or any(len(x) != dims[l] for x in g):
                raise ShapeMismatch(f"test grid {l} inconsistent with dim {dims[l]}")
        anchor = self.anchor
        if anchor is not None:
            anchor = tuple(tuple(float(c) for c in a) for a in anchor)
            if len(anchor) != len(dims) or any(
                len(a) != dims[l] for l, a in enumerate(anchor)
            ):
                raise ShapeMismatch("anchor must give one point per factor")
        ygrid = self.y_grid
        if ygrid is not None:
            k = self.target_dim_of(coef)
            ygrid = tuple(tuple(float(c) for c in y) for y in ygrid)
            if any(len(y) != k for y in ygrid):
                raise ShapeMismatch(f"y_grid vectors must have dimension {k}")
        object.__setattr__(self, "dims", dims)
        object.__setattr__(self, "coefficients", _nested(coef))
        object.__setattr__(self, "test_grids", grids)
        object.__setattr__(self, "anchor", anchor)
        object.__setattr__(self, "y_grid", ygrid)

    def target_dim_of(self, coef: np.ndarray) -> int:
        return 1 if coef.ndim == len(self.dims) else coef.shape[-1]

    @property
    def target_dim(self) -> int:
        return self.target_dim_of(self.coef_array())

    def coef_array(self) -> np.ndarray:
        return np.asarray(self.coefficients, dtype=float)

    def apply(self, xs: Sequence[Sequence[float]]) -> np.ndarray:
        """Evaluate the map at one point per factor; returns a target vector."""
        value = self.coef_array()
        for x in xs:
            value = np.tensordot(np.asarray(x, dtype=float), value, axes=(0, 0))
        return np.atleast_1d(value)

    def displacement(self, xs: Sequence[Sequence[float]]) -> np.ndarray:
        """f(a + x) - f(a) when anchored, f(x) otherwise."""
        if self.anchor is None:
            return self.apply(xs)
        shifted = [np.asarray(a) + np.asarray(x) for a, x in zip(self.anchor, xs)]
        return self.apply(shifted) - self.apply(self.anchor)


def _nested(arr: np.ndarray):
    return tuple(_nested(sub) for sub in arr) if arr.ndim > 1 else tuple(float(v) for v in arr)


class LinftyBuild(NamedTuple):
    pdt: PdtInstance
    summing: SummingInstance


class SemiIntegralBuild(NamedTuple):
    pdt: PdtInstance
    multiplicative: MultiplicativeInstance | None


def build_linfty_linear(spec: OperatorSpec, p: float = 2.0) -> LinftyBuild:
    """Exact instance for a linear map on a sup-norm domain.

    The dual ball's extreme points are +-e_i; signs collapse because only
    |phi(x)| enters, so the atoms are e_1..e_d with r(e_i, x) = |x_i| and
    s(x) the target norm of the image.
    """
    if spec.domain_norm != "sup":
        raise UnsupportedDomainNorm(
            f"{spec.domain_norm!r} domain has a non-polyhedral dual; "
            "use build_sampled_dual"
        )
    M = spec.matrix_array()
    X = spec.grid_array()
    d = M.shape[1]
    atoms = tuple(f"e{i + 1}" for i in range(d))
    labels = tuple(f"x{j}" for j in range(X.shape[0]))
    r = np.abs(X)
    s = np.asarray([_vec_norm(M @ x, spec.target_norm) for x in X])
    pdt = PdtInstance(
        atom_sets=(atoms,),
        exponents=harmonic_combine([p]),
        labels=labels,
        s_values=s,
        r_tables=(r,),
    )
    summing = SummingInstance(
        point_ids=labels, v_ids=("*",), w_ids=atoms,
        s_table=s[:, None], r_table=r,
    )
    return LinftyBuild(pdt=pdt, summing=summing)


def build_sampled_dual(
    spec: OperatorSpec, samples: int, seed: int, p: float = 2.0
) -> PdtInstance:
    """Seeded discretization of a non-polyhedral dual ball.

    Atoms are uniform samples of the dual-norm unit sphere (gaussian
    directions normalized in the dual norm); deterministic per seed and
    flagged approximate.
    """
    if samples < 1:
        raise OutOfRange(f"samples must be >= 1, got {samples}")
    M = spec.matrix_array()
    X = spec.grid_array()
    d = M.shape[1]
    dual = _dual_norm_kind(spec.domain_norm)
    rng = np.random.default_rng(seed)
    phis = []
    while len(phis) < samples:
        g = rng.standard_normal(d)
        nrm = _vec_norm(g, dual)
        if nrm > 0.0:
            phis.append(g / nrm)
    phis = np.asarray(phis)
    r = np.abs(X @ phis.T)
    s = np.asarray([_vec_norm(M @ x, spec.target_norm) for x in X])
    return PdtInstance(
        atom_sets=(tuple(f"phi{i}" for i in range(samples)),),
        exponents=harmonic_combine([p]),
        labels=tuple(f"x{j}" for j in range(X.shape[0])),
        s_values=s,
        r_tables=(r,),
        approximate=True,
    )


def _product_points(spec: TensorSpec):
    grids = [np.asarray(g, dtype=float) for g in spec.test_grids]
    return list(itertools.product(*[range(len(g)) for g in grids])), grids


def build_semi_integral(
    spec: TensorSpec,
    p: float = 2.0,
    scalar_grid: Sequence[float] = DEFAULT_SCALAR_GRID,
) -> SemiIntegralBuild:
    """Instance whose atoms are products of per-factor dual basis vectors.

    r at atom (i_1..i_n) and point (x^1..x^n) is |x^1_{i_1} ... x^n_{i_n}|,
    s the target norm of the (translated) image.  The multiplicative view
    scales the first factor; it only exists for unanchored specs, since a
    translated evaluation is not multiplicative in the first argument.
    """
    combos, grids = _product_points(spec)
    atom_tuples = list(itertools.product(*[range(d) for d in spec.dims]))
    atoms = tuple(",".join(str(i + 1) for i in idx) for idx in atom_tuples)
    labels = tuple("|".join(str(i) for i in combo) for combo in combos)
    s = np.empty(len(combos))
    r = np.empty((len(combos), len(atom_tuples)))
    for row, combo in enumerate(combos):
        xs = [grids[l][combo[l]] for l in range(spec.order)]
        s[row] = _vec_norm(spec.displacement(xs), spec.target_norm)
        for col, idx in enumerate(atom_tuples):
            prod = 1.0
            for l, i in enumerate(idx):
                prod *= abs(xs[l][i])
            r[row, col] = prod
    pdt = PdtInstance(
        atom_sets=(atoms,),
        exponents=harmonic_combine([p]),
        labels=labels,
        s_values=s,
        r_tables=(r,),
    )
    multiplicative = None
    if spec.anchor is None:
        base = SummingInstance(
            point_ids=labels, v_ids=("*",), w_ids=atoms,
            s_table=s[:, None], r_table=r,
        )
        multiplicative = MultiplicativeInstance(
            base=base, scalar_grid=tuple(scalar_grid)
        )
    return SemiIntegralBuild(pdt=pdt, multiplicative=multiplicative)


def build_cohen(spec: TensorSpec, q: float) -> PdtInstance:
    """Two-kernel instance for the strong-summability class at exponent q.

    The first kernel is functional-independent (the product of the factor
    sup-norms), so its atom set is a singleton: a one-atom set is
    observationally equivalent and keeps the LP small.  The target is
    one-norm-like so the bidual ball has extreme points +-e_i, collapsing to
    the basis atoms with r2(e_i, point) = |y*_i|.  Exponents (q, q*) with
    combined value exactly 1.
    """
    if q <= 1.0:
        raise OutOfRange(f"need q > 1, got {q}")
    coef = spec.coef_array()
    k = spec.target_dim
    ygrid = spec.y_grid
    if ygrid is None:
        ygrid = default_grid(k)
    ygrid = np.asarray(ygrid, dtype=float)
    combos, grids = _product_points(spec)
    qstar = conjugate_exponent(q)
    labels = []
    s = []
    r1 = []
    r2 = []
    for combo in combos:
        xs = [grids[l][combo[l]] for l in range(spec.order)]
        image = spec.apply(xs)
        norm_prod = 1.0
        for x in xs:
            norm_prod *= _vec_norm(x, "sup")
        for yi, ystar in enumerate(ygrid):
            labels.append("|".join(str(i) for i in combo) + f"|y{yi}")
            s.append(abs(float(ystar @ image)))
            r1.append(norm_prod)
            r2.append(np.abs(ystar))
    exponents = HarmonicExponents(parts=(float(q), float(qstar)), combined=1.0)
    return PdtInstance(
        atom_sets=(("*",), tuple(f"e{i + 1}" for i in range(k))),
        exponents=exponents,
        labels=tuple(labels),
        s_values=np.asarray(s),
        r_tables=(np.asarray(r1)[:, None], np.asarray(r2)),
    )


def build_weighted_dominated(
    spec: TensorSpec,
    qs: Sequence[float],
    weight_grid: Sequence[float],
    a_table: Sequence[float] | None = None,
) -> PdtInstance:
    """n-kernel instance where every input carries a scalar weight.

    Kernel k at atom e_i and point (x, b) evaluates |b^(k)| |x^(k)_i|; the
    left side is |b^(1) ... b^(n)| times a nonnegative point value A, by
    default the target norm of the (translated) image, or any caller-supplied
    table over the grid product.
    """
    if len(qs) != spec.order:
        raise ShapeMismatch(f"{len(qs)} exponents for order {spec.order}")
    if len(weight_grid) == 0:
        raise ShapeMismatch("weight_grid must be nonempty")
    combos, grids = _product_points(spec)
    if a_table is not None and len(a_table) != len(combos):
        raise ShapeMismatch(
            f"a_table has {len(a_table)} entries for {len(combos)} grid points"
        )
    weights = [tuple(float(b) for b in bs)
               for bs in itertools.product(weight_grid, repeat=spec.order)]
    labels = []
    s = []
    rs = [[] for _ in range(spec.order)]
    for row, combo in enumerate(combos):
        xs = [grids[l][combo[l]] for l in range(spec.order)]
        if a_table is not None:
            a_val = float(a_table[row])
            if a_val < 0.0:
                raise ShapeMismatch("a_table entries must be >= 0")
        else:
            a_val = _vec_norm(spec.displacement(xs), spec.target_norm)
        for wi, bs in enumerate(weights):
            labels.append("|".join(str(i) for i in combo) + f"|b{wi}")
            bprod = 1.0
            for b in bs:
                bprod *= abs(b)
            s.append(bprod * a_val)
            for l in range(spec.order):
                rs[l].append(abs(bs[l]) * np.abs(xs[l]))
    return PdtInstance(
        atom_sets=tuple(
            tuple(f"e{i + 1}" for i in range(d)) for d in spec.dims
        ),
        exponents=harmonic_combine([float(v) for v in qs]),
        labels=tuple(labels),
        s_values=np.asarray(s),
        r_tables=tuple(np.asarray(tab) for tab in rs),
    )


def build_strongly_summing_sampled(
    spec: TensorSpec, samples: int, seed: int, p: float = 2.0
) -> PdtInstance:
    """Sampled instance for the class tested against all n-linear forms.

    Atoms are seeded random n-linear forms normalized to unit norm, the norm
    estimated by maximization over the grid product (exactness is impossible
    here; the instance is flagged approximate).
    """
    if samples < 1:
        raise OutOfRange(f"samples must be >= 1, got {samples}")
    combos, grids = _product_points(spec)
    rng = np.random.default_rng(seed)
    points = []
    s = np.empty(len(combos))
    for row, combo in enumerate(combos):
        xs = [grids[l][combo[l]] for l in range(spec.order)]
        points.append(xs)
        s[row] = _vec_norm(spec.displacement(xs), spec.target_norm)
    r = np.empty((len(combos), samples))
    for a in range(samples):
        form = rng.standard_normal(spec.dims)
        values = np.empty(len(points))
        norm_est = 0.0
        for row, xs in enumerate(points):
            phi = TensorSpec(
                order=spec.order, dims=spec.dims, coefficients=_nested(form)
            ).apply(xs)
            values[row] = abs(float(phi[0]))
            denom = 1.0
            for x in xs:
                denom *= _vec_norm(np.asarray(x), "sup")
            if denom > 0.0:
                norm_est = max(norm_est, values[row] / denom)
        if norm_est == 0.0:
            norm_est = 1.0
        r[:, a] = values / norm_est
    return PdtInstance(
        atom_sets=(tuple(f"phi{i}" for i in range(samples)),),
        exponents=harmonic_combine([p]),
        labels=tuple("|".join(str(i) for i in combo) for combo in combos),
        s_values=s,
        r_tables=(r,),
        approximate=True,
    )


def build_random_summing(seed: int, n: int, v: int, w: int, scale: float) -> SummingInstance:
    """Deterministic seeded instance with uniform entries in [0, scale]."""
    if n < 1 or v < 1 or w < 1:
        raise OutOfRange("sizes must be >= 1")
    if scale < 0.0 or not math.isfinite(scale):
        raise OutOfRange(f"scale must be finite and >= 0, got {scale}")
    rng = np.random.default_rng(seed)
    return SummingInstance.from_tables(
        rng.uniform(0.0, scale, size=(n, v)) if scale > 0 else np.zeros((n, v)),
        rng.uniform(0.0, scale, size=(n, w)) if scale > 0 else np.zeros((n, w)),
    )

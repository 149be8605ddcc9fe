"""
Maximal flag configurations and conjugator recovery

Detects maximal four-tuples of flags, recovers the group element that moves
a maximal tuple onto Veronese flags of a regular ideal tetrahedron, searches
the |B_n| landscape with a derivative-free optimizer, and runs the synthetic
experiment in which normalizers recovered from boundary-map samples
conjugate a diverging sequence of representations back to pi_n.
"""

import logging
import math
from dataclasses import dataclass, field
from typing import Callable, Dict, Iterator, List, Optional, Sequence, Tuple, Union

import numpy as np
from scipy import linalg, optimize

from .borel import FlagConfig, borel_cocycle, borel_cocycle_affine
from .cplx_geom import (
    TAU_RANK,
    AffineFlag,
    Flag,
    IllConditionedError,
    ProjectivePoint,
    Subspace,
    flag_distance,
)
from .hypvol import BASE_TETRAHEDRON, OMEGA, TetConfig, ideal_volume, nu3
from .schedule_parser import evaluate_schedule
from .tess import (
    ExtendedMoebius,
    GroupWord,
    base_reflections,
    default_generator_names,
    dilation_element,
    enumerate_orbit,
    orbit_points,
    orientation_preserving_generators,
)
from .utils import make_rng, random_skew_hermitian, random_unitary, skew_hermitian_from_params
from .veronese import GroupElement, act_on_flag, irreducible_rep, veronese_flag

logger = logging.getLogger(__name__)

# c in the verification bound c * sqrt(tol)
RECOVERY_CONSTANT = 10.0
RECOVERY_FLOOR = 1e-6
MAX_RELATOR_ORDER = 12


class RecoveryError(RuntimeError):
    """Normalizer recovery failed"""
    code = "recovery_failed"


class NotMaximalError(RecoveryError):
    """The configuration is not maximal within tolerance"""
    code = "not_maximal"


class DegenerateIntersectionError(RecoveryError):
    """The pinning flags are not transverse"""
    code = "degenerate_intersection"


class VerificationFailedError(RecoveryError):
    """The recovered element does not move all four flags onto Veronese flags"""
    code = "verification_failed"


def maximality_bound(n: int) -> float:
    """C(n+1, 3) nu3, the largest possible |B_n|"""
    return math.comb(n + 1, 3) * nu3()


def maximality_defect(config: FlagConfig, seed: int = 0) -> float:
    """C(n+1, 3) nu3 - |B_n(F)|"""
    return maximality_bound(config.n) - abs(borel_cocycle(config, seed))


def signed_defect(config: FlagConfig, t: TetConfig, seed: int = 0) -> float:
    """|C(n+1, 3) Vol(t) - B_n(F)|"""
    return abs(math.comb(config.n + 1, 3) * ideal_volume(t) - borel_cocycle(config, seed))


def pullback_borel(phi: Callable[[ProjectivePoint], Flag], t: TetConfig, seed: int = 0) -> float:
    """B_n(phi(t0), ..., phi(t3)) for a boundary map phi"""
    return borel_cocycle(FlagConfig(tuple(phi(point) for point in t)), seed)


def regular_tetrahedron(sign: int) -> TetConfig:
    """(0, 1, w, inf) for sign +1, (0, 1, conj(w), inf) for sign -1"""
    apex = OMEGA if sign > 0 else OMEGA.conjugate()
    return TetConfig.from_complex(0.0, 1.0, apex, math.inf)


@dataclass(frozen=True)
class NormalizerResult:
    """Recovered g with g F_i = V_n(t_i), unpacks as (g, t)"""
    element: GroupElement
    tetrahedron: TetConfig
    residual: float
    value: float

    def __iter__(self) -> Iterator:
        return iter((self.element, self.tetrahedron))


def _intersection_line(a: Subspace, b: Subspace) -> np.ndarray:
    try:
        line = a.intersection(b)
    except ValueError as e:
        raise DegenerateIntersectionError(str(e))
    if line.dim != 1:
        raise DegenerateIntersectionError(f"expected a line of intersection, found dimension {line.dim}")
    return line.basis[:, 0]


def recover_normalizer(
    config: FlagConfig,
    tol: float,
    seed: int = 0,
    constant: float = RECOVERY_CONSTANT,
) -> NormalizerResult:
    """
    Find g and a regular t = (0, 1, w^+-1, inf) with g F_i = V_n(t_i)

    The lines F_3^j cap F_0^(n-j+1) go to the coordinate lines shared by
    V_n(inf) and V_n(0); the line F_1^1 fixes the relative scales by going to
    V_n(1)^1. All four flags are then verified, F_2 deciding the sign of w.

    Args:
        config: Four flags of C^n, n >= 2
        tol: Largest accepted maximality defect
        seed: Decoration seed for B_n
        constant: c in the verification bound max(c sqrt(tol), 1e-6)

    Raises:
        NotMaximalError: If the defect is not below tol
        DegenerateIntersectionError: If F_0 and F_3 are not transverse
        VerificationFailedError: If the recovered g fails on the full flags
    """
    if len(config) != 4:
        raise ValueError(f"recover_normalizer takes 4 flags, got {len(config)}")
    n = config.n
    if n < 2:
        raise ValueError("Normalizer recovery needs n >= 2")

    value = borel_cocycle(config, seed)
    defect = maximality_bound(n) - abs(value)
    if defect >= tol:
        raise NotMaximalError(f"maximality defect {defect:.3e} is not below {tol:.3e}")

    f0, f1, _, f3 = config.flags
    lines = np.column_stack([
        _intersection_line(f3.subspace(j), f0.subspace(n - j + 1))
        for j in range(1, n + 1)
    ])
    if np.linalg.cond(lines) > 1.0 / TAU_RANK:
        raise DegenerateIntersectionError("intersection lines are linearly dependent")
    coefficients = np.linalg.solve(lines, f1.basis[:, 0])
    if np.min(np.abs(coefficients)) <= TAU_RANK * np.linalg.norm(coefficients):
        raise DegenerateIntersectionError("the line of F_1 lies in a coordinate hyperplane")
    binomials = np.array([math.comb(n - 1, j) for j in range(n)], dtype=float)
    element = GroupElement(np.diag(binomials / coefficients) @ np.linalg.inv(lines))

    best: Optional[Tuple[float, int, TetConfig]] = None
    for sign in (1, -1):
        t = regular_tetrahedron(sign)
        residual = max(
            flag_distance(act_on_flag(element, flag), veronese_flag(point, n))
            for flag, point in zip(config.flags, t)
        )
        if best is None or residual < best[0]:
            best = (residual, sign, t)
    residual, sign, t = best

    expected = 1 if value > 0 else -1
    if sign != expected:
        raise VerificationFailedError(
            f"flags match the tetrahedron of sign {sign:+d} but B_n has sign {expected:+d}"
        )
    limit = max(constant * math.sqrt(tol), RECOVERY_FLOOR)
    if residual > limit:
        raise VerificationFailedError(f"flag residual {residual:.3e} exceeds {limit:.3e}")
    logger.debug("normalizer recovered: residual %.3e, sign %+d", residual, sign)
    return NormalizerResult(element, t, residual, value)


def _frames_to_config(frames: Sequence[np.ndarray]) -> FlagConfig:
    return FlagConfig(tuple(Flag(frame) for frame in frames))


def maximize_borel(
    n: int,
    budget: int,
    seed: int = 0,
    starts: int = 8,
    initial: Optional[FlagConfig] = None,
) -> Tuple[FlagConfig, float]:
    """
    Derivative-free maximization of |B_n| over four-tuples of flags

    Flags are unitary frames; F_0 is held fixed (B_n is U(n)-invariant) and
    the other three move by exponentials of skew-Hermitian matrices. Each
    start runs Nelder-Mead rounds with a shrinking initial simplex and
    re-centres the chart after every round.

    Args:
        n: Ambient dimension
        budget: Total number of objective evaluations over all starts
        seed: Global seed; start s draws from derive_seed(seed, s)
        starts: Number of independent starts
        initial: Optional starting configuration (used by the first start)

    Returns:
        (best configuration, its |B_n|)
    """
    if budget < 1:
        raise ValueError("Optimizer budget must be at least 1")
    if starts < 1:
        raise ValueError("At least one start is needed")
    bound = maximality_bound(n)

    if initial is not None:
        if initial.n != n:
            raise ValueError(f"Initial configuration lives in C^{initial.n}, expected C^{n}")
        value = abs(borel_cocycle(initial, seed))
        if bound - value < 1e-10:
            logger.info("initial configuration is already maximal")
            return initial, value

    params_per_flag = n * (n - 1)
    dimension = 3 * params_per_flag
    per_start = max(1, budget // starts)

    def evaluate(frames: Sequence[np.ndarray]) -> float:
        try:
            return abs(borel_cocycle_affine([AffineFlag.from_decoration(frame) for frame in frames]))
        except IllConditionedError:
            return -math.inf

    best_value, best_frames = -math.inf, None
    for start in range(starts):
        rng = make_rng(seed, start)
        if start == 0 and initial is not None:
            frames = [flag.basis.copy() for flag in initial.flags]
        else:
            frames = [np.eye(n, dtype=complex)] + [random_unitary(rng, n) for _ in range(3)]
        current = evaluate(frames)
        used, scale = 1, 0.5

        def moved(params: np.ndarray, base: Sequence[np.ndarray]) -> List[np.ndarray]:
            result = [base[0]]
            for i in range(3):
                chunk = params[i * params_per_flag:(i + 1) * params_per_flag]
                result.append(base[i + 1] @ linalg.expm(skew_hermitian_from_params(chunk, n)))
            return result

        while used < per_start and scale > 1e-9 and dimension > 0:
            base = frames
            simplex = np.vstack([np.zeros(dimension), scale * np.eye(dimension)])
            result = optimize.minimize(
                lambda params: -evaluate(moved(params, base)),
                np.zeros(dimension),
                method="Nelder-Mead",
                options={
                    "maxfev": per_start - used,
                    "initial_simplex": simplex,
                    "xatol": scale * 1e-3,
                    "fatol": 1e-15,
                    "adaptive": True,
                },
            )
            used += result.nfev
            if -result.fun > current:
                frames = moved(result.x, base)
                current = -result.fun
            scale *= 0.3
            logger.debug("start %d: |B_%d| = %.15f after %d evaluations", start, n, current, used)

        logger.info("start %d finished at |B_%d| = %.15f", start, n, current)
        if current > best_value:
            best_value, best_frames = current, frames

    return _frames_to_config(best_frames), best_value


@dataclass(frozen=True, eq=False)
class BoundaryMapSample:
    """
    Values of a boundary map phi_k on finitely many points of CP^1

    Points are looked up by their canonical key.
    """
    n: int
    k: int
    eps: float
    flags: Dict[Tuple, Flag]
    points: Dict[Tuple, ProjectivePoint]
    orbit: Tuple[Tuple[GroupWord, TetConfig], ...] = ()

    def __post_init__(self):
        if set(self.flags) != set(self.points):
            raise ValueError("Every sampled point needs exactly one flag")
        if any(flag.n != self.n for flag in self.flags.values()):
            raise ValueError(f"Sampled flags must live in C^{self.n}")

    def __call__(self, point: ProjectivePoint) -> Flag:
        try:
            return self.flags[point.key()]
        except KeyError:
            raise KeyError(f"{point!r} is not a sampled point") from None

    def __contains__(self, point: ProjectivePoint) -> bool:
        return point.key() in self.flags

    def __len__(self) -> int:
        return len(self.flags)


@dataclass(frozen=True, eq=False)
class RepSequence:
    """Representations rho_k given on generators, with the conjugators used to build them"""
    generators: Tuple[ExtendedMoebius, ...]
    images: Tuple[Tuple[GroupElement, ...], ...]
    conjugators: Tuple[GroupElement, ...]
    relator_orders: Tuple[int, ...] = ()
    residuals: Tuple[float, ...] = field(default=())

    def __len__(self) -> int:
        return len(self.images)


def _drift_generator(drift: Union[float, np.ndarray], n: int) -> np.ndarray:
    if np.isscalar(drift):
        return float(drift) * np.diag(np.linspace(1.0, -1.0, n)).astype(complex)
    matrix = np.asarray(drift, dtype=complex)
    if matrix.shape != (n, n):
        raise ValueError(f"Drift generator must be {n} x {n}, got shape {matrix.shape}")
    return matrix


def _relator_order(generator: ExtendedMoebius) -> int:
    power = generator
    for order in range(1, MAX_RELATOR_ORDER + 1):
        if power.is_identity():
            return order
        power = power @ generator
    return 0


def orbit_generators(delta: bool) -> Tuple[List[ExtendedMoebius], Tuple[str, ...]]:
    """Face reflections, plus the dilation and its inverse for the base tetrahedron"""
    generators = base_reflections()
    if delta:
        dilation = dilation_element(BASE_TETRAHEDRON)
        generators += [dilation, dilation.inverse()]
    return generators, default_generator_names(len(generators), delta)


def synthesize_sequence(
    n: int,
    K: int,
    drift: Union[float, np.ndarray] = 0.1,
    eps_schedule: str = "2^-k",
    seed: int = 0,
    L: int = 4,
    delta: bool = True,
) -> Tuple[RepSequence, List[BoundaryMapSample]]:
    """
    Synthetic sequence rho_k = c_k pi_n c_k^-1 with noisy boundary maps

    c_k = exp(k X) for the drift generator X (a scalar s means
    X = s diag(1, ..., -1)). phi_k(a) = c_k exp(eps_k S_a) V_n(a) on the orbit
    of the base tetrahedron up to word length L, where S_a is a fixed unit
    skew-Hermitian direction per point.

    Returns:
        (the representations on the orientation preserving generators,
        one boundary map sample per k = 0..K-1)
    """
    if K < 1:
        raise ValueError("The sequence needs K >= 1 steps")
    generator_matrix = _drift_generator(drift, n)
    orbit_gens, names = orbit_generators(delta)
    orbit = tuple(enumerate_orbit(L, orbit_gens, names=names))
    points = orbit_points(orbit)
    logger.info("sampling %d points from %d orbit tetrahedra", len(points), len(orbit))

    veronese = {point.key(): veronese_flag(point, n).basis for point in points}
    directions = {
        point.key(): random_skew_hermitian(make_rng(seed, 1, index), n)
        for index, point in enumerate(points)
    }
    point_map = {point.key(): point for point in points}

    generators = tuple(orientation_preserving_generators())
    base_images = [irreducible_rep(gamma.matrix, n) for gamma in generators]
    orders = tuple(_relator_order(gamma) for gamma in generators)

    samples: List[BoundaryMapSample] = []
    images, conjugators, residuals = [], [], []
    for k in range(K):
        eps = evaluate_schedule(eps_schedule, k)
        conjugator = linalg.expm(k * generator_matrix)
        inverse = np.linalg.inv(conjugator)
        flags = {
            key: Flag(conjugator @ linalg.expm(eps * directions[key]) @ basis)
            for key, basis in veronese.items()
        }
        samples.append(BoundaryMapSample(n, k, eps, flags, dict(point_map), orbit))

        step_images = tuple(GroupElement(conjugator @ image.matrix @ inverse) for image in base_images)
        residual = 0.0
        for image, order in zip(step_images, orders):
            if order:
                residual = max(residual, GroupElement(np.linalg.matrix_power(image.matrix, order)).distance(
                    GroupElement.identity(n)
                ))
        images.append(step_images)
        conjugators.append(GroupElement(conjugator))
        residuals.append(residual)

    reps = RepSequence(generators, tuple(images), tuple(conjugators), orders, tuple(residuals))
    return reps, samples


PROPAGATION_COLUMNS = (
    "k",
    "eps",
    "defect",
    "orbit_defect",
    "propagation_distance",
    "representation_distance",
    "delta_distance",
    "rho_norm",
    "status",
)


@dataclass
class PropagationRow:
    k: int
    eps: float
    defect: float = math.nan
    orbit_defect: float = math.nan
    propagation_distance: float = math.nan
    representation_distance: float = math.nan
    delta_distance: float = math.nan
    rho_norm: float = math.nan
    status: str = "ok"

    def values(self) -> Tuple:
        return tuple(getattr(self, column) for column in PROPAGATION_COLUMNS)


@dataclass
class PropagationReport:
    rows: List[PropagationRow] = field(default_factory=list)

    columns = PROPAGATION_COLUMNS

    def to_rows(self) -> List[Tuple]:
        return [row.values() for row in self.rows]

    def column(self, name: str) -> List:
        return [getattr(row, name) for row in self.rows]


def _delta_normalizer(
    sample: BoundaryMapSample, tol: float, seed: int
) -> Optional[GroupElement]:
    """Normalizer recovered on the dilation-translated base tetrahedron, mapped back"""
    translated = dilation_element(BASE_TETRAHEDRON).apply_tet(BASE_TETRAHEDRON)
    if not all(point in sample for point in translated):
        return None
    flags = FlagConfig(tuple(sample(point) for point in translated))
    recovered = recover_normalizer(flags, tol, seed)
    h = ExtendedMoebius.from_three_points(translated[3], translated[0], translated[1])
    return irreducible_rep(h.inverse().matrix, sample.n) @ recovered.element


def propagate_and_recover(
    samples: Sequence[BoundaryMapSample],
    reps: RepSequence,
    L: Optional[int] = None,
    tol: float = 1e-6,
    seed: int = 0,
    delta: bool = True,
) -> PropagationReport:
    """
    Recover a normalizer per step and measure how well it propagates

    For every k the normalizer g_k comes from the base tetrahedron flags. The
    report then holds the worst flag distance of g_k phi_k(a) to V_n(a) over
    orbit vertices, the worst conjugated-representation distance to pi_n on
    the generators, and in the dilation variant the distance between g_k and
    the normalizer recovered on the translated tetrahedron. Recovery errors
    are recorded per k and the run continues.

    Args:
        samples: Boundary map samples, one per k
        reps: The representations the samples are equivariant for
        L: Word length cut-off for the orbit checks (None: everything sampled)
        tol: Maximality tolerance handed to recover_normalizer
        seed: Decoration seed
        delta: Also run the dilation consistency check
    """
    report = PropagationReport()
    base_images = [irreducible_rep(gamma.matrix, samples[0].n if samples else 2) for gamma in reps.generators]
    for sample, images in zip(samples, reps.images):
        row = PropagationRow(sample.k, sample.eps)
        row.rho_norm = max((image.norm() for image in images), default=math.nan)
        orbit = [(word, tet) for word, tet in sample.orbit if L is None or len(word) <= L]
        try:
            base = FlagConfig(tuple(sample(point) for point in BASE_TETRAHEDRON))
            row.defect = maximality_defect(base, seed)
            row.orbit_defect = max(
                (signed_defect(FlagConfig(tuple(sample(point) for point in tet)), tet, seed) for _, tet in orbit),
                default=math.nan,
            )
            normalizer = recover_normalizer(base, tol, seed).element

            distances: Dict[Tuple, float] = {}
            for _, tet in orbit:
                for point in tet:
                    if point.key() not in distances:
                        distances[point.key()] = flag_distance(
                            act_on_flag(normalizer, sample(point)), veronese_flag(point, sample.n)
                        )
            row.propagation_distance = max(distances.values(), default=math.nan)

            inverse = normalizer.inverse()
            row.representation_distance = max(
                (normalizer @ image @ inverse).distance(expected)
                for image, expected in zip(images, base_images)
            )
            if delta:
                translated = _delta_normalizer(sample, tol, seed)
                if translated is not None:
                    row.delta_distance = translated.distance(normalizer)
        except RecoveryError as error:
            row.status = error.code
            logger.warning("k=%d: %s", sample.k, error)
        except IllConditionedError as error:
            row.status = "ill_conditioned"
            logger.warning("k=%d: %s", sample.k, error)
        report.rows.append(row)
    return report


def ground_truth_distance(reps: RepSequence, k: int, normalizer: GroupElement) -> float:
    """Projective distance between a recovered normalizer and c_k^-1"""
    return normalizer.distance(reps.conjugators[k].inverse())

"""Abstract boundary-triple layer: model contract plus derived operators.

A TripleModel discretizes an adjoint pair T = -Delta + V, T~ = -Delta + V~
on some domain together with two trace maps, Neumann trace0 and Dirichlet
trace1 (the tilded traces coincide with them). Everything else lives here
as model-independent operations: the solution operator gamma of the
boundary value problem, the Weyl function M (a Neumann-to-Dirichlet map),
the Krein-type resolvent of Robin realizations, the Birman-Schwinger
eigenvalue machinery, the sectorial factorization of the Neumann resolvent,
and the asymptotic studies that feed the verification harness.

Inner products are conjugate-linear in the second slot throughout. The
identities these operations realize are exact relations of the underlying
pair; their numerical defects are discretization and rounding residue, and
the test suite pins each one to a model-specific tolerance.
"""

from __future__ import annotations

import abc
from dataclasses import dataclass, field

import numpy as np
import scipy.linalg as sla

from .errors import (
    BirmanSchwingerSingular,
    NoConvergence,
    NotAnEigenvalue,
    NotCertified,
    NotPositiveDefinite,
    SingularMatrix,
    ThresholdNotFound,
)
from .numerics import (
    complex_newton,
    herm_inv_sqrt,
    smallest_singular_value,
    solve_linear,
)

# sigma_min floor below which I - B M(lambda) counts as singular
_BS_SINGULAR_TOL = 1e-10

# optional indicator cutoff for Newton seeding; None seeds from every grid
# local minimum (a coarse scan can sit well above any fixed level even one
# grid step away from a root, so a cutoff silently loses roots)
_BS_SEED_LEVEL = None

# two refined roots closer than this merge into one
_ROOT_MERGE_RADIUS = 1e-7


class TripleModel(abc.ABC):
    """Contract every concrete model implements.

    Domain vectors ("carriers") hold interior samples plus whatever trace
    slots the model needs so that trace0/trace1 are exact linear reads.
    The 𝓗 inner product sees interior samples only; trace slots are domain
    data, not L² mass.
    """

    # -- structure ---------------------------------------------------------

    @property
    @abc.abstractmethod
    def state_dim(self):
        """Length of a domain carrier vector."""

    @property
    @abc.abstractmethod
    def boundary_dim(self):
        """Dimension of the boundary space carrier."""

    @abc.abstractmethod
    def apply_T(self, f):
        """Action of T = -Delta + V on a carrier (interior entries)."""

    @abc.abstractmethod
    def apply_Ttilde(self, g):
        """Action of T~ = -Delta + conj(V)."""

    @abc.abstractmethod
    def trace0(self, f):
        """Neumann trace (outward derivative data)."""

    @abc.abstractmethod
    def trace1(self, f):
        """Dirichlet trace (boundary values)."""

    @abc.abstractmethod
    def inner(self, f, g):
        """The 𝓗 inner product, conjugate-linear in g."""

    @abc.abstractmethod
    def binner(self, phi, psi):
        """The boundary-space inner product, conjugate-linear in psi."""

    @abc.abstractmethod
    def solve_bvp(self, lam, g):
        """The unique kernel element f with (T - lam) f = 0, trace0(f) = g."""

    @abc.abstractmethod
    def solve_bvp_tilde(self, mu, g):
        """Kernel solve for T~."""

    @abc.abstractmethod
    def neumann_resolvent(self, lam, f):
        """(A0 - lam)^-1 f, where A0 is T restricted to ker trace0."""

    @abc.abstractmethod
    def neumann_resolvent_tilde(self, mu, f):
        """(A0~ - mu)^-1 f."""

    @abc.abstractmethod
    def hn_matrix(self):
        """Reduced matrix of the free (V = 0) Neumann realization."""

    @abc.abstractmethod
    def v_matrix(self):
        """Reduced matrix of multiplication by V (same frame as hn_matrix)."""

    @abc.abstractmethod
    def certified_threshold(self):
        """Real xi < 0 with (-inf, xi) in the resolvent set of A0 and A0~."""

    @abc.abstractmethod
    def random_domain_vector(self, rng):
        """A random carrier consistent with the model's smoothness needs."""

    # -- optional structure ------------------------------------------------

    def hn_v_blocks(self):
        """(H_N, V) in independent Hermitian-frame blocks; models whose
        operators decouple (modes) override this to keep solves small."""
        return [(self.hn_matrix(), self.v_matrix())]

    def sample_positions(self):
        """Physical positions of the carrier's interior samples, for output
        tables; None when the carrier has no single coordinate."""
        return None

    def interior_values(self, f):
        """The interior (non-trace) samples of a carrier, aligned with
        sample_positions(); identity for carriers without trace slots."""
        return np.asarray(f)

    def mode_weyl_values(self, lam, tilde=False):
        """Diagonal of the Weyl matrix for models where it is diagonal in
        the boundary basis; None means "build it column by column"."""
        return None

    def describe(self):
        return type(self).__name__

    def boundary_basis(self):
        """The standard basis of the boundary carrier."""
        return [_unit(self.boundary_dim, j) for j in range(self.boundary_dim)]

    def hnorm(self, f):
        return float(np.sqrt(abs(self.inner(f, f))))


def _unit(n, j):
    e = np.zeros(n, dtype=complex)
    e[j] = 1.0
    return e


@dataclass(frozen=True)
class SpectralPoint:
    """A spectral parameter plus its certification status."""

    value: complex
    certified: bool

    @classmethod
    def at(cls, model, value):
        value = complex(value)
        certified = value.imag == 0.0 and value.real < model.certified_threshold()
        return cls(value=value, certified=certified)


def _as_lambda(model, lam, allow_uncertified, who):
    if isinstance(lam, SpectralPoint):
        point = SpectralPoint.at(model, lam.value)
    else:
        point = SpectralPoint.at(model, lam)
    if not point.certified and not allow_uncertified:
        raise NotCertified(
            f"{who}: lambda = {point.value} is outside the certified half-line "
            f"(-inf, {model.certified_threshold():.6g}); pass allow_uncertified=True "
            "to evaluate anyway"
        )
    return point.value


@dataclass(frozen=True)
class BoundaryOperator:
    """Bounded operator on the boundary carrier (the B of Robin couplings)."""

    matrix: np.ndarray

    def __post_init__(self):
        m = np.asarray(self.matrix, dtype=complex)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise ValueError(f"boundary operator must be square, got {m.shape}")
        if not np.all(np.isfinite(m)):
            raise ValueError("boundary operator entries must be finite")
        object.__setattr__(self, "matrix", m)

    @classmethod
    def scalar(cls, beta, dim):
        return cls(matrix=beta * np.eye(dim, dtype=complex))


def _bmatrix(b, dim):
    if isinstance(b, BoundaryOperator):
        m = b.matrix
    else:
        m = np.asarray(b, dtype=complex)
    if m.shape != (dim, dim):
        raise ValueError(f"boundary operator shape {m.shape} != ({dim}, {dim})")
    return m


@dataclass(frozen=True)
class WeylSample:
    """M(lambda) with the independently computed M~(conj lambda)."""

    lam: complex
    m: np.ndarray
    m_tilde_at_conj: np.ndarray
    norm: float


@dataclass(frozen=True)
class SectorialFactorization:
    """Factorization data of the Neumann resolvent at real lambda < 0."""

    lam: float
    c1_norm: float
    defect: float
    c1_blocks: list = field(repr=False)


# -- gamma field and Weyl function ----------------------------------------


def gamma(model, lam, g, allow_uncertified=False):
    """gamma(lambda) g: the kernel element with Neumann trace g."""
    lam = _as_lambda(model, lam, allow_uncertified, "gamma")
    return model.solve_bvp(lam, np.asarray(g, dtype=complex))


def gamma_tilde(model, mu, g, allow_uncertified=False):
    """gamma~(mu) g for the adjoint-side operator T~."""
    mu = _as_lambda(model, mu, allow_uncertified, "gamma_tilde")
    return model.solve_bvp_tilde(mu, np.asarray(g, dtype=complex))


def gamma_adjoint(model, lam, f, allow_uncertified=False):
    """gamma(lambda)* f, realized as Dirichlet trace of (A0~ - conj lam)^-1 f."""
    lam = _as_lambda(model, lam, allow_uncertified, "gamma_adjoint")
    return model.trace1(model.neumann_resolvent_tilde(np.conjugate(lam), f))


def _weyl_matrix(model, lam, tilde):
    fast = model.mode_weyl_values(lam, tilde=tilde)
    if fast is not None:
        return np.diag(np.asarray(fast, dtype=complex))
    solve = model.solve_bvp_tilde if tilde else model.solve_bvp
    cols = []
    for e in model.boundary_basis():
        cols.append(model.trace1(solve(lam, e)))
    return np.stack(cols, axis=1)


def weyl(model, lam, allow_uncertified=False):
    """M(lambda) = trace1 gamma(lambda), plus M~(conj lambda) computed
    independently through the tilde solver for symmetry checks."""
    lam = _as_lambda(model, lam, allow_uncertified, "weyl")
    m = _weyl_matrix(model, lam, tilde=False)
    m_tilde = _weyl_matrix(model, np.conjugate(lam), tilde=True)
    norm = float(sla.svdvals(m).max())
    return WeylSample(lam=lam, m=m, m_tilde_at_conj=m_tilde, norm=norm)


def weyl_symmetry_defect(model, lam, allow_uncertified=False):
    """|| M(lambda) - M~(conj lambda)* || in spectral norm."""
    ws = weyl(model, lam, allow_uncertified)
    return float(sla.svdvals(ws.m - ws.m_tilde_at_conj.conj().T).max())


def _gamma_gram(model, lam, mu):
    # G[i, j] = <gamma(lam) e_j, gamma~(mu) e_i> / <e_i, e_i>_boundary,
    # the matrix of gamma~(mu)* gamma(lam) in the boundary basis
    basis = model.boundary_basis()
    gl = [gamma(model, lam, e, allow_uncertified=True) for e in basis]
    gt = [gamma_tilde(model, mu, e, allow_uncertified=True) for e in basis]
    dim = model.boundary_dim
    g = np.empty((dim, dim), dtype=complex)
    for i in range(dim):
        wi = model.binner(basis[i], basis[i])
        for j in range(dim):
            g[i, j] = model.inner(gl[j], gt[i]) / wi
    return g


def difference_identity_defect(model, lam, mu, allow_uncertified=False):
    """|| M(lambda) - M~(mu)* - (lambda - conj mu) gamma~(mu)* gamma(lambda) ||."""
    lam = _as_lambda(model, lam, allow_uncertified, "difference_identity_defect")
    mu = _as_lambda(model, mu, allow_uncertified, "difference_identity_defect")
    m = _weyl_matrix(model, lam, tilde=False)
    m_tilde = _weyl_matrix(model, mu, tilde=True)
    g = _gamma_gram(model, lam, mu)
    defect = m - m_tilde.conj().T - (lam - np.conjugate(mu)) * g
    return float(sla.svdvals(defect).max())


def gamma_resolvent_identity_defect(model, lam, nu, g, allow_uncertified=False):
    """Relative defect of gamma(lam) = (I + (lam - nu)(A0 - lam)^-1) gamma(nu)."""
    lam = _as_lambda(model, lam, allow_uncertified, "gamma_resolvent_identity_defect")
    nu = _as_lambda(model, nu, allow_uncertified, "gamma_resolvent_identity_defect")
    g = np.asarray(g, dtype=complex)
    left = model.solve_bvp(lam, g)
    right = model.solve_bvp(nu, g)
    if lam != nu:
        right = right + (lam - nu) * model.neumann_resolvent(lam, right)
    diff = left - right
    scale = model.hnorm(left)
    if scale == 0.0:
        return 0.0
    return model.hnorm(diff) / scale


def green_defect(model, f, g):
    """| (Tf, g) - (f, T~g) - (t1 f, t0 g) + (t0 f, t1 g) |.

    A model may provide ``green_pairing_defect`` to evaluate the same
    bracket in a cancellation-free arrangement; the fd1d model does, since
    its identity is exact by construction and the generic route's rounding
    (eps at the 1/h^2 operator scale) would otherwise dominate the defect.
    """
    pairing = getattr(model, "green_pairing_defect", None)
    if pairing is not None:
        return float(pairing(f, g))
    f = np.asarray(f, dtype=complex)
    g = np.asarray(g, dtype=complex)
    bulk = model.inner(model.apply_T(f), g) - model.inner(f, model.apply_Ttilde(g))
    boundary = model.binner(model.trace1(f), model.trace0(g)) - model.binner(
        model.trace0(f), model.trace1(g)
    )
    return abs(bulk - boundary)


# -- Krein resolvent and Birman-Schwinger machinery ------------------------


def krein_resolvent(model, b, lam, f, allow_uncertified=False):
    """(A_B - lam)^-1 f assembled from the Neumann resolvent, the gamma
    field, and M(lambda); A_B carries the boundary condition
    B trace1 = trace0."""
    lam = _as_lambda(model, lam, allow_uncertified, "krein_resolvent")
    bm = _bmatrix(b, model.boundary_dim)
    f = np.asarray(f, dtype=complex)
    w = model.neumann_resolvent(lam, f)
    # gamma~(conj lam)* f is the Dirichlet trace of the same Neumann solve
    adj = model.trace1(w)
    m = _weyl_matrix(model, lam, tilde=False)
    s = np.eye(model.boundary_dim, dtype=complex) - bm @ m
    sigma = smallest_singular_value(s)
    if sigma <= _BS_SINGULAR_TOL:
        raise BirmanSchwingerSingular(
            f"sigma_min(I - B M(lambda)) = {sigma:.3e} at lambda = {lam}; "
            "lambda is an eigenvalue of A_B to working precision"
        )
    bd = solve_linear(s, bm @ adj)
    return w + model.solve_bvp(lam, bd)


def krein_resolvent_tilde(model, b_tilde, mu, g, allow_uncertified=False):
    """(A~_B~ - mu)^-1 g, the adjoint-side mirror of krein_resolvent."""
    mu = _as_lambda(model, mu, allow_uncertified, "krein_resolvent_tilde")
    bm = _bmatrix(b_tilde, model.boundary_dim)
    g = np.asarray(g, dtype=complex)
    w = model.neumann_resolvent_tilde(mu, g)
    adj = model.trace1(w)
    m_tilde = _weyl_matrix(model, mu, tilde=True)
    s = np.eye(model.boundary_dim, dtype=complex) - bm @ m_tilde
    sigma = smallest_singular_value(s)
    if sigma <= _BS_SINGULAR_TOL:
        raise BirmanSchwingerSingular(
            f"sigma_min(I - B~ M~(mu)) = {sigma:.3e} at mu = {mu}"
        )
    bd = solve_linear(s, bm @ adj)
    return w + model.solve_bvp_tilde(mu, bd)


def bs_indicator(model, b, lam):
    """sigma_min(I - B M(lambda)); a zero flags lambda as an eigenvalue of
    A_B. Scanned over complex regions, so no certification is required."""
    bm = _bmatrix(b, model.boundary_dim)
    m = _weyl_matrix(model, complex(lam), tilde=False)
    s = np.eye(model.boundary_dim, dtype=complex) - bm @ m
    return smallest_singular_value(s)


def bs_kernel_lift(model, b, lam, tol=1e-8):
    """Eigenvectors of A_B at lambda, lifted as gamma(lambda) applied to the
    numerical kernel of I - B M(lambda)."""
    bm = _bmatrix(b, model.boundary_dim)
    m = _weyl_matrix(model, complex(lam), tilde=False)
    s = np.eye(model.boundary_dim, dtype=complex) - bm @ m
    _, sing, vh = sla.svd(s)
    if sing.min() > tol:
        raise NotAnEigenvalue(
            f"sigma_min(I - B M(lambda)) = {sing.min():.3e} > {tol:.0e} at "
            f"lambda = {lam}"
        )
    kernel = [vh[i].conj() for i in range(len(sing)) if sing[i] <= tol]
    return [model.solve_bvp(complex(lam), phi) for phi in kernel]


def _bs_det(model, b, lam):
    bm = _bmatrix(b, model.boundary_dim)
    m = _weyl_matrix(model, complex(lam), tilde=False)
    return complex(np.linalg.det(np.eye(model.boundary_dim) - bm @ m))


def robin_eigs(model, b, region, grid, seed_level=_BS_SEED_LEVEL,
               merge_radius=_ROOT_MERGE_RADIUS):
    """Eigenvalues of A_B inside a rectangular region of the plane.

    region = (re_min, re_max, im_min, im_max), grid = (n_re, n_im). The
    indicator sigma_min(I - B M) is scanned on the grid; every strict grid
    local minimum (below ``seed_level`` when one is given) seeds a Newton
    refinement on det(I - B M), which is holomorphic where sigma_min is
    not. Grid nodes where the kernel solve fails (Neumann spectrum) are
    skipped, and so are seeds whose Newton iterates wander onto such
    points. Refined roots are kept when |det| <= 1e-9 * scale with scale
    the median grid |det|, then merged within ``merge_radius`` and sorted
    by (Re, Im). Spurious seeds cost a few extra det evaluations and are
    dropped by the residual test; a seed cutoff instead risks losing roots
    that sit between grid nodes, which is why the default has none.
    """
    from .errors import BTripleError

    re_min, re_max, im_min, im_max = map(float, region)
    n_re, n_im = map(int, grid)
    if n_re < 2 or n_im < 2:
        raise ValueError("grid must have at least 2 nodes per axis")
    bm = _bmatrix(b, model.boundary_dim)
    eye = np.eye(model.boundary_dim, dtype=complex)
    res = np.linspace(re_min, re_max, n_re)
    ims = np.linspace(im_min, im_max, n_im)
    values = np.full((n_re, n_im), np.inf)
    dets = []
    for i, x in enumerate(res):
        for j, y in enumerate(ims):
            try:
                m = _weyl_matrix(model, complex(x, y), tilde=False)
            except BTripleError:
                continue  # Neumann-spectrum node; leave +inf
            s = eye - bm @ m
            values[i, j] = smallest_singular_value(s)
            dets.append(abs(complex(np.linalg.det(s))))
    if not dets:
        return []
    scale = max(float(np.median(dets)), 1e-300)
    det_tol = 1e-9 * scale

    level = float("inf") if seed_level is None else float(seed_level)
    seeds = []
    for i in range(n_re):
        for j in range(n_im):
            v = values[i, j]
            if not np.isfinite(v) or v >= level:
                continue
            neighbors = values[max(i - 1, 0):i + 2, max(j - 1, 0):j + 2]
            if v <= neighbors.min():
                seeds.append(complex(res[i], ims[j]))

    span = max(re_max - re_min, im_max - im_min)

    def newton_from(z0, exclude):
        def fun(z):
            d = _bs_det(model, b, z)
            for r in exclude:
                d /= (z - r)
            return d
        scale = 1.0
        for r in exclude:
            scale *= max(abs(z0 - r), merge_radius)
        root = complex_newton(fun, z0, det_tol / scale)
        if exclude:
            # deflation only steers the iteration into the right basin;
            # the returned root must satisfy the raw residual criterion
            root = complex_newton(lambda z: _bs_det(model, b, z), root,
                                  det_tol)
        return root

    def in_window(z):
        return (re_min - 0.02 * span <= z.real <= re_max + 0.02 * span
                and im_min - 0.02 * span <= z.imag <= im_max + 0.02 * span)

    # Newton on the raw det first, then deflation passes over the same
    # seeds: two roots closer than the grid step share one catch basin, so
    # the first pass recovers one of them and a rescan against the deflated
    # determinant recovers the other. Landing on an already-found root
    # during a deflated rescan means that root has higher multiplicity
    # (degenerate mode pairs produce double det roots); deflating it one
    # order more and retrying then escapes its basin.
    roots = []
    for _ in range(4):
        fresh = []
        for z0 in seeds:
            exclude = list(roots)
            for _retry in range(3):
                try:
                    root = newton_from(z0, tuple(exclude))
                except (NoConvergence, BTripleError):
                    break
                known = [r for r in roots + fresh
                         if abs(root - r) <= merge_radius]
                if not known:
                    if in_window(root):
                        fresh.append(root)
                    break
                exclude.append(known[0])
        if not fresh:
            break
        roots.extend(fresh)
    roots.sort(key=lambda z: (z.real, z.imag))
    return roots


# -- sectorial factorization and asymptotic studies -------------------------


def _c1_blocks(model, lam):
    blocks = []
    for hn, v in model.hn_v_blocks():
        hn = np.asarray(hn)
        v = np.asarray(v)
        shifted = hn - lam * np.eye(hn.shape[0])
        s = herm_inv_sqrt(shifted)  # raises NotPositiveDefinite below spectrum bottom
        blocks.append((s, s @ v @ s, hn, v))
    return blocks


def sectorial_factorization(model, lam):
    """Factor (A0 - lam)^-1 = S (I + C1)^-1 S with S = (H_N - lam)^(-1/2)
    and C1 = S V S, at real lam below the certified threshold.

    The factorization is algebraic, so the reported defect is pure rounding;
    c1_norm <= 1/2 is the contraction property that makes (I + C1)
    invertible by Neumann series. Block models are processed per block and
    the norms/defects are the maxima over blocks.
    """
    lam = float(lam)
    if lam >= model.certified_threshold():
        raise NotCertified(
            f"sectorial factorization requires lambda < {model.certified_threshold():.6g}"
        )
    c1_norm = 0.0
    defect = 0.0
    c1_blocks = []
    for s, c1, hn, v in _c1_blocks(model, lam):
        c1_blocks.append(c1)
        c1_norm = max(c1_norm, float(sla.svdvals(c1).max()))
        n = hn.shape[0]
        eye = np.eye(n, dtype=complex)
        resolvent = solve_linear(hn + v - lam * eye, eye)
        factored = s @ solve_linear(eye + c1, eye) @ s
        block_defect = float(sla.svdvals(resolvent - factored).max())
        defect = max(defect, block_defect)
    return SectorialFactorization(lam=lam, c1_norm=c1_norm, defect=defect,
                                  c1_blocks=c1_blocks)


def c1_norm_at(model, lam):
    """max block norm of C1(lambda) = S V S without the resolvent defect."""
    lam = float(lam)
    norm = 0.0
    for _, c1, _, _ in _c1_blocks(model, lam):
        norm = max(norm, float(sla.svdvals(c1).max()))
    return norm


def find_xi2(model, lam_start=-0.5, max_doublings=20, confirmations=2):
    """Empirical contraction threshold: largest point of the geometric scan
    lam_start * 2^k with ||C1|| <= 1/2 there and at the next ``confirmations``
    scan points below it. ThresholdNotFound past 2^max_doublings.

    ||S V S|| decays like ||V|| / |lambda| as lambda -> -inf, so the first
    passing point with confirmed decay is the scan's best estimate of the
    threshold; points above it are left uncertified.
    """
    if lam_start >= 0.0:
        raise ValueError("lam_start must be negative")
    cache = {}

    def norm_at(k):
        if k not in cache:
            try:
                cache[k] = c1_norm_at(model, lam_start * 2.0**k)
            except NotPositiveDefinite:
                cache[k] = np.inf
        return cache[k]

    for k in range(max_doublings + 1):
        if norm_at(k) <= 0.5:
            if all(norm_at(k + i) <= 0.5 for i in range(1, confirmations + 1)):
                return lam_start * 2.0**k
    raise ThresholdNotFound(
        f"||C1|| > 1/2 on the whole scan down to {lam_start * 2.0**max_doublings:.3e}"
    )


def weyl_decay_study(model, lam_list, allow_uncertified=False):
    """Sample ||M(lambda)|| along real lam_list -> -inf and fit the log-log
    decay exponent. Returns (samples, exponent)."""
    from .numerics import fit_log_slope

    samples = [weyl(model, lam, allow_uncertified) for lam in lam_list]
    points = [(abs(ws.lam), ws.norm) for ws in samples if ws.norm > 0.0]
    slope, _, _ = fit_log_slope(points)
    return samples, slope


def relative_bound_decay(model, lam_list):
    """||V (H_N - lam)^-1|| along lam_list; tends to 0 as lam -> -inf, the
    operator expression of V being relatively bounded with bound zero."""
    out = []
    for lam in lam_list:
        lam = float(lam)
        norm = 0.0
        for hn, v in model.hn_v_blocks():
            hn = np.asarray(hn)
            v = np.asarray(v)
            eye = np.eye(hn.shape[0])
            try:
                res = solve_linear(hn - lam * eye, eye)
            except SingularMatrix:
                raise NotCertified(f"lambda = {lam} hits the Neumann spectrum")
            norm = max(norm, float(sla.svdvals(v @ res).max()))
        out.append((lam, norm))
    return out

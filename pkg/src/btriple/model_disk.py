"""Unit-disk models, interior and exterior, decomposed into Fourier modes.

Separation of variables turns -laplace + V(r) on the disk into a family of
radial operators, one per angular mode k:

    L_k u = -u'' - u'/r + (k^2/r^2 + V(r)) u        on (0, 1) or (1, R),

acting on the weighted space with inner product int u vbar r dr. The carrier
stacks radial samples of every kept mode (|k| <= k_max) on a composite
Gauss-Legendre grid, followed by two analytic trace slots per mode holding
(f_k(1), f_k'(1)). The boundary carrier is the truncated Fourier basis
{e^{ik theta}}, so boundary vectors are coefficient tuples of length
2 k_max + 1 and the boundary pairing is 2 pi times the coefficient dot
product (the basis is orthogonal, not orthonormal).

Traces: the Dirichlet trace of mode k is f_k(1). The Neumann trace is the
outward normal derivative, which is +d/dr for the interior disk and -d/dr
for the exterior domain, whose outward normal at r = 1 points toward the
origin. The exterior sign is asserted by a dedicated Green-identity test
rather than taken on faith.

Mode solves are spectral collocation on the same panel grid that carries the
samples: the radial equation is enforced at the interior nodes of each
panel, the node rows bordering each panel interface are replaced by
continuity of value and of derivative, and the two remaining end rows carry
the boundary conditions (regularity at r = 0, meaning u'(0) = 0 for mode 0
and u(0) = 0 otherwise; the Neumann derivative at r = 1; a Dirichlet far
end at r_cut for the exterior). One dense LU per (lambda, |k|) serves both
the kernel solve and the Neumann resolvent, so the discrete resolvent
identities hold to rounding by construction. Because the collocated
operator is the same one apply_T evaluates, kernel and resolvent outputs
satisfy the strong equation at the grid nodes up to the LU backward error.

For V = 0 the boundary scalars bypass collocation: interior kernels are
c I_k(s r) with s = sqrt(-lam), Re s > 0, and the mode Weyl values are

    interior  m_k = I_k(s) / (s I_k'(s)),
    exterior  m_k = (K_k + rho I_k)(s) / (-s (K_k' + rho I_k')(s)),

with rho = -K_k(s r_cut) / I_k(s r_cut) the Dirichlet truncation weight
(rho underflows harmlessly to 0 once Re(s) r_cut is large). Interior V = 0
kernel samples come from the ascending I series, exact to rounding.

The exterior domain is the truncation at r_cut with a Dirichlet far end;
that truncated operator, not the unbounded-domain one, is what every solve
and identity refers to, and its mode Weyl values differ from the
unbounded-domain ones by O(exp(-2 Re(s) (r_cut - 1))). Kernel samples at
|lambda| beyond the panel resolution (boundary layers thinner than the
first panel) lose accuracy; the boundary scalars stay exact.

Radial potentials are read through an explicit support window away from
r = 0, and the panel edges are aligned with the window endpoints so the
jump in V lands on panel boundaries and every panel sees a smooth
coefficient.

The free/potential matrices live in a different frame: a per-mode
cell-centered flux discretization of L_k, symmetrized by the diag(sqrt(r h))
similarity so that the free part is Hermitian positive semidefinite. Those
blocks drive certification, the sectorial factorization, and the relative
bound studies; they are statements about the matrices themselves.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np
from scipy.linalg import LinAlgError, block_diag, eigvalsh, lu_factor, lu_solve

from .bessel import bessel_i, bessel_j, bessel_k
from .errors import (InvalidPotential, MatchingSingular, NoRootInBracket,
                     TruncationWarning)
from .grids import PanelGrid, _bary_weights, graded_edges
from .potentials import Potential1D
from .triple_core import BoundaryOperator, TripleModel

_TWO_PI = 2.0 * np.pi


@dataclass(frozen=True)
class DiskModelConfig:
    """Side, mode truncation, optional radial potential, and resolutions."""

    side: str = "interior"
    k_max: int = 16
    radial_potential: Potential1D = None
    radial_grid: int = 256
    support: tuple = None
    r_cut: float = 16.0
    quad_panels: int = 16
    quad_order: int = 16

    def __post_init__(self):
        if self.side not in ("interior", "exterior"):
            raise ValueError("side must be 'interior' or 'exterior'")
        if not 1 <= self.k_max <= 64:
            raise ValueError("k_max must lie in [1, 64]")
        if self.radial_grid < 16:
            raise ValueError("radial_grid too coarse")
        if self.side == "exterior" and not self.r_cut > 2.0:
            raise ValueError("exterior truncation radius must exceed 2")
        if self.quad_panels < 2 or self.quad_order < 4:
            raise ValueError("quadrature resolution too coarse")
        if self.radial_potential is None:
            object.__setattr__(self, "radial_potential", Potential1D.zero())
        if not self.radial_potential.is_zero:
            if self.support is None:
                raise InvalidPotential(
                    "radial potentials need an explicit (lo, hi) support window"
                )
            lo, hi = (float(self.support[0]), float(self.support[1]))
            object.__setattr__(self, "support", (lo, hi))
            if self.side == "interior":
                ok = 0.0 < lo < hi <= 1.0
            else:
                ok = 1.0 <= lo < hi <= self.r_cut
            if not ok:
                raise InvalidPotential(
                    f"support window {self.support} invalid for {self.side} side"
                )


def _i_nodes_pair(k, z):
    """Vectorized (I_k, I_k') over an argument array via the ascending
    series; falls back to scalar evaluation when |z| gets large enough for
    the series to lose accuracy."""
    z = np.asarray(z, dtype=complex)
    if z.size and float(np.max(np.abs(z))) > 60.0:
        pairs = np.array([bessel_i(k, zz) for zz in z])
        return pairs[:, 0], pairs[:, 1]

    def series(kk):
        half = 0.5 * z
        term = half ** kk / math.factorial(kk)
        total = term.copy()
        zz4 = half * half
        for m in range(600):
            term = term * zz4 / ((m + 1.0) * (m + 1.0 + kk))
            total = total + term
            if float(np.max(np.abs(term))) <= 1e-17 * max(
                    float(np.max(np.abs(total))), 1e-300):
                break
        return total

    ik = series(k)
    if k == 0:
        return ik, series(1)
    return ik, 0.5 * (series(k - 1) + series(k + 1))


def _support_aligned(edges, support):
    """Panel edges with the support endpoints promoted to panel boundaries:
    the nearest edge snaps onto an endpoint when it is already close, and an
    extra edge is inserted otherwise."""
    out = [float(e) for e in np.asarray(edges, dtype=float)]
    for mark in support:
        mark = float(mark)
        if mark <= out[0] or mark >= out[-1]:
            continue
        arr = np.asarray(out)
        j = int(np.argmin(np.abs(arr - mark)))
        gaps = []
        if j > 0:
            gaps.append(arr[j] - arr[j - 1])
        if j < len(out) - 1:
            gaps.append(arr[j + 1] - arr[j])
        if arr[j] == mark:
            continue
        if 0 < j < len(out) - 1 and abs(arr[j] - mark) <= 0.45 * min(gaps):
            out[j] = mark
        else:
            out.append(mark)
            out.sort()
    return np.asarray(out)


class DiskModel(TripleModel):
    """Mode-decomposed TripleModel on the interior or exterior unit disk."""

    def __init__(self, config):
        self.config = config
        kk = config.k_max
        self.mode_numbers = np.arange(-kk, kk + 1)
        if config.side == "interior":
            edges = graded_edges(0.0, 1.0, config.quad_panels)
        else:
            edges = graded_edges(1.0, config.r_cut, config.quad_panels,
                                 ratio=1.3, toward="left")
        self._has_v = not config.radial_potential.is_zero
        if self._has_v:
            edges = _support_aligned(edges, config.support)
        self.grid = PanelGrid(edges, config.quad_order)
        self._r = self.grid.nodes
        self._rw = self.grid.weights * self._r  # weights of int . r dr
        self._d1 = self.grid.diff()
        self._d2 = self._d1 @ self._d1
        self._side = 1.0 if config.side == "interior" else -1.0
        self._vr = self._window_values(self._r)
        self._vr_conj = np.conjugate(self._vr)
        self._cache = {}
        self._blocks = None
        self._threshold = None
        self._build_collocation()

    # -- potential windowing -----------------------------------------------

    def _window_values(self, r):
        if not self._has_v:
            return np.zeros_like(np.asarray(r, dtype=float), dtype=complex)
        lo, hi = self.config.support
        vals = np.asarray(self.config.radial_potential(r), dtype=complex)
        mask = (np.asarray(r) >= lo) & (np.asarray(r) <= hi)
        return np.where(mask, vals, 0.0)

    # -- structure -----------------------------------------------------

    @property
    def _nr(self):
        return self.grid.size

    @property
    def _nm(self):
        return 2 * self.config.k_max + 1

    @property
    def state_dim(self):
        return self._nm * (self._nr + 2)

    @property
    def boundary_dim(self):
        return self._nm

    def describe(self):
        return (f"disk({self.config.side}, k_max={self.config.k_max}, "
                f"potential={self.config.radial_potential.kind})")

    def radial_nodes(self):
        return self._r.copy()

    def sample_positions(self):
        return np.tile(self._r, self._nm)

    def interior_values(self, f):
        return np.asarray(f)[:self._nm * self._nr]

    def _values(self, f):
        return np.asarray(f, dtype=complex)[:self._nm * self._nr].reshape(
            self._nm, self._nr)

    def _traces(self, f):
        return np.asarray(f, dtype=complex)[self._nm * self._nr:]

    def _assemble(self, values, traces):
        return np.concatenate([np.asarray(values, dtype=complex).ravel(),
                               np.asarray(traces, dtype=complex)])

    # -- operator action -------------------------------------------------

    def _apply(self, f, vr):
        u = self._values(f)
        r = self._r
        ksq = (self.mode_numbers.astype(float) ** 2)[:, None]
        out = (-(u @ self._d2.T) - (u @ self._d1.T) / r
               + (ksq / r ** 2) * u + vr * u)
        return self._assemble(out, np.zeros(2 * self._nm, dtype=complex))

    def apply_T(self, f):
        return self._apply(f, self._vr)

    def apply_Ttilde(self, g):
        return self._apply(g, self._vr_conj)

    def trace0(self, f):
        return self._side * self._traces(f)[1::2]

    def trace1(self, f):
        return self._traces(f)[0::2]

    def inner(self, f, g):
        fv = self._values(f)
        gv = self._values(g)
        return complex(_TWO_PI * ((fv * gv.conj()) @ self._rw).sum())

    def binner(self, phi, psi):
        return complex(_TWO_PI * np.vdot(np.asarray(psi), np.asarray(phi)))

    # -- collocation machinery ---------------------------------------------

    def _point_row(self, p, t):
        """Row evaluating the panel-p interpolant at the point t."""
        s = self.grid.panel_slice(p)
        x = self._r[s]
        row = np.zeros(self._nr)
        d = t - x
        hit = np.abs(d) < 1e-300
        if hit.any():
            loc = hit.astype(float)
        else:
            c = self._pan_bary[p] / d
            loc = c / c.sum()
        row[s] = loc
        return row

    def _deriv_row(self, p, t):
        """Row evaluating the panel-p interpolant derivative at t."""
        s = self.grid.panel_slice(p)
        row = np.zeros(self._nr)
        row[s] = self._point_row(p, t)[s] @ self._d1[s, s]
        return row

    def _build_collocation(self):
        g = self.grid
        self._pan_bary = [_bary_weights(self._r[g.panel_slice(p)])
                          for p in range(g.panels)]
        # -u'' - u'/r, before the diagonal k^2/r^2 + V - lam is added
        self._base = -self._d2 - self._d1 / self._r[:, None]
        iface = {}
        for p in range(g.panels - 1):
            e = g.edges[p + 1]
            left_last = g.panel_slice(p).stop - 1
            right_first = g.panel_slice(p + 1).start
            iface[left_last] = self._point_row(p, e) - self._point_row(p + 1, e)
            iface[right_first] = (self._deriv_row(p, e)
                                  - self._deriv_row(p + 1, e))
        self._iface_rows = iface
        last = g.panels - 1
        if self.config.side == "interior":
            self._row_u1 = self._point_row(last, 1.0)
            self._bc_left = {0: self._deriv_row(0, 0.0),
                             1: self._point_row(0, 0.0)}
            self._bc_right = self._deriv_row(last, 1.0)
            self._neumann_idx = self._nr - 1
        else:
            self._row_u1 = self._point_row(0, 1.0)
            self._bc_left = {0: self._deriv_row(0, 1.0),
                             1: self._deriv_row(0, 1.0)}
            self._bc_right = self._point_row(last, self.config.r_cut)
            self._neumann_idx = 0
        constrained = sorted(set(iface) | {0, self._nr - 1})
        mask = np.ones(self._nr, dtype=bool)
        mask[constrained] = False
        self._colloc_mask = mask

    def _mode_data(self, lam, tilde):
        key = (complex(lam), bool(tilde))
        data = self._cache.get(key)
        if data is None:
            if len(self._cache) >= 4:
                self._cache.clear()
            data = {}
            self._cache[key] = data
        return data

    def _colloc_lu(self, lam, tilde, k):
        data = self._mode_data(lam, tilde)
        got = data.get(("lu", k))
        if got is not None:
            return got
        lam = complex(lam)
        vr = self._vr_conj if tilde else self._vr
        a = self._base.astype(complex)
        idx = np.arange(self._nr)
        a[idx, idx] += float(k * k) / self._r ** 2 + vr - lam
        for i, row in self._iface_rows.items():
            a[i, :] = row
        a[0, :] = self._bc_left[min(k, 1)]
        a[self._nr - 1, :] = self._bc_right
        try:
            lu = lu_factor(a, check_finite=False)
        except LinAlgError as exc:
            raise MatchingSingular(
                f"mode {k} is Neumann-singular at lambda = {lam}") from exc
        du = np.abs(np.diag(lu[0]))
        if du.min() <= 1e-14 * max(float(du.max()), 1e-300):
            raise MatchingSingular(
                f"mode {k} is Neumann-singular at lambda = {lam}")
        data[("lu", k)] = lu
        return lu

    def _colloc_solve(self, lam, tilde, k, f_vals, neumann):
        lu = self._colloc_lu(lam, tilde, k)
        rhs = np.zeros(self._nr, dtype=complex)
        if f_vals is not None:
            rhs[self._colloc_mask] = np.asarray(
                f_vals, dtype=complex)[self._colloc_mask]
        rhs[self._neumann_idx] = neumann
        u = lu_solve(lu, rhs, check_finite=False)
        if not np.all(np.isfinite(u)):
            raise MatchingSingular(
                f"mode {k} is Neumann-singular at lambda = {lam}")
        return u

    # -- mode solutions ---------------------------------------------------

    def _s_of(self, lam):
        s = np.sqrt(-complex(lam))
        if s == 0.0:
            raise MatchingSingular("lambda = 0 sits on the Neumann band edge")
        if s.real < 0.0 or (s.real == 0.0 and s.imag < 0.0):
            s = -s
        return s

    def _exact_scalars(self, lam, k):
        """Boundary data (f(1), f'(1)) of the V = 0 kernel solution."""
        s = self._s_of(lam)
        if self.config.side == "interior":
            iv, ivp = bessel_i(k, s)
            return iv, s * ivp
        kb, kbp = bessel_k(k, s)
        zc = s * self.config.r_cut
        if zc.real > 300.0:
            return kb, s * kbp
        kc = bessel_k(k, zc)[0]
        ic = bessel_i(k, zc)[0]
        rho = -kc / ic
        ib, ibp = bessel_i(k, s)
        return kb + rho * ib, s * (kbp + rho * ibp)

    def _kernel(self, lam, tilde, k, need_values):
        """Kernel-side mode solution, unnormalized: (values_or_None, f(1),
        f'(1)). Interior V = 0 comes from the exact I series; everything
        else from the collocation solve with unit Neumann derivative."""
        data = self._mode_data(lam, tilde)
        entry = data.get(("kernel", k))
        if entry is not None and (entry[0] is not None or not need_values):
            return entry
        if not self._has_v and self.config.side == "interior":
            f1, df1 = self._exact_scalars(lam, k)
            vals = None
            if need_values:
                s = self._s_of(lam)
                vals = _i_nodes_pair(k, s * self._r)[0]
        else:
            vals = self._colloc_solve(lam, tilde, k, None, 1.0)
            f1 = complex(self._row_u1 @ vals)
            df1 = 1.0 + 0.0j
        entry = (vals, complex(f1), complex(df1))
        data[("kernel", k)] = entry
        return entry

    def mode_weyl_values(self, lam, tilde=False):
        """Diagonal of the Weyl matrix in the mode basis. For V = 0 this is
        boundary data alone (exact Bessel scalars, no radial solve); the
        tilde flag is then immaterial since the coefficients are real."""
        kk = self.config.k_max
        by_order = {}
        for k in range(kk + 1):
            if not self._has_v:
                f1, df1 = self._exact_scalars(lam, k)
            else:
                _, f1, df1 = self._kernel(lam, tilde, k, need_values=False)
            denom = self._side * df1
            if abs(denom) <= 1e-300 + 1e-13 * abs(f1):
                raise MatchingSingular(
                    f"mode {k} is Neumann-singular at lambda = {lam}")
            by_order[k] = f1 / denom
        return np.array([by_order[abs(int(k))] for k in self.mode_numbers])

    # -- kernel solves and resolvents ----------------------------------------

    def _solve_bvp(self, lam, g, tilde):
        g = np.asarray(g, dtype=complex)
        if g.shape != (self._nm,):
            raise ValueError(f"boundary data must have length {self._nm}")
        vals = np.zeros((self._nm, self._nr), dtype=complex)
        traces = np.zeros(2 * self._nm, dtype=complex)
        for p in range(self._nm):
            if g[p] == 0.0:
                continue
            k = abs(int(self.mode_numbers[p]))
            w, f1, df1 = self._kernel(lam, tilde, k, need_values=True)
            denom = self._side * df1
            if abs(denom) <= 1e-300 + 1e-13 * abs(f1):
                raise MatchingSingular(
                    f"mode {k} is Neumann-singular at lambda = {lam}")
            c = g[p] / denom
            vals[p] = c * w
            traces[2 * p] = c * f1
            traces[2 * p + 1] = c * df1
        return self._assemble(vals, traces)

    def solve_bvp(self, lam, g):
        return self._solve_bvp(lam, g, tilde=False)

    def solve_bvp_tilde(self, mu, g):
        return self._solve_bvp(mu, g, tilde=True)

    def _neumann_resolvent(self, lam, f, tilde):
        fv = self._values(f)
        vals = np.zeros((self._nm, self._nr), dtype=complex)
        traces = np.zeros(2 * self._nm, dtype=complex)
        for p in range(self._nm):
            if not np.any(fv[p]):
                continue
            k = abs(int(self.mode_numbers[p]))
            u = self._colloc_solve(lam, tilde, k, fv[p], 0.0)
            vals[p] = u
            traces[2 * p] = complex(self._row_u1 @ u)
            traces[2 * p + 1] = 0.0
        return self._assemble(vals, traces)

    def neumann_resolvent(self, lam, f):
        return self._neumann_resolvent(lam, f, tilde=False)

    def neumann_resolvent_tilde(self, mu, f):
        return self._neumann_resolvent(mu, f, tilde=True)

    # -- boundary operators --------------------------------------------------

    def boundary_multiplication(self, coeffs):
        """Boundary operator of multiplication by c(theta) = sum_j c_j
        e^{ij theta}, compressed to the kept modes. ``coeffs`` maps integer
        frequencies j to complex amplitudes. Warns with TruncationWarning
        when the symbol couples kept modes to dropped ones."""
        kk = self.config.k_max
        b = np.zeros((self._nm, self._nm), dtype=complex)
        spill = False
        for j, cj in coeffs.items():
            j = int(j)
            if cj == 0:
                continue
            for q, k_q in enumerate(self.mode_numbers):
                target = k_q + j
                if abs(target) <= kk:
                    b[target + kk, q] += cj
                else:
                    spill = True
        if spill:
            warnings.warn(
                f"multiplication symbol couples modes beyond |k| = {kk}; "
                "the spilled couplings were dropped", TruncationWarning,
                stacklevel=2)
        return BoundaryOperator(matrix=b)

    # -- matrices and certification -----------------------------------------

    def _mode_block(self, k):
        m = self.config.radial_grid
        if self.config.side == "interior":
            lo_edge, hi_edge = 0.0, 1.0
        else:
            lo_edge, hi_edge = 1.0, self.config.r_cut
        h = (hi_edge - lo_edge) / m
        centers = lo_edge + (np.arange(m) + 0.5) * h
        faces = lo_edge + np.arange(m + 1) * h
        hn = np.zeros((m, m))
        # interior faces carry flux face_r/h^2, symmetrized by sqrt(r h)
        for j in range(m - 1):
            c = faces[j + 1] / h ** 2
            hn[j, j] += c / centers[j]
            hn[j + 1, j + 1] += c / centers[j + 1]
            coupling = c / np.sqrt(centers[j] * centers[j + 1])
            hn[j, j + 1] -= coupling
            hn[j + 1, j] -= coupling
        if self.config.side == "interior":
            # face at r = 0 carries zero flux, face at r = 1 is Neumann
            pass
        else:
            # face at r = 1 is Neumann; far end is a Dirichlet truncation
            hn[m - 1, m - 1] += 2.0 * faces[m] / (h ** 2 * centers[m - 1])
        hn = hn + np.diag(float(k * k) / centers ** 2)
        v = np.diag(self._window_values(centers))
        return hn, v

    def hn_v_blocks(self):
        if self._blocks is None:
            self._blocks = [self._mode_block(k)
                            for k in range(self.config.k_max + 1)]
        return [(hn.copy(), v.copy()) for hn, v in self._blocks]

    def hn_matrix(self):
        """Direct sum over all kept modes (duplicating |k| >= 1); intended
        for small truncations, the suites work block-wise instead."""
        blocks = dict(enumerate(self.hn_v_blocks()))
        return block_diag(*[blocks[abs(int(k))][0]
                            for k in self.mode_numbers])

    def v_matrix(self):
        blocks = dict(enumerate(self.hn_v_blocks()))
        return block_diag(*[blocks[abs(int(k))][1]
                            for k in self.mode_numbers])

    def certified_threshold(self):
        if self._threshold is None:
            if not self._has_v:
                self._threshold = -0.5
            else:
                from .triple_core import find_xi2
                from .errors import ThresholdNotFound
                try:
                    xi2 = find_xi2(self)
                except ThresholdNotFound:
                    xi2 = -np.inf
                bottom = min(float(eigvalsh(hn)[0])
                             for hn, _ in self.hn_v_blocks())
                lo, hi = self.config.support
                proxy = self.config.radial_potential.sup_proxy(lo, hi)
                self._threshold = min(xi2, bottom - proxy, -1e-6)
        return self._threshold

    def random_domain_vector(self, rng):
        kk = self.config.k_max
        r = self._r
        vals = np.zeros((self._nm, self._nr), dtype=complex)
        traces = np.zeros(2 * self._nm, dtype=complex)
        if self.config.side == "interior":
            for p, k_signed in enumerate(self.mode_numbers):
                k = abs(int(k_signed))
                c = rng.standard_normal(3) + 1j * rng.standard_normal(3)
                vals[p] = r ** k * (c[0] + c[1] * r + c[2] * r ** 2)
                traces[2 * p] = c[0] + c[1] + c[2]
                traces[2 * p + 1] = k * (c[0] + c[1] + c[2]) + c[1] + 2.0 * c[2]
        else:
            rcut = self.config.r_cut
            t = r - 1.0
            w = (rcut - r) / (rcut - 1.0)
            decay = np.exp(-t)
            for p in range(self._nm):
                c = rng.standard_normal(3) + 1j * rng.standard_normal(3)
                vals[p] = decay * (c[0] + c[1] * t + c[2] * t ** 2) * w
                traces[2 * p] = c[0]
                traces[2 * p + 1] = -c[0] + c[1] - c[0] / (rcut - 1.0)
        return self._assemble(vals, traces)


def build_disk(config):
    """Interior or exterior unit-disk model for the given configuration."""
    if not isinstance(config, DiskModelConfig):
        raise TypeError("expected a DiskModelConfig")
    return DiskModel(config)


def disk_robin_reference(k, beta):
    """Smallest positive Robin eigenvalue of the V = 0 interior disk for
    Fourier mode k: the first positive root of

        sqrt(lam) J_k'(sqrt(lam)) = beta J_k(sqrt(lam)),

    located by a fixed-step scan in t = sqrt(lam) (step 0.02, first sign
    change) followed by bisection. The Bessel evaluations stay accurate for
    t <= 8.5, which covers the low modes; beyond that the scan gives up with
    NoRootInBracket."""
    k = int(k)
    if k < 0:
        raise ValueError("mode index must be nonnegative")
    beta = float(beta)

    def g(t):
        jv, jd = bessel_j(k, t)
        return t * jd - beta * jv

    step = 0.02
    t_max = 8.5
    t_prev = step
    g_prev = g(t_prev)
    t = t_prev + step
    bracket = None
    while t <= t_max + 1e-12:
        g_here = g(t)
        if g_prev == 0.0:
            bracket = (t_prev, t_prev)
            break
        if (g_prev < 0.0) != (g_here < 0.0):
            bracket = (t_prev, t)
            break
        t_prev, g_prev = t, g_here
        t += step
    if bracket is None:
        raise NoRootInBracket(
            f"no Robin crossing for mode {k}, beta = {beta:g}, t <= {t_max}")
    lo, hi = bracket
    if lo == hi:
        return lo ** 2
    g_lo = g(lo)
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        g_mid = g(mid)
        if g_mid == 0.0:
            lo = hi = mid
            break
        if (g_mid < 0.0) == (g_lo < 0.0):
            lo, g_lo = mid, g_mid
        else:
            hi = mid
        if hi - lo <= 1e-13 * max(1.0, lo):
            break
    return (0.5 * (lo + hi)) ** 2

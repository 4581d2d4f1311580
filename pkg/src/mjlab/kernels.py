"""Fourier kernel bases for the two elliptic Laplace-type equations, the
image table of the four covariant xi operators on them, and theta
decomposition/recomposition of holomorphic-type Fourier data.

A kernel term is c_i(n, r; y, v) q^n zeta^r where the coefficient functions
c_1..c_4 (and the skew variants) span the solution space of the Casimir and
Heisenberg Laplace equations for the discriminant D = 4mn - r^2.  Fourier
data with the class-function property c(n, r) = c(n', r') for equal D and
r = r' mod 2m decomposes into label-indexed q-series with exact rational
exponents.
"""

import cmath
import json
import math
from dataclasses import dataclass, field
from fractions import Fraction

from .core import FunctionHandle, JetVars, TruncationPolicy, WeightIndex
from .errors import DomainError, JetUnavailable, NotThetaDecomposable
from .jets import Jet
from .mu import component_labels, mu_hat_component_jet
from .operators import (
    VerificationReport,
    casimir,
    casimir_skew,
    laplace_heisenberg,
    xi,
    xi_H,
    xi_H_skew,
    xi_skew,
)
from .special import H_jet, gamma_half_jet, theta_ml_jet

TWO_PI = 2.0 * math.pi

# the sgn factor of c_3/c_4 is locally constant; jets are refused closer to
# its jump locus r + 2mv/y = 0 than this
SGN_LOCUS_TOL = 1e-3


@dataclass(frozen=True)
class KernelParams:
    """Weight k, index m (half-integers, m != 0), and a Fourier pair (n, r).

    The discriminant D = 4mn - r^2 is always recomputed from the fields.
    """

    two_k: int
    two_m: int
    n: int
    r: int

    def __post_init__(self):
        if self.two_m == 0:
            raise DomainError("index m must be nonzero")
        for name in ("two_k", "two_m", "n", "r"):
            if not isinstance(getattr(self, name), int):
                raise DomainError("%s must be an integer" % name)

    @property
    def k(self):
        return self.two_k / 2.0

    @property
    def m(self):
        return self.two_m / 2.0

    @property
    def D(self):
        return 2 * self.two_m * self.n - self.r * self.r

    @classmethod
    def of(cls, k, m, n, r):
        wi = WeightIndex.of(k, m)
        return cls(wi.two_k, wi.two_m, int(n), int(r))

    def weight_index(self):
        return WeightIndex(self.two_k, self.two_m)

    def with_weight(self, k):
        return KernelParams.of(k, self.m, self.n, self.r)

    def xi_partner(self):
        """Parameters [3 - k, m, n, r] of the xi / xi^sk image."""
        return KernelParams(6 - self.two_k, self.two_m, self.n, self.r)

    def xi_H_partner(self):
        """Parameters [k, -m, -n, -r] of the xi^H / xi^{sk,H} image."""
        return KernelParams(self.two_k, -self.two_m, -self.n, -self.r)


def _sgn_gamma_jet(params, jv):
    """sgn(r + 2mv/y) gamma(1/2, (-pi y / m)(r + 2mv/y)^2) as a jet."""
    m = params.m
    Y, V = jv.y, jv.v
    a = params.r + (2.0 * m) * V / Y
    a0 = a.value.real
    if abs(a0) < 1e-14:
        if jv.order > 0:
            raise JetUnavailable(
                "sgn factor is not smooth on the locus r + 2mv/y = 0"
            )
        return Jet.constant(0.0, 0)
    if abs(a0) < SGN_LOCUS_TOL and jv.order > 0:
        raise JetUnavailable(
            "jet requested within %g of the sgn jump locus" % SGN_LOCUS_TOL
        )
    sgn = 1.0 if a0 > 0 else -1.0
    arg = (-math.pi / m) * Y * a * a
    return sgn * gamma_half_jet(arg)


def kernel_jet(i, params, skew, jv):
    """Jet of the coefficient function c_i (or c_i^sk) in (y, v)."""
    if i not in (1, 2, 3, 4):
        raise DomainError("kernel label must be 1..4")
    k, m, D = params.k, params.m, params.D
    Y = jv.y
    if D != 0:
        w = (math.pi * D / (2.0 * m)) * Y
        if not skew:
            if i == 1:
                return Jet.constant(1.0, jv.order)
            if i == 2:
                return H_jet(w, k) * w.exp()
            if i == 3:
                return _sgn_gamma_jet(params, jv)
            return H_jet(w, k) * w.exp() * _sgn_gamma_jet(params, jv)
        if i == 1:
            return (2.0 * w).exp()
        if i == 2:
            return H_jet(-1.0 * w, k) * w.exp()
        if i == 3:
            return (2.0 * w).exp() * _sgn_gamma_jet(params, jv)
        return H_jet(-1.0 * w, k) * w.exp() * _sgn_gamma_jet(params, jv)
    # D = 0: the skew coefficients coincide with the standard ones
    if i == 1:
        return Jet.constant(1.0, jv.order)
    if i == 2:
        return Y.cpow(1.5 - k)
    if i == 3:
        return _sgn_gamma_jet(params, jv)
    return Y.cpow(1.5 - k) * _sgn_gamma_jet(params, jv)


def kernel_c(i, params, skew, p):
    """Point value of the coefficient function c_i(n, r; y, v)."""
    return kernel_jet(i, params, skew, JetVars.at(p, 0)).value


def kernel_term_handle(i, params, skew=False):
    """The full term c_i(n, r; y, v) q^n zeta^r with exact jets."""
    n, r = params.n, params.r

    def je(jv):
        phase = (2j * math.pi * (n * jv.tau + r * jv.z)).exp()
        return kernel_jet(i, params, skew, jv) * phase

    tag = "sk" if skew else ""
    return FunctionHandle(
        jet_fn=je,
        label="c%d%s[%g,%g,%d,%d]" % (i, tag, params.k, params.m, n, r),
    )


# ----------------------------------------------------------------------
# the xi image table

_SQRT_PI = math.sqrt(math.pi)


def _const_pow(base, expo):
    return -(complex(base) ** expo)


def xi_image_rows(params):
    """The sixteen image identities of the four xi operators on the kernel
    terms at the given parameters (the D = 0 display when D vanishes).

    Each row is (case, operator name, input (i, skew), constant, target
    params (i, skew, KernelParams) or None for a vanishing image).
    """
    k, m, D = params.k, params.m, params.D
    p_xi = params.xi_partner()
    p_xh = params.xi_H_partner()
    if D != 0:
        a_xi = _const_pow(-math.pi * D / m, 1.5 - k)
        a_sk = _const_pow(math.pi * D / m, 1.5 - k)
    else:
        a_xi = a_sk = 1.5 - k
    a_h = -2.0 * _SQRT_PI
    rows = [
        ("xi(c1)", "xi", (1, False), 0.0, None),
        ("xi(c2)", "xi", (2, False), a_xi, (1, True, p_xi)),
        ("xi(c3)", "xi", (3, False), 0.0, None),
        ("xi(c4)", "xi", (4, False), a_xi, (3, True, p_xi)),
        ("xiH(c1)", "xiH", (1, False), 0.0, None),
        ("xiH(c2)", "xiH", (2, False), 0.0, None),
        ("xiH(c3)", "xiH", (3, False), a_h, (1, True, p_xh)),
        ("xiH(c4)", "xiH", (4, False), a_h, (2, True, p_xh)),
        ("xiSk(c1sk)", "xiSk", (1, True), 0.0, None),
        ("xiSk(c2sk)", "xiSk", (2, True), a_sk, (1, False, p_xi)),
        ("xiSk(c3sk)", "xiSk", (3, True), 0.0, None),
        ("xiSk(c4sk)", "xiSk", (4, True), a_sk, (3, False, p_xi)),
        ("xiSkH(c1sk)", "xiSkH", (1, True), 0.0, None),
        ("xiSkH(c2sk)", "xiSkH", (2, True), 0.0, None),
        ("xiSkH(c3sk)", "xiSkH", (3, True), a_h, (1, False, p_xh)),
        ("xiSkH(c4sk)", "xiSkH", (4, True), a_h, (2, False, p_xh)),
    ]
    return rows


_XI_BUILDERS = {
    "xi": xi,
    "xiH": xi_H,
    "xiSk": xi_skew,
    "xiSkH": xi_H_skew,
}


def verify_xi_image_table(params, points, cases=None):
    """Residuals of the selected image identities at the given points."""
    wi = params.weight_index()
    reports = []
    for case, op_name, (i, skew), const, target in xi_image_rows(params):
        if cases is not None and case not in cases:
            continue
        f = kernel_term_handle(i, params, skew=skew)
        lhs = _XI_BUILDERS[op_name](wi, f)
        if target is None:
            rhs = None
        else:
            ti, tskew, tparams = target
            rhs = kernel_term_handle(ti, tparams, skew=tskew)
        rep = VerificationReport(
            "xi-image:%s@[%g,%g,%d,%d]" % (case, params.k, params.m, params.n, params.r),
            points,
        )
        for p in points:
            jv = JetVars.at(p, 0)
            val = lhs.jet_at(jv).value
            if rhs is not None:
                val = val - const * rhs.jet_at(jv).value
            rep.record(p, abs(val))
        reports.append(rep)
    return reports


def verify_kernel_annihilation(params, points):
    """Residuals of Casimir and Heisenberg Laplace annihilation for all
    kernel terms at the given parameters."""
    wi = params.weight_index()
    reports = []
    for skew in (False, True):
        for i in (1, 2, 3, 4):
            f = kernel_term_handle(i, params, skew=skew)
            cas = casimir_skew(wi, f) if skew else casimir(wi, f)
            lap = laplace_heisenberg(wi, f)
            tag = "c%d%s" % (i, "sk" if skew else "")
            for name, op in (("Casimir", cas), ("LaplaceH", lap)):
                rep = VerificationReport(
                    "kernel-annihilation:%s(%s)@[%g,%g,%d,%d]"
                    % (name, tag, params.k, params.m, params.n, params.r),
                    points,
                )
                for p in points:
                    rep.record(p, abs(op.jet_at(JetVars.at(p, 0)).value))
                reports.append(rep)
    return reports


# ----------------------------------------------------------------------
# Fourier data and theta decomposition

CLASS_TOL = 1e-12


@dataclass
class FourierData:
    """Finite-support Fourier coefficients c(n, r) at index m = two_m / 2 > 0.

    When `holomorphic` is set the class-function property is enforced on
    construction: coefficients agree whenever the discriminants agree and
    r = r' mod 2m.
    """

    two_m: int
    coefficients: dict = field(default_factory=dict)
    holomorphic: bool = False

    def __post_init__(self):
        if self.two_m < 1:
            raise DomainError("2m must be a positive integer")
        clean = {}
        for (n, r), c in self.coefficients.items():
            clean[(int(n), int(r))] = complex(c)
        self.coefficients = clean
        if self.holomorphic:
            self.check_class_function()

    def discriminant(self, n, r):
        return 2 * self.two_m * n - r * r

    def class_key(self, n, r):
        return (self.discriminant(n, r), r % self.two_m)

    def check_class_function(self, tol=CLASS_TOL):
        groups = {}
        for (n, r), c in self.coefficients.items():
            groups.setdefault(self.class_key(n, r), []).append(((n, r), c))
        for key, entries in groups.items():
            ref = entries[0][1]
            for (n, r), c in entries[1:]:
                if abs(c - ref) > tol:
                    raise NotThetaDecomposable(
                        "coefficients at (%d,%d) and (%d,%d) differ in class %r"
                        % (entries[0][0] + (n, r) + (key,))
                    )
        return groups

    def handle(self):
        """The generating function sum c(n, r) q^n zeta^r as a handle."""
        items = sorted(self.coefficients.items())

        def je(jv):
            out = Jet.constant(0.0, jv.order)
            for (n, r), c in items:
                out = out + c * (2j * math.pi * (n * jv.tau + r * jv.z)).exp()
            return out

        return FunctionHandle(jet_fn=je, label="fourier[2m=%d]" % self.two_m)

    def to_text(self):
        lines = ["index 2m=%d" % self.two_m]
        for (n, r), c in sorted(self.coefficients.items()):
            lines.append("%d %d %.17g %.17g" % (n, r, c.real, c.imag))
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text, holomorphic=False):
        lines = [ln.strip() for ln in text.splitlines() if ln.strip()]
        if not lines or not lines[0].startswith("index 2m="):
            raise DomainError("missing 'index 2m=<integer>' header")
        two_m = int(lines[0].split("=", 1)[1])
        coeffs = {}
        for ln in lines[1:]:
            parts = ln.split()
            if len(parts) != 4:
                raise DomainError("expected 'n r re im', got %r" % ln)
            n, r = int(parts[0]), int(parts[1])
            coeffs[(n, r)] = complex(float(parts[2]), float(parts[3]))
        return cls(two_m, coeffs, holomorphic=holomorphic)


def theta_fourier_data(two_m, l, t_range=4):
    """Fourier data of the label-l congruence theta series, restricted to
    its integer-exponent support r = l + 2mt, n = r^2 / 4m."""
    coeffs = {}
    for t in range(-t_range, t_range + 1):
        r = l + two_m * t
        num = r * r
        den = 2 * two_m
        if num % den:
            continue
        coeffs[(num // den, r)] = 1.0
    if not coeffs:
        raise DomainError("no integer-exponent terms for label %r" % (l,))
    return FourierData(two_m, coeffs, holomorphic=True)


def theta_decompose(data):
    """Label-indexed q-series h_l with exact rational exponents such that
    the data is sum over l of h_l theta_{m,l}.

    Returns {l: [(Fraction exponent, coefficient), ...]} with l running over
    the integer residues mod 2m; each distinct discriminant contributes one
    term q^(D / 4m).
    """
    groups = data.check_class_function()
    h = {l: [] for l in range(data.two_m)}
    for (D, l), entries in sorted(groups.items()):
        h[l].append((Fraction(D, 2 * data.two_m), entries[0][1]))
    for l in h:
        h[l].sort(key=lambda t: t[0])
    return h


def h_to_json(h):
    obj = {}
    for l, series in h.items():
        obj[str(l)] = [
            [e.numerator, e.denominator, c.real, c.imag] for e, c in series
        ]
    return json.dumps(obj, sort_keys=True)


def h_from_json(text):
    obj = json.loads(text)
    out = {}
    for key, rows in obj.items():
        label = Fraction(key)
        label = int(label) if label.denominator == 1 else float(label)
        out[label] = [
            (Fraction(int(num), int(den)), complex(re, im))
            for num, den, re, im in rows
        ]
    return out


def h_series_eval(series, tau):
    """Value of a rational-exponent q-series at tau."""
    return sum(
        c * cmath.exp(2j * math.pi * float(e) * tau) for e, c in series
    )


def h_series_handle(series, label="h"):
    """A rational-exponent q-series as a handle (a function of tau only)."""

    def je(jv):
        out = Jet.constant(0.0, jv.order)
        for e, c in series:
            out = out + c * (2j * math.pi * float(e) * jv.tau).exp()
        return out

    return FunctionHandle(jet_fn=je, label=label)


def theta_recompose_handle(two_m, h, policy=None):
    """sum over labels of h_l(tau) theta_{m,l}(tau, z) with exact jets.

    h maps labels to either rational-exponent series (lists) or handles.
    """
    hs = {
        l: (v if isinstance(v, FunctionHandle) else h_series_handle(v))
        for l, v in h.items()
    }

    def je(jv):
        out = Jet.constant(0.0, jv.order)
        for l, handle in hs.items():
            out = out + handle.jet_at(jv) * theta_ml_jet(
                two_m, l, jv.tau, jv.z, policy
            )
        return out

    return FunctionHandle(jet_fn=je, label="theta-recompose[2m=%d]" % two_m)


def theta_recompose(two_m, h, p, policy=None):
    return theta_recompose_handle(two_m, h, policy).eval(p)


def theta_like_recompose_handle(two_m, h, varphi=None, policy=None):
    """sum over labels of h_l(tau) mu_hat_{m,l}(tau, z), plus an optional
    meromorphic part, with exact jets.

    h maps the canonical component labels (component_labels(two_m)) to
    handles or rational-exponent series; missing labels contribute nothing.
    """
    valid = set(component_labels(two_m))
    hs = {}
    for l, v in h.items():
        if l not in valid:
            raise DomainError(
                "label %r is not one of the canonical labels %r"
                % (l, sorted(valid))
            )
        hs[l] = v if isinstance(v, FunctionHandle) else h_series_handle(v)

    def je(jv):
        out = Jet.constant(0.0, jv.order)
        for l, handle in hs.items():
            out = out + handle.jet_at(jv) * mu_hat_component_jet(
                two_m, l, jv.tau, jv.z, policy
            )
        if varphi is not None:
            out = out + varphi.jet_at(jv)
        return out

    return FunctionHandle(jet_fn=je, label="mu-recompose[2m=%d]" % two_m)


def theta_like_recompose(two_m, h, varphi, p, policy=None):
    return theta_like_recompose_handle(two_m, h, varphi, policy).eval(p)

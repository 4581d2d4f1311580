"""Named verification suites over the identity catalog: operator/slash
covariance, kernel annihilation and xi-image tables, factorization
identities, Weil matrix relations, the completed Appell component laws, and
the decomposition round trip.

Each suite returns a list of SuiteResult records with pinned tolerances;
the command line front end serializes them and the test harness asserts on
them.  All default point sets are deterministic.
"""

import cmath
import math
import random
from dataclasses import dataclass

import numpy as np

from .core import (
    EvalPoint,
    FunctionHandle,
    JetVars,
    TruncationPolicy,
    WeightIndex,
    exp_qn_zeta_r,
)
from .group import GEN_S, GEN_T, TaggedForm, apply_slash, heisenberg
from .jets import Jet
from .kernels import (
    FourierData,
    KernelParams,
    kernel_term_handle,
    theta_decompose,
    theta_fourier_data,
    theta_recompose,
    verify_kernel_annihilation,
    verify_xi_image_table,
)
from .mu import (
    component_labels,
    mu_hat_2_handle,
    mu_hat_ml_handle,
    mu_m_jet,
)
from .operators import (
    OperatorSpec,
    apply_operator,
    laplace_heisenberg,
    verify_covariance,
    verify_factorizations,
    verify_hyperbolic_xi_factorization,
    verify_semimeromorphic_casimir,
    verify_x_factorization,
    xi,
    xi_H,
    xi_skew,
)
from .special import theta_ml_handle, theta_ml_jet, zwegers_R_jet
from .weil import labels, rho_generator, rho_word, vector_slash

TWO_PI = 2.0 * math.pi

GENERIC_POINTS = (
    EvalPoint(0.13, 1.1, 0.21, 0.17),
    EvalPoint(-0.40, 0.9, 0.05, 0.31),
    EvalPoint(0.31, 1.6, -0.12, 0.23),
    EvalPoint(0.02, 0.8, 0.40, -0.27),
    EvalPoint(-0.20, 1.3, 0.33, 0.41),
)

GENERIC_POINTS_10 = GENERIC_POINTS + (
    EvalPoint(0.41, 1.0, 0.11, 0.09),
    EvalPoint(-0.17, 1.4, -0.23, 0.14),
    EvalPoint(0.23, 0.85, 0.37, 0.19),
    EvalPoint(-0.08, 1.15, 0.26, -0.18),
    EvalPoint(0.35, 1.25, -0.31, 0.27),
)

GENERATORS = {
    "T": GEN_T,
    "S": GEN_S,
    "lambda": heisenberg(1.0, 0.0),
    "mu": heisenberg(0.0, 1.0),
}


@dataclass
class SuiteResult:
    identity: str
    max_residual: float
    tol: float

    @property
    def passed(self):
        return self.max_residual < self.tol

    def as_dict(self):
        return {
            "identity": self.identity,
            "max_residual": self.max_residual,
            "tol": self.tol,
            "passed": self.passed,
        }


def _from_report(report, tol):
    return SuiteResult(report.identity, report.max_residual, tol)


# ----------------------------------------------------------------------
# covariance


def covariance_catalog():
    """Tagged catalog functions used by the covariance suite."""
    std = [
        TaggedForm(theta_ml_handle(2, 0), WeightIndex(1, 2), "standard"),
        TaggedForm(
            kernel_term_handle(3, KernelParams.of(0.5, -1, -1, 1)),
            WeightIndex(1, -2),
            "standard",
        ),
        TaggedForm(mu_hat_ml_handle(2, 0.0), WeightIndex(1, -2), "standard"),
    ]
    skew = [
        TaggedForm(
            kernel_term_handle(1, KernelParams.of(0.5, -1, -1, 1), skew=True),
            WeightIndex(1, -2),
            "skew",
        ),
        TaggedForm(
            kernel_term_handle(4, KernelParams.of(0.5, -1, -1, 1), skew=True),
            WeightIndex(1, -2),
            "skew",
        ),
    ]
    return std, skew

COVARIANCE_OPS = (
    "X+", "X-", "Y+", "Y-", "Xsk+", "Xsk-", "Ysk+", "Ysk-",
    "xiH", "xiSkH", "xi", "xiSk",
)


def suite_covariance(ops=None, gens=None, points=None, tol=1e-8):
    """op(phi|A) = (op phi)|A' for every operator and group generator."""
    points = points or GENERIC_POINTS[:3]
    std, skew = covariance_catalog()
    results = []
    for op_name in ops or COVARIANCE_OPS:
        kind = OperatorSpec(op_name, WeightIndex(1, 2)).input_kind()
        catalog = std if kind == "standard" else skew
        for gname in gens or GENERATORS:
            A = GENERATORS[gname]
            for phi in catalog:
                rep = verify_covariance(op_name, phi, A, points)
                results.append(
                    SuiteResult(
                        "covariance:%s|%s on %s" % (op_name, gname, phi.f.label),
                        rep.max_residual,
                        tol,
                    )
                )
    return results


# ----------------------------------------------------------------------
# kernel annihilation and xi images

KERNEL_PARAMS = (
    KernelParams.of(0.5, 1, 0, 1),
    KernelParams.of(0.5, 1, 0, 0),
    KernelParams.of(0.5, -1, 0, 1),
    KernelParams.of(0.5, -1, 0, 0),
    KernelParams.of(1.5, 0.5, 0, 1),
    KernelParams.of(1.5, 0.5, 0, 0),
    KernelParams.of(1.5, -0.5, 0, 1),
    KernelParams.of(1.5, -0.5, 0, 0),
)

XI_TABLE_PARAMS = (
    KernelParams.of(0.5, -1, -1, 1),
    KernelParams.of(0.5, -1, 0, 0),
)


def suite_kernels(points=None, tol=1e-7):
    """Casimir and Heisenberg Laplace annihilation of all kernel terms."""
    points = points or GENERIC_POINTS
    results = []
    for params in KERNEL_PARAMS:
        for rep in verify_kernel_annihilation(params, points):
            results.append(_from_report(rep, tol))
    return results


def suite_xi_images(params_list=None, points=None, tol=1e-7):
    """The full image table of the four xi operators on kernel terms."""
    points = points or GENERIC_POINTS
    results = []
    for params in params_list or XI_TABLE_PARAMS:
        for rep in verify_xi_image_table(params, points):
            results.append(_from_report(rep, tol))
    return results


# ----------------------------------------------------------------------
# factorizations


def _yv_test_handle(n, r):
    """exp(2 pi i (n tau + r z)) y v, a smooth non-holomorphic probe."""

    def je(jv):
        return (2j * math.pi * (n * jv.tau + r * jv.z)).exp() * jv.y * jv.v

    return FunctionHandle(jet_fn=je, label="q^%d zeta^%d y v" % (n, r))


def _tau_test_handle():
    """exp(2 pi i tau) + y^(3/2), a smooth function of tau alone."""

    def je(jv):
        return (2j * math.pi * jv.tau).exp() + jv.y.cpow(1.5)

    return FunctionHandle(jet_fn=je, label="q + y^1.5")


def suite_factorizations(points=None, tol=1e-6):
    points = points or GENERIC_POINTS[:3]
    results = []
    wi = WeightIndex(1, 2)
    probe = _yv_test_handle(1, 1)
    for depth in (1, 2, 3):
        for rep in verify_factorizations(wi, probe, depth, points):
            results.append(_from_report(rep, tol))
    wi_half = WeightIndex(3, 1)
    theta_half = theta_ml_handle(1, 0.5)
    for rep in verify_factorizations(wi_half, theta_half, 2, points):
        results.append(_from_report(rep, tol))
    tau_probe = _tau_test_handle()
    for depth in (1, 2):
        rep = verify_x_factorization(2.5, tau_probe, depth, points)
        results.append(_from_report(rep, tol))
    rep = verify_hyperbolic_xi_factorization(1.5, tau_probe, points)
    results.append(_from_report(rep, tol))
    for wi_c, n, r in ((WeightIndex(1, 2), 1, 1), (WeightIndex(3, 2), 0, 1)):
        mero = exp_qn_zeta_r(n, r)
        rep = verify_semimeromorphic_casimir(wi_c, mero, points)
        results.append(_from_report(rep, tol))
        rep = verify_semimeromorphic_casimir(wi_c, mero, points, skew=True)
        results.append(_from_report(rep, tol))
    return results


# ----------------------------------------------------------------------
# Weil matrices


def suite_weil(two_m_list=(1, 2, 3, 4), point=None, tol_unitary=1e-13,
               tol_braid=1e-12, tol_theta=1e-8):
    results = []
    for two_m in two_m_list:
        for which in ("T", "S"):
            mat = rho_generator(two_m, which)
            results.append(
                SuiteResult(
                    "weil:unitarity:%s@2m=%d" % (which, two_m),
                    mat.unitarity_defect(),
                    tol_unitary,
                )
            )
        st3 = rho_word(two_m, "STSTST")
        s2 = rho_word(two_m, "SS")
        results.append(
            SuiteResult(
                "weil:braid:(ST)^3=S^2@2m=%d" % two_m,
                st3.distance(s2),
                tol_braid,
            )
        )
        s8 = rho_word(two_m, "S" * 8)
        eye = rho_generator(two_m, "T").power(0)
        results.append(
            SuiteResult(
                "weil:S^8=1@2m=%d" % two_m, s8.distance(eye), tol_braid
            )
        )
    p = point or EvalPoint(0.17, 1.2, 0.13, 0.21)
    for two_m in two_m_list:
        if two_m % 2:
            continue
        comps = [theta_ml_handle(two_m, l) for l in labels(two_m)]
        base = np.array([h.eval(p) for h in comps])
        for word in ("T", "S"):
            out = vector_slash(comps, 1, two_m, word, p, dual=True)
            results.append(
                SuiteResult(
                    "weil:theta-vector-invariance:%s@2m=%d" % (word, two_m),
                    float(np.max(np.abs(out.data - base))),
                    tol_theta,
                )
            )
    return results


# ----------------------------------------------------------------------
# the completed Appell component family


def _root_of_unity(num, den):
    return cmath.exp(2j * math.pi * num / den)


def suite_mu_transform(two_m_list=(1, 2), points=None, tol=1e-6):
    """The claimed T and S transformation laws of the component vector, and
    the vector-slash form of the S law.

    The T law holds; the S law of the displayed completion fails (the
    recorded obstruction) and is reported faithfully.
    """
    points = points or GENERIC_POINTS[:5]
    results = []
    for two_m in two_m_list:
        m = two_m / 2.0
        ls = component_labels(two_m)
        handles = {l: mu_hat_ml_handle(two_m, l) for l in ls}
        wi = WeightIndex(1, -two_m)
        for l in ls:
            tagged = TaggedForm(handles[l], wi, "standard")
            slashed_T = apply_slash(tagged, GEN_T).f
            slashed_S = apply_slash(tagged, GEN_S).f
            phase = _root_of_unity(-l * l, 2 * two_m)
            resid_T = 0.0
            resid_S = 0.0
            for p in points:
                lhs = slashed_T.eval(p)
                rhs = phase * handles[l].eval(p)
                resid_T = max(resid_T, abs(lhs - rhs))
                lhs = slashed_S.eval(p)
                pref = 1j / cmath.sqrt(1j * two_m)
                rhs = pref * sum(
                    _root_of_unity(l * lp, two_m) * handles[lp].eval(p)
                    for lp in ls
                )
                resid_S = max(resid_S, abs(lhs - rhs))
            results.append(
                SuiteResult(
                    "mu-transform:T-law@2m=%d,l=%s" % (two_m, l), resid_T, tol
                )
            )
            results.append(
                SuiteResult(
                    "mu-transform:S-law@2m=%d,l=%s" % (two_m, l), resid_S, tol
                )
            )
    # the same S law phrased as a matrix acting on the component vector
    # (index m = 1): slash every component, compare against M h with
    # M = (i / sqrt(2im)) [e_{2m}(l l')]
    two_m = 2
    ls = component_labels(two_m)
    handles = [mu_hat_ml_handle(two_m, l) for l in ls]
    wi = WeightIndex(1, -two_m)
    p = points[0]
    slashed = np.array(
        [
            apply_slash(TaggedForm(h, wi, "standard"), GEN_S).f.eval(p)
            for h in handles
        ]
    )
    M = (1j / cmath.sqrt(2j * two_m / 2.0)) * np.array(
        [[_root_of_unity(l * lp, two_m) for lp in ls] for l in ls]
    )
    base = np.array([h.eval(p) for h in handles])
    results.append(
        SuiteResult(
            "mu-transform:vector-S-law@2m=%d" % two_m,
            float(np.max(np.abs(slashed - M @ base))),
            tol,
        )
    )
    return results


def suite_mu_xi_theta(two_m_list=(1, 2), points=None, tol_xi=1e-7,
                      tol_lap=1e-7, tol_mu2=1e-6):
    """xi^H maps each completed component onto the matching theta
    component; the Heisenberg Laplace operator annihilates the components;
    the covariant xi operator annihilates the distinguished weight-1/2
    combination."""
    points = points or GENERIC_POINTS_10
    results = []
    for two_m in two_m_list:
        wi = WeightIndex(1, -two_m)
        for l in component_labels(two_m):
            f = mu_hat_ml_handle(two_m, l)
            img = xi_H(wi, f)
            resid = 0.0
            for p in points:
                jv = JetVars.at(p, 0)
                resid = max(
                    resid,
                    abs(
                        img.jet_at(jv).value
                        - theta_ml_jet(two_m, l, jv.tau, jv.z).value
                    ),
                )
            results.append(
                SuiteResult(
                    "mu-xi-theta:xiH(mu_hat)=theta@2m=%d,l=%s" % (two_m, l),
                    resid,
                    tol_xi,
                )
            )
            lap = laplace_heisenberg(wi, f)
            resid = 0.0
            for p in points[:5]:
                resid = max(resid, abs(lap.jet_at(JetVars.at(p, 0)).value))
            results.append(
                SuiteResult(
                    "mu-xi-theta:lapH(mu_hat)=0@2m=%d,l=%s" % (two_m, l),
                    resid,
                    tol_lap,
                )
            )
    f2 = mu_hat_2_handle()
    img = xi(WeightIndex(1, -1), f2)
    resid = 0.0
    for p in points[:5]:
        resid = max(resid, abs(img.jet_at(JetVars.at(p, 0)).value))
    results.append(
        SuiteResult("mu-xi-theta:xi(mu_hat_2)=0", resid, tol_mu2)
    )
    return results


# ----------------------------------------------------------------------
# decomposition round trip


def _synthetic_class_data(two_m, seed, r_range=8):
    rng = random.Random(seed)
    classes = {}
    for l in range(two_m):
        for D in range(-2 * two_m, 4 * two_m + 1):
            if rng.random() < 0.6:
                continue
            classes[(D, l)] = complex(
                rng.uniform(-1, 1), rng.uniform(-1, 1)
            )
    coeffs = {}
    seen = set()
    for (D, l), c in classes.items():
        for r in range(-r_range, r_range + 1):
            if r % two_m != l:
                continue
            num = D + r * r
            if num % (2 * two_m):
                continue
            coeffs[(num // (2 * two_m), r)] = c
            seen.add((D, l))
    classes = {key: classes[key] for key in seen}
    return FourierData(two_m, coeffs, holomorphic=True), classes


def suite_decomposition_roundtrip(seed=0, points=None, tol=1e-9):
    points = points or [
        EvalPoint(0.1 * i - 0.3, 1.2 + 0.05 * i, 0.07 * i - 0.2, 0.03 * i)
        for i in range(10)
    ]
    results = []
    for two_m in (2, 3):
        data, classes = _synthetic_class_data(two_m, seed + two_m)
        h = theta_decompose(data)
        resid = 0.0
        for p in points:
            v1 = theta_recompose(two_m, h, p)
            v2 = 0j
            for (D, l), c in classes.items():
                v2 += c * cmath.exp(
                    2j * math.pi * (D / (2.0 * two_m)) * p.tau
                ) * theta_ml_jet(two_m, l, _cjet(p.tau), _cjet(p.z)).value
            resid = max(resid, abs(v1 - v2))
        results.append(
            SuiteResult(
                "decomposition:roundtrip@2m=%d" % two_m, resid, tol
            )
        )
    h = theta_decompose(theta_fourier_data(2, 0))
    delta_ok = (
        h[0] == [(0, 1.0)] or (len(h[0]) == 1 and h[0][0][0] == 0
                               and abs(h[0][0][1] - 1.0) < 1e-15)
    ) and h[1] == []
    results.append(
        SuiteResult(
            "decomposition:delta-input-theta", 0.0 if delta_ok else 1.0, tol
        )
    )
    return results


def _cjet(val):
    return Jet.constant(complex(val), 0)


# ----------------------------------------------------------------------
# numerics hygiene


def catalog_values(p, policy):
    """Reported catalog values at a point under a truncation policy."""
    vals = {}
    jv_tau = Jet.constant(p.tau, 0)
    jv_z = Jet.constant(p.z, 0)
    from .special import jacobi_theta_jet

    vals["theta"] = jacobi_theta_jet(jv_tau, jv_z, policy).value
    vals["theta_ml[2,0]"] = theta_ml_jet(2, 0, jv_tau, jv_z, policy).value
    vals["theta_ml[1,0.5]"] = theta_ml_jet(1, 0.5, jv_tau, jv_z, policy).value
    vals["R"] = zwegers_R_jet(jv_tau, jv_z, policy).value
    vals["mu_m[2]"] = mu_m_jet(
        2, jv_tau, Jet.constant(0.31 + 0.55j, 0), Jet.constant(0.17 - 0.23j, 0), policy
    ).value
    from .mu import mu_hat_2_jet, mu_hat_component_jet

    vals["mu_hat[2,0]"] = mu_hat_component_jet(2, 0.0, jv_tau, jv_z, policy).value
    vals["mu_hat[1,0.5]"] = mu_hat_component_jet(1, 0.5, jv_tau, jv_z, policy).value
    vals["mu_hat_2"] = mu_hat_2_jet(jv_tau, jv_z, policy).value
    return vals


def suite_hygiene(points=None, tol_trunc=1e-10, tol_fd=1e-6):
    """Truncation stability under radius doubling and finite-difference
    versus exact-jet agreement."""
    points = points or [EvalPoint(0.13, 1.1, 0.21, 0.17), EvalPoint(-0.3, 1.5, 0.11, 0.08)]
    results = []
    base = TruncationPolicy(tail_bound=1e-14)
    # squaring the tail target twice roughly doubles every Gaussian radius
    doubled = TruncationPolicy(tail_bound=1e-56)
    for p in points:
        v1 = catalog_values(p, base)
        v2 = catalog_values(p, doubled)
        for name in v1:
            results.append(
                SuiteResult(
                    "hygiene:radius-doubling:%s@y=%g" % (name, p.y),
                    abs(v1[name] - v2[name]),
                    tol_trunc,
                )
            )
    # finite differences against exact jets, relative, order <= 2
    exact_handles = [
        theta_ml_handle(2, 0),
        kernel_term_handle(1, KernelParams.of(0.5, -1, -1, 1), skew=True),
    ]
    for h in exact_handles:
        plain = FunctionHandle(fn=h.eval, label=h.label)
        for p in points:
            exact = h.jet(p, 2)
            approx = plain.jet(p, 2)
            scale = max(abs(v) for v in exact.values())
            resid = max(abs(exact[k] - approx[k]) for k in exact) / scale
            results.append(
                SuiteResult(
                    "hygiene:fd-vs-exact:%s@y=%g" % (h.label, p.y), resid, tol_fd
                )
            )
    return results


SUITES = {
    "covariance": suite_covariance,
    "kernels": suite_kernels,
    "xi-images": suite_xi_images,
    "factorizations": suite_factorizations,
    "weil": suite_weil,
    "mu-transform": suite_mu_transform,
    "mu-xi-theta": suite_mu_xi_theta,
    "decomposition-roundtrip": suite_decomposition_roundtrip,
    "hygiene": suite_hygiene,
}


def run_suite(name, **kwargs):
    if name not in SUITES:
        raise KeyError(name)
    return SUITES[name](**kwargs)

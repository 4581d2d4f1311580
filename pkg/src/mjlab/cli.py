"""Command line front end: evaluate catalog functions, run verification
suites, decompose Fourier data, and emit plot-ready grids.

Machine output is JSON except for grids, which are CSV.  Exit codes:
1 usage error, 2 evaluation at a pole, 3 truncation overflow, 4 failed
identity or non-decomposable input.
"""

import json
import sys

import click

from .core import EvalPoint, TruncationPolicy
from .errors import (
    DomainError,
    EvaluationAtPole,
    NotThetaDecomposable,
    TruncationOverflow,
)
from .jets import Jet
from .kernels import (
    FourierData,
    KernelParams,
    h_to_json,
    kernel_term_handle,
    theta_decompose,
)
from .mu import MuParameters, R_hat_ml, mu_hat_2, mu_hat_ml, mu_m
from .special import (
    H_function,
    error_completion_E,
    jacobi_theta_jet,
    theta_ml_jet,
    zwegers_R_jet,
)
from .verify import SUITES, run_suite

EXIT_USAGE = 1
EXIT_POLE = 2
EXIT_TRUNCATION = 3
EXIT_FAILED = 4


def parse_complex(text):
    """Complex literals of the form a+bi with no spaces (also plain reals
    and pure imaginaries)."""
    cleaned = text.strip().replace("i", "j")
    try:
        return complex(cleaned)
    except ValueError:
        raise click.UsageError("cannot parse complex literal %r" % text)


class ComplexParam(click.ParamType):
    name = "complex"

    def convert(self, value, param, ctx):
        if isinstance(value, complex):
            return value
        return parse_complex(value)


COMPLEX = ComplexParam()


def _policy(radius, tail):
    kwargs = {}
    if tail is not None:
        kwargs["tail_bound"] = tail
    if radius is not None:
        kwargs["max_radius"] = radius
    return TruncationPolicy(**kwargs)


def _two_m_of(m):
    two_m = round(2 * m)
    if abs(2 * m - two_m) > 1e-9:
        raise click.UsageError("m must be a half-integer, got %r" % m)
    return int(two_m)


def _cjet(val):
    return Jet.constant(complex(val), 0)


def _point(tau, z):
    if tau.imag <= 0:
        raise click.UsageError("tau must satisfy Im(tau) > 0")
    return EvalPoint.from_tau_z(tau, z)


# catalog evaluators: name -> (callable(opts, policy) -> value, needed flags)


def _eval_theta(o, policy):
    return jacobi_theta_jet(_cjet(o["tau"]), _cjet(o["z"]), policy).value


def _eval_theta_ml(o, policy):
    return theta_ml_jet(
        _two_m_of(o["m"]), o["l"], _cjet(o["tau"]), _cjet(o["z"]), policy
    ).value


def _eval_R(o, policy):
    return zwegers_R_jet(_cjet(o["tau"]), _cjet(o["z"]), policy).value


def _eval_E(o, policy):
    return complex(error_completion_E(o["w"]))


def _eval_H(o, policy):
    return complex(H_function(o["w"], o["k"]))


def _eval_mu(o, policy):
    params = MuParameters(_two_m_of(o["m"]))
    p = _point(o["tau"], 0j)
    return mu_m(params, o["z"], o["z2"], p, policy)


def _eval_mu_hat_ml(o, policy):
    params = MuParameters(_two_m_of(o["m"]), o["l"])
    return mu_hat_ml(params, _point(o["tau"], o["z"]), policy)


def _eval_R_hat_ml(o, policy):
    params = MuParameters(_two_m_of(o["m"]), o["l"])
    return R_hat_ml(params, _point(o["tau"], o["z"]), policy)


def _eval_mu_hat_2(o, policy):
    return mu_hat_2(_point(o["tau"], o["z"]), policy)


def _eval_kernel(name):
    skew = name.endswith("sk")
    i = int(name[1])

    def run(o, policy):
        params = KernelParams.of(o["k"], o["m"], o["n"], o["r"])
        h = kernel_term_handle(i, params, skew=skew)
        return h.eval(_point(o["tau"], o["z"]))

    return run


CATALOG = {
    "theta": _eval_theta,
    "theta_ml": _eval_theta_ml,
    "R": _eval_R,
    "E": _eval_E,
    "H": _eval_H,
    "mu": _eval_mu,
    "mu_hat_ml": _eval_mu_hat_ml,
    "R_hat_ml": _eval_R_hat_ml,
    "mu_hat_2": _eval_mu_hat_2,
}
for _name in ("c1", "c2", "c3", "c4", "c1sk", "c2sk", "c3sk", "c4sk"):
    CATALOG[_name] = _eval_kernel(_name)


def _check_function(name):
    if name not in CATALOG:
        raise click.UsageError(
            "unknown function %r; valid names: %s"
            % (name, ", ".join(sorted(CATALOG)))
        )


def _write_out(text, out):
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    else:
        click.echo(text)


@click.group()
def cli():
    """Numerical catalog and verification suites for Jacobi-type modular
    objects."""


@cli.command("eval")
@click.argument("function")
@click.option("--k", type=float, default=0.5, help="weight (half-integer)")
@click.option("--m", type=float, default=1.0, help="index (half-integer)")
@click.option("--l", type=float, default=0.0, help="component label")
@click.option("--n", type=int, default=0)
@click.option("--r", type=int, default=0)
@click.option("--w", type=float, default=0.0, help="real scalar argument")
@click.option("--tau", type=COMPLEX, default="0+1i")
@click.option("--z", type=COMPLEX, default="0+0i")
@click.option("--z2", type=COMPLEX, default="0+0i")
@click.option("--radius", type=int, default=None)
@click.option("--tail", type=float, default=None)
@click.option("--out", type=click.Path(), default=None)
def eval_cmd(function, k, m, l, n, r, w, tau, z, z2, radius, tail, out):
    """Evaluate a catalog function at a point and print a JSON record."""
    _check_function(function)
    policy = _policy(radius, tail)
    opts = {
        "k": k, "m": m, "l": l, "n": n, "r": r, "w": w,
        "tau": tau, "z": z, "z2": z2,
    }
    value = CATALOG[function](opts, policy)
    record = {
        "function": function,
        "params": {"k": k, "m": m, "l": l, "n": n, "r": r, "w": w},
        "point": {
            "tau": [tau.real, tau.imag],
            "z": [z.real, z.imag],
        },
        "value": [value.real, value.imag],
        "truncation_radius": policy.effective_max_radius(),
        "est_tail": policy.tail_bound,
    }
    _write_out(json.dumps(record), out)


@cli.command("verify")
@click.argument("suite")
@click.option("--op", default=None, help="restrict covariance to one operator")
@click.option("--gen", default=None, help="restrict covariance to one generator")
@click.option("--k", type=float, default=None)
@click.option("--m", type=float, default=None)
@click.option("--n", type=int, default=None)
@click.option("--r", type=int, default=None)
@click.option("--two-m", "two_m", type=int, default=None)
@click.option("--tol", type=float, default=None, help="override every tolerance")
@click.option("--seed", type=int, default=0)
@click.option("--out", type=click.Path(), default=None)
def verify_cmd(suite, op, gen, k, m, n, r, two_m, tol, seed, out):
    """Run a named identity suite and print a JSON report."""
    if suite not in SUITES:
        raise click.UsageError(
            "unknown suite %r; valid suites: %s"
            % (suite, ", ".join(sorted(SUITES)))
        )
    kwargs = {}
    if suite == "covariance":
        if op:
            kwargs["ops"] = [op]
        if gen:
            kwargs["gens"] = [gen]
    if suite == "xi-images" and (k is not None or m is not None):
        kk = 0.5 if k is None else k
        mm = 1.0 if m is None else m
        if n is None and r is None:
            params = [KernelParams.of(kk, mm, 0, 1), KernelParams.of(kk, mm, 0, 0)]
        else:
            params = [KernelParams.of(kk, mm, n or 0, r or 0)]
        kwargs["params_list"] = params
    if suite == "weil" and two_m is not None:
        kwargs["two_m_list"] = [two_m]
    if suite == "mu-transform" and two_m is not None:
        kwargs["two_m_list"] = [two_m]
    if suite == "decomposition-roundtrip":
        kwargs["seed"] = seed
    results = run_suite(suite, **kwargs)
    if tol is not None:
        for res in results:
            res.tol = tol
    report = {
        "suite": suite,
        "checks": [res.as_dict() for res in results],
        "passed": all(res.passed for res in results),
    }
    _write_out(json.dumps(report, indent=2), out)
    if not report["passed"]:
        sys.exit(EXIT_FAILED)


@cli.command("decompose")
@click.option("--in", "infile", type=click.Path(exists=True), default=None,
              help="Fourier data file (default: stdin)")
@click.option("--out", type=click.Path(), default=None)
def decompose_cmd(infile, out):
    """Theta-decompose Fourier data given as text lines 'n r re im' under a
    header 'index 2m=<integer>'; output is JSON keyed by label."""
    if infile:
        with open(infile) as fh:
            text = fh.read()
    else:
        text = sys.stdin.read()
    data = FourierData.from_text(text, holomorphic=True)
    h = theta_decompose(data)
    _write_out(h_to_json(h), out)


@cli.command("grid")
@click.argument("function")
@click.option("--k", type=float, default=0.5)
@click.option("--m", type=float, default=1.0)
@click.option("--l", type=float, default=0.0)
@click.option("--n", type=int, default=0)
@click.option("--r", type=int, default=0)
@click.option("--tau", type=COMPLEX, default="0+1i")
@click.option("--z", type=COMPLEX, default="0+0i")
@click.option("--tau-grid", is_flag=True, default=False,
              help="vary tau over the window instead of z")
@click.option("--min", "lo", type=(float, float), default=(0.0, 0.0),
              help="lower corner of the window")
@click.option("--max", "hi", type=(float, float), default=(1.0, 1.0),
              help="upper corner of the window")
@click.option("--steps", type=(int, int), default=(50, 50))
@click.option("--radius", type=int, default=None)
@click.option("--tail", type=float, default=None)
@click.option("--out", type=click.Path(), default=None)
def grid_cmd(function, k, m, l, n, r, tau, z, tau_grid, lo, hi, steps,
             radius, tail, out):
    """Evaluate a catalog function on a rectangular grid and emit CSV with
    columns x,y,u,v,re,im,pole (pole rows have empty value fields)."""
    _check_function(function)
    policy = _policy(radius, tail)
    n1, n2 = steps
    if n1 < 1 or n2 < 1:
        raise click.UsageError("steps must be positive")
    rows = ["x,y,u,v,re,im,pole"]
    for i in range(n1):
        a = lo[0] + (hi[0] - lo[0]) * i / max(1, n1 - 1)
        for j in range(n2):
            b = lo[1] + (hi[1] - lo[1]) * j / max(1, n2 - 1)
            if tau_grid:
                tt, zz = complex(a, b), z
            else:
                tt, zz = tau, complex(a, b)
            opts = {
                "k": k, "m": m, "l": l, "n": n, "r": r, "w": a,
                "tau": tt, "z": zz, "z2": 0j,
            }
            try:
                val = CATALOG[function](opts, policy)
                rows.append(
                    "%.12g,%.12g,%.12g,%.12g,%.12g,%.12g,0"
                    % (tt.real, tt.imag, zz.real, zz.imag, val.real, val.imag)
                )
            except EvaluationAtPole:
                rows.append(
                    "%.12g,%.12g,%.12g,%.12g,,,1"
                    % (tt.real, tt.imag, zz.real, zz.imag)
                )
    _write_out("\n".join(rows) + "\n", out)


def main(argv=None):
    try:
        cli.main(args=argv, standalone_mode=False)
    except click.ClickException as exc:
        exc.show()
        sys.exit(EXIT_USAGE)
    except click.Abort:
        sys.exit(EXIT_USAGE)
    except EvaluationAtPole as exc:
        click.echo("pole: %s" % exc, err=True)
        sys.exit(EXIT_POLE)
    except TruncationOverflow as exc:
        click.echo("truncation overflow: %s" % exc, err=True)
        sys.exit(EXIT_TRUNCATION)
    except NotThetaDecomposable as exc:
        click.echo("not theta decomposable: %s" % exc, err=True)
        sys.exit(EXIT_FAILED)
    except DomainError as exc:
        click.echo("domain error: %s" % exc, err=True)
        sys.exit(EXIT_USAGE)
    return 0


if __name__ == "__main__":
    main()

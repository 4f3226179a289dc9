"""Command line entry point: thetalift {factorize,lift,weil,verify,witt}."""
import random
import sys

import click

from . import scenario as scn
from .hermitian import witt_invariants, witt_subtract
from .momentmap import gamma_class_space
from .factorization import block_decompose

EXIT_PASS, EXIT_FAIL, EXIT_INPUT = 0, 1, 2


def common(f):
    f = click.option("--checks", default=None, help="Comma-separated check bundles.")(f)
    f = click.option("--report", type=click.Path(dir_okay=False), default=None, help="Write the JSON report here.")(f)
    f = click.option("--precision", type=int, default=None, help="Override the tower precision N.")(f)
    f = click.option("--seed", type=click.IntRange(0, 2 ** 64 - 1), default=0, show_default=True)(f)
    f = click.option("--scenario", type=click.Path(exists=True, dir_okay=False), default=None)(f)
    return f


def _load(path, precision, required=True):
    if path is None:
        if required:
            raise scn.ScenarioError("--scenario is required for this command")
        return None
    sc = scn.Scenario.load(path)
    if precision is not None:
        sc = sc.with_precision(precision)
    return sc


def _checks(s):
    return None if s is None else [x.strip() for x in s.split(",") if x.strip()]


def _finish(report, path, title):
    if path:
        scn.emit(report, path)
    else:
        click.echo(scn.dumps(report), nl=False)
    click.echo(scn.summary(report, title), err=True)
    sys.exit(EXIT_PASS if report.get("pass") else EXIT_FAIL)


def _guard(fn):
    def run(*a, **k):
        try:
            return fn(*a, **k)
        except (scn.ScenarioError,) + scn.INPUT_ERRORS as ex:
            click.echo("error: %s" % ex, err=True)
            sys.exit(EXIT_INPUT)
    run.__name__ = fn.__name__
    run.__doc__ = fn.__doc__
    return run


def _built(sc, seed):
    b = scn.build(sc, seed)
    if not b.prime_bound:
        click.echo("warning: p is below the prime bound max(2n+1, e_D n + 2); results are outside the supported range",
                   err=True)
    return b


@click.group()
@click.version_option(package_name="artifact")
def main():
    """Exact desk-scale theta lifts of supercuspidal data."""


@main.command()
@common
@_guard
def factorize(scenario, seed, precision, report, checks):
    """Howe factorization of the datum's Gamma."""
    sc = _load(scenario, precision)
    b = _built(sc, seed)
    out = scn.header(sc, b, seed)
    res = scn.bundle_factorization(b, random.Random(seed), scn.options(sc))
    out.update(res)
    _finish(out, report, "factorize")


@main.command()
@common
@_guard
def lift(scenario, seed, precision, report, checks):
    """Lift the datum along the target Witt tower."""
    sc = _load(scenario, precision)
    b = _built(sc, seed)
    out = scn.header(sc, b, seed)
    out.update(scn.bundle_pipeline(b, random.Random(seed), scn.options(sc)))
    _finish(out, report, "lift")


@main.command()
@common
@click.option("--q", "q", type=int, default=None, help="Residue field size (default: [weil] q, else 3).")
@click.option("--n", "n", type=int, default=None, help="Half the dimension of W (default 1).")
@_guard
def weil(scenario, seed, precision, report, checks, q, n):
    """Finite Heisenberg-Weil representation checks and character tables."""
    sc = _load(scenario, precision, required=False)
    if q is None:
        q = sc.int("weil", "q", 3) if sc else 3
    if n is None:
        n = sc.int("weil", "n", 1) if sc else 1
    if q % 2 == 0:
        raise scn.FiniteWeilError("even characteristic is not supported")
    if q ** n > 729:
        raise scn.FiniteWeilError("operator size %d exceeds the budget 729" % q ** n)
    rng = random.Random(seed)
    out = {"seed": seed, "rng": "python-random-mt19937", "checks": {"weil": scn.weil_checks(q, n, rng)}}
    if sc is not None:
        b = _built(sc, seed)
        out.update(scn.header(sc, b, seed))
        out["checks"]["finite-weil"] = scn.bundle_finite_weil(b, rng, dict(scn.options(sc), weil_q=q, weil_n=n))
    out["pass"] = all(v["pass"] for v in out["checks"].values())
    _finish(out, report, "weil")


@main.command()
@common
@_guard
def verify(scenario, seed, precision, report, checks):
    """Run the requested check bundles."""
    sc = _load(scenario, precision)
    out = scn.run_verification_suite(sc, seed, _checks(checks))
    if out.get("prime_bound_ok") is False:
        click.echo("warning: p is below the prime bound; results are outside the supported range", err=True)
    _finish(out, report, "verify")


@main.command()
@common
@_guard
def witt(scenario, seed, precision, report, checks):
    """Witt classes of V, of each V_Gamma, of the target and of the residual."""
    sc = _load(scenario, precision)
    b = _built(sc, seed)
    out = scn.header(sc, b, seed)
    out["V"] = witt_invariants(b.V).describe()
    blocks = []
    residual = b.target
    for bl in block_decompose(b.skeleton):
        if bl.depth <= 0:
            continue
        cls = witt_invariants(gamma_class_space(bl.space, bl.gamma.matrix))
        blocks.append({"depth": str(bl.depth), "V_Gamma": cls.describe()})
        if residual is not None:
            residual = witt_subtract(residual, cls)
    out["blocks"] = blocks
    if b.target is not None:
        out["target"] = b.target.describe()
        out["residual"] = residual.describe()
    out["pass"] = True
    _finish(out, report, "witt")


if __name__ == "__main__":
    main()

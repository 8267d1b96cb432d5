import functools
import logging
from typing import Optional, Tuple

import click

from . import config
from .algebra import io, reports
from .algebra.core import Workspace
from .algebra.error_utils import ErrorHandler, KhaError, SchemaError
from .algebra.kclass import euler_class, lowest_weight_certificate
from .algebra.quiver import (
    DimVector,
    check_assumption_A,
    default_epsilon,
    double_quiver,
    extend_stability,
    framed_quiver,
    jacobi_relations,
    tripled_quiver,
)
from .algebra.shuffle import relation_search
from .algebra.wallcross import hn_strata, verify_generation
from .services import data_service


class WindowType(click.ParamType):
    """An integer interval written m:M."""

    name = "window"

    def convert(self, value, param, ctx) -> Tuple[int, int]:
        if isinstance(value, tuple):
            return value
        try:
            low, high = (int(x) for x in str(value).split(":"))
        except ValueError:
            self.fail(f"{value!r} is not of the form m:M", param, ctx)
        if low > high:
            self.fail(f"empty window {value!r}", param, ctx)
        return low, high


WINDOW = WindowType()


def domain_errors(operation: str):
    """Turns a KhaError into a JSON error payload on stderr and exit code 1."""
    def decorator(func):
        @functools.wraps(func)
        def wrapper(*args, **kwargs):
            try:
                return func(*args, **kwargs)
            except KhaError as e:
                payload = ErrorHandler.log_and_return_error(operation, e)
                click.echo(io.dumps(payload), err=True, nl=False)
                click.get_current_context().exit(1)
        return wrapper
    return decorator


def _workspace(quiver: str, torus: Optional[str]) -> Workspace:
    bundle = data_service.load_json(quiver, "quiver")
    torus_obj = data_service.load_json(torus, "torus") if torus else None
    return Workspace.from_bundle(bundle, torus_obj)


def _framing(workspace: Workspace, framing: Optional[str]) -> DimVector:
    if framing is None:
        return DimVector((1,) * workspace.quiver.n_vertices)
    return io.parse_dim(data_service.parse_inline(framing, "framing"), workspace.quiver, "framing")


quiver_option = click.option("--quiver", "quiver", required=True, help="Quiver bundle JSON path, or - for stdin.")
torus_option = click.option("--torus", "torus", default=None, help="Torus weighting JSON path; overrides the bundle's.")
out_option = click.option("--out", "out", default=None, help="Output path; stdout when omitted.")


@click.group()
@click.option("--verbose", is_flag=True, help="Log progress at INFO level.")
@click.option("--debug", is_flag=True, help="Log details at DEBUG level.")
def cli(verbose: bool, debug: bool):
    """Shuffle algebra computations for quivers."""
    level = logging.DEBUG if debug else logging.INFO if verbose else config.DEFAULT_LOG_LEVEL
    logging.basicConfig(level=level, format=config.LOG_FORMAT, force=True)


@cli.command()
@quiver_option
@torus_option
@out_option
@domain_errors("unit")
def unit(quiver, torus, out):
    """Print the unit element."""
    workspace = _workspace(quiver, torus)
    data_service.write_output(io.serialize_element(workspace.unit()), out)


@cli.command()
@quiver_option
@torus_option
@click.option("--lhs", required=True, help="Left factor element JSON path.")
@click.option("--rhs", required=True, help="Right factor element JSON path.")
@out_option
@domain_errors("mul")
def mul(quiver, torus, lhs, rhs, out):
    """Shuffle product lhs * rhs."""
    workspace = _workspace(quiver, torus)
    product = workspace.multiply(data_service.load_json(lhs, "lhs"), data_service.load_json(rhs, "rhs"))
    data_service.write_output(io.serialize_element(product), out)


@cli.command()
@quiver_option
@torus_option
@click.option("--lhs", required=True, help="Algebra element JSON path.")
@click.option("--rhs", required=True, help="Framed module element JSON path.")
@click.option("--framing", default=None, help="Framing vector as JSON; one per vertex by default.")
@out_option
@domain_errors("act")
def act(quiver, torus, lhs, rhs, framing, out):
    """Action of an algebra element on a framed module element."""
    workspace = _workspace(quiver, torus)
    result = workspace.act(data_service.load_json(lhs, "lhs"), data_service.load_json(rhs, "rhs"),
                           _framing(workspace, framing))
    data_service.write_output(io.serialize_module_element(result), out)


@cli.command()
@quiver_option
@torus_option
@click.option("--source", required=True, help="Vertex i.")
@click.option("--target", required=True, help="Vertex i'.")
@out_option
@domain_errors("zeta")
def zeta(quiver, torus, source, target, out):
    """The zeta kernel between two vertices."""
    workspace = _workspace(quiver, torus)
    data_service.write_output(io.serialize_rational(workspace.zeta(source, target)), out)


@cli.command()
@quiver_option
@out_option
@domain_errors("double")
def double(quiver, out):
    """The double quiver."""
    workspace = _workspace(quiver, None)
    data_service.write_output(io.serialize_bundle(double_quiver(workspace.quiver)), out)


@cli.command()
@quiver_option
@out_option
@domain_errors("triple")
def triple(quiver, out):
    """The tripled quiver with its canonical potential."""
    workspace = _workspace(quiver, None)
    tripled, potential = tripled_quiver(workspace.quiver)
    data_service.write_output(io.serialize_bundle(tripled, potential=potential), out)


@cli.command()
@quiver_option
@click.option("--framing", default=None, help="Framing vector as JSON; one per vertex by default.")
@click.option("--theta", default=None, help="Stability JSON path; adds the extended stability.")
@click.option("--mu", default=config.DEFAULT_MU, show_default=True, help="Slope of the framed stability.")
@click.option("--dim-bound", default=config.DEFAULT_DIM_BOUND, show_default=True, type=int,
              help="Total dimension bound used to choose epsilon.")
@out_option
@domain_errors("frame")
def frame(quiver, framing, theta, mu, dim_bound, out):
    """The framed quiver, and optionally the framed stability condition."""
    workspace = _workspace(quiver, None)
    framed = framed_quiver(workspace.quiver, _framing(workspace, framing))
    payload = io.serialize_bundle(framed)
    if theta is not None:
        stability = io.parse_stability(data_service.load_json(theta, "theta"), workspace.quiver)
        extended = extend_stability(stability, io.parse_rational(mu, "mu"), default_epsilon(dim_bound))
        payload["theta"] = io.serialize_stability(extended)
    data_service.write_output(payload, out)


@cli.command()
@quiver_option
@out_option
@domain_errors("jacobi")
def jacobi(quiver, out):
    """Cyclic derivatives of the bundle's potential, one per edge."""
    workspace = _workspace(quiver, None)
    data_service.write_output(reports.jacobi_report(jacobi_relations(workspace.require_potential())), out)


@cli.command("check-assumption-a")
@quiver_option
@click.option("--weights", "weights", default=None, help="Candidate per-edge weights as JSON.")
@out_option
@domain_errors("check-assumption-a")
def check_assumption_a(quiver, weights, out):
    """Find or verify per-edge weights giving every cycle of the potential weight 2."""
    workspace = _workspace(quiver, None)
    candidate = None
    if weights is not None:
        raw = data_service.parse_inline(weights, "weights")
        if not isinstance(raw, dict) or not all(isinstance(v, int) and not isinstance(v, bool) for v in raw.values()):
            raise SchemaError("weights", "expected an object of integer edge weights")
        candidate = raw
    result = check_assumption_A(workspace.require_potential(), candidate)
    data_service.write_output(reports.assumption_a_report(result), out)


@cli.command()
@click.option("--weights", "weights", required=True, help="Weight list JSON path.")
@out_option
@domain_errors("euler")
def euler(weights, out):
    """Euler class of a weight list."""
    weight_list = io.parse_weights(data_service.load_json(weights, "weights"))
    data_service.write_output(io.serialize_laurent(euler_class(weight_list)), out)


@cli.command("zerodiv-cert")
@click.option("--weights", "weights", required=True, help="Weight list JSON path.")
@click.option("--lambda", "lam", required=True, help="Cocharacter JSON path.")
@out_option
@domain_errors("zerodiv-cert")
def zerodiv_cert(weights, lam, out):
    """Lowest lambda-weight certificate for the Euler class of a weight list."""
    weight_list = io.parse_weights(data_service.load_json(weights, "weights"))
    cocharacter = io.parse_cocharacter(data_service.load_json(lam, "lambda"), weight_list.space.n_vars)
    data_service.write_output(io.serialize_certificate(lowest_weight_certificate(weight_list, cocharacter)), out)


@cli.command()
@quiver_option
@click.option("--theta", required=True, help="Stability JSON path.")
@click.option("--dim", "dim", required=True, help="Dimension vector as JSON.")
@out_option
@domain_errors("strata")
def strata(quiver, theta, dim, out):
    """Harder-Narasimhan strata of a dimension vector."""
    workspace = _workspace(quiver, None)
    stability = io.parse_stability(data_service.load_json(theta, "theta"), workspace.quiver)
    d = io.parse_dim(data_service.parse_inline(dim, "dim"), workspace.quiver)
    data_service.write_output(reports.strata_report(hn_strata(workspace.quiver, stability, d)), out)


@cli.command("verify-generation")
@quiver_option
@torus_option
@click.option("--theta", required=True, help="Stability JSON path.")
@click.option("--dim", "dim", required=True, help="Dimension vector as JSON.")
@click.option("--window", default=config.DEFAULT_WINDOW, show_default=True, type=WINDOW,
              help="Exponent window m:M.")
@click.option("--gen-degree", default=config.DEFAULT_GEN_DEGREE, show_default=True, type=click.IntRange(min=0),
              help="Generator exponent bound.")
@out_option
@domain_errors("verify-generation")
def verify_generation_command(quiver, torus, theta, dim, window, gen_degree, out):
    """Check that ordered products of vertex generators span the window at a dimension vector."""
    workspace = _workspace(quiver, torus)
    stability = io.parse_stability(data_service.load_json(theta, "theta"), workspace.quiver)
    d = io.parse_dim(data_service.parse_inline(dim, "dim"), workspace.quiver)
    report = verify_generation(workspace.quiver, stability, d, window, gen_degree, workspace.torus)
    data_service.write_output(reports.generation_report(report, workspace.quiver.vertices), out)


def _candidates(value: str) -> Tuple[int, ...]:
    if not value.strip():
        return ()
    try:
        return tuple(int(x) for x in value.split(","))
    except ValueError:
        raise SchemaError("candidates", f"expected comma-separated integer exponents, got {value!r}") from None


@cli.command("relation-search")
@click.option("--r-max", default=config.DEFAULT_R_MAX, show_default=True, type=click.IntRange(min=0),
              help="Degree bound for the relation.")
@click.option("--candidates", default=config.DEFAULT_CANDIDATES, show_default=True,
              help="Comma-separated exponents c for alpha = q^c.")
@out_option
@domain_errors("relation-search")
def relation_search_command(r_max, candidates, out):
    """Search for the quantum affine relation constant on the Jordan quiver."""
    result = relation_search(r_max, _candidates(candidates))
    data_service.write_output(reports.relation_search_report(result), out)


def main():
    cli()


if __name__ == "__main__":
    main()

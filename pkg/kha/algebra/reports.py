from typing import Any, Dict, Mapping, Optional

from . import io
from .quiver import NoncommPathPoly
from .shuffle import RelationSearchResult
from .wallcross import GenerationReport, HNStratification


def strata_report(stratification: HNStratification) -> Dict[str, Any]:
    """Strata in canonical order plus the pairs (i, j) with stratum i below stratum j."""
    return {
        "dim": io.serialize_dim(stratification.dim),
        "strata": [{"parts": [io.serialize_dim(d) for d in s.parts],
                    "slopes": [io.format_rational(mu) for mu in s.slopes]}
                   for s in stratification.strata],
        "order": [list(pair) for pair in stratification.order_pairs()],
    }


def generation_report(report: GenerationReport, vertices) -> Dict[str, Any]:
    return {
        "dim": io.serialize_dim(report.dim),
        "window": list(report.window),
        "gen_degree": report.gen_degree,
        "achieved_rank": report.achieved_rank,
        "target_rank": report.target_rank,
        "full_rank": report.full_rank,
        "products_evaluated": report.products_evaluated,
        "unspanned": [{v: list(block) for v, block in zip(vertices, blocks) if block}
                      for blocks in report.unspanned],
    }


def relation_search_report(result: RelationSearchResult) -> Dict[str, Any]:
    if result.alpha is not None:
        status = "found"
    elif result.accepted:
        status = "ambiguous"
    else:
        status = "none"
    return {
        "r_max": result.r_max,
        "candidates": list(result.candidates),
        "accepted": list(result.accepted),
        "alpha": result.alpha,
        "status": status,
        "failures": [{"exponent": c, "r": r, "s": s} for c, r, s in result.failures],
    }


def assumption_a_report(weights: Optional[Mapping[str, int]]) -> Dict[str, Any]:
    return {"satisfied": weights is not None, "weights": dict(weights) if weights is not None else None}


def jacobi_report(relations: Mapping[str, NoncommPathPoly]) -> Dict[str, Any]:
    return {edge_id: io.serialize_path_poly(poly) for edge_id, poly in relations.items()}

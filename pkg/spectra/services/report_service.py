"""Reports: pandas tables, JSON-style dicts and Jinja2 text renderings."""
import logging
from functools import cache

import pandas as pd
from jinja2 import Environment, FileSystemLoader

from spectra import config
from spectra.errors import ParamsError
from spectra.models.reduction import ReductionOutput, ReductionParams
from spectra.models.spectrum import SpectrumResult, VerificationReport
from spectra.models.structure import Graph
from spectra.services.formula_service import dag_size, formula_digest, node_count, quantifier_depth
from spectra.services.gadget_service import build_gadget_c, build_gadget_d

logger = logging.getLogger(__name__)


@cache
def _environment() -> Environment:
    return Environment(
        loader=FileSystemLoader(config.TEMPLATES_DIR),
        keep_trailing_newline=True,
        trim_blocks=True,
        lstrip_blocks=True,
    )


def render(template: str, **context) -> str:
    return _environment().get_template(template).render(**context)


def reduction_notes(output: ReductionOutput) -> list[str]:
    notes = []
    if output.loop_companions:
        companions = ", ".join(output.loop_companions.values())
        notes.append(
            f"loop companions {companions} raise m to {output.params.m}; "
            "state loop-freedom in the formula or pass --assume-loop-free to keep m at the padded source size"
        )
    return notes


def reduction_report(output: ReductionOutput) -> dict:
    """Parameters and statistics of one reduction, as plain JSON-compatible values."""
    params = output.params
    return {
        "m": params.m,
        "p": params.p,
        "q": params.q,
        "scheme": params.scheme,
        "attachment": dict(params.attachment),
        "source_vocabulary": list(output.source_vocabulary),
        "vocabulary": list(output.vocabulary),
        "loop_companions": dict(output.loop_companions),
        "pads": list(output.pads),
        "notes": reduction_notes(output),
        "node_count": node_count(output.phi_prime),
        "dag_size": dag_size(output.phi_prime),
        "quantifier_depth": quantifier_depth(output.phi_prime),
        "digest": formula_digest(output.phi_prime),
    }


def render_reduction_report(output: ReductionOutput) -> str:
    return render("reduction_report.txt.j2", report=reduction_report(output))


def spectrum_frame(result: SpectrumResult) -> pd.DataFrame:
    rows = []
    for n in range(1, result.max_size + 1):
        if n in result.unknown:
            answer = "unknown"
        else:
            answer = "model" if n in result.members else "none"
        rows.append({"n": n, "answer": answer, "method": result.methods.get(n, "")})
    return pd.DataFrame(rows, columns=["n", "answer", "method"])


def spectrum_dict(result: SpectrumResult) -> dict:
    return {
        "digest": result.formula_digest,
        "max_size": result.max_size,
        "members": list(result.members),
        "unknown": list(result.unknown),
        "complete": result.complete,
        "sizes": spectrum_frame(result).to_dict(orient="records"),
    }


def render_spectrum(result: SpectrumResult) -> str:
    return render("spectrum.txt.j2", result=result, table=spectrum_frame(result).to_string(index=False))


def verification_frames(report: VerificationReport) -> dict[str, pd.DataFrame]:
    """The raw evidence tables plus a per-size summary of the forward checks."""
    forward = report.forward
    if forward.empty:
        summary = pd.DataFrame(columns=["n", "samples", "models", "ok"])
    else:
        summary = (
            forward.groupby("n")
            .agg(samples=("code", "size"), models=("is_model", "sum"), ok=("ok", "all"))
            .reset_index()
        )
    return {
        "summary": summary,
        "forward": forward,
        "mutations": report.mutations,
        "grounding": report.grounding,
    }


def _mutation_counts(report: VerificationReport) -> dict:
    frame = report.mutations
    if frame.empty:
        return {"total": 0, "classified": 0, "disagreements": 0, "incoherent": 0, "failed_properties": {}}
    return {
        "total": len(frame),
        "classified": int(frame["classified"].sum()),
        "disagreements": int((~frame["agree"].astype(bool)).sum()),
        "incoherent": int((~frame["coherent"].astype(bool)).sum()),
        "failed_properties": {
            str(k): int(v) for k, v in frame.loc[frame["failed_property"] != "", "failed_property"].value_counts().items()
        },
    }


def verification_dict(report: VerificationReport) -> dict:
    return {
        "digest": report.formula_digest,
        "m": report.m,
        "p": report.p,
        "q": report.q,
        "n_max": report.n_max,
        "source_spectrum": list(report.source_spectrum),
        "original_spectrum": None if report.original_spectrum is None else list(report.original_spectrum),
        "image": list(report.image),
        "passed": report.passed,
        "forward": report.forward.to_dict(orient="records"),
        "mutations": _mutation_counts(report),
        "grounding": report.grounding.to_dict(orient="records"),
        "backward_note": report.backward_note,
    }


def render_verification(report: VerificationReport) -> str:
    frames = verification_frames(report)
    return render(
        "verification.txt.j2",
        report=report,
        summary=frames["summary"].to_string(index=False),
        mutations=_mutation_counts(report),
        grounding=None if report.grounding.empty else report.grounding.to_string(index=False),
    )


def graph_to_dot(g: Graph, name: str = "G") -> str:
    """Undirected DOT rendering; labelled vertices carry their label."""
    nodes = [(v, g.label(v)) for v in g.vertices]
    return render("graph.dot.j2", name=name, nodes=nodes, edges=sorted(g.edges))


def gadget_graph(params: ReductionParams, which: str) -> Graph:
    if which == "C":
        return build_gadget_c(params)
    if which == "D":
        return build_gadget_d(params)
    raise ParamsError(f"unknown gadget {which!r}, expected C or D")


def gadget_text(g: Graph) -> str:
    lines = [f"vertices: {g.size}", f"edges: {len(g.edges)}"]
    lines.extend(f"{g.label(a)} - {g.label(b)}" for a, b in sorted(g.edges))
    return "\n".join(lines) + "\n"

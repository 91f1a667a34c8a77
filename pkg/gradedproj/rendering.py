"""
Plain-text tables and JSON payloads for the command line.
"""

from typing import Iterable, List, Sequence, Tuple

from pydantic import BaseModel
from rich import box
from rich.console import Console
from rich.table import Table

from .models import CoefficientRow, DominantCharacter, GammaPoset, GradedCharacter, ProjectiveCharacter

TABLE_WIDTH = 160


def v_label(weight: Sequence[int]) -> str:
    return "V(" + ",".join(str(c) for c in weight) + ")"


def omega_label(weight: Sequence[int]) -> str:
    """Signed combination of fundamental weights, e.g. 2ω1-ω3; 0 for the zero weight."""
    out = ""
    for i, c in enumerate(weight, start=1):
        if not c:
            continue
        body = f"ω{i}" if abs(c) == 1 else f"{abs(c)}ω{i}"
        if not out:
            out = ("-" if c < 0 else "") + body
        else:
            out += ("-" if c < 0 else "+") + body
    return out or "0"


def offset_label(offset: Sequence[int]) -> str:
    """mu - lambda written as λ±..."""
    text = omega_label(offset)
    if text == "0":
        return "λ"
    return "λ" + (text if text.startswith("-") else "+" + text)


def layer_label(degree: int, weight: Sequence[int]) -> str:
    if degree == 0:
        return v_label(weight)
    power = "t" if degree == 1 else f"t^{degree}"
    return f"{power}·{v_label(weight)}"


def render_table(title: str, columns: List[str], rows: Iterable[Sequence[object]]) -> str:
    table = Table(title=title, box=box.SIMPLE)
    for column in columns:
        table.add_column(column)
    for row in rows:
        table.add_row(*(str(x) for x in row))
    console = Console(width=TABLE_WIDTH, color_system=None, highlight=False)
    with console.capture() as capture:
        console.print(table)
    return capture.get()


def to_json(model: BaseModel) -> str:
    return model.model_dump_json(by_alias=True, indent=2)

# =============================================================================
# Per-command tables
# =============================================================================

def character_table(lie_type: str, lam: Sequence[int], mults, total: int) -> str:
    rows = [(v_label(w), m) for w, m in sorted(mults.items(), key=lambda kv: tuple(-c for c in kv[0]))]
    text = render_table(f"ch {v_label(lam)} in {lie_type}: dominant weights", ["weight", "mult"], rows)
    return text + f"dimension: {total}\n"


def graded_table(title: str, proj: ProjectiveCharacter, dims) -> str:
    rows = []
    for s in proj.graded.degrees():
        for w, m in proj.graded.layer(s).items():
            rows.append((s, layer_label(s, w), m, dims[w]))
    return render_table(title, ["degree", "layer", "mult", "dim"], rows)


def gamma_table(gamma: GammaPoset) -> str:
    rows = [(idx, v_label(node.mu), node.grade) for idx, node in enumerate(gamma.nodes)]
    text = render_table(f"Gamma({v_label(gamma.base.mu)}, {gamma.psi.describe()})", ["#", "mu", "r"], rows)
    covers = ", ".join(f"{i}->{j}" for i, j in gamma.covers) or "none"
    return text + f"nodes: {len(gamma.nodes)}  covers: {len(gamma.covers)} ({covers})\n"


def coefficient_table(title: str, rows: List[CoefficientRow]) -> str:
    body = [
        (f"({offset_label(r.offset)},{r.s})", v_label(r.mu) if r.dominant else "-", r.weight_space_dim, r.c)
        for r in rows
    ]
    nonzero = sum(1 for r in rows if r.c)
    return render_table(title, ["(mu,s)", "mu", "dim", "c"], body) + f"rows: {len(rows)}  nonzero: {nonzero}\n"

# =============================================================================
# Residuals
# =============================================================================

def _signed_sum(parts: List[Tuple[int, str]]) -> str:
    if not parts:
        return "0"
    out = ""
    for coeff, label in parts:
        body = label if abs(coeff) == 1 else f"{abs(coeff)}*{label}"
        if not out:
            out = ("-" if coeff < 0 else "") + body
        else:
            out += (" - " if coeff < 0 else " + ") + body
    return out


def format_character(ch: DominantCharacter) -> str:
    return _signed_sum([(m, v_label(w)) for w, m in ch.items()])


def format_graded(g: GradedCharacter) -> str:
    return _signed_sum([(m, layer_label(s, w)) for s in g.degrees() for w, m in g.layer(s).items()])

"""
Human-readable rendering of dipcheck reports
"""

from typing import Any, Callable, Dict, List

from rich.console import Console
from rich.panel import Panel
from rich.table import Table

from src.models.report import Report

console = Console()


def _ref(ref: Dict[str, str]) -> str:
    return f"{ref['from']} -{ref['guard']}-> {ref['to']}"


def _walk(refs: List[Dict[str, str]]) -> str:
    return ", ".join(_ref(r) for r in refs) or "(empty)"


def _fmt(value: Any) -> str:
    if isinstance(value, float):
        return f"{value:.6g}"
    return str(value)


def render_error(report: Report):
    error = report.error or {}
    body = f"[bold red]{error.get('code', 'error')}[/bold red]\n{error.get('message', '')}"
    for issue in error.get("issues", []):
        body += f"\n  • [yellow]{issue['kind']}[/yellow] at {issue['location']}: {issue['message']}"
    console.print(Panel(body, title=f"dipcheck {report.command}", border_style="red"))


def render_validate(report: Report):
    result = report.result
    console.print(
        f"✅ [bold]{report.automaton}[/bold] is a valid automaton "
        f"({result['states']} states, {result['transitions']} transitions)",
        style="green",
    )
    console.print(f"sha256 {report.automaton_sha256}", style="dim")


def _render_witness(witness: Dict[str, Any]):
    table = Table(show_header=True, header_style="bold magenta")
    table.add_column("Part", style="cyan", no_wrap=True)
    table.add_column("Transitions", style="white")
    table.add_row("prefix", _walk(witness["prefix"]))
    if "cycles" in witness:
        table.add_row("cycle C", _walk(witness["cycles"][0]))
        table.add_row("path", _walk(witness["path"]))
        table.add_row("cycle C'", _walk(witness["cycles"][1]))
    else:
        if "path" in witness:
            table.add_row("path", _walk(witness["path"]))
        table.add_row("cycle", _walk(witness["cycle"]))
    if "offending" in witness:
        table.add_row("offending", _ref(witness["offending"]))
    console.print(table)


def render_check(report: Report):
    result = report.result
    if result["status"] == "well_formed":
        console.print(Panel.fit(
            f"[bold green]well-formed[/bold green]\n"
            f"{result['weight']}·ε-differentially private for every ε > 0",
            title=report.automaton,
            border_style="green",
        ))
        return
    witness = result["witness"]
    detail = witness["kind"].replace("_", " ")
    if "clause" in witness:
        detail += f" (clause {witness['clause']}, {witness['direction'].upper()})"
    console.print(Panel.fit(f"[bold red]not well-formed[/bold red]: {detail}",
                            title=report.automaton, border_style="red"))
    _render_witness(witness)


def render_weight(report: Report):
    result = report.result
    table = Table(title=f"Transition costs of {report.automaton}", show_header=True,
                  header_style="bold magenta")
    table.add_column("Transition", style="cyan")
    table.add_column("Critical", style="yellow")
    table.add_column("Cost", style="green", justify="right")
    table.add_column("Reachable", style="dim")
    for c in result["costs"]:
        table.add_row(_ref(c["transition"]), "yes" if c["critical"] else "no", c["cost"],
                      "yes" if c["reachable"] else "no")
    console.print(table)
    console.print(f"weight = [bold]{result['weight']}[/bold] "
                  f"(unrestricted {result['unrestricted_weight']})")


def _inputs(path: Dict[str, Any]) -> str:
    return " ".join("τ" if step["input"] is None else _fmt(step["input"]) for step in path["steps"])


def _ratio_table(title: str, entries: List[Dict[str, Any]]) -> Table:
    table = Table(title=title, show_header=True, header_style="bold magenta")
    for column in ("ε", "ℓ", "pathprob(ρ1)", "pathprob(ρ2)", "ratio", "e^(dε)", "exceeds"):
        table.add_column(column, justify="right")
    for e in entries:
        table.add_row(_fmt(e["eps"]), str(e["ell"]), _fmt(e["p1"]), _fmt(e["p2"]), _fmt(e["ratio"]),
                      _fmt(e.get("threshold", "")), str(e.get("exceeds", "")))
    return table


def render_witness(report: Report):
    result = report.result
    status = result["status"]
    if status == "well_formed":
        console.print(f"✅ {report.automaton} is well-formed (weight {result['weight']}); no witness exists",
                      style="green")
        return

    pair = result.get("pair")
    if pair is not None:
        console.print(f"[bold]{pair['kind'].replace('_', ' ')}[/bold] witness, ℓ = {pair['ell']}")
        console.print(f"  ρ1 inputs: {_inputs(pair['rho1'])}")
        console.print(f"  ρ2 inputs: {_inputs(pair['rho2'])}")
        console.print(_ratio_table("Probability ratios", pair["ratios"]))

    if status == "refuted":
        hit = result["hit"]
        console.print(f"❌ refuted {result['d']}·ε-privacy at ε = {_fmt(hit['eps'])}, ℓ = {hit['ell']}",
                      style="bold red")
        confirmation = result.get("confirmation")
        if confirmation:
            verdict = "confirmed" if confirmation["confirmed"] else "not confirmed"
            note = " (rare event)" if confirmation["rare_event"] else ""
            console.print(f"  Monte Carlo: {verdict}{note}", style="dim")
    elif status == "inconclusive":
        best = result.get("best")
        console.print(f"❓ no refutation of {result['d']}·ε-privacy found", style="yellow")
        if best:
            console.print(f"  best ratio {_fmt(best['ratio'])} at ε = {_fmt(best['eps'])}, ℓ = {best['ell']}",
                          style="dim")


def render_prob(report: Report):
    result = report.result
    table = Table(title=f"pathprob on {report.automaton}", show_header=True, header_style="bold magenta")
    table.add_column("ε", justify="right")
    table.add_column("x0", justify="right")
    table.add_column("value", justify="right", style="green")
    for entry in result["values"]:
        table.add_row(_fmt(entry["eps"]), _fmt(entry["x0"]), _fmt(entry["value"]))
    console.print(table)
    for eps, formula in result.get("functions", {}).items():
        console.print(Panel(formula, title=f"x ↦ pathprob at ε = {eps}", border_style="dim"))


def render_simulate(report: Report):
    r = report.result
    console.print(f"estimate [bold]{_fmt(r['value'])}[/bold] ± {_fmt(r['std_error'])} "
                  f"({r['hits']}/{r['samples']} runs, seed {r['seed']})")
    if "exact" in r:
        console.print(f"exact    {_fmt(r['exact'])}", style="dim")
    if r.get("rare_event"):
        console.print("⚠️  too few hits for a reliable estimate", style="yellow")


def render_run(report: Report):
    table = Table(title=f"Run of {report.automaton}", show_header=True, header_style="bold magenta")
    table.add_column("State", style="cyan")
    table.add_column("Input", justify="right")
    table.add_column("Output", style="green")
    table.add_column("Transition", style="dim")
    for step in report.result["steps"]:
        table.add_row(step["state"], "τ" if step["input"] is None else _fmt(step["input"]),
                      _fmt(step["output"]), _ref(step["transition"]))
    console.print(table)


def render_demo(report: Report):
    table = Table(title="Built-in automata", show_header=True, header_style="bold magenta")
    table.add_column("Name", style="cyan")
    table.add_column("Verdict")
    table.add_column("Weight / witness", style="yellow")
    for entry in report.result["automata"]:
        if entry["status"] == "well_formed":
            table.add_row(entry["name"], "[green]well-formed[/green]", entry["weight"])
        else:
            table.add_row(entry["name"], "[red]violation[/red]", entry["witness"]["kind"])
    console.print(table)


RENDERERS: Dict[str, Callable[[Report], None]] = {
    "validate": render_validate,
    "check": render_check,
    "weight": render_weight,
    "witness": render_witness,
    "prob": render_prob,
    "simulate": render_simulate,
    "run": render_run,
    "demo": render_demo,
}


def render(report: Report):
    if report.status == "error":
        render_error(report)
    else:
        RENDERERS[report.command](report)

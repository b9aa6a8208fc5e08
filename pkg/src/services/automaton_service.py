"""
Automaton service for dipcheck
Parsing, canonical serialization, structural validation and built-in lookup
"""

import hashlib
import json
from functools import lru_cache
from pathlib import Path
from typing import Any, Dict, List, Optional, Tuple, Union

import yaml
from pydantic import ValidationError

from src.config.logging_config import get_logger
from src.config.yaml_loader import get_catalog
from src.errors import (
    AutomatonValidationError,
    DocumentSyntaxError,
    SchemaError,
    UnknownBuiltin,
)
from src.models.automaton import (
    DipAutomaton,
    Guard,
    IssueKind,
    OutputLabel,
    RealVar,
    StateDecl,
    StateKind,
    StateParams,
    TransitionDecl,
    ValidationIssue,
)
from src.models.documents import (
    AutomatonDocument,
    OutputDocument,
    TransitionDocument,
    schema_error_from,
)

logger = get_logger(__name__)

RawAutomaton = Union[AutomatonDocument, DipAutomaton, Dict[str, Any]]


def read_document(path: Path) -> str:
    """Text of a document file; undecodable or unreadable files are syntax errors"""
    try:
        raw = path.read_bytes()
    except OSError as e:
        logger.debug(f"Cannot read {path}: {e}")
        raise DocumentSyntaxError(f"{path}: cannot read file ({e.strerror or e})") from e
    try:
        return raw.decode("utf-8")
    except UnicodeDecodeError as e:
        line = raw[:e.start].count(b"\n") + 1
        column = e.start - (raw.rfind(b"\n", 0, e.start) + 1) + 1
        logger.debug(f"{path} is not UTF-8 text at byte {e.start}")
        raise DocumentSyntaxError(f"{path}: not UTF-8 text", line, column) from e


def load_text(text: str, source: str = "<document>") -> Any:
    """Parse JSON (when the document starts with '{' or '[') or YAML"""
    stripped = text.lstrip()
    if stripped.startswith(("{", "[")):
        try:
            return json.loads(text)
        except json.JSONDecodeError as e:
            raise DocumentSyntaxError(f"{source}: {e.msg}", e.lineno, e.colno) from e
    try:
        return yaml.safe_load(text)
    except yaml.YAMLError as e:
        mark = getattr(e, "problem_mark", None)
        problem = getattr(e, "problem", None) or str(e)
        raise DocumentSyntaxError(
            f"{source}: {problem}",
            mark.line + 1 if mark else None,
            mark.column + 1 if mark else None,
        ) from e


def parse(text: str, source: str = "<document>") -> AutomatonDocument:
    """Parse an automaton document into its unvalidated form"""
    data = load_text(text, source)
    if not isinstance(data, dict):
        raise SchemaError(f"{source}: expected a top-level object", field="<root>")
    try:
        return AutomatonDocument.model_validate(data)
    except ValidationError as e:
        raise schema_error_from(e, source) from e


def document_dict(a: DipAutomaton) -> Dict[str, Any]:
    """Canonical document form: states sorted by id, transitions by (from, guard)"""
    document: Dict[str, Any] = {
        "name": a.name,
        "init": a.init,
        "states": [
            {"id": s.id, "kind": s.kind.value, **s.params.to_dict()}
            for s in a.states
        ],
        "transitions": [t.to_dict() for t in a.transitions],
    }
    if a.alphabet is not None:
        document["alphabet"] = list(a.alphabet)
    return document


def to_document(a: DipAutomaton) -> AutomatonDocument:
    return AutomatonDocument.model_validate(document_dict(a))


def serialize(a: DipAutomaton) -> str:
    return json.dumps(document_dict(a), indent=2, ensure_ascii=False) + "\n"


def automaton_digest(a: DipAutomaton) -> str:
    return hashlib.sha256(serialize(a).encode("utf-8")).hexdigest()


def _label(output: OutputDocument) -> OutputLabel:
    if output.var is not None:
        return OutputLabel.real(output.var)
    return OutputLabel.sym(output.sym)


def _where(t: TransitionDocument) -> str:
    return f"transition {t.source} -{t.guard.value}-> {t.target}"


def _check(document: AutomatonDocument) -> Tuple[List[ValidationIssue], Dict[Tuple[str, Guard], TransitionDocument]]:
    issues: List[ValidationIssue] = []

    def report(kind: IssueKind, message: str, location: str):
        issues.append(ValidationIssue(kind, message, location))

    states = {}
    for s in document.states:
        where = f"state {s.id}"
        if s.id in states:
            report(IssueKind.DUPLICATE_STATE_ID, f"state id '{s.id}' declared more than once", where)
            continue
        states[s.id] = s
        for name in ("d", "d_aux"):
            if getattr(s, name) < 0:
                report(IssueKind.NEGATIVE_SCALE, f"{name} of state '{s.id}' is negative", where)

    if document.init not in states:
        report(IssueKind.DANGLING_REFERENCE, f"initial state '{document.init}' is not declared", "init")

    delta: Dict[Tuple[str, Guard], TransitionDocument] = {}
    ordered = sorted(document.transitions, key=lambda t: (t.source, t.guard.rank, t.target))
    for t in ordered:
        where = _where(t)
        dangling = [end for end in (t.source, t.target) if end not in states]
        for end in dangling:
            report(IssueKind.DANGLING_REFERENCE, f"state '{end}' is not declared", where)
        key = (t.source, t.guard)
        if key in delta:
            report(IssueKind.DETERMINISM_VIOLATION,
                   f"more than one '{t.guard.value}' transition from '{t.source}'", where)
        elif not dangling:
            delta[key] = t

    for sid in sorted(states):
        s = states[sid]
        where = f"state {sid}"
        out = {g: delta.get((sid, g)) for g in Guard}
        if out[Guard.TRUE] and (out[Guard.GE] or out[Guard.LT]):
            report(IssueKind.DETERMINISM_VIOLATION,
                   f"state '{sid}' has a 'true' transition alongside a guarded one", where)
        if out[Guard.GE] and out[Guard.LT]:
            ge, lt = _label(out[Guard.GE].output), _label(out[Guard.LT].output)
            if ge == lt or (ge.is_real and lt.is_real):
                report(IssueKind.OUTPUT_DISTINCTION_VIOLATION,
                       f"the 'ge' and 'lt' transitions of '{sid}' must have different outputs, "
                       f"at least one of them a symbol (got {ge} and {lt})", where)
        if s.kind is StateKind.NON_INPUT and (out[Guard.GE] or out[Guard.LT]):
            report(IssueKind.NON_INPUT_VIOLATION,
                   f"non-input state '{sid}' may only have a 'true' transition", where)
        for t in out.values():
            if t is None:
                continue
            needs_sample = t.guard is not Guard.TRUE or t.assign or t.output.var is RealVar.SAMPLE
            if s.d == 0 and needs_sample:
                report(IssueKind.DEGENERATE_SCALE,
                       f"state '{sid}' samples s with d = 0 on {_where(t)}", where)
            if s.d_aux == 0 and t.output.var is RealVar.SAMPLE_AUX:
                report(IssueKind.DEGENERATE_SCALE,
                       f"state '{sid}' outputs s' with d_aux = 0 on {_where(t)}", where)

    if document.init in states:
        initial = [t for (src, _), t in delta.items() if src == document.init]
        if len(initial) != 1 or initial[0].guard is not Guard.TRUE or not initial[0].assign:
            report(IssueKind.INITIALIZATION_VIOLATION,
                   f"initial state '{document.init}' must have exactly one transition, "
                   f"with guard 'true' and assign = true", f"state {document.init}")

    if document.alphabet is not None:
        declared = set(document.alphabet)
        for t in ordered:
            if t.output.sym is not None and t.output.sym not in declared:
                report(IssueKind.UNDECLARED_SYMBOL,
                       f"output symbol '{t.output.sym}' is not in the declared alphabet", _where(t))

    return issues, delta


def _as_document(raw: RawAutomaton) -> AutomatonDocument:
    if isinstance(raw, AutomatonDocument):
        return raw
    if isinstance(raw, DipAutomaton):
        return to_document(raw)
    try:
        return AutomatonDocument.model_validate(raw)
    except ValidationError as e:
        raise schema_error_from(e) from e


def collect_issues(raw: RawAutomaton) -> List[ValidationIssue]:
    """Every structural violation of the description (empty when valid)"""
    issues, _ = _check(_as_document(raw))
    return issues


def validate(raw: RawAutomaton) -> DipAutomaton:
    """Validate a description into an immutable automaton; raises with all issues"""
    document = _as_document(raw)
    issues, delta = _check(document)
    if issues:
        logger.info(f"Automaton '{document.name}' failed validation with {len(issues)} issue(s)",
                    extra={"automaton": document.name})
        raise AutomatonValidationError(issues)

    states = tuple(
        StateDecl(s.id, s.kind, StateParams(s.d, s.mu, s.d_aux, s.mu_aux))
        for s in document.states
    )
    transitions = tuple(
        TransitionDecl(t.source, t.guard, t.target, _label(t.output), t.assign)
        for t in delta.values()
    )
    alphabet = tuple(document.alphabet) if document.alphabet is not None else None
    return DipAutomaton(document.name, document.init, states, transitions, alphabet)


def list_builtins() -> List[str]:
    return get_catalog().names()


@lru_cache(maxsize=None)
def builtin(name: str) -> DipAutomaton:
    """One of the built-in example automata"""
    document = get_catalog().get(name)
    if document is None:
        raise UnknownBuiltin(
            f"unknown built-in automaton '{name}' (known: {', '.join(list_builtins())})"
        )
    return validate(document)


def load_automaton(spec: str) -> DipAutomaton:
    """Load from a file path, falling back to a built-in name"""
    path = Path(spec)
    if path.is_file():
        logger.debug(f"Loading automaton from {path}")
        return validate(parse(read_document(path), str(path)))
    if spec in list_builtins():
        return builtin(spec)
    raise UnknownBuiltin(f"'{spec}' is neither a readable file nor a built-in automaton")


def rename_states(a: DipAutomaton, mapping: Dict[str, str], name: Optional[str] = None) -> DipAutomaton:
    """Copy of `a` with state ids renamed"""
    document = document_dict(a)
    document["name"] = name or a.name
    document["init"] = mapping.get(a.init, a.init)
    for s in document["states"]:
        s["id"] = mapping.get(s["id"], s["id"])
    for t in document["transitions"]:
        t["from"] = mapping.get(t["from"], t["from"])
        t["to"] = mapping.get(t["to"], t["to"])
    return validate(document)

"""Hilbert-style proof checking for the interpretability logics.

The base system has the schemata K, L, J1..J5 and is closed under modus
ponens and necessitation.  Extensions add principles on top:

    ILM  = base + M       ILM0 = base + M0      ILP  = base + P
    ILP0 = base + P0      ILR  = base + R       ILW  = base + W
    ILWstar = base + M0 + W

Wstar itself stays available as a standalone schema (for frame-validity
queries); the composite logic is registered through M0 and W.

Proof files are plain text, one line per step::

    <index>. <formula> ; <justification>

with justifications ``taut``, ``ax <schema>``, ``mp <i> <j>``, ``nec <i>``,
1-based indices referring to strictly earlier lines, and ``#`` starting a
comment.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass

from .formula import (And, Bot, BOT, Box, Dia, Formula, Impl, Neg, Or,
                      ParseError, Rhd, Top, Var, normalize, parse)

METAVARS = ("A", "B", "C")

_A, _B, _C = Var("A"), Var("B"), Var("C")

SCHEMATA: dict[str, Formula] = {
    "K": Impl(Box(Impl(_A, _B)), Impl(Box(_A), Box(_B))),
    "L": Impl(Box(Impl(Box(_A), _A)), Box(_A)),
    "J1": Impl(Box(Impl(_A, _B)), Rhd(_A, _B)),
    "J2": Impl(And(Rhd(_A, _B), Rhd(_B, _C)), Rhd(_A, _C)),
    "J3": Impl(And(Rhd(_A, _C), Rhd(_B, _C)), Rhd(Or(_A, _B), _C)),
    "J4": Impl(Rhd(_A, _B), Impl(Dia(_A), Dia(_B))),
    "J5": Rhd(Dia(_A), _A),
    "M": Impl(Rhd(_A, _B), Rhd(And(_A, Box(_C)), And(_B, Box(_C)))),
    "M0": Impl(Rhd(_A, _B), Rhd(And(Dia(_A), Box(_C)), And(_B, Box(_C)))),
    "P": Impl(Rhd(_A, _B), Box(Rhd(_A, _B))),
    "P0": Impl(Rhd(_A, Dia(_B)), Box(Rhd(_A, _B))),
    "R": Impl(Rhd(_A, _B), Rhd(Neg(Rhd(_A, Neg(_C))), And(_B, Box(_C)))),
    "W": Impl(Rhd(_A, _B), Rhd(_A, And(_B, Box(Neg(_A))))),
    "Wstar": Impl(Rhd(_A, _B), Rhd(And(_B, Box(_C)),
                                   And(And(_B, Box(_C)), Box(Neg(_A))))),
}

_BASE = frozenset({"K", "L", "J1", "J2", "J3", "J4", "J5"})


@dataclass(frozen=True)
class Logic:
    name: str
    schemata: frozenset[str]


LOGICS: dict[str, Logic] = {
    name: Logic(name, _BASE | frozenset(extra))
    for name, extra in {
        "IL": (),
        "ILM": ("M",),
        "ILM0": ("M0",),
        "ILP": ("P",),
        "ILP0": ("P0",),
        "ILR": ("R",),
        "ILW": ("W",),
        "ILWstar": ("M0", "W"),
    }.items()
}


def get_logic(name: str) -> Logic:
    try:
        return LOGICS[name]
    except KeyError:
        raise ValueError(f"unknown logic {name!r}; choose from {sorted(LOGICS)}") from None


def schema_metavars(schema_id: str) -> tuple[str, ...]:
    """Metavariables occurring in the schema, in A, B, C order."""
    pattern = SCHEMATA[schema_id]
    names = {v.name for v in _vars_of(pattern)}
    return tuple(m for m in METAVARS if m in names)


def _vars_of(f: Formula):
    stack = [f]
    while stack:
        g = stack.pop()
        if isinstance(g, Var):
            yield g
        elif isinstance(g, (Neg, Box, Dia)):
            stack.append(g.arg)
        elif isinstance(g, (And, Or, Impl, Rhd)):
            stack.extend((g.left, g.right))


def instantiate(schema_id: str, subst: dict[str, Formula]) -> Formula:
    """Replace the schema's metavariables by the given formulas."""

    def walk(g: Formula) -> Formula:
        if isinstance(g, Var):
            if g.name in METAVARS:
                return subst[g.name]
            return g
        if isinstance(g, (Bot, Top)):
            return g
        if isinstance(g, Neg):
            return Neg(walk(g.arg))
        if isinstance(g, Box):
            return Box(walk(g.arg))
        if isinstance(g, Dia):
            return Dia(walk(g.arg))
        return type(g)(walk(g.left), walk(g.right))

    return walk(SCHEMATA[schema_id])


def _match(pattern: Formula, term: Formula, subst: dict[str, Formula]) -> bool:
    if isinstance(pattern, Var) and pattern.name in METAVARS:
        bound = subst.get(pattern.name)
        if bound is None:
            subst[pattern.name] = term
            return True
        return bound == term
    if type(pattern) is not type(term):
        return False
    if isinstance(pattern, Var):
        return pattern.name == term.name
    if isinstance(pattern, (Bot, Top)):
        return True
    if isinstance(pattern, (Neg, Box, Dia)):
        return _match(pattern.arg, term.arg, subst)
    return (_match(pattern.left, term.left, subst)
            and _match(pattern.right, term.right, subst))


def match_schema(schema_id: str, f: Formula) -> dict[str, Formula] | None:
    """Match ``f`` against the schema modulo normalization.

    Returns a substitution on the schema's metavariables such that
    instantiating and normalizing reproduces ``normalize(f)``, or None.
    """
    if schema_id not in SCHEMATA:
        raise ValueError(f"unknown schema {schema_id!r}")
    subst: dict[str, Formula] = {}
    if _match(normalize(SCHEMATA[schema_id]), normalize(f), subst):
        return subst
    return None


MAX_TAUT_ATOMS = 20


def is_classical_tautology(f: Formula, max_atoms: int = MAX_TAUT_ATOMS) -> bool:
    """Truth-table validity of the propositional skeleton of ``f``.

    The skeleton replaces each maximal |>-subformula of the normalized form
    with a fresh atom; identical subformulas share an atom.  Raises
    ValueError past ``max_atoms`` distinct atoms.
    """
    atoms: dict[Formula, int] = {}

    def skeleton(g: Formula):
        if isinstance(g, Rhd) or isinstance(g, Var):
            if g not in atoms:
                atoms[g] = len(atoms)
            return ("atom", atoms[g])
        if isinstance(g, Bot):
            return ("const", False)
        if isinstance(g, Top):
            return ("const", True)
        if isinstance(g, Neg):
            return ("~", skeleton(g.arg))
        if isinstance(g, And):
            return ("&", skeleton(g.left), skeleton(g.right))
        if isinstance(g, Or):
            return ("|", skeleton(g.left), skeleton(g.right))
        if isinstance(g, Impl):
            return ("->", skeleton(g.left), skeleton(g.right))
        raise TypeError(f"not a formula: {g!r}")

    sk = skeleton(normalize(f))
    n = len(atoms)
    if n > max_atoms:
        raise ValueError(f"propositional skeleton has {n} atoms, limit is {max_atoms}")

    def ev(node, row) -> bool:
        tag = node[0]
        if tag == "atom":
            return row[node[1]]
        if tag == "const":
            return node[1]
        if tag == "~":
            return not ev(node[1], row)
        if tag == "&":
            return ev(node[1], row) and ev(node[2], row)
        if tag == "|":
            return ev(node[1], row) or ev(node[2], row)
        return (not ev(node[1], row)) or ev(node[2], row)

    return all(ev(sk, row) for row in itertools.product((False, True), repeat=n))


@dataclass(frozen=True)
class Taut:
    pass


@dataclass(frozen=True)
class Axiom:
    schema: str


@dataclass(frozen=True)
class MP:
    i: int
    j: int


@dataclass(frozen=True)
class Nec:
    i: int


Justification = Taut | Axiom | MP | Nec


@dataclass(frozen=True)
class ProofLine:
    formula: Formula
    justification: Justification


@dataclass(frozen=True)
class ProofObject:
    lines: tuple[ProofLine, ...]

    def conclusion(self) -> Formula:
        return self.lines[-1].formula


@dataclass(frozen=True)
class ProofCheck:
    accepted: bool
    line: int | None = None
    reason: str | None = None


def check_proof(proof: ProofObject, logic: Logic) -> ProofCheck:
    """Verify every line; rejection names the first bad line (1-based)."""
    if not proof.lines:
        return ProofCheck(False, 0, "empty proof")
    for idx, line in enumerate(proof.lines, start=1):
        j = line.justification
        if isinstance(j, Taut):
            try:
                ok = is_classical_tautology(line.formula)
            except ValueError as exc:
                return ProofCheck(False, idx, str(exc))
            if not ok:
                return ProofCheck(False, idx, "not a classical tautology")
        elif isinstance(j, Axiom):
            if j.schema not in SCHEMATA:
                return ProofCheck(False, idx, f"unknown schema {j.schema}")
            if j.schema not in logic.schemata:
                return ProofCheck(False, idx, f"schema {j.schema} is not an axiom of {logic.name}")
            if match_schema(j.schema, line.formula) is None:
                return ProofCheck(False, idx, f"not an instance of {j.schema}")
        elif isinstance(j, MP):
            for ref in (j.i, j.j):
                if not 1 <= ref < idx:
                    return ProofCheck(False, idx, f"reference to line {ref} is out of range")
            want = Impl(normalize(proof.lines[j.i - 1].formula), normalize(line.formula))
            if normalize(proof.lines[j.j - 1].formula) != want:
                return ProofCheck(False, idx,
                                  f"line {j.j} is not an implication from line {j.i} to this line")
        elif isinstance(j, Nec):
            if not 1 <= j.i < idx:
                return ProofCheck(False, idx, f"reference to line {j.i} is out of range")
            want = Rhd(Neg(normalize(proof.lines[j.i - 1].formula)), BOT)
            if normalize(line.formula) != want:
                return ProofCheck(False, idx, f"not the necessitation of line {j.i}")
        else:
            return ProofCheck(False, idx, f"unknown justification {j!r}")
    return ProofCheck(True)


class ProofFormatError(ValueError):
    pass


_LINE_RE = re.compile(r"^\s*(\d+)\.\s*(.*?)\s*;\s*(.*?)\s*$")


def parse_proof(text: str) -> ProofObject:
    """Parse the proof file format into a ProofObject."""
    lines: list[ProofLine] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        body = raw.split("#", 1)[0].strip()
        if not body:
            continue
        m = _LINE_RE.match(body)
        if m is None:
            raise ProofFormatError(f"line {lineno}: expected '<index>. <formula> ; <justification>'")
        index, formula_src, just_src = int(m.group(1)), m.group(2), m.group(3)
        if index != len(lines) + 1:
            raise ProofFormatError(f"line {lineno}: expected index {len(lines) + 1}, got {index}")
        try:
            formula = parse(formula_src)
        except ParseError as exc:
            raise ProofFormatError(f"line {lineno}: {exc}") from exc
        lines.append(ProofLine(formula, _parse_justification(just_src, lineno)))
    return ProofObject(tuple(lines))


def _parse_justification(src: str, lineno: int) -> Justification:
    parts = src.split()
    if parts == ["taut"]:
        return Taut()
    if len(parts) == 2 and parts[0] == "ax":
        return Axiom(parts[1])
    if len(parts) == 3 and parts[0] == "mp" and parts[1].isdigit() and parts[2].isdigit():
        return MP(int(parts[1]), int(parts[2]))
    if len(parts) == 2 and parts[0] == "nec" and parts[1].isdigit():
        return Nec(int(parts[1]))
    raise ProofFormatError(f"line {lineno}: bad justification {src!r}")


def format_proof(proof: ProofObject) -> str:
    """Inverse of parse_proof, up to whitespace."""
    out = []
    for idx, line in enumerate(proof.lines, start=1):
        j = line.justification
        if isinstance(j, Taut):
            just = "taut"
        elif isinstance(j, Axiom):
            just = f"ax {j.schema}"
        elif isinstance(j, MP):
            just = f"mp {j.i} {j.j}"
        else:
            just = f"nec {j.i}"
        out.append(f"{idx}. {line.formula} ; {just}")
    return "\n".join(out) + "\n"

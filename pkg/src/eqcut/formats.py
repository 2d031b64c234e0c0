"""Text formats for relations, instances, and cut graphs.

All three are line-oriented and diffable; parse errors carry line numbers.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Optional

from .cutgraph import CutGraph, RequestList, TripleSet
from .instances import Constraint, MinCspInstance
from .relations import (
    EQ,
    EQ_OP,
    NEQ,
    NEQ_OP,
    CnfFormula,
    EqLanguage,
    EqRelation,
    clause,
    relation_from_cnf,
)


class ParseError(ValueError):
    def __init__(self, lineno: int, message: str):
        super().__init__(f"line {lineno}: {message}")
        self.lineno = lineno


_LITERAL = re.compile(r"^x(\d+)\s*(!?=)\s*x(\d+)$")


def _parse_clause(text: str, lineno: int):
    lits = []
    for part in text.split("|"):
        part = part.strip()
        m = _LITERAL.match(part)
        if not m:
            raise ParseError(lineno, f"bad literal {part!r}")
        i, op, j = int(m.group(1)), m.group(2), int(m.group(3))
        lits.append((i, j, EQ_OP if op == "=" else NEQ_OP))
    try:
        return clause(*lits)
    except ValueError as e:
        raise ParseError(lineno, str(e))


def parse_relations(text: str) -> EqLanguage:
    relations = []
    name: Optional[str] = None
    arity = 0
    tuples: list = []
    clauses: list = []
    start_line = 0

    def flush(lineno):
        nonlocal name, arity, tuples, clauses
        if name is None:
            return
        if tuples and clauses:
            raise ParseError(lineno, f"stanza {name!r} mixes tuples and cnf")
        if clauses:
            rel = relation_from_cnf(
                CnfFormula(arity, frozenset(clauses)), arity, name)
        else:
            try:
                rel = EqRelation.from_tuples(name, arity, tuples)
            except ValueError as e:
                raise ParseError(start_line, str(e))
        relations.append(rel)
        name, tuples, clauses = None, [], []

    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            flush(lineno)
            continue
        words = line.split()
        if words[0] == "relation":
            flush(lineno)
            if len(words) != 3:
                raise ParseError(lineno, "expected: relation NAME ARITY")
            name = words[1]
            try:
                arity = int(words[2])
            except ValueError:
                raise ParseError(lineno, f"bad arity {words[2]!r}")
            start_line = lineno
        elif words[0] == "tuple":
            if name is None:
                raise ParseError(lineno, "tuple outside a relation stanza")
            try:
                vals = [int(w) for w in words[1:]]
            except ValueError:
                raise ParseError(lineno, "tuple entries must be integers")
            if len(vals) != arity:
                raise ParseError(lineno,
                                 f"tuple has {len(vals)} entries, arity is {arity}")
            tuples.append(tuple(vals))
        elif words[0] == "cnf":
            if name is None:
                raise ParseError(lineno, "cnf outside a relation stanza")
            cl = _parse_clause(line[len("cnf"):].strip(), lineno)
            for (_i, j, _op) in cl:
                if j > arity:
                    raise ParseError(lineno, f"index x{j} outside arity {arity}")
            clauses.append(cl)
        else:
            raise ParseError(lineno, f"unknown directive {words[0]!r}")
    flush(len(text.splitlines()) + 1)
    return EqLanguage(tuple(relations))


def print_relations(lang: EqLanguage) -> str:
    out = []
    for rel in lang:
        out.append(f"relation {rel.name} {rel.arity}")
        for t in sorted(rel.tuples):
            out.append("tuple " + " ".join(map(str, t)))
        out.append("")
    return "\n".join(out)


def parse_instance(text: str, language: Optional[EqLanguage] = None
                   ) -> MinCspInstance:
    name = "instance"
    variables: list[str] = []
    constraints: list[Constraint] = []

    def lookup(relname: str, lineno: int) -> EqRelation:
        if relname == "=":
            return EQ
        if relname in ("!=", "neq"):
            return NEQ
        if language is not None:
            try:
                return language.get(relname)
            except KeyError:
                pass
        raise ParseError(lineno, f"unknown relation name {relname!r}")

    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        words = line.split()
        head = words[0]
        if head == "instance":
            name = words[1] if len(words) > 1 else name
        elif head == "var":
            if len(words) != 2:
                raise ParseError(lineno, "expected: var NAME")
            variables.append(words[1])
        elif head in ("crisp-assign", "soft-assign"):
            m = re.match(r"^(crisp|soft)-assign\s+(\S+)\s*=\s*(\d+)(?:\s*\*(\d+))?$",
                         line)
            if not m:
                raise ParseError(lineno, "expected: soft-assign x = INT [*m]")
            kind, var, val, mult = m.group(1), m.group(2), int(m.group(3)), m.group(4)
            constraints.append(Constraint(None, (var,), kind,
                                          int(mult) if mult else 1, val))
        elif head in ("crisp", "soft"):
            mult = 1
            scope_words = words[2:]
            if scope_words and scope_words[-1].startswith("*"):
                try:
                    mult = int(scope_words[-1][1:])
                except ValueError:
                    raise ParseError(lineno, f"bad multiplicity {scope_words[-1]!r}")
                scope_words = scope_words[:-1]
            if len(words) < 3:
                raise ParseError(lineno, "expected: crisp|soft REL vars...")
            rel = lookup(words[1], lineno)
            if len(scope_words) != rel.arity:
                raise ParseError(
                    lineno,
                    f"relation {rel.name!r} has arity {rel.arity}, "
                    f"got {len(scope_words)} variables")
            constraints.append(Constraint(rel, tuple(scope_words), head, mult))
        else:
            raise ParseError(lineno, f"unknown directive {head!r}")
    try:
        return MinCspInstance.build(name, constraints, variables)
    except ValueError as e:
        raise ParseError(0, str(e))


def print_instance(inst: MinCspInstance) -> str:
    out = [f"instance {inst.name}"]
    for v in inst.variables:
        out.append(f"var {v}")
    for c in inst.constraints:
        if c.is_assignment():
            m = f" *{c.multiplicity}" if c.multiplicity > 1 else ""
            out.append(f"{c.kind}-assign {c.scope[0]} = {c.value}{m}")
        else:
            m = f" *{c.multiplicity}" if c.multiplicity > 1 else ""
            out.append(f"{c.kind} {c.relation.name} {' '.join(c.scope)}{m}")
    return "\n".join(out) + "\n"


@dataclass
class GraphBundle:
    graph: CutGraph
    lists: list
    triples: TripleSet
    name: str = "graph"


_PAIR = re.compile(r"\(([^,()]+),([^,()]+)\)")


def parse_graph(text: str) -> GraphBundle:
    name = "graph"
    vertices: list[str] = []
    undeletable: set = set()
    edges: list = []
    triples: list = []
    lists: list = []
    declared: set = set()

    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        words = line.split()
        head = words[0]
        if head == "graph":
            name = words[1] if len(words) > 1 else name
        elif head == "vertex":
            if len(words) not in (2, 3):
                raise ParseError(lineno, "expected: vertex NAME [undeletable]")
            vertices.append(words[1])
            declared.add(words[1])
            if len(words) == 3:
                if words[2] != "undeletable":
                    raise ParseError(lineno, f"unknown modifier {words[2]!r}")
                undeletable.add(words[1])
        elif head == "edge":
            mult = 1
            rest = words[1:]
            if rest and rest[-1].startswith("*"):
                mult = int(rest[-1][1:])
                rest = rest[:-1]
            if len(rest) != 2:
                raise ParseError(lineno, "expected: edge U V [*m]")
            edges.append((rest[0], rest[1], mult))
            declared.update(rest)
        elif head == "triple":
            mult = 1
            rest = words[1:]
            if rest and rest[-1].startswith("*"):
                mult = int(rest[-1][1:])
                rest = rest[:-1]
            if len(rest) != 3 or len(set(rest)) != 3:
                raise ParseError(lineno, "expected: triple U V W (distinct)")
            triples.append((frozenset(rest), mult))
            declared.update(rest)
        elif head == "list":
            body = line[len("list"):].strip()
            found = _PAIR.findall(body)
            if not found or _PAIR.sub("", body).strip() != "":
                raise ParseError(lineno, "expected: list (s,t) (s,t) ...")
            pairs = [(a.strip(), b.strip()) for a, b in found]
            lists.append(RequestList.of(*pairs))
            for a, b in pairs:
                declared.update((a, b))
        else:
            raise ParseError(lineno, f"unknown directive {head!r}")
    for v in sorted(declared):
        if v not in vertices:
            vertices.append(v)
    g = CutGraph.build(vertices, edges, undeletable=undeletable)
    return GraphBundle(g, lists, TripleSet.of(*triples) if triples
                       else TripleSet(()), name)


def print_graph(bundle: GraphBundle) -> str:
    g = bundle.graph
    out = [f"graph {bundle.name}"]
    for v in g.vertices:
        tag = " undeletable" if v in g.undeletable else ""
        out.append(f"vertex {v}{tag}")
    for e in sorted(g.edges, key=sorted):
        u, v = sorted(e)
        m = g.edges[e]
        out.append(f"edge {u} {v}" + (f" *{m}" if m > 1 else ""))
    for tri, m in bundle.triples:
        u, v, w = sorted(tri)
        out.append(f"triple {u} {v} {w}" + (f" *{m}" if m > 1 else ""))
    for lst in bundle.lists:
        parts = []
        for p in sorted(lst.pairs, key=sorted):
            if len(p) == 1:
                (s,) = p
                parts.append(f"({s},{s})")
            else:
                s, t = sorted(p)
                parts.append(f"({s},{t})")
        out.append("list " + " ".join(parts))
    return "\n".join(out) + "\n"

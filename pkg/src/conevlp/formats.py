"""Instance file parsing and report rendering.

Two text formats are supported, both whitespace-separated with '#'
comments:

cone files::

    cone
    k <int> n <int> p <int>
    G
    <k rows of n rationals>
    H
    <k rows of p rationals>

problem files::

    vlp
    q <int> n <int> m <int> r <int>
    A
    <m rows of n rationals>
    b
    <m rationals>
    P
    <q rows of n rationals>
    Z
    <q rows of r rationals>
    c
    <q rationals>

Reports are rendered both as plain text and as JSON documents in which
every number is an exact rational literal.
"""

from __future__ import annotations

import json
from fractions import Fraction

from .linalg import Mat, Vec, format_rational, mat, parse_rational, vec
from .extract import DualVlpSolution, NoSolutionCertificate, VlpSolution, d_value
from .polyhedra import Face, HRep
from .projection import ConeHRep, ConeSolution
from .vlp import VlpInstance, make_instance


class ParseError(Exception):
    """Malformed instance file."""


class _Tokens:
    def __init__(self, text: str):
        body = []
        for line in text.splitlines():
            hash_at = line.find("#")
            body.append(line if hash_at < 0 else line[:hash_at])
        self.tokens = "\n".join(body).split()
        self.pos = 0

    def next(self, what: str) -> str:
        if self.pos >= len(self.tokens):
            raise ParseError(f"unexpected end of file while reading {what}")
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def expect(self, literal: str) -> None:
        tok = self.next(f"'{literal}'")
        if tok != literal:
            raise ParseError(f"expected '{literal}', found '{tok}'")

    def integer(self, what: str) -> int:
        tok = self.next(what)
        try:
            value = int(tok)
        except ValueError as exc:
            raise ParseError(f"expected an integer for {what}, found '{tok}'") from exc
        if value < 0:
            raise ParseError(f"{what} must be nonnegative")
        return value

    def rational(self, what: str) -> Fraction:
        tok = self.next(what)
        try:
            return parse_rational(tok)
        except ValueError as exc:
            raise ParseError(f"expected a rational for {what}, found '{tok}'") from exc

    def block(self, name: str, rows: int, cols: int) -> Mat:
        self.expect(name)
        return mat(
            [
                [self.rational(f"{name}[{i}][{j}]") for j in range(cols)]
                for i in range(rows)
            ]
        )

    def done(self) -> None:
        if self.pos != len(self.tokens):
            raise ParseError(f"trailing content starting at '{self.tokens[self.pos]}'")


def detect_format(text: str) -> str:
    toks = _Tokens(text)
    head = toks.next("file header")
    if head not in ("cone", "vlp"):
        raise ParseError(f"unknown file header '{head}'")
    return head


def parse_cone_file(text: str) -> ConeHRep:
    toks = _Tokens(text)
    toks.expect("cone")
    toks.expect("k")
    k = toks.integer("k")
    toks.expect("n")
    n = toks.integer("n")
    toks.expect("p")
    p = toks.integer("p")
    if k < 1 or p < 1:
        raise ParseError("a cone file needs k >= 1 and p >= 1")
    g = toks.block("G", k, n)
    h = toks.block("H", k, p)
    toks.done()
    return ConeHRep(g, h)


def parse_vlp_file(text: str) -> VlpInstance:
    toks = _Tokens(text)
    toks.expect("vlp")
    toks.expect("q")
    q = toks.integer("q")
    toks.expect("n")
    n = toks.integer("n")
    toks.expect("m")
    m = toks.integer("m")
    toks.expect("r")
    r = toks.integer("r")
    a = toks.block("A", m, n)
    toks.expect("b")
    b = vec([toks.rational(f"b[{i}]") for i in range(m)])
    p = toks.block("P", q, n)
    z = toks.block("Z", q, r)
    toks.expect("c")
    c = vec([toks.rational(f"c[{i}]") for i in range(q)])
    toks.done()
    return make_instance(a, b, p, z, c)


# ---------------------------------------------------------------------------
# rendering
# ---------------------------------------------------------------------------


def fmt_vec(v: Vec) -> str:
    if not v:
        return "-"
    return " ".join(format_rational(x) for x in v)


def _decimals(v: Vec, places: int) -> str:
    return " ".join(f"{float(x):.{places}g}" for x in v)


def _vec_json(v: Vec) -> list[str]:
    return [format_rational(x) for x in v]


class Report:
    """Accumulates matching text lines and a JSON document."""

    def __init__(self, command: str, decimals: int | None = None):
        self.lines: list[str] = [f"command: {command}"]
        self.doc: dict = {"command": command}
        self.decimals = decimals

    def line(self, text: str) -> None:
        self.lines.append(text)

    def vec_line(self, parts: list[tuple[str, Vec]]) -> None:
        text = " | ".join(f"{name} = {fmt_vec(v)}" for name, v in parts)
        if self.decimals is not None:
            approx = " | ".join(
                f"{name} ~ {_decimals(v, self.decimals)}" for name, v in parts if v
            )
            text = f"{text}   ({approx})"
        self.lines.append(text)

    def text(self) -> str:
        return "\n".join(self.lines) + "\n"

    def json(self) -> str:
        return json.dumps(self.doc, indent=2, sort_keys=True) + "\n"


def render_primal(v: VlpInstance, sol, decimals=None) -> Report:
    from .linalg import mat_vec

    rep = Report("solve", decimals)
    if isinstance(sol, NoSolutionCertificate):
        rep.line("status: no-solution")
        rep.line(f"condition violated: {sol.condition}")
        witness = v.to_original_image(sol.witness)
        rep.vec_line([("witness y", witness)])
        rep.doc.update(
            {
                "status": "no-solution",
                "condition": sol.condition,
                "witness": _vec_json(witness),
            }
        )
        return rep
    rep.line("status: solution")
    if v.c_defaulted:
        rep.line("note: objective-cone direction defaulted to the sum of the extreme rays of C")
        rep.doc["c_defaulted"] = True
    sections = {}
    for name, xs in (("S_poi", sol.s_poi), ("S_dir", sol.s_dir), ("S_lin", sol.s_lin)):
        rep.line(name)
        rows = []
        if not xs:
            rep.line("(empty)")
        for x in xs:
            px = v.to_original_image(mat_vec(v.p_mat, x))
            rep.vec_line([("x", x), ("Px", px)])
            rows.append({"x": _vec_json(x), "Px": _vec_json(px)})
        sections[name] = rows
    rep.doc.update({"status": "solution", **sections})
    return rep


def render_dual(v: VlpInstance, sol, decimals=None) -> Report:
    rep = Report("solve-dual", decimals)
    if isinstance(sol, NoSolutionCertificate):
        rep.line("status: no-solution")
        rep.line(f"condition violated: {sol.condition}")
        rep.vec_line([("witness", sol.witness)])
        rep.doc.update(
            {
                "status": "no-solution",
                "condition": sol.condition,
                "witness": _vec_json(sol.witness),
            }
        )
        return rep
    rep.line("status: solution")
    sections = {}
    for name, pairs in (("T_poi", sol.t_poi), ("T_dir", sol.t_dir), ("T_lin", sol.t_lin)):
        rep.line(name)
        rows = []
        if not pairs:
            rep.line("(empty)")
        for u, w in pairs:
            dval = d_value(v, u, w)
            w_orig = v.to_original_dual_w(w)
            rep.vec_line([("u", u), ("w", w_orig), ("D", dval)])
            rows.append({"u": _vec_json(u), "w": _vec_json(w_orig), "D": _vec_json(dval)})
        sections[name] = rows
    rep.doc.update({"status": "solution", **sections})
    return rep


def render_cone_solution(command: str, sol: ConeSolution, names=("x", "y"), decimals=None) -> Report:
    rep = Report(command, decimals)
    rep.line("status: solution")
    sections = {}
    for name, pairs in (("X_dir", sol.x_dir), ("X_lin", sol.x_lin)):
        rep.line(name)
        rows = []
        if not pairs:
            rep.line("(empty)")
        for x, y in pairs:
            rep.vec_line([(names[0], x), (names[1], y)])
            rows.append({names[0]: _vec_json(x), names[1]: _vec_json(y)})
        sections[name] = rows
    rep.doc.update({"status": "solution", **sections})
    return rep


def _face_json(f: Face) -> dict:
    return {
        "active": list(f.active),
        "dim": f.dim,
        "points": [_vec_json(p) for p in f.gens.points],
        "rays": [_vec_json(r) for r in f.gens.rays],
        "lin": [_vec_json(l) for l in f.gens.lin],
    }


def _face_text(f: Face) -> str:
    active = ",".join(str(i) for i in f.active) if f.active else "-"
    pts = "; ".join(fmt_vec(p) for p in f.gens.points) or "-"
    rays = "; ".join(fmt_vec(r) for r in f.gens.rays) or "-"
    lin = "; ".join(fmt_vec(l) for l in f.gens.lin) or "-"
    return f"dim={f.dim} active={active} points=[{pts}] rays=[{rays}] lin=[{lin}]"


def render_faces(upper_faces, lower_faces, decimals=None) -> Report:
    rep = Report("faces", decimals)
    rep.line("upper-image faces")
    for f in upper_faces:
        rep.line(_face_text(f))
    rep.line("lower-image faces")
    for f in lower_faces:
        rep.line(_face_text(f))
    rep.doc.update(
        {
            "upper_faces": [_face_json(f) for f in upper_faces],
            "lower_faces": [_face_json(f) for f in lower_faces],
        }
    )
    return rep


def render_duality(report, decimals=None) -> Report:
    rep = Report("verify-duality", decimals)
    for pair in report.pairs:
        rep.line(f"dim(F*)={pair.dual.dim} dim(F)={pair.primal.dim} ok")
    rep.line(f"pairs: {len(report.pairs)}")
    rep.line(f"dim-sum: {report.q - 1}")
    rep.line(f"bijection: {'ok' if report.bijection_ok else 'FAILED'}")
    rep.line(f"inverse: {'ok' if report.inverse_ok else 'FAILED'}")
    rep.line(f"inclusion-reversal: {'ok' if report.inclusion_ok else 'FAILED'}")
    rep.line(f"factorization: {'ok' if report.factorization_ok else 'FAILED'}")
    rep.line(f"{len(report.pairs)} face pairs verified")
    rep.doc.update(
        {
            "pairs": [
                {"dual": _face_json(p.dual), "primal": _face_json(p.primal)}
                for p in report.pairs
            ],
            "dim_sum": report.q - 1,
            "bijection": report.bijection_ok,
            "inverse": report.inverse_ok,
            "inclusion_reversal": report.inclusion_ok,
            "factorization": report.factorization_ok,
        }
    )
    return rep


def parse_report_json(text: str) -> dict:
    """Inverse of Report.json; rational strings become Fractions."""

    def revive(obj):
        if isinstance(obj, dict):
            return {k: revive(x) for k, x in obj.items()}
        if isinstance(obj, list):
            return [revive(x) for x in obj]
        if isinstance(obj, str):
            try:
                return parse_rational(obj)
            except ValueError:
                return obj
        return obj

    return revive(json.loads(text))

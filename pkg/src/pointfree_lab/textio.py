"""Line-oriented text formats: frames, steps, families, vectors, sequences,
downsets, truncate sequences.

The grammar is declaration-per-line with frame blocks:

    frame F                     # or: frame W omega
    points a b c
    order a<b b<c
    coz {a} {a,b} BOT TOP

    step s over F = TOP | 0 {a} | 1 BOT
    family K = explicit s1 s2
    family K = truncates(s)
    family K over W = prefix_indicators
    vec v = (1, 3/2, 0)
    seq u = [0,1,1] tail 1
    downset D dim 2 = gen (0,0) ray (0,0)+(0,1)
    truncseq T = g1 g2 g3 tail stationary

Parsers raise ParseError with 1-based line/column; serializers round-trip.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .errors import ParseError
from .families import (
    ExplicitFamily,
    PrefixIndicatorFamily,
    TruncateFamily,
)
from .frames import FiniteFrame, build_frame
from .omega import OMEGA, OmegaElement, OmegaFrame, OmegaSet
from .poset import Poset
from .pointwise import DownsetSpec, TruncateSeq, STATIONARY, UNBOUNDED
from .spatial import ECSeq
from .steps import StepElement, validate_step


@dataclass
class Environment:
    frames: dict = field(default_factory=dict)
    steps: dict = field(default_factory=dict)
    families: dict = field(default_factory=dict)
    vectors: dict = field(default_factory=dict)
    sequences: dict = field(default_factory=dict)
    downsets: dict = field(default_factory=dict)
    truncseqs: dict = field(default_factory=dict)


def parse_fraction(tok: str, line: int, col: int) -> Fraction:
    try:
        return Fraction(tok)
    except (ValueError, ZeroDivisionError):
        raise ParseError(line, col, f"bad rational {tok!r}") from None


def parse_element(frame, tok: str, line: int, col: int):
    if tok == "TOP":
        return frame.top
    if tok == "BOT":
        return frame.bot
    if isinstance(frame, OmegaFrame):
        for kind, cofin in (("fin", False), ("cofin", True)):
            if tok.startswith(kind + "{") and tok.endswith("}"):
                body = tok[len(kind) + 1 : -1]
                try:
                    data = frozenset(int(x) for x in body.split(",") if x)
                except ValueError:
                    raise ParseError(line, col, f"bad naturals in {tok!r}") from None
                return OmegaElement(cofin, data)
        raise ParseError(line, col, f"bad omega element {tok!r}")
    if isinstance(frame, FiniteFrame):
        if tok.startswith("{") and tok.endswith("}"):
            mask = 0
            body = tok[1:-1]
            for label in filter(None, body.split(",")):
                try:
                    mask |= 1 << frame.base.index(label)
                except Exception:
                    raise ParseError(
                        line, col, f"unknown point {label!r} in {tok!r}"
                    ) from None
            if not frame.contains(mask):
                raise ParseError(line, col, f"{tok!r} is not a downset")
            return mask
        raise ParseError(line, col, f"bad element {tok!r}")
    raise ParseError(line, col, f"cannot parse elements of {frame!r}")


def serialize_element(frame, a) -> str:
    if a == frame.top:
        return "TOP"
    if a == frame.bot:
        return "BOT"
    if isinstance(a, (OmegaElement, OmegaSet)):
        return repr(a)
    labels = [
        frame.base.points[i] for i in range(frame.base.size) if a >> i & 1
    ]
    return "{" + ",".join(labels) + "}"


def serialize_step(f: StepElement, name: str, frame_name: str) -> str:
    parts = [serialize_element(f.frame, f.values[0])]
    for t, v in zip(f.thresholds, f.values[1:]):
        parts.append(f"| {t} {serialize_element(f.frame, v)}")
    return f"step {name} over {frame_name} = {' '.join(parts)}"


def serialize_vec(v) -> str:
    return "(" + ", ".join(str(x) for x in v) + ")"


def _split_tokens(text: str, line_no: int):
    """Tokens with their 1-based column positions."""
    out = []
    col = 0
    i = 0
    while i < len(text):
        if text[i].isspace():
            i += 1
            continue
        start = i
        while i < len(text) and not text[i].isspace():
            i += 1
        out.append((text[start:i], start + 1))
    return out


class _Parser:
    def __init__(self, text: str):
        self.env = Environment()
        self.current_frame = None
        self.lines = text.splitlines()

    def parse(self) -> Environment:
        for idx, raw in enumerate(self.lines, start=1):
            line = raw.split("#", 1)[0].rstrip()
            if not line.strip():
                continue
            toks = _split_tokens(line, idx)
            head, col = toks[0]
            handler = getattr(self, f"_decl_{head.replace('-', '_')}", None)
            if handler is None:
                raise ParseError(idx, col, f"unknown declaration {head!r}")
            handler(toks, idx)
        self._finish_frame()
        return self.env

    # -- frame blocks -------------------------------------------------------

    def _decl_frame(self, toks, line):
        self._finish_frame()
        if len(toks) < 2:
            raise ParseError(line, 1, "frame needs a name")
        name = toks[1][0]
        if len(toks) >= 3 and toks[2][0] == "omega":
            self.env.frames[name] = OMEGA
            self.current_frame = None
            return
        self.current_frame = {
            "name": name,
            "points": None,
            "relations": [],
            "coz": None,
            "coz_line": None,
            "line": line,
        }

    def _require_block(self, toks, line):
        if self.current_frame is None:
            raise ParseError(line, toks[0][1], f"{toks[0][0]} outside a frame block")

    def _decl_points(self, toks, line):
        self._require_block(toks, line)
        self.current_frame["points"] = [t for t, _ in toks[1:]]

    def _decl_order(self, toks, line):
        self._require_block(toks, line)
        for tok, col in toks[1:]:
            if "<" not in tok:
                raise ParseError(line, col, f"bad order token {tok!r}")
            a, _, b = tok.partition("<")
            if not a or not b:
                raise ParseError(line, col, f"bad order token {tok!r}")
            self.current_frame["relations"].append((a, b))

    def _decl_coz(self, toks, line):
        self._require_block(toks, line)
        self.current_frame["coz"] = [(t, c) for t, c in toks[1:]]
        self.current_frame["coz_line"] = line

    def _finish_frame(self):
        blk = self.current_frame
        if blk is None:
            return
        self.current_frame = None
        if blk["points"] is None:
            raise ParseError(blk["line"], 1, f"frame {blk['name']} has no points")
        try:
            poset = Poset.from_relations(blk["points"], blk["relations"])
        except Exception as exc:
            raise ParseError(blk["line"], 1, str(exc)) from None
        frame = build_frame(poset, name=blk["name"])
        if blk["coz"] is not None:
            part = [
                parse_element(frame, tok, blk["coz_line"], col)
                for tok, col in blk["coz"]
            ]
            frame = FiniteFrame(poset, coz_part=part, name=blk["name"])
        self.env.frames[blk["name"]] = frame

    # -- other declarations ---------------------------------------------------

    def _lookup_frame(self, name, line, col):
        self._finish_frame()
        if name not in self.env.frames:
            raise ParseError(line, col, f"unknown frame {name!r}")
        return self.env.frames[name]

    def _decl_step(self, toks, line):
        self._finish_frame()
        words = [t for t, _ in toks]
        if len(toks) < 6 or words[2] != "over" or words[4] != "=":
            raise ParseError(line, toks[0][1], "expected: step NAME over FRAME = ...")
        name = words[1]
        frame = self._lookup_frame(words[3], line, toks[3][1])
        rest = toks[5:]
        values = [parse_element(frame, rest[0][0], line, rest[0][1])]
        thresholds = []
        i = 1
        while i < len(rest):
            if rest[i][0] != "|":
                raise ParseError(line, rest[i][1], "expected '|'")
            if i + 2 >= len(rest):
                raise ParseError(line, rest[i][1], "dangling '|'")
            thresholds.append(parse_fraction(rest[i + 1][0], line, rest[i + 1][1]))
            values.append(parse_element(frame, rest[i + 2][0], line, rest[i + 2][1]))
            i += 3
        self.env.steps[name] = validate_step(frame, thresholds, values)

    def _decl_family(self, toks, line):
        self._finish_frame()
        words = [t for t, _ in toks]
        if "=" not in words:
            raise ParseError(line, toks[0][1], "family needs '='")
        eq = words.index("=")
        name = words[1]
        spec = words[eq + 1 :]
        if not spec:
            raise ParseError(line, toks[-1][1], "empty family spec")
        kind = spec[0]
        if kind == "explicit":
            steps = []
            for ref in spec[1:]:
                if ref not in self.env.steps:
                    raise ParseError(line, 1, f"unknown step {ref!r}")
                steps.append(self.env.steps[ref])
            self.env.families[name] = ExplicitFamily(tuple(steps))
        elif kind.startswith("truncates(") and kind.endswith(")"):
            ref = kind[len("truncates(") : -1]
            if ref not in self.env.steps:
                raise ParseError(line, 1, f"unknown step {ref!r}")
            self.env.families[name] = TruncateFamily(self.env.steps[ref])
        elif kind == "prefix_indicators":
            self.env.families[name] = PrefixIndicatorFamily()
        else:
            raise ParseError(line, 1, f"unknown family kind {kind!r}")

    def _decl_vec(self, toks, line):
        self._finish_frame()
        words = [t for t, _ in toks]
        name = words[1]
        body = " ".join(words[3:]) if words[2] == "=" else None
        if body is None:
            raise ParseError(line, toks[0][1], "expected: vec NAME = (..)")
        self.env.vectors[name] = self._parse_tuple(body, line)

    def _parse_tuple(self, body, line):
        body = body.strip()
        if not (body.startswith("(") and body.endswith(")")):
            raise ParseError(line, 1, f"expected a parenthesized tuple, got {body!r}")
        inner = body[1:-1].strip()
        if not inner:
            return ()
        return tuple(
            parse_fraction(x.strip(), line, 1) for x in inner.split(",")
        )

    def _decl_seq(self, toks, line):
        self._finish_frame()
        words = [t for t, _ in toks]
        # seq NAME = [a,b,c] tail q
        if len(words) < 5 or words[2] != "=" or words[-2] != "tail":
            raise ParseError(line, toks[0][1], "expected: seq NAME = [..] tail q")
        body = " ".join(words[3:-2])
        if not (body.startswith("[") and body.endswith("]")):
            raise ParseError(line, 1, f"expected [..] prefix, got {body!r}")
        inner = body[1:-1].strip()
        prefix = (
            [parse_fraction(x.strip(), line, 1) for x in inner.split(",")]
            if inner
            else []
        )
        tail = parse_fraction(words[-1], line, toks[-1][1])
        self.env.sequences[words[1]] = ECSeq.make(prefix, tail)

    def _decl_downset(self, toks, line):
        self._finish_frame()
        words = [t for t, _ in toks]
        # downset NAME dim N = gen (..) ... ray (..)+(..) ...
        if len(words) < 6 or words[2] != "dim" or words[4] != "=":
            raise ParseError(
                line, toks[0][1], "expected: downset NAME dim N = gen (..) ..."
            )
        name = words[1]
        try:
            dim = int(words[3])
        except ValueError:
            raise ParseError(line, toks[3][1], f"bad dimension {words[3]!r}") from None
        base, rays = [], []
        i = 5
        while i < len(words):
            keyword = words[i]
            if keyword not in ("gen", "ray"):
                raise ParseError(line, 1, f"expected gen/ray, got {keyword!r}")
            # Re-join tokens until the parentheses balance, so tuples may
            # contain spaces after commas.
            i += 1
            body = ""
            depth = 0
            while i < len(words):
                body += words[i]
                depth += words[i].count("(") - words[i].count(")")
                i += 1
                if depth == 0:
                    break
            if depth != 0:
                raise ParseError(line, 1, "unbalanced parentheses")
            if keyword == "gen":
                base.append(self._parse_tuple(body, line))
            else:
                start, _, direction = body.partition("+")
                rays.append(
                    (
                        self._parse_tuple(start, line),
                        self._parse_tuple(direction, line),
                    )
                )
        self.env.downsets[name] = DownsetSpec(dim, tuple(base), tuple(rays))

    def _decl_truncseq(self, toks, line):
        self._finish_frame()
        words = [t for t, _ in toks]
        if len(words) < 5 or words[2] != "=" or words[-2] != "tail":
            raise ParseError(
                line, toks[0][1], "expected: truncseq NAME = s1 .. tail RULE"
            )
        refs = words[3:-2]
        rule = words[-1]
        if rule not in (STATIONARY, UNBOUNDED):
            raise ParseError(line, toks[-1][1], f"unknown tail rule {rule!r}")
        prefix = []
        for ref in refs:
            if ref not in self.env.steps:
                raise ParseError(line, 1, f"unknown step {ref!r}")
            prefix.append(self.env.steps[ref])
        self.env.truncseqs[words[1]] = TruncateSeq(tuple(prefix), rule)


def parse_text(text: str) -> Environment:
    return _Parser(text).parse()


def parse_file(path: str) -> Environment:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_text(fh.read())

"""Parsers and formatters for the .grp / .perm text formats.

.grp is line oriented:

    gens: a b
    rels: a^2 b^3 (a*b)^5
    sub: ab Ba          # optional subgroup generators

Tokens are whitespace separated word expressions:
letter | expr^int | (expr) | [expr,expr]; '*' is optional between factors;
an uppercase letter is the inverse of its lowercase generator.
'#' starts a comment.  All points in .perm files are 1-based.

.perm:

    degree: 10
    (2,3,4)(5,7,8)(6,9,10)
    (1,2)(3,5)(4,6)(7,10)
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from .errors import ParseError
from .words import Presentation, SubgroupSpec, Word, commutator, format_word


@dataclass(frozen=True)
class PermutationInput:
    degree: int
    images: tuple  # tuple of permutations, each a tuple of 0-based images

    def __post_init__(self):
        object.__setattr__(self, "images", tuple(tuple(p) for p in self.images))


class _WordScanner:
    """Recursive-descent parser for one word expression."""

    def __init__(self, text, names, line=None, col0=0):
        self.text = text
        self.pos = 0
        self.names = {n: i + 1 for i, n in enumerate(names)}
        self.line = line
        self.col0 = col0

    def error(self, msg):
        raise ParseError(msg, line=self.line, col=self.col0 + self.pos + 1)

    def peek(self):
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def parse(self) -> Word:
        w = self.parse_expr()
        if self.pos != len(self.text):
            self.error(f"unexpected character {self.peek()!r}")
        return w

    def parse_expr(self, stop="") -> Word:
        w = Word()
        while True:
            c = self.peek()
            if not c or c in stop:
                return w
            if c == "*":
                self.pos += 1
                continue
            w = w * self.parse_term(stop)

    def parse_term(self, stop) -> Word:
        w = self.parse_atom()
        if self.peek() == "^":
            self.pos += 1
            w = w ** self.parse_int()
        return w

    def parse_atom(self) -> Word:
        c = self.peek()
        if c == "(":
            self.pos += 1
            w = self.parse_expr(stop=")")
            if self.peek() != ")":
                self.error("unbalanced '('")
            self.pos += 1
            return w
        if c == "[":
            self.pos += 1
            x = self.parse_expr(stop=",]")
            if self.peek() == ",":
                self.pos += 1
                y = self.parse_expr(stop="]")
                if self.peek() != "]":
                    self.error("unbalanced '['")
                self.pos += 1
                return commutator(x, y)
            # square brackets with no comma read as plain grouping
            if self.peek() != "]":
                self.error("unbalanced '['")
            self.pos += 1
            return x
        if c.isalpha():
            self.pos += 1
            gen = self.names.get(c.lower())
            if gen is None:
                self.error(f"undeclared generator {c!r}")
            return Word((gen,)) if c.islower() else Word((-gen,))
        if not c:
            self.error("unexpected end of word")
        self.error(f"unexpected character {c!r}")

    def parse_int(self) -> int:
        m = re.match(r"-?\d+", self.text[self.pos:])
        if not m:
            self.error("expected integer exponent")
        self.pos += m.end()
        return int(m.group())


def _strip_comment(line):
    return line.split("#", 1)[0]


def _sections(text):
    """Yield (header, token, line_no, col) across a .grp-style file."""
    current = None
    for lno, raw in enumerate(text.splitlines(), start=1):
        line = _strip_comment(raw)
        if not line.strip():
            continue
        rest = line
        offset = 0
        m = re.match(r"\s*(gens|rels|sub)\s*:", line)
        if m:
            current = m.group(1)
            yield current, None, lno, m.end()
            rest = line[m.end():]
            offset = m.end()
        if current is None:
            raise ParseError("expected a 'gens:', 'rels:' or 'sub:' header",
                             line=lno, col=len(line) - len(line.lstrip()) + 1)
        for tm in re.finditer(r"\S+", rest):
            yield current, tm.group(), lno, offset + tm.start() + 1


def parse_presentation(text: str) -> Presentation:
    """Parse a .grp body (without any 'sub:' block) into a Presentation."""
    pres, _ = parse_group_file(text)
    return pres


def parse_group_file(text: str):
    """Parse a .grp body into (Presentation, SubgroupSpec or None)."""
    names = None
    rel_tokens = []
    sub_tokens = []
    saw = {"gens": False, "rels": False, "sub": False}
    for header, token, lno, col in _sections(text):
        if token is None:
            saw[header] = True
            continue
        if header == "gens":
            names = (names or ()) + (token,)
            if not re.fullmatch(r"[a-z]", token):
                raise ParseError(f"generator name must be one lowercase letter, got {token!r}",
                                 line=lno, col=col)
        else:
            (rel_tokens if header == "rels" else sub_tokens).append((token, lno, col))
    if not saw["gens"] or names is None:
        raise ParseError("missing 'gens:' header", line=1, col=1)
    if len(names) != 2:
        raise ParseError(f"need exactly 2 generators, got {len(names)}", line=1, col=1)
    if not saw["rels"]:
        raise ParseError("missing 'rels:' header", line=1, col=1)
    relators = tuple(_WordScanner(tok, names, line=lno, col0=col - 1).parse()
                     for tok, lno, col in rel_tokens)
    pres = Presentation(generator_names=names, relators=relators)
    sub = None
    if saw["sub"]:
        sub = SubgroupSpec(tuple(_WordScanner(tok, names, line=lno, col0=col - 1).parse()
                                 for tok, lno, col in sub_tokens))
    return pres, sub


def parse_word(text: str, p: Presentation) -> Word:
    """Parse one word expression (whitespace ignored) over p's generators."""
    compact = "".join(text.split())
    return _WordScanner(compact, p.generator_names).parse()


def parse_subgroup_file(text: str, p: Presentation) -> SubgroupSpec:
    """Parse a file of subgroup generator tokens (optional 'sub:' header)."""
    body = []
    for lno, raw in enumerate(text.splitlines(), start=1):
        line = _strip_comment(raw)
        line = re.sub(r"\s*sub\s*:", " ", line)
        for tm in re.finditer(r"\S+", line):
            body.append((tm.group(), lno, tm.start() + 1))
    return SubgroupSpec(tuple(_WordScanner(tok, p.generator_names, line=lno, col0=col - 1).parse()
                              for tok, lno, col in body))


_CYCLE_RE = re.compile(r"\(([^()]*)\)")


def parse_cycles(text: str, degree: int, line=None):
    """One permutation in cycle notation (1-based) -> 0-based image tuple."""
    images = list(range(degree))
    seen = set()
    body = text.strip()
    if not _CYCLE_RE.fullmatch(body) and not re.fullmatch(r"(\([^()]*\)\s*)+", body):
        raise ParseError(f"not cycle notation: {text!r}", line=line, col=1)
    for m in _CYCLE_RE.finditer(body):
        inner = m.group(1).strip()
        if not inner:
            continue
        try:
            pts = [int(t) for t in re.split(r"[,\s]+", inner)]
        except ValueError:
            raise ParseError(f"bad cycle {m.group()!r}", line=line, col=m.start() + 1)
        for p in pts:
            if not 1 <= p <= degree:
                raise ParseError(f"point {p} out of range 1..{degree}",
                                 line=line, col=m.start() + 1)
            if p - 1 in seen:
                raise ParseError(f"point {p} repeated within one permutation",
                                 line=line, col=m.start() + 1)
            seen.add(p - 1)
        for i, p in enumerate(pts):
            images[p - 1] = pts[(i + 1) % len(pts)] - 1
    return tuple(images)


def parse_permutations(text: str) -> PermutationInput:
    """Parse a .perm body: 'degree: n' then one generator per line."""
    degree = None
    gens = []
    for lno, raw in enumerate(text.splitlines(), start=1):
        line = _strip_comment(raw).strip()
        if not line:
            continue
        if degree is None:
            m = re.fullmatch(r"degree\s*:\s*(\d+)", line)
            if not m:
                raise ParseError("first line must be 'degree: n'", line=lno, col=1)
            degree = int(m.group(1))
            if degree < 1:
                raise ParseError("degree must be positive", line=lno, col=1)
            continue
        gens.append(parse_cycles(line, degree, line=lno))
    if degree is None:
        raise ParseError("missing 'degree: n' line", line=1, col=1)
    if not gens:
        raise ParseError("no generators given", line=1, col=1)
    return PermutationInput(degree=degree, images=tuple(gens))


def format_cycles(perm) -> str:
    """0-based image tuple -> 1-based, comma-separated cycle notation."""
    n = len(perm)
    seen = [False] * n
    out = []
    for i in range(n):
        if seen[i] or perm[i] == i:
            seen[i] = True
            continue
        cyc = [i]
        seen[i] = True
        j = perm[i]
        while j != i:
            seen[j] = True
            cyc.append(j)
            j = perm[j]
        out.append("(" + ",".join(str(p + 1) for p in cyc) + ")")
    return "".join(out) if out else "()"


def format_permutations(pi: PermutationInput) -> str:
    lines = [f"degree: {pi.degree}"]
    lines.extend(format_cycles(p) for p in pi.images)
    return "\n".join(lines) + "\n"


def format_presentation(p: Presentation, sub: SubgroupSpec | None = None) -> str:
    lines = ["gens: " + " ".join(p.generator_names),
             "rels: " + " ".join(format_word(r, p.generator_names) for r in p.relators)]
    if sub is not None:
        lines.append("sub: " + " ".join(format_word(w, p.generator_names)
                                        for w in sub.generators))
    return "\n".join(lines) + "\n"

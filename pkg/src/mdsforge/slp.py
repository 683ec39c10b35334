"""Word-level linear straight-line programs.

A program over ring R with k inputs is an ordered list of steps
``t_p = a*t_m (+) b*t_n`` (word XOR of two scalar multiples of earlier
terms) plus an assignment of output labels y_1..y_q to terms.  Term indices
follow the convention x_1 = t_0, x_2 = t_-1, ..., x_k = t_-(k-1); steps are
t_1..t_s.  Outputs may alias inputs (pass-through wires).

Cost is n*s + t: one word XOR (n gates) per step plus the XOR count of each
distinct scalar product, where a product is the pair (scalar, operand term)
and repeated products are computed once.  Depth counts XOR levels from any
input to any output; a non-identity scalar on an operand adds one level.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

from .gf2 import FormatError, QuotientRing
from .blockmat import BlockMatrix, ring_header_text, parse_ring_header


class NotSquareError(ValueError):
    """Matrix extraction requires as many outputs as inputs."""


class DeadTermError(ValueError):
    """A non-output term precedes no output (removing it changes nothing)."""


class NotNormalError(ValueError):
    """Operation defined only on normal-form programs."""


class Step(NamedTuple):
    m: int
    n: int
    a: int  # scalar on t_m, raw residue, nonzero
    b: int  # scalar on t_n


@dataclass(frozen=True)
class Slp:
    ring: QuotientRing
    k_in: int
    steps: tuple[Step, ...]
    outputs: tuple[int, ...]  # term index of y_1..y_q

    def __post_init__(self):
        if self.k_in < 1:
            raise ValueError("need at least one input")
        lo = -(self.k_in - 1)
        for p, st in enumerate(self.steps, start=1):
            if not (lo <= st.m < p and lo <= st.n < p):
                raise ValueError(f"step {p} references an unavailable term")
            if st.a == 0 or st.b == 0:
                raise ValueError(f"step {p} has a zero scalar")
        s = len(self.steps)
        for o in self.outputs:
            if not (lo <= o <= s):
                raise ValueError(f"output references unknown term {o}")

    # -- helpers -------------------------------------------------------------

    @property
    def n_steps(self) -> int:
        return len(self.steps)

    def step(self, p: int) -> Step:
        return self.steps[p - 1]

    def coeff_vectors(self) -> dict[int, tuple[int, ...]]:
        """Coefficient row of every term over the inputs, by forward accumulation."""
        ring = self.ring
        k = self.k_in
        vec: dict[int, tuple[int, ...]] = {}
        for j in range(k):
            idx = -j
            vec[idx] = tuple(1 if c == j else 0 for c in range(k))
        for p, st in enumerate(self.steps, start=1):
            vm, vn = vec[st.m], vec[st.n]
            if st.a == 1:
                left = vm
            else:
                left = tuple(ring.mul(st.a, c) for c in vm)
            if st.b == 1:
                row = tuple(l ^ c for l, c in zip(left, vn))
            else:
                row = tuple(l ^ ring.mul(st.b, c) for l, c in zip(left, vn))
            vec[p] = row
        return vec

    def products(self) -> set[tuple[int, int]]:
        """Distinct non-trivial scalar products as (operand term, scalar) pairs."""
        out = set()
        for st in self.steps:
            if st.a != 1:
                out.add((st.m, st.a))
            if st.b != 1:
                out.add((st.n, st.b))
        return out


def extract_matrix(p: Slp) -> BlockMatrix:
    """The matrix whose row i is the expansion of y_i over the inputs."""
    if len(p.outputs) != p.k_in:
        raise NotSquareError(
            f"{len(p.outputs)} outputs for {p.k_in} inputs; only square layers extract"
        )
    vec = p.coeff_vectors()
    return BlockMatrix(p.ring, tuple(vec[o] for o in p.outputs))


def cost(p: Slp) -> int:
    t = sum(p.ring.scalar_xor_count(c) for (_, c) in p.products())
    return p.ring.n * p.n_steps + t


def depth(p: Slp) -> int:
    """Max XOR levels to any output; non-identity scalars add one level each."""
    d: dict[int, int] = {-j: 0 for j in range(p.k_in)}
    for idx, st in enumerate(p.steps, start=1):
        dm = d[st.m] + (1 if st.a != 1 else 0)
        dn = d[st.n] + (1 if st.b != 1 else 0)
        d[idx] = 1 + max(dm, dn)
    return max((d[o] for o in p.outputs), default=0)


def _ancestor_sets(p: Slp) -> list[set[int]]:
    """anc[p-1] = all term indices strictly preceding step p."""
    anc: list[set[int]] = []
    for st in p.steps:
        s = {st.m, st.n}
        if st.m >= 1:
            s |= anc[st.m - 1]
        if st.n >= 1:
            s |= anc[st.n - 1]
        anc.append(s)
    return anc


def precedes(p: Slp, q_idx: int, p_idx: int) -> bool:
    """Strict partial order: t_q is needed to compute t_p."""
    if p_idx < 1:
        return False
    return q_idx in _ancestor_sets(p)[p_idx - 1]


def is_normal(p: Slp) -> bool:
    """Every non-output step between consecutive outputs precedes the next output."""
    anc = _ancestor_sets(p)
    out_steps = [o for o in p.outputs if o >= 1]
    if out_steps != sorted(out_steps) or len(set(out_steps)) != len(out_steps):
        return False
    prev = 0
    out_pos = {o: i for i, o in enumerate(p.outputs)}
    for o in p.outputs:
        if o < 1:
            continue
        for t in range(prev + 1, o):
            if t == o or t in out_pos:
                return False
            if t not in anc[o - 1]:
                return False
        prev = o
    return prev == p.n_steps


def normalize(p: Slp) -> Slp:
    """Normal form by the bubble procedure: every step in an output's segment
    is an ancestor of that output.  Extracted matrix, cost and depth are
    preserved (only the order of steps changes).
    """
    anc = _ancestor_sets(p)
    out_set = {o for o in p.outputs if o >= 1}
    order: list[int] = []
    placed: set[int] = set()
    for o in p.outputs:
        if o < 1:
            continue
        if o in placed:
            raise ValueError("duplicate output term")
        for t in range(1, o):
            if t in placed or t == o:
                continue
            if t in anc[o - 1]:
                if t in out_set:
                    raise ValueError(
                        f"output term {t} precedes an earlier-labelled output; "
                        "no normal form exists in label order")
                order.append(t)
                placed.add(t)
        order.append(o)
        placed.add(o)
    leftovers = [t for t in range(1, p.n_steps + 1) if t not in placed]
    if leftovers:
        raise DeadTermError(f"terms {leftovers} precede no output")
    remap = {t: i + 1 for i, t in enumerate(order)}
    for j in range(p.k_in):
        remap[-j] = -j
    steps = tuple(
        Step(remap[p.steps[t - 1].m], remap[p.steps[t - 1].n], p.steps[t - 1].a, p.steps[t - 1].b)
        for t in order
    )
    outputs = tuple(remap[o] if o >= 1 else o for o in p.outputs)
    return Slp(p.ring, p.k_in, steps, outputs)


def characteristic(p: Slp) -> tuple[int, ...]:
    """Per-segment step counts (i1, i2-i1, ...); requires normal form."""
    if not is_normal(p):
        raise NotNormalError("characteristic is defined on normal programs")
    prev = 0
    out = []
    for o in p.outputs:
        if o < 1:
            out.append(0)
        else:
            out.append(o - prev)
            prev = o
    return tuple(out)


# ---------------------------------------------------------------------------
# text format (bit-exact round trip)


def _term_text(idx: int) -> str:
    return f"x{1 - idx}" if idx <= 0 else f"t{idx}"


def _parse_term(tok: str, k: int, s_limit: int, line=None) -> int:
    if tok.startswith("x"):
        try:
            j = int(tok[1:])
        except ValueError:
            raise FormatError(f"bad term {tok!r}", line) from None
        if not 1 <= j <= k:
            raise FormatError(f"input {tok} out of range", line)
        return 1 - j
    if tok.startswith("t"):
        try:
            idx = int(tok[1:])
        except ValueError:
            raise FormatError(f"bad term {tok!r}", line) from None
        if not 1 <= idx <= s_limit:
            raise FormatError(f"term {tok} not yet defined", line)
        return idx
    raise FormatError(f"bad term {tok!r}", line)


def slp_to_text(p: Slp) -> str:
    lines = [f"{ring_header_text(p.ring)} inputs {p.k_in}"]
    for i, st in enumerate(p.steps, start=1):
        left = _term_text(st.m)
        if st.a != 1:
            left = f"{p.ring.element_text(st.a)}*{left}"
        right = _term_text(st.n)
        if st.b != 1:
            right = f"{p.ring.element_text(st.b)}*{right}"
        lines.append(f"t{i} = {left} + {right}")
    for i, o in enumerate(p.outputs, start=1):
        lines.append(f"out y{i} = {_term_text(o)}")
    return "\n".join(lines) + "\n"


def slp_from_lines(lines: list[str], start: int = 0) -> tuple[Slp, int]:
    if start >= len(lines):
        raise FormatError("expected SLP header", start + 1)
    head = lines[start].split()
    if not head or head[0] != "ring" or "inputs" not in head:
        raise FormatError("SLP header must be 'ring <poly> [rep ..] [cost ..] inputs <k>'", start + 1)
    ii = head.index("inputs")
    ring = parse_ring_header(head[1:ii], start + 1)
    try:
        k = int(head[ii + 1])
    except (IndexError, ValueError):
        raise FormatError("bad input count", start + 1) from None

    steps: list[Step] = []
    outputs: list[tuple[int, int]] = []
    pos = start + 1
    while pos < len(lines):
        line = lines[pos]
        lineno = pos + 1
        if line.startswith("out "):
            body = line[4:]
            lhs, _, rhs = body.partition("=")
            lhs, rhs = lhs.strip(), rhs.strip()
            if not lhs.startswith("y"):
                raise FormatError("output line must read 'out y<i> = <term>'", lineno)
            try:
                label = int(lhs[1:])
            except ValueError:
                raise FormatError(f"bad output label {lhs!r}", lineno) from None
            outputs.append((label, _parse_term(rhs, k, len(steps), lineno)))
            pos += 1
            continue
        if line.startswith("t"):
            lhs, _, rhs = line.partition("=")
            lhs = lhs.strip()
            expected = f"t{len(steps) + 1}"
            if lhs != expected:
                raise FormatError(f"expected step {expected}, found {lhs!r}", lineno)
            parts = rhs.strip().split(" + ")
            if len(parts) != 2:
                raise FormatError("step must have exactly two operands", lineno)
            ops = []
            for part in parts:
                scalar = 1
                term = part.strip()
                if "*" in term:
                    stxt, _, term = term.partition("*")
                    scalar = ring.parse_element(stxt.strip())
                ops.append((_parse_term(term.strip(), k, len(steps), lineno), scalar))
            (m, a), (n, b) = ops
            steps.append(Step(m, n, a, b))
            pos += 1
            continue
        break
    if not outputs:
        raise FormatError("SLP has no outputs", pos)
    labels = [l for l, _ in outputs]
    if sorted(labels) != list(range(1, len(labels) + 1)):
        raise FormatError("output labels must be y1..yq, each exactly once", pos)
    terms = [t for _, t in sorted(outputs)]
    return Slp(ring, k, tuple(steps), tuple(terms)), pos


def slp_from_text(text: str) -> Slp:
    lines = [ln.rstrip() for ln in text.splitlines() if ln.strip() and not ln.lstrip().startswith("#")]
    p, _ = slp_from_lines(lines, 0)
    return p

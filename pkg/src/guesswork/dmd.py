"""Difference modular disequations and the reductions around them.

A system over Z_M holds constraints ``w_i - w_j != c (mod M)``.  Finding a
posterior-respecting M-ary partition for a bijection is exactly solving such
a system (:func:`sigma_to_dmd`); NAE-3SAT reduces to it
(:func:`nae3sat_to_dmd`), it reduces back to bijections through a
duplication gadget (:func:`dmd_to_sigma`), and it is equivalent to asking
whether a graph built from it has an independent set of size ``num_vars``
(:func:`dmd_to_graph`).
"""

from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .binary import Bijection, Key
from .core import MPartition, PosteriorSystem
from .errors import CapExceededError, ConditionError, InputError

DEFAULT_MIS_CAP = 24


@dataclass(frozen=True)
class DmdSystem:
    """``modulus``-ary system; each disequation ``(i, j, c)`` means ``w_i - w_j != c``.

    Construction reduces ``c`` mod M and drops the vacuous ``(i, i, c != 0)``;
    ``(i, i, 0)`` is kept and makes the system unsatisfiable.
    """
    modulus: int
    num_vars: int
    disequations: tuple[tuple[int, int, int], ...] = ()

    def __post_init__(self):
        if self.modulus < 2:
            raise InputError("modulus must be at least 2")
        if self.num_vars < 0:
            raise InputError("num_vars must be nonnegative")
        kept = []
        for i, j, c in self.disequations:
            if not (0 <= i < self.num_vars and 0 <= j < self.num_vars):
                raise InputError(f"disequation ({i}, {j}, {c}) references an unknown variable")
            c %= self.modulus
            if i == j and c != 0:
                continue
            kept.append((i, j, c))
        object.__setattr__(self, "disequations", tuple(kept))

    @property
    def contradictory(self) -> bool:
        return any(i == j for i, j, _ in self.disequations)

    def satisfied_by(self, z: Sequence[int]) -> bool:
        if len(z) != self.num_vars:
            return False
        m = self.modulus
        return all((z[i] - z[j] - c) % m != 0 for i, j, c in self.disequations)


def solve_dmd(system: DmdSystem) -> list[int] | None:
    """Backtracking with forward checking; returns the first solution found or None.

    Variable 0 is pinned to 0 (solutions are closed under a common shift), the
    next variable is the one with the fewest remaining residues, and residues
    are tried lowest first, so the result is deterministic.
    """
    if system.contradictory:
        return None
    n, m = system.num_vars, system.modulus
    if n == 0:
        return []
    # forbid[i] = [(j, d)]: once z_i = a, z_j must avoid a + d
    forbid: list[list[tuple[int, int]]] = [[] for _ in range(n)]
    for i, j, c in system.disequations:
        forbid[i].append((j, -c))
        forbid[j].append((i, c))
    full = (1 << m) - 1
    domains = [full] * n
    z: list[int | None] = [None] * n

    def assign(var: int, value: int, doms: list[int]) -> list[int] | None:
        doms = doms.copy()
        doms[var] = 1 << value
        for other, d in forbid[var]:
            if z[other] is None:
                bit = 1 << ((value + d) % m)
                if doms[other] & bit:
                    doms[other] &= ~bit
                    if not doms[other]:
                        return None
        return doms

    def search(doms: list[int]) -> bool:
        free = [v for v in range(n) if z[v] is None]
        if not free:
            return True
        var = min(free, key=lambda v: (bin(doms[v]).count("1"), v))
        for value in range(m):
            if not doms[var] >> value & 1:
                continue
            nxt = assign(var, value, doms)
            if nxt is None:
                continue
            z[var] = value
            if search(nxt):
                return True
            z[var] = None
        return False

    start = assign(0, 0, domains)
    if start is None:
        return None
    z[0] = 0
    if not search(start):
        return None
    return [int(v) for v in z]


def dmd_solutions_bruteforce(system: DmdSystem) -> list[tuple[int, ...]]:
    """Every satisfying assignment, by plain enumeration of M**num_vars candidates."""
    return [z for z in itertools.product(range(system.modulus), repeat=system.num_vars)
            if system.satisfied_by(z)]


# ---------------------------------------------------------------------------
# bijection <-> DMD
# ---------------------------------------------------------------------------

def sigma_to_dmd(sigma: Bijection, ps: PosteriorSystem | None = None) -> DmdSystem:
    """Disequations whose solutions are the class assignments making σ posterior-respecting.

    Two σ-siblings ``(n1, m1)`` and ``(n2, m2)`` share answer ``z + m`` iff
    ``z_n1 - z_n2 = m2 - m1``; same-symbol pairs can never collide.
    """
    if ps is not None:
        sigma.check_against(ps)
        n = ps.n
    else:
        n = max((s for s, _ in sigma.order), default=-1) + 1
    m = sigma.m
    out = []
    for block in sigma.blocks:
        for a, (n1, m1) in enumerate(block):
            for n2, m2 in block[a + 1:]:
                if n1 != n2:
                    out.append((n1, n2, (m2 - m1) % m))
    return DmdSystem(m, n, tuple(out))


def dmd_assignment_to_partition(assignment: Sequence[int], sigma: Bijection,
                                ps: PosteriorSystem | None = None) -> MPartition:
    system = sigma_to_dmd(sigma, ps)
    if not system.satisfied_by(assignment):
        raise InputError("assignment does not satisfy the disequations of σ")
    return MPartition(tuple(assignment), sigma.m)


def separates_blocks(sigma: Bijection, classes: Sequence[int]) -> bool:
    """True iff every σ block lands its terms in M distinct answers (no distribution needed)."""
    m = sigma.m
    return all(len({(classes[s] + v) % m for s, v in block}) == len(block)
               for block in sigma.blocks)


# ---------------------------------------------------------------------------
# NAE-3SAT -> DMD
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class NaeSatInstance:
    """Clauses are triples of nonzero DIMACS literals (``-3`` is the negation of ``x_3``)."""
    num_vars: int
    clauses: tuple[tuple[int, int, int], ...] = ()

    def __post_init__(self):
        for cl in self.clauses:
            if len(cl) != 3:
                raise InputError(f"clause {cl!r} does not have exactly 3 literals")
            if any(lit == 0 or abs(lit) > self.num_vars for lit in cl):
                raise InputError(f"clause {cl!r} has a literal out of range")

    def satisfied_by(self, assignment: Sequence[bool]) -> bool:
        for cl in self.clauses:
            vals = {assignment[abs(l) - 1] if l > 0 else not assignment[abs(l) - 1] for l in cl}
            if len(vals) != 2:
                return False
        return True


def nae_satisfiable_bruteforce(inst: NaeSatInstance) -> list[bool] | None:
    for bits in itertools.product((False, True), repeat=inst.num_vars):
        if inst.satisfied_by(bits):
            return list(bits)
    return None


@dataclass(frozen=True)
class NaeVariableMap:
    """Where each NAE object lives among the DMD variables."""
    s: int
    w: tuple[int, ...]
    w_hat: tuple[int, ...]
    clause_vars: tuple[int, ...]

    def literal(self, lit: int) -> int:
        i = abs(lit) - 1
        return self.w[i] if lit > 0 else self.w_hat[i]

    def decode(self, z: Sequence[int], modulus: int = 3) -> list[bool]:
        """Offset 1 from ``s`` reads as false, offset 2 as true."""
        out = []
        for wi in self.w:
            diff = (z[wi] - z[self.s]) % modulus
            if diff not in (1, 2):
                raise InputError("assignment does not satisfy the literal constraints")
            out.append(diff == 2)
        return out


def nae3sat_to_dmd(inst: NaeSatInstance, modulus: int = 3) -> tuple[DmdSystem, NaeVariableMap]:
    if modulus != 3:
        raise ConditionError("the NAE-3SAT reduction is implemented for M = 3 only")
    n = inst.num_vars
    s = 0
    w = tuple(1 + 2 * i for i in range(n))
    w_hat = tuple(2 + 2 * i for i in range(n))
    cvars = tuple(1 + 2 * n + j for j in range(len(inst.clauses)))
    vmap = NaeVariableMap(s, w, w_hat, cvars)
    eqs = []
    for i in range(n):
        eqs += [(w[i], s, 0), (w_hat[i], s, 0), (w[i], w_hat[i], 0)]
    for cl, cv in zip(inst.clauses, cvars):
        for offset, lit in enumerate(cl):
            eqs.append((vmap.literal(lit), cv, offset))
    return DmdSystem(3, 1 + 2 * n + len(inst.clauses), tuple(eqs)), vmap


# ---------------------------------------------------------------------------
# DMD -> bijection (duplication gadget)
# ---------------------------------------------------------------------------

@dataclass
class RowMap:
    """Row bookkeeping for :func:`dmd_to_sigma`; original variable ``v`` is row ``v``."""
    num_vars: int
    num_rows: int
    helper_rows: list[int] = field(default_factory=list)
    gadget_rows: list[tuple[int, int, int, int]] = field(default_factory=list)

    def project(self, z: Sequence[int]) -> list[int]:
        return list(z[:self.num_vars])


def dmd_to_sigma(system: DmdSystem) -> tuple[Bijection, RowMap]:
    """Build a 3-ary bijection over rows x residues whose DMD system is equisatisfiable.

    Each variable starts with one "copy" (its own row, one token per residue).
    A variable needed ``d`` times gets ``d - 1`` duplication gadgets, each
    consuming the last copy's residue-0 token plus four fresh rows
    ``k', k'', j, j'`` and returning two copies forced equal to it.  The
    disequation ``w_k - w_l != c`` then takes one copy of each side and a
    fresh helper row ``h`` and contributes the blocks
    ``{k[r], l[r + c], (h, r)}`` for ``r = 0, 1, 2``.  Unused variables keep
    their row as a single self-block, which imposes nothing.
    """
    if system.modulus != 3:
        raise ConditionError("the duplication gadget is implemented for M = 3 only")
    n = system.num_vars
    uses = [0] * n
    for i, j, _ in system.disequations:
        uses[i] += 1
        uses[j] += 1
    copies: list[deque] = [deque([((v, 0), (v, 1), (v, 2))]) for v in range(n)]
    rowmap = RowMap(n, n)
    blocks: list[tuple[Key, ...]] = []

    def fresh() -> int:
        rowmap.num_rows += 1
        return rowmap.num_rows - 1

    def duplicate(v: int) -> None:
        t0, t1, t2 = copies[v].pop()
        k1, k2, j, j2 = fresh(), fresh(), fresh(), fresh()
        rowmap.gadget_rows.append((k1, k2, j, j2))
        blocks.append((t0, (j, 0), (j2, 0)))
        blocks.append(((k1, 1), (j, 1), (j2, 1)))
        blocks.append(((k2, 2), (j, 2), (j2, 2)))
        copies[v].append(((k1, 0), t1, t2))
        copies[v].append(((k2, 0), (k2, 1), (k1, 2)))

    def take(v: int):
        while len(copies[v]) < uses[v]:
            duplicate(v)
        uses[v] -= 1
        return copies[v].popleft()

    for k, l, c in system.disequations:
        a = take(k)
        b = take(l)
        h = fresh()
        rowmap.helper_rows.append(h)
        for r in range(3):
            blocks.append((a[r], b[(c + r) % 3], (h, r)))
    for v in range(n):
        for left in copies[v]:
            blocks.append(left)
    return Bijection.from_blocks(blocks, 3), rowmap


# ---------------------------------------------------------------------------
# DMD -> graph
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class DmdGraph:
    """Vertex ``v * M + r`` stands for ``w_v = r``; self-loops mark impossible values."""
    num_vars: int
    modulus: int
    edges: frozenset[tuple[int, int]]

    @property
    def num_vertices(self) -> int:
        return self.num_vars * self.modulus

    def vertex(self, var: int, residue: int) -> int:
        return var * self.modulus + residue

    def label(self, vertex: int) -> tuple[int, int]:
        return divmod(vertex, self.modulus)

    def adjacency(self) -> list[int]:
        adj = [0] * self.num_vertices
        for u, v in self.edges:
            adj[u] |= 1 << v
            adj[v] |= 1 << u
        return adj


def dmd_to_graph(system: DmdSystem) -> DmdGraph:
    m = system.modulus
    edges = set()

    def add(u, v):
        edges.add((min(u, v), max(u, v)))

    for var in range(system.num_vars):
        for a in range(m):
            for b in range(a + 1, m):
                add(var * m + a, var * m + b)
    for k, l, c in system.disequations:
        for r in range(m):
            add(k * m + (c + r) % m, l * m + r)
    return DmdGraph(system.num_vars, m, frozenset(edges))


def max_independent_set_bruteforce(g: DmdGraph, cap: int = DEFAULT_MIS_CAP) -> int:
    """Exact independence number by branch and bound over vertex subsets."""
    nv = g.num_vertices
    if nv > cap:
        raise CapExceededError(f"{nv} vertices exceed the independent-set cap {cap}")
    adj = g.adjacency()
    looped = {u for u, v in g.edges if u == v}
    m = g.modulus
    clique_masks = [((1 << m) - 1) << (var * m) for var in range(g.num_vars)]
    best = 0

    def bound(cand: int) -> int:
        # an independent set meets each variable clique at most once
        return sum(1 for cm in clique_masks if cand & cm)

    def grow(size: int, cand: int) -> None:
        nonlocal best
        if size > best:
            best = size
        if not cand or size + bound(cand) <= best:
            return
        v = (cand & -cand).bit_length() - 1
        if v not in looped:
            grow(size + 1, cand & ~adj[v] & ~(1 << v))
        grow(size, cand & ~(1 << v))

    everything = sum(1 << v for v in range(nv) if v not in looped)
    grow(0, everything)
    return best


# ---------------------------------------------------------------------------
# text formats
# ---------------------------------------------------------------------------

def _content_lines(text: str) -> Iterable[list[str]]:
    for raw in text.splitlines():
        line = raw.strip()
        if line and not line.startswith("c") and not line.startswith("%"):
            yield line.split()


def _ints(fields: list[str], what: str) -> list[int]:
    try:
        return [int(x) for x in fields]
    except ValueError as exc:
        raise InputError(f"malformed {what} line: {' '.join(fields)!r}") from exc


def parse_dmd(text: str) -> DmdSystem:
    """``p dmd <M> <vars> <count>`` header, then one 1-based ``i j c`` triple per line."""
    lines = list(_content_lines(text))
    if not lines or lines[0][:2] != ["p", "dmd"] or len(lines[0]) != 5:
        raise InputError("missing 'p dmd <M> <vars> <count>' header")
    m, n, count = _ints(lines[0][2:], "header")
    eqs = []
    for fields in lines[1:]:
        if len(fields) != 3:
            raise InputError(f"expected 'i j c', got {' '.join(fields)!r}")
        i, j, c = _ints(fields, "disequation")
        eqs.append((i - 1, j - 1, c))
    if len(eqs) != count:
        raise InputError(f"header announces {count} disequations, found {len(eqs)}")
    return DmdSystem(m, n, tuple(eqs))


def format_dmd(system: DmdSystem) -> str:
    lines = [f"p dmd {system.modulus} {system.num_vars} {len(system.disequations)}"]
    lines += [f"{i + 1} {j + 1} {c}" for i, j, c in system.disequations]
    return "\n".join(lines) + "\n"


def parse_naecnf(text: str) -> NaeSatInstance:
    """DIMACS-style: ``p naecnf <vars> <clauses>``, three literals per line, optional trailing 0."""
    lines = list(_content_lines(text))
    if not lines or lines[0][:2] != ["p", "naecnf"] or len(lines[0]) != 4:
        raise InputError("missing 'p naecnf <vars> <clauses>' header")
    n, count = _ints(lines[0][2:], "header")
    clauses = []
    for fields in lines[1:]:
        lits = _ints(fields, "clause")
        if lits and lits[-1] == 0:
            lits = lits[:-1]
        if len(lits) != 3:
            raise InputError(f"clause line {' '.join(fields)!r} must hold exactly 3 literals")
        clauses.append(tuple(lits))
    if len(clauses) != count:
        raise InputError(f"header announces {count} clauses, found {len(clauses)}")
    return NaeSatInstance(n, tuple(clauses))


def format_naecnf(inst: NaeSatInstance) -> str:
    lines = [f"p naecnf {inst.num_vars} {len(inst.clauses)}"]
    lines += [" ".join(str(l) for l in cl) + " 0" for cl in inst.clauses]
    return "\n".join(lines) + "\n"


def format_dimacs_graph(g: DmdGraph) -> str:
    """DIMACS edge list; the comment block maps 1-based vertices to (variable, residue)."""
    lines = ["c vertex <id> <variable> <residue>   (variables 1-based)"]
    for v in range(g.num_vertices):
        var, r = g.label(v)
        lines.append(f"c vertex {v + 1} {var + 1} {r}")
    edges = sorted(g.edges)
    lines.append(f"p edge {g.num_vertices} {len(edges)}")
    lines += [f"e {u + 1} {v + 1}" for u, v in edges]
    return "\n".join(lines) + "\n"


def format_sigma(sigma: Bijection) -> str:
    """One σ block per line as ``row:residue`` tokens (rows 1-based)."""
    return "".join(" ".join(f"{s + 1}:{v}" for s, v in block) + "\n" for block in sigma.blocks)

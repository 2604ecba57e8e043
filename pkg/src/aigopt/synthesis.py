"""Exact minimum AIG sizes by exhaustive enumeration.

Three routes live here:

* ``exists_circuit`` / ``opt_size`` — per-function iterative-deepening search
  over a canonical, symmetry-broken circuit space.  This is the authoritative
  backend.
* ``brute_oracle`` — an independent breadth-first sweep over reachable
  function sets for n <= 3, covering every function at once.  It shares no
  search code with the per-function route and is used to cross-check it.
* ``encode_cnf`` / ``decode_model`` — a DIMACS export/import path so an
  external SAT solver can answer the same per-(function, k) question.  No
  solver is embedded.

Enumeration canonical form: gates occupy nodes n+1..n+k in creation order,
fanin pairs are sorted, the last gate is the output root, and a gate that
does not use its immediate predecessor must carry a fanin signature
lexicographically >= the predecessor's.  Every circuit has at least one
topological order satisfying these constraints (place the smallest-signature
ready gate first), so exhausting the canonical space is exhaustive up to
isomorphism.
"""

from __future__ import annotations

import time
from bisect import bisect_left
from dataclasses import dataclass
from enum import Enum

from .aig import AigCircuit, AndGate, Literal
from .truthtable import TruthTable, var_table


class Backend(Enum):
    ENUMERATION = "enum"
    CNF_EXPORT = "cnf-export"
    # Provenance tag for records produced by the all-functions oracle; not a
    # valid SynthesisConfig backend.
    ORACLE = "oracle"


class Status(Enum):
    EXACT = "exact"
    UPPER_BOUND = "upper-bound"


@dataclass(frozen=True, slots=True)
class PruningFlags:
    """Search-space reductions; each preserves some minimum-size witness.

    ``no_duplicate_function`` additionally drops gates recomputing a function
    already available (up to complement) at an existing node, constants
    included.  With everything off the space is the full normalized circuit
    space, which is what the monotonicity property exercises.
    """

    no_constant_fanin: bool = True
    no_complement_pair: bool = True
    require_all_gates_used: bool = True
    signature_dedup: bool = True
    no_duplicate_function: bool = True


PRUNE_ALL = PruningFlags()
PRUNE_NONE = PruningFlags(False, False, False, False, False)


@dataclass(frozen=True, slots=True)
class SynthesisConfig:
    max_gates: int = 16
    backend: Backend = Backend.ENUMERATION
    time_budget: float | None = None
    pruning: PruningFlags = PRUNE_ALL

    def __post_init__(self) -> None:
        if self.max_gates < 0:
            raise ValueError("max_gates must be >= 0")
        if self.time_budget is not None and self.time_budget <= 0:
            raise ValueError("time_budget must be positive")


DEFAULT_CONFIG = SynthesisConfig()


@dataclass(frozen=True, slots=True)
class ExistsOutcome:
    """Result of one (function, gate count) existence query.

    Exactly one of three shapes: a witness circuit; proven infeasibility
    (the full pruned canonical space was exhausted); or a budget stop,
    which is never conflated with infeasibility.
    """

    witness: AigCircuit | None
    proven_infeasible: bool
    nodes_visited: int
    elapsed: float

    @property
    def budget_exhausted(self) -> bool:
        return self.witness is None and not self.proven_infeasible


@dataclass(frozen=True, slots=True)
class OptResult:
    tt: TruthTable
    size: int
    status: Status
    witness: AigCircuit
    exhausted_below: int
    backend: Backend
    elapsed: float


class SearchInconclusiveError(RuntimeError):
    """max_gates reached without a witness; carries the proven floor."""

    def __init__(self, tt: TruthTable, max_gates: int, exhausted_below: int):
        super().__init__(
            f"no circuit with <= {max_gates} gates found for {tt.hex()} "
            f"(infeasibility proven through k={exhausted_below})"
        )
        self.tt = tt
        self.max_gates = max_gates
        self.exhausted_below = exhausted_below


class _BudgetExceeded(Exception):
    pass


def _pack_sig(j0: int, c0: int, j1: int, c1: int) -> int:
    # Orders candidates lexicographically by (j0, c0, j1, c1).
    return (((j0 << 1) | c0) << 10) | ((j1 << 1) | c1)


def _candidate_pairs(max_node: int, flags: PruningFlags, mask: int):
    """All eligible fanin pairs over nodes 0..max_node, signature-sorted.

    Tuples are (sig, j0, xor0, j1, xor1) where xor = mask for a complemented
    edge, 0 otherwise.
    """
    lo = 1 if flags.no_constant_fanin else 0
    out = []
    for j0 in range(lo, max_node + 1):
        for j1 in range(j0, max_node + 1):
            if j0 == j1:
                if flags.no_complement_pair:
                    continue
                # Same node twice is only valid with differing complements.
                out.append((_pack_sig(j0, 0, j1, 1), j0, 0, j1, mask))
                continue
            for c0 in (0, 1):
                for c1 in (0, 1):
                    out.append(
                        (
                            _pack_sig(j0, c0, j1, c1),
                            j0,
                            mask if c0 else 0,
                            j1,
                            mask if c1 else 0,
                        )
                    )
    out.sort()
    return out


class _CandidateSpace:
    """Per-(n, k, flags) candidate tables for the enumeration search."""

    def __init__(self, n: int, k: int, flags: PruningFlags, mask: int):
        top = n + k - 1  # largest node usable as a fanin
        self.upto = {m: _candidate_pairs(m, flags, mask) for m in range(n, top + 1)}
        self.sigs = {m: [c[0] for c in cands] for m, cands in self.upto.items()}
        self.fresh = {
            m: [c for c in self.upto[m] if c[3] == m] for m in range(n, top + 1)
        }


def _trivial_witness(tt: TruthTable) -> AigCircuit | None:
    """Zero-gate circuit for constants and bare literals, else None."""
    if tt.bits == 0:
        return AigCircuit(tt.n, (), Literal(0, False))
    if tt.bits == tt.mask:
        return AigCircuit(tt.n, (), Literal(0, True))
    for i in range(tt.n):
        v = var_table(tt.n, i).bits
        if tt.bits == v:
            return AigCircuit(tt.n, (), Literal(i + 1, False))
        if tt.bits == v ^ tt.mask:
            return AigCircuit(tt.n, (), Literal(i + 1, True))
    return None


_MEMO_CAP = 1 << 20
_BUDGET_STRIDE = 8192


def exists_circuit(
    tt: TruthTable, k: int, cfg: SynthesisConfig = DEFAULT_CONFIG
) -> ExistsOutcome:
    """Search for a k-gate AIG computing ``tt`` in the canonical space."""
    if k < 0:
        raise ValueError("gate count must be >= 0")
    start = time.monotonic()
    if k == 0:
        witness = _trivial_witness(tt)
        return ExistsOutcome(witness, witness is None, 0, time.monotonic() - start)

    n = tt.n
    mask = tt.mask
    target = tt.bits
    target_c = target ^ mask
    flags = cfg.pruning
    space = _CandidateSpace(n, k, flags, mask)
    deadline = None if cfg.time_budget is None else start + cfg.time_budget

    values = [0] * (n + 1 + k)
    for i in range(n):
        values[i + 1] = var_table(n, i).bits
    seen = {0}
    for i in range(n):
        v = values[i + 1]
        seen.add(min(v, v ^ mask))

    chain: list[tuple[int, int, int, int, int]] = []
    memo: set = set()
    nodes_visited = 0

    dedup = flags.no_duplicate_function
    all_used = flags.require_all_gates_used
    use_memo = flags.signature_dedup

    def search(depth: int, prev_sig: int, no_fanout: int) -> AigCircuit | None:
        """``no_fanout`` is a bitmask over gate nodes not yet referenced."""
        nonlocal nodes_visited
        gate_idx = depth + 1  # 1-based gate being placed
        node = n + gate_idx
        max_fanin_node = node - 1
        last = gate_idx == k
        slack = 2 * (k - gate_idx)

        if depth == 0:
            a: list = space.upto[max_fanin_node]
            b: list = []
        else:
            older = space.upto[max_fanin_node - 1]
            cut = bisect_left(space.sigs[max_fanin_node - 1], prev_sig)
            a = space.fresh[max_fanin_node]
            b = older[cut:]

        prefix = tuple(values[n + 1 : node]) if use_memo else ()

        # Merge both sig-sorted streams so witnesses come in canonical order.
        ia = ib = 0
        la, lb = len(a), len(b)
        while ia < la or ib < lb:
            if ib >= lb or (ia < la and a[ia][0] <= b[ib][0]):
                cand = a[ia]
                ia += 1
            else:
                cand = b[ib]
                ib += 1
            sig, j0, x0, j1, x1 = cand

            nodes_visited += 1
            if deadline is not None and not nodes_visited & (_BUDGET_STRIDE - 1):
                if time.monotonic() > deadline:
                    raise _BudgetExceeded

            v = (values[j0] ^ x0) & (values[j1] ^ x1)
            if dedup:
                vn = v if v <= v ^ mask else v ^ mask
                if vn in seen:
                    continue

            if last:
                if v != target and v != target_c:
                    continue
                if all_used and no_fanout & ~((1 << j0) | (1 << j1)):
                    continue
                chain.append(cand)
                circuit = _chain_to_circuit(n, chain, complement=(v == target_c))
                chain.pop()
                return circuit

            if all_used:
                new_no_fanout = (no_fanout | (1 << node)) & ~((1 << j0) | (1 << j1))
                if new_no_fanout.bit_count() > slack:
                    continue
            else:
                new_no_fanout = 0

            if use_memo:
                key = (prefix, v, sig, new_no_fanout)
                if key in memo:
                    continue

            values[node] = v
            if dedup:
                seen.add(vn)
            chain.append(cand)

            found = search(depth + 1, sig, new_no_fanout)

            chain.pop()
            if dedup:
                seen.discard(vn)

            if found is not None:
                return found
            if use_memo:
                if len(memo) >= _MEMO_CAP:
                    memo.clear()
                memo.add(key)
        return None

    try:
        witness = search(0, -1, 0)
    except _BudgetExceeded:
        return ExistsOutcome(None, False, nodes_visited, time.monotonic() - start)
    return ExistsOutcome(
        witness, witness is None, nodes_visited, time.monotonic() - start
    )


def _chain_to_circuit(n: int, chain, complement: bool) -> AigCircuit:
    gates = tuple(
        AndGate(Literal(j0, bool(x0)), Literal(j1, bool(x1)))
        for _, j0, x0, j1, x1 in chain
    )
    return AigCircuit(n, gates, Literal(n + len(gates), complement))


def opt_size(tt: TruthTable, cfg: SynthesisConfig = DEFAULT_CONFIG) -> OptResult:
    """Minimum gate count by iterative deepening.

    Status is Exact only when every smaller gate count was fully exhausted;
    any budget interruption on the way up downgrades the result to an upper
    bound.  ``exhausted_below`` is the largest gate count proven infeasible.
    """
    if cfg.backend is not Backend.ENUMERATION:
        raise ValueError(
            "opt_size answers queries with the enumeration backend only; "
            "use encode_cnf/decode_model for the external-solver path"
        )
    start = time.monotonic()
    k0 = 0 if _trivial_witness(tt) is not None else 1
    # k=0 is decided exactly by the trivial-witness check either way.
    exhausted_below = -1 if k0 == 0 else 0
    contiguous = True
    for k in range(k0, cfg.max_gates + 1):
        outcome = exists_circuit(tt, k, cfg)
        if outcome.witness is not None:
            return OptResult(
                tt=tt,
                size=k,
                status=Status.EXACT if contiguous else Status.UPPER_BOUND,
                witness=outcome.witness,
                exhausted_below=exhausted_below,
                backend=cfg.backend,
                elapsed=time.monotonic() - start,
            )
        if outcome.proven_infeasible:
            if contiguous:
                exhausted_below = k
            else:
                exhausted_below = max(exhausted_below, k)
        else:
            contiguous = False
    raise SearchInconclusiveError(tt, cfg.max_gates, exhausted_below)


# ---------------------------------------------------------------------------
# Brute-force oracle: breadth-first over reachable function sets (n <= 3).
# ---------------------------------------------------------------------------


@dataclass(frozen=True, slots=True)
class OracleEntry:
    size: int
    witness: AigCircuit


def brute_oracle(n: int, max_levels: int = 16) -> dict[int, OracleEntry]:
    """Exact sizes for every n-variable function, n <= 3.

    Breadth-first over circuit prefixes: a state is the set of gate output
    functions built so far (inputs implicit), deduplicated as a set and with
    each function normalized up to complement.  Level k states are exactly
    the function sets realizable by k-gate circuits, so the first level at
    which a function appears is its exact optimum.  This is a genuine
    circuit-space search; function sizes are never summed.
    """
    if not 1 <= n <= 3:
        raise ValueError("brute oracle supports n <= 3 only")
    rows = 1 << n
    mask = (1 << rows) - 1
    inputs = [var_table(n, i).bits for i in range(n)]

    result: dict[int, OracleEntry] = {}

    def cover(bits: int, size: int, witness: AigCircuit) -> None:
        if bits not in result:
            result[bits] = OracleEntry(size, witness)

    cover(0, 0, AigCircuit(n, (), Literal(0, False)))
    cover(mask, 0, AigCircuit(n, (), Literal(0, True)))
    for i, v in enumerate(inputs):
        cover(v, 0, AigCircuit(n, (), Literal(i + 1, False)))
        cover(v ^ mask, 0, AigCircuit(n, (), Literal(i + 1, True)))

    total = 1 << rows
    base_patterns = frozenset({0} | {min(v, v ^ mask) for v in inputs})

    def chain_gates(chain: int, count: int) -> list[tuple[int, int, int, int]]:
        specs = []
        for g in range(count):
            spec = (chain >> (10 * g)) & 0x3FF
            j0 = spec & 0xF
            c0 = (spec >> 4) & 1
            j1 = (spec >> 5) & 0xF
            c1 = (spec >> 9) & 1
            specs.append((j0, c0, j1, c1))
        return specs

    def chain_witness(chain: int, count: int, complement: bool) -> AigCircuit:
        gates = tuple(
            AndGate.of(Literal(j0 + 1, bool(c0)), Literal(j1 + 1, bool(c1)))
            for j0, c0, j1, c1 in chain_gates(chain, count)
        )
        return AigCircuit(n, gates, Literal(n + count, complement))

    # State key: gate patterns normalized up to complement, sorted, packed
    # ``rows`` bits apiece.  Chain: per gate 10 bits (j0, c0, j1, c1) where
    # j indexes inputs then gates in creation order.
    frontier: dict[int, int] = {0: 0}
    level = 0
    uncovered = total - len(result)
    while uncovered and frontier and level < max_levels:
        level += 1
        next_frontier: dict[int, int] = {}
        for key, chain in frontier.items():
            specs = chain_gates(chain, level - 1)
            vals = list(inputs)
            for j0, c0, j1, c1 in specs:
                a = vals[j0] ^ (mask if c0 else 0)
                b = vals[j1] ^ (mask if c1 else 0)
                vals.append(a & b)
            patset = set(base_patterns)
            kpats = []
            kk = key
            for _ in range(level - 1):
                p = kk & mask
                patset.add(p)
                kpats.append(p)
                kk >>= rows
            m = len(vals)
            for j0 in range(m):
                va = vals[j0]
                for j1 in range(j0 + 1, m):
                    vb = vals[j1]
                    for c0, c1 in ((0, 0), (0, 1), (1, 0), (1, 1)):
                        v = (va ^ (mask if c0 else 0)) & (vb ^ (mask if c1 else 0))
                        vn = v if v <= v ^ mask else v ^ mask
                        if vn in patset:
                            continue
                        inserted = sorted(kpats + [vn])
                        newkey = 0
                        for p in reversed(inserted):
                            newkey = (newkey << rows) | p
                        if newkey in next_frontier:
                            continue
                        spec = j0 | (c0 << 4) | (j1 << 5) | (c1 << 9)
                        newchain = chain | (spec << (10 * (level - 1)))
                        next_frontier[newkey] = newchain
                        if v not in result:
                            witness = chain_witness(newchain, level, False)
                            cover(v, level, witness)
                            cover(v ^ mask, level, chain_witness(newchain, level, True))
                            uncovered -= 2
                            if uncovered == 0:
                                return result
        frontier = next_frontier
    if uncovered:
        raise RuntimeError(
            f"oracle did not cover all functions within {max_levels} levels"
        )
    return result


# ---------------------------------------------------------------------------
# CNF export / model import for external SAT solvers.
# ---------------------------------------------------------------------------


class _CnfLayout:
    """Deterministic variable numbering shared by encoder and decoder."""

    def __init__(self, n: int, k: int, flags: PruningFlags):
        if k < 1:
            raise ValueError("CNF encoding requires k >= 1")
        self.n = n
        self.k = k
        self.flags = flags
        self.rows = 1 << n
        mask = (1 << self.rows) - 1
        self.candidates = {
            i: _candidate_pairs(n + i - 1, flags, mask) for i in range(1, k + 1)
        }
        nv = 0
        self.sel_base = {}
        for i in range(1, k + 1):
            self.sel_base[i] = nv + 1
            nv += len(self.candidates[i])
        self.val_base = {}
        for i in range(1, k + 1):
            self.val_base[i] = nv + 1
            nv += self.rows
        self.out_var = nv + 1
        nv += 1
        self.aux_start = nv + 1
        self.num_vars = nv  # distinctness aux vars are appended by the encoder

    def sel_var(self, i: int, cand_index: int) -> int:
        return self.sel_base[i] + cand_index

    def val_var(self, i: int, row: int) -> int:
        return self.val_base[i] + row


def _fanin_row_literal(layout: _CnfLayout, node: int, comp: int, row: int):
    """Either a constant 0/1 or a signed CNF literal for node value at row."""
    n = layout.n
    if node == 0:
        return ("const", comp)
    if node <= n:
        bit = (row >> (node - 1)) & 1
        return ("const", bit ^ comp)
    gate = node - n
    var = layout.val_var(gate, row)
    return ("var", -var if comp else var)


def encode_cnf(
    tt: TruthTable, k: int, pruning: PruningFlags = PRUNE_ALL
) -> str:
    """DIMACS CNF satisfiable iff a k-gate AIG in the pruned canonical
    space computes ``tt``.

    The symmetry-breaking gate order used by the enumeration backend is not
    encoded because it never changes satisfiability.  The variable layout is
    documented in the comment header and is reproduced by ``decode_model``.
    """
    layout = _CnfLayout(tt.n, k, pruning)
    n, rows = tt.n, layout.rows
    clauses: list[tuple[int, ...]] = []
    num_vars = layout.num_vars

    def new_var() -> int:
        nonlocal num_vars
        num_vars += 1
        return num_vars

    for i in range(1, k + 1):
        cands = layout.candidates[i]
        sel = [layout.sel_var(i, t) for t in range(len(cands))]
        clauses.append(tuple(sel))
        for a in range(len(sel)):
            for b in range(a + 1, len(sel)):
                clauses.append((-sel[a], -sel[b]))
        for t, (_, j0, x0, j1, x1) in enumerate(cands):
            s = sel[t]
            c0 = 1 if x0 else 0
            c1 = 1 if x1 else 0
            for r in range(rows):
                v = layout.val_var(i, r)
                fa = _fanin_row_literal(layout, j0, c0, r)
                fb = _fanin_row_literal(layout, j1, c1, r)
                consts = [x[1] for x in (fa, fb) if x[0] == "const"]
                lits = [x[1] for x in (fa, fb) if x[0] == "var"]
                if 0 in consts:
                    clauses.append((-s, -v))
                elif not lits:
                    clauses.append((-s, v))  # both fanins constant 1
                elif len(lits) == 1:
                    clauses.append((-s, -lits[0], v))
                    clauses.append((-s, lits[0], -v))
                else:
                    la, lb = lits
                    clauses.append((-s, -la, -lb, v))
                    clauses.append((-s, la, -v))
                    clauses.append((-s, lb, -v))

    # Output: value of gate k, complemented when the polarity var is true.
    o = layout.out_var
    for r in range(rows):
        v = layout.val_var(k, r)
        if (tt.bits >> r) & 1:
            clauses.append((v, o))
            clauses.append((-v, -o))
        else:
            clauses.append((-v, o))
            clauses.append((v, -o))

    if pruning.require_all_gates_used:
        for g in range(1, k):
            node = n + g
            users = [
                layout.sel_var(i, t)
                for i in range(g + 1, k + 1)
                for t, (_, j0, _x0, j1, _x1) in enumerate(layout.candidates[i])
                if j0 == node or j1 == node
            ]
            clauses.append(tuple(users))

    if pruning.no_duplicate_function:
        fixed = [0] + [var_table(n, i).bits for i in range(n)]
        for i in range(1, k + 1):
            for pattern in fixed:
                for target in (pattern, pattern ^ tt.mask):
                    clause = []
                    for r in range(rows):
                        v = layout.val_var(i, r)
                        clause.append(v if not (target >> r) & 1 else -v)
                    clauses.append(tuple(clause))
        for i in range(1, k + 1):
            for j in range(i + 1, k + 1):
                # differ somewhere, and differ from the complement somewhere
                for want_equal in (False, True):
                    marks = []
                    for r in range(rows):
                        vi = layout.val_var(i, r)
                        vj = layout.val_var(j, r)
                        d = new_var()
                        if want_equal:
                            clauses.append((-d, vi, -vj))
                            clauses.append((-d, -vi, vj))
                        else:
                            clauses.append((-d, vi, vj))
                            clauses.append((-d, -vi, -vj))
                        marks.append(d)
                    clauses.append(tuple(marks))

    header = [
        "c aigopt exact-synthesis query",
        f"c n={n} k={k} tt={tt.hex()}",
        "c rows r=0..2^n-1; row r assigns x_i = (r >> i) & 1",
        "c gate i (1..k) sits at node n+i; fanin candidates are (j0,c0,j1,c1)",
        "c pairs over nodes (0=const,1..n=inputs,gates), sorted by (j0,c0,j1,c1)",
        f"c eligibility flags: no_constant_fanin={pruning.no_constant_fanin} "
        f"no_complement_pair={pruning.no_complement_pair}",
        f"c constraints: require_all_gates_used={pruning.require_all_gates_used} "
        f"no_duplicate_function={pruning.no_duplicate_function}",
    ]
    for i in range(1, k + 1):
        base = layout.sel_base[i]
        count = len(layout.candidates[i])
        header.append(
            f"c gate {i}: selection vars {base}..{base + count - 1} "
            f"({count} candidates), value vars "
            f"{layout.val_base[i]}..{layout.val_base[i] + rows - 1}"
        )
    header.append(f"c output polarity var {layout.out_var} (true = complemented)")
    if num_vars >= layout.aux_start:
        header.append(f"c distinctness aux vars {layout.aux_start}..{num_vars}")

    lines = header + [f"p cnf {num_vars} {len(clauses)}"]
    lines.extend(" ".join(str(x) for x in clause) + " 0" for clause in clauses)
    return "\n".join(lines) + "\n"


def decode_model(
    model_text: str, k: int, n: int, pruning: PruningFlags = PRUNE_ALL
) -> AigCircuit | None:
    """Rebuild the circuit from a solver model for an ``encode_cnf`` query.

    Accepts plain signed-integer assignments terminated by 0, optional
    "v"/"s" DIMACS output prefixes, and an UNSAT token (returns None).
    """
    tokens: list[str] = []
    for line in model_text.splitlines():
        stripped = line.strip()
        if not stripped or stripped.startswith("c"):
            continue
        parts = stripped.split()
        if parts[0] in ("v", "s"):
            parts = parts[1:]
        tokens.extend(parts)
    norm = {t.upper().rstrip(".") for t in tokens}
    if "UNSAT" in norm or "UNSATISFIABLE" in norm:
        return None
    assignment: set[int] = set()
    for t in tokens:
        if t.upper() in ("SAT", "SATISFIABLE"):
            continue
        try:
            value = int(t)
        except ValueError:
            raise ValueError(f"unexpected token {t!r} in model") from None
        if value == 0:
            continue
        assignment.add(value)

    layout = _CnfLayout(n, k, pruning)
    gates = []
    for i in range(1, k + 1):
        chosen = [
            t
            for t in range(len(layout.candidates[i]))
            if layout.sel_var(i, t) in assignment
        ]
        if len(chosen) != 1:
            raise ValueError(
                f"model inconsistent with layout: gate {i} has "
                f"{len(chosen)} selected candidates"
            )
        _, j0, x0, j1, x1 = layout.candidates[i][chosen[0]]
        gates.append(AndGate(Literal(j0, bool(x0)), Literal(j1, bool(x1))))
    complement = layout.out_var in assignment
    return AigCircuit(n, tuple(gates), Literal(n + k, complement))

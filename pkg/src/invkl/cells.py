"""Two-sided cells and the compatibility between h- and f-constants.

The two-sided preorder is generated one step at a time: y is reachable from
w when cdot_y appears in cdot_s cdot_w or cdot_w cdot_s for some generator.
For an ascent these supports are {cdot_sw} plus the mu-correction terms, so
the reachability graph comes straight out of the classical mu table.  Cells
are the strongly connected components; the component order is the quotient
preorder.

``check_hf_relation`` expands cdot_z cdot_w cdot_{z^-1} in the cdot basis
(coefficients h) and c_z A_w in the canonical involution basis
(coefficients f) and enforces, coefficient by coefficient, |f_n| <= h_n and
f_n = h_n (mod 2); in particular f != 0 forces h != 0.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import RelationViolated
from .laurent import ZERO, v_pow

__all__ = ["CellPartition", "compute_cells", "involutions_per_cell", "check_hf_relation"]

DEFAULT_CELL_CAP = 400


@dataclass(frozen=True)
class CellPartition:
    """Two-sided cells (id tuples) plus the partial order on cell indices."""

    cells: tuple
    preorder: frozenset  # (i, j) present iff cell i is below cell j


def _mu_edges(kl, wid):
    """One-step two-sided reachability: targets of cdot_s cdot_w and cdot_w cdot_s."""
    sys = kl.system
    out = set()
    lw = sys.length_of(wid)
    below = [
        el.id
        for el in sys.enumerate_up_to_length(max(lw - 1, 0))
        if sys.bruhat_leq_ids(el.id, wid)
    ]
    for s in range(sys.rank):
        if not sys.is_left_descent(s, wid):
            out.add(sys.lmul(s, wid))
            for yid in below:
                if sys.is_left_descent(s, yid) and kl.mu_ids(yid, wid):
                    out.add(yid)
        if not sys.is_right_descent(wid, s):
            out.add(sys.rmul(wid, s))
            for yid in below:
                if sys.is_right_descent(yid, s) and kl.mu_ids(yid, wid):
                    out.add(yid)
    out.discard(wid)
    return out


def compute_cells(kl, cap=DEFAULT_CELL_CAP):
    """Partition the group into two-sided cells (strongly connected parts)."""
    sys = kl.system
    ids = sys.all_ids()
    if len(ids) > cap:
        raise ValueError(
            f"cell computation is gated at {cap} elements; "
            f"this group has {len(ids)}"
        )
    graph = {wid: sorted(_mu_edges(kl, wid)) for wid in ids}

    # iterative Tarjan strongly-connected components
    index = {}
    low = {}
    on_stack = set()
    stack = []
    counter = [0]
    components = []

    for root in ids:
        if root in index:
            continue
        work = [(root, iter(graph[root]))]
        index[root] = low[root] = counter[0]
        counter[0] += 1
        stack.append(root)
        on_stack.add(root)
        while work:
            node, it = work[-1]
            advanced = False
            for nxt in it:
                if nxt not in index:
                    index[nxt] = low[nxt] = counter[0]
                    counter[0] += 1
                    stack.append(nxt)
                    on_stack.add(nxt)
                    work.append((nxt, iter(graph[nxt])))
                    advanced = True
                    break
                if nxt in on_stack:
                    low[node] = min(low[node], index[nxt])
            if advanced:
                continue
            work.pop()
            if work:
                parent = work[-1][0]
                low[parent] = min(low[parent], low[node])
            if low[node] == index[node]:
                comp = []
                while True:
                    x = stack.pop()
                    on_stack.discard(x)
                    comp.append(x)
                    if x == node:
                        break
                components.append(comp)

    def sort_key(comp):
        rep = min(comp, key=lambda w: (sys.length_of(w), sys.word_of(w)))
        return (sys.length_of(rep), sys.word_of(rep))

    cells = [
        tuple(sorted(c, key=lambda w: (sys.length_of(w), sys.word_of(w))))
        for c in components
    ]
    cells.sort(key=sort_key)
    cell_of = {}
    for i, cell in enumerate(cells):
        for wid in cell:
            cell_of[wid] = i

    # reachability between cells gives the quotient partial order
    adj = {i: set() for i in range(len(cells))}
    for wid, targets in graph.items():
        for t in targets:
            if cell_of[t] != cell_of[wid]:
                adj[cell_of[wid]].add(cell_of[t])
    reach = {}
    for i in range(len(cells)):
        seen = {i}
        frontier = [i]
        while frontier:
            nxt = []
            for j in frontier:
                for k in adj[j]:
                    if k not in seen:
                        seen.add(k)
                        nxt.append(k)
            frontier = nxt
        reach[i] = seen
    preorder = frozenset(
        (j, i) for i in range(len(cells)) for j in reach[i]
    )
    return CellPartition(cells=tuple(cells), preorder=preorder)


def involutions_per_cell(partition, module):
    """Number of involutions inside each cell, aligned with partition.cells."""
    members = set(module.involution_ids)
    return [sum(1 for w in cell if w in members) for cell in partition.cells]


def check_hf_relation(z, w, kl, canonical):
    """Compare h- and f-constants for one pair; raise RelationViolated on failure.

    Returns {w': (h, f)} over the union of both supports restricted to
    involutions; the h-expansion may also touch non-involutions, which have
    no f side and are not constrained.
    """
    sys = kl.system
    module = canonical.module
    zid, wid = sys._id_of(z), sys._id_of(w)
    h_exp = kl.h_constants(zid, wid)
    cz = kl.cprime(zid)
    acted = None
    for yid, coeff in cz.items():
        part = canonical.module.tw_action(yid, canonical.a_vector(wid)).scaled(coeff)
        acted = part if acted is None else acted + part
    f_exp = canonical.expand_in_A(acted)

    involutions = set(module.involution_ids)
    report = {}
    for w2 in sorted(set(h_exp) | set(f_exp)):
        h = h_exp.get(w2, ZERO)
        f = f_exp.get(w2, ZERO)
        if w2 not in involutions:
            if not f.is_zero:
                raise RelationViolated(
                    "f-constant supported outside the involutions at "
                    f"{sys.word_of(w2)}"
                )
            continue
        report[w2] = (h, f)
        if not f.is_zero and h.is_zero:
            raise RelationViolated(
                "nonzero f-constant with vanishing h-constant at "
                f"z={sys.word_of(zid)}, w={sys.word_of(wid)}, w'={sys.word_of(w2)}"
            )
        exps = {e for e, _ in h.terms()} | {e for e, _ in f.terms()}
        for e in exps:
            bn, fn = h.coeff(e), f.coeff(e)
            if abs(fn) > bn or (bn - fn) % 2:
                raise RelationViolated(
                    "h/f coefficient domination or parity fails at "
                    f"z={sys.word_of(zid)}, w={sys.word_of(wid)}, "
                    f"w'={sys.word_of(w2)}, v-exponent {e}: h={bn}, f={fn}"
                )
    return report

"""Finite Coxeter and Weyl groups with interned elements.

Group elements are identified by dense integer ids (0 is the identity).
The canonical form of an element is its ShortLex-minimal reduced word,
obtained by repeatedly splitting off the smallest left descent.  Interned
handles make memo tables over pairs of elements cheap.

Two element engines back the interning:

* crystallographic types act on the root lattice through integer matrices
  built from a Cartan matrix; descents are read off root signs, so the
  element universe is explored lazily;
* everything else (``I2(m)`` with m not in {2,3,4,6}, raw matrices) uses the
  standard geometric representation over the real cyclotomic field
  Q(2cos(pi/N)) with exact rational coordinates, and the whole group is
  enumerated breadth-first at construction time (capped).
"""

from __future__ import annotations

import re
import threading
from dataclasses import dataclass
from fractions import Fraction
from typing import NamedTuple

__all__ = [
    "CoxeterSystem",
    "GroupElement",
    "ReflectionRep",
    "build_system",
]

_CRYSTAL_WEIGHT = {2: 0, 3: 1, 4: 2, 6: 3}  # m(s,t) -> c(s,t)*c(t,s)


class GroupElement(NamedTuple):
    """An interned element: stable id, canonical reduced word, length."""

    id: int
    word: tuple
    length: int


@dataclass(frozen=True)
class ReflectionRep:
    """Generator matrices of the reflection representation (exact integers)."""

    matrices: dict


# ---------------------------------------------------------------------------
# small exact linear algebra


def _matmul(a, b, n):
    bt = tuple(zip(*b))
    return tuple(
        tuple(sum(ra[k] * cb[k] for k in range(n)) for cb in bt) for ra in a
    )


def _identity_matrix(n, one, zero):
    return tuple(
        tuple(one if i == j else zero for j in range(n)) for i in range(n)
    )


def _rational_rank(rows):
    """Rank of an integer matrix via fraction-free style elimination."""
    mat = [[Fraction(x) for x in row] for row in rows]
    rank = 0
    cols = len(mat[0]) if mat else 0
    for col in range(cols):
        pivot = None
        for r in range(rank, len(mat)):
            if mat[r][col]:
                pivot = r
                break
        if pivot is None:
            continue
        mat[rank], mat[pivot] = mat[pivot], mat[rank]
        pv = mat[rank][col]
        for r in range(rank + 1, len(mat)):
            f = mat[r][col] / pv
            if f:
                mat[r] = [a - f * b for a, b in zip(mat[r], mat[rank])]
        rank += 1
    return rank


# ---------------------------------------------------------------------------
# the real cyclotomic field Q(2cos(pi/N)), used only by the generic engine


def _int_poly_divmod(num, den):
    num = list(num)
    d = len(den) - 1
    q = [0] * (len(num) - d)
    for k in range(len(num) - d - 1, -1, -1):
        c = num[k + d]
        assert c % den[-1] == 0
        q[k] = c // den[-1]
        if q[k]:
            for j in range(d + 1):
                num[k + j] -= q[k] * den[j]
    assert not any(num), "non-exact cyclotomic division"
    return q


def _cyclotomic(n, cache={1: [-1, 1]}):
    """Coefficients (ascending) of the n-th cyclotomic polynomial."""
    if n in cache:
        return cache[n]
    num = [0] * (n + 1)
    num[0], num[n] = -1, 1
    for d in range(1, n):
        if n % d == 0:
            num = _int_poly_divmod(num, _cyclotomic(d))
    cache[n] = num
    return num


class _CycloField:
    """Arithmetic in Q(c) where c = 2cos(pi/N), as vectors over a power basis."""

    def __init__(self, n_denom):
        self.n_denom = n_denom
        phi = _cyclotomic(2 * n_denom)
        d = (len(phi) - 1) // 2
        # minimal polynomial of c from the palindromic cyclotomic polynomial:
        # Phi_{2N}(x)/x^d = phi[d] + sum_j phi[d+j] (x^j + x^-j)
        # and x^j + x^-j = p_j(c) with p_0=2, p_1=c, p_{j+1}=c*p_j - p_{j-1}.
        p_prev, p_cur = [2], [0, 1]
        psi = [phi[d]]
        psi = self._poly_add(psi, [phi[d + 1] * c for c in p_cur])
        for j in range(2, d + 1):
            p_next = self._poly_sub([0] + p_cur, p_prev)
            p_prev, p_cur = p_cur, p_next
            psi = self._poly_add(psi, [phi[d + j] * c for c in p_cur])
        assert len(psi) == d + 1 and psi[-1] == 1
        self.degree = d
        self.minpoly = tuple(psi)
        self.zero = (Fraction(0),) * d
        self.one = tuple(
            Fraction(1 if i == 0 else 0) for i in range(d)
        )
        # reductions of c^k for k = d .. 2d-2
        reductions = []
        cur = [Fraction(-a) for a in psi[:-1]]
        reductions.append(tuple(cur))
        for _ in range(d - 2):
            shifted = [Fraction(0)] + cur
            top = shifted[d]
            cur = shifted[:d]
            if top:
                cur = [x + top * r for x, r in zip(cur, reductions[0])]
            reductions.append(tuple(cur))
        self._reductions = reductions

    @staticmethod
    def _poly_add(a, b):
        n = max(len(a), len(b))
        return [
            (a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0)
            for i in range(n)
        ]

    @staticmethod
    def _poly_sub(a, b):
        n = max(len(a), len(b))
        return [
            (a[i] if i < len(a) else 0) - (b[i] if i < len(b) else 0)
            for i in range(n)
        ]

    def add(self, a, b):
        return tuple(x + y for x, y in zip(a, b))

    def mul(self, a, b):
        d = self.degree
        conv = [Fraction(0)] * (2 * d - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    if y:
                        conv[i + j] += x * y
        out = conv[:d]
        for k in range(d, 2 * d - 1):
            c = conv[k]
            if c:
                red = self._reductions[k - d]
                out = [x + c * r for x, r in zip(out, red)]
        return tuple(out)

    def scale(self, a, q):
        return tuple(x * q for x in a)

    def two_cos_pi_over(self, m):
        """The element 2cos(pi/m), for m dividing N (or m == 2 -> 0)."""
        if m == 2:
            return self.zero
        k, rem = divmod(self.n_denom, m)
        assert rem == 0, "Coxeter entry does not divide the field conductor"
        # p_k(c) = 2cos(k*pi/N)
        p_prev = tuple(
            Fraction(2 if i == 0 else 0) for i in range(self.degree)
        )
        if k == 0:
            return p_prev
        p_cur = tuple(
            Fraction(1 if i == 1 else 0) for i in range(self.degree)
        )
        if self.degree == 1:
            # degree-1 field: c itself is rational, encoded in minpoly
            p_cur = (Fraction(-self.minpoly[0], self.minpoly[1]),)
        c_elt = p_cur
        for _ in range(k - 1):
            p_next = tuple(
                x - y for x, y in zip(self.mul(c_elt, p_cur), p_prev)
            )
            p_prev, p_cur = p_cur, p_next
        return p_cur


# ---------------------------------------------------------------------------
# element engines


class _CartanEngine:
    """Integer matrices on the root lattice; descents from root signs."""

    has_descent_test = True

    def __init__(self, cartan):
        self.rank = n = len(cartan)
        self.cartan = cartan
        mats = []
        for s in range(n):
            rows = [[1 if i == j else 0 for j in range(n)] for i in range(n)]
            for j in range(n):
                rows[s][j] = (1 if j == s else 0) - cartan[s][j]
            mats.append(tuple(tuple(r) for r in rows))
        self.gen_mats = mats
        ident = _identity_matrix(n, 1, 0)
        self.identity = (ident, ident)

    def key(self, payload):
        return payload[0]

    def lmul(self, s, payload):
        m, minv = payload
        g = self.gen_mats[s]
        return (_matmul(g, m, self.rank), _matmul(minv, g, self.rank))

    def rmul(self, payload, s):
        m, minv = payload
        g = self.gen_mats[s]
        return (_matmul(m, g, self.rank), _matmul(g, minv, self.rank))

    def left_descent(self, s, payload):
        # l(sw) < l(w)  iff  w^-1(alpha_s) is a negative root
        col = [row[s] for row in payload[1]]
        return all(x <= 0 for x in col)

    def right_descent(self, payload, s):
        col = [row[s] for row in payload[0]]
        return all(x <= 0 for x in col)


class _FieldEngine:
    """Geometric representation over Q(2cos(pi/N)); no descent oracle."""

    has_descent_test = False

    def __init__(self, cox_matrix):
        self.rank = n = len(cox_matrix)
        entries = sorted({m for row in cox_matrix for m in row if m > 2})
        n_denom = 1
        for m in entries:
            g = n_denom
            while g % m:
                g += n_denom
            n_denom = g
        self.field = field = _CycloField(max(n_denom, 3))
        mats = []
        for s in range(n):
            rows = [
                [field.one if i == j else field.zero for j in range(n)]
                for i in range(n)
            ]
            for j in range(n):
                if j == s:
                    rows[s][j] = field.scale(field.one, Fraction(-1))
                else:
                    # s(alpha_j) = alpha_j + 2cos(pi/m_sj) alpha_s
                    rows[s][j] = field.two_cos_pi_over(cox_matrix[s][j])
            mats.append(tuple(tuple(r) for r in rows))
        self.gen_mats = mats
        self.identity = _identity_matrix(n, field.one, field.zero)

    def key(self, payload):
        return payload

    def _mul(self, a, b):
        field, n = self.field, self.rank
        bt = tuple(zip(*b))
        out = []
        for ra in a:
            row = []
            for cb in bt:
                acc = field.zero
                for k in range(n):
                    acc = field.add(acc, field.mul(ra[k], cb[k]))
                row.append(acc)
            out.append(tuple(row))
        return tuple(out)

    def lmul(self, s, payload):
        return self._mul(self.gen_mats[s], payload)

    def rmul(self, payload, s):
        return self._mul(payload, self.gen_mats[s])


# ---------------------------------------------------------------------------
# type descriptors


def _chain_cartan(n):
    c = [[2 if i == j else 0 for j in range(n)] for i in range(n)]
    for i in range(n - 1):
        c[i][i + 1] = c[i + 1][i] = -1
    return c


def _label_cartan(letter, n):
    if letter == "A":
        if n < 1:
            raise ValueError("type A requires rank >= 1")
        return _chain_cartan(n)
    if letter in ("B", "C"):
        if n < 2:
            raise ValueError(f"type {letter} requires rank >= 2")
        c = _chain_cartan(n)
        if letter == "B":
            c[n - 2][n - 1] = -2
        else:
            c[n - 1][n - 2] = -2
        return c
    if letter == "D":
        if n < 2:
            raise ValueError("type D requires rank >= 2")
        c = [[2 if i == j else 0 for j in range(n)] for i in range(n)]
        for i in range(n - 2):
            c[i][i + 1] = c[i + 1][i] = -1
        if n >= 3:
            c[n - 3][n - 1] = c[n - 1][n - 3] = -1
        return c
    if letter == "E":
        if n not in (6, 7, 8):
            raise ValueError("type E exists for ranks 6, 7, 8 only")
        c = [[2 if i == j else 0 for j in range(n)] for i in range(n)]
        edges = [(0, 2), (2, 3), (3, 4), (4, 5), (1, 3)]
        edges += [(5, 6)] if n >= 7 else []
        edges += [(6, 7)] if n == 8 else []
        for i, j in edges:
            c[i][j] = c[j][i] = -1
        return c
    if letter == "F":
        if n != 4:
            raise ValueError("type F exists for rank 4 only")
        c = _chain_cartan(4)
        c[1][2] = -2
        c[2][1] = -1
        return c
    if letter == "G":
        if n != 2:
            raise ValueError("type G exists for rank 2 only")
        return [[2, -1], [-3, 2]]
    raise ValueError(f"unknown type letter {letter!r}")


def _dihedral_coxeter(m):
    return [[1, m], [m, 1]]


def _cartan_to_coxeter(cartan):
    n = len(cartan)
    weight_to_m = {0: 2, 1: 3, 2: 4, 3: 6}
    cox = [[1 if i == j else 2 for j in range(n)] for i in range(n)]
    for i in range(n):
        for j in range(n):
            if i != j:
                cox[i][j] = weight_to_m[cartan[i][j] * cartan[j][i]]
    return cox


def _coxeter_to_cartan(cox):
    """An integer Cartan realization of a crystallographic Coxeter matrix."""
    n = len(cox)
    c = [[2 if i == j else 0 for j in range(n)] for i in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            w = _CRYSTAL_WEIGHT[cox[i][j]]
            if w:
                c[i][j] = -1
                c[j][i] = -w
    return c


def _parse_label(token):
    token = token.strip()
    m = re.fullmatch(r"I2\((\d+)\)", token)
    if m:
        order = int(m.group(1))
        if order < 3:
            raise ValueError("I2(m) requires m >= 3")
        return ("I", order)
    m = re.fullmatch(r"([A-G])(\d+)", token)
    if m:
        return (m.group(1), int(m.group(2)))
    raise ValueError(f"unknown type descriptor {token!r}")


def _block_diag(blocks, fill):
    n = sum(len(b) for b in blocks)
    out = [[fill] * n for _ in range(n)]
    off = 0
    for b in blocks:
        k = len(b)
        for i in range(k):
            for j in range(k):
                out[off + i][off + j] = b[i][j]
        off += k
    return out


def _parse_delta(delta, rank, cox):
    if delta is None:
        return tuple(range(rank))
    if isinstance(delta, str):
        body = delta.split("=", 1)[1] if "=" in delta else delta
        delta = [int(tok) for tok in body.split(",") if tok.strip() != ""]
    delta = tuple(int(x) for x in delta)
    if sorted(delta) != list(range(rank)):
        raise ValueError("delta is not a permutation of the generators")
    if any(delta[delta[i]] != i for i in range(rank)):
        raise ValueError("delta is not an involution")
    for i in range(rank):
        for j in range(rank):
            if cox[delta[i]][delta[j]] != cox[i][j]:
                raise ValueError("delta does not preserve the Coxeter matrix")
    return delta


def build_system(spec, delta=None, *, finite=None, max_elements=10 ** 6):
    """Build a :class:`CoxeterSystem` from a type label or a Coxeter matrix.

    ``spec`` is either a descriptor like ``"A3"``, ``"B2"``, ``"I2(5)"``,
    ``"A2×A1"`` (separators ``×``, ``x`` or ``*``), or an explicit symmetric
    Coxeter matrix.  Finiteness of labelled types follows from the
    classification; a raw matrix must be declared finite by the caller with
    ``finite=True`` (enumeration still aborts past ``max_elements``).
    """
    if isinstance(spec, str):
        tokens = [t for t in re.split(r"[×xX*]", spec) if t.strip()]
        if not tokens:
            raise ValueError("empty type descriptor")
        labels = [_parse_label(t) for t in tokens]
        crystal_parts = all(
            letter != "I" or order in (3, 4, 6) for letter, order in labels
        )
        if crystal_parts:
            blocks = []
            for letter, n in labels:
                if letter == "I":
                    blocks.append(
                        _coxeter_to_cartan(_dihedral_coxeter(n))
                    )
                else:
                    blocks.append(_label_cartan(letter, n))
            cartan = _block_diag(blocks, 0)
            cox = _cartan_to_coxeter(cartan)
        else:
            blocks = []
            for letter, n in labels:
                if letter == "I":
                    blocks.append(_dihedral_coxeter(n))
                else:
                    blocks.append(
                        _cartan_to_coxeter(_label_cartan(letter, n))
                    )
            cox = _block_diag(blocks, 2)
            for i in range(len(cox)):
                cox[i][i] = 1
            cartan = None
        label = "×".join(t.strip() for t in tokens)
        return CoxeterSystem(
            cox,
            cartan=cartan,
            type_label=label,
            delta=delta,
            known_finite=True,
            max_elements=max_elements,
        )

    cox = [list(map(int, row)) for row in spec]
    n = len(cox)
    if any(len(row) != n for row in cox):
        raise ValueError("Coxeter matrix is not square")
    for i in range(n):
        if cox[i][i] != 1:
            raise ValueError("Coxeter matrix diagonal must be 1")
        for j in range(n):
            if cox[i][j] != cox[j][i]:
                raise ValueError("Coxeter matrix is not symmetric")
            if i != j and cox[i][j] < 2:
                raise ValueError("off-diagonal Coxeter entries must be >= 2")
    if finite is not True:
        raise ValueError(
            "raw Coxeter matrices must be declared finite (pass finite=True)"
        )
    crystallographic = all(
        cox[i][j] in (2, 3, 4, 6)
        for i in range(n)
        for j in range(n)
        if i != j
    )
    cartan = _coxeter_to_cartan(cox) if crystallographic else None
    return CoxeterSystem(
        cox,
        cartan=cartan,
        type_label=None,
        delta=delta,
        known_finite=True,
        max_elements=max_elements,
    )


# ---------------------------------------------------------------------------


class CoxeterSystem:
    """A Coxeter presentation plus the interned element universe.

    The intern table supports concurrent reads; insertion is serialized by a
    lock, and every derived record is written exactly once, so query results
    are independent of thread schedule.
    """

    def __init__(
        self,
        coxeter_matrix,
        *,
        cartan=None,
        type_label=None,
        delta=None,
        known_finite=True,
        max_elements=10 ** 6,
    ):
        self.coxeter_matrix = tuple(tuple(row) for row in coxeter_matrix)
        self.rank = len(self.coxeter_matrix)
        self.type_label = type_label
        self.crystallographic = cartan is not None
        self.cartan = tuple(tuple(row) for row in cartan) if cartan else None
        self.delta = _parse_delta(delta, self.rank, self.coxeter_matrix)
        self.known_finite = known_finite
        self.max_elements = max_elements

        if self.crystallographic:
            self._engine = _CartanEngine(self.cartan)
        else:
            self._engine = _FieldEngine(self.coxeter_matrix)

        self._lock = threading.Lock()
        self._index = {}
        self._payloads = []
        self._lengths = []
        self._words = []
        self._lmul = []
        self._rmul = []
        self._inv = []
        self._delta_img = []
        self._layers = None  # list of id lists, grouped by length
        self._complete = False
        self._bruhat_memo = {}
        self._tw_inv = None
        self._classes = None

        self._register(self._engine.identity, 0, ())
        if not self._engine.has_descent_test:
            self._eager_enumerate()

    # -- interning ----------------------------------------------------------

    def _register(self, payload, length, word=None):
        key = self._engine.key(payload)
        wid = self._index.get(key)
        if wid is not None:
            return wid
        with self._lock:
            wid = self._index.get(key)
            if wid is not None:
                return wid
            wid = len(self._payloads)
            self._payloads.append(payload)
            self._lengths.append(length)
            self._words.append(word)
            self._lmul.append([None] * self.rank)
            self._rmul.append([None] * self.rank)
            self._inv.append(None)
            self._delta_img.append(None)
            self._index[key] = wid
        return wid

    def _eager_enumerate(self):
        layers = [[0]]
        total = 1
        while layers[-1]:
            frontier = layers[-1]
            depth = len(layers) - 1
            candidates = {}
            for wid in frontier:
                pw = self._payloads[wid]
                word_w = self._words[wid]
                for s in range(self.rank):
                    payload = self._engine.lmul(s, pw)
                    key = self._engine.key(payload)
                    if key in self._index:
                        continue
                    cand = (s,) + word_w
                    prev = candidates.get(key)
                    if prev is None or cand < prev[1]:
                        candidates[key] = (payload, cand)
            if not candidates:
                break
            total += len(candidates)
            if total > self.max_elements:
                raise ValueError(
                    f"group exceeds the element cap ({self.max_elements}); "
                    "matrix was declared finite but enumeration aborted"
                )
            new_ids = [
                self._register(payload, depth + 1, word)
                for payload, word in sorted(
                    candidates.values(), key=lambda t: t[1]
                )
            ]
            layers.append(new_ids)
        self._layers = layers
        self._complete = True

    # -- element arithmetic ---------------------------------------------------

    def lmul(self, s, wid):
        cached = self._lmul[wid][s]
        if cached is not None:
            return cached
        payload = self._engine.lmul(s, self._payloads[wid])
        xid = self._index.get(self._engine.key(payload))
        if xid is None:
            down = self._engine.left_descent(s, self._payloads[wid])
            xid = self._register(
                payload, self._lengths[wid] + (-1 if down else 1)
            )
        self._lmul[wid][s] = xid
        self._lmul[xid][s] = wid
        return xid

    def rmul(self, wid, s):
        cached = self._rmul[wid][s]
        if cached is not None:
            return cached
        payload = self._engine.rmul(self._payloads[wid], s)
        xid = self._index.get(self._engine.key(payload))
        if xid is None:
            down = self._engine.right_descent(self._payloads[wid], s)
            xid = self._register(
                payload, self._lengths[wid] + (-1 if down else 1)
            )
        self._rmul[wid][s] = xid
        self._rmul[xid][s] = wid
        return xid

    def length_of(self, wid):
        return self._lengths[wid]

    def is_left_descent(self, s, wid):
        if self._engine.has_descent_test:
            return self._engine.left_descent(s, self._payloads[wid])
        return self._lengths[self.lmul(s, wid)] < self._lengths[wid]

    def is_right_descent(self, wid, s):
        if self._engine.has_descent_test:
            return self._engine.right_descent(self._payloads[wid], s)
        return self._lengths[self.rmul(wid, s)] < self._lengths[wid]

    def left_descents(self, wid):
        return tuple(
            s for s in range(self.rank) if self.is_left_descent(s, wid)
        )

    def right_descents(self, wid):
        return tuple(
            s for s in range(self.rank) if self.is_right_descent(wid, s)
        )

    def word_of(self, wid):
        word = self._words[wid]
        if word is not None:
            return word
        # straighten: peel off the smallest left descent until a known word
        stack = []
        cur = wid
        while self._words[cur] is None:
            s = min(
                s
                for s in range(self.rank)
                if self.is_left_descent(s, cur)
            )
            stack.append((cur, s))
            cur = self.lmul(s, cur)
        word = self._words[cur]
        for xid, s in reversed(stack):
            word = (s,) + word
            self._words[xid] = word
        return self._words[wid]

    def inverse_id(self, wid):
        cached = self._inv[wid]
        if cached is not None:
            return cached
        xid = 0
        for s in reversed(self.word_of(wid)):
            xid = self.rmul(xid, s)
        self._inv[wid] = xid
        self._inv[xid] = wid
        return xid

    def delta_gen(self, s):
        return self.delta[s]

    def delta_id(self, wid):
        cached = self._delta_img[wid]
        if cached is not None:
            return cached
        xid = 0
        for s in self.word_of(wid):
            xid = self.rmul(xid, self.delta[s])
        self._delta_img[wid] = xid
        return xid

    @property
    def is_twisted(self):
        return self.delta != tuple(range(self.rank))

    def element_id_from_word(self, word):
        xid = 0
        for s in word:
            if not 0 <= int(s) < self.rank:
                raise ValueError(f"generator index {s} out of range")
            xid = self.rmul(xid, int(s))
        return xid

    def conjugate_by_gen(self, s, wid):
        return self.lmul(s, self.rmul(wid, s))

    def conjugate(self, xid, wid):
        """x w x^-1 computed along the reduced word of x."""
        for s in reversed(self.word_of(xid)):
            wid = self.conjugate_by_gen(s, wid)
        return wid

    # -- Bruhat order ---------------------------------------------------------

    def bruhat_leq_ids(self, yid, wid):
        if yid == wid or yid == 0:
            return True
        ly, lw = self._lengths[yid], self._lengths[wid]
        if ly >= lw:
            return False
        key = (yid, wid)
        memo = self._bruhat_memo
        cached = memo.get(key)
        if cached is not None:
            return cached
        s = min(s for s in range(self.rank) if self.is_left_descent(s, wid))
        sw = self.lmul(s, wid)
        if self.is_left_descent(s, yid):
            res = self.bruhat_leq_ids(self.lmul(s, yid), sw)
        else:
            res = self.bruhat_leq_ids(yid, sw)
        memo[key] = res
        return res

    # -- enumeration ------------------------------------------------------------

    def _extend_layers(self, target_length=None):
        if self._layers is None:
            self._layers = [[0]]
        while not self._complete and (
            target_length is None or len(self._layers) - 1 < target_length
        ):
            frontier = self._layers[-1]
            nxt = set()
            for wid in frontier:
                for s in range(self.rank):
                    if not self.is_left_descent(s, wid):
                        nxt.add(self.lmul(s, wid))
            if not nxt:
                self._complete = True
                return
            total = sum(len(layer) for layer in self._layers) + len(nxt)
            if total > self.max_elements:
                raise ValueError(
                    f"enumeration exceeds the element cap ({self.max_elements})"
                )
            self._layers.append(sorted(nxt, key=self.word_of))

    def element(self, wid):
        return GroupElement(wid, self.word_of(wid), self._lengths[wid])

    def enumerate_up_to_length(self, max_length):
        self._extend_layers(max_length)
        out = []
        for layer in self._layers[: max_length + 1]:
            out.extend(self.element(wid) for wid in layer)
        return out

    def enumerate_all(self):
        if not self.known_finite:
            raise ValueError("enumerate_all requires a system known finite")
        self._extend_layers(None)
        return [
            self.element(wid) for layer in self._layers for wid in layer
        ]

    def element_count(self):
        self._extend_layers(None)
        return sum(len(layer) for layer in self._layers)

    def all_ids(self):
        self._extend_layers(None)
        return [wid for layer in self._layers for wid in layer]

    # -- involutions ------------------------------------------------------------

    def twisted_involution_ids(self):
        """Ids of all w with delta(w) = w^-1, sorted by (length, word).

        Enumerated by closing {1} under w -> sw (when sw = w delta(s)) and
        w -> s w delta(s); both moves stay inside the twisted involutions
        and every one of them is reachable by length-increasing steps.
        """
        if self._tw_inv is not None:
            return self._tw_inv
        seen = {0}
        frontier = [0]
        count = 1
        while frontier:
            nxt = set()
            for wid in frontier:
                for s in range(self.rank):
                    if self.is_left_descent(s, wid):
                        continue
                    sw = self.lmul(s, wid)
                    wds = self.rmul(wid, self.delta[s])
                    z = sw if sw == wds else self.rmul(sw, self.delta[s])
                    if z not in seen:
                        nxt.add(z)
            count += len(nxt)
            if count > self.max_elements:
                raise ValueError(
                    f"involution enumeration exceeds the cap ({self.max_elements})"
                )
            seen.update(nxt)
            frontier = sorted(nxt)
        ids = sorted(seen, key=lambda w: (self._lengths[w], self.word_of(w)))
        self._tw_inv = tuple(ids)
        self._tw_inv_set = frozenset(ids)
        return self._tw_inv

    def is_twisted_involution(self, wid):
        self.twisted_involution_ids()
        return wid in self._tw_inv_set

    def twisted_involutions(self):
        return [self.element(wid) for wid in self.twisted_involution_ids()]

    # -- conjugacy classes -------------------------------------------------------

    def conjugacy_classes(self):
        """All conjugacy classes as sorted id tuples, deterministic order."""
        if self._classes is not None:
            return self._classes
        remaining = set(self.all_ids())
        classes = []
        for seed in sorted(
            remaining, key=lambda w: (self._lengths[w], self.word_of(w))
        ):
            if seed not in remaining:
                continue
            orbit = {seed}
            frontier = [seed]
            while frontier:
                nxt = []
                for wid in frontier:
                    for s in range(self.rank):
                        c = self.conjugate_by_gen(s, wid)
                        if c not in orbit:
                            orbit.add(c)
                            nxt.append(c)
                frontier = nxt
            remaining -= orbit
            classes.append(
                tuple(
                    sorted(
                        orbit,
                        key=lambda w: (self._lengths[w], self.word_of(w)),
                    )
                )
            )
        classes.sort(
            key=lambda cls: (self._lengths[cls[0]], self.word_of(cls[0]))
        )
        self._classes = classes
        return classes

    # -- reflection representation ------------------------------------------------

    def reflection_rep(self):
        if not self.crystallographic:
            raise ValueError(
                "reflection representation over Q requires a crystallographic type"
            )
        return ReflectionRep(
            matrices={
                s: self._engine.gen_mats[s] for s in range(self.rank)
            }
        )

    def h_value(self, wid):
        """dim ker(M_w + Id): the fixed space of -w in the reflection rep."""
        if not self.crystallographic:
            raise ValueError("h_value requires a crystallographic type")
        mat = self._payloads[wid][0]
        n = self.rank
        k = [
            [mat[i][j] + (1 if i == j else 0) for j in range(n)]
            for i in range(n)
        ]
        return n - _rational_rank(k)

    # -- public wrappers over GroupElement handles ---------------------------------

    @staticmethod
    def _id_of(w):
        return w.id if isinstance(w, GroupElement) else int(w)

    def mult_gen(self, w, s, side="left"):
        wid = self._id_of(w)
        if not 0 <= s < self.rank:
            raise ValueError(f"generator index {s} out of range")
        xid = self.lmul(s, wid) if side == "left" else self.rmul(wid, s)
        return self.element(xid)

    def length(self, w):
        return self._lengths[self._id_of(w)]

    def inverse(self, w):
        return self.element(self.inverse_id(self._id_of(w)))

    def descents(self, w, side="left"):
        wid = self._id_of(w)
        if side == "left":
            return self.left_descents(wid)
        return self.right_descents(wid)

    def bruhat_leq(self, y, w):
        return self.bruhat_leq_ids(self._id_of(y), self._id_of(w))

    def element_from_word(self, word):
        return self.element(self.element_id_from_word(word))

    def delta_elem(self, w):
        return self.element(self.delta_id(self._id_of(w)))

    def __repr__(self):
        label = self.type_label or f"rank-{self.rank} matrix"
        tw = f", delta={list(self.delta)}" if self.is_twisted else ""
        return f"CoxeterSystem({label}{tw})"

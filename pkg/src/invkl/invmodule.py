"""The Hecke module spanned by (twisted) involutions and its bar involution.

For a generator s and a twisted involution w (meaning delta(w) = w^{-1}),
the action of T_s on the basis vector a_w is, with ws* short for
w*delta(s):

* sw = ws* > w:   T_s a_w = u a_w + (u+1) a_{sw}
* sw = ws* < w:   T_s a_w = (u^2-u-1) a_w + (u^2-u) a_{sw}
* sw != ws* > w:  T_s a_w = a_{s w s*}
* sw != ws* < w:  T_s a_w = (u^2-1) a_w + u^2 a_{s w s*}

which satisfies (T_s+1)(T_s-u^2) = 0 and the braid relations.  The module
is defined over Z[u, u^-1]; every coefficient produced here must have even
v-support, and the bar operations assert that.

The bar involution is the unique Z-linear map with bar(u^n m) = u^-n bar(m),
bar(a_1) = a_1 and bar((T_s+1)m) = u^-2 (T_s+1) bar(m).  It is computed by
recursion over left descents; a windowed linear solve over the same
defining constraints serves as an independent cross-check on small ranks.
"""

from __future__ import annotations

from fractions import Fraction

from .errors import InvariantError, NotDivisible
from .laurent import LaurentPoly, ONE, ZERO, u_pow, v_pow

__all__ = ["MVector", "InvolutionModule", "bar_table_dense_solve"]

_U = u_pow(1)
_U1 = _U + ONE                 # u + 1
_UU = u_pow(2)                 # u^2
_UU_M1 = _UU - ONE             # u^2 - 1
_UU_MU = _UU - _U              # u^2 - u
_UU_MU_M1 = _UU - _U - ONE     # u^2 - u - 1
_UINV2 = u_pow(-2)
_VINV2 = v_pow(-2)
_ONE_PLUS_UINV = ONE + u_pow(-1)


class MVector:
    """A finitely supported map from involution ids to Laurent coefficients."""

    __slots__ = ("entries",)

    def __init__(self, entries=None):
        if entries is None:
            entries = {}
        self.entries = {
            w: f for w, f in entries.items() if not f.is_zero
        }

    @classmethod
    def basis(cls, wid):
        v = cls.__new__(cls)
        v.entries = {wid: ONE}
        return v

    @classmethod
    def _raw(cls, entries):
        v = cls.__new__(cls)
        v.entries = entries
        return v

    @property
    def is_zero(self):
        return not self.entries

    def get(self, wid):
        return self.entries.get(wid, ZERO)

    def support(self):
        return set(self.entries)

    def __add__(self, other):
        out = dict(self.entries)
        for w, f in other.entries.items():
            g = out.get(w, ZERO) + f
            if g.is_zero:
                out.pop(w, None)
            else:
                out[w] = g
        return MVector._raw(out)

    def __sub__(self, other):
        out = dict(self.entries)
        for w, f in other.entries.items():
            g = out.get(w, ZERO) - f
            if g.is_zero:
                out.pop(w, None)
            else:
                out[w] = g
        return MVector._raw(out)

    def __neg__(self):
        return MVector._raw({w: -f for w, f in self.entries.items()})

    def scaled(self, f):
        if isinstance(f, int):
            f = LaurentPoly((f,), 0)
        if f.is_zero:
            return MVector._raw({})
        return MVector._raw({w: g * f for w, g in self.entries.items()})

    def __eq__(self, other):
        return isinstance(other, MVector) and self.entries == other.entries

    def __repr__(self):
        items = ", ".join(
            f"{w}: {f}" for w, f in sorted(self.entries.items())
        )
        return f"MVector({{{items}}})"


def _accumulate(out, wid, f):
    g = out.get(wid, ZERO) + f
    if g.is_zero:
        out.pop(wid, None)
    else:
        out[wid] = g


class InvolutionModule:
    """The module over the u^2-Hecke algebra with basis the twisted involutions."""

    def __init__(self, system):
        self.system = system
        self.involution_ids = system.twisted_involution_ids()
        self._case_cache = {}
        self._bar_cache = {}

    # -- case analysis -------------------------------------------------------

    def action_case(self, s, wid):
        """(commuting, ascending, partner) for the T_s action on a_w."""
        key = (s, wid)
        cached = self._case_cache.get(key)
        if cached is not None:
            return cached
        sys = self.system
        sw = sys.lmul(s, wid)
        up = sys.length_of(sw) > sys.length_of(wid)
        wds = sys.rmul(wid, sys.delta_gen(s))
        if sw == wds:
            res = (True, up, sw)
        else:
            res = (False, up, sys.rmul(sw, sys.delta_gen(s)))
        self._case_cache[key] = res
        return res

    def basis(self, wid):
        if wid not in self.system._tw_inv_set:
            raise ValueError(f"id {wid} is not a twisted involution")
        return MVector.basis(wid)

    # -- module structure -----------------------------------------------------

    def ts_action(self, s, m):
        """T_s applied to an arbitrary module element."""
        out = {}
        for wid, f in m.entries.items():
            commuting, up, other = self.action_case(s, wid)
            if commuting and up:
                _accumulate(out, wid, f * _U)
                _accumulate(out, other, f * _U1)
            elif commuting:
                _accumulate(out, wid, f * _UU_MU_M1)
                _accumulate(out, other, f * _UU_MU)
            elif up:
                _accumulate(out, other, f)
            else:
                _accumulate(out, wid, f * _UU_M1)
                _accumulate(out, other, f * _UU)
        return MVector._raw(out)

    def tw_action(self, x, m):
        """T_x applied along a reduced word; independent of the word chosen."""
        xid = self.system._id_of(x)
        for s in reversed(self.system.word_of(xid)):
            m = self.ts_action(s, m)
        return m

    def cs_action(self, s, m):
        """c_s = v^{-2} (T_s + 1) applied to m (coefficients may be odd)."""
        return (self.ts_action(s, m) + m).scaled(_VINV2)

    # -- bar involution ---------------------------------------------------------

    def _check_even(self, m, context):
        for wid, f in m.entries.items():
            if not f.is_even_support():
                raise InvariantError(
                    f"{context}: coefficient {f} at {self.system.word_of(wid)} "
                    "leaves Z[u, u^-1]"
                )

    def bar_basis(self, wid, choice=None):
        """bar(a_w) as a module element, memoized for the default descent.

        ``choice`` overrides the generator used for the recursion step and is
        meant for well-definedness checks; any left descent is admissible.
        """
        if choice is None:
            cached = self._bar_cache.get(wid)
            if cached is not None:
                return cached
        sys = self.system
        if wid == 0:
            result = MVector.basis(0)
        else:
            descents = [
                s for s in range(sys.rank) if sys.is_left_descent(s, wid)
            ]
            s = descents[0] if choice is None else choice
            if s not in descents:
                raise ValueError(
                    f"generator {s} is not a left descent of {sys.word_of(wid)}"
                )
            commuting, _up, _other = self.action_case(s, wid)
            if commuting:
                xid = sys.lmul(s, wid)
                bx = self.bar_basis(xid)
                lifted = (self.ts_action(s, bx) + bx).scaled(_UINV2)
                quotient = MVector._raw(
                    {
                        w: f.exact_div(_ONE_PLUS_UINV)
                        for w, f in lifted.entries.items()
                    }
                )
                result = quotient - bx
            else:
                xid = sys.rmul(sys.lmul(s, wid), sys.delta_gen(s))
                bx = self.bar_basis(xid)
                result = (self.ts_action(s, bx) + bx).scaled(_UINV2) - bx
            self._validate_bar(wid, result)
        if choice is None:
            self._bar_cache[wid] = result
        return result

    def _validate_bar(self, wid, result):
        sys = self.system
        if result.get(wid) != u_pow(-sys.length_of(wid)):
            raise InvariantError(
                f"bar(a_w) diagonal coefficient is not u^-l(w) at {sys.word_of(wid)}"
            )
        for yid in result.entries:
            if yid not in sys._tw_inv_set or not sys.bruhat_leq_ids(yid, wid):
                raise InvariantError(
                    f"bar(a_w) support leaves the Bruhat interval at "
                    f"{sys.word_of(wid)}: offending term {sys.word_of(yid)}"
                )
        self._check_even(result, "bar involution")

    def r_poly(self, y, w):
        """The coefficient of a_y in bar(a_w)."""
        sys = self.system
        return self.bar_basis(sys._id_of(w)).get(sys._id_of(y))

    def bar_mvector(self, m):
        """Semilinear extension: bar(sum f_y a_y) = sum bar(f_y) bar(a_y)."""
        self._check_even(m, "bar input")
        return self.bar_extended(m)

    def bar_extended(self, m):
        """The same semilinear bar on the v-extended module (odd powers allowed)."""
        out = MVector._raw({})
        for wid, f in m.entries.items():
            out = out + self.bar_basis(wid).scaled(f.bar())
        return out


# ---------------------------------------------------------------------------
# independent oracle: solve the defining constraints of bar as linear systems


def _interleave_even(coeffs):
    """Spread u-coefficients onto even v-exponents."""
    if not coeffs:
        return ()
    out = [0] * (2 * len(coeffs) - 1)
    out[::2] = coeffs
    return out


def _solve_exact(rows, rhs):
    """Solve an overdetermined exact linear system; None if inconsistent."""
    n = len(rows[0]) if rows else 0
    aug = [list(map(Fraction, row)) + [Fraction(b)] for row, b in zip(rows, rhs)]
    pivots = []
    r = 0
    for col in range(n):
        piv = next((i for i in range(r, len(aug)) if aug[i][col]), None)
        if piv is None:
            continue
        aug[r], aug[piv] = aug[piv], aug[r]
        pv = aug[r][col]
        aug[r] = [x / pv for x in aug[r]]
        for i in range(len(aug)):
            if i != r and aug[i][col]:
                f = aug[i][col]
                aug[i] = [x - f * y for x, y in zip(aug[i], aug[r])]
        pivots.append(col)
        r += 1
        if r == len(aug):
            break
    for i in range(r, len(aug)):
        if aug[i][n]:
            return None
    if len(pivots) < n:
        return None  # underdetermined
    sol = [Fraction(0)] * n
    for i, col in enumerate(pivots):
        sol[col] = aug[i][n]
    return sol


def bar_table_dense_solve(module, pad=2):
    """Recompute every bar(a_w) by solving the defining constraints directly.

    Unknowns are the coefficients of bar(a_w) over a window of u-exponents;
    equations come from bar((T_t+1) a_x) = u^-2 (T_t+1) bar(a_x) for every
    generator t and every involution x whose image contains a_w.  Columns are
    solved in length order using previously solved columns only, never the
    production recursion.
    """
    sys = module.system
    table = {0: MVector.basis(0)}
    ids = module.involution_ids
    for wid in ids:
        if wid == 0:
            continue
        lw = sys.length_of(wid)
        lo, hi = -lw - pad, pad  # window of u-exponents
        width = hi - lo + 1
        equations = []  # (phi_w, known_rhs) with rhs an MVector
        for xid in ids:
            lx = sys.length_of(xid)
            if lx not in (lw - 1, lw - 2):
                continue
            for t in range(sys.rank):
                commuting, up, other = module.action_case(t, xid)
                if not up or other != wid:
                    continue
                phi = _U1 if commuting else ONE
                bx = table[xid]
                rhs = (module.ts_action(t, bx) + bx).scaled(_UINV2)
                rhs = rhs - bx.scaled(phi.bar())
                equations.append((phi.bar(), rhs))
        if not equations:
            raise InvariantError(
                f"no defining constraints reach column {sys.word_of(wid)}"
            )
        entries = {}
        for yid in ids:
            if sys.length_of(yid) > lw:
                continue
            rows, rhs_vals = [], []
            for phi_bar, rhs in equations:
                target = rhs.get(yid)
                support = set(
                    e // 2 for e, _ in target.terms()
                )
                exps = set(range(lo + phi_bar.min_exp // 2,
                                 hi + phi_bar.max_exp // 2 + 1))
                exps |= support
                for e in sorted(exps):
                    row = [0] * width
                    for k in range(width):
                        row[k] = phi_bar.coeff(2 * (e - (lo + k)))
                    rows.append(row)
                    rhs_vals.append(target.coeff(2 * e))
            sol = _solve_exact(rows, rhs_vals)
            if sol is None:
                raise InvariantError(
                    "bar constraints are not uniquely solvable at column "
                    f"{sys.word_of(wid)}, row {sys.word_of(yid)}"
                )
            coeffs = []
            for val in sol:
                if val.denominator != 1:
                    raise InvariantError(
                        "bar linear solve produced a non-integer coefficient"
                    )
                coeffs.append(int(val))
            poly = LaurentPoly(coeffs, 0)
            poly = LaurentPoly(
                _interleave_even(poly.coeffs), 2 * (poly.min_exp + lo)
            )
            if not poly.is_zero:
                entries[yid] = poly
        table[wid] = MVector(entries)
    return table

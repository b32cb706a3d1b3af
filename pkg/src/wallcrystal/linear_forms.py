"""Exact linear forms in double-index coordinates, the beta vectors,
the S' and S-hat operators, seed forms, windowed closures, and the
positivity checks."""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable

from wallcrystal.affine_data import cartan_entry
from wallcrystal.adapted_sequence import AdaptedSequence, DoubleIndex


class ConstantPresent(ValueError):
    pass


@dataclass(frozen=True)
class DominantWeight:
    """A dominant integral weight via its pairings <h_k, lambda>."""

    values: tuple  # entry k-1 holds <h_k, lambda>

    def __post_init__(self):
        if any(v < 0 for v in self.values):
            raise ValueError("dominant weights need nonnegative pairings")

    @classmethod
    def zero(cls, n: int) -> "DominantWeight":
        return cls((0,) * n)

    def pairing(self, k: int) -> int:
        return self.values[k - 1]


class LinearForm:
    """constant + sum of coeff * x_{s,k}; immutable and canonical."""

    __slots__ = ("constant", "terms", "_map", "_hash")

    def __init__(self, constant: int = 0, coeffs=None):
        items = []
        if coeffs:
            acc = {}
            for d, c in (coeffs.items() if isinstance(coeffs, dict) else coeffs):
                if c:
                    acc[d] = acc.get(d, 0) + c
            items = sorted(
                ((d, c) for d, c in acc.items() if c), key=lambda it: (it[0].s, it[0].k)
            )
        object.__setattr__(self, "constant", constant)
        object.__setattr__(self, "terms", tuple(items))
        object.__setattr__(self, "_map", dict(items))
        object.__setattr__(self, "_hash", hash((constant, self.terms)))

    def __setattr__(self, *a):
        raise AttributeError("LinearForm is immutable")

    def coeff(self, d: DoubleIndex) -> int:
        return self._map.get(d, 0)

    @property
    def support(self):
        return tuple(d for d, _ in self.terms)

    def is_zero(self) -> bool:
        return self.constant == 0 and not self.terms

    def map_terms(self):
        return dict(self.terms)

    def __add__(self, other):
        acc = dict(self.terms)
        for d, c in other.terms:
            acc[d] = acc.get(d, 0) + c
        return LinearForm(self.constant + other.constant, acc)

    def __sub__(self, other):
        acc = dict(self.terms)
        for d, c in other.terms:
            acc[d] = acc.get(d, 0) - c
        return LinearForm(self.constant - other.constant, acc)

    def __neg__(self):
        return LinearForm(-self.constant, {d: -c for d, c in self.terms})

    def shift_constant(self, delta: int) -> "LinearForm":
        return LinearForm(self.constant + delta, dict(self.terms))

    def drop_constant(self) -> "LinearForm":
        return LinearForm(0, dict(self.terms))

    def evaluate(self, a) -> int:
        """a: mapping DoubleIndex -> int (missing = 0)."""
        get = a.get if hasattr(a, "get") else a.__getitem__
        return self.constant + sum(c * (get(d, 0) or 0) for d, c in self.terms)

    def __eq__(self, other):
        return (
            isinstance(other, LinearForm)
            and self.constant == other.constant
            and self.terms == other.terms
        )

    def __hash__(self):
        return self._hash

    def __repr__(self):
        return f"LinearForm({render_form(self)!r})"


def x(s: int, k: int) -> LinearForm:
    """x_{s,k}, understood as 0 when s < 1."""
    if s < 1:
        return LinearForm(0, {})
    return LinearForm(0, {DoubleIndex(s, k): 1})


def render_form(phi: LinearForm) -> str:
    pos = [(d, c) for d, c in phi.terms if c > 0]
    neg = [(d, c) for d, c in phi.terms if c < 0]
    parts = []
    for d, c in pos + neg:
        mag = abs(c)
        body = f"x[{d.s},{d.k}]" if mag == 1 else f"{mag} x[{d.s},{d.k}]"
        if not parts:
            parts.append(body if c > 0 else f"- {body}")
        else:
            parts.append(f"{'+' if c > 0 else '-'} {body}")
    if phi.constant or not parts:
        c = phi.constant
        if not parts:
            parts.append(str(c))
        else:
            parts.append(f"{'+' if c > 0 else '-'} {abs(c)}")
    return " ".join(parts)


_TERM_RE = re.compile(r"([+-])?\s*(?:(\d+)\s*)?x\[(\d+),(\d+)\]|([+-])?\s*(\d+)")


def parse_form(text: str) -> LinearForm:
    acc = {}
    constant = 0
    pos = 0
    text = text.strip()
    while pos < len(text):
        m = _TERM_RE.match(text, pos)
        if not m or m.end() == pos:
            raise ValueError(f"unparsable form near {text[pos:]!r}")
        sign_a, mag, s, k, sign_b, const = m.groups()
        if s is not None:
            c = int(mag) if mag else 1
            if sign_a == "-":
                c = -c
            d = DoubleIndex(int(s), int(k))
            acc[d] = acc.get(d, 0) + c
        else:
            c = int(const)
            if sign_b == "-":
                c = -c
            constant += c
        pos = m.end()
        while pos < len(text) and text[pos] == " ":
            pos += 1
    return LinearForm(constant, acc)


# --- beta vectors and operators --------------------------------------


def beta(seq: AdaptedSequence, d: DoubleIndex) -> LinearForm:
    """beta_{s,k} = x_{s,k} + x_{s+1,k} + sum_j a_{k,j} x_{s+p_{j,k}, j}."""
    s, k = d.s, d.k
    acc = {DoubleIndex(s, k): 1, DoubleIndex(s + 1, k): 1}
    for j in seq.base_type.index_set:
        a = cartan_entry(seq.base_type, k, j)
        if j != k and a < 0:
            dj = DoubleIndex(s + seq.p(j, k), j)
            acc[dj] = acc.get(dj, 0) + a
    return LinearForm(0, acc)


def beta_at(seq: AdaptedSequence, r: int) -> LinearForm:
    """beta_r with beta_0 := 0."""
    if r == 0:
        return LinearForm(0, {})
    return beta(seq, seq.reindex(r))


def r_minus(seq: AdaptedSequence, r: int) -> int:
    return r - seq.n if r > seq.n else 0


def beta_signed(seq: AdaptedSequence, r: int, sign: str, lam: DominantWeight) -> LinearForm:
    if sign == "+":
        return beta_at(seq, r)
    rm = r_minus(seq, r)
    if rm > 0:
        return beta_at(seq, rm)
    k = seq.entry(r)
    acc = {DoubleIndex(1, seq.entry(j)): cartan_entry(seq.base_type, k, seq.entry(j))
           for j in range(1, r)}
    d = DoubleIndex(1, k)
    acc[d] = acc.get(d, 0) + 1
    return LinearForm(-lam.pairing(k), acc)


def s_prime(seq: AdaptedSequence, r: int, phi: LinearForm) -> LinearForm:
    if phi.constant != 0:
        raise ConstantPresent("S' acts on forms with zero constant")
    c = phi.coeff(seq.reindex(r))
    if c > 0:
        return phi - beta_at(seq, r)
    if c < 0:
        return phi + beta_at(seq, r_minus(seq, r))
    return phi


def s_hat(seq: AdaptedSequence, r: int, phi: LinearForm, lam: DominantWeight) -> LinearForm:
    c = phi.coeff(seq.reindex(r))
    if c > 0:
        return phi - beta_signed(seq, r, "+", lam)
    if c < 0:
        return phi + beta_signed(seq, r, "-", lam)
    return phi


def lambda_form(seq: AdaptedSequence, k: int, lam: DominantWeight) -> LinearForm:
    """lambda^(k) = <h_k,lam> - sum_{j < iota^(k)} <h_k, alpha_{i_j}> x_j - x_{iota^(k)}."""
    rk = seq.first_occurrence(k)
    acc = {DoubleIndex(1, seq.entry(j)): -cartan_entry(seq.base_type, k, seq.entry(j))
           for j in range(1, rk)}
    d = DoubleIndex(1, k)
    acc[d] = acc.get(d, 0) - 1
    return LinearForm(lam.pairing(k), acc)


def xi_form(seq: AdaptedSequence, k: int) -> LinearForm:
    return lambda_form(seq, k, DominantWeight.zero(seq.n)).drop_constant()


# --- closures --------------------------------------------------------


def support_bound(seq: AdaptedSequence, phi: LinearForm) -> int:
    """Largest single index in the support (0 for constants)."""
    return max((seq.single_index(d) for d in phi.support), default=0)


def closure(seq: AdaptedSequence, seeds: Iterable[LinearForm], horizon: int,
            op: str = "S'", lam: DominantWeight | None = None, margin: int = 1):
    """BFS closure applying the operator at every single index r <= horizon.

    Returns (certified, frontier): certified forms are supported within
    single indices <= horizon - margin * n (a whole-period margin) and are
    exactly the window-supported members of the infinite closure.  The
    search drops forms supported more than one period past the window:
    the operator at r only touches coefficients within a period of r, so
    paths wandering further out never re-enter the window (checked against
    uncapped runs in the tests).
    """
    n = seq.n
    if margin < 1:
        raise ValueError("margin must be at least one period")
    if horizon < (margin + 1) * n:
        raise ValueError("horizon must exceed the margin by at least a period")
    if op not in ("S'", "Shat'"):
        raise ValueError(op)
    if op == "Shat'" and lam is None:
        lam = DominantWeight.zero(n)
    hatted = op == "Shat'"
    indexed = [(seq.reindex(r),
                beta_signed(seq, r, "+", lam) if hatted else beta_at(seq, r),
                beta_signed(seq, r, "-", lam) if hatted
                else beta_at(seq, r_minus(seq, r)))
               for r in range(1, horizon + 1)]
    seen = set()
    queue = []
    for phi in seeds:
        if not hatted and phi.constant != 0:
            raise ConstantPresent("S' acts on forms with zero constant")
        if phi not in seen:
            seen.add(phi)
            queue.append(phi)
    cutoff = horizon - margin * n
    cap = cutoff + n  # one period past the window
    while queue:
        phi = queue.pop()
        cmap = phi._map
        for d, bplus, bminus in indexed:
            c = cmap.get(d, 0)
            if c > 0:
                nxt = phi - bplus
            elif c < 0:
                nxt = phi + bminus
            else:
                continue
            if nxt not in seen and support_bound(seq, nxt) <= cap:
                seen.add(nxt)
                queue.append(nxt)
    certified, frontier = set(), set()
    for phi in seen:
        (certified if support_bound(seq, phi) <= cutoff else frontier).add(phi)
    return certified, frontier


def positivity_report(seq: AdaptedSequence, lam: DominantWeight, horizon: int) -> dict:
    """The three positivity checks over window-certified closures."""
    n = seq.n
    first_seeds = [x(s, k) for s in range(1, horizon // n + 1)
                   for k in seq.base_type.index_set]

    def first_occ_ok(forms):
        for phi in forms:
            for d, c in phi.terms:
                if seq.single_index(d) <= n and c < 0:  # r^(-) = 0
                    return False
        return True

    xi_closure, _ = closure(seq, first_seeds, horizon)
    xi_positive = first_occ_ok(xi_closure)

    strict_forms = set(xi_closure)
    for k in seq.base_type.index_set:
        xk = xi_form(seq, k)
        cert, _ = closure(seq, [xk], horizon)
        strict_forms |= cert - {xk}
    strict_positive = first_occ_ok(strict_forms)

    hat_seeds = first_seeds + [lambda_form(seq, k, lam) for k in seq.base_type.index_set]
    hat_closure, _ = closure(seq, hat_seeds, horizon, op="Shat'", lam=lam)
    ample = all(phi.constant >= 0 for phi in hat_closure)

    return {"xi_positive": xi_positive, "strict_positive": strict_positive, "ample": ample}

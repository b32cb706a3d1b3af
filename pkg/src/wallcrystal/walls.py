"""Young walls and truncated walls: stacking patterns, properness, site
detection, mutation, bounded enumeration, and ASCII rendering.

Walls are immutable values.  A column is encoded by the number of
completely filled unit cells above the base together with a partial-top
code; the stacking patterns determine the colour, shape and level of
every atom from that state.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass, field
from functools import lru_cache

from wallcrystal.affine_data import (
    AffineType,
    Family,
    HalfInt,
    half_height_colors,
    in_domain,
    index_class,
    next_domain_point,
    parse_type,
    periodic_map,
    split_cell_pairs,
    thresholds,
)


class ClassMismatch(ValueError):
    pass


class NotProper(ValueError):
    pass


class SiteNotPresent(ValueError):
    pass


class ResultImproper(ValueError):
    pass


# ground kinds
LEVEL1 = "level1"
SUPPORTING = "supporting"
COVERING = "covering"

# partial-top codes
NONE = "none"
FRONT = "front"  # lone half-thickness atom at the front of a split cell
BACK = "back"    # lone half-thickness atom at the back of a split cell
LOWER = "lower"  # lone lower half-height atom of a doubled cell


@dataclass(frozen=True)
class Cell:
    """One unit cell of a column pattern.

    kind 'full': a unit cube of colors[0].
    kind 'double': two half-height blocks of colors[0], lower then upper.
    kind 'split': two half-thickness blocks, colors = (back, front) with
    args = (back P-argument, front P-argument).
    """

    kind: str
    level: HalfInt  # the domain point labelling the cell bottom
    colors: tuple
    args: tuple

    @property
    def natoms(self) -> int:
        return 1 if self.kind == "full" else 2


def _partner(X: AffineType, c: int) -> int:
    for a, b in split_cell_pairs(X):
        if c == a:
            return b
        if c == b:
            return a
    raise ValueError(c)


def _back_assignment(X: AffineType, k: int, ground: str, column: int) -> dict:
    """Which colour of each split pair sits at the back, per column parity."""
    fam = X.family
    n = X.n
    odd = column % 2 == 0  # 0-based column 0 is the 1st column from the right
    out = {}
    if not split_cell_pairs(X):
        return out
    if ground == LEVEL1:
        if fam in (Family.B1, Family.A2ODD):
            if k == n:  # only B1
                out[frozenset({1, 2})] = 2 if odd else 1
            else:
                out[frozenset({1, 2})] = k if odd else _partner(X, k)
        elif fam is Family.D1:
            if k in (1, 2):
                out[frozenset({1, 2})] = k if odd else _partner(X, k)
                out[frozenset({n - 1, n})] = n if odd else n - 1
            else:  # k in {n-1, n}
                out[frozenset({1, 2})] = 2 if odd else 1
                out[frozenset({n - 1, n})] = k if odd else _partner(X, k)
    else:  # truncated walls
        if fam in (Family.B1, Family.A2ODD):
            out[frozenset({1, 2})] = 2 if odd else 1
        elif fam is Family.D1:
            out[frozenset({1, 2})] = 2 if odd else 1
            out[frozenset({n - 1, n})] = n if odd else n - 1
    return out


@lru_cache(maxsize=None)
def _pattern(X: AffineType, k: int, ground: str, parity: int, count: int) -> tuple:
    """The first `count` cells of the column pattern (non-A1 types)."""
    assert X.family is not Family.A1
    halfs = half_height_colors(X)
    splits = {frozenset(p) for p in split_cell_pairs(X)}
    backs = _back_assignment(X, k, ground, parity)
    tk, tbar, tbarbar = thresholds(X, k)
    cells = []
    if ground == LEVEL1:
        t = tbar if tbar.is_integer else tbar - HalfInt(1)
    else:
        t = tbar if ground == SUPPORTING else tbarbar
        cells.append(Cell("double", t, (k,), (t,)))
        t = next_domain_point(X, t)
    while len(cells) < count:
        c = periodic_map(X, t)
        nxt = t + HalfInt(1)
        if t.is_integer and in_domain(X, nxt):
            c2 = periodic_map(X, nxt)
            back = backs[frozenset({c, c2})]
            if back == c:
                cells.append(Cell("split", t, (c, c2), (t, nxt)))
            else:
                cells.append(Cell("split", t, (c2, c), (nxt, t)))
            t = next_domain_point(X, nxt)
        elif c in halfs:
            cells.append(Cell("double", t, (c,), (t,)))
            t = next_domain_point(X, t)
        else:
            cells.append(Cell("full", t, (c,), (t,)))
            t = next_domain_point(X, t)
    return tuple(cells)


def column_pattern(X: AffineType, k: int, ground: str, column: int, count: int = 8):
    """The first `count` pattern cells of the given column."""
    if X.family is Family.A1:
        cells = []
        for m in range(count):
            lvl = HalfInt.of(k - column + m)
            cells.append(Cell("full", lvl, (periodic_map(X, lvl),), (lvl,)))
        return tuple(cells)
    return _pattern(X, k, ground, column % 2, count)


def _base_top(X: AffineType, k: int, ground: str) -> str:
    """Partial code of a bare column (ground atoms only)."""
    if X.family is Family.A1:
        return NONE
    if ground == LEVEL1 and index_class(X, k) != 1:
        raise ClassMismatch(f"{k} is not class 1 in {X}")
    if ground != LEVEL1 and index_class(X, k) != 2:
        raise ClassMismatch(f"{k} is not class 2 in {X}")
    if ground == LEVEL1:
        base = column_pattern(X, k, ground, 0, 1)[0]
        return FRONT if base.kind == "split" else LOWER
    return LOWER


@dataclass(frozen=True)
class Wall:
    """A proper-or-not wall value; structural invariants are enforced."""

    wall_type: AffineType
    k: int
    ground: str
    states: tuple  # ((m, top), ...) for columns 0.. ; trailing bare states trimmed

    def __post_init__(self):
        base = _base_top(self.wall_type, self.k, self.ground)
        states = tuple(self.states)
        while states and states[-1] == (0, base):
            states = states[:-1]
        object.__setattr__(self, "states", states)
        for st in states:
            self._check_state(st)
        if not self._spaces_ok():
            raise ValueError("free space to the right of a block")

    @property
    def base_state(self):
        return (0, _base_top(self.wall_type, self.k, self.ground))

    def _check_state(self, st):
        m, top = st
        if m < 0:
            raise ValueError(st)
        a1 = self.wall_type.family is Family.A1
        if top == NONE:
            if m == 0 and not a1:
                raise ValueError("a bare column carries its ground atom")
            return
        if a1:
            raise ValueError("A1 columns have no partial atoms")
        cell = column_pattern(self.wall_type, self.k, self.ground, 0, m + 1)[m]
        if top == LOWER and cell.kind != "double":
            raise ValueError(st)
        if top in (FRONT, BACK) and cell.kind != "split":
            raise ValueError(st)
        if (m, top) == (0, BACK) and self.ground == LEVEL1 and cell.kind == "split":
            raise ValueError("the front base atom is part of the ground")

    def state(self, i: int):
        return self.states[i] if i < len(self.states) else self.base_state

    def _spaces_ok(self):
        a1 = self.wall_type.family is Family.A1
        for i in range(1, len(self.states)):
            if not _covers(self.states[i - 1], self.states[i], a1):
                return False
        return True

    def column_atoms(self, i: int) -> int:
        m, top = self.state(i)
        if self.wall_type.family is Family.A1:
            return m
        cells = column_pattern(self.wall_type, self.k, self.ground, i, m + 1)
        total = sum(c.natoms for c in cells[:m]) + (0 if top == NONE else 1)
        return total - 1  # the single ground atom

    @property
    def atoms(self) -> int:
        return sum(self.column_atoms(i) for i in range(len(self.states)))

    def full_heights(self):
        """Heights of full columns (unit-thickness integral tops)."""
        if self.wall_type.family is Family.A1:
            return []
        return [m for (m, top) in self.states if top == NONE and m >= 1]

    def with_state(self, i: int, st) -> "Wall":
        states = list(self.states)
        while len(states) <= i:
            states.append(self.base_state)
        states[i] = st
        return Wall(self.wall_type, self.k, self.ground, tuple(states))


def _covers(left, right, a1: bool) -> bool:
    """right (nearer column) fits under left per the no-free-space rule."""
    ml, tl = left
    mr, tr = right
    if a1:
        return mr <= ml
    if mr < ml:
        return True
    if mr > ml:
        return False
    return tr == NONE or tr == tl


@dataclass(frozen=True)
class WallPair:
    """Synchronized supporting/covering truncated walls."""

    supporting: Wall
    covering: Wall

    def __post_init__(self):
        s, c = self.supporting, self.covering
        if s.ground != SUPPORTING or c.ground != COVERING:
            raise ClassMismatch("pair needs a supporting and a covering wall")
        if (s.wall_type, s.k) != (c.wall_type, c.k):
            raise ClassMismatch("pair members disagree on type or colour")
        top = max(len(s.states), len(c.states))
        for i in range(top):
            if (s.state(i) == s.base_state) != (c.state(i) == c.base_state):
                raise ValueError("bare columns of the pair are out of sync")

    @property
    def wall_type(self):
        return self.supporting.wall_type

    @property
    def k(self):
        return self.supporting.k

    @property
    def atoms(self) -> int:
        return self.supporting.atoms + self.covering.atoms


@dataclass(frozen=True)
class Site:
    """An admissible slot, removable block, or k-pair site."""

    action: str      # "add" | "remove"
    grade: str       # "single" | "double" | "pair"
    color: int
    column: int
    level: HalfInt   # the ell of Defs 4.2/4.4 (cell label; T-bar for pairs)
    arg: HalfInt     # argument fed to the shift table (atom's domain point)
    host: str        # "wall" | "supporting" | "covering" | "pair"

    @property
    def position(self):
        return (-self.column, self.level)


def ground_state(X: AffineType, k: int):
    if index_class(X, k) == 1:
        return Wall(X, k, LEVEL1, ())
    sup = Wall(X, k, SUPPORTING, ())
    cov = Wall(X, k, COVERING, ())
    return WallPair(sup, cov)


def is_proper(w) -> bool:
    if isinstance(w, WallPair):
        return is_proper(w.supporting) and is_proper(w.covering)
    if w.wall_type.family is Family.A1:
        return True
    hs = w.full_heights()
    return len(hs) == len(set(hs))


def _try(w: Wall, i: int, st):
    """Mutated wall, or None when invalid or improper."""
    try:
        out = w.with_state(i, st)
    except ValueError:
        return None
    return out if is_proper(out) else None


def _wall_transitions(w: Wall, host: str):
    """(site, mutated wall) for every single/double site of one wall."""
    X, k, ground = w.wall_type, w.k, w.ground
    out = []
    if X.family is Family.A1:
        ncols = len(w.states) + 1
        for i in range(ncols):
            c = w.state(i)[0]
            lvl = HalfInt.of(k - i + c)
            color = periodic_map(X, lvl)
            nxt = _try(w, i, (c + 1, NONE))
            if nxt is not None:
                out.append((Site("add", "single", color, i, lvl, lvl - i, host), nxt))
            if c >= 1:
                lvl = HalfInt.of(k - i + c - 1)
                prv = _try(w, i, (c - 1, NONE))
                if prv is not None:
                    out.append(
                        (Site("remove", "single", periodic_map(X, lvl), i, lvl,
                              lvl - i, host), prv)
                    )
        return out
    truncated = ground in (SUPPORTING, COVERING)
    for i in range(len(w.states) + 1):
        m, top = w.state(i)
        cells = column_pattern(X, k, ground, i, m + 2)
        # --- additions -------------------------------------------------
        if top == NONE:
            cell = cells[m]
            if cell.kind == "full":
                nxt = _try(w, i, (m + 1, NONE))
                if nxt is not None:
                    out.append(
                        (Site("add", "single", cell.colors[0], i, cell.level,
                              cell.args[0], host), nxt)
                    )
            elif cell.kind == "split":
                for code, idx in ((BACK, 0), (FRONT, 1)):
                    nxt = _try(w, i, (m, code))
                    if nxt is not None:
                        out.append(
                            (Site("add", "single", cell.colors[idx], i, cell.level,
                                  cell.args[idx], host), nxt)
                        )
            else:  # empty doubled cell: double slot takes precedence
                both = _try(w, i, (m + 1, NONE))
                if both is not None:
                    out.append(
                        (Site("add", "double", cell.colors[0], i, cell.level,
                              cell.args[0], host), both)
                    )
                else:
                    low = _try(w, i, (m, LOWER))
                    if low is not None:
                        out.append(
                            (Site("add", "single", cell.colors[0], i, cell.level,
                                  cell.args[0], host), low)
                        )
        elif top == LOWER:
            if not (truncated and m == 0):
                cell = cells[m]
                nxt = _try(w, i, (m + 1, NONE))
                if nxt is not None:
                    out.append(
                        (Site("add", "single", cell.colors[0], i, cell.level,
                              cell.args[0], host), nxt)
                    )
        else:  # FRONT or BACK present: the missing half-thickness atom
            cell = cells[m]
            idx = 1 if top == BACK else 0
            nxt = _try(w, i, (m + 1, NONE))
            if nxt is not None:
                out.append(
                    (Site("add", "single", cell.colors[idx], i, cell.level,
                          cell.args[idx], host), nxt)
                )
        # --- removals --------------------------------------------------
        if i >= len(w.states):
            continue
        if top == NONE and m >= 1:
            cell = cells[m - 1]
            if cell.kind == "full":
                prv = _try(w, i, (m - 1, NONE))
                if prv is not None:
                    out.append(
                        (Site("remove", "single", cell.colors[0], i, cell.level,
                              cell.args[0], host), prv)
                    )
            elif cell.kind == "split":
                pairs = [(FRONT, 0), (BACK, 1)]  # leave front => removed back
                for leave, idx in pairs:
                    if m - 1 == 0 and ground == LEVEL1 and leave == BACK:
                        continue  # would remove the ground front atom
                    prv = _try(w, i, (m - 1, leave))
                    if prv is not None:
                        out.append(
                            (Site("remove", "single", cell.colors[idx], i,
                                  cell.level, cell.args[idx], host), prv)
                        )
            else:  # complete doubled cell on top
                ground_lower = m - 1 == 0 and (truncated or ground == LEVEL1)
                if truncated and m - 1 == 0:
                    continue  # the base k-blocks belong to the pair
                both = None if ground_lower else _try(w, i, (m - 1, NONE))
                if both is not None:
                    out.append(
                        (Site("remove", "double", cell.colors[0], i, cell.level,
                              cell.args[0], host), both)
                    )
                else:
                    up = _try(w, i, (m - 1, LOWER))
                    if up is not None:
                        out.append(
                            (Site("remove", "single", cell.colors[0], i,
                                  cell.level, cell.args[0], host), up)
                        )
        elif top == LOWER:
            if not ((truncated or ground == LEVEL1) and m == 0):
                cell = cells[m]
                prv = _try(w, i, (m, NONE))
                if prv is not None:
                    out.append(
                        (Site("remove", "single", cell.colors[0], i, cell.level,
                              cell.args[0], host), prv)
                    )
        elif top in (FRONT, BACK):
            if not (m == 0 and ground == LEVEL1 and top == FRONT):
                cell = cells[m]
                idx = 0 if top == BACK else 1
                prv = _try(w, i, (m, NONE))
                if prv is not None:
                    out.append(
                        (Site("remove", "single", cell.colors[idx], i, cell.level,
                              cell.args[idx], host), prv)
                    )
    return out


def _pair_transitions(p: WallPair):
    X, k = p.wall_type, p.k
    tbar = thresholds(X, k)[1]
    out = []
    top = max(len(p.supporting.states), len(p.covering.states)) + 1
    for i in range(top):
        ss, cs = p.supporting.state(i), p.covering.state(i)
        if ss == (0, LOWER) and cs == (0, LOWER):
            s2 = _try(p.supporting, i, (1, NONE))
            c2 = _try(p.covering, i, (1, NONE))
            if s2 is not None and c2 is not None:
                out.append(
                    (Site("add", "pair", k, i, tbar, tbar, "pair"),
                     WallPair(s2, c2))
                )
        if ss == (1, NONE) and cs == (1, NONE):
            s2 = _try(p.supporting, i, (0, LOWER))
            c2 = _try(p.covering, i, (0, LOWER))
            if s2 is not None and c2 is not None:
                out.append(
                    (Site("remove", "pair", k, i, tbar, tbar, "pair"),
                     WallPair(s2, c2))
                )
    return out


def transitions(w):
    """All (site, mutated wall) moves from w."""
    if not is_proper(w):
        raise NotProper(w)
    if isinstance(w, WallPair):
        out = []
        for site, sup in _wall_transitions(w.supporting, "supporting"):
            out.append((site, WallPair(sup, w.covering)))
        for site, cov in _wall_transitions(w.covering, "covering"):
            out.append((site, WallPair(w.supporting, cov)))
        out.extend(_pair_transitions(w))
        return out
    return _wall_transitions(w, "wall")


def _fast_wall_sites(w: Wall, host: str):
    """sites of one wall via local neighbour checks only (no wall copies)."""
    X, k, ground = w.wall_type, w.k, w.ground
    a1 = X.family is Family.A1
    states = w.states
    base = w.base_state
    ncols = len(states) + 1

    def stat(i):
        return states[i] if i < len(states) else base

    if a1:
        out = []
        for i in range(ncols):
            c = stat(i)[0]
            if i == 0 or c + 1 <= stat(i - 1)[0]:
                lvl = HalfInt.of(k - i + c)
                out.append(Site("add", "single", periodic_map(X, lvl), i, lvl,
                                lvl - i, host))
            if c >= 1 and c - 1 >= stat(i + 1)[0]:
                lvl = HalfInt.of(k - i + c - 1)
                out.append(Site("remove", "single", periodic_map(X, lvl), i,
                                lvl, lvl - i, host))
        return out

    heights = set()
    for (m, top) in states:
        if top == NONE and m >= 1:
            heights.add(m)
    truncated = ground in (SUPPORTING, COVERING)

    def ok(i, st):
        m, top = st
        if m == 0 and top == NONE:
            return False
        if (m, top) == (0, BACK) and ground == LEVEL1 and \
                column_pattern(X, k, ground, i, 1)[0].kind == "split":
            return False
        if i > 0 and not _covers(stat(i - 1), st, False):
            return False
        if not _covers(st, stat(i + 1), False):
            return False
        if top == NONE and m >= 1:
            old = stat(i)
            own = old[0] if old[1] == NONE and old[0] >= 1 else None
            if m in heights and m != own:
                return False
        return True

    out = []
    for i in range(ncols):
        m, top = stat(i)
        cells = column_pattern(X, k, ground, i, m + 2)
        if top == NONE:
            cell = cells[m]
            if cell.kind == "full":
                if ok(i, (m + 1, NONE)):
                    out.append(Site("add", "single", cell.colors[0], i,
                                    cell.level, cell.args[0], host))
            elif cell.kind == "split":
                for code, idx in ((BACK, 0), (FRONT, 1)):
                    if ok(i, (m, code)):
                        out.append(Site("add", "single", cell.colors[idx], i,
                                        cell.level, cell.args[idx], host))
            else:
                if ok(i, (m + 1, NONE)):
                    out.append(Site("add", "double", cell.colors[0], i,
                                    cell.level, cell.args[0], host))
                elif ok(i, (m, LOWER)):
                    out.append(Site("add", "single", cell.colors[0], i,
                                    cell.level, cell.args[0], host))
        elif top == LOWER:
            if not (truncated and m == 0):
                cell = cells[m]
                if ok(i, (m + 1, NONE)):
                    out.append(Site("add", "single", cell.colors[0], i,
                                    cell.level, cell.args[0], host))
        else:
            cell = cells[m]
            idx = 1 if top == BACK else 0
            if ok(i, (m + 1, NONE)):
                out.append(Site("add", "single", cell.colors[idx], i,
                                cell.level, cell.args[idx], host))
        if i >= len(states):
            continue
        if top == NONE and m >= 1:
            cell = cells[m - 1]
            if cell.kind == "full":
                if ok(i, (m - 1, NONE)):
                    out.append(Site("remove", "single", cell.colors[0], i,
                                    cell.level, cell.args[0], host))
            elif cell.kind == "split":
                for leave, idx in ((FRONT, 0), (BACK, 1)):
                    if m - 1 == 0 and ground == LEVEL1 and leave == BACK:
                        continue
                    if ok(i, (m - 1, leave)):
                        out.append(Site("remove", "single", cell.colors[idx],
                                        i, cell.level, cell.args[idx], host))
            else:
                ground_lower = m - 1 == 0 and (truncated or ground == LEVEL1)
                if truncated and m - 1 == 0:
                    continue
                if not ground_lower and ok(i, (m - 1, NONE)):
                    out.append(Site("remove", "double", cell.colors[0], i,
                                    cell.level, cell.args[0], host))
                elif ok(i, (m - 1, LOWER)):
                    out.append(Site("remove", "single", cell.colors[0], i,
                                    cell.level, cell.args[0], host))
        elif top == LOWER:
            if not ((truncated or ground == LEVEL1) and m == 0):
                cell = cells[m]
                if ok(i, (m, NONE)):
                    out.append(Site("remove", "single", cell.colors[0], i,
                                    cell.level, cell.args[0], host))
        else:
            if not (m == 0 and ground == LEVEL1 and top == FRONT):
                cell = cells[m]
                idx = 0 if top == BACK else 1
                if ok(i, (m, NONE)):
                    out.append(Site("remove", "single", cell.colors[idx], i,
                                    cell.level, cell.args[idx], host))
    return out


def _fast_pair_sites(p: WallPair):
    X, k = p.wall_type, p.k
    tbar = thresholds(X, k)[1]
    out = []
    sup, cov = p.supporting, p.covering
    for i in range(max(len(sup.states), len(cov.states)) + 1):
        ss, cs = sup.state(i), cov.state(i)
        if ss == (0, LOWER) and cs == (0, LOWER):
            if _try(sup, i, (1, NONE)) is not None and \
                    _try(cov, i, (1, NONE)) is not None:
                out.append(Site("add", "pair", k, i, tbar, tbar, "pair"))
        if ss == (1, NONE) and cs == (1, NONE):
            if _try(sup, i, (0, LOWER)) is not None and \
                    _try(cov, i, (0, LOWER)) is not None:
                out.append(Site("remove", "pair", k, i, tbar, tbar, "pair"))
    return out


def sites(w):
    if not is_proper(w):
        raise NotProper(w)
    if isinstance(w, WallPair):
        return (_fast_wall_sites(w.supporting, "supporting")
                + _fast_wall_sites(w.covering, "covering")
                + _fast_pair_sites(w))
    return _fast_wall_sites(w, "wall")


def apply(w, site: Site):
    for s, nxt in transitions(w):
        if s == site:
            if not is_proper(nxt):  # unreachable; kept as a guard
                raise ResultImproper(site)
            return nxt
    raise SiteNotPresent(site)


def _column_states(X, k, ground, budget):
    """All single-column states with at most `budget` added atoms."""
    base = (0, _base_top(X, k, ground))
    out = [base]
    if X.family is Family.A1:
        return [(c, NONE) for c in range(budget + 1)]
    atoms = -1  # the ground atom
    m = 0
    while True:
        cell = column_pattern(X, k, ground, 0, m + 1)[m]
        partials = []
        if cell.kind == "split":
            # the base split cell of a level-1 ground always keeps its
            # front atom, so its only partial state is the bare one
            partials = [] if (m == 0 and ground == LEVEL1) else [FRONT, BACK]
        elif cell.kind == "double":
            partials = [LOWER]
        for code in partials:
            st = (m, code)
            if st != base and atoms + 1 <= budget:
                out.append(st)
        atoms += cell.natoms
        m += 1
        if atoms > budget:
            break
        out.append((m, NONE))
    return out


def _state_atoms(X, k, ground, st):
    m, top = st
    if X.family is Family.A1:
        return m
    cells = column_pattern(X, k, ground, 0, m + 1)
    return sum(c.natoms for c in cells[:m]) + (0 if top == NONE else 1) - 1


def _wall_unchecked(X, k, ground, states):
    """Internal constructor bypassing validation for known-valid states."""
    w = object.__new__(Wall)
    object.__setattr__(w, "wall_type", X)
    object.__setattr__(w, "k", k)
    object.__setattr__(w, "ground", ground)
    object.__setattr__(w, "states", states)
    return w


def _enumerate_single(X, k, ground, max_blocks):
    base = (0, _base_top(X, k, ground))
    singles = [st for st in _column_states(X, k, ground, max_blocks)
               if st != base]
    cost = {st: _state_atoms(X, k, ground, st) for st in singles}
    a1 = X.family is Family.A1
    found = {_wall_unchecked(X, k, ground, ()): 0}

    def extend(prefix, prev, last_full, left):
        for st in singles:
            if prev is not None and not _covers(prev, st, a1):
                continue
            c = cost[st]
            if c > left:
                continue
            m, top = st
            full = not a1 and top == NONE and m >= 1
            if full and m == last_full:
                continue  # two full columns of equal height: improper
            nxt = prefix + (st,)
            found[_wall_unchecked(X, k, ground, nxt)] = max_blocks - left + c
            extend(nxt, st, m if full else last_full, left - c)

    extend((), None, 0, max_blocks)
    return found


def enumerate_walls(X: AffineType, k: int, max_blocks: int):
    """All proper walls (class 1) or wall pairs (class 2) with at most
    max_blocks added atoms."""
    if max_blocks < 0:
        raise ValueError(max_blocks)
    if index_class(X, k) == 1:
        return set(_enumerate_single(X, k, LEVEL1, max_blocks))
    sups = _enumerate_single(X, k, SUPPORTING, max_blocks)
    covs = _enumerate_single(X, k, COVERING, max_blocks)
    # synchronization: bare columns form a suffix, so the pair condition
    # is simply an equal number of non-bare columns
    by_len = {}
    for c, ca in covs.items():
        by_len.setdefault(len(c.states), []).append((c, ca))
    out = set()
    for s, sa in sups.items():
        for c, ca in by_len.get(len(s.states), ()):
            if sa + ca <= max_blocks:
                out.add(WallPair(s, c))
    return out


# --- rendering and literals ------------------------------------------


def _render_wall(w: Wall) -> str:
    X, k, ground = w.wall_type, w.k, w.ground
    ncols = max(len(w.states), 1)
    cols = []
    a1 = X.family is Family.A1
    height = max([w.state(i)[0] + (0 if w.state(i)[1] == NONE else 1)
                  for i in range(ncols)] + [1])
    for i in range(ncols + 1):  # one extra bare column on the left
        m, top = w.state(i)
        cells = column_pattern(X, k, ground, i, height + 1)
        rows = []  # two half-rows per unit cell, bottom first
        for mm in range(height):
            cell = cells[mm]
            if mm < m:
                have = 2
            elif mm == m and top != NONE:
                have = 1
            else:
                have = 0
            t = cell.colors[0]
            if cell.kind == "full" or a1:
                mark = f"{t:>2} " if have else " . "
                rows.extend([mark, mark])
            elif cell.kind == "double":
                lo = f"{t:>2}v" if have else " . "
                hi = f"{t:>2}^" if have == 2 else " . "
                rows.extend([lo, hi])
            else:
                back, front = cell.colors
                if have == 2:
                    fr, bk = f"{front:>2}f", f"{back:>2}b"
                elif have == 1:
                    if top == FRONT or (mm < m):
                        fr, bk = f"{front:>2}f", " . "
                    else:
                        fr, bk = " . ", f"{back:>2}b"
                else:
                    fr, bk = " . ", " . "
                rows.extend([fr, bk])
        cols.append(rows)
    cols.reverse()  # leftmost first
    lines = []
    for r in range(2 * height - 1, -1, -1):
        lines.append(" ".join(col[r] for col in cols))
    tk, tbar, tbarbar = thresholds(X, k)
    if ground == LEVEL1:
        baseline = tk if X.family is not Family.A1 else k
    else:
        baseline = tbar if ground == SUPPORTING else tbarbar
    lines.append(f"(0,{baseline})")
    return "\n".join(lines)


def render(w) -> str:
    if isinstance(w, WallPair):
        return (
            "supporting:\n" + _render_wall(w.supporting)
            + "\ncovering:\n" + _render_wall(w.covering)
        )
    return _render_wall(w)


_CODE = {"": None, "f": FRONT, "b": BACK, "l": LOWER}
_KIND = {"yw": LEVEL1, "sup": SUPPORTING, "cov": COVERING}


def _states_from_counts(X, k, ground, tokens):
    states = []
    for tok in tokens:
        m = re.fullmatch(r"(\d+)([fbl]?)", tok.strip())
        if not m:
            raise ValueError(f"bad column token {tok!r}")
        count, code = int(m.group(1)), m.group(2)
        states.append(_state_from_count(X, k, ground, count, code))
    return tuple(states)


def _state_from_count(X, k, ground, count, code=""):
    """Translate an added-atom count into a column state; an optional
    trailing code f/b/l picks the partial atom when ambiguous."""
    if X.family is Family.A1:
        if code:
            raise ValueError("A1 columns take plain counts")
        return (count, NONE)
    total = count + 1  # count the ground atom too
    acc = 0
    m = 0
    while True:
        cell = column_pattern(X, k, ground, 0, m + 1)[m]
        if acc == total:
            return (m, NONE)
        if acc + cell.natoms <= total:
            acc += cell.natoms
            m += 1
            continue
        # exactly one atom of this cell is present
        if cell.kind == "split":
            if m == 0 and ground == LEVEL1:
                top = FRONT  # the ground atom
            else:
                top = _CODE[code] if code else BACK
            if top not in (FRONT, BACK):
                raise ValueError(f"column code {code!r} does not fit")
        else:
            top = LOWER
        return (m, top)


def parse_wall(text: str, n: int):
    """Parse literals like 'ground=cov:C1:k=1;cols=[3,1]' (counts are
    added atoms per column, right to left; a trailing f/b on a count
    picks the front/back atom of a split cell)."""
    text = text.strip()
    m = re.fullmatch(
        r"ground=(yw|sup|cov|pair):([A-Za-z0-9]+):k=(\d+);(.*)", text
    )
    if not m:
        raise ValueError(f"unparsable wall literal {text!r}")
    kind, fam, k, rest = m.group(1), m.group(2), int(m.group(3)), m.group(4)
    X = parse_type(fam, n)
    if kind == "pair":
        mm = re.fullmatch(r"sup=\[([^\]]*)\];cov=\[([^\]]*)\]", rest)
        if not mm:
            raise ValueError(f"unparsable pair literal {text!r}")
        sup_toks = [t for t in mm.group(1).split(",") if t.strip()]
        cov_toks = [t for t in mm.group(2).split(",") if t.strip()]
        sup = Wall(X, k, SUPPORTING, _states_from_counts(X, k, SUPPORTING, sup_toks))
        cov = Wall(X, k, COVERING, _states_from_counts(X, k, COVERING, cov_toks))
        return WallPair(sup, cov)
    mm = re.fullmatch(r"cols=\[([^\]]*)\]", rest)
    if not mm:
        raise ValueError(f"unparsable wall literal {text!r}")
    toks = [t for t in mm.group(1).split(",") if t.strip()]
    ground = _KIND[kind]
    return Wall(X, k, ground, _states_from_counts(X, k, ground, toks))


def wall_literal(w) -> str:
    if isinstance(w, WallPair):
        sup = ",".join(_count_token(w.supporting, i) for i in range(len(w.supporting.states)))
        cov = ",".join(_count_token(w.covering, i) for i in range(len(w.covering.states)))
        X = w.wall_type
        return f"ground=pair:{X.family.value}:k={w.k};sup=[{sup}];cov=[{cov}]"
    kind = {LEVEL1: "yw", SUPPORTING: "sup", COVERING: "cov"}[w.ground]
    cols = ",".join(_count_token(w, i) for i in range(len(w.states)))
    return f"ground={kind}:{w.wall_type.family.value}:k={w.k};cols=[{cols}]"


def _count_token(w: Wall, i: int) -> str:
    count = w.column_atoms(i)
    m, top = w.state(i)
    suffix = ""
    if top == FRONT:
        suffix = "f"
    elif top == BACK:
        suffix = "b"
    return f"{count}{suffix}"

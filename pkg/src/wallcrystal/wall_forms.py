"""Linear forms attached to walls, the COMB inequality families for the
infinity crystal and for highest-weight crystals, and the star-twisted
string length computed from them."""

from __future__ import annotations

import json
from dataclasses import dataclass

from wallcrystal.affine_data import (
    AffineType, Family, HalfInt, cartan_entry, half_height_colors,
    in_domain, index_class, neighbors, next_domain_point, period,
    periodic_map, split_cell_pairs, thresholds,
)
from wallcrystal.adapted_sequence import AdaptedSequence, DoubleIndex
from wallcrystal.linear_forms import DominantWeight, LinearForm, render_form, x
from wallcrystal.walls import (
    Site, Wall, WallPair, enumerate_walls, ground_state, sites, wall_literal,
)


class HostMismatch(ValueError):
    pass


class OutOfRange(ValueError):
    pass


class NotStabilized(RuntimeError):
    pass


class Unsupported(NotImplementedError):
    pass


@dataclass(frozen=True)
class SiteForm:
    """The signed coordinate a single site contributes to a wall form."""

    site: Site
    coordinate: DoubleIndex
    direction: int  # +1 for admissible slots, -1 for removable blocks
    weight: int  # 2 for double slots/blocks, else 1


def _site_offset(seq: AdaptedSequence, k: int, site: Site) -> int:
    X = seq.wall_type
    if site.grade == "pair":
        off = site.column
    elif X.family is Family.A1:
        # the pattern level already carries the column shift: the absolute
        # bottom level of the cell is site.level + column
        P = seq.shift_table(HalfInt.of(k))
        off = P(site.level) + min(site.column,
                                  site.level.floor() + site.column - k)
    else:
        tbar, tbarbar = thresholds(X, k)[1:]
        P = seq.shift_table(tbarbar if site.host == "covering" else tbar)
        off = P(site.arg) + site.column
    if site.action == "remove":
        off += 1
    return off


def site_form(seq: AdaptedSequence, s: int, k: int, site: Site) -> SiteForm:
    X = seq.wall_type
    if X.family is Family.A1 or index_class(X, k) == 1:
        wanted = ("wall",)
    else:
        wanted = ("supporting", "covering", "pair")
    if site.host not in wanted:
        raise HostMismatch(f"host {site.host!r} for colour {k} of {X}")
    off = _site_offset(seq, k, site)
    return SiteForm(
        site=site,
        coordinate=DoubleIndex(s + off, site.color),
        direction=1 if site.action == "add" else -1,
        weight=2 if site.grade == "double" else 1,
    )


def wall_form(seq: AdaptedSequence, s: int, k: int, w) -> LinearForm:
    """L_{s,k}(w): signed weighted sum over admissible slots and removable
    blocks; coordinates with index below 1 vanish."""
    acc = {}
    for st in sites(w):
        sf = site_form(seq, s, k, st)
        m, t = sf.coordinate.s, sf.coordinate.k
        if m >= 1:
            d = DoubleIndex(m, t)
            acc[d] = acc.get(d, 0) + sf.direction * sf.weight
    return LinearForm(0, acc)


class IneqSet:
    """A canonicalized inequality family with per-form provenance."""

    def __init__(self, forms, provenance, meta):
        self.forms = frozenset(forms)
        self.provenance = dict(provenance)
        self.meta = dict(meta)

    def __len__(self):
        return len(self.forms)

    def __iter__(self):
        return iter(self.forms)

    def __contains__(self, phi):
        return phi in self.forms

    def to_text(self) -> str:
        return "\n".join(sorted(render_form(phi) for phi in self.forms))

    def to_json_doc(self) -> dict:
        doc = {
            "type": self.meta["type"],
            "rank": self.meta["rank"],
            "order": list(self.meta["order"]),
        }
        if "k" in self.meta:
            doc["k"] = self.meta["k"]
        if "lambda" in self.meta:
            doc["lambda"] = list(self.meta["lambda"])
        entries = []
        for phi in sorted(self.forms, key=render_form):
            entries.append({
                "constant": phi.constant,
                "terms": [[d.s, d.k, c] for d, c in phi.terms],
                "provenance": self.provenance.get(phi, ""),
            })
        doc["forms"] = entries
        return doc

    def to_json(self) -> str:
        return json.dumps(self.to_json_doc())


def _meta(seq, **extra):
    meta = {
        "type": seq.base_type.family.value,
        "rank": seq.base_type.n,
        "order": tuple(seq.period_perm),
    }
    meta.update(extra)
    return meta


_OFFSET_CACHE = {}


def _offset_profile(seq, k, w):
    """(offset, colour, signed weight) per site; shared across shifts s."""
    cache = _OFFSET_CACHE.setdefault(
        (seq.base_type, tuple(seq.period_perm), k), {})
    out = []
    for st in sites(w):
        key = (st.grade, st.action, st.host, st.column, st.level, st.arg)
        off = cache.get(key)
        if off is None:
            off = cache[key] = _site_offset(seq, k, st)
        c = (1 if st.action == "add" else -1) * (2 if st.grade == "double" else 1)
        out.append((off, st.color, c))
    return out


def _form_at(profile, s):
    acc = {}
    for off, t, c in profile:
        if s + off >= 1:
            d = DoubleIndex(s + off, t)
            acc[d] = acc.get(d, 0) + c
    return LinearForm(0, acc)


def comb_infinity(seq: AdaptedSequence, window, k=None, support_max=None) -> IneqSet:
    """{L_{s,k}(Y)} over 1 <= s <= s_max and walls within the block budget.

    With support_max given, the block budget is grown (in steps of the
    rank) until the subset supported within that single-index window is
    unchanged by a further step, and only that subset is returned.
    """
    s_max, block_max = window
    if s_max < 1 or block_max < 0:
        raise ValueError(window)
    colours = [k] if k is not None else list(seq.base_type.index_set)

    def generate(budget):
        forms, prov = {}, {}
        for kk in colours:
            for w in enumerate_walls(seq.wall_type, kk, budget):
                profile = _offset_profile(seq, kk, w)
                for s in range(1, s_max + 1):
                    phi = _form_at(profile, s)
                    if phi not in forms:
                        forms[phi] = True
                        prov[phi] = f"L[{s},{kk}]({wall_literal(w)})"
        return forms, prov

    if support_max is None:
        forms, prov = generate(block_max)
        return IneqSet(forms, prov, _meta(seq, k=k) if k is not None else _meta(seq))

    step = seq.n

    def windowed(forms):
        return {phi for phi in forms
                if all(seq.single_index(d) <= support_max for d in phi.support)}

    budget = max(block_max, 1)
    forms, prov = generate(budget)
    current = windowed(forms)
    while True:
        budget += step
        forms, prov = generate(budget)
        grown = windowed(forms)
        if grown == current:
            break
        current = grown
        if budget > 20 * seq.n:
            raise NotStabilized(f"window {support_max} not stable at budget {budget}")
    meta = _meta(seq, k=k) if k is not None else _meta(seq)
    return IneqSet(current, {phi: prov[phi] for phi in current}, meta)


# --- box forms (closed chains for highest-weight families) ------------


def _pi_ext(X: AffineType, t):
    """The periodic colour map extended periodically to integers below 1."""
    t = HalfInt.of(t)
    p = period(X)
    while t < 1:
        t = t + p
    return periodic_map(X, t)


def box_form(seq: AdaptedSequence, ell, r, variant: str = "plain") -> LinearForm:
    X = seq.wall_type
    fam = X.family
    n = X.n
    ell = HalfInt.of(ell)
    r = HalfInt.of(r)

    if fam is Family.A1:
        P = seq.shift_table(ell)
        if not (r.is_integer and ell.is_integer):
            raise OutOfRange((ell, r))
        if variant == "plain":
            if r < ell + 1:
                raise OutOfRange((ell, r, variant))
            return (x(P(r), periodic_map(X, r))
                    - x(1 + P(r - 1), periodic_map(X, r - 1)))
        if variant == "tilde":
            if r > ell:
                raise OutOfRange((ell, r, variant))
            return (x(P(r - 1), periodic_map(X, r - 1))
                    - x(1 + P(r), periodic_map(X, r)))
        raise OutOfRange(variant)

    P = seq.shift_table(ell)

    if variant == "half":
        base = r - HalfInt(1)
        if not (base.is_integer and in_domain(X, base) and base >= ell + 1):
            raise OutOfRange((ell, r, variant))
        t = periodic_map(X, base)
        if t not in half_height_colors(X):
            raise OutOfRange((ell, r, variant))
        return x(P(base), t) - x(1 + P(base), t)

    if not in_domain(X, r) or r < ell + 1:
        raise OutOfRange((ell, r, variant))
    pr = periodic_map(X, r)

    if variant == "tilde":
        seconds = {p[1] for p in split_cell_pairs(X)}
        if pr not in seconds:
            raise OutOfRange((ell, r, variant))
        if pr == 2:
            return x(P(r - HalfInt(1)), 1) - x(1 + P(r), 2)
        return x(P(r - HalfInt(1)), n - 1) - x(1 + P(r), n)  # D1 colour n
    if variant != "plain":
        raise OutOfRange(variant)

    halfs = half_height_colors(X)

    def scaled(c, m, t):
        return LinearForm(0, {DoubleIndex(m, t): c} if m >= 1 else {})

    def c_of(t_colour):
        return 2 if t_colour in halfs else 1

    if fam in (Family.C1, Family.A2EVEN, Family.A2EVEN_DAGGER, Family.D2):
        prev = r - 1
        pp = periodic_map(X, prev) if prev >= 1 else _pi_ext(X, prev)
        return scaled(c_of(pr), P(r), pr) - scaled(c_of(pp), 1 + P(prev), pp)

    if fam in (Family.B1, Family.A2ODD, Family.D1):
        if pr == 1:
            return (x(P(r), 1) + x(P(r + HalfInt(1)), 2)
                    - x(1 + P(r - 1), 3))
        if pr == 2:
            return x(P(r), 2) - x(1 + P(r - HalfInt(1)), 1)
        if pr == 3 and r - 1 >= 1 and in_domain(X, r - 1) \
                and periodic_map(X, r - 1) == 1:
            return (x(P(r), 3) - x(1 + P(r - HalfInt(1)), 2)
                    - x(1 + P(r - 1), 1))
        if fam is Family.D1:
            if pr == n - 2 and in_domain(X, r - 1) \
                    and periodic_map(X, r - 1) == n - 1:
                return (x(P(r), n - 2) - x(1 + P(r - HalfInt(1)), n)
                        - x(1 + P(r - 1), n - 1))
            if pr == n - 1:
                return (x(P(r), n - 1) + x(P(r + HalfInt(1)), n)
                        - x(1 + P(r - 1), n - 2))
            if pr == n:
                return x(P(r), n) - x(1 + P(r - HalfInt(1)), n - 1)
        prev = r - 1
        pp = periodic_map(X, prev)
        return scaled(c_of(pr), P(r), pr) - scaled(c_of(pp), 1 + P(prev), pp)

    raise Unsupported(f"no box forms for {X}")


def _box_points(X, ell, budget, kinds):
    """Domain points r with ell+1 <= r <= ell+budget, plus the phantom
    half points for the H family, tagged by variant."""
    out = []
    t = HalfInt.of(ell)
    stop = HalfInt.of(ell) + budget
    halfs = half_height_colors(X)
    seconds = {p[1] for p in split_cell_pairs(X)}
    while True:
        t = next_domain_point(X, t)
        if t > stop:
            break
        if t < HalfInt.of(ell) + 1:
            continue
        if "plain" in kinds:
            out.append((t, "plain"))
        if "half" in kinds and t.is_integer and periodic_map(X, t) in halfs:
            out.append((t + HalfInt(1), "half"))
        if "tilde" in kinds and periodic_map(X, t) in seconds:
            out.append((t, "tilde"))
    return out


def _box_family(seq, k, ell, budget, hk, kinds):
    X = seq.wall_type
    forms, prov = [], {}
    for r, variant in _box_points(X, ell, budget, kinds):
        phi = box_form(seq, ell, r, variant).shift_constant(hk)
        forms.append(phi)
        prov.setdefault(phi, f"{variant}[{ell},{r}]")
    return forms, prov


# --- COMB[lambda] -----------------------------------------------------


def _below(seq, t, k) -> bool:
    return seq.lt(DoubleIndex(1, t), DoubleIndex(1, k))


def _wall_family(seq, s, j, hk, budget, exclude_first=False):
    """{L_{s,j}(T) + hk} over the enumerated walls minus the ground (and
    minus the one-block wall when requested)."""
    X = seq.wall_type
    skip = {ground_state(X, j)}
    if exclude_first:
        g = ground_state(X, j)
        first = [st for st in sites(g) if st.action == "add" and st.column == 0]
        lowest = min(st.level for st in first)
        first = [st for st in first if st.level == lowest]
        assert len(first) == 1
        from wallcrystal.walls import apply as _apply
        skip.add(_apply(g, first[0]))
    forms, prov = [], {}
    for w in enumerate_walls(X, j, budget):
        if w in skip:
            continue
        phi = wall_form(seq, s, j, w).shift_constant(hk)
        forms.append(phi)
        prov.setdefault(phi, f"L[{s},{j}]({wall_literal(w)})")
    return forms, prov


def comb_lambda(seq: AdaptedSequence, k: int, lam: DominantWeight,
                window) -> IneqSet:
    """COMB_k[lambda] from the written case analysis.

    window is either an integer budget or a (s_max, budget) pair as in
    comb_infinity; the budget bounds both the box-chain length and the
    wall-enumeration block count.
    """
    budget = window[1] if isinstance(window, tuple) else window
    X = seq.wall_type
    fam = X.family
    n = X.n
    hk = lam.pairing(k)
    singleton = LinearForm(hk, {DoubleIndex(1, k): -1})
    meta = _meta(seq, k=k, **{"lambda": tuple(lam.values)})

    def result(forms, prov):
        return IneqSet(forms, prov, meta)

    def boxes(ell, kinds):
        forms, prov = _box_family(seq, k, ell, budget, hk, kinds)
        return result(forms, prov)

    def walls(s=0, j=None, exclude_first=False):
        forms, prov = _wall_family(seq, s, j if j is not None else k, hk,
                                   budget, exclude_first)
        return result(forms, prov)

    if fam is Family.A1:
        below_next = _below(seq, periodic_map(X, k + 1), k)
        below_prev = _below(seq, _pi_ext(X, k - 1), k)
        if not below_next and not below_prev:
            return result([singleton], {singleton: "singleton"})
        if not below_next and below_prev:
            forms, prov = [], {}
            for r in range(k, k - budget, -1):
                phi = box_form(seq, k, r, "tilde").shift_constant(hk)
                forms.append(phi)
                prov.setdefault(phi, f"tilde[{k},{r}]")
            return result(forms, prov)
        if below_next and not below_prev:
            return boxes(k, ("plain",))
        return walls()

    tbar, tbarbar = thresholds(X, k)[1:]

    if fam in (Family.C1, Family.A2EVEN, Family.A2EVEN_DAGGER, Family.D2):
        below_next = _below(seq, _pi_ext(X, k + 1), k)
        below_prev = _below(seq, _pi_ext(X, k - 1), k)
        if not below_next and not below_prev:
            return result([singleton], {singleton: "singleton"})
        if not below_next and below_prev:
            return boxes(tbarbar, ("plain", "half"))
        if below_next and not below_prev:
            return boxes(tbar, ("plain", "half"))
        return walls()

    if fam in (Family.B1, Family.A2ODD, Family.D1):
        fork_low = {1, 2}
        fork_high = {n - 1, n} if fam is Family.D1 else set()
        if k in fork_low or k in fork_high:
            (j,) = [j for j in neighbors(X, k)
                    if cartan_entry(X, k, j) == -1 and cartan_entry(X, j, k) == -1]
            if _below(seq, k, j):
                return result([singleton], {singleton: "singleton"})
            return walls()
        branch = (k == 3) or (fam is Family.D1 and k == n - 2)
        if fam is Family.D1 and n == 5 and k == 3:
            return comb_lambda_d1_middle(seq, k, lam, window)
        if not branch:
            below_next = _below(seq, periodic_map(X, k), k)
            below_prev = _below(seq, periodic_map(X, k - 2), k)
            if not below_next and not below_prev:
                return result([singleton], {singleton: "singleton"})
            kinds = ("plain", "half", "tilde")
            if not below_next and below_prev:
                return boxes(tbarbar, kinds)
            if below_next and not below_prev:
                return boxes(tbar, kinds)
            return walls()
        # the colour adjacent to a fork: j1, j2 the class-1 fork colours,
        # j3 the remaining neighbour
        if k == 3:
            j1, j2 = 1, 2
        else:
            j1, j2 = n - 1, n
        (j3,) = [j for j in neighbors(X, k) if j not in (j1, j2)]
        c1, c2, c3 = (_below(seq, t, k) for t in (j1, j2, j3))
        if not c1 and not c2 and not c3:
            return result([singleton], {singleton: "singleton"})
        if c1 != c2 and not c3:
            j = j1 if c1 else j2
            pair = [LinearForm(hk, {DoubleIndex(1, k): -1, DoubleIndex(1, j): 1}),
                    LinearForm(hk, {DoubleIndex(2, j): -1})]
            return result(pair, {pair[0]: f"pair[{j}]", pair[1]: f"pair[{j}]"})
        kinds = ("plain", "half", "tilde")
        if c1 and c2 and c3:
            return walls()
        if c1 != c2 and c3:
            j = j2 if c1 else j1
            return walls(s=-1, j=j, exclude_first=True)
        if (not c1 and not c2 and c3 and k == 3) or \
                (c1 and c2 and not c3 and k != 3):
            return boxes(tbar, kinds)
        return boxes(tbarbar, kinds)

    raise Unsupported(f"no written highest-weight case for {X}")


def comb_lambda_d1_middle(seq: AdaptedSequence, k: int, lam: DominantWeight,
                          window) -> IneqSet:
    """The middle colour of the smallest two-fork type: both fork pairs
    are adjacent to k=3, so the case split runs over the four neighbours."""
    budget = window[1] if isinstance(window, tuple) else window
    X = seq.wall_type
    if not (X.family is Family.D1 and X.n == 5 and k == 3):
        raise Unsupported((X, k))
    hk = lam.pairing(k)
    meta = _meta(seq, k=k, **{"lambda": tuple(lam.values)})
    singleton = LinearForm(hk, {DoubleIndex(1, k): -1})
    ranked = sorted([1, 2, 4, 5], key=lambda t: seq.single_index(DoubleIndex(1, t)))
    below = [t for t in ranked if _below(seq, t, k)]
    above = [t for t in ranked if not _below(seq, t, k)]
    if len(below) == 0:
        return IneqSet([singleton], {singleton: "singleton"}, meta)
    if len(below) == 1:
        a = below[0]
        pair = [LinearForm(hk, {DoubleIndex(1, 3): -1, DoubleIndex(1, a): 1}),
                LinearForm(hk, {DoubleIndex(2, a): -1})]
        return IneqSet(pair, {pair[0]: f"pair[{a}]", pair[1]: f"pair[{a}]"}, meta)
    if len(below) == 2:
        pairs = [(below[0], below[1]), (above[0], above[1])]
        forms, prov = [], {}
        for (r1, r2) in pairs:
            p31 = seq.p(3, r1)
            for s in range(1, 2 * budget, 2):  # odd shifts only
                chain = [
                    ("three-up", LinearForm(hk, {
                        DoubleIndex(s, r1): 1, DoubleIndex(s, r2): 1,
                        DoubleIndex(s + p31, 3): -1})),
                    ("step", LinearForm(hk, {
                        DoubleIndex(s, r1): 1, DoubleIndex(s + 1, r2): -1})),
                    ("step", LinearForm(hk, {
                        DoubleIndex(s, r2): 1, DoubleIndex(s + 1, r1): -1})),
                    ("three-down", LinearForm(hk, {
                        DoubleIndex(s + p31, 3): 1, DoubleIndex(s + 1, r1): -1,
                        DoubleIndex(s + 1, r2): -1})),
                ]
                for tag, phi in chain:
                    forms.append(phi)
                    prov.setdefault(phi, f"{tag}[{r1},{r2};{s}]")
        return IneqSet(forms, prov, meta)
    if len(below) == 3:
        d = above[0]
        forms, prov = _wall_family(seq, -1, d, hk, budget, exclude_first=True)
        return IneqSet(forms, prov, meta)
    forms, prov = _wall_family(seq, 0, 3, hk, budget)
    return IneqSet(forms, prov, meta)


# --- star-twisted string length ---------------------------------------


def epsilon_star(seq: AdaptedSequence, k: int, a, max_budget: int = 60) -> int:
    """max{-phi(a)} over COMB_k[0], grown until the frontier certifies
    that every further form evaluates to zero on a."""
    amap = dict(a)
    supp = {d for d, v in amap.items() if v}
    budget = 2
    prev = None
    while budget <= max_budget:
        forms = comb_lambda(seq, k, DominantWeight.zero(seq.n), budget).forms
        if prev is not None:
            frontier = forms - prev
            vals = [-phi.evaluate(amap) for phi in forms]
            if not frontier:
                return max(vals)  # the family is finite and complete
            if all(not (set(phi.support) & supp) for phi in frontier):
                return max(vals + [0])
        prev = forms
        budget += 2
    raise NotStabilized(f"no certificate for colour {k} within {max_budget}")

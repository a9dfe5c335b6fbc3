"""Finite groupoids with explicit structure tables.

Conventions used throughout the package:

* A groupoid consists of a finite unit set X and a finite set of arrows.
  Every arrow g has a domain dom(g) and a range ran(g) in X.  The product
  compose(g, h) -- read "h, then g" -- is defined exactly when
  dom(g) == ran(h); then dom(gh) == dom(h) and ran(gh) == ran(g).
* Arrows are identified by stable integer ids.  A reduction keeps the ids of
  its parent, so complex-valued functions on arrows restrict verbatim.
* Unit spaces are discrete and every fiber d^{-1}(x) carries counting
  measure; no other fiber measures are modelled.  Right translation by g is
  a bijection from d^{-1}(ran g) onto d^{-1}(dom g), which is exactly the
  invariance the counting measures need.

Structure tables are stored as plain dicts and never mutated after
construction; all operations in this package treat groupoids (and groups)
as immutable values, so concurrent evaluation is safe.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .errors import InputError


class FiniteGroup:
    """A finite group given by its multiplication table."""

    def __init__(self, elements, mul, identity):
        self.elements = tuple(elements)
        if len(set(self.elements)) != len(self.elements):
            raise InputError("duplicate group elements")
        if identity not in self.elements:
            raise InputError("identity is not an element")
        self.identity = identity
        self._mul = {(a, b): mul[(a, b)] for a in self.elements for b in self.elements}
        self._inv = {}
        for a in self.elements:
            for b in self.elements:
                if self._mul[(a, b)] == identity and self._mul[(b, a)] == identity:
                    self._inv[a] = b
                    break
            else:
                raise InputError(f"element {a!r} has no inverse")

    def __len__(self):
        return len(self.elements)

    def mul(self, a, b):
        return self._mul[(a, b)]

    def inv(self, a):
        return self._inv[a]

    def element_order(self, a):
        k, b = 1, a
        while b != self.identity:
            b = self.mul(b, a)
            k += 1
        return k

    def order_profile(self):
        """Sorted tuple of element orders; an isomorphism invariant."""
        return tuple(sorted(self.element_order(a) for a in self.elements))

    def check(self):
        """List of violated group axioms (empty when the table is a group)."""
        bad = []
        for a, b in itertools.product(self.elements, repeat=2):
            if self._mul[(a, b)] not in self.elements:
                bad.append(f"product {a!r}*{b!r} escapes the element set")
        for a in self.elements:
            if self._mul[(self.identity, a)] != a or self._mul[(a, self.identity)] != a:
                bad.append(f"identity law fails at {a!r}")
        for a, b, c in itertools.product(self.elements, repeat=3):
            if self._mul[(self._mul[(a, b)], c)] != self._mul[(a, self._mul[(b, c)])]:
                bad.append(f"associativity fails at ({a!r},{b!r},{c!r})")
        return bad

    @classmethod
    def cyclic(cls, n):
        elements = tuple(range(n))
        mul = {(a, b): (a + b) % n for a in elements for b in elements}
        return cls(elements, mul, 0)

    @classmethod
    def klein_four(cls):
        elements = ("e", "a", "b", "c")
        idx = {e: i for i, e in enumerate(elements)}
        mul = {}
        for x in elements:
            for y in elements:
                mul[(x, y)] = elements[idx[x] ^ idx[y]]
        return cls(elements, mul, "e")

    @classmethod
    def from_table(cls, elements, table, identity):
        g = cls(elements, table, identity)
        bad = g.check()
        if bad:
            raise InputError("not a group: " + "; ".join(bad[:3]))
        return g


class FiniteGroupoid:
    """A finite groupoid over a discrete unit space.

    Parameters are the raw structure tables:

    units       ordered sequence of unit labels (hashable, distinct)
    dom, ran    dicts arrow id -> unit
    inverse     dict arrow id -> arrow id
    unit_arrow  dict unit -> arrow id of the embedded unit
    compose     dict (g, h) -> gh for the composable pairs

    No axioms are enforced here; run :func:`validate` to obtain a report.
    """

    def __init__(self, units, dom, ran, inverse, unit_arrow, compose):
        self.units = tuple(units)
        if len(set(self.units)) != len(self.units):
            raise InputError("duplicate units")
        self.dom = dict(dom)
        self.ran = dict(ran)
        self.inverse = dict(inverse)
        self.unit_arrow = dict(unit_arrow)
        self.compose_table = dict(compose)
        self.arrows = tuple(sorted(self.dom))
        if set(self.ran) != set(self.dom):
            raise InputError("dom and ran tables disagree on the arrow set")
        self._fiber = {x: [] for x in self.units}
        self._cofiber = {x: [] for x in self.units}
        for g in self.arrows:
            d, r = self.dom[g], self.ran[g]
            if d not in self._fiber or r not in self._cofiber:
                raise InputError(f"arrow {g} has an endpoint outside the unit set")
            self._fiber[d].append(g)
            self._cofiber[r].append(g)
        self._fiber = {x: tuple(v) for x, v in self._fiber.items()}
        self._cofiber = {x: tuple(v) for x, v in self._cofiber.items()}

    # -- basic queries ----------------------------------------------------

    def n_units(self):
        return len(self.units)

    def n_arrows(self):
        return len(self.arrows)

    def fiber(self, x):
        """Arrows with domain x, i.e. d^{-1}(x), in ascending id order."""
        return self._fiber[x]

    def cofiber(self, x):
        """Arrows with range x, i.e. r^{-1}(x)."""
        return self._cofiber[x]

    def hom(self, x, y):
        """Arrows from x to y (dom = x, ran = y)."""
        return tuple(g for g in self._fiber[x] if self.ran[g] == y)

    def compose(self, g, h):
        try:
            return self.compose_table[(g, h)]
        except KeyError:
            raise InputError(f"arrows {g} and {h} are not composable") from None

    def try_compose(self, g, h):
        return self.compose_table.get((g, h))

    def inv(self, g):
        return self.inverse[g]

    def is_unit_arrow(self, g):
        return self.unit_arrow.get(self.dom[g]) == g

    def __repr__(self):
        return f"FiniteGroupoid({self.n_units()} units, {self.n_arrows()} arrows)"


# -- validation -----------------------------------------------------------


@dataclass(frozen=True)
class Violation:
    rule: str
    detail: str

    def __str__(self):
        return f"[{self.rule}] {self.detail}"


@dataclass(frozen=True)
class ValidationReport:
    violations: tuple

    @property
    def ok(self):
        return not self.violations

    def lines(self):
        if self.ok:
            return ("all groupoid axioms hold",)
        return tuple(str(v) for v in self.violations)


def validate(G):
    """Check every groupoid axiom; violations are report entries, not errors."""
    bad = []
    arrows = set(G.arrows)

    def add(rule, detail):
        bad.append(Violation(rule, detail))

    # Well-formedness of the tables first; the axiom checks below assume it.
    for g in G.arrows:
        if G.dom[g] not in G.units:
            add("tables", f"dom({g}) is not a unit")
        if G.ran[g] not in G.units:
            add("tables", f"ran({g}) is not a unit")
    for g, gi in G.inverse.items():
        if g not in arrows or gi not in arrows:
            add("tables", f"inverse entry {g}->{gi} references unknown arrows")
    if set(G.inverse) != arrows:
        add("tables", "inverse is not total on the arrow set")
    for x in G.units:
        if x not in G.unit_arrow:
            add("tables", f"unit {x!r} has no unit arrow")
        elif G.unit_arrow[x] not in arrows:
            add("tables", f"unit arrow of {x!r} is not an arrow")
    for (g, h), k in G.compose_table.items():
        if g not in arrows or h not in arrows or k not in arrows:
            add("tables", f"compose entry ({g},{h})->{k} references unknown arrows")
    if bad:
        return ValidationReport(tuple(bad))

    for x in G.units:
        u = G.unit_arrow[x]
        if G.dom[u] != x or G.ran[u] != x:
            add("unit-endpoints", f"unit arrow {u} of {x!r} has endpoints "
                f"({G.dom[u]!r},{G.ran[u]!r})")

    for g in G.arrows:
        gi = G.inverse[g]
        if G.inverse[gi] != g:
            add("inverse-involution", f"inverse(inverse({g})) = {G.inverse[gi]}")
        if G.dom[gi] != G.ran[g] or G.ran[gi] != G.dom[g]:
            add("inverse-endpoints", f"inverse({g}) = {gi} does not swap endpoints")

    for g in G.arrows:
        for h in G.arrows:
            defined = (g, h) in G.compose_table
            composable = G.dom[g] == G.ran[h]
            if defined and not composable:
                add("compose-domain", f"({g},{h}) is in the table but dom({g}) != ran({h})")
            if composable and not defined:
                add("compose-domain", f"({g},{h}) is composable but not in the table")
            if defined and composable:
                k = G.compose_table[(g, h)]
                if G.dom[k] != G.dom[h] or G.ran[k] != G.ran[g]:
                    add("product-endpoints", f"{g}*{h} = {k} has wrong endpoints")

    for g in G.arrows:
        ur = G.unit_arrow.get(G.ran[g])
        ud = G.unit_arrow.get(G.dom[g])
        if ur is not None and G.compose_table.get((ur, g)) != g:
            add("unit-law", f"u(ran)*{g} != {g}")
        if ud is not None and G.compose_table.get((g, ud)) != g:
            add("unit-law", f"{g}*u(dom) != {g}")
        gi = G.inverse[g]
        if G.compose_table.get((g, gi)) != G.unit_arrow.get(G.ran[g]):
            add("inverse-law", f"{g}*{g}^-1 != u(ran({g}))")
        if G.compose_table.get((gi, g)) != G.unit_arrow.get(G.dom[g]):
            add("inverse-law", f"{g}^-1*{g} != u(dom({g}))")

    for (g, h), gh in G.compose_table.items():
        for k in G.cofiber(G.dom[h]):
            hk = G.compose_table.get((h, k))
            first = G.compose_table.get((gh, k))
            second = G.compose_table.get((g, hk)) if hk is not None else None
            if first != second:
                add("associativity", f"({g}*{h})*{k} = {first} but {g}*({h}*{k}) = {second}")

    return ValidationReport(tuple(bad))


# -- elementary operations ------------------------------------------------


def _check_subset(G, A):
    A = frozenset(A)
    stray = A - set(G.units)
    if stray:
        raise InputError(f"subset members {sorted(map(str, stray))} are not units")
    return A


def reduction(G, A):
    """The subgroupoid of arrows with both endpoints in A, over units A.

    Arrow ids are inherited from G.
    """
    A = _check_subset(G, A)
    keep = {g for g in G.arrows if G.dom[g] in A and G.ran[g] in A}
    return FiniteGroupoid(
        units=tuple(x for x in G.units if x in A),
        dom={g: G.dom[g] for g in keep},
        ran={g: G.ran[g] for g in keep},
        inverse={g: G.inverse[g] for g in keep},
        unit_arrow={x: G.unit_arrow[x] for x in A},
        compose={(g, h): k for (g, h), k in G.compose_table.items()
                 if g in keep and h in keep},
    )


def saturation(G, U):
    """All units reachable from U: { ran(g) : dom(g) in U }."""
    U = _check_subset(G, U)
    return frozenset(G.ran[g] for g in G.arrows if G.dom[g] in U)


def is_invariant(G, U):
    U = _check_subset(G, U)
    return saturation(G, U) == U


def orbits(G):
    """Partition of the units into reachability classes, in unit order."""
    parent = {x: x for x in G.units}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for g in G.arrows:
        a, b = find(G.dom[g]), find(G.ran[g])
        if a != b:
            parent[a] = b
    groups = {}
    for x in G.units:
        groups.setdefault(find(x), []).append(x)
    seen, out = set(), []
    for x in G.units:
        root = find(x)
        if root not in seen:
            seen.add(root)
            out.append(frozenset(groups[root]))
    return tuple(out)


def isotropy(G, x):
    """The isotropy group at x: arrows with dom = ran = x, under composition."""
    if x not in G.units:
        raise InputError(f"{x!r} is not a unit")
    elements = tuple(g for g in G.fiber(x) if G.ran[g] == x)
    mul = {(a, b): G.compose_table[(a, b)] for a in elements for b in elements}
    return FiniteGroup(elements, mul, G.unit_arrow[x])


# -- builders ---------------------------------------------------------------


def pair_groupoid(units):
    """The pair groupoid: exactly one arrow (a, b) from b to a, for all a, b."""
    units = tuple(units)
    n = len(units)
    idx = {x: i for i, x in enumerate(units)}
    dom, ran, inverse, compose = {}, {}, {}, {}
    # arrow i*n + j represents (units[i], units[j]) : units[j] -> units[i]
    for i, j in itertools.product(range(n), repeat=2):
        a = i * n + j
        ran[a] = units[i]
        dom[a] = units[j]
        inverse[a] = j * n + i
    unit_arrow = {x: idx[x] * n + idx[x] for x in units}
    for i, j, k in itertools.product(range(n), repeat=3):
        compose[(i * n + j, j * n + k)] = i * n + k
    return FiniteGroupoid(units, dom, ran, inverse, unit_arrow, compose)


def pair_arrow(G, a, b):
    """The unique arrow b -> a of a pair-groupoid-like hom set."""
    hom = G.hom(b, a)
    if len(hom) != 1:
        raise InputError(f"hom({b!r},{a!r}) is not a singleton")
    return hom[0]


def group_groupoid(group, unit="*"):
    """A group viewed as a groupoid over a single unit."""
    elements = group.elements
    dom = {i: unit for i in range(len(elements))}
    ran = dict(dom)
    index = {e: i for i, e in enumerate(elements)}
    inverse = {i: index[group.inv(e)] for i, e in enumerate(elements)}
    compose = {(i, j): index[group.mul(elements[i], elements[j])]
               for i in range(len(elements)) for j in range(len(elements))}
    return FiniteGroupoid((unit,), dom, ran, inverse, {unit: index[group.identity]},
                          compose)


def action_groupoid(units, group, act):
    """The transformation groupoid of a right action of ``group`` on ``units``.

    ``act`` maps (unit, element) to a unit and must satisfy the right-action
    laws  act(x, e) == x  and  act(act(x, g), h) == act(x, g*h).  The arrow
    (x, g) runs from act(x, inv(g)) to x, and
    (x, g) * (act(x, inv(g)), h) == (x, h*g).
    """
    units = tuple(units)
    if callable(act):
        action = {(x, g): act(x, g) for x in units for g in group.elements}
    else:
        action = dict(act)
    for x in units:
        for g in group.elements:
            if (x, g) not in action or action[(x, g)] not in units:
                raise InputError(f"action undefined or escapes units at ({x!r},{g!r})")
    for x in units:
        if action[(x, group.identity)] != x:
            raise InputError(f"action identity law fails at {x!r}")
    for x in units:
        for g in group.elements:
            for h in group.elements:
                if action[(action[(x, g)], h)] != action[(x, group.mul(g, h))]:
                    raise InputError(
                        "action compatibility fails at "
                        f"(x={x!r}, g={g!r}, h={h!r}): "
                        f"act(act(x,g),h) != act(x, g*h)")

    uidx = {x: i for i, x in enumerate(units)}
    gidx = {g: i for i, g in enumerate(group.elements)}
    ng = len(group.elements)

    def aid(x, g):
        return uidx[x] * ng + gidx[g]

    dom, ran, inverse, compose = {}, {}, {}, {}
    for x in units:
        for g in group.elements:
            a = aid(x, g)
            ran[a] = x
            dom[a] = action[(x, group.inv(g))]
            inverse[a] = aid(action[(x, group.inv(g))], group.inv(g))
    unit_arrow = {x: aid(x, group.identity) for x in units}
    for x in units:
        for g in group.elements:
            y = action[(x, group.inv(g))]
            for h in group.elements:
                compose[(aid(x, g), aid(y, h))] = aid(x, group.mul(h, g))
    return FiniteGroupoid(units, dom, ran, inverse, unit_arrow, compose)


def disjoint_union(pieces):
    """Disjoint union of groupoids with pairwise disjoint unit sets.

    Arrow ids are renumbered densely, piece after piece in input order.
    """
    units, dom, ran, inverse, unit_arrow, compose = [], {}, {}, {}, {}, {}
    offset = 0
    for G in pieces:
        if set(G.units) & set(units):
            raise InputError("pieces of a disjoint union share units")
        remap = {g: offset + i for i, g in enumerate(G.arrows)}
        units.extend(G.units)
        for g in G.arrows:
            dom[remap[g]] = G.dom[g]
            ran[remap[g]] = G.ran[g]
            inverse[remap[g]] = remap[G.inverse[g]]
        for x in G.units:
            unit_arrow[x] = remap[G.unit_arrow[x]]
        for (g, h), k in G.compose_table.items():
            compose[(remap[g], remap[h])] = remap[k]
        offset += G.n_arrows()
    return FiniteGroupoid(units, dom, ran, inverse, unit_arrow, compose)


def direct_product(A, B):
    """Direct product groupoid over the product unit set.

    The arrow pair (g, h) gets id index(g) * |arrows B| + index(h), with
    indices taken in each factor's ascending id order.
    """
    aidx = {g: i for i, g in enumerate(A.arrows)}
    bidx = {h: i for i, h in enumerate(B.arrows)}
    nb = B.n_arrows()

    def pid(g, h):
        return aidx[g] * nb + bidx[h]

    units = tuple((x, y) for x in A.units for y in B.units)
    dom, ran, inverse, compose = {}, {}, {}, {}
    for g in A.arrows:
        for h in B.arrows:
            a = pid(g, h)
            dom[a] = (A.dom[g], B.dom[h])
            ran[a] = (A.ran[g], B.ran[h])
            inverse[a] = pid(A.inverse[g], B.inverse[h])
    unit_arrow = {(x, y): pid(A.unit_arrow[x], B.unit_arrow[y]) for (x, y) in units}
    for (g1, h1), k1 in A.compose_table.items():
        for (g2, h2), k2 in B.compose_table.items():
            compose[(pid(g1, g2), pid(h1, h2))] = pid(k1, k2)
    return FiniteGroupoid(units, dom, ran, inverse, unit_arrow, compose)


def relabel_units(G, mapping):
    """A copy of G with units renamed through ``mapping`` (a bijection)."""
    mapping = dict(mapping)
    if set(mapping) != set(G.units) or len(set(mapping.values())) != len(G.units):
        raise InputError("relabelling must be a bijection defined on all units")
    return FiniteGroupoid(
        units=tuple(mapping[x] for x in G.units),
        dom={g: mapping[G.dom[g]] for g in G.arrows},
        ran={g: mapping[G.ran[g]] for g in G.arrows},
        inverse=G.inverse,
        unit_arrow={mapping[x]: a for x, a in G.unit_arrow.items()},
        compose=G.compose_table,
    )


def permute_arrow_ids(G, perm):
    """A copy of G with arrow ids renamed through ``perm`` (a bijection)."""
    perm = dict(perm)
    if set(perm) != set(G.arrows) or len(set(perm.values())) != len(G.arrows):
        raise InputError("permutation must be a bijection defined on all arrows")
    return FiniteGroupoid(
        units=G.units,
        dom={perm[g]: G.dom[g] for g in G.arrows},
        ran={perm[g]: G.ran[g] for g in G.arrows},
        inverse={perm[g]: perm[gi] for g, gi in G.inverse.items()},
        unit_arrow={x: perm[a] for x, a in G.unit_arrow.items()},
        compose={(perm[g], perm[h]): perm[k] for (g, h), k in G.compose_table.items()},
    )


# -- morphisms --------------------------------------------------------------


class GroupoidMorphism:
    """A morphism of finite groupoids given by unit and arrow maps."""

    def __init__(self, source, target, unit_map, arrow_map):
        self.source = source
        self.target = target
        self.unit_map = dict(unit_map)
        self.arrow_map = dict(arrow_map)

    @classmethod
    def identity(cls, G):
        return cls(G, G, {x: x for x in G.units}, {g: g for g in G.arrows})

    def check(self):
        """List of violated morphism laws (empty when structural)."""
        bad = []
        S, T = self.source, self.target
        if set(self.unit_map) != set(S.units):
            bad.append("unit map is not total")
        if set(self.arrow_map) != set(S.arrows):
            bad.append("arrow map is not total")
        if bad:
            return bad
        for x, y in self.unit_map.items():
            if y not in T.units:
                bad.append(f"unit {x!r} maps outside the target units")
        for g, k in self.arrow_map.items():
            if k not in set(T.arrows):
                bad.append(f"arrow {g} maps outside the target arrows")
                return bad
            if T.dom[k] != self.unit_map[S.dom[g]]:
                bad.append(f"dom not preserved at arrow {g}")
            if T.ran[k] != self.unit_map[S.ran[g]]:
                bad.append(f"ran not preserved at arrow {g}")
            if self.arrow_map[S.inverse[g]] != T.inverse[k]:
                bad.append(f"inverse not preserved at arrow {g}")
        for x in S.units:
            if self.arrow_map[S.unit_arrow[x]] != T.unit_arrow[self.unit_map[x]]:
                bad.append(f"unit arrow not preserved at {x!r}")
        for (g, h), k in S.compose_table.items():
            img = T.compose_table.get((self.arrow_map[g], self.arrow_map[h]))
            if img != self.arrow_map[k]:
                bad.append(f"composition not preserved at ({g},{h})")
        return bad

    def is_isomorphism(self):
        if self.check():
            return False
        units_onto = len(set(self.unit_map.values())) == len(self.target.units)
        arrows_onto = len(set(self.arrow_map.values())) == len(self.target.arrows)
        return (units_onto and arrows_onto
                and len(set(self.unit_map.values())) == len(self.unit_map)
                and len(set(self.arrow_map.values())) == len(self.arrow_map))

    def inverse_morphism(self):
        if not self.is_isomorphism():
            raise InputError("only isomorphisms can be inverted")
        return GroupoidMorphism(
            self.target, self.source,
            {y: x for x, y in self.unit_map.items()},
            {k: g for g, k in self.arrow_map.items()},
        )

    def then(self, other):
        """The composite ``other after self`` (self first)."""
        if other.source is not self.target and set(other.source.arrows) != set(self.target.arrows):
            raise InputError("morphisms are not composable")
        return GroupoidMorphism(
            self.source, other.target,
            {x: other.unit_map[y] for x, y in self.unit_map.items()},
            {g: other.arrow_map[k] for g, k in self.arrow_map.items()},
        )

    def __repr__(self):
        return (f"GroupoidMorphism({self.source!r} -> {self.target!r})")

"""Block decomposition and induced representations of finite groupoid algebras.

The algebra of a finite groupoid is modelled faithfully by the direct sum of
one regular representation per orbit.  Its simple (Wedderburn) blocks are
extracted numerically:

1. solve the commutation system M A_g = A_g M over all generators exactly --
   the generators are partial permutation matrices, so the system reduces to
   equality/zero constraints on matrix entries, handled by union-find;
2. sample a random self-adjoint element of the commutant (seeded) and split
   the representation space along its eigenvalue clusters;
3. group equivalent sub-blocks by comparing generator traces and keep one
   representative per class.

Every block corresponds to one irreducible representation, hence to one
primitive ideal (its kernel).  Induction from the algebra of a reduction is
realised through corner restriction: the functions supported on the
reduction form the corner cut out by the projection summing the unit deltas
over the subset, and a block of the big algebra induces from block j exactly
when j appears in the decomposition of its corner restriction.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .convolution import ArrowFunction, regular_rep, reduced_norm
from .errors import AmbiguityError, CoverPreconditionError, InputError
from .groupoid import orbits, reduction, saturation, validate

CLUSTER_TOL = 1e-9
# Gaps between genuinely degenerate eigenvalues sit at the noise floor
# (~1e-13 at desk scale), one decade under the clustering tolerance is a
# safe ambiguity band; gaps above it are real and split cleanly.
CLUSTER_GRAY_ZONE = 1e-8
TRACE_TOL = 1e-8
ANNIHILATION_TOL = 1e-9
MULTIPLICITY_TOL = 1e-6


# -- the concrete algebra ---------------------------------------------------


class ConcreteAlgebra:
    """A faithful matrix model: one regular representation per orbit, summed."""

    def __init__(self, groupoid, base_units, positions, generator_maps):
        self.groupoid = groupoid
        self.base_units = tuple(base_units)
        self.positions = tuple(positions)  # (base unit, fiber arrow) per coordinate
        self.dim = len(positions)
        self.generator_maps = generator_maps  # arrow id -> {col -> row}

    def generator_matrix(self, g):
        M = np.zeros((self.dim, self.dim))
        for col, row in self.generator_maps[g].items():
            M[row, col] = 1.0
        return M

    def rep(self, f):
        """The matrix of a function (defined on a sub-arrow-set is fine)."""
        M = np.zeros((self.dim, self.dim), dtype=complex)
        for g, v in f.values.items():
            for col, row in self.generator_maps[g].items():
                M[row, col] += v
        return M


def concrete_algebra(G):
    """Build the orbit-summed regular representation model of the algebra.

    Requires a clean :func:`validate` report; verifies faithfulness (the
    generator matrices have pairwise disjoint supports and none vanishes).
    """
    report = validate(G)
    if not report.ok:
        raise InputError("groupoid fails validation: " + report.lines()[0])
    bases = [min(orb, key=lambda x: G.units.index(x)) for orb in orbits(G)]
    positions = []
    for x in bases:
        positions.extend((x, a) for a in G.fiber(x))
    index = {pos: i for i, pos in enumerate(positions)}
    generator_maps = {}
    for g in G.arrows:
        pmap = {}
        for x in bases:
            for y in G.fiber(x):
                if G.ran[y] != G.dom[g]:
                    continue
                pmap[index[(x, y)]] = index[(x, G.compose_table[(g, y)])]
        generator_maps[g] = pmap
    alg = ConcreteAlgebra(G, bases, positions, generator_maps)

    seen = {}
    for g in G.arrows:
        if not generator_maps[g]:
            raise AmbiguityError(f"generator of arrow {g} vanishes; model not faithful")
        for col, row in generator_maps[g].items():
            if (row, col) in seen:
                raise AmbiguityError("generator supports overlap; model not faithful")
            seen[(row, col)] = g
    return alg


# -- exact commutant --------------------------------------------------------


def commutant_basis(alg):
    """A basis of {M : M A_g = A_g M for all g}, as 0/1 indicator matrices.

    Each generator is a partial permutation p (column -> row), so the
    commutation equations say exactly: entries at (p^{-1} i, j) and (i, p j)
    agree whenever both positions exist, and an entry is zero whenever only
    one of them does.  Union-find over the entry grid solves this exactly.
    """
    D = alg.dim
    parent = list(range(D * D))
    zero = [False] * (D * D)

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    def union(i, j):
        ri, rj = find(i), find(j)
        if ri != rj:
            parent[ri] = rj

    for g in alg.groupoid.arrows:
        p = alg.generator_maps[g]
        p_inv = {row: col for col, row in p.items()}
        dom = p.keys()
        img = p_inv.keys()
        for i in range(D):
            for j in range(D):
                left = (p_inv[i] * D + j) if i in img else None
                right = (i * D + p[j]) if j in dom else None
                if left is not None and right is not None:
                    union(left, right)
                elif left is not None:
                    zero[left] = True
                elif right is not None:
                    zero[right] = True

    dead = set()
    for cell in range(D * D):
        if zero[cell]:
            dead.add(find(cell))
    classes = {}
    for cell in range(D * D):
        root = find(cell)
        if root in dead:
            continue
        classes.setdefault(root, []).append(cell)
    basis = []
    for root in sorted(classes):
        M = np.zeros((D, D))
        for cell in classes[root]:
            M[divmod(cell, D)] = 1.0
        basis.append(M)
    return basis


# -- blocks -----------------------------------------------------------------


@dataclass(frozen=True)
class Block:
    """One simple summand: an irreducible quotient of the algebra."""

    label: str
    dim: int
    multiplicity: int
    isometry: np.ndarray = field(repr=False, compare=False)  # D x dim
    traces: tuple  # tr on each arrow delta, in arrow order

    def apply(self, alg, f):
        """The block image of an arrow function (sub-arrow-set tables allowed)."""
        return self.isometry.conj().T @ alg.rep(f) @ self.isometry

    def apply_arrow(self, alg, g):
        Q = self.isometry
        return Q.conj().T @ alg.generator_matrix(g).astype(complex) @ Q


@dataclass(frozen=True)
class BlockDecomposition:
    algebra: ConcreteAlgebra
    blocks: tuple

    @property
    def labels(self):
        return tuple(b.label for b in self.blocks)

    def block(self, label):
        for b in self.blocks:
            if b.label == label:
                return b
        raise InputError(f"no block labelled {label!r}")

    def block_norm(self, f):
        """The C*-norm of f computed in the block model."""
        best = 0.0
        for b in self.blocks:
            M = b.apply(self.algebra, f)
            if M.size:
                best = max(best, float(np.linalg.norm(M, 2)))
        return best

    def character_matrix(self):
        """Traces of all blocks on all arrow deltas; rows follow arrow order."""
        arrows = self.algebra.groupoid.arrows
        X = np.zeros((len(arrows), len(self.blocks)), dtype=complex)
        for j, b in enumerate(self.blocks):
            X[:, j] = b.traces
        return X

    def multiplicities_of(self, trace_vector):
        """Decompose a representation, given its traces on the arrow deltas.

        Returns a dict label -> nonnegative integer multiplicity.  The
        characters of inequivalent blocks are linearly independent, so a
        least-squares solve followed by integer rounding is exact up to
        numerical noise; a large residual raises AmbiguityError.
        """
        X = self.character_matrix()
        t = np.asarray(trace_vector, dtype=complex)
        m, *_ = np.linalg.lstsq(X, t, rcond=None)
        rounded = np.round(m.real)
        if (np.max(np.abs(m - rounded)) > MULTIPLICITY_TOL
                or np.min(rounded) < -0.5
                or np.linalg.norm(X @ rounded - t) > MULTIPLICITY_TOL * max(1.0, np.linalg.norm(t))):
            raise AmbiguityError("representation does not decompose integrally "
                                 "into the computed blocks")
        return {b.label: int(r) for b, r in zip(self.blocks, rounded)}

    def support_of(self, trace_vector):
        mult = self.multiplicities_of(trace_vector)
        return frozenset(label for label, m in mult.items() if m > 0)


def _cluster_eigenvalues(eigenvalues, tol, gray):
    """Split a sorted eigenvalue array at gaps > tol; gray-zone gaps error out."""
    splits = [0]
    for i in range(1, len(eigenvalues)):
        gap = eigenvalues[i] - eigenvalues[i - 1]
        if gap > tol:
            if gap < gray:
                raise AmbiguityError(
                    f"eigenvalue gap {gap:.3e} falls between the cluster "
                    f"tolerance and its safety margin; re-run with a "
                    f"different seed")
            splits.append(i)
    splits.append(len(eigenvalues))
    return [(splits[k], splits[k + 1]) for k in range(len(splits) - 1)]


def wedderburn(alg, seed=0, cluster_tol=CLUSTER_TOL, trace_tol=TRACE_TOL):
    """Split the concrete algebra into its simple blocks.

    Deterministic given (algebra, seed).  Block labels are canonical: they
    depend only on the block dimensions and trace vectors, not on the seed.
    """
    if alg.dim == 0:
        return BlockDecomposition(alg, ())
    rng = np.random.default_rng(seed)
    basis = commutant_basis(alg)
    coeffs = rng.standard_normal(len(basis)) + 1j * rng.standard_normal(len(basis))
    T = sum(c * B for c, B in zip(coeffs, basis))
    T = (T + T.conj().T) / 2.0
    eigenvalues, vectors = np.linalg.eigh(T)
    clusters = _cluster_eigenvalues(eigenvalues, cluster_tol, CLUSTER_GRAY_ZONE)

    arrows = alg.groupoid.arrows
    gen_matrices = {g: alg.generator_matrix(g) for g in arrows}
    sub = []
    for (lo, hi) in clusters:
        Q = vectors[:, lo:hi]
        traces = np.array([np.einsum("ij,ji->", Q.conj().T @ gen_matrices[g], Q)
                           for g in arrows])
        sub.append((Q, hi - lo, traces))

    groups = []
    for Q, n, traces in sub:
        for grp in groups:
            if grp["dim"] == n and np.max(np.abs(grp["traces"] - traces)) < trace_tol:
                grp["count"] += 1
                break
        else:
            groups.append({"dim": n, "traces": traces, "count": 1, "isometry": Q})

    if sum(grp["dim"] ** 2 for grp in groups) != alg.groupoid.n_arrows():
        raise AmbiguityError(
            "block dimension census fails the exact count; eigenvalue "
            "clustering was unreliable -- re-run with a different seed")
    if sum(grp["dim"] * grp["count"] for grp in groups) != alg.dim:
        raise AmbiguityError("cluster dimensions do not add up; re-run with a "
                             "different seed")

    def sort_key(grp):
        sig = tuple((round(t.real, 6), round(t.imag, 6)) for t in grp["traces"])
        return (grp["dim"], sig)

    groups.sort(key=sort_key)
    blocks = []
    for i, grp in enumerate(groups):
        blocks.append(Block(
            label=f"B{i}",
            dim=grp["dim"],
            multiplicity=grp["count"],
            isometry=grp["isometry"],
            traces=tuple(grp["traces"]),
        ))
    dec = BlockDecomposition(alg, tuple(blocks))
    _verify_blocks(dec)
    return dec


def _verify_blocks(dec, sample_tol=1e-8):
    """Integrity checks: block maps are *-homomorphisms and irreducible."""
    alg = dec.algebra
    G = alg.groupoid
    for b in dec.blocks:
        images = {g: b.apply_arrow(alg, g) for g in G.arrows}
        span = np.stack([images[g].ravel() for g in G.arrows])
        if np.linalg.matrix_rank(span, tol=1e-8) != b.dim ** 2:
            raise AmbiguityError(f"block {b.label} is not irreducible; "
                                 f"re-run with a different seed")
        for g in G.arrows:
            gi = G.inverse[g]
            if np.max(np.abs(images[g].conj().T - images[gi])) > sample_tol:
                raise AmbiguityError(f"block {b.label} fails the adjoint law")
        for (g, h), k in G.compose_table.items():
            err = np.max(np.abs(images[g] @ images[h] - images[k]))
            if err > sample_tol:
                raise AmbiguityError(f"block {b.label} fails multiplicativity")
        # products outside the table vanish
        for g in G.arrows:
            for h in G.arrows:
                if (g, h) not in G.compose_table:
                    err = np.max(np.abs(images[g] @ images[h]))
                    if err > sample_tol:
                        raise AmbiguityError(f"block {b.label} fails "
                                             f"multiplicativity on a zero product")


def block_decomposition(G, seed=0):
    return wedderburn(concrete_algebra(G), seed=seed)


# -- primitive spectrum over subsets ----------------------------------------


def prim_partition(dec, U):
    """(Prim over U, its complement): blocks killing every delta over G|_U.

    Also recomputes the partition with the saturation of U and insists the
    two agree, as the ideal generated by the corner is the one of the
    saturated sub-arrow-set.
    """
    alg = dec.algebra
    G = alg.groupoid

    def annihilated(subset_arrows):
        inside, outside = set(), set()
        for b in dec.blocks:
            worst = 0.0
            for g in subset_arrows:
                M = b.apply_arrow(alg, g)
                if M.size:
                    worst = max(worst, float(np.linalg.norm(M, 2)))
            (inside if worst < ANNIHILATION_TOL else outside).add(b.label)
        return frozenset(inside), frozenset(outside)

    GU = reduction(G, U)
    by_U = annihilated(GU.arrows)
    W = saturation(G, U)
    arrows_W = [g for g in G.arrows if G.dom[g] in W]
    by_W = annihilated(arrows_W)
    if by_U != by_W:
        raise AmbiguityError("annihilator partition differs between a subset "
                             "and its saturation; numerical failure upstream")
    return by_U


# -- induction ---------------------------------------------------------------


@dataclass(frozen=True)
class InductionResult:
    subset: frozenset
    mapping: dict          # block label of the reduction -> block label upstairs
    prim_inside: frozenset   # blocks annihilating the corner
    prim_outside: frozenset  # their complement; equals the image of ``mapping``
    dec: BlockDecomposition
    dec_red: BlockDecomposition

    @property
    def ok(self):
        return (frozenset(self.mapping.values()) == self.prim_outside
                and len(set(self.mapping.values())) == len(self.mapping))


def induction_map(G, U, seed=0, dec=None, dec_red=None):
    """The induced-block bijection Prim of the reduction -> Prim outside U.

    For every block B of the big algebra that does not annihilate the corner,
    its restriction to the corner is decomposed through block characters; by
    uniqueness each reduction block j appears in exactly one such B, and
    j -> B is the induction map.  Ties or misses raise AmbiguityError.
    """
    U = frozenset(U)
    if dec is None:
        dec = block_decomposition(G, seed=seed)
    if dec_red is None:
        dec_red = block_decomposition(reduction(G, U), seed=seed)
    GU = dec_red.algebra.groupoid
    inside, outside = prim_partition(dec, U)

    arrows_red = GU.arrows
    arrow_pos = {g: i for i, g in enumerate(G.arrows)}
    candidates = {}  # reduction label -> list of upstairs labels
    for b in dec.blocks:
        if b.label in inside:
            continue
        trace_vec = [b.traces[arrow_pos[g]] for g in arrows_red]
        mult = dec_red.multiplicities_of(trace_vec)
        for j, m in mult.items():
            if m > 0:
                candidates.setdefault(j, []).append(b.label)

    mapping = {}
    for j in dec_red.labels:
        found = candidates.get(j, [])
        if len(found) != 1:
            raise AmbiguityError(
                f"reduction block {j} appears in {len(found)} blocks outside "
                f"the subset; a unique one is guaranteed, so this is a "
                f"numerical failure upstream")
        mapping[j] = found[0]

    result = InductionResult(U, mapping, inside, outside, dec, dec_red)
    if not result.ok:
        raise AmbiguityError("induced blocks do not exhaust the complement of "
                             "the annihilator; numerical failure upstream")
    return result


def induce(G, U, j, seed=0, dec=None, dec_red=None):
    """The block of the big algebra induced from block j of the reduction."""
    return induction_map(G, U, seed=seed, dec=dec, dec_red=dec_red).mapping[j]


# -- the tensor-model isometry check ------------------------------------------


@dataclass(frozen=True)
class PhiIsometryReport:
    subset: frozenset
    unit: object
    tensor_count: int
    fiber_dim: int
    gram_residual: float
    intertwining_residual: float
    surjective: bool

    @property
    def ok(self):
        return (self.surjective and self.gram_residual < 1e-8
                and self.intertwining_residual < 1e-8)

    def max_residual(self):
        return max(self.gram_residual, self.intertwining_residual)


def check_phi_isometry(G, U, x, seed=0, samples=8):
    """Verify that f (x) xi -> f * xi is a unitary intertwiner.

    The tensor space is spanned by delta(a) (x) e_b with a ranging over
    arrows with domain in U and b over the fiber of the reduction at x; its
    inner product is <f (x) xi, g (x) eta> = <pi(g* f) xi, eta> computed in
    the reduction.  On the spanning tensors both Gram forms are 0/1-valued
    sparse arrays whose supports are compared exactly; random-coefficient
    combinations exercise the floating-point path and feed the reported
    residuals.
    """
    U = frozenset(U)
    if x not in U:
        raise InputError("the unit must belong to the subset")
    GU = reduction(G, U)
    arrows_U = tuple(g for g in G.arrows if G.dom[g] in U)  # functions on d^{-1}(U)
    fiber_red = GU.fiber(x)          # fiber of the reduction at x
    fiber_full = G.fiber(x)          # fiber of the big groupoid at x
    fiber_index = {g: i for i, g in enumerate(fiber_full)}
    tensors = [(a, b) for a in arrows_U for b in fiber_red]
    tensor_index = {t: i for i, t in enumerate(tensors)}

    image = {(a, b): G.try_compose(a, b) for (a, b) in tensors}

    # Nonzeros of the inner-product Gram form: <t1, t2> = 1 exactly when
    # r(a) = r(c) and (c^{-1} a) b = d computed inside the reduction.
    gram_pairs = set()
    for (a, b) in tensors:
        for c in G.cofiber(G.ran[a]):
            if G.dom[c] not in U:
                continue
            k = G.compose_table[(G.inverse[c], a)]   # c* a, supported in G|_U
            d = GU.try_compose(k, b)
            if d is not None and (c, d) in tensor_index:
                gram_pairs.add((tensor_index[(a, b)], tensor_index[(c, d)]))

    # Nonzeros of the image Gram form: tensors sharing a nonzero image.
    by_image = {}
    for t, ab in image.items():
        if ab is not None:
            by_image.setdefault(ab, []).append(tensor_index[t])
    image_pairs = {(t1, t2) for group in by_image.values()
                   for t1 in group for t2 in group}
    gram_exact = gram_pairs == image_pairs

    # Random-coefficient Gram comparisons (the floating-point path).
    rng = np.random.default_rng(seed)
    gram_residual = 0.0 if gram_exact else 1.0
    nt = len(tensors)
    if gram_pairs:
        rows = np.array([p[0] for p in sorted(gram_pairs)])
        cols = np.array([p[1] for p in sorted(gram_pairs)])
    else:
        rows = cols = np.zeros(0, dtype=int)
    img_row = np.full(nt, -1, dtype=int)
    for t, ab in image.items():
        if ab is not None:
            img_row[tensor_index[t]] = fiber_index[ab]
    for _ in range(samples):
        c1 = rng.standard_normal(nt) + 1j * rng.standard_normal(nt)
        c2 = rng.standard_normal(nt) + 1j * rng.standard_normal(nt)
        lhs = np.sum(np.conj(c2[cols]) * c1[rows]) if nt else 0j
        v1 = np.zeros(len(fiber_full), dtype=complex)
        v2 = np.zeros(len(fiber_full), dtype=complex)
        hit = img_row >= 0
        np.add.at(v1, img_row[hit], c1[hit])
        np.add.at(v2, img_row[hit], c2[hit])
        rhs = np.vdot(v2, v1)
        gram_residual = max(gram_residual, abs(lhs - rhs))

    # Surjectivity: every fiber arrow g arises (namely as delta(g) * e_{u(x)}).
    reachable = set(image.values()) - {None}
    surjective = reachable == set(fiber_full)

    # Intertwining: acting by an arrow upstairs before or after the map
    # yields the same fiber index (or jointly none).
    intertwining = 0.0
    for h in G.arrows:
        for (a, b) in tensors:
            ha = G.try_compose(h, a)
            # dom(h a) = dom(a) lies in U, so (ha, b) is again a tensor
            lhs_target = image[(ha, b)] if ha is not None else None
            ab = image[(a, b)]
            rhs_target = G.try_compose(h, ab) if ab is not None else None
            if lhs_target != rhs_target:
                intertwining = 1.0

    return PhiIsometryReport(
        subset=U, unit=x, tensor_count=len(tensors), fiber_dim=len(fiber_full),
        gram_residual=float(gram_residual),
        intertwining_residual=float(intertwining),
        surjective=surjective,
    )


# -- norm estimates ------------------------------------------------------------


@dataclass(frozen=True)
class NormEstimateReport:
    subset: frozenset
    trials: int
    max_equality_gap: float       # | norm in the reduction - norm upstairs |
    min_induction_slack: float    # min over blocks of (induced norm - block norm)
    max_regular_consistency: float  # block-model norm vs sup of regular reps

    @property
    def ok(self):
        return (self.max_equality_gap < 1e-9
                and self.min_induction_slack > -1e-9
                and self.max_regular_consistency < 1e-9)


def check_norm_estimates(G, U, trials=20, seed=0, dec=None, dec_red=None):
    """Isometric inclusion of the reduction algebra, and the induced-norm bound.

    For random functions supported on the reduction: (a) the C*-norm computed
    in the block model of the reduction equals the norm computed upstairs;
    (b) each reduction block's norm is dominated by the norm in the block it
    induces.  The block-model norm is cross-checked against the supremum of
    regular-representation norms.
    """
    U = frozenset(U)
    ind = induction_map(G, U, seed=seed, dec=dec, dec_red=dec_red)
    dec, dec_red = ind.dec, ind.dec_red
    GU = dec_red.algebra.groupoid
    rng = np.random.default_rng(seed)

    max_gap = 0.0
    min_slack = np.inf
    max_reg = 0.0
    for _ in range(trials):
        coeffs = rng.standard_normal(GU.n_arrows()) + 1j * rng.standard_normal(GU.n_arrows())
        f_red = ArrowFunction(GU, dict(zip(GU.arrows, coeffs)))
        f_up = f_red.extend_to(G)
        n_red = dec_red.block_norm(f_red)
        n_up = dec.block_norm(f_up)
        max_gap = max(max_gap, abs(n_red - n_up))
        max_reg = max(max_reg,
                      abs(n_red - reduced_norm(GU, f_red)),
                      abs(n_up - reduced_norm(G, f_up)))
        for j in dec_red.labels:
            bj = dec_red.block(j)
            bi = dec.block(ind.mapping[j])
            nj = float(np.linalg.norm(bj.apply(dec_red.algebra, f_red), 2))
            ni = float(np.linalg.norm(bi.apply(dec.algebra, f_up), 2))
            min_slack = min(min_slack, ni - nj)
    if not np.isfinite(min_slack):
        min_slack = 0.0
    return NormEstimateReport(U, trials, float(max_gap), float(min_slack),
                              float(max_reg))


# -- the spectrum decomposition over a cover -----------------------------------


@dataclass(frozen=True)
class SpectrumDecompositionReport:
    cover: tuple
    prim_all: frozenset
    images: tuple              # per cover set: frozenset of induced labels
    outside_sets: tuple        # per cover set: Prim outside the subset
    union_equals_prim: bool
    images_match_outside: bool

    @property
    def ok(self):
        return self.union_equals_prim and self.images_match_outside

    def lines(self):
        out = [f"blocks: {len(self.prim_all)}"]
        for U, img in zip(self.cover, self.images):
            out.append(f"subset {sorted(map(str, U))}: induces {sorted(img)}")
        out.append(f"union equals spectrum: {self.union_equals_prim}")
        out.append(f"images equal complements: {self.images_match_outside}")
        return out


def verify_spectrum_decomposition(G, cover, seed=0, dec=None):
    """Check that the primitive spectrum is the union of the induced spectra.

    Preconditions: the saturations of the cover sets must cover the unit
    space (CoverPreconditionError otherwise -- a refusal, not a
    counterexample).
    """
    cover = [frozenset(U) for U in cover]
    covered = frozenset().union(*(saturation(G, U) for U in cover)) if cover else frozenset()
    missing = set(G.units) - set(covered)
    if missing:
        raise CoverPreconditionError(missing)

    if dec is None:
        dec = block_decomposition(G, seed=seed)
    images, outsides = [], []
    for U in cover:
        ind = induction_map(G, U, seed=seed, dec=dec)
        images.append(frozenset(ind.mapping.values()))
        outsides.append(ind.prim_outside)
    prim_all = frozenset(dec.labels)
    union = frozenset().union(*images) if images else frozenset()
    return SpectrumDecompositionReport(
        cover=tuple(cover),
        prim_all=prim_all,
        images=tuple(images),
        outside_sets=tuple(outsides),
        union_equals_prim=(union == prim_all),
        images_match_outside=all(i == o for i, o in zip(images, outsides)),
    )


# -- families of representations ------------------------------------------------


@dataclass(frozen=True)
class FamiliesReport:
    members: tuple             # (subset, labels, faithful downstairs)
    induced_supports: tuple    # per member: induced labels upstairs
    all_faithful_downstairs: bool
    induced_family_faithful: bool
    corollary_holds: bool      # faithful pieces over an admissible cover induce a faithful family

    @property
    def ok(self):
        return self.corollary_holds


def check_families(G, family, seed=0, dec=None):
    """Faithfulness / exhaustiveness bookkeeping for induced families.

    ``family`` lists pairs (subset U_i, selected block labels of the
    reduction's algebra).  On a finite unit space closures are trivial, so a
    family is faithful exactly when it is exhaustive: the supports must
    exhaust the spectrum.  The report records the downstairs verdicts, the
    induced supports, and whether the induction corollary (faithful pieces
    induce a faithful family) held on this instance.
    """
    if dec is None:
        dec = block_decomposition(G, seed=seed)
    members, induced = [], []
    union_upstairs = set()
    for U, labels in family:
        U = frozenset(U)
        ind = induction_map(G, U, seed=seed, dec=dec)
        labels = frozenset(labels)
        unknown = labels - set(ind.dec_red.labels)
        if unknown:
            raise InputError(f"unknown reduction block labels {sorted(unknown)}")
        faithful = labels == frozenset(ind.dec_red.labels)
        img = frozenset(ind.mapping[j] for j in labels)
        union_upstairs |= img
        members.append((U, labels, faithful))
        induced.append(img)

    all_faithful = all(m[2] for m in members)
    induced_faithful = union_upstairs == set(dec.labels)

    # The corollary only promises the implication when the saturations cover.
    covered = frozenset().union(*(saturation(G, U) for U, _, _ in members)) \
        if members else frozenset()
    admissible = set(G.units) <= set(covered)
    corollary = (not (all_faithful and admissible)) or induced_faithful

    return FamiliesReport(tuple(members), tuple(induced), all_faithful,
                          induced_faithful, corollary)


def regular_support(G, x, dec):
    """Support (set of block labels) of the regular representation at x."""
    traces = []
    for g in G.arrows:
        M = regular_rep(G, x, ArrowFunction.delta(G, g)).matrix
        traces.append(np.trace(M))
    return dec.support_of(traces)


def check_regular_family_faithful(G, seed=0, dec=None):
    """One regular representation per orbit exhausts the spectrum."""
    if dec is None:
        dec = block_decomposition(G, seed=seed)
    union = set()
    for orb in orbits(G):
        base = min(orb, key=lambda u: G.units.index(u))
        union |= regular_support(G, base, dec)
    return union == set(dec.labels)


# -- the linking-space data over a subset ---------------------------------------


@dataclass(frozen=True)
class MoritaReport:
    subset: frozenset
    saturation: frozenset
    left_free: bool
    right_free: bool
    actions_commute: bool
    left_quotient_bijects_units: bool
    right_quotient_bijects_saturation: bool

    @property
    def ok(self):
        return (self.left_free and self.right_free and self.actions_commute
                and self.left_quotient_bijects_units
                and self.right_quotient_bijects_saturation)


def morita_reduction_data(G, U):
    """Verify the linking data between a reduction and its saturation.

    The arrows with domain in U carry a left action of the groupoid over the
    saturation W and a right action of the reduction to U.  Both actions are
    free and commute; the domain map identifies the left quotient with U and
    the range map identifies the right quotient with W.  Everything is
    checked by enumeration.
    """
    U = frozenset(U)
    W = saturation(G, U)
    Z = [z for z in G.arrows if G.dom[z] in U]
    GW = reduction(G, W)
    GU = reduction(G, U)

    left_free = True
    right_free = True
    for z in Z:
        for g in GW.arrows:
            if G.dom[g] != G.ran[z]:
                continue
            if G.compose_table[(g, z)] == z and not G.is_unit_arrow(g):
                left_free = False
        for h in GU.arrows:
            if G.ran[h] != G.dom[z]:
                continue
            if G.compose_table[(z, h)] == z and not G.is_unit_arrow(h):
                right_free = False

    commute = True
    for z in Z:
        for g in GW.arrows:
            if G.dom[g] != G.ran[z]:
                continue
            for h in GU.arrows:
                if G.ran[h] != G.dom[z]:
                    continue
                gz = G.compose_table[(g, z)]
                zh = G.compose_table[(z, h)]
                if G.compose_table[(gz, h)] != G.compose_table[(g, zh)]:
                    commute = False

    # Left-orbit space vs U through the domain map.
    parent = {z: z for z in Z}

    def find(node, tbl):
        while tbl[node] != node:
            tbl[node] = tbl[tbl[node]]
            node = tbl[node]
        return node

    for z in Z:
        for g in GW.arrows:
            if G.dom[g] == G.ran[z]:
                a, b = find(z, parent), find(G.compose_table[(g, z)], parent)
                if a != b:
                    parent[a] = b
    left_classes = {}
    for z in Z:
        left_classes.setdefault(find(z, parent), set()).add(G.dom[z])
    left_ok = (len(left_classes) == len(U)
               and all(len(v) == 1 for v in left_classes.values())
               and {next(iter(v)) for v in left_classes.values()} == U)

    parent2 = {z: z for z in Z}
    for z in Z:
        for h in GU.arrows:
            if G.ran[h] == G.dom[z]:
                a, b = find(z, parent2), find(G.compose_table[(z, h)], parent2)
                if a != b:
                    parent2[a] = b
    right_classes = {}
    for z in Z:
        right_classes.setdefault(find(z, parent2), set()).add(G.ran[z])
    right_ok = (len(right_classes) == len(W)
                and all(len(v) == 1 for v in right_classes.values())
                and {next(iter(v)) for v in right_classes.values()} == W)

    return MoritaReport(U, W, left_free, right_free, commute, left_ok, right_ok)

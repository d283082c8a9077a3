"""Ext groups between representations of the entrance-path category.

``rhom`` resolves the first argument by sums of representables (a minimal
projective resolution; the category is directed so it stops after at most
``d`` steps) and takes cohomology of ``Hom(P_*, G)``.

``rhom_bar`` uses the normalized bar cochain complex over strings of
composable non-identity arrows instead.  The two share no code beyond the
rank routine and serve as checks on each other.
"""
from fractions import Fraction

from .. import linalg
from .sheaf import same_complex


class Resolution:
    """Generators ``(cell, vector in previous term)`` for each term ``P_i``."""

    def __init__(self, cx, terms):
        self.cx = cx
        self.terms = terms     # terms[i] = list of (cell, coeffs dict{(j, m): value})

    @property
    def length(self):
        return len(self.terms) - 1

    def ranks(self):
        return [len(t) for t in self.terms]


def _free_basis(cx, cells):
    """Basis of a sum of representables at every cell: ``(copy j, morphism or None)``."""
    out = {x.index: [] for x in cx.cells}
    for j, c in enumerate(cells):
        out[c].append((j, None))
        for a in cx.out_arrows[c]:
            out[cx.arrows[a].tgt].append((j, a))
    return out


def _act(cx, elem, a):
    """Image of the basis element ``(j, m)`` under the arrow ``a``."""
    j, m = elem
    return (j, a if m is None else cx.compose(m, a))


def _top(cx, spaces, act_vec, dims):
    """Vectors spanning ``K(x)`` modulo the image of incoming arrows."""
    gens = []
    for x in cx.cells:
        i = x.index
        if not spaces[i]:
            continue
        rad = []
        for a in cx.in_arrows[i]:
            src = cx.arrows[a].src
            rad.extend(act_vec(a, v) for v in spaces[src])
        basis = linalg.row_basis(rad, dims[i]) if rad else []
        r = len(basis)
        for v in spaces[i]:
            if linalg.rank(basis + [v], dims[i]) > r:
                basis.append(v)
                r += 1
                gens.append((i, v))
    return gens


def resolve(F):
    cx = F.cx
    # stage 0: generators of F itself
    gens = _top(cx, {x.index: linalg.identity(F.dims[x.index]) for x in cx.cells},
                lambda a, v: F.apply(a, v), F.dims)
    terms = [[(c, {("F", k): val for k, val in enumerate(v) if val}) for c, v in gens]]
    images = {}   # images of basis elements of current P in previous space

    def image_F(elem):
        j, m = elem
        v = gens[j][1]
        return list(v) if m is None else F.apply(m, v)

    prev_dims = F.dims
    image = image_F
    while True:
        cells = [c for c, _ in terms[-1]]
        basis = _free_basis(cx, cells)
        pos = {x: {e: k for k, e in enumerate(b)} for x, b in basis.items()}
        dims = [len(basis[x.index]) for x in cx.cells]
        kernel = {}
        for x in cx.cells:
            i = x.index
            cols = [image(e) for e in basis[i]]
            A = [[cols[k][r] for k in range(dims[i])] for r in range(prev_dims[i])]
            kernel[i] = linalg.nullspace(A, dims[i]) if dims[i] else []
        if not any(kernel.values()):
            break

        def act_vec(a, v, basis=basis, pos=pos, dims=dims):
            src, tgt = cx.arrows[a].src, cx.arrows[a].tgt
            out = [Fraction(0)] * dims[tgt]
            for k, val in enumerate(v):
                if val:
                    out[pos[tgt][_act(cx, basis[src][k], a)]] += val
            return out

        new = _top(cx, kernel, act_vec, dims)
        terms.append([(c, {basis[c][k]: val for k, val in enumerate(v) if val}) for c, v in new])

        def image(elem, new=new, act_vec=act_vec):
            j, m = elem
            v = new[j][1]
            return list(v) if m is None else act_vec(m, v)

        prev_dims = dims
    return Resolution(cx, terms)


def _G_of(G, m, dim):
    return linalg.identity(dim) if m is None else G.maps[m]


def rhom(F, G, resolution=None):
    """Dimensions of ``Ext^i(F, G)`` for ``i = 0, 1, ...`` (length ``d + 1``)."""
    same_complex(F, G)
    cx = F.cx
    res = resolution or resolve(F)
    blocks = [[G.dims[c] for c, _ in term] for term in res.terms]
    sizes = [sum(b) for b in blocks]
    ranks = []
    for i in range(len(res.terms) - 1):
        offs = _offsets(blocks[i])
        noffs = _offsets(blocks[i + 1])
        rows = []
        for jn, (x, coeffs) in enumerate(res.terms[i + 1]):
            block_rows = [dict() for _ in range(G.dims[x])]
            for (j, m), val in coeffs.items():
                c = res.terms[i][j][0]
                M = _G_of(G, m, G.dims[c])
                for r in range(G.dims[x]):
                    for k in range(G.dims[c]):
                        if M[r][k]:
                            col = offs[j] + k
                            block_rows[r][col] = block_rows[r].get(col, 0) + val * M[r][k]
            rows.extend(block_rows)
        ranks.append(linalg.sparse_rank(rows))
    out = []
    for i in range(cx.d + 1):
        if i < len(sizes):
            rk_out = ranks[i] if i < len(ranks) else 0
            rk_in = ranks[i - 1] if i > 0 else 0
            out.append(sizes[i] - rk_out - rk_in)
        else:
            out.append(0)
    return tuple(out)


def _offsets(block):
    offs, acc = [], 0
    for b in block:
        offs.append(acc)
        acc += b
    return offs


# -- bar complex ----------------------------------------------------------------

def _bar_blocks(F, G, p):
    cx = F.cx
    if p == 0:
        chains = [((), c.index, c.index) for c in cx.cells]
    else:
        chains = [(ch, cx.arrows[ch[0]].src, cx.arrows[ch[-1]].tgt) for ch in cx.chains(p)]
    index, offs, acc = {}, [], 0
    for k, (ch, s, t) in enumerate(chains):
        index[ch if p else s] = k
        offs.append(acc)
        acc += G.dims[t] * F.dims[s]
    return chains, index, offs, acc


def bar_differential(F, G, p):
    """Sparse rows of ``delta: C^p -> C^{p+1}`` of the bar cochain complex."""
    cx = F.cx
    src_chains, src_index, src_offs, _ = _bar_blocks(F, G, p)
    tgt_chains, _, _, _ = _bar_blocks(F, G, p + 1)
    rows = []

    def add(row_block, i, j, L, key, R, sign, s_dim, t_dim):
        # entry (i, j) of sign * L . phi(key) . R
        k = src_index[key]
        off = src_offs[k]
        ch, a, b = src_chains[k]
        fa, gb = F.dims[a], G.dims[b]
        Lrow = L[i] if L is not None else None
        for r in range(gb):
            lv = Lrow[r] if Lrow is not None else (1 if r == i else 0)
            if not lv:
                continue
            for c in range(fa):
                rv = R[c][j] if R is not None else (1 if c == j else 0)
                if rv:
                    col = off + r * fa + c
                    row_block[col] = row_block.get(col, 0) + sign * lv * rv

    for ch, s, t in tgt_chains:
        for i in range(G.dims[t]):
            for j in range(F.dims[s]):
                row = {}
                last = ch[-1]
                first = ch[0]
                head = ch[:-1] if p else cx.arrows[last].src
                add(row, i, j, G.maps[last], head, None, 1, F.dims[s], G.dims[t])
                for k in range(p):
                    comp = cx.compose(ch[k], ch[k + 1])
                    key = ch[:k] + (comp,) + ch[k + 2:]
                    add(row, i, j, None, key, None, (-1) ** (k + 1), F.dims[s], G.dims[t])
                tail = ch[1:] if p else cx.arrows[first].tgt
                add(row, i, j, None, tail, F.maps[first], (-1) ** (p + 1), F.dims[s], G.dims[t])
                rows.append({c: v for c, v in row.items() if v})
    return rows


def rhom_bar(F, G):
    same_complex(F, G)
    d = F.cx.d
    sizes = [_bar_blocks(F, G, p)[3] for p in range(d + 1)]
    ranks = [linalg.sparse_rank(bar_differential(F, G, p)) if p < d else 0 for p in range(d + 1)]
    return tuple(sizes[p] - ranks[p] - (ranks[p - 1] if p else 0) for p in range(d + 1))

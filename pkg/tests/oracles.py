"""Independent oracle implementations used to cross-check the library.

Everything here is coded directly from the defining formulas with plain
loops over Fraction arrays, deliberately not reusing the library's tensor
code paths.
"""

from fractions import Fraction


def milnor_ricci(c1, c2, c3):
    """Ricci diagonal of the diagonal 3-dim bracket family.

    For [e2,e3] = c1 e1, [e3,e1] = c2 e2, [e1,e2] = c3 e3 on an orthonormal
    left-invariant frame, Ric(e_i) = 2 mu_j mu_k with
    mu_i = (-c_i + c_j + c_k)/2.
    """
    mu1 = Fraction(-c1 + c2 + c3, 1) / 2
    mu2 = Fraction(c1 - c2 + c3, 1) / 2
    mu3 = Fraction(c1 + c2 - c3, 1) / 2
    return (2 * mu2 * mu3, 2 * mu1 * mu3, 2 * mu1 * mu2)


def koszul_gamma(structure, dim):
    """Connection coefficients straight from the Koszul formula."""
    gamma = [[[Fraction(0)] * dim for _ in range(dim)] for _ in range(dim)]
    for i in range(dim):
        for j in range(dim):
            for k in range(dim):
                gamma[i][j][k] = (
                    structure[i][j][k] - structure[j][k][i] + structure[k][i][j]
                ) / 2
    return gamma


def t_vector(curv, a, i, j, k):
    """T(e_i,e_j)e_k from the defining eight-term formula, written out."""
    dim = len(curv.ricci)
    ricci = curv.ricci
    scalar = curv.scalar
    out = [Fraction(0)] * dim
    for l in range(dim):
        out[l] += a[0] * curv.riemann[i][j][k][l]
    out[i] += a[1] * ricci[j][k]
    out[j] += a[2] * ricci[i][k]
    out[k] += a[3] * ricci[i][j]
    if j == k:
        for l in range(dim):
            out[l] += a[4] * ricci[i][l]
    if i == k:
        for l in range(dim):
            out[l] += a[5] * ricci[j][l]
    if i == j:
        for l in range(dim):
            out[l] += a[6] * ricci[k][l]
    if j == k:
        out[i] += a[7] * scalar
    if i == k:
        out[j] -= a[7] * scalar
    return out


def t_dot_riemann_bruteforce(model, curv, a, variant="standard"):
    """(T(xi,e_i).R)(e_j,e_k)e_l by direct four-term expansion.

    The derivation of a (1,3) tensor P2 by P1(X1,X2) is
    P1(X1,X2)(P2(X3,X4)X5) - P2(P1(X1,X2)X3, X4)X5
    - P2(X3, P1(X1,X2)X4)X5 - P2(X3,X4)(P1(X1,X2)X5);
    variant="printed" replaces the last term's slot pair (X3,X4) by (X1,X2)
    with X1 = xi's partner slot, mirroring a typo'd display.
    """
    dim, xi = model.dim, model.xi_index

    def t_of_vector(i, vec):
        out = [Fraction(0)] * dim
        for p in range(dim):
            if vec[p]:
                piece = t_vector(curv, a, xi, i, p)
                for m in range(dim):
                    out[m] += vec[p] * piece[m]
        return out

    def r_of(vec_first, b, c):
        out = [Fraction(0)] * dim
        for p in range(dim):
            if vec_first[p]:
                for m in range(dim):
                    out[m] += vec_first[p] * curv.riemann[p][b][c][m]
        return out

    def r_last(bidx, cidx, vec):
        out = [Fraction(0)] * dim
        for p in range(dim):
            if vec[p]:
                for m in range(dim):
                    out[m] += vec[p] * curv.riemann[bidx][cidx][p][m]
        return out

    result = {}
    for i in range(dim):
        for j in range(dim):
            for k in range(dim):
                for l in range(dim):
                    r_jkl = [curv.riemann[j][k][l][m] for m in range(dim)]
                    term1 = t_of_vector(i, r_jkl)
                    term2 = r_of(t_vector(curv, a, xi, i, j), k, l)
                    term3 = [Fraction(0)] * dim
                    tvk = t_vector(curv, a, xi, i, k)
                    for p in range(dim):
                        if tvk[p]:
                            for m in range(dim):
                                term3[m] += tvk[p] * curv.riemann[j][p][l][m]
                    tvl = t_vector(curv, a, xi, i, l)
                    if variant == "standard":
                        term4 = r_last(j, k, tvl)
                    else:
                        term4 = r_last(i, j, tvl)
                    result[(i, j, k, l)] = tuple(
                        term1[m] - term2[m] - term3[m] - term4[m] for m in range(dim)
                    )
    return result


def t_dot_ricci_bruteforce(model, curv, a):
    """S(T(xi,e_i)e_j, e_k) + S(e_j, T(xi,e_i)e_k) by direct expansion."""
    dim, xi = model.dim, model.xi_index
    result = {}
    for i in range(dim):
        for j in range(dim):
            for k in range(dim):
                tij = t_vector(curv, a, xi, i, j)
                tik = t_vector(curv, a, xi, i, k)
                value = Fraction(0)
                for p in range(dim):
                    value += tij[p] * curv.ricci[p][k]
                    value += curv.ricci[j][p] * tik[p]
                result[(i, j, k)] = value
    return result

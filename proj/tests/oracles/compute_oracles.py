"""Independent oracle values frozen into the C++ tests.

Chebyshev collocation for the Neumann model problem
    v'' - (N-1) T(x) v' = -lambda v  on (-d/2, d/2),  v'(+-d/2) = 0,
solved as a generalized eigenproblem with boundary rows replaced by the
Neumann condition. Shares no code path with the shooting or finite-volume
solvers in the library.
"""
import mpmath as mp
import numpy as np
import scipy.linalg as sla


def cheb(n):
    x = np.cos(np.pi * np.arange(n + 1) / n)
    c = np.hstack([2, np.ones(n - 1), 2]) * (-1) ** np.arange(n + 1)
    X = np.tile(x, (n + 1, 1)).T
    dX = X - X.T
    D = np.outer(c, 1 / c) / (dX + np.eye(n + 1))
    D -= np.diag(D.sum(axis=1))
    return D, x


def drift(K, N, x):
    if K == 0:
        return np.zeros_like(x)
    L = K / (N - 1)
    if K > 0:
        s = np.sqrt(L)
        return (N - 1) * s * np.tan(s * x)
    s = np.sqrt(-L)
    return -(N - 1) * s * np.tanh(s * x)


def hat_lambda(K, N, d, n=80):
    D, t = cheb(n)
    x = t * d / 2
    D = D * 2 / d
    D2 = D @ D
    A = -(D2 - np.diag(drift(K, N, x)) @ D)
    B = np.eye(n + 1)
    for row in (0, n):
        A[row, :] = D[row, :]
        B[row, :] = 0
    w = sla.eigvals(A, B)
    w = np.real(w[np.isfinite(w)])
    w = np.sort(w[w > 1e-8])
    return w[0]


def tan_root():
    lo, hi = mp.pi, 3 * mp.pi / 2 - mp.mpf("1e-30")
    for _ in range(200):
        mid = (lo + hi) / 2
        if mp.tan(mid) - mid > 0:
            hi = mid
        else:
            lo = mid
    return lo


if __name__ == "__main__":
    mp.mp.dps = 30
    b = tan_root()
    print("tan t = t root:", mp.nstr(b, 20), " m = -sin(b)/b:", mp.nstr(-mp.sin(b) / b, 20))
    print("BG (pi/8-1/4)/(pi/4):", mp.nstr((mp.pi / 8 - mp.mpf(1) / 4) / (mp.pi / 4), 20))
    h = mp.pi / 4
    print("discrete cosine n=4 k=1:", mp.nstr(4 / h**2 * mp.sin(mp.pi / 8) ** 2, 20))
    for K, N, d in [(-3, 2, 1.7), (1, 3, 2.0), (-1, 2.5, 1.0), (2, 3, 1.0), (-2, 4, 2.5), (4, 5, 1.3)]:
        vals = [hat_lambda(K, N, d, n) for n in (60, 80, 100)]
        print(f"hat_lambda({K},{N},{d}) = {vals[-1]:.15f}  spread={max(vals)-min(vals):.2e}")


def hat_lambda_mp(K, N, d, n=48, dps=40):
    """Same collocation in extended precision; Neumann rows eliminated."""
    mp.mp.dps = dps
    idx = range(n + 1)
    t = [mp.cos(mp.pi * j / n) for j in idx]
    c = [(2 if j in (0, n) else 1) * (-1) ** j for j in idx]
    D = mp.matrix(n + 1, n + 1)
    for i in idx:
        for j in idx:
            if i != j:
                D[i, j] = mp.mpf(c[i]) / c[j] / (t[i] - t[j])
        D[i, i] = -sum(D[i, j] for j in idx if j != i)
    x = [ti * d / 2 for ti in t]
    D = D * (2 / mp.mpf(d))
    D2 = D * D
    if K == 0:
        dr = [mp.mpf(0)] * (n + 1)
    elif K > 0:
        s = mp.sqrt(mp.mpf(K) / (N - 1))
        dr = [(N - 1) * s * mp.tan(s * xi) for xi in x]
    else:
        s = mp.sqrt(-mp.mpf(K) / (N - 1))
        dr = [-(N - 1) * s * mp.tanh(s * xi) for xi in x]
    A = mp.matrix(n + 1, n + 1)
    for i in idx:
        for j in idx:
            A[i, j] = -(D2[i, j] - dr[i] * D[i, j])
    # Boundary values u_b = -M^{-1} R u_interior from the two Neumann rows.
    bnd = [0, n]
    inner = list(range(1, n))
    M = mp.matrix([[D[r, b] for b in bnd] for r in bnd])
    R = mp.matrix([[D[r, j] for j in inner] for r in bnd])
    E = -(mp.inverse(M) * R)
    m = len(inner)
    S = mp.matrix(m, m)
    for a, i in enumerate(inner):
        for b_, j in enumerate(inner):
            S[a, b_] = A[i, j] + sum(A[i, bnd[k]] * E[k, b_] for k in range(2))
    ev = mp.eig(S, left=False, right=False)
    vals = sorted(mp.re(e) for e in ev if mp.re(e) > mp.mpf("1e-20"))
    return vals[0]


if __name__ == "__main__":
    for K, N, d in [(-3, 2, 1.7), (1, 3, 2.0), (-1, 2.5, 1.0), (-2, 4, 2.5)]:
        a = hat_lambda_mp(K, N, d, 40)
        b = hat_lambda_mp(K, N, d, 48)
        print(f"mp hat_lambda({K},{N},{d}) = {mp.nstr(b, 18)}  diff40/48={mp.nstr(a-b, 3)}")

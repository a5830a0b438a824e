"""High-precision reference amplitudes for the frozen-value tests.

Solves the two-channel boundary problem directly with mpmath at 60 digits:
outside the slab psi1 = e^{ik1 x} + R1 e^{-ik1 x} (left), T1 e^{ik1 x}
(right), psi2 = R2 e^{-ik2 x} / T2 e^{ik2 x}; inside, the four modes
v_n e^{+-a_n x} with a_n^2 = lambda_n - kx^2, lambda_n the eigenvalues of
V = -1/2 [[0, W], [W, 2(d + i g/2)]].

Usage: python3 tools/mp_oracle.py
"""
import mpmath as mp

mp.mp.dps = 60


def amplitudes(gamma, Delta, Omega, k, kL, L, theta_deg):
    th = mp.radians(mp.mpf(theta_deg))
    kx, ky = k * mp.cos(th), k * mp.sin(th)
    d = Delta - 2 * ky * kL - kL**2
    a = d + 1j * mp.mpf(gamma) / 2
    V = mp.matrix([[0, -Omega / 2], [-Omega / 2, -a]])
    k1 = kx
    k2 = mp.sqrt(a + kx**2)
    if mp.im(k2) < 0:
        k2 = -k2
    lam, vec = mp.eig(V)
    modes = []
    for n in range(2):
        al = mp.sqrt(lam[n] - kx**2)
        v = (vec[0, n], vec[1, n])
        modes.append((al, v))
        modes.append((-al, v))
    h = mp.mpf(L) / 2
    A = mp.matrix(8, 8)
    b = mp.matrix(8, 1)
    # unknowns R1 R2 T1 T2 c1..c4
    for comp in range(2):
        kk = k1 if comp == 0 else k2
        row_v, row_d = 2 * comp, 2 * comp + 1
        # left face x = -h
        A[row_v, comp] = -mp.exp(1j * kk * h)
        A[row_d, comp] = 1j * kk * mp.exp(1j * kk * h)
        for j, (al, v) in enumerate(modes):
            e = mp.exp(-al * h)
            A[row_v, 4 + j] = v[comp] * e
            A[row_d, 4 + j] = v[comp] * al * e
        if comp == 0:
            b[row_v] = mp.exp(-1j * k1 * h)
            b[row_d] = 1j * k1 * mp.exp(-1j * k1 * h)
        # right face x = +h
        row_v, row_d = 4 + 2 * comp, 5 + 2 * comp
        A[row_v, 2 + comp] = -mp.exp(1j * kk * h)
        A[row_d, 2 + comp] = -1j * kk * mp.exp(1j * kk * h)
        for j, (al, v) in enumerate(modes):
            e = mp.exp(al * h)
            A[row_v, 4 + j] = v[comp] * e
            A[row_d, 4 + j] = v[comp] * al * e
    x = mp.lu_solve(A, b)
    return x[0], x[1], x[2], x[3]


CASES = [
    # gamma, Delta, Omega, k, kL, L, theta_deg
    (1, -100, 20, 3, 8.1125, 6, 30),
    (1, -100, 20, 3, 8.1125, 6, 31.8),
    (1, 200, 20, 3, 8.1125, 6, 21.18),
    (1, 200, 20, 3, 8.1125, 6, 80),
    (0, 50, 10, 4, 2, 3, 45),
    (0, -20, 35, 1.5, 0, 8, 10),
]

if __name__ == "__main__":
    for c in CASES:
        amps = amplitudes(*[mp.mpf(v) for v in c])
        parts = ", ".join(f"c({mp.nstr(mp.re(z), 17)}, {mp.nstr(mp.im(z), 17)})" for z in amps)
        print(f"{c}: [{parts}]")

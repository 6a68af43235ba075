"""Regenerates tests/fixtures/svr30.csv and svr30_expected.txt.

Solves the epsilon-SVR dual as a dense QP with cvxopt on standardized
features (population std) with kernel (u.v + 1)^3, C = 1, epsilon = 0.1.
Writes the dual objective and the decision values at the training points.
"""
import pathlib

import numpy as np
from cvxopt import matrix, solvers

DEGREE, C, EPS = 3, 1.0, 0.1

rng = np.random.default_rng(7)
n = 30
X = rng.uniform(-1.0, 2.0, (n, 2))
y = np.tanh(X[:, 0]) + 0.5 * X[:, 1] ** 2 + 0.1 * rng.standard_normal(n)

mean = X.mean(axis=0)
std = X.std(axis=0)
Z = (X - mean) / std
K = (Z @ Z.T + 1.0) ** DEGREE

P = np.block([[K, -K], [-K, K]])
q = np.concatenate([EPS - y, EPS + y])
G = np.vstack([-np.eye(2 * n), np.eye(2 * n)])
h = np.concatenate([np.zeros(2 * n), C * np.ones(2 * n)])
A = np.concatenate([np.ones(n), -np.ones(n)]).reshape(1, -1)
solvers.options.update(show_progress=False, abstol=1e-12, reltol=1e-12, feastol=1e-12, maxiters=200)
sol = solvers.qp(matrix(P), matrix(q), matrix(G), matrix(h), matrix(A), matrix(0.0))
z = np.array(sol["x"]).ravel()
beta = z[:n] - z[n:]
objective = 0.5 * beta @ K @ beta + EPS * np.abs(beta).sum() - y @ beta

# Bias from free support vectors: y_i - f0(x_i) = +eps for 0 < a_i < C, -eps for 0 < a*_i < C.
f0 = K @ beta
tol = 1e-6
free = [(y[i] - f0[i] - EPS) for i in range(n) if tol < z[i] < C - tol] + \
       [(y[i] - f0[i] + EPS) for i in range(n) if tol < z[n + i] < C - tol]
bias = float(np.mean(free))
decision = f0 + bias

root = pathlib.Path(__file__).resolve().parents[1] / "fixtures"
with (root / "svr30.csv").open("w") as f:
    f.write("x1,x2,y\n")
    for (a, b), t in zip(X, y):
        f.write(f"{float(a)!r},{float(b)!r},{float(t)!r}\n")
with (root / "svr30_expected.txt").open("w") as f:
    f.write(f"objective {float(objective)!r}\n")
    f.write(f"bias {bias!r}\n")
    f.write(f"free_support_vectors {len(free)}\n")
    for v in decision:
        f.write(f"decision {float(v)!r}\n")
print("objective", objective, "bias", bias, "free", len(free))

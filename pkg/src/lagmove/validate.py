"""Built-in self checks behind the ``validate`` CLI subcommand.

Each check returns (name, passed, detail); the suite is deterministic.
"""
from __future__ import annotations

import math

import numpy as np
from scipy.linalg import expm

from . import gfdm, movers, neighbors
from .cloud import make_cloud
from .fields import LinearField, Lissajous, ModulatedRotation, RigidRotation


def _fd_jacobian(field, x, t, eps=1e-6):
    jac = np.zeros((2, 2))
    for j in range(2):
        xp, xm = x.copy(), x.copy()
        xp[j] += eps
        xm[j] -= eps
        jac[:, j] = (field.evaluate(xp[None], t)[0] - field.evaluate(xm[None], t)[0]) / (2 * eps)
    return jac


def check_reduction_identities():
    rng = np.random.default_rng(7)
    worst = 0.0
    for _ in range(50):
        v = rng.normal(size=(4, 2))
        vp = rng.normal(size=(4, 2))
        zero = np.zeros((4, 2, 2))
        ctx = movers.MoveContext(0.1, v, vp, zero, zero, True)
        worst = max(worst, np.abs(movers.move_m3(ctx) - movers.move_m1(ctx)).max())
        worst = max(worst, np.abs(movers.move_m4(ctx) - movers.move_m2(ctx)).max())
    return worst <= 1e-15, f"max reduction mismatch {worst:.3e}"


def check_field_gradients():
    fields = [
        RigidRotation(center=(0.2, -0.1), omega=1.3),
        Lissajous(),
        LinearField(A=((0.2, 1.0), (0.3, -0.2)), b=(0.5, -0.1)),
        ModulatedRotation(omega0=1.0, modulation_freq=0.5),
    ]
    rng = np.random.default_rng(11)
    worst = 0.0
    for field in fields:
        for _ in range(25):
            x = rng.uniform(-1, 1, size=2)
            t = rng.uniform(0, 10)
            exact = field.gradient(x[None], t)[0]
            approx = _fd_jacobian(field, x, t)
            worst = max(worst, np.abs(exact - approx).max())
    return worst <= 1e-6, f"max gradient FD mismatch {worst:.3e}"


def check_series_oracle():
    rng = np.random.default_rng(13)
    worst = 0.0
    for _ in range(100):
        a = rng.normal(size=(2, 2))
        a *= min(1.0, 2.0 / np.linalg.norm(a, 2))
        v = rng.normal(size=2)
        dt = rng.uniform(0.01, 0.2)
        got = movers.exp_series_apply(a[None], v[None], dt, 5)[0]
        ref = movers.exp_series_apply(a[None], v[None], dt, 20)[0]
        na = np.linalg.norm(a, 2)
        tail = sum(
            na**k * dt ** (k + 1) / math.factorial(k + 1) for k in range(5, 25)
        ) * np.linalg.norm(v)
        worst = max(worst, np.linalg.norm(got - ref) - tail)
        # K=20 against the scaling-and-squaring matrix exponential
        aug = np.zeros((3, 3))
        aug[:2, :2] = a * dt
        aug[:2, 2] = v * dt
        exact = expm(aug)[:2, 2]
        rel = np.linalg.norm(ref - exact) / max(np.linalg.norm(exact), 1e-300)
        if rel > 1e-12:
            return False, f"K=20 vs expm relative error {rel:.3e}"
    return worst <= 0.0, f"worst tail-bound slack {worst:.3e}"


def check_wlsq_exactness():
    rng = np.random.default_rng(17)
    worst = 0.0
    for _ in range(10):
        pos = rng.uniform(-1, 1, size=(80, 2))
        a = rng.normal(size=(2, 2))
        b = rng.normal(size=2)
        vel = pos @ a.T + b
        cloud = make_cloud(pos, vel, np.zeros((80, 2, 2)), smoothing_length=0.5, dt=0.1)
        index = neighbors.build_index(cloud, 0.5)
        fitted = gfdm.all_gradients(cloud, index, zero_fallback=False)
        worst = max(worst, np.abs(fitted - a).max())
    return worst <= 1e-10, f"max linear-field gradient error {worst:.3e}"


def check_neighbor_oracle():
    rng = np.random.default_rng(19)
    pos = rng.uniform(0, 1, size=(150, 2))
    cloud = make_cloud(pos, np.zeros_like(pos), np.zeros((150, 2, 2)), smoothing_length=0.2, dt=0.1)
    index = neighbors.build_index(cloud, 0.2)
    brute = neighbors.brute_force_neighbors(pos, 0.2)
    for i in range(150):
        if not np.array_equal(index.lists[i], brute[i]):
            return False, f"cell list disagrees with all-pairs scan at point {i}"
    return True, "cell list equals all-pairs scan"


ALL_CHECKS = (
    ("reduction-identities", check_reduction_identities),
    ("field-gradients-vs-finite-differences", check_field_gradients),
    ("series-vs-oracle", check_series_oracle),
    ("wlsq-linear-exactness", check_wlsq_exactness),
    ("neighbor-search-vs-brute-force", check_neighbor_oracle),
)


def run_all() -> list[tuple[str, bool, str]]:
    results = []
    for name, check in ALL_CHECKS:
        try:
            ok, detail = check()
        except Exception as exc:  # a crashing check is a failing check
            ok, detail = False, f"raised {type(exc).__name__}: {exc}"
        results.append((name, ok, detail))
    return results

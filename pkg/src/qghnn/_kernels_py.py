"""Pure numpy statevector kernels.

Reference implementation of the hot loops; ``_kernels_c`` is a compiled
drop-in with the same signatures. A gate program is four parallel arrays
``(kinds, q0, q1, angles)``, one entry per gate, with these codes:

    0 RX   1 RY   2 RZ   3 CNOT(q0 -> q1)   4 X   5 Y   6 Z

Qubit 0 is the most significant bit of the basis index, so qubit ``q`` of an
``n``-qubit register lives at bit ``n - 1 - q``.

An operator is compiled to ``(flips, diags)``: term group ``f`` maps basis
state ``k`` to ``diags[f, k] * |k ^ flips[f]>``.
"""

from __future__ import annotations

import numpy as np

RX, RY, RZ, CNOT, PX, PY, PZ = range(7)


def _split(amps: np.ndarray, n: int, q: int) -> np.ndarray:
    # view with the target qubit as the middle axis
    return amps.reshape(1 << q, 2, 1 << (n - 1 - q))


def _apply_1q(amps, n, q, m00, m01, m10, m11):
    v = _split(amps, n, q)
    x = v[:, 0, :].copy()
    y = v[:, 1, :]
    v[:, 0, :] = m00 * x + m01 * y
    v[:, 1, :] = m10 * x + m11 * y


def _apply_cnot(amps, n, c, t):
    v = amps.reshape([2] * n)
    sel = [slice(None)] * n
    sel[c] = 1
    # once the control axis is fixed, the target axis index shifts down by one
    sub = v[tuple(sel)]
    axis = t if t < c else t - 1
    sub[...] = np.flip(sub, axis=axis).copy()


def apply_program(amps, n, kinds, q0, q1, angles):
    for kind, a, b, theta in zip(kinds, q0, q1, angles):
        if kind == CNOT:
            _apply_cnot(amps, n, int(a), int(b))
            continue
        v = _split(amps, n, int(a))
        if kind == RZ:
            ph = np.exp(-0.5j * theta)
            v[:, 0, :] *= ph
            v[:, 1, :] *= ph.conjugate()
        elif kind == PZ:
            v[:, 1, :] *= -1.0
        elif kind == RX:
            c, s = np.cos(0.5 * theta), np.sin(0.5 * theta)
            _apply_1q(amps, n, int(a), c, -1j * s, -1j * s, c)
        elif kind == RY:
            c, s = np.cos(0.5 * theta), np.sin(0.5 * theta)
            _apply_1q(amps, n, int(a), c, -s, s, c)
        elif kind == PX:
            v[...] = v[:, ::-1, :].copy()
        elif kind == PY:
            _apply_1q(amps, n, int(a), 0.0, -1j, 1j, 0.0)
        else:
            raise ValueError(f"unknown gate code {kind}")


def expectation(amps, flips, diags):
    idx = np.arange(amps.shape[0])
    acc = 0j
    for flip, diag in zip(flips, diags):
        acc += np.vdot(amps[idx ^ flip], diag * amps)
    return complex(acc)


def program_expectation(psi0, work, n, kinds, q0, q1, angles, flips, diags):
    work[:] = psi0
    apply_program(work, n, kinds, q0, q1, angles)
    return expectation(work, flips, diags)

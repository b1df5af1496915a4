"""Hot loops of the Glauber sampler.

The loops are compiled with numba unless ``QDIMER_NO_JIT`` is set to a
non-empty value other than ``0``, in which case the same functions run as
plain Python over numpy arrays.  Random numbers are always drawn outside
the kernels, so both paths produce identical chains for identical inputs.
"""

from __future__ import annotations

import os

import numpy as np

JIT_DISABLED = os.environ.get("QDIMER_NO_JIT", "") not in ("", "0")

if JIT_DISABLED:
    def njit(*args, **kwargs):
        if len(args) == 1 and callable(args[0]) and not kwargs:
            return args[0]
        return lambda f: f
else:
    from numba import njit

JIT_ENABLED = not JIT_DISABLED


@njit(cache=True)
def face_state(arr, fb, fw, k):
    """-1 low, +1 high, 0 not flippable."""
    b1, b3, b5 = fb[k, 0], fb[k, 1], fb[k, 2]
    w2, w4, w6 = fw[k, 0], fw[k, 1], fw[k, 2]
    if arr[w2] == b1 and arr[w4] == b3 and arr[w6] == b5:
        return -1
    if arr[w2] == b3 and arr[w4] == b5 and arr[w6] == b1:
        return 1
    return 0


@njit(cache=True)
def glauber_steps(arr, fb, fw, faces, us, p_up):
    """Heat-bath updates at the given faces; returns the volume change."""
    dv = 0
    for t in range(faces.shape[0]):
        k = faces[t]
        s = face_state(arr, fb, fw, k)
        if s == -1:
            if us[t] < p_up:
                arr[fw[k, 0]] = fb[k, 1]
                arr[fw[k, 1]] = fb[k, 2]
                arr[fw[k, 2]] = fb[k, 0]
                dv += 1
        elif s == 1:
            if us[t] < 1.0 - p_up:
                arr[fw[k, 0]] = fb[k, 0]
                arr[fw[k, 1]] = fb[k, 1]
                arr[fw[k, 2]] = fb[k, 2]
                dv -= 1
    return dv


@njit(cache=True)
def glauber_record(arr, fb, fw, nbrs, faces, us, p_up, codes):
    """Like :func:`glauber_steps`, storing a base-3 code of the tiling after every step."""
    n = arr.shape[0]
    dv = 0
    for t in range(faces.shape[0]):
        k = faces[t]
        s = face_state(arr, fb, fw, k)
        if s == -1 and us[t] < p_up:
            arr[fw[k, 0]] = fb[k, 1]
            arr[fw[k, 1]] = fb[k, 2]
            arr[fw[k, 2]] = fb[k, 0]
            dv += 1
        elif s == 1 and us[t] < 1.0 - p_up:
            arr[fw[k, 0]] = fb[k, 0]
            arr[fw[k, 1]] = fb[k, 1]
            arr[fw[k, 2]] = fb[k, 2]
            dv -= 1
        code = 0
        for i in range(n - 1, -1, -1):
            j = 0
            while nbrs[i, j] != arr[i]:
                j += 1
            code = code * 3 + j
        codes[t] = code
    return dv


@njit(cache=True)
def accumulate_directions(arr, nbrs, counts):
    """Add one observation of each white's tile orientation to ``counts``."""
    for i in range(arr.shape[0]):
        for j in range(3):
            if nbrs[i, j] == arr[i]:
                counts[i, j] += 1
                break


@njit(cache=True)
def glauber_sweeps_accumulate(arr, fb, fw, nbrs, faces, us, p_up, sweep_len, counts):
    """Run whole sweeps and record orientations after each one; returns sweeps done."""
    done = 0
    for start in range(0, faces.shape[0] - sweep_len + 1, sweep_len):
        glauber_steps(arr, fb, fw, faces[start:start + sweep_len], us[start:start + sweep_len], p_up)
        accumulate_directions(arr, nbrs, counts)
        done += 1
    return done


def encode(arr: np.ndarray, nbrs: np.ndarray) -> int:
    code = 0
    for i in range(arr.shape[0] - 1, -1, -1):
        code = code * 3 + int(np.nonzero(nbrs[i] == arr[i])[0][0])
    return code

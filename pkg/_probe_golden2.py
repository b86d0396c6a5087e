"""Probe: corrected (second-orbital k-reversed) forms of the three one-sided models."""
import numpy as np
from _probe_golden import obc

CASES = {
    "s37c": ({(0,0): [[1.5+1j, 1],[2, -1.5-1j]],
              (1,0): [[3,0],[0,0]], (-1,0): [[0,0],[0,-3]],
              (0,1): [[2.5,0],[0,0]], (0,-1): [[0,0],[0,-2.5]]},
             [2.24+5.05j, -2.24-5.05j]),
    "s39c": ({(0,0): [[1.5, 1],[2, -1.5]],
              (1,0): [[3,0],[0,0]], (-1,0): [[0,0],[0,-3]],
              (0,1): [[2.5,0],[0,0]], (0,-1): [[0,0],[0,-2.5]]},
             [4.36+3.21j, -4.36+3.21j]),
    "s41c": ({(0,0): [[2j, 3],[-1, -4j]],
              (-1,0): [[0,2],[0,0]], (1,0): [[0,0],[2,0]],
              (0,-1): [[0,2.3],[0,0]], (0,1): [[0,0],[2.3,0]]},
             [1.37-3.33j, -1.37-3.33j]),
}

L = (40, 40)
for name, (hop, golden) in CASES.items():
    hop = {k: np.array(v, dtype=complex) for k, v in hop.items()}
    H = obc(hop, 2, L)
    w, V = np.linalg.eig(H)
    msg = []
    for gv in golden:
        i = int(np.argmin(np.abs(w - gv)))
        dist = abs(w[i] - gv)
        # localization: mass-weighted mean coordinate of |psi|^2, per axis
        p = (np.abs(V[:, i].reshape(40, 40, 2)) ** 2).sum(axis=2)
        p /= p.sum()
        cx = (p.sum(axis=1) * np.arange(40)).sum()
        cy = (p.sum(axis=0) * np.arange(40)).sum()
        msg.append(f"|w-({gv})|={dist:.4f} {'OK  ' if dist<0.02 else 'MISS'} centroid=({cx:.1f},{cy:.1f})")
    print(f"{name}: " + " | ".join(msg), flush=True)

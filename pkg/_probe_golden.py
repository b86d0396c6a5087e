"""Throwaway probe: are the figure-quoted OBC eigenvalues reproducible at 40x40?"""
import numpy as np
import time

def obc(hoppings, s, L):
    d = len(L)
    n = s * int(np.prod(L))
    H = np.zeros((n, n), dtype=complex)
    grids = np.meshgrid(*[np.arange(Lm) for Lm in L], indexing="ij")
    coords = np.stack([g.ravel() for g in grids], axis=1)  # (nsites, d) row-major
    for j, t in hoppings.items():
        j = np.array(j)
        tgt = coords + j
        ok = np.all((tgt >= 0) & (tgt < np.array(L)), axis=1)
        src_flat = np.ravel_multi_index(coords[ok].T, L)
        tgt_flat = np.ravel_multi_index(tgt[ok].T, L)
        for a in range(s):
            for b in range(s):
                H[src_flat * s + a, tgt_flat * s + b] = t[a, b]
    return H

MODELS = {}
def add(name, hop, golden):
    MODELS[name] = (hop, golden)

c = 0.5
add("eq16", {(0,0): [[0,c],[c,0]], (1,0): [[2,0],[0,1.5]], (-1,0): [[1,0],[0,3.3]],
             (0,1): [[0,0],[1.8,0]], (0,-1): [[0,2.6],[0,0]]},
    [-1.5-0.195j, -1.5+0.195j])
add("s37", {(0,0): [[1.5+1j, 1],[2, -1.5-1j]], (1,0): [[3,0],[0,-3]], (0,1): [[2.5,0],[0,-2.5]]},
    [2.24+5.05j, -2.24-5.05j])
add("s39", {(0,0): [[1.5, 1],[2, -1.5]], (1,0): [[3,0],[0,-3]], (0,1): [[2.5,0],[0,-2.5]]},
    [4.36+3.21j, -4.36+3.21j])
add("s41", {(0,0): [[2j, 3],[-1, -4j]], (-1,0): [[0,2],[2,0]], (0,-1): [[0,2.3],[2.3,0]]},
    [1.37-3.33j, -1.37-3.33j])
add("s43", {(0,0): [[0, 4.5+1j],[1.5-2j, 0]], (-1,0): [[0,3],[0,0]], (1,0): [[0,0],[2,0]],
            (0,-1): [[0,4],[0,0]], (0,1): [[0,0],[2.3,0]]},
    [-4.87+0.70j, 4.87-0.70j])
add("s45", {(0,0): [[3+2j, 1.5],[-3, 3-2j]], (1,0): [[2,0],[0,3]], (-1,0): [[3,0],[0,2]],
            (0,1): [[0,2.3],[2.3,0]], (0,-1): [[0,2.3],[2.3,0]]},
    [3.19+0.80j, 3.19-0.80j])
for g, golden in [(0.0, [2.29]), (0.1, [2.35+1.68j]), (2.0, [2.65+1j, -8.09])]:
    add(f"s47_g{g}", {(0,0): [[0,g],[g,0]], (1,0): [[1,0],[0,3]], (-1,0): [[3,0],[0,1]],
                      (0,1): [[1,0],[0,2]], (0,-1): [[2,0],[0,1]]}, golden)
for g, golden in [(0.0, [2.53]), (0.1, [1.87+0.64j])]:
    add(f"eq18_g{g}", {(0,): [[0,g],[g,0]], (1,): [[1,0],[0,2]], (-1,): [[2,0],[0,1]]}, golden)

for name, (hop, golden) in MODELS.items():
    hop = {k: np.array(v, dtype=complex) for k, v in hop.items()}
    d = len(next(iter(hop)))
    L = (40,)*d
    t0 = time.time()
    H = obc(hop, 2, L)
    w = np.linalg.eigvals(H)
    dt = time.time() - t0
    msg = []
    for gv in golden:
        dist = np.min(np.abs(w - gv))
        msg.append(f"|w-({gv})|min={dist:.4f} {'OK' if dist<0.02 else 'MISS'}")
    print(f"{name:10s} n={H.shape[0]:5d} {dt:6.1f}s  " + "  ".join(msg), flush=True)

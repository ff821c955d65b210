#!/usr/bin/env python3
"""Independent hand-simulation oracle for a tiny 3-player scenario.

Executes the per-step pipeline directly from the written rules, with no
reference to the C++ implementation. Prints the full trajectory used by
the frozen expectations in test_engine.cpp / acceptance.cpp.
"""

import math

N, M, S, B, C = 3, 1, 1, 9, 1.0
P0_PRICE = 100.0
STEPS = 5

# strategy tables indexed by h + 2 for h in {-2,-1,0,1,2}
players = [
    {"w": 20, "table": [1, 1, 1, 1, -1], "real": None, "virt": None, "gain": 0},
    {"w": 9, "table": [-1, -1, 0, 1, 1], "real": None, "virt": None, "gain": 0},
    {"w": 30, "table": [0, 1, -1, -1, 0], "real": None, "virt": None, "gain": 0},
]

history = [0]  # H(0)
p = P0_PRICE
P = 0

def decide(rec, pos):
    if pos is None:
        if rec == 0:
            return 0, "idle"
        return rec, "open"
    if rec == -pos["dir"]:
        return rec, "close"
    return 0, "hold"

for t in range(1, STEPS + 1):
    idx = history[0] + 2
    acts = []
    for pl in players:
        rec = pl["table"][idx]
        a, tr = decide(rec, pl["real"])
        if tr == "open":
            q = pl["w"] // B
        elif tr == "close":
            q = pl["real"]["q"]
        else:
            q = 0
        acts.append((a, tr, q))

    D = sum(a * q for a, _, q in acts)
    dp = D / N
    p += dp
    if dp > C:
        h = 2
    elif dp > 0:
        h = 1
    elif dp == 0:
        h = 0
    elif dp >= -C:
        h = -1
    else:
        h = -2
    P += h
    history = [h]

    qbuy = sum(q for a, _, q in acts if a == 1)
    qsell = sum(q for a, _, q in acts if a == -1)

    closes = []
    for pl, (a, tr, q) in zip(players, acts):
        # virtual lifecycle of the single strategy (mirrors real, unit qty)
        rec = pl["table"][idx]
        va, vtr = decide(rec, pl["virt"])
        if vtr == "open":
            pl["virt"] = {"dir": rec, "P0": P}
        elif vtr == "close":
            pl["gain"] += pl["virt"]["dir"] * (P - pl["virt"]["P0"])
            pl["virt"] = None
        if tr == "open":
            pl["real"] = {"dir": a, "P0": P, "q": q}
            closes.append(None)
        elif tr == "close":
            dG = pl["real"]["dir"] * (P - pl["real"]["P0"])
            closes.append((dG, pl["real"]["q"]))
            pl["real"] = None
        else:
            closes.append(None)

    for pl, close in zip(players, closes):
        if close is None:
            continue
        dG, q = close
        pl["w"] += dG * q
        assert pl["w"] >= B, "no replacement expected in this scenario"

    print(f"t={t} D={D} dp={dp:.10g} h={h} P={P} p={p:.10g} "
          f"qbuy={qbuy} qsell={qsell} "
          f"w=({players[0]['w']},{players[1]['w']},{players[2]['w']}) "
          f"G=({players[0]['gain']},{players[1]['gain']},{players[2]['gain']})")

"""Search wave-plate angles preparing each target ququart; writes data/setups.json."""
import json
from pathlib import Path

import numpy as np
from scipy.optimize import minimize

from exclusivity.fixtures import ten_vertex_realization
from exclusivity.photonics import (OpticalElement, SetupDescriptor, is_separable,
                                   prepare_state)

SEPARABLE = ["hwp", "qwp", "transfer_pi_to_o2", "hwp", "qwp"]
ENTANGLED = ["hwp", "qwp", "qplate", "qwp", "hwp", "qwp"]


def build(template, angles, label):
    it = iter(angles)
    els = []
    for kind in template:
        if kind in ("hwp", "qwp"):
            els.append(OpticalElement(kind, deg=round(float(next(it)), 12)))
        elif kind == "qplate":
            els.append(OpticalElement("qplate", q=1))
        else:
            els.append(OpticalElement(kind))
    return SetupDescriptor(tuple(els), "H", 0, label=label)


def infidelity(template, target, angles):
    a, _ = prepare_state(build(template, angles, ""))
    return 1.0 - abs(np.vdot(target, a)) ** 2 / np.vdot(target, target).real


def main():
    _, fam = ten_vertex_realization()
    rng = np.random.default_rng(2011)
    out = {}
    for k in sorted(fam.vectors):
        target = np.array([complex(x) for x in fam[k]])
        sep = is_separable(target)
        template = SEPARABLE if sep else ENTANGLED
        nang = sum(t in ("hwp", "qwp") for t in template)
        best = None
        for _ in range(200):
            x0 = rng.uniform(0, 180, nang)
            r = minimize(lambda a: infidelity(template, target, a), x0, method="BFGS",
                         options={"gtol": 1e-14})
            if best is None or r.fun < best.fun:
                best = r
            if best.fun < 1e-14:
                break
        angles = np.mod(best.x, 180.0)
        setup = build(template, angles, f"{'a' if sep else 'b'}: target {k}")
        print(k, "S" if sep else "E", infidelity(template, target, angles))
        out[str(k)] = setup.to_dict()
    path = Path(__file__).resolve().parents[1] / "src/exclusivity/data/setups.json"
    path.write_text(json.dumps({"setups": out}, indent=1) + "\n")


if __name__ == "__main__":
    main()

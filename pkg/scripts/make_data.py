"""Regenerate the bundled example systems and signal traces."""

import random
from pathlib import Path

from sparseinv.sysmodel import dumps, sigma_alpha, signal_to_dict, simulate, system_to_dict

DATA = Path(__file__).resolve().parents[1] / "src" / "sparseinv" / "data"


def e(i, c=1):
    return tuple(c if j == i else 0 for j in range(4))


def main():
    DATA.mkdir(exist_ok=True)
    for alpha in (0, 1):
        (DATA / f"sigma{alpha}.json").write_text(dumps(system_to_dict(sigma_alpha(alpha))))

    rng = random.Random(20241015)
    u = [e(rng.randrange(4), rng.choice([-3, -2, -1, 1, 2, 3])) for _ in range(20)]
    # one trailing zero input so the last real input is visible with delay 1
    y = simulate(sigma_alpha(1), None, u + [(0, 0, 0, 0)], 21)
    (DATA / "sigma1_inputs.json").write_text(dumps(signal_to_dict(u, 4)))
    (DATA / "sigma1_outputs.json").write_text(dumps(signal_to_dict(y, 3)))

    # e1 then +e3, -e3, ... versus -e4 then +e1, -e1, ...: same outputs on alpha = 0
    u0 = [e(0)] + [e(2, 1 if k % 2 else -1) for k in range(1, 8)]
    v0 = [e(3, -1)] + [e(0, 1 if k % 2 else -1) for k in range(1, 8)]
    y0 = simulate(sigma_alpha(0), None, u0, 8)
    assert y0 == simulate(sigma_alpha(0), None, v0, 8)
    (DATA / "sigma0_ambiguous_outputs.json").write_text(dumps(signal_to_dict(y0, 3)))


if __name__ == "__main__":
    main()
